//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Pass criterion numbers as arguments
//! to run a subset, e.g. `cargo test --test acceptance -- 3 4`.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use thurston_core::braid::BraidAut;
use thurston_core::corpus;
use thurston_core::fuzz::{fuzz_instance, FuzzConfig, FuzzSummary, InstanceReport, ObstructionFinding};
use thurston_core::generate::{generate_one, Family, GeneratorConfig};
use thurston_core::obstruction::graph::is_strongly_connected;
use thurston_core::obstruction::{
    default_tolerance, is_irreducible, leading_eigenvalue_bounds, ratio, transition_matrix,
    structural_checks, Decision, ObstructionCase, TransitionMatrix,
};
use thurston_core::sphere_group::{
    canonical_curve_class, canonical_word, cyclic_reduce, free_conjugate, round_curve_word, winding_vector, MarkedSet,
    SidePartition, Word,
};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    (1, "Riemann-Hurwitz preimage cases", riemann_hurwitz_cases),
    (2, "transition matrix exactness", matrix_exactness),
    (3, "eigenvalue certification at 1", eigenvalue_certification),
    (4, "irreducibility oracle", irreducibility_oracle),
    (5, "cubic two-fixed fuzz", cubic_fuzz),
    (6, "degree-2 obstruction is a Levy cycle", quadratic_cross_validation),
    (7, "quadratic-like structural suite", quadratic_like_structure),
    (8, "word algebra properties", word_algebra),
];

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for &(n, name, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {n}: {name} ({}; {secs:.1}s)", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}

fn within(limit: Duration, start: Instant) -> bool {
    start.elapsed() <= limit
}

fn riemann_hurwitz_cases() -> Outcome {
    let start = Instant::now();
    let cfg = GeneratorConfig { seed: 1, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut instances, mut index) = (0usize, 0u64);
    let mut counts = [0usize; 4]; // (a), (b), (c), single degree-3 disk
    let mut violations = Vec::new();
    while instances < 500 {
        let p = generate_one(Family::CubicTwoFixed, &cfg, index);
        index += 1;
        let n = p.n();
        let perms = p.all_perms();
        if perms.iter().any(|s| !s.is_identity() && s.branching() != 1) {
            continue;
        }
        instances += 1;
        let critical: u64 = p.critical_values().iter().fold(0, |acc, v| acc | 1 << v);
        for side in 1u64..(1 << n) - 1 {
            let size = side.count_ones() as usize;
            let k = (side & critical).count_ones();
            if size < 2 || size > n - 2 || k < 2 {
                continue;
            }
            let twist = BraidAut::random_pure(n, 3, &mut rng);
            for w in [round_curve_word(side, n), twist.apply(&round_curve_word(side, n))] {
                let topo = match p.disk_preimage_topology(&w, side) {
                    Ok(t) => t,
                    Err(e) => {
                        violations.push(format!("instance {index}: {e}"));
                        continue;
                    }
                };
                let got = (topo.component_count, topo.component_boundaries.clone(), topo.boundary_degrees());
                let expected = match (k, topo.all_disks) {
                    (2, true) => {
                        counts[3] += 1;
                        (1, Some(vec![1]), vec![3])
                    }
                    (2, false) => {
                        counts[0] += 1;
                        (2, Some(vec![1, 2]), vec![1, 1, 1])
                    }
                    (3, _) => {
                        counts[1] += 1;
                        (1, Some(vec![2]), vec![1, 2])
                    }
                    _ => {
                        counts[2] += 1;
                        (1, Some(vec![3]), vec![1, 1, 1])
                    }
                };
                if got != expected {
                    violations.push(format!("instance {index}, {k} critical values in {side:#b}: {got:?}"));
                }
            }
        }
    }
    let fast = within(Duration::from_secs(10), start);
    let seen_all = counts[..3].iter().all(|&c| c > 0);
    Outcome::new(
        violations.is_empty() && fast && seen_all,
        format!(
            "{instances} instances; disks (a) {} (b) {} (c) {} single degree-3 disk {}; {} violations{}",
            counts[0],
            counts[1],
            counts[2],
            counts[3],
            violations.len(),
            violations.first().map(|v| format!(", first: {v}")).unwrap_or_default()
        ),
    )
}

fn corpus_matrix(name: &str) -> (thurston_core::CoverPresentation, thurston_core::Multicurve, TransitionMatrix) {
    let e = corpus::entry(name).expect("corpus entry");
    let p = e.presentation().expect("presentation parses");
    let g = e.multicurve().expect("curves parse").expect("entry has curves");
    let m = transition_matrix(&p, &g).expect("stable");
    (p, g, m)
}

/// The half entry excluded in the Newton-like argument: a disk with three
/// critical values whose degree-2 boundary lift is the curve itself.
fn half_entry_shape(p: &thurston_core::CoverPresentation, g: &thurston_core::Multicurve) -> bool {
    let c = &g.members()[0];
    let critical: u64 = p.critical_values().iter().fold(0, |acc, v| acc | 1 << v);
    c.partition().sides().iter().any(|&side| {
        let Ok(t) = p.disk_preimage_topology(c.word(), side) else { return false };
        (side & critical).count_ones() == 3
            && t.boundary_degrees() == [1, 2]
            && t.boundary_lifts.iter().any(|l| l.degree == 2 && l.class(p.marked()).ok().as_ref() == Some(c))
    })
}

fn matrix_exactness() -> Outcome {
    let mut problems = Vec::new();
    let (p, g, half) = corpus_matrix("newton-half");
    if half.entries() != [vec![ratio(1, 2)]] || !half_entry_shape(&p, &g) {
        problems.push(format!("newton-half gave {half}"));
    }
    let (_, _, half) = corpus_matrix("half-lift");
    if half.entries() != [vec![ratio(1, 2)]] {
        problems.push(format!("half-lift gave {half}"));
    }
    let (_, _, equator) = corpus_matrix("basilica-selfmating-equator");
    if equator.entries() != [vec![ratio(1, 2)]] {
        problems.push(format!("equator gave {equator}"));
    }
    let (_, _, levy) = corpus_matrix("basilica-selfmating");
    if levy.entries() != [vec![ratio(1, 1)]] {
        problems.push(format!("Levy curve gave {levy}"));
    }
    let (_, _, triple) = corpus_matrix("triple-lift");
    if triple.entries() != [vec![ratio(3, 1)]] {
        problems.push(format!("triple-lift gave {triple}"));
    }

    // brute-force recomputation on every invariant multicurve of a fuzz run
    let mut compared = 0;
    for family in [Family::CubicTwoFixed, Family::Quadratic] {
        let cfg = FuzzConfig::new(family, 2, 200);
        let reports: Vec<_> = (0..200u64).into_par_iter().map(|i| fuzz_instance(&cfg, i)).collect();
        for r in reports {
            match r {
                Ok((_, r)) => {
                    compared += r.invariant_sets - r.non_laminar_sets;
                    problems.extend(r.invariant_violations.iter().filter(|v| v.contains("matrix")).cloned());
                }
                Err(e) => problems.push(e.to_string()),
            }
        }
    }
    let first = problems.first().map(|v| format!(", first: {v}")).unwrap_or_default();
    Outcome::new(
        problems.is_empty() && compared > 0,
        format!("entries 1/2, 1/2, 1/2, 1, 3 exact; {compared} fuzz matrices matched brute force; {} problems{first}", problems.len()),
    )
}

const ENTRIES: [(i64, i64); 5] = [(0, 1), (1, 3), (1, 2), (1, 1), (2, 1)];

fn det(a: &[Vec<i64>]) -> i64 {
    match a.len() {
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => {
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        }
    }
}

/// `ρ(M) < 1` exactly when every leading principal minor of `I - M` is
/// positive; entries are scaled by 6 to stay integral.
fn below_one_oracle(codes: &[usize]) -> bool {
    let n = (codes.len() as f64).sqrt() as usize;
    let a: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (p, q) = ENTRIES[codes[i * n + j]];
                    i64::from(i == j) * 6 - 6 * p / q
                })
                .collect()
        })
        .collect();
    (1..=n).all(|k| det(&a[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()) > 0)
}

fn eigenvalue_certification() -> Outcome {
    let tol = default_tolerance();
    let check = |n: usize, code: usize| -> (usize, usize, usize) {
        let mut x = code;
        let codes: Vec<usize> = (0..n * n)
            .map(|_| {
                let c = x % 5;
                x /= 5;
                c
            })
            .collect();
        let rows: Vec<Vec<(i64, i64)>> = codes.chunks(n).map(|r| r.iter().map(|&c| ENTRIES[c]).collect()).collect();
        let refs: Vec<&[(i64, i64)]> = rows.iter().map(Vec::as_slice).collect();
        let m = TransitionMatrix::from_ratios(&refs).expect("square");
        let b = leading_eigenvalue_bounds(&m, &tol);
        let below = below_one_oracle(&codes);
        match b.decision {
            Decision::Undecided => (0, 1, 0),
            d => {
                let mismatch = usize::from((d == Decision::BelowOne) != below);
                let wide = usize::from(b.width() > tol);
                (mismatch, 0, wide)
            }
        }
    };
    let mut totals = (0, 0, 0);
    let mut count = 0;
    for n in [2usize, 3] {
        let all = 5usize.pow((n * n) as u32);
        count += all;
        let t = (0..all)
            .into_par_iter()
            .map(|code| check(n, code))
            .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
        totals = (totals.0 + t.0, totals.1 + t.1, totals.2 + t.2);
    }
    let (mismatches, undecided, wide) = totals;
    Outcome::new(
        mismatches == 0 && wide == 0,
        format!("{count} matrices; {mismatches} mismatches; {undecided} undecided; {wide} decided intervals wider than 1e-9"),
    )
}

/// Some power `A^k`, `k ≥ 1`, is positive at every position `(i, j)`.
fn power_oracle(n: usize, bits: u32) -> bool {
    let row = |i: usize| (bits >> (i * n)) & ((1 << n) - 1);
    let a: Vec<u32> = (0..n).map(row).collect();
    let mut power = a.clone();
    let mut reach = a.clone();
    for _ in 1..n {
        power = power
            .iter()
            .map(|&r| (0..n).filter(|&j| r >> j & 1 == 1).fold(0, |acc, j| acc | a[j]))
            .collect();
        for (x, p) in reach.iter_mut().zip(&power) {
            *x |= p;
        }
    }
    reach.iter().all(|&r| r == (1 << n) - 1)
}

fn adjacency(n: usize, bits: u32) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..n).map(|j| bits >> (i * n + j) & 1 == 1).collect()).collect()
}

fn irreducibility_oracle() -> Outcome {
    let mut patterns = 0u64;
    let mut disagreements = Vec::new();
    for n in 1..=5usize {
        let all = 1u64 << (n * n);
        patterns += all;
        let bad: Vec<u32> = (0..all as u32)
            .into_par_iter()
            .filter(|&bits| is_strongly_connected(&adjacency(n, bits)) != power_oracle(n, bits))
            .collect();
        disagreements.extend(bad.into_iter().map(|b| (n, b)));
    }
    // the matrix-level entry point, on real rational matrices
    let mut matrix_checks = 0u64;
    for n in 1..=5usize {
        let step = if n < 5 { 1 } else { 97 };
        for bits in (0..1u32 << (n * n)).step_by(step) {
            let entries = adjacency(n, bits)
                .into_iter()
                .map(|r| r.into_iter().map(|x| if x { ratio(1, 2) } else { BigRational::zero() }).collect())
                .collect();
            let m = TransitionMatrix::from_entries(entries).expect("square");
            matrix_checks += 1;
            if is_irreducible(&m) != power_oracle(n, bits) {
                disagreements.push((n, bits));
            }
        }
    }
    Outcome::new(
        disagreements.is_empty(),
        format!(
            "{patterns} support patterns up to 5x5 exhaustive, {matrix_checks} rational matrices; {} disagreements{}",
            disagreements.len(),
            disagreements.first().map(|d| format!(", first: {d:?}")).unwrap_or_default()
        ),
    )
}

struct FuzzRun {
    reports: Vec<InstanceReport>,
    errors: Vec<String>,
    elapsed: Duration,
}

fn run_fuzz(family: Family, seed: u64, count: usize) -> FuzzRun {
    let start = Instant::now();
    let cfg = FuzzConfig::new(family, seed, count);
    let results: Vec<_> = (0..count as u64).into_par_iter().map(|i| fuzz_instance(&cfg, i)).collect();
    let mut run = FuzzRun { reports: Vec::new(), errors: Vec::new(), elapsed: Duration::ZERO };
    for r in results {
        match r {
            Ok((_, report)) => run.reports.push(report),
            Err(e) => run.errors.push(e.to_string()),
        }
    }
    run.elapsed = start.elapsed();
    run
}

fn cubic_run() -> &'static FuzzRun {
    static RUN: OnceLock<FuzzRun> = OnceLock::new();
    RUN.get_or_init(|| run_fuzz(Family::CubicTwoFixed, 7, 1000))
}

fn cubic_fuzz() -> Outcome {
    let run = cubic_run();
    let mut summary = FuzzSummary::default();
    run.reports.iter().for_each(|r| summary.add(r));
    let empty_levy = run.reports.iter().flat_map(|r| &r.findings).filter(|f| f.levy_cycles.is_empty()).count();
    let timeout_ok = summary.timeouts * 5 <= summary.instances;
    let pass = run.errors.is_empty()
        && summary.instances == 1000
        && summary.counterexample_flags == 0
        && empty_levy == 0
        && summary.invariant_violations == 0
        && timeout_ok
        && run.elapsed <= Duration::from_secs(300);
    Outcome::new(
        pass,
        format!(
            "{} instances, {} certified obstructions, {} confirmed, {} COUNTEREXAMPLE-FLAGs, {} timeouts ({:.1}%), \
             {} undecided blocks, {} invariant violations, {} errors, fuzz {:.1}s",
            summary.instances,
            summary.obstructions,
            summary.confirmed,
            summary.counterexample_flags,
            summary.timeouts,
            100.0 * summary.timeouts as f64 / summary.instances.max(1) as f64,
            summary.undecided,
            summary.invariant_violations,
            run.errors.len(),
            run.elapsed.as_secs_f64()
        ),
    )
}

fn quadratic_cross_validation() -> Outcome {
    let run = run_fuzz(Family::Quadratic, 7, 500);
    let findings: Vec<(u64, &ObstructionFinding)> =
        run.reports.iter().flat_map(|r| r.findings.iter().map(move |f| (r.index, f))).collect();
    let not_cycle: Vec<_> = findings.iter().filter(|(_, f)| !f.spanning_levy_cycle).collect();
    let no_levy = findings.iter().filter(|(_, f)| f.levy_cycles.is_empty()).count();
    let first = not_cycle
        .first()
        .map(|(i, f)| format!(", first: instance {i} with {} curves and {} shorter Levy cycles", f.members.len(), f.levy_cycles.len()))
        .unwrap_or_default();
    Outcome::new(
        run.errors.is_empty() && run.reports.len() == 500 && not_cycle.is_empty(),
        format!(
            "{} instances, {} certified obstructions; {} are not themselves a Levy cycle{first}; \
             {no_levy} contain no Levy cycle; {} errors",
            run.reports.len(),
            findings.len(),
            not_cycle.len(),
            run.errors.len()
        ),
    )
}

fn quadratic_like_structure() -> Outcome {
    let mut checked = 0;
    let mut exact = 0;
    let mut violations = Vec::new();
    for f in cubic_run().reports.iter().flat_map(|r| &r.findings) {
        let Some(case) = &f.case else { continue };
        if !case.applies(ObstructionCase::QuadraticLike) {
            continue;
        }
        checked += 1;
        exact += usize::from(case.case() == Some(ObstructionCase::QuadraticLike));
        match &f.structural {
            Some(s) if s.passed() => {}
            Some(s) => violations.push(s.flags().join("; ")),
            None => violations.push("structural checks missing".into()),
        }
    }
    let e = corpus::entry("quadratic-like").expect("corpus entry");
    let p = e.presentation().expect("parses");
    let g = e.multicurve().expect("parses").expect("curves");
    match structural_checks(&p, &g, &default_tolerance()) {
        Ok(s) if s.passed() => checked += 1,
        Ok(s) => violations.push(format!("corpus: {}", s.flags().join("; "))),
        Err(err) => violations.push(format!("corpus: {err}")),
    }
    Outcome::new(
        violations.is_empty() && checked > 1,
        format!(
            "{checked} quadratic-like obstructions ({exact} with no other case, plus the corpus instance); {} violations{}",
            violations.len(),
            violations.first().map(|v| format!(", first: {v}")).unwrap_or_default()
        ),
    )
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let xs: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank) as i32;
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    Word::from_signed(&xs)
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    examples: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: &str, w: &Word) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 5 {
                self.examples.push(format!("{what} on [{w}]"));
            }
        }
    }
}

fn word_algebra() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tally = Tally::default();
    while tally.checks < 100_000 {
        let n = rng.gen_range(3..=7);
        let m = MarkedSet::standard(n).expect("marked set");
        let (w, h, u) = (random_word(&mut rng, n - 1, 14), random_word(&mut rng, n - 1, 6), random_word(&mut rng, n - 1, 6));
        let r = w.free_reduce();
        tally.record(r.free_reduce() == r && r.is_reduced(), "free reduction idempotent", &w);
        let c = cyclic_reduce(&w);
        tally.record(cyclic_reduce(&c) == c && c.is_cyclically_reduced(), "cyclic reduction idempotent", &w);
        let k = canonical_word(&w);
        tally.record(canonical_word(&k) == k, "canonical form idempotent", &w);
        tally.record(canonical_word(&w.conjugate_by(&h)) == k, "canonical form conjugation invariant", &w);
        tally.record(canonical_word(&w.inverse()) == k, "canonical form inversion invariant", &w);
        tally.record(free_conjugate(&w, &k) || free_conjugate(&w.inverse(), &k), "canonical form in class", &w);
        tally.record(w.mul(&h).mul(&u).free_reduce() == w.mul(&h.mul(&u)).free_reduce(), "associativity", &w);
        tally.record(w.mul(&w.inverse()).free_reduce().is_empty(), "inverse cancels", &w);
        tally.record(winding_vector(&w.conjugate_by(&h), &m) == winding_vector(&w, &m), "winding conjugation invariant", &w);

        // simple curves: braid images of round curves keep their class laws
        let side = rng.gen_range(1..(1u64 << n) - 1);
        if (2..=n - 2).contains(&(side.count_ones() as usize)) {
            let curve = BraidAut::random_pure(n, 2, &mut rng).apply(&round_curve_word(side, n));
            match canonical_curve_class(&curve, &m) {
                Ok(class) => {
                    let expected = SidePartition::from_side(side, n);
                    tally.record(class.partition() == expected, "curve partition preserved", &curve);
                    let conj = canonical_curve_class(&curve.conjugate_by(&h), &m);
                    tally.record(conj.as_ref().ok() == Some(&class), "curve class conjugation invariant", &curve);
                    let inv = canonical_curve_class(&curve.inverse(), &m);
                    tally.record(inv.as_ref().ok() == Some(&class), "curve class orientation invariant", &curve);
                    let again = canonical_curve_class(class.word(), &m);
                    tally.record(again.as_ref().ok() == Some(&class), "curve class idempotent", &curve);
                }
                Err(e) => tally.record(false, &format!("simple curve rejected: {e}"), &curve),
            }
        }
    }
    let secs = start.elapsed();
    Outcome::new(
        tally.failed == 0 && secs <= Duration::from_secs(5),
        format!(
            "{} checks; {} failures{}",
            tally.checks,
            tally.failed,
            tally.examples.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}
