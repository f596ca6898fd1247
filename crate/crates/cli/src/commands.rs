use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use thurston_core::corpus::{self, CORPUS};
use thurston_core::curves::{face_structure, pullback_saturate, Saturation, SaturationBounds};
use thurston_core::format::{canonical_classes, load_curves, load_presentation};
use thurston_core::fuzz::{fuzz_instance, FuzzConfig, FuzzSummary};
use thurston_core::obstruction::{default_tolerance, verify_main_theorem, MainTheoremVerdict};
use thurston_core::report::analyze as analyze_report;
use thurston_core::sphere_group::{canonical_curve_class, CurveClass, Word};
use thurston_core::{CoverPresentation, Error, Family, Multicurve};

pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub result: Value,
}

impl Outcome {
    fn ok(text: String, result: Value) -> Self {
        Self { code: 0, text, result }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    /// Syntax or validation problems with the input.
    Input(String),
    Precondition(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
            Failure::Precondition(_) => "precondition",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unstable(_) | Error::Precondition(_) => Failure::Precondition(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn load(file: &Path) -> Result<(CoverPresentation, Option<Vec<(usize, Word)>>), Failure> {
    let parsed = load_presentation(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    Ok((parsed.presentation, parsed.multicurve))
}

/// Loads a presentation that passes validation and lifts coherently.
fn load_valid(file: &Path) -> Result<(CoverPresentation, Option<Vec<(usize, Word)>>), Failure> {
    let (p, curves) = load(file)?;
    let report = p.validate();
    if !report.is_coherent() {
        return Err(Failure::Input(format!("{}: presentation rejected\n{report}", file.display())));
    }
    Ok((p, curves))
}

fn multicurve(
    p: &CoverPresentation,
    embedded: Option<Vec<(usize, Word)>>,
    file: Option<&Path>,
) -> Result<Multicurve, Failure> {
    let classes = match (file, embedded) {
        (Some(path), _) => load_curves(path, p.marked()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        (None, Some(words)) => canonical_classes(&words, p.marked())?,
        (None, None) => {
            return Err(Failure::Usage("no multicurve: pass --multicurve FILE or add a multicurve block".into()))
        }
    };
    Ok(Multicurve::new(classes)?)
}

fn parse_curve(p: &CoverPresentation, s: &str) -> Result<CurveClass, Failure> {
    let w: Word = s.parse().map_err(|e: Error| Failure::Input(format!("curve {s:?}: {e}")))?;
    Ok(canonical_curve_class(&w, p.marked())?)
}

fn words(classes: impl IntoIterator<Item = impl ToString>) -> Vec<String> {
    classes.into_iter().map(|c| c.to_string()).collect()
}

pub fn validate(file: &Path) -> CmdResult {
    let (p, _) = load(file)?;
    let report = p.validate();
    let mut text = report.to_string();
    let fixed = p.fixed_critical_points();
    let result = if report.passed() {
        let sig = p.orbifold_signature();
        let nu: Vec<String> = sig.nu.iter().map(ToString::to_string).collect();
        let fixed_labels: Vec<Value> =
            fixed.iter().map(|&(j, d)| json!({ "point": p.marked().label(j), "local_degree": d })).collect();
        let _ = writeln!(text, "degree {}, {} marked points", p.degree(), p.n());
        let _ = writeln!(text, "orbifold weights ({}), chi {}, hyperbolic {}", nu.join(", "), sig.chi_orb, sig.is_hyperbolic());
        let _ = writeln!(text, "fixed critical points: {}", fixed.len());
        json!({
            "valid": true,
            "coherent": report.is_coherent(),
            "failures": [],
            "coherence_warnings": report.coherence,
            "degree": p.degree(),
            "marked": p.marked().labels(),
            "fixed_critical_points": fixed_labels,
            "orbifold": { "nu": nu, "chi_orb": sig.chi_orb.to_string(), "hyperbolic": sig.is_hyperbolic() },
        })
    } else {
        json!({
            "valid": false,
            "coherent": false,
            "failures": report.failures,
            "coherence_warnings": report.coherence,
        })
    };
    let code = if report.is_coherent() { 0 } else { 2 };
    Ok(Outcome { code, text, result })
}

pub fn lift(file: &Path, curve: &str) -> CmdResult {
    let (p, _) = load_valid(file)?;
    let c = parse_curve(&p, curve)?;
    let mut text = format!("lifts of {c}:\n");
    let mut rows = Vec::new();
    for l in p.lift_curve(c.word()) {
        let class = match l.kind {
            thurston_core::LiftKind::Essential => Some(l.class(p.marked())?.to_string()),
            _ => None,
        };
        let kind = match l.kind {
            thurston_core::LiftKind::Essential => "essential".to_string(),
            thurston_core::LiftKind::Peripheral(i) => format!("peripheral({})", p.marked().label(i)),
            thurston_core::LiftKind::Trivial => "trivial".to_string(),
        };
        let _ = writeln!(text, "  degree {}  {kind}  [{}]", l.degree, class.as_deref().unwrap_or(&l.word.to_string()));
        rows.push(json!({ "degree": l.degree, "kind": kind, "word": l.word, "class": class, "sheets": l.sheets }));
    }
    Ok(Outcome::ok(text, json!({ "curve": c.to_string(), "lifts": rows })))
}

pub fn faces(file: &Path, curves: Option<&Path>) -> CmdResult {
    let (p, embedded) = load_valid(file)?;
    let g = multicurve(&p, embedded, curves)?;
    let tree = face_structure(&g, p.marked())?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, face) in tree.faces.iter().enumerate() {
        let boundary: Vec<String> = face.boundary.iter().map(|&b| g.members()[b].to_string()).collect();
        let mut row = json!({
            "face": i,
            "marked": p.marked().format_mask(face.marked),
            "boundary": boundary,
            "disk": face.is_disk(),
        });
        let _ = write!(text, "face {i}: points {} boundary [{}]", p.marked().format_mask(face.marked), boundary.join("], ["));
        if face.is_disk() {
            let c = &g.members()[face.boundary[0]];
            let t = p.disk_preimage_topology(c.word(), face.marked)?;
            let _ = write!(
                text,
                "  disk; preimage chi {} with {} component(s), boundary degrees {:?}{}",
                t.total_chi,
                t.component_count,
                t.boundary_degrees(),
                if t.all_disks { "" } else { ", not all disks" }
            );
            row["preimage"] = json!({
                "total_chi": t.total_chi,
                "component_count": t.component_count,
                "all_disks": t.all_disks,
                "boundary_degrees": t.boundary_degrees(),
                "component_boundaries": t.component_boundaries,
            });
        }
        text.push('\n');
        rows.push(row);
    }
    Ok(Outcome::ok(text, json!({ "members": words(g.members()), "faces": rows })))
}

pub fn saturate(file: &Path, seeds: &[String], max_iter: usize, max_size: usize, max_word_len: usize) -> CmdResult {
    let (p, _) = load_valid(file)?;
    let start: BTreeSet<CurveClass> = seeds.iter().map(|s| parse_curve(&p, s)).collect::<Result<_, _>>()?;
    let bounds = SaturationBounds { max_iter, max_size, max_word_len };
    let outcome = pullback_saturate(&p, &start, bounds)?;
    let mut text = String::new();
    let (status, detail) = match &outcome {
        Saturation::Fixed { iterations, .. } => ("fixed", json!({ "iterations": iterations })),
        Saturation::Cycle { sets, .. } => ("cycle", json!({ "period": sets.len() })),
        Saturation::Timeout { trajectory, reason } => ("timeout", json!({ "trajectory": trajectory, "reason": reason })),
    };
    let _ = writeln!(text, "saturation: {status} {detail}");
    let mut result = json!({ "status": status, "detail": detail, "invariant_set": Value::Null, "laminar": Value::Null });
    if let Some(set) = outcome.invariant_set() {
        let laminar = match Multicurve::new(set.iter().cloned()) {
            Ok(_) => true,
            Err(Error::NotLaminar(_)) => false,
            Err(e) => return Err(e.into()),
        };
        let _ = writeln!(text, "invariant set of {} curve(s), laminar {laminar}:", set.len());
        for c in set {
            let _ = writeln!(text, "  {c}");
        }
        result["invariant_set"] = json!(words(set));
        result["laminar"] = json!(laminar);
    }
    Ok(Outcome::ok(text, result))
}

pub fn analyze(file: &Path, curves: Option<&Path>, depth: usize) -> CmdResult {
    let (p, embedded) = load_valid(file)?;
    let g = multicurve(&p, embedded, curves)?;
    let report = analyze_report(&p, &g, depth, &default_tolerance())?;
    let code = if report.is_counterexample() { 4 } else { 0 };
    let result = serde_json::to_value(&report).expect("report serializes");
    Ok(Outcome { code, text: report.to_string(), result })
}

pub fn verify(file: &Path, curves: Option<&Path>) -> CmdResult {
    let (p, embedded) = load_valid(file)?;
    let g = multicurve(&p, embedded, curves)?;
    let verdict = verify_main_theorem(&p, &g, &default_tolerance())?;
    let text = match &verdict {
        MainTheoremVerdict::Confirmed { witness } => {
            format!("confirmed: Levy cycle {}\n", words(&witness.classes).join(" -> "))
        }
        MainTheoremVerdict::CounterexampleFlag { diagnostics } => format!("COUNTEREXAMPLE-FLAG\n{diagnostics}\n"),
    };
    let code = if verdict.is_confirmed() { 0 } else { 4 };
    Ok(Outcome { code, text, result: serde_json::to_value(&verdict).expect("verdict serializes") })
}

pub fn fuzz(count: usize, seed: u64, depth: usize, family: Family) -> CmdResult {
    let mut cfg = FuzzConfig::new(family, seed, count);
    cfg.levy_depth = depth;
    let results: Vec<_> = (0..count as u64).into_par_iter().map(|i| (i, fuzz_instance(&cfg, i))).collect();
    let mut summary = FuzzSummary::default();
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    let mut text = String::new();
    for (i, r) in results {
        match r {
            Ok((_, report)) => {
                summary.add(&report);
                for f in report.findings.iter().filter(|f| f.is_flag()) {
                    let _ = writeln!(text, "instance {i}: {} on {{{}}}", f.verdict, f.members.join(" | "));
                }
                instances.push(report);
            }
            Err(e) => {
                let _ = writeln!(text, "instance {i}: error {e}");
                errors.push(json!({ "index": i, "error": e.to_string() }));
            }
        }
    }
    let _ = writeln!(
        text,
        "{} instances (seed {seed}): {} with an obstruction, {} obstructions confirmed, {} COUNTEREXAMPLE-FLAGs, \
         {} timeouts, {} undecided blocks, {} invariant violations, {} errors",
        summary.instances,
        summary.with_obstruction,
        summary.confirmed,
        summary.counterexample_flags,
        summary.timeouts,
        summary.undecided,
        summary.invariant_violations,
        errors.len()
    );
    let code = if summary.counterexample_flags > 0 {
        4
    } else if !errors.is_empty() || summary.invariant_violations > 0 {
        3
    } else {
        0
    };
    let family_name = match family {
        Family::CubicTwoFixed => "cubic",
        Family::Quadratic => "quadratic",
    };
    let result = json!({
        "seed": seed,
        "family": family_name,
        "count": count,
        "summary": summary,
        "instances": instances,
        "errors": errors,
    });
    Ok(Outcome { code, text, result })
}

fn expected_json(e: &corpus::CorpusEntry) -> Value {
    json!({
        "valid": e.expected.valid,
        "matrix": e.expected.matrix,
        "levy": e.expected.levy,
        "case": e.expected.case.map(|c| c.to_string()),
    })
}

pub fn corpus_list() -> CmdResult {
    let mut text = String::new();
    let mut rows = Vec::new();
    for e in CORPUS {
        let _ = writeln!(text, "{:<30} {}", e.name, if e.curves.is_some() { "with curves" } else { "" });
        rows.push(json!({ "name": e.name, "has_curves": e.curves.is_some(), "expected": expected_json(e) }));
    }
    Ok(Outcome::ok(text, json!({ "entries": rows })))
}

pub fn corpus_run(name: Option<&str>) -> CmdResult {
    let entries: Vec<&corpus::CorpusEntry> = match name {
        Some(n) => vec![corpus::entry(n).ok_or_else(|| Failure::Usage(format!("no corpus entry named {n:?}")))?],
        None => CORPUS.iter().collect(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut failed = 0;
    for e in entries {
        let mismatches = corpus::check_entry(e).unwrap_or_else(|err| vec![err.to_string()]);
        failed += usize::from(!mismatches.is_empty());
        let _ = writeln!(text, "{} {}", if mismatches.is_empty() { "ok  " } else { "FAIL" }, e.name);
        for m in &mismatches {
            let _ = writeln!(text, "     {m}");
        }
        rows.push(json!({ "name": e.name, "passed": mismatches.is_empty(), "mismatches": mismatches }));
    }
    let code = if failed == 0 { 0 } else { 3 };
    Ok(Outcome { code, text, result: json!({ "entries": rows, "failed": failed }) })
}

pub fn corpus_show(name: &str) -> CmdResult {
    let e = corpus::entry(name).ok_or_else(|| Failure::Usage(format!("no corpus entry named {name:?}")))?;
    let mut text = e.cover.to_string();
    if let Some(c) = e.curves {
        let _ = write!(text, "multicurve\n{c}end\n");
    }
    Ok(Outcome::ok(text, json!({ "name": e.name, "cover": e.cover, "curves": e.curves })))
}
