//! Random postcritically finite portraits, realized as coherent presentations
//! and then twisted by random pure braids.
//!
//! Every instance depends only on `(seed, index)`, so streams can be split
//! across threads and still reproduce bit for bit.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::BraidAut;
use crate::cover::CoverPresentation;
use crate::perm::{is_transitive, Perm};
use crate::realize::{realize_with_rng, Portrait};
use crate::sphere_group::MarkedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Number of pure braid generators in the twist applied after realization.
    pub twist_length: usize,
    pub count: usize,
    /// Instances with a longer restriction word are rejected and redrawn.
    pub max_word_len: usize,
    pub min_marked: usize,
    pub max_marked: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { seed: 0, twist_length: 2, count: 1, max_word_len: 64, min_marked: 4, max_marked: 6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Degree 3 with two fixed simple critical points.
    CubicTwoFixed,
    /// Degree 2 with both critical values marked.
    Quadratic,
}

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn transposition<R: Rng>(d: usize, rng: &mut R) -> Perm {
    let a = rng.gen_range(0..d);
    let mut b = rng.gen_range(0..d - 1);
    if b >= a {
        b += 1;
    }
    Perm::from_cycles(d, &[vec![a, b]]).expect("valid transposition")
}

fn three_cycle<R: Rng>(rng: &mut R) -> Perm {
    let mut v = vec![0, 1, 2];
    v.shuffle(rng);
    Perm::from_cycles(3, &[v]).expect("valid 3-cycle")
}

/// Forward orbits of `sources` under `dynamics` cover every point.
fn orbits_cover(dynamics: &[usize], sources: &[usize]) -> bool {
    let n = dynamics.len();
    let mut seen = vec![false; n];
    for &s in sources {
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = dynamics[x];
        }
    }
    seen.into_iter().all(|s| s)
}

/// One attempt at a portrait; `None` when a random choice is inconsistent.
fn try_portrait<R: Rng>(family: Family, n: usize, rng: &mut R) -> Option<Portrait> {
    let d = match family {
        Family::CubicTwoFixed => 3,
        Family::Quadratic => 2,
    };
    let mut perms = vec![Perm::identity(d); n];
    // branch data: which marked points are critical values
    let fixed_critical: Vec<usize> = match family {
        Family::CubicTwoFixed => vec![0, 1],
        Family::Quadratic => Vec::new(),
    };
    let free_values: Vec<usize> = {
        let lo = fixed_critical.len();
        let mut pts: Vec<usize> = (lo..n).collect();
        pts.shuffle(rng);
        let single = family == Family::CubicTwoFixed && rng.gen_bool(0.2);
        pts.truncate(if single { 1 } else { 2 });
        pts
    };
    for &c in &fixed_critical {
        perms[c] = transposition(d, rng);
    }
    if free_values.len() == 1 {
        perms[free_values[0]] = three_cycle(rng);
    } else {
        for &v in &free_values {
            perms[v] = transposition(d, rng);
        }
    }
    let product = perms.iter().fold(Perm::identity(d), |acc, s| acc.compose(s));
    if !product.is_identity() || !is_transitive(d, &perms) {
        return None;
    }

    let mut dynamics: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    for &c in &fixed_critical {
        dynamics[c] = c;
    }
    let values: Vec<usize> = fixed_critical.iter().chain(&free_values).copied().collect();
    if !orbits_cover(&dynamics, &values) {
        return None;
    }

    // assign each marked point a distinct cycle over its image
    let mut used: Vec<Vec<bool>> = perms.iter().map(|s| vec![false; s.cycle_count()]).collect();
    let mut assignment = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| !fixed_critical.contains(&j));
    for j in order {
        let target = dynamics[j];
        let cycles = perms[target].cycles();
        let choices: Vec<usize> = (0..cycles.len())
            .filter(|&c| !used[target][c])
            .filter(|&c| !fixed_critical.contains(&j) || cycles[c].len() == 2)
            .filter(|&c| fixed_critical.contains(&j) || target != j || cycles[c].len() == 1 || family == Family::Quadratic)
            .collect();
        let &c = choices.choose(rng)?;
        used[target][c] = true;
        assignment[j] = cycles[c].clone();
    }
    Some(Portrait { degree: d, marked: MarkedSet::standard(n).ok()?, dynamics, perms, assignment })
}

/// A valid, coherent presentation from `(seed, index)`.
pub fn generate_one(family: Family, cfg: &GeneratorConfig, index: u64) -> CoverPresentation {
    let mut rng = instance_rng(cfg.seed, index);
    loop {
        let n = rng.gen_range(cfg.min_marked..=cfg.max_marked);
        let Some(portrait) = try_portrait(family, n, &mut rng) else { continue };
        let Ok(base) = realize_with_rng(&portrait, &mut rng) else { continue };
        let twist = BraidAut::random_pure(n, cfg.twist_length, &mut rng);
        let p = base.map_restrictions(|w| twist.apply(w));
        if p.stored_restrictions().iter().flatten().any(|w| w.len() > cfg.max_word_len) {
            continue;
        }
        let report = p.validate();
        if report.passed() && report.is_coherent() {
            return p;
        }
    }
}

pub fn generate(family: Family, cfg: &GeneratorConfig) -> Vec<CoverPresentation> {
    (0..cfg.count as u64).map(|i| generate_one(family, cfg, i)).collect()
}

pub fn generate_random_cubic_two_fixed(cfg: &GeneratorConfig) -> Vec<CoverPresentation> {
    generate(Family::CubicTwoFixed, cfg)
}

pub fn generate_random_quadratic(cfg: &GeneratorConfig) -> Vec<CoverPresentation> {
    generate(Family::Quadratic, cfg)
}
