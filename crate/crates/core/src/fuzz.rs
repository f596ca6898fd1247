//! Generate, saturate from standard seeds, and test every certified
//! irreducible obstruction for a Levy cycle.

use std::collections::BTreeSet;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cover::CoverPresentation;
use crate::curves::{is_stable, pullback_saturate, Multicurve, Saturation, SaturationBounds};
use crate::error::{Error, Result};
use crate::generate::{generate_one, Family, GeneratorConfig};
use crate::obstruction::graph::{component_has_cycle, strongly_connected_components};
use crate::obstruction::{
    case_analysis, classify_levy, default_tolerance, find_levy_cycles, is_irreducible, leading_eigenvalue_bounds,
    structural_properties, transition_matrix, transition_matrix_brute_force, verify_main_theorem, CaseReport,
    Decision, LevyClass, LevyCycle, MainTheoremVerdict, ObstructionCase, StructuralReport,
};
use crate::sphere_group::{canonical_curve_class, round_curve_word, CurveClass};

/// Round curves around each pair of marked points, in planar order.
pub fn standard_seeds(p: &CoverPresentation) -> Vec<CurveClass> {
    let n = p.n();
    if n < 4 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let side = (1u64 << a) | (1u64 << b);
            let w = round_curve_word(side, n);
            if let Ok(c) = canonical_curve_class(&w, p.marked()) {
                if c.is_essential() {
                    out.push(c);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionFinding {
    pub members: Vec<String>,
    pub lambda_lower: String,
    pub lambda_upper: String,
    /// The block is stable on its own, so the full case analysis applies.
    pub stable: bool,
    pub levy_cycles: Vec<Vec<String>>,
    /// Classification of each Levy cycle, when a depth was configured.
    pub levy_classes: Vec<LevyClass>,
    /// Some Levy cycle passes through every member of the block.
    pub spanning_levy_cycle: bool,
    pub verdict: String,
    pub case: Option<CaseReport>,
    pub structural: Option<StructuralReport>,
}

impl ObstructionFinding {
    pub fn is_flag(&self) -> bool {
        self.verdict != "confirmed"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub index: u64,
    pub marked: usize,
    pub seeds: usize,
    pub seed_timeouts: usize,
    pub invariant_sets: usize,
    /// Invariant unions over a cycle of sets that fail the laminarity check.
    pub non_laminar_sets: usize,
    /// Blocks with `λ` undecided at tolerance.
    pub undecided: usize,
    pub findings: Vec<ObstructionFinding>,
    /// Violations of internal invariants (matrix recomputation, stability of fixed sets).
    pub invariant_violations: Vec<String>,
}

impl InstanceReport {
    pub fn timed_out(&self) -> bool {
        self.seed_timeouts > 0
    }

    pub fn flags(&self) -> usize {
        self.findings.iter().filter(|f| f.is_flag()).count()
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub family: Family,
    pub generator: GeneratorConfig,
    pub bounds: SaturationBounds,
    pub tolerance: BigRational,
    /// Depth for degenerate/removable classification of Levy cycles; 0 skips it.
    pub levy_depth: usize,
}

impl FuzzConfig {
    pub fn new(family: Family, seed: u64, count: usize) -> Self {
        Self {
            family,
            generator: GeneratorConfig { seed, count, ..Default::default() },
            bounds: SaturationBounds::default(),
            tolerance: default_tolerance(),
            levy_depth: 0,
        }
    }
}

fn words(classes: &[CurveClass]) -> Vec<String> {
    classes.iter().map(ToString::to_string).collect()
}

fn cycle_words(c: &LevyCycle) -> Vec<String> {
    words(&c.classes)
}

/// Analyzes every cyclic block of the matrix of one invariant multicurve.
fn examine_invariant(
    p: &CoverPresentation,
    g: &Multicurve,
    cfg: &FuzzConfig,
    report: &mut InstanceReport,
) -> Result<()> {
    let matrix = transition_matrix(p, g)?;
    if transition_matrix_brute_force(p, g)? != matrix {
        report.invariant_violations.push(format!("matrix recomputation disagrees for\n{g}"));
    }
    let levy = find_levy_cycles(p, g)?;
    let support = matrix.support();
    for block in strongly_connected_components(&support) {
        if !component_has_cycle(&support, &block) {
            continue;
        }
        let sub = matrix.submatrix(&block);
        let bounds = leading_eigenvalue_bounds(&sub, &cfg.tolerance);
        match bounds.decision {
            Decision::BelowOne => continue,
            Decision::Undecided => {
                report.undecided += 1;
                continue;
            }
            Decision::AtLeastOne => {}
        }
        debug_assert!(is_irreducible(&sub));
        let inside: BTreeSet<usize> = block.iter().copied().collect();
        let cycles: Vec<&LevyCycle> = levy.cycles.iter().filter(|c| c.members.iter().all(|m| inside.contains(m))).collect();
        let gb = g.restrict(&block);
        let stable = is_stable(p, &gb)?;
        let mut finding = ObstructionFinding {
            members: words(gb.members()),
            lambda_lower: bounds.lower.to_string(),
            lambda_upper: bounds.upper.to_string(),
            stable,
            levy_cycles: cycles.iter().map(|c| cycle_words(c)).collect(),
            levy_classes: if cfg.levy_depth == 0 {
                Vec::new()
            } else {
                cycles.iter().map(|c| classify_levy(p, c, cfg.levy_depth)).collect::<Result<_>>()?
            },
            spanning_levy_cycle: cycles.iter().any(|c| c.members.len() == block.len()),
            verdict: if cycles.is_empty() { "COUNTEREXAMPLE-FLAG".into() } else { "confirmed".into() },
            case: None,
            structural: None,
        };
        if stable && p.degree() == 3 && p.fixed_critical_points().len() == 2 {
            let verdict = verify_main_theorem(p, &gb, &cfg.tolerance)?;
            if let MainTheoremVerdict::CounterexampleFlag { .. } = verdict {
                finding.verdict = verdict.label().into();
            }
            let case = case_analysis(p, &gb)?;
            if case.applies(ObstructionCase::QuadraticLike) {
                finding.structural = Some(structural_properties(p, &gb)?);
            }
            finding.case = Some(case);
        }
        report.findings.push(finding);
    }
    Ok(())
}

pub fn run_instance(p: &CoverPresentation, index: u64, cfg: &FuzzConfig) -> Result<InstanceReport> {
    let seeds = standard_seeds(p);
    let mut report = InstanceReport {
        index,
        marked: p.n(),
        seeds: seeds.len(),
        seed_timeouts: 0,
        invariant_sets: 0,
        non_laminar_sets: 0,
        undecided: 0,
        findings: Vec::new(),
        invariant_violations: Vec::new(),
    };
    let mut done: BTreeSet<BTreeSet<CurveClass>> = BTreeSet::new();
    for seed in seeds {
        let outcome = pullback_saturate(p, &BTreeSet::from([seed]), cfg.bounds)?;
        if let Saturation::Timeout { .. } = outcome {
            report.seed_timeouts += 1;
            continue;
        }
        let set = outcome.invariant_set().expect("not a timeout").clone();
        if set.is_empty() || !done.insert(set.clone()) {
            continue;
        }
        report.invariant_sets += 1;
        let g = match Multicurve::new(set) {
            Ok(g) => g,
            Err(Error::NotLaminar(_)) => {
                report.non_laminar_sets += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if matches!(outcome, Saturation::Fixed { .. }) && !is_stable(p, &g)? {
            report.invariant_violations.push(format!("fixed set is not stable\n{g}"));
        }
        examine_invariant(p, &g, cfg, &mut report)?;
    }
    Ok(report)
}

pub fn fuzz_instance(cfg: &FuzzConfig, index: u64) -> Result<(CoverPresentation, InstanceReport)> {
    let p = generate_one(cfg.family, &cfg.generator, index);
    let r = run_instance(&p, index, cfg)?;
    Ok((p, r))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub instances: usize,
    pub timeouts: usize,
    pub with_obstruction: usize,
    pub obstructions: usize,
    pub confirmed: usize,
    pub counterexample_flags: usize,
    pub undecided: usize,
    pub invariant_violations: usize,
}

impl FuzzSummary {
    pub fn add(&mut self, r: &InstanceReport) {
        self.instances += 1;
        self.timeouts += usize::from(r.timed_out());
        self.with_obstruction += usize::from(!r.findings.is_empty());
        self.obstructions += r.findings.len();
        self.counterexample_flags += r.flags();
        self.confirmed += r.findings.len() - r.flags();
        self.undecided += r.undecided;
        self.invariant_violations += r.invariant_violations.len();
    }
}
