use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::eigen::{leading_eigenvalue_bounds, Decision, EigenvalueBounds};
use super::is_irreducible;
use super::levy::{find_levy_cycles, LevyCycle};
use super::matrix::{transition_matrix, TransitionMatrix};
use crate::cover::CoverPresentation;
use crate::curves::{face_structure, lift_faces_contained, Multicurve};
use crate::error::{Error, Result};
use crate::sphere_group::CurveClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ObstructionCase {
    NewtonLike,
    QuadraticLike,
    RemovableLevy,
    /// A disk face with non-disk preimage fits neither named case.
    Unmatched,
}

impl fmt::Display for ObstructionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionCase::NewtonLike => "newton-like",
            ObstructionCase::QuadraticLike => "quadratic-like",
            ObstructionCase::RemovableLevy => "removable-levy",
            ObstructionCase::Unmatched => "unmatched",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalFace {
    pub curve: CurveClass,
    pub marked: u64,
    pub case: ObstructionCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    /// Every disk face whose preimage is not a union of disks.
    pub faces: Vec<CriticalFace>,
    /// Distinct cases found, in order.
    pub cases: Vec<ObstructionCase>,
}

impl CaseReport {
    /// The single case, unless several apply.
    pub fn case(&self) -> Option<ObstructionCase> {
        match self.cases.as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    pub fn applies(&self, case: ObstructionCase) -> bool {
        self.cases.contains(&case)
    }

    /// More than one case applies, or an unmatched face appeared.
    pub fn flagged(&self) -> bool {
        self.cases.len() != 1 || self.cases.contains(&ObstructionCase::Unmatched)
    }
}

/// A stable multicurve that passed the obstruction preconditions.
#[derive(Clone, Debug)]
pub struct CertifiedObstruction {
    pub matrix: TransitionMatrix,
    pub bounds: EigenvalueBounds,
}

/// Checks the hypotheses of the cubic case analysis, naming the first that fails.
pub fn certify_cubic_obstruction(p: &CoverPresentation, g: &Multicurve, tol: &BigRational) -> Result<CertifiedObstruction> {
    check_cubic_two_fixed(p)?;
    certify_obstruction(p, g, tol)
}

pub fn check_cubic_two_fixed(p: &CoverPresentation) -> Result<()> {
    if p.degree() != 3 {
        return Err(Error::precondition(format!("map has degree {}, not 3", p.degree())));
    }
    let fixed = p.fixed_critical_points().len();
    if fixed != 2 {
        return Err(Error::precondition(format!("map has {fixed} fixed critical points, not 2")));
    }
    Ok(())
}

/// Stable, irreducible and certified `λ ≥ 1`.
pub fn certify_obstruction(p: &CoverPresentation, g: &Multicurve, tol: &BigRational) -> Result<CertifiedObstruction> {
    if g.is_empty() {
        return Err(Error::precondition("multicurve is empty, so λ is undefined"));
    }
    let matrix = transition_matrix(p, g).map_err(|e| match e {
        Error::Unstable(c) => Error::precondition(format!("not stable: lift {c} escapes")),
        other => other,
    })?;
    if !is_irreducible(&matrix) {
        return Err(Error::precondition("transition matrix is reducible"));
    }
    let bounds = leading_eigenvalue_bounds(&matrix, tol);
    match bounds.decision {
        Decision::AtLeastOne => Ok(CertifiedObstruction { matrix, bounds }),
        Decision::BelowOne => Err(Error::precondition(format!("λ < 1 (upper bound {})", bounds.upper))),
        Decision::Undecided => Err(Error::precondition(format!("λ undecided in [{}, {}]", bounds.lower, bounds.upper))),
    }
}

fn free_critical_values(p: &CoverPresentation) -> u64 {
    let fixed: u64 = p.fixed_critical_points().iter().fold(0, |acc, &(j, _)| acc | 1 << j);
    p.critical_values().into_iter().fold(0, |acc, v| acc | 1 << v) & !fixed
}

/// Scans every disk face of `g` for a non-disk preimage.
pub fn case_analysis(p: &CoverPresentation, g: &Multicurve) -> Result<CaseReport> {
    let tree = face_structure(g, p.marked())?;
    let fixed: u64 = p.fixed_critical_points().iter().fold(0, |acc, &(j, _)| acc | 1 << j);
    let free = free_critical_values(p);
    let critical: u64 = p.critical_values().into_iter().fold(0, |acc, v| acc | 1 << v);
    let mut faces = Vec::new();
    for face in tree.disk_faces() {
        let curve = g.members()[face.boundary[0]].clone();
        let topo = p.disk_preimage_topology(curve.word(), face.marked)?;
        if topo.all_disks {
            continue;
        }
        let case = if face.marked & fixed != 0 {
            ObstructionCase::NewtonLike
        } else if face.marked & critical == free && free.count_ones() == 2 {
            ObstructionCase::QuadraticLike
        } else {
            ObstructionCase::Unmatched
        };
        faces.push(CriticalFace { curve, marked: face.marked, case });
    }
    let mut cases: Vec<ObstructionCase> = faces.iter().map(|f| f.case).collect::<BTreeSet<_>>().into_iter().collect();
    if cases.is_empty() {
        cases.push(ObstructionCase::RemovableLevy);
    }
    Ok(CaseReport { faces, cases })
}

pub fn classify_obstruction_case(p: &CoverPresentation, g: &Multicurve, tol: &BigRational) -> Result<CaseReport> {
    certify_cubic_obstruction(p, g, tol)?;
    case_analysis(p, g)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    /// Members separating the two fixed critical points.
    pub separating: Vec<CurveClass>,
    /// Members whose preimage is not three degree-1 components, with the degrees found.
    pub bad_preimages: Vec<(CurveClass, Vec<usize>)>,
    pub containment: bool,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.separating.is_empty() && self.bad_preimages.is_empty() && self.containment
    }

    pub fn flags(&self) -> Vec<String> {
        let mut out: Vec<String> = self.separating.iter().map(|c| format!("{c} separates the fixed critical points")).collect();
        out.extend(self.bad_preimages.iter().map(|(c, d)| format!("{c} has preimage degrees {d:?}, expected [1, 1, 1]")));
        if !self.containment {
            out.push("a face of the lifted system is not contained in a face of the multicurve".into());
        }
        out
    }
}

/// The three properties every quadratic-like obstruction satisfies. The
/// checks run without the case precondition; `structural_checks` enforces it.
pub fn structural_properties(p: &CoverPresentation, g: &Multicurve) -> Result<StructuralReport> {
    let fixed = p.fixed_critical_points();
    let mut report = StructuralReport { containment: lift_faces_contained(p, g)?, ..Default::default() };
    for c in g.members() {
        if let [(a, _), (b, _)] = fixed.as_slice() {
            if c.partition().separates(*a, *b) {
                report.separating.push(c.clone());
            }
        }
        let mut degrees: Vec<usize> = p.lift_curve(c.word()).iter().map(|l| l.degree).collect();
        degrees.sort_unstable();
        if degrees != [1, 1, 1] {
            report.bad_preimages.push((c.clone(), degrees));
        }
    }
    Ok(report)
}

pub fn structural_checks(p: &CoverPresentation, g: &Multicurve, tol: &BigRational) -> Result<StructuralReport> {
    let cases = classify_obstruction_case(p, g, tol)?;
    if !cases.applies(ObstructionCase::QuadraticLike) {
        return Err(Error::precondition(format!("case is {:?}, not quadratic-like", cases.cases)));
    }
    structural_properties(p, g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING-KEBAB-CASE")]
pub enum MainTheoremVerdict {
    Confirmed { witness: LevyCycle },
    CounterexampleFlag { diagnostics: String },
}

impl MainTheoremVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            MainTheoremVerdict::Confirmed { .. } => "confirmed",
            MainTheoremVerdict::CounterexampleFlag { .. } => "COUNTEREXAMPLE-FLAG",
        }
    }

    pub fn is_confirmed(&self) -> bool {
        matches!(self, MainTheoremVerdict::Confirmed { .. })
    }
}

/// A certified irreducible obstruction of a cubic map with two fixed
/// critical points must contain a Levy cycle.
pub fn verify_main_theorem(p: &CoverPresentation, g: &Multicurve, tol: &BigRational) -> Result<MainTheoremVerdict> {
    let report = p.validate();
    if !report.passed() {
        return Err(Error::precondition(format!("presentation invalid: {report}")));
    }
    let cert = certify_cubic_obstruction(p, g, tol)?;
    let levy = find_levy_cycles(p, g)?;
    Ok(match levy.cycles.into_iter().next() {
        Some(witness) => MainTheoremVerdict::Confirmed { witness },
        None => MainTheoremVerdict::CounterexampleFlag {
            diagnostics: format!(
                "no Levy cycle in stable irreducible multicurve\n{g}matrix:\n{}lambda in [{}, {}]",
                cert.matrix, cert.bounds.lower, cert.bounds.upper
            ),
        },
    })
}
