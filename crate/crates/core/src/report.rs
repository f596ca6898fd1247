//! Combined analysis of a presentation and a multicurve, in a form that
//! serializes with stable field names.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cover::CoverPresentation;
use crate::curves::{first_escape, Multicurve};
use crate::error::{Error, Result};
use crate::obstruction::{
    case_analysis, classified_levy_cycles, is_irreducible, leading_eigenvalue_bounds, structural_properties,
    transition_matrix, verify_main_theorem, CaseReport, Decision, LevyClass, ObstructionCase, StructuralReport,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevyEntry {
    pub curves: Vec<String>,
    pub classification: LevyClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Disjointness was checked at the level of side partitions only.
    pub label: String,
    pub members: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub lambda_lower: String,
    pub lambda_upper: String,
    pub decision: Decision,
    pub irreducible: bool,
    pub levy_cycles: Vec<LevyEntry>,
    pub case: Option<CaseReport>,
    pub structural: Option<StructuralReport>,
    pub verdict: Option<String>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn is_counterexample(&self) -> bool {
        self.verdict.as_deref() == Some("COUNTEREXAMPLE-FLAG")
            || self.structural.as_ref().is_some_and(|s| !s.passed())
    }
}

pub fn analyze(p: &CoverPresentation, g: &Multicurve, depth: usize, tol: &BigRational) -> Result<AnalysisReport> {
    if g.is_empty() {
        return Err(Error::precondition("multicurve is empty"));
    }
    if let Some(escape) = first_escape(p, g)? {
        return Err(Error::precondition(format!("multicurve is not stable: lift {escape} escapes")));
    }
    let matrix = transition_matrix(p, g)?;
    let bounds = leading_eigenvalue_bounds(&matrix, tol);
    let irreducible = is_irreducible(&matrix);
    let levy = classified_levy_cycles(p, g, depth)?;
    let mut notes = Vec::new();
    if levy.truncated {
        notes.push("Levy cycle enumeration truncated".into());
    }
    let cubic_two_fixed = p.degree() == 3 && p.fixed_critical_points().len() == 2;
    let obstruction = irreducible && bounds.decision == Decision::AtLeastOne;
    let (mut case, mut structural, mut verdict) = (None, None, None);
    if cubic_two_fixed && obstruction {
        let c = case_analysis(p, g)?;
        if c.flagged() {
            notes.push(format!("several cases apply: {:?}", c.cases));
        }
        if c.applies(ObstructionCase::QuadraticLike) {
            structural = Some(structural_properties(p, g)?);
        }
        case = Some(c);
        verdict = Some(verify_main_theorem(p, g, tol)?.label().to_string());
    } else if !cubic_two_fixed {
        notes.push("case analysis applies only to cubic maps with two fixed critical points".into());
    } else {
        notes.push("not a certified irreducible obstruction".into());
    }
    Ok(AnalysisReport {
        label: "candidate multicurve".into(),
        members: g.members().iter().map(ToString::to_string).collect(),
        matrix: matrix.to_strings(),
        lambda_lower: bounds.lower.to_string(),
        lambda_upper: bounds.upper.to_string(),
        decision: bounds.decision,
        irreducible,
        levy_cycles: levy
            .cycles
            .into_iter()
            .map(|c| LevyEntry { curves: c.classes.iter().map(ToString::to_string).collect(), classification: c.classification })
            .collect(),
        case,
        structural,
        verdict,
        notes,
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} with {} curve(s):", self.label, self.members.len())?;
        for m in &self.members {
            writeln!(f, "  {m}")?;
        }
        writeln!(f, "matrix:")?;
        for row in &self.matrix {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        writeln!(f, "lambda in [{}, {}]  decision {:?}", self.lambda_lower, self.lambda_upper, self.decision)?;
        writeln!(f, "irreducible: {}", self.irreducible)?;
        writeln!(f, "levy cycles: {}", self.levy_cycles.len())?;
        for c in &self.levy_cycles {
            writeln!(f, "  {} ({:?})", c.curves.join(" -> "), c.classification)?;
        }
        if let Some(c) = &self.case {
            let names: Vec<String> = c.cases.iter().map(ToString::to_string).collect();
            writeln!(f, "case: {}", names.join(", "))?;
        }
        if let Some(s) = &self.structural {
            writeln!(f, "structural checks: {}", if s.passed() { "pass" } else { "FAIL" })?;
            for flag in s.flags() {
                writeln!(f, "  {flag}")?;
            }
        }
        if let Some(v) = &self.verdict {
            writeln!(f, "verdict: {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
