//! Shipped example presentations with the properties they are known to have.

use crate::cover::CoverPresentation;
use crate::curves::Multicurve;
use crate::error::Result;
use crate::format::{canonical_classes, parse_curve_words, parse_presentation};
use crate::curves::is_stable;
use crate::obstruction::{case_analysis, find_levy_cycles, transition_matrix, transition_matrix_brute_force, ObstructionCase};

#[derive(Clone, Copy, Debug)]
pub struct Expected {
    pub valid: bool,
    /// Transition matrix of the attached curves, entries as strings.
    pub matrix: Option<&'static [&'static [&'static str]]>,
    pub levy: Option<bool>,
    pub case: Option<ObstructionCase>,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub cover: &'static str,
    pub curves: Option<&'static str>,
    pub expected: Expected,
}

impl CorpusEntry {
    pub fn presentation(&self) -> Result<CoverPresentation> {
        Ok(parse_presentation(self.cover)?.presentation)
    }

    pub fn multicurve(&self) -> Result<Option<Multicurve>> {
        let Some(text) = self.curves else { return Ok(None) };
        let p = self.presentation()?;
        let classes = canonical_classes(&parse_curve_words(text)?, p.marked())?;
        Ok(Some(Multicurve::new(classes)?))
    }
}

const NONE: Expected = Expected { valid: true, matrix: None, levy: None, case: None };

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry { name: "z3", cover: include_str!("../corpus/z3.cover"), curves: None, expected: NONE },
    CorpusEntry { name: "basilica", cover: include_str!("../corpus/basilica.cover"), curves: None, expected: NONE },
    CorpusEntry {
        name: "basilica-selfmating",
        cover: include_str!("../corpus/basilica-selfmating.cover"),
        curves: Some(include_str!("../corpus/basilica-selfmating-levy.curves")),
        expected: Expected { valid: true, matrix: Some(&[&["1"]]), levy: Some(true), case: None },
    },
    CorpusEntry {
        name: "basilica-selfmating-equator",
        cover: include_str!("../corpus/basilica-selfmating.cover"),
        curves: Some(include_str!("../corpus/basilica-selfmating-equator.curves")),
        expected: Expected { valid: true, matrix: Some(&[&["1/2"]]), levy: Some(false), case: None },
    },
    CorpusEntry {
        name: "newton-like",
        cover: include_str!("../corpus/newton-like.cover"),
        curves: Some(include_str!("../corpus/newton-like.curves")),
        expected: Expected { valid: true, matrix: None, levy: Some(true), case: Some(ObstructionCase::NewtonLike) },
    },
    CorpusEntry {
        name: "quadratic-like",
        cover: include_str!("../corpus/quadratic-like.cover"),
        curves: Some(include_str!("../corpus/quadratic-like.curves")),
        expected: Expected { valid: true, matrix: None, levy: Some(true), case: Some(ObstructionCase::QuadraticLike) },
    },
    CorpusEntry {
        name: "half-lift",
        cover: include_str!("../corpus/half-lift.cover"),
        curves: Some(include_str!("../corpus/half-lift.curves")),
        expected: Expected { valid: true, matrix: Some(&[&["1/2"]]), levy: Some(false), case: None },
    },
    CorpusEntry {
        name: "newton-half",
        cover: include_str!("../corpus/newton-half.cover"),
        curves: Some(include_str!("../corpus/newton-half.curves")),
        expected: Expected { valid: true, matrix: Some(&[&["1/2"]]), levy: Some(false), case: None },
    },
    CorpusEntry {
        name: "triple-lift",
        cover: include_str!("../corpus/triple-lift.cover"),
        curves: Some(include_str!("../corpus/triple-lift.curves")),
        expected: Expected { valid: true, matrix: Some(&[&["3"]]), levy: Some(true), case: None },
    },
];

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

/// Checks an entry against its expected properties; returns the mismatches.
pub fn check_entry(e: &CorpusEntry) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let p = e.presentation()?;
    let report = p.validate();
    if report.passed() != e.expected.valid {
        out.push(format!("validation passed = {}, expected {}", report.passed(), e.expected.valid));
    }
    let Some(g) = e.multicurve()? else { return Ok(out) };
    if !is_stable(&p, &g)? {
        out.push("attached multicurve is not stable".into());
        return Ok(out);
    }
    let m = transition_matrix(&p, &g)?;
    if m != transition_matrix_brute_force(&p, &g)? {
        out.push("matrix disagrees with brute-force recomputation".into());
    }
    if let Some(expected) = e.expected.matrix {
        let want: Vec<Vec<String>> = expected.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        if m.to_strings() != want {
            out.push(format!("matrix {:?}, expected {want:?}", m.to_strings()));
        }
    }
    if let Some(levy) = e.expected.levy {
        let found = !find_levy_cycles(&p, &g)?.is_empty();
        if found != levy {
            out.push(format!("Levy cycle found = {found}, expected {levy}"));
        }
    }
    if let Some(case) = e.expected.case {
        let got = case_analysis(&p, &g)?;
        if got.case() != Some(case) {
            out.push(format!("cases {:?}, expected {case}", got.cases));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruction::{default_tolerance, leading_eigenvalue_bounds, structural_checks, Decision};

    #[test]
    fn every_entry_matches_its_expectations() {
        for e in CORPUS {
            assert_eq!(check_entry(e).unwrap(), Vec::<String>::new(), "{}", e.name);
            assert!(e.presentation().unwrap().validate().is_coherent(), "{}", e.name);
        }
    }

    #[test]
    fn basilica_orbifold_is_hyperbolic() {
        let p = entry("basilica").unwrap().presentation().unwrap();
        let sig = p.orbifold_signature();
        assert!(sig.nu.iter().all(|w| *w == crate::cover::Weight::Infinite), "{:?}", sig.nu);
        assert_eq!(sig.chi_orb, num_rational::Ratio::from_integer(-1));
        assert!(sig.is_hyperbolic());
    }

    #[test]
    fn selfmating_levy_curve_has_eigenvalue_one() {
        let e = entry("basilica-selfmating").unwrap();
        let (p, g) = (e.presentation().unwrap(), e.multicurve().unwrap().unwrap());
        let levy = find_levy_cycles(&p, &g).unwrap();
        assert_eq!(levy.cycles.len(), 1);
        assert_eq!(levy.cycles[0].members.len(), 1);
        let b = leading_eigenvalue_bounds(&transition_matrix(&p, &g).unwrap(), &default_tolerance());
        assert_eq!(b.decision, Decision::AtLeastOne);
        assert_eq!(b.lower, b.upper);
    }

    #[test]
    fn quadratic_like_passes_structural_checks() {
        let e = entry("quadratic-like").unwrap();
        let (p, g) = (e.presentation().unwrap(), e.multicurve().unwrap().unwrap());
        let s = structural_checks(&p, &g, &default_tolerance()).unwrap();
        assert!(s.passed(), "{:?}", s.flags());
    }

    #[test]
    fn structural_checks_reject_wrong_degree_and_case() {
        let tol = default_tolerance();
        let e = entry("basilica-selfmating").unwrap();
        let (p, g) = (e.presentation().unwrap(), e.multicurve().unwrap().unwrap());
        assert!(matches!(structural_checks(&p, &g, &tol), Err(crate::Error::Precondition(_))));
        let e = entry("newton-like").unwrap();
        let (p, g) = (e.presentation().unwrap(), e.multicurve().unwrap().unwrap());
        assert!(matches!(structural_checks(&p, &g, &tol), Err(crate::Error::Precondition(_))));
    }

    #[test]
    fn separating_curve_trips_the_first_structural_check() {
        let e = entry("newton-like").unwrap();
        let (p, g) = (e.presentation().unwrap(), e.multicurve().unwrap().unwrap());
        let s = crate::obstruction::structural_properties(&p, &g).unwrap();
        assert!(!s.separating.is_empty(), "{s:?}");
        assert!(!s.passed());
    }
}
