//! Branched self-covers of the sphere given by monodromy plus restriction words.
//!
//! Sheet `k` over the base point is joined to sheet `sigma_i(k)` by the lift
//! of `g_i` started at `k`; `restriction(i, k)` is that lift read back in the
//! base group through the fixed identification of the cover with the base.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{format_cycle, is_transitive, Perm};
use crate::sphere_group::{
    canonical_curve_class, cyclic_reduce, free_conjugate, peripheral_class_of, side_partition, CurveClass,
    MarkedSet, Word,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPresentation {
    degree: usize,
    marked: MarkedSet,
    dynamics: Vec<usize>,
    perms: Vec<Perm>,
    restrictions: Vec<Vec<Word>>,
    assignment: Vec<Vec<usize>>,
}

impl CoverPresentation {
    /// Assembles a presentation, checking only shapes and index ranges.
    ///
    /// * `perms`: sigma for `p1 .. p(n-1)`; the last one is derived.
    /// * `restrictions[i][k]`: restriction word of `g(i+1)` at sheet `k`.
    /// * `assignment[j]`: the cycle of `sigma_{dynamics[j]}` standing for `p_j`.
    pub fn new(
        degree: usize,
        marked: MarkedSet,
        dynamics: Vec<usize>,
        perms: Vec<Perm>,
        restrictions: Vec<Vec<Word>>,
        assignment: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = marked.len();
        if degree < 2 {
            return Err(Error::invalid("degree must be at least 2"));
        }
        if dynamics.len() != n || dynamics.iter().any(|&x| x >= n) {
            return Err(Error::invalid("dynamics must map every marked point to a marked point"));
        }
        if perms.len() != n - 1 || perms.iter().any(|p| p.degree() != degree) {
            return Err(Error::invalid(format!("need {} permutations of degree {degree}", n - 1)));
        }
        if restrictions.len() != n - 1 || restrictions.iter().any(|r| r.len() != degree) {
            return Err(Error::invalid(format!("need {degree} restriction words for each of {} generators", n - 1)));
        }
        if let Some(w) = restrictions.iter().flatten().find(|w| w.max_generator() >= n) {
            return Err(Error::invalid(format!("restriction {w} uses a generator beyond g{}", n - 1)));
        }
        if assignment.len() != n {
            return Err(Error::invalid("every marked point needs an assigned cycle"));
        }
        if assignment.iter().any(|c| c.is_empty() || c.iter().any(|&k| k >= degree)) {
            return Err(Error::invalid("assigned cycles must be nonempty sets of sheets"));
        }
        let restrictions = restrictions
            .into_iter()
            .map(|row| row.into_iter().map(|w| w.free_reduce()).collect())
            .collect();
        Ok(Self { degree, marked, dynamics, perms, restrictions, assignment })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn marked(&self) -> &MarkedSet {
        &self.marked
    }

    pub fn n(&self) -> usize {
        self.marked.len()
    }

    /// `delta(j)`, the image of marked point `j`.
    pub fn image(&self, j: usize) -> usize {
        self.dynamics[j]
    }

    pub fn dynamics(&self) -> &[usize] {
        &self.dynamics
    }

    pub fn stored_perms(&self) -> &[Perm] {
        &self.perms
    }

    /// Monodromy around marked point `i`; the last one is derived from the sphere relation.
    pub fn perm(&self, i: usize) -> Perm {
        if i + 1 < self.n() {
            self.perms[i].clone()
        } else {
            let prod = self.perms.iter().fold(Perm::identity(self.degree), |acc, p| acc.compose(p));
            prod.inverse()
        }
    }

    pub fn all_perms(&self) -> Vec<Perm> {
        (0..self.n()).map(|i| self.perm(i)).collect()
    }

    pub fn restriction(&self, i: usize, k: usize) -> Word {
        if i + 1 < self.n() {
            self.restrictions[i][k].clone()
        } else {
            self.wreath_apply(&Word::peripheral(i, self.n())).words[k].clone()
        }
    }

    pub fn stored_restrictions(&self) -> &[Vec<Word>] {
        &self.restrictions
    }

    pub fn assignment(&self, j: usize) -> &[usize] {
        &self.assignment[j]
    }

    /// Local degree at marked point `j`.
    pub fn local_degree(&self, j: usize) -> usize {
        self.assignment[j].len()
    }

    /// Marked points over which the cover branches.
    pub fn critical_values(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.perm(i).is_identity()).collect()
    }

    /// Forward orbits of the critical values.
    pub fn postcritical_mask(&self) -> u64 {
        let mut mask = 0u64;
        let mut stack = self.critical_values();
        while let Some(i) = stack.pop() {
            if mask >> i & 1 == 0 {
                mask |= 1 << i;
                stack.push(self.dynamics[i]);
            }
        }
        mask
    }

    /// Returns a copy whose restriction words are rewritten by `f`.
    pub fn map_restrictions(&self, f: impl Fn(&Word) -> Word) -> Self {
        let mut out = self.clone();
        for row in &mut out.restrictions {
            for w in row {
                *w = f(w).free_reduce();
            }
        }
        out
    }

    /// Multiplicative extension of the generator data to `w`.
    pub fn wreath_apply(&self, w: &Word) -> Wreath {
        let d = self.degree;
        let n = self.n();
        let mut perm = Perm::identity(d);
        let mut words = vec![Word::identity(); d];
        let last_is_stored = |i: usize| i + 1 < n;
        for l in w.letters().iter().rev() {
            let i = l.index() - 1;
            assert!(last_is_stored(i), "generator g{} is out of range", i + 1);
            let sigma = &self.perms[i];
            let (step, step_word): (Perm, Box<dyn Fn(usize) -> Word>) = if l.inverse {
                let inv = sigma.inverse();
                let inv2 = inv.clone();
                (inv, Box::new(move |k| self.restrictions[i][inv2.apply(k)].inverse()))
            } else {
                (sigma.clone(), Box::new(|k| self.restrictions[i][k].clone()))
            };
            for (k, wk) in words.iter_mut().enumerate() {
                *wk = step_word(perm.apply(k)).mul(wk);
            }
            perm = step.compose(&perm);
        }
        Wreath { perm, words }
    }

    /// Preimage components of the closed curve `w`, one per cycle of its monodromy.
    ///
    /// The component word along cycle `(k, π k, …)` is `W[π^{m-1} k] ⋯ W[π k] W[k]`.
    pub fn lift_curve(&self, w: &Word) -> Vec<LiftComponent> {
        let wr = self.wreath_apply(w);
        wr.perm
            .cycles()
            .into_iter()
            .map(|cycle| {
                let mut acc = Word::identity();
                for &k in &cycle {
                    acc = wr.words[k].mul(&acc);
                }
                let word = cyclic_reduce(&acc);
                let kind = if word.is_empty() {
                    LiftKind::Trivial
                } else if let Some(p) = peripheral_class_of(&word, &self.marked) {
                    LiftKind::Peripheral(p)
                } else {
                    LiftKind::Essential
                };
                LiftComponent { word, degree: cycle.len(), sheets: cycle, kind }
            })
            .collect()
    }

    /// Topology of the preimage of the disk bounded by `boundary` on the side
    /// holding the marked points in `side`.
    pub fn disk_preimage_topology(&self, boundary: &Word, side: u64) -> Result<PreimageTopology> {
        let n = self.n();
        let full = self.marked.full_mask();
        if side & !full != 0 {
            return Err(Error::invalid("side mask names unknown marked points"));
        }
        if side != 0 && side != full {
            let part = side_partition(boundary, &self.marked)?;
            if !part.sides().contains(&side) {
                return Err(Error::precondition(format!(
                    "{} is not a side of curve {boundary}",
                    self.marked.format_mask(side)
                )));
            }
        } else if side == full {
            return Err(Error::precondition("a disk cannot contain every marked point"));
        }
        let d = self.degree as i64;
        let count = side.count_ones() as i64;
        let cycles_inside: i64 = (0..n).filter(|i| side >> i & 1 == 1).map(|i| self.perm(i).cycle_count() as i64).sum();
        let total_chi = d * (1 - count) + cycles_inside;
        let boundary_lifts = self.lift_curve(boundary);
        let b = boundary_lifts.len() as i64;
        if (total_chi + b) % 2 != 0 || total_chi + b <= 0 || total_chi > b {
            return Err(Error::invalid(format!(
                "inconsistent preimage arithmetic (chi {total_chi}, {b} boundary curves)"
            )));
        }
        let component_count = ((total_chi + b) / 2) as usize;
        let b = b as usize;
        let component_boundaries = if component_count == 1 {
            Some(vec![b])
        } else if b - component_count <= 1 {
            let mut v = vec![1; component_count];
            if b > component_count {
                v[0] = 2;
            }
            v.sort_unstable();
            Some(v)
        } else {
            None
        };
        Ok(PreimageTopology {
            boundary_lifts,
            total_chi,
            component_count,
            all_disks: total_chi == b as i64,
            component_boundaries,
        })
    }

    /// Marked points that are fixed critical points, with their local degrees.
    pub fn fixed_critical_points(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .filter(|&j| self.dynamics[j] == j && self.local_degree(j) >= 2)
            .map(|j| (j, self.local_degree(j)))
            .collect()
    }

    pub fn orbifold_signature(&self) -> OrbifoldSignature {
        let n = self.n();
        // A periodic cycle through a critical point forces infinite weight.
        let mut infinite = vec![false; n];
        for start in 0..n {
            let mut x = self.dynamics[start];
            let mut critical = self.local_degree(start) > 1;
            let mut steps = 0;
            while x != start && steps <= n {
                critical |= self.local_degree(x) > 1;
                x = self.dynamics[x];
                steps += 1;
            }
            if x == start && critical {
                infinite[start] = true;
            }
        }
        let mut nu: Vec<u64> = vec![1; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                if infinite[i] {
                    continue;
                }
                let sigma = self.perm(i);
                let mut v = nu[i];
                for c in sigma.cycles() {
                    let owner = (0..n).find(|&j| self.dynamics[j] == i && same_cycle(&self.assignment[j], &c));
                    match owner {
                        Some(j) if infinite[j] => {
                            infinite[i] = true;
                        }
                        Some(j) => v = v.lcm(&(c.len() as u64 * nu[j])),
                        None => v = v.lcm(&(c.len() as u64)),
                    }
                }
                if infinite[i] {
                    changed = true;
                } else if v != nu[i] {
                    nu[i] = v;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let nu: Vec<Weight> =
            (0..n).map(|i| if infinite[i] { Weight::Infinite } else { Weight::Finite(nu[i]) }).collect();
        let mut chi = Ratio::from_integer(2i64);
        for w in &nu {
            chi -= Ratio::from_integer(1) - w.reciprocal();
        }
        OrbifoldSignature { nu, chi_orb: chi }
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(ValidationOptions::default())
    }

    pub fn validate_with(&self, opts: ValidationOptions) -> ValidationReport {
        let mut failures = Vec::new();
        let d = self.degree;
        let n = self.n();
        let perms = self.all_perms();

        let branching: usize = perms.iter().map(Perm::branching).sum();
        if branching != 2 * d - 2 {
            failures.push(ValidationFailure::new(
                Invariant::RiemannHurwitz,
                format!("total branching {branching} != 2d-2 = {}", 2 * d - 2),
            ));
        }
        if !is_transitive(d, &perms) {
            failures.push(ValidationFailure::new(Invariant::Transitive, "monodromy group is not transitive"));
        }

        let mut used: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for j in 0..n {
            let target = self.dynamics[j];
            let cyc = &self.assignment[j];
            let found = perms[target].cycles().into_iter().find(|c| same_cycle(c, cyc));
            match found {
                None => failures.push(ValidationFailure::new(
                    Invariant::Assignment,
                    format!(
                        "{} is assigned {} which is not a cycle of sigma({})",
                        self.marked.label(j),
                        format_cycle(cyc),
                        self.marked.label(target)
                    ),
                )),
                Some(c) => {
                    let mut key = c.clone();
                    key.sort_unstable();
                    if !used.insert((target, key)) {
                        failures.push(ValidationFailure::new(
                            Invariant::Assignment,
                            format!("cycle {} of sigma({}) is assigned twice", format_cycle(&c), self.marked.label(target)),
                        ));
                    }
                }
            }
        }

        let pc = self.postcritical_mask();
        for j in 0..n {
            if pc >> j & 1 == 0 {
                let allowed = opts.allow_fixed_nonpostcritical && self.dynamics[j] == j;
                if !allowed {
                    failures.push(ValidationFailure::new(
                        Invariant::Postcritical,
                        format!("{} is not in the postcritical set", self.marked.label(j)),
                    ));
                }
            }
        }

        let coherence = if failures.iter().any(|f| f.invariant == Invariant::Assignment) {
            Vec::new()
        } else {
            self.coherence_warnings()
        };
        ValidationReport { failures, coherence }
    }

    /// Checks that every loop around a marked point lifts to loops around its
    /// preimages: around `p_j` on the cycle assigned to `p_j`, trivial elsewhere.
    pub fn coherence_warnings(&self) -> Vec<String> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            let loop_word = Word::peripheral(i, n);
            for comp in self.lift_curve(&loop_word) {
                let owner = (0..n).find(|&j| self.dynamics[j] == i && same_cycle(&self.assignment[j], &comp.sheets));
                match owner {
                    Some(j) => {
                        if !free_conjugate(&comp.word, &Word::peripheral(j, n)) {
                            out.push(format!(
                                "lift of the loop around {} at {} is {} rather than a loop around {}",
                                self.marked.label(i),
                                format_cycle(&comp.sheets),
                                comp.word,
                                self.marked.label(j)
                            ));
                        }
                    }
                    None => {
                        if !comp.word.is_empty() {
                            out.push(format!(
                                "lift of the loop around {} at unmarked {} is {} rather than trivial",
                                self.marked.label(i),
                                format_cycle(&comp.sheets),
                                comp.word
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Compares cycles as cyclic sequences.
pub(crate) fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    match b.iter().position(|&x| x == a[0]) {
        None => false,
        Some(off) => (0..a.len()).all(|t| a[t] == b[(off + t) % b.len()]),
    }
}

/// Result of extending the generator data to a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wreath {
    pub perm: Perm,
    pub words: Vec<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LiftKind {
    Essential,
    Peripheral(usize),
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftComponent {
    /// Cyclically reduced but not canonicalized.
    pub word: Word,
    pub degree: usize,
    pub sheets: Vec<usize>,
    pub kind: LiftKind,
}

impl LiftComponent {
    pub fn class(&self, m: &MarkedSet) -> Result<CurveClass> {
        canonical_curve_class(&self.word, m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageTopology {
    pub boundary_lifts: Vec<LiftComponent>,
    pub total_chi: i64,
    pub component_count: usize,
    pub all_disks: bool,
    /// Sorted boundary counts per component, when the Euler arithmetic forces them.
    pub component_boundaries: Option<Vec<usize>>,
}

impl PreimageTopology {
    pub fn boundary_degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.boundary_lifts.iter().map(|c| c.degree).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    fn reciprocal(self) -> Ratio<i64> {
        match self {
            Weight::Finite(v) => Ratio::new(1, v as i64),
            Weight::Infinite => Ratio::from_integer(0),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(v) => write!(f, "{v}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldSignature {
    pub nu: Vec<Weight>,
    pub chi_orb: Ratio<i64>,
}

impl OrbifoldSignature {
    pub fn is_hyperbolic(&self) -> bool {
        self.chi_orb < Ratio::from_integer(0)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ValidationOptions {
    pub allow_fixed_nonpostcritical: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Invariant {
    RiemannHurwitz,
    Transitive,
    Assignment,
    Postcritical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFailure {
    pub invariant: Invariant,
    pub detail: String,
}

impl ValidationFailure {
    fn new(invariant: Invariant, detail: impl Into<String>) -> Self {
        Self { invariant, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
    /// Lifting inconsistencies of the restriction words. These do not fail
    /// validation, but curve lifting is only meaningful without them.
    pub coherence: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn is_coherent(&self) -> bool {
        self.passed() && self.coherence.is_empty()
    }

    pub fn fails(&self, inv: Invariant) -> bool {
        self.failures.iter().any(|f| f.invariant == inv)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "validation: pass")?;
        } else {
            writeln!(f, "validation: FAIL")?;
            for fail in &self.failures {
                writeln!(f, "  {:?}: {}", fail.invariant, fail.detail)?;
            }
        }
        for c in &self.coherence {
            writeln!(f, "  coherence warning: {c}")?;
        }
        Ok(())
    }
}
