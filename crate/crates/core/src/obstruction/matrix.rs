use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cover::{CoverPresentation, LiftKind};
use crate::curves::{essential_lifts, first_escape, Multicurve};
use crate::error::{Error, Result};
use crate::sphere_group::CurveClass;

/// Thurston transition matrix. Entry `(i, j)` sums `1/deg` over lifts of
/// member `j` isotopic to member `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    labels: Vec<CurveClass>,
    entries: Vec<Vec<BigRational>>,
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl TransitionMatrix {
    /// An unlabeled matrix, for eigenvalue and support computations.
    pub fn from_entries(entries: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix is not square"));
        }
        if entries.iter().flatten().any(|x| *x < BigRational::zero()) {
            return Err(Error::invalid("matrix has a negative entry"));
        }
        Ok(Self { labels: Vec::new(), entries })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Result<Self> {
        Self::from_entries(rows.iter().map(|r| r.iter().map(|&(a, b)| ratio(a, b)).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    pub fn labels(&self) -> &[CurveClass] {
        &self.labels
    }

    /// Support pattern: `support[i][j]` iff the entry is positive.
    pub fn support(&self) -> Vec<Vec<bool>> {
        self.entries.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect()
    }

    pub fn submatrix(&self, idx: &[usize]) -> TransitionMatrix {
        TransitionMatrix {
            labels: if self.labels.is_empty() { Vec::new() } else { idx.iter().map(|&i| self.labels[i].clone()).collect() },
            entries: idx.iter().map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect()).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.entries.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect()).collect()
    }

    /// Entries as strings such as `1/2`.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Transition matrix of a stable multicurve.
pub fn transition_matrix(p: &CoverPresentation, g: &Multicurve) -> Result<TransitionMatrix> {
    if let Some(escape) = first_escape(p, g)? {
        return Err(Error::Unstable(escape.to_string()));
    }
    let n = g.len();
    let mut entries = vec![vec![BigRational::zero(); n]; n];
    for (j, lifts) in essential_lifts(p, g.members())?.into_iter().enumerate() {
        for lift in lifts {
            let i = g.index_of(&lift.class).expect("stable multicurve contains its lifts");
            entries[i][j] += ratio(1, lift.degree as i64);
        }
    }
    Ok(TransitionMatrix { labels: g.members().to_vec(), entries })
}

/// Independent recomputation straight from `lift_curve`, comparing words by
/// a linear scan instead of the multicurve index.
pub fn transition_matrix_brute_force(p: &CoverPresentation, g: &Multicurve) -> Result<TransitionMatrix> {
    let members = g.members();
    let n = members.len();
    let mut entries = vec![vec![BigRational::zero(); n]; n];
    for (j, gamma) in members.iter().enumerate() {
        for comp in p.lift_curve(gamma.word()) {
            if comp.kind != LiftKind::Essential {
                continue;
            }
            let class = comp.class(p.marked())?;
            let hits: Vec<usize> = (0..n).filter(|&i| members[i].word() == class.word()).collect();
            match hits.as_slice() {
                [i] => entries[*i][j] += BigRational::one() / BigRational::from_integer(BigInt::from(comp.degree)),
                [] => return Err(Error::Unstable(class.to_string())),
                _ => return Err(Error::invalid("duplicate members")),
            }
        }
    }
    Ok(TransitionMatrix { labels: members.to_vec(), entries })
}
