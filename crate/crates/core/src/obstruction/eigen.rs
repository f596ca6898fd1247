//! Certified bounds on the spectral radius of a nonnegative rational matrix.
//!
//! For a positive vector `v`, `min (Mv)_i / v_i ≤ ρ(M) ≤ max (Mv)_i / v_i`.
//! Floating point power iteration only proposes the vector; every bound
//! reported here is recomputed exactly from a rational vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::graph::{component_has_cycle, strongly_connected_components};
use super::matrix::TransitionMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    #[serde(rename = "lambda>=1")]
    AtLeastOne,
    #[serde(rename = "lambda<1")]
    BelowOne,
    #[serde(rename = "undecided")]
    Undecided,
}

/// Bounds for one strongly connected diagonal block, with the vector that proves them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCertificate {
    pub indices: Vec<usize>,
    /// Positive vector attaining `lower`.
    pub lower_vector: Vec<BigRational>,
    /// Positive vector attaining `upper`.
    pub vector: Vec<BigRational>,
    pub lower: BigRational,
    pub upper: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueBounds {
    pub lower: BigRational,
    pub upper: BigRational,
    pub decision: Decision,
    pub blocks: Vec<BlockCertificate>,
    /// Largest midpoint over the certified blocks, for display only.
    pub float_estimate: f64,
}

impl EigenvalueBounds {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }
}

/// `10^-9`.
pub fn default_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

const DYADIC_BITS: u32 = 48;
const EXACT_REFINEMENTS: usize = 6;

/// `v` scaled to integers `k`, and per row the integer `s_i` and
/// denominator `q_i` with `(Mv)_i / v_i = s_i / (q_i k_i)`.
fn scaled_products(m: &[Vec<BigRational>], v: &[BigRational]) -> (Vec<BigInt>, Vec<(BigInt, BigInt)>) {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let k: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let rows = m
        .iter()
        .map(|row| {
            let q = row.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
            let mut sum = BigInt::zero();
            for (a, kj) in row.iter().zip(&k) {
                if !a.is_zero() {
                    sum += a.numer() * (&q / a.denom()) * kj;
                }
            }
            (sum, q)
        })
        .collect();
    (k, rows)
}

fn cw_ratios(m: &[Vec<BigRational>], v: &[BigRational]) -> (BigRational, BigRational) {
    let (k, rows) = scaled_products(m, v);
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for ((sum, q), ki) in rows.into_iter().zip(&k) {
        let r = BigRational::new(sum, q * ki);
        if lo.as_ref().map_or(true, |l| r < *l) {
            lo = Some(r.clone());
        }
        if hi.as_ref().map_or(true, |h| r > *h) {
            hi = Some(r);
        }
    }
    (lo.unwrap_or_else(BigRational::zero), hi.unwrap_or_else(BigRational::zero))
}

fn power_vector(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut v = vec![1.0; n];
    for _ in 0..5000 {
        // iterate with M + I so periodic blocks still converge
        let mut w: Vec<f64> = (0..n).map(|i| v[i] + (0..n).map(|j| m[i][j] * v[j]).sum::<f64>()).collect();
        let norm = w.iter().cloned().fold(0.0, f64::max);
        if norm == 0.0 || !norm.is_finite() {
            return vec![1.0; n];
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if delta < 1e-14 {
            break;
        }
    }
    v
}

/// Largest ratio `(Mv)_i / v_i` over the clearly positive coordinates.
fn rayleigh_estimate(m: &[Vec<f64>], v: &[f64]) -> f64 {
    let n = m.len();
    (0..n)
        .filter(|&i| v[i] > 1e-12)
        .map(|i| (0..n).map(|j| m[i][j] * v[j]).sum::<f64>() / v[i])
        .fold(0.0, f64::max)
}

fn rationalize(v: &[f64]) -> Vec<BigRational> {
    let scale = 2f64.powi(DYADIC_BITS as i32);
    let den = BigInt::one() << DYADIC_BITS;
    v.iter()
        .map(|&x| {
            let k = (x * scale).round().max(1.0) as i128;
            BigRational::new(BigInt::from(k), den.clone())
        })
        .collect()
}

/// Exact kernel basis of a rational matrix.
pub fn nullspace(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// A strictly positive eigenvector for eigenvalue 1, if the kernel of `B - I` has one on its line.
fn unit_certificate(b: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let shifted: Vec<Vec<BigRational>> = b
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { x - BigRational::one() } else { x.clone() }).collect())
        .collect();
    let kernel = nullspace(&shifted);
    if kernel.len() != 1 {
        return None;
    }
    let v = &kernel[0];
    let sign = if v[0].is_negative() { -BigRational::one() } else { BigRational::one() };
    let v: Vec<BigRational> = v.iter().map(|x| x * &sign).collect();
    v.iter().all(|x| x.is_positive()).then_some(v)
}

fn block_bounds(m: &TransitionMatrix, idx: &[usize], tol: &BigRational) -> BlockCertificate {
    let sub = m.submatrix(idx);
    let b = sub.entries();
    let f = sub.to_f64();
    let pv = power_vector(&f);
    if (rayleigh_estimate(&f, &pv) - 1.0).abs() < 1e-6 {
        if let Some(v) = unit_certificate(b) {
            return BlockCertificate {
                indices: idx.to_vec(),
                lower_vector: v.clone(),
                vector: v,
                lower: BigRational::one(),
                upper: BigRational::one(),
            };
        }
    }
    let mut v = rationalize(&pv);
    let (mut lo, mut hi) = cw_ratios(b, &v);
    let mut best = (lo.clone(), hi.clone(), v.clone(), v.clone());
    for _ in 0..EXACT_REFINEMENTS {
        if &best.1 - &best.0 <= *tol {
            break;
        }
        // one exact step of (B + I), then renormalize to a dyadic vector
        let (k, rows) = scaled_products(b, &v);
        let w: Vec<f64> = rows
            .iter()
            .zip(&k)
            .map(|((sum, q), ki)| {
                let mv = BigRational::new(sum.clone(), q.clone()).to_f64().unwrap_or(1.0);
                mv + ki.to_f64().unwrap_or(1.0)
            })
            .collect();
        let norm = w.iter().cloned().fold(0.0, f64::max);
        v = rationalize(&w.iter().map(|x| x / norm).collect::<Vec<_>>());
        (lo, hi) = cw_ratios(b, &v);
        if lo > best.0 {
            best.0 = lo.clone();
            best.3 = v.clone();
        }
        if hi < best.1 {
            best.1 = hi.clone();
            best.2 = v.clone();
        }
    }
    BlockCertificate { indices: idx.to_vec(), lower_vector: best.3, vector: best.2, lower: best.0, upper: best.1 }
}

pub fn leading_eigenvalue_bounds(m: &TransitionMatrix, tol: &BigRational) -> EigenvalueBounds {
    let support = m.support();
    let mut blocks = Vec::new();
    let mut lower = BigRational::zero();
    let mut upper = BigRational::zero();
    for comp in strongly_connected_components(&support) {
        if !component_has_cycle(&support, &comp) {
            continue;
        }
        let cert = block_bounds(m, &comp, tol);
        lower = lower.max(cert.lower.clone());
        upper = upper.max(cert.upper.clone());
        blocks.push(cert);
    }
    let one = BigRational::one();
    let decision = if lower >= one {
        Decision::AtLeastOne
    } else if upper < one {
        Decision::BelowOne
    } else {
        Decision::Undecided
    };
    let float_estimate = blocks
        .iter()
        .map(|c| ((&c.lower + &c.upper) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    EigenvalueBounds { lower, upper, decision, blocks, float_estimate }
}
