//! Permutations of sheets `0 .. d`. Displayed one-based in cycle notation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Builds from zero-based cycles; unlisted points are fixed.
    pub fn from_cycles(d: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..d).collect();
        let mut seen = vec![false; d];
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= d || seen[x] {
                    return Err(Error::invalid(format!("bad cycle entry {} for degree {d}", x + 1)));
                }
                seen[x] = true;
                images[x] = c[(i + 1) % c.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (k, &x) in self.0.iter().enumerate() {
            inv[x] = k;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &x)| k == x)
    }

    /// All cycles including fixed points, each starting at its least element,
    /// ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut k = self.0[start];
            while k != start {
                seen[k] = true;
                c.push(k);
                k = self.0[k];
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// `d - #cycles`, the Riemann–Hurwitz contribution of one branch value.
    pub fn branching(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    /// Index of the cycle containing `k` in `cycles()` order.
    pub fn cycle_index_of(&self, k: usize) -> usize {
        self.cycles().iter().position(|c| c.contains(&k)).expect("point lies on a cycle")
    }
}

/// Whether the group generated by `gens` is transitive on `0 .. d`.
pub fn is_transitive(d: usize, gens: &[Perm]) -> bool {
    if d == 0 {
        return true;
    }
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(k) = stack.pop() {
        for g in gens {
            let x = g.apply(k);
            if !seen[x] {
                seen[x] = true;
                stack.push(x);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Canonical text for a cycle, e.g. `(1 2)`.
pub fn format_cycle(c: &[usize]) -> String {
    let inner: Vec<String> = c.iter().map(|k| (k + 1).to_string()).collect();
    format!("({})", inner.join(" "))
}

/// Parses `(1 2)(3 4 5)` into zero-based cycles.
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::parse(0, format!("expected '(' in {s:?}")))?;
        let close = body.find(')').ok_or_else(|| Error::parse(0, format!("unclosed cycle in {s:?}")))?;
        let mut c = Vec::new();
        for tok in body[..close].split_whitespace() {
            let k: usize = tok.parse().map_err(|_| Error::parse(0, format!("bad sheet {tok:?}")))?;
            if k == 0 {
                return Err(Error::parse(0, "sheets are one-based"));
            }
            c.push(k - 1);
        }
        if c.is_empty() {
            return Err(Error::parse(0, "empty cycle"));
        }
        out.push(c);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str(&format_cycle(&c))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_first() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // a∘b sends 1 -> 2 -> 2? b(1)=2, a(2)=2
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(a.compose(&b).apply(2), 0);
        assert!(a.compose(&a).is_identity());
    }

    #[test]
    fn cycles_and_branching() {
        let p = Perm::from_cycles(4, &[vec![2, 0, 3]]).unwrap();
        assert_eq!(p.cycles(), vec![vec![0, 3, 2], vec![1]]);
        assert_eq!(p.branching(), 2);
        assert_eq!(p.to_string(), "(1 4 3)");
    }

    #[test]
    fn parse_cycle_text() {
        assert_eq!(parse_cycles("(1 2)(3)").unwrap(), vec![vec![0, 1], vec![2]]);
        assert!(parse_cycles("(0 1)").is_err());
        assert!(parse_cycles("1 2").is_err());
    }

    #[test]
    fn transitivity() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        assert!(is_transitive(3, &[a.clone(), b]));
        assert!(!is_transitive(3, &[a]));
    }
}
