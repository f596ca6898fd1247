//! Braid automorphisms of the punctured-sphere group.
//!
//! Precomposing a cover with a homeomorphism that fixes the marked points
//! rewrites every restriction word through the induced automorphism, which
//! keeps the presentation coherent while changing the map's isotopy class.

use rand::Rng;

use crate::sphere_group::Word;

/// An automorphism given by the images of `g1 .. g(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidAut {
    n: usize,
    images: Vec<Word>,
}

impl BraidAut {
    pub fn identity(n: usize) -> Self {
        Self { n, images: (1..n).map(Word::generator).collect() }
    }

    fn basis_word(&self, idx: usize) -> Word {
        Word::peripheral(idx, self.n)
    }

    /// Half twist exchanging marked points `t` and `t+1` (zero-based).
    pub fn artin(n: usize, t: usize, inverse: bool) -> Self {
        assert!(t + 1 < n, "half twist index out of range");
        let id = Self::identity(n);
        let x = id.basis_word(t);
        let y = id.basis_word(t + 1);
        let (img_t, img_next) = if inverse { (y.clone(), x.conjugate_by(&y.inverse())) } else { (y.conjugate_by(&x), x) };
        let mut images = id.images.clone();
        images[t] = img_t;
        if t + 1 < n - 1 {
            images[t + 1] = img_next;
        }
        Self { n, images }
    }

    /// Full twist of points `i < j` around each other, a pure braid generator.
    pub fn pure_generator(n: usize, i: usize, j: usize, inverse: bool) -> Self {
        assert!(i < j && j < n);
        let mut seq: Vec<(usize, bool)> = Vec::new();
        for t in (i + 1..j).rev() {
            seq.push((t, false));
        }
        seq.push((i, inverse));
        seq.push((i, inverse));
        for t in i + 1..j {
            seq.push((t, true));
        }
        seq.into_iter().fold(Self::identity(n), |acc, (t, inv)| acc.then(&Self::artin(n, t, inv)))
    }

    /// Random product of `len` pure braid generators.
    pub fn random_pure<R: Rng>(n: usize, len: usize, rng: &mut R) -> Self {
        let mut acc = Self::identity(n);
        if n < 3 {
            return acc;
        }
        for _ in 0..len {
            let i = rng.gen_range(0..n - 1);
            let j = rng.gen_range(i + 1..n);
            acc = acc.then(&Self::pure_generator(n, i, j, rng.gen_bool(0.5)));
        }
        acc
    }

    /// `self` followed by `other`: `w ↦ other(self(w))`.
    pub fn then(&self, other: &BraidAut) -> BraidAut {
        BraidAut { n: self.n, images: self.images.iter().map(|w| other.apply(w)).collect() }
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.images[g - 1].clone())
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }
}
