//! Word algebra in the fundamental group of an n-punctured sphere.
//!
//! The group is free on `g1 .. g(n-1)`; the loop around the last marked point
//! is the derived word `(g1 g2 ... g(n-1))^-1`, so that `g1 g2 ... gn = 1`.
//! Words are read as function composition: in `u v` the loop `v` is
//! traversed first.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard limit on marked points so that side partitions fit in a bitmask.
pub const MAX_MARKED: usize = 64;

/// The ordered set of marked points `p1 .. pn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedSet {
    labels: Vec<String>,
}

impl MarkedSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::invalid("a marked set needs at least two points"));
        }
        if labels.len() > MAX_MARKED {
            return Err(Error::invalid(format!("at most {MAX_MARKED} marked points are supported")));
        }
        for (i, a) in labels.iter().enumerate() {
            if a.is_empty() || a.chars().any(char::is_whitespace) {
                return Err(Error::invalid(format!("bad marked-point label {a:?}")));
            }
            if labels[..i].contains(a) {
                return Err(Error::invalid(format!("duplicate marked-point label {a}")));
            }
        }
        Ok(Self { labels })
    }

    /// Points labelled `p1 .. pn`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("p{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of free generators, `n - 1`.
    pub fn rank(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Bitmask with every marked point set.
    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn format_mask(&self, mask: u64) -> String {
        let names: Vec<&str> = (0..self.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.label(i))
            .collect();
        format!("{{{}}}", names.join(","))
    }
}

/// A generator `g_i` or its inverse. `gen` is one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u16,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        assert!(gen >= 1 && gen <= u16::MAX as usize, "generator index out of range");
        Self { gen: gen as u16, inverse }
    }

    pub fn gen(gen: usize) -> Self {
        Self::new(gen, false)
    }

    pub fn inv(self) -> Self {
        Self { gen: self.gen, inverse: !self.inverse }
    }

    pub fn index(self) -> usize {
        self.gen as usize
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "G{}", self.gen)
        } else {
            write!(f, "g{}", self.gen)
        }
    }
}

/// A word in the free generators. Not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Letter>);

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Word> {
        s.parse()
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed one-based indices, `-i` meaning `g_i^-1`.
    pub fn from_signed(xs: &[i32]) -> Self {
        Word(
            xs.iter()
                .map(|&x| {
                    assert!(x != 0, "zero is not a generator");
                    Letter::new(x.unsigned_abs() as usize, x < 0)
                })
                .collect(),
        )
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![Letter::gen(i)])
    }

    /// The loop around marked point `idx` (zero-based) in a set of `n` points.
    pub fn peripheral(idx: usize, n: usize) -> Self {
        if idx + 1 < n {
            Word::generator(idx + 1)
        } else {
            Word((1..n).map(Letter::gen).collect()).inverse()
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Concatenation followed by free reduction at the seam.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn pow(&self, k: usize) -> Word {
        (0..k).fold(Word::identity(), |acc, _| acc.mul(self))
    }

    pub fn conjugate_by(&self, h: &Word) -> Word {
        h.mul(self).mul(&h.inverse())
    }

    pub fn free_reduce(&self) -> Word {
        Word::identity().mul(self)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&a), Some(&b)) if self.0.len() > 1 => !a.cancels(b),
                _ => true,
            }
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Replaces every letter by a word, reducing as it goes.
    pub fn substitute(&self, images: impl Fn(usize) -> Word) -> Word {
        let mut out = Word::identity();
        for &l in &self.0 {
            let img = images(l.index());
            out = if l.inverse { out.mul(&img.inverse()) } else { out.mul(&img) };
        }
        out
    }

    fn rotation(&self, k: usize) -> impl Iterator<Item = &Letter> + '_ {
        self.0[k..].iter().chain(self.0[..k].iter())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (inverse, digits) = match tok.split_at(1) {
                ("g", d) => (false, d),
                ("G", d) => (true, d),
                _ => return Err(Error::parse(0, format!("bad word token {tok:?}"))),
            };
            let gen: usize = digits
                .parse()
                .map_err(|_| Error::parse(0, format!("bad word token {tok:?}")))?;
            if gen == 0 || gen > u16::MAX as usize {
                return Err(Error::parse(0, format!("generator index out of range in {tok:?}")));
            }
            letters.push(Letter::new(gen, inverse));
        }
        Ok(Word(letters))
    }
}

/// Free reduction, then cancellation of the first letter against the last.
pub fn cyclic_reduce(w: &Word) -> Word {
    let reduced = w.free_reduce().0;
    let (mut lo, mut hi) = (0, reduced.len());
    while hi - lo >= 2 && reduced[lo].cancels(reduced[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    Word(reduced[lo..hi].to_vec())
}

fn is_rotation(a: &Word, b: &Word) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|k| a.rotation(k).eq(b.0.iter()))
}

/// Conjugacy in the free group.
pub fn free_conjugate(u: &Word, v: &Word) -> bool {
    is_rotation(&cyclic_reduce(u), &cyclic_reduce(v))
}

/// Least rotation of a cyclically reduced word.
fn least_rotation(w: &Word) -> Word {
    let n = w.len();
    let mut best = 0;
    for k in 1..n {
        if w.rotation(k).cmp(w.rotation(best)) == Ordering::Less {
            best = k;
        }
    }
    Word(w.rotation(best).copied().collect())
}

/// Canonical representative of the unoriented free-homotopy class of `w`.
pub fn canonical_word(w: &Word) -> Word {
    let w = cyclic_reduce(w);
    let a = least_rotation(&w);
    let b = least_rotation(&w.inverse());
    a.min(b)
}

/// Exponent sums of `g1 .. g(n-1)`.
pub fn winding_vector(w: &Word, m: &MarkedSet) -> Vec<i64> {
    let mut v = vec![0i64; m.rank()];
    for l in w.letters() {
        if let Some(slot) = v.get_mut(l.index() - 1) {
            *slot += if l.inverse { -1 } else { 1 };
        }
    }
    v
}

/// Returns the marked point (zero-based) that `w` loops around, if any.
pub fn peripheral_class_of(w: &Word, m: &MarkedSet) -> Option<usize> {
    let w = cyclic_reduce(w);
    let n = m.len();
    if w.len() == 1 {
        let idx = w.letters()[0].index();
        return (idx < n).then(|| idx - 1);
    }
    let last = Word::peripheral(n - 1, n);
    if w.len() == n - 1 && (free_conjugate(&w, &last) || free_conjugate(&w, &last.inverse())) {
        return Some(n - 1);
    }
    None
}

/// Unordered split of the marked points cut out by a simple closed curve.
///
/// `inside` never contains the last marked point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SidePartition {
    inside: u64,
    n: u8,
}

impl SidePartition {
    /// Builds a partition from either side; normalizes so `inside` omits `p_n`.
    pub fn from_side(side: u64, n: usize) -> Self {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let side = side & full;
        let inside = if side >> (n - 1) & 1 == 1 { full & !side } else { side };
        Self { inside, n: n as u8 }
    }

    pub fn inside(&self) -> u64 {
        self.inside
    }

    pub fn outside(&self) -> u64 {
        self.full() & !self.inside
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// True when both sides hold at least two marked points.
    pub fn is_essential(&self) -> bool {
        self.inside.count_ones() >= 2 && self.outside().count_ones() >= 2
    }

    /// True when `a` and `b` lie on different sides.
    pub fn separates(&self, a: usize, b: usize) -> bool {
        (self.inside >> a & 1) != (self.inside >> b & 1)
    }

    /// The two sides.
    pub fn sides(&self) -> [u64; 2] {
        [self.inside, self.outside()]
    }

    /// Compatibility of two splits: they can be realized by disjoint curves.
    pub fn compatible(&self, other: &SidePartition) -> bool {
        let (a, b) = (self.inside, other.inside);
        a & b == 0 || a & !b == 0 || b & !a == 0
    }
}

/// Splits marked points by the winding of `w`; rejects words that cannot be simple.
pub fn side_partition(w: &Word, m: &MarkedSet) -> Result<SidePartition> {
    let v = winding_vector(w, m);
    let has_pos = v.iter().any(|&x| x > 0);
    let has_neg = v.iter().any(|&x| x < 0);
    if (has_pos && has_neg) || v.iter().any(|x| x.abs() >= 2) || (!has_pos && !has_neg) {
        return Err(Error::NotSimple(w.to_string()));
    }
    let mut inside = 0u64;
    for (i, &x) in v.iter().enumerate() {
        if x != 0 {
            inside |= 1 << i;
        }
    }
    Ok(SidePartition { inside, n: m.len() as u8 })
}

/// Unoriented isotopy class of a simple closed curve in the punctured sphere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    word: Word,
    partition: SidePartition,
}

impl CurveClass {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn partition(&self) -> SidePartition {
        self.partition
    }

    pub fn is_essential(&self) -> bool {
        self.partition.is_essential()
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Canonical class of a curve word. Fails on null-homotopic words and on
/// words failing the simple-curve homology test.
pub fn canonical_curve_class(w: &Word, m: &MarkedSet) -> Result<CurveClass> {
    if w.max_generator() >= m.len() {
        return Err(Error::invalid(format!("word {w} uses a generator beyond g{}", m.rank())));
    }
    let word = canonical_word(w);
    if word.is_empty() {
        return Err(Error::NullHomotopic);
    }
    let partition = side_partition(&word, m)?;
    Ok(CurveClass { word, partition })
}

/// The "round" curve around the points in `side`, as an ordered product of generators.
pub fn round_curve_word(side: u64, n: usize) -> Word {
    let p = SidePartition::from_side(side, n);
    Word::from_letters((0..n - 1).filter(|i| p.inside() >> i & 1 == 1).map(|i| Letter::gen(i + 1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(cyclic_reduce(&w("g1 g2 G2")), w("g1"));
        assert_eq!(cyclic_reduce(&w("G1 g2 g1")), w("g2"));
        assert_eq!(cyclic_reduce(&w("")), w(""));
        assert_eq!(cyclic_reduce(&w("g1 G1")), w(""));
    }

    #[test]
    fn conjugacy_examples() {
        assert!(free_conjugate(&w("g1 g2"), &w("g2 g1")));
        assert!(!free_conjugate(&w("g1"), &w("g2")));
        let x = w("g1 G3 g2 g2");
        let h = w("g3 G1 g2");
        assert!(free_conjugate(&x, &x.conjugate_by(&h)));
    }

    #[test]
    fn canonical_class_examples() {
        let m = MarkedSet::standard(4).unwrap();
        let a = canonical_curve_class(&w("g1 g2"), &m).unwrap();
        let b = canonical_curve_class(&w("G2 G1"), &m).unwrap();
        let c = canonical_curve_class(&w("g2 g1"), &m).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(matches!(canonical_curve_class(&w(""), &m), Err(Error::NullHomotopic)));
    }

    #[test]
    fn peripheral_examples() {
        let m = MarkedSet::standard(4).unwrap();
        assert_eq!(peripheral_class_of(&w("g3"), &m), Some(2));
        assert_eq!(peripheral_class_of(&w("g1 g2 g3"), &m), Some(3));
        assert_eq!(peripheral_class_of(&w("G3 G2 G1"), &m), Some(3));
        assert_eq!(peripheral_class_of(&w("g2 g3 g1"), &m), Some(3));
        assert_eq!(peripheral_class_of(&w("g1 g2"), &m), None);
        assert_eq!(peripheral_class_of(&w("G2"), &m), Some(1));
    }

    #[test]
    fn winding_examples() {
        let m = MarkedSet::standard(4).unwrap();
        assert_eq!(winding_vector(&w("g1 g2"), &m), vec![1, 1, 0]);
        assert_eq!(winding_vector(&w("g1 G1"), &m), vec![0, 0, 0]);
        assert_eq!(winding_vector(&w("g1 G2"), &m), vec![1, -1, 0]);
    }

    #[test]
    fn side_partition_examples() {
        let m = MarkedSet::standard(4).unwrap();
        let p = side_partition(&w("g1 g2"), &m).unwrap();
        assert_eq!(p.inside(), 0b0011);
        assert_eq!(p.outside(), 0b1100);
        let p = side_partition(&w("g2 g3"), &m).unwrap();
        assert_eq!(p.inside(), 0b0110);
        assert_eq!(p.outside(), 0b1001);
        assert!(matches!(side_partition(&w("g1 G2"), &m), Err(Error::NotSimple(_))));
        assert!(side_partition(&w("G1 G2"), &m).is_ok());
        assert!(side_partition(&w("g1 g1"), &m).is_err());
    }

    #[test]
    fn word_text_round_trip() {
        let x = w("g1 G2 g1");
        assert_eq!(x.to_string(), "g1 G2 g1");
        assert_eq!(w(""), Word::identity());
        assert!("g0".parse::<Word>().is_err());
        assert!("h1".parse::<Word>().is_err());
    }

    #[test]
    fn compatibility_of_splits() {
        let a = SidePartition::from_side(0b0011, 5);
        let b = SidePartition::from_side(0b0111, 5);
        let c = SidePartition::from_side(0b0110, 5);
        assert!(a.compatible(&b));
        assert!(!a.compatible(&c));
        // complement sides normalize to the same split
        assert_eq!(SidePartition::from_side(0b11100, 5), a);
    }

    #[test]
    fn round_words() {
        assert_eq!(round_curve_word(0b0101, 4), w("g1 g3"));
        // side containing p4 is complemented
        assert_eq!(round_curve_word(0b1010, 4), w("g1 g3"));
    }
}
