//! Multicurves: essential lifts, stability, pullback saturation and the
//! face structure of a curve system.
//!
//! Disjointness is checked at the level of side partitions (laminarity).
//! That is necessary but not sufficient for a disjoint realization, so sets
//! that only pass the partition check are reported as candidate multicurves.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cover::{CoverPresentation, LiftComponent, LiftKind};
use crate::error::{Error, Result};
use crate::sphere_group::{CurveClass, MarkedSet};

pub const DEFAULT_MAX_ITER: usize = 64;
pub const DEFAULT_MAX_SIZE: usize = 256;
/// Words longer than this end saturation with a timeout.
pub const DEFAULT_MAX_WORD_LEN: usize = 4096;

/// A set of essential curve classes with pairwise compatible side partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multicurve {
    members: Vec<CurveClass>,
}

impl Multicurve {
    pub fn new(classes: impl IntoIterator<Item = CurveClass>) -> Result<Self> {
        let members: Vec<CurveClass> = classes.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for c in &members {
            if !c.is_essential() {
                return Err(Error::invalid(format!("curve {c} is peripheral")));
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.partition() == b.partition() {
                    return Err(Error::NotLaminar(format!("{a} and {b} cut out the same split")));
                }
                if !a.partition().compatible(&b.partition()) {
                    return Err(Error::NotLaminar(format!("{a} and {b} cross")));
                }
            }
        }
        Ok(Self { members })
    }

    pub fn empty() -> Self {
        Self { members: Vec::new() }
    }

    pub fn members(&self) -> &[CurveClass] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, c: &CurveClass) -> Option<usize> {
        self.members.binary_search(c).ok()
    }

    pub fn contains(&self, c: &CurveClass) -> bool {
        self.index_of(c).is_some()
    }

    /// The submulticurve on the given member indices.
    pub fn restrict(&self, idx: &[usize]) -> Multicurve {
        Multicurve { members: idx.iter().map(|&i| self.members[i].clone()).collect::<BTreeSet<_>>().into_iter().collect() }
    }
}

impl fmt::Display for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.members {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// One essential preimage component of a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialLift {
    pub class: CurveClass,
    pub degree: usize,
    pub component: LiftComponent,
}

/// Essential lifts of every curve in `curves`, in input order, with multiplicity.
pub fn essential_lifts(p: &CoverPresentation, curves: &[CurveClass]) -> Result<Vec<Vec<EssentialLift>>> {
    curves
        .iter()
        .map(|c| {
            p.lift_curve(c.word())
                .into_iter()
                .filter(|comp| comp.kind == LiftKind::Essential)
                .map(|comp| {
                    let class = comp.class(p.marked())?;
                    if !class.is_essential() {
                        return Err(Error::invalid(format!("lift {class} of {c} is essential but has a thin side")));
                    }
                    Ok(EssentialLift { class, degree: comp.degree, component: comp })
                })
                .collect()
        })
        .collect()
}

/// Every essential lift of every member is a member.
pub fn is_stable(p: &CoverPresentation, g: &Multicurve) -> Result<bool> {
    Ok(first_escape(p, g)?.is_none())
}

/// The first essential lift class outside `g`, if any.
pub fn first_escape(p: &CoverPresentation, g: &Multicurve) -> Result<Option<CurveClass>> {
    for lifts in essential_lifts(p, g.members())? {
        if let Some(l) = lifts.into_iter().find(|l| !g.contains(&l.class)) {
            return Ok(Some(l.class));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug)]
pub struct SaturationBounds {
    pub max_iter: usize,
    pub max_size: usize,
    pub max_word_len: usize,
}

impl Default for SaturationBounds {
    fn default() -> Self {
        Self { max_iter: DEFAULT_MAX_ITER, max_size: DEFAULT_MAX_SIZE, max_word_len: DEFAULT_MAX_WORD_LEN }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Saturation {
    /// `set` equals the set of essential-lift classes of itself.
    Fixed { set: BTreeSet<CurveClass>, iterations: usize },
    /// The set sequence entered a cycle; `union` is exactly invariant.
    Cycle { sets: Vec<BTreeSet<CurveClass>>, union: BTreeSet<CurveClass> },
    Timeout { trajectory: Vec<usize>, reason: String },
}

impl Saturation {
    /// The invariant set found, if any.
    pub fn invariant_set(&self) -> Option<&BTreeSet<CurveClass>> {
        match self {
            Saturation::Fixed { set, .. } => Some(set),
            Saturation::Cycle { union, .. } => Some(union),
            Saturation::Timeout { .. } => None,
        }
    }
}

fn lift_set(p: &CoverPresentation, set: &BTreeSet<CurveClass>) -> Result<BTreeSet<CurveClass>> {
    let curves: Vec<CurveClass> = set.iter().cloned().collect();
    Ok(essential_lifts(p, &curves)?.into_iter().flatten().map(|l| l.class).collect())
}

/// Iterates `Λ ↦ classes(essential lifts of Λ)` from `seeds` until a fixed
/// set or a cycle of sets appears, or a bound is hit.
pub fn pullback_saturate(
    p: &CoverPresentation,
    seeds: &BTreeSet<CurveClass>,
    bounds: SaturationBounds,
) -> Result<Saturation> {
    let mut history: Vec<BTreeSet<CurveClass>> = vec![seeds.clone()];
    let mut index: HashMap<BTreeSet<CurveClass>, usize> = HashMap::new();
    index.insert(seeds.clone(), 0);
    for iter in 0..bounds.max_iter {
        let next = lift_set(p, history.last().expect("nonempty history"))?;
        if next.len() > bounds.max_size {
            return Ok(Saturation::Timeout {
                trajectory: history.iter().map(BTreeSet::len).chain([next.len()]).collect(),
                reason: format!("set size {} exceeds {}", next.len(), bounds.max_size),
            });
        }
        if let Some(long) = next.iter().find(|c| c.word().len() > bounds.max_word_len) {
            return Ok(Saturation::Timeout {
                trajectory: history.iter().map(BTreeSet::len).collect(),
                reason: format!("word length {} exceeds {}", long.word().len(), bounds.max_word_len),
            });
        }
        if let Some(&j) = index.get(&next) {
            let last = history.len() - 1;
            if j == last {
                return Ok(Saturation::Fixed { set: next, iterations: iter + 1 });
            }
            let sets: Vec<_> = history[j..].to_vec();
            let union: BTreeSet<CurveClass> = sets.iter().flatten().cloned().collect();
            if lift_set(p, &union)? != union {
                return Err(Error::invalid("union over a pullback cycle is not invariant"));
            }
            return Ok(Saturation::Cycle { sets, union });
        }
        index.insert(next.clone(), history.len());
        history.push(next);
    }
    Ok(Saturation::Timeout {
        trajectory: history.iter().map(BTreeSet::len).collect(),
        reason: format!("no fixed set after {} iterations", bounds.max_iter),
    })
}

/// A complementary component of a multicurve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Indices of bounding members.
    pub boundary: Vec<usize>,
    /// Marked points inside the face.
    pub marked: u64,
}

impl Face {
    pub fn is_disk(&self) -> bool {
        self.boundary.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceTree {
    pub faces: Vec<Face>,
    /// For each member, the marked points on its side away from the root face.
    pub inside: Vec<u64>,
}

impl FaceTree {
    pub fn disk_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.is_disk())
    }

    /// The face holding marked point `i`.
    pub fn face_of(&self, i: usize) -> Option<usize> {
        self.faces.iter().position(|f| f.marked >> i & 1 == 1)
    }
}

/// Nesting tree of the inside-sets of a laminar system.
pub fn face_structure(g: &Multicurve, m: &MarkedSet) -> Result<FaceTree> {
    let members = g.members();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if a.partition() == b.partition() || !a.partition().compatible(&b.partition()) {
                return Err(Error::NotLaminar(format!("{a} and {b}")));
            }
        }
    }
    let inside: Vec<u64> = members.iter().map(|c| c.partition().inside()).collect();
    // parent = smallest strictly containing inside-set
    let parent: Vec<Option<usize>> = (0..members.len())
        .map(|i| {
            (0..members.len())
                .filter(|&j| j != i && inside[i] & !inside[j] == 0)
                .min_by_key(|&j| inside[j].count_ones())
        })
        .collect();
    let mut children: BTreeMap<Option<usize>, Vec<usize>> = BTreeMap::new();
    for (i, p) in parent.iter().enumerate() {
        children.entry(*p).or_default().push(i);
    }
    let face_for = |owner: Option<usize>| -> Face {
        let kids = children.get(&owner).cloned().unwrap_or_default();
        let region = owner.map_or(m.full_mask(), |i| inside[i]);
        let covered = kids.iter().fold(0u64, |acc, &k| acc | inside[k]);
        let mut boundary: Vec<usize> = owner.into_iter().chain(kids.iter().copied()).collect();
        boundary.sort_unstable();
        Face { boundary, marked: region & !covered }
    };
    let mut faces = vec![face_for(None)];
    faces.extend((0..members.len()).map(|i| face_for(Some(i))));
    Ok(FaceTree { faces, inside })
}

/// Partition-level shadow of isotopic containment: every complementary
/// component of the essential-lift system has its marked points inside a
/// single face of `g`.
pub fn lift_faces_contained(p: &CoverPresentation, g: &Multicurve) -> Result<bool> {
    let lifts: BTreeSet<CurveClass> = essential_lifts(p, g.members())?.into_iter().flatten().map(|l| l.class).collect();
    let lift_mc = Multicurve::new(lifts)?;
    let lift_faces = face_structure(&lift_mc, p.marked())?;
    let faces = face_structure(g, p.marked())?;
    Ok(lift_faces
        .faces
        .iter()
        .all(|lf| lf.marked == 0 || faces.faces.iter().any(|f| lf.marked & !f.marked == 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_group::{canonical_curve_class, Word};

    fn class(s: &str, m: &MarkedSet) -> CurveClass {
        canonical_curve_class(&s.parse::<Word>().unwrap(), m).unwrap()
    }

    #[test]
    fn singleton_faces() {
        let m = MarkedSet::standard(4).unwrap();
        let g = Multicurve::new([class("g1 g2", &m)]).unwrap();
        let t = face_structure(&g, &m).unwrap();
        assert_eq!(t.faces.len(), 2);
        assert!(t.faces.iter().all(Face::is_disk));
        let mut marks: Vec<u64> = t.faces.iter().map(|f| f.marked).collect();
        marks.sort_unstable();
        assert_eq!(marks, vec![0b0011, 0b1100]);
    }

    #[test]
    fn nested_faces() {
        let m = MarkedSet::standard(5).unwrap();
        let g = Multicurve::new([class("g1 g2", &m), class("g1 g2 g3", &m)]).unwrap();
        let t = face_structure(&g, &m).unwrap();
        assert_eq!(t.faces.len(), 3);
        let disks = t.disk_faces().count();
        assert_eq!(disks, 2);
        let annulus = t.faces.iter().find(|f| f.boundary.len() == 2).unwrap();
        assert_eq!(annulus.marked, 0b00100);
    }

    #[test]
    fn crossing_partitions_rejected() {
        let m = MarkedSet::standard(5).unwrap();
        let err = Multicurve::new([class("g1 g2", &m), class("g2 g3", &m)]).unwrap_err();
        assert!(matches!(err, Error::NotLaminar(_)));
    }

    #[test]
    fn peripheral_members_rejected() {
        let m = MarkedSet::standard(4).unwrap();
        assert!(Multicurve::new([class("g1 g2 g3", &m)]).is_err());
    }
}
