use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::graph::elementary_cycles;
use crate::cover::{CoverPresentation, LiftComponent, LiftKind};
use crate::curves::{essential_lifts, face_structure, Multicurve};
use crate::error::{Error, Result};
use crate::sphere_group::CurveClass;

/// Cap on enumerated cycles; the Levy digraph of a desk-scale multicurve is tiny.
pub const MAX_LEVY_CYCLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LevyClass {
    Plain,
    NotDegenerate,
    /// Degenerate, with a non-disk preimage component at `level`.
    Degenerate { level: usize },
    RemovableUpToDepth { depth: usize },
    /// The partition data cannot decide which side of a lift is the disk.
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevyCycle {
    /// Member indices `γ_0 → γ_1 → …`, where `γ_{i+1}` is a degree-1 lift of `γ_i`.
    pub members: Vec<usize>,
    pub classes: Vec<CurveClass>,
    /// `witnesses[i]` is the degree-1 component of the preimage of `γ_i` isotopic to `γ_{i+1}`.
    pub witnesses: Vec<LiftComponent>,
    pub classification: LevyClass,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevyReport {
    pub cycles: Vec<LevyCycle>,
    pub truncated: bool,
}

impl LevyReport {
    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Some cycle passes through every one of the `n` members.
    pub fn has_spanning_cycle(&self, n: usize) -> bool {
        self.cycles.iter().any(|c| c.members.len() == n)
    }
}

pub fn find_levy_cycles(p: &CoverPresentation, g: &Multicurve) -> Result<LevyReport> {
    let n = g.len();
    let mut adj = vec![vec![false; n]; n];
    let mut witness: Vec<Vec<Option<LiftComponent>>> = vec![vec![None; n]; n];
    for (src, lifts) in essential_lifts(p, g.members())?.into_iter().enumerate() {
        for lift in lifts.into_iter().filter(|l| l.degree == 1) {
            if let Some(dst) = g.index_of(&lift.class) {
                adj[src][dst] = true;
                witness[src][dst].get_or_insert(lift.component);
            }
        }
    }
    let raw = elementary_cycles(&adj, MAX_LEVY_CYCLES);
    let truncated = raw.len() >= MAX_LEVY_CYCLES;
    let cycles = raw
        .into_iter()
        .map(|members| {
            let k = members.len();
            let witnesses = (0..k)
                .map(|i| witness[members[i]][members[(i + 1) % k]].clone().expect("edge has a witness"))
                .collect();
            LevyCycle {
                classes: members.iter().map(|&i| g.members()[i].clone()).collect(),
                members,
                witnesses,
                classification: LevyClass::Plain,
            }
        })
        .collect();
    Ok(LevyReport { cycles, truncated })
}

fn dynamics_image(p: &CoverPresentation, mask: u64) -> u64 {
    (0..p.n()).filter(|&j| mask >> j & 1 == 1).fold(0, |acc, j| acc | 1 << p.image(j))
}

fn marked_critical(p: &CoverPresentation) -> u64 {
    (0..p.n()).filter(|&j| p.local_degree(j) > 1).fold(0, |acc, j| acc | 1 << j)
}

/// Whether the disk on side `side` of `gamma` can have a degree-1 disk
/// preimage with marked set `target`, as far as the Euler count can tell.
fn admits_homeomorphic_disk(p: &CoverPresentation, gamma: &CurveClass, side: u64, target: u64) -> Result<bool> {
    if dynamics_image(p, target) & !side != 0 || target & marked_critical(p) != 0 {
        return Ok(false);
    }
    let topo = p.disk_preimage_topology(gamma.word(), side)?;
    Ok(topo.all_disks || topo.component_boundaries.as_ref().map_or(true, |v| v.contains(&1)))
}

/// Candidate disk sides for each curve of the cycle, from the face pattern
/// "one disk per curve plus one complementary face".
fn disk_sides(p: &CoverPresentation, classes: &[CurveClass]) -> Result<Vec<Vec<u64>>> {
    let mc = Multicurve::new(classes.iter().cloned())?;
    let tree = face_structure(&mc, p.marked())?;
    let k = mc.len();
    if k == 1 {
        let sides = mc.members()[0].partition().sides();
        return Ok(vec![sides.to_vec()]);
    }
    let hub = tree.faces.iter().filter(|f| f.boundary.len() == k).count();
    let disks = tree.faces.iter().filter(|f| f.is_disk()).count();
    if hub != 1 || disks != k {
        return Ok(Vec::new());
    }
    // reorder to cycle order
    classes
        .iter()
        .map(|c| {
            let idx = mc.index_of(c).expect("member");
            let face = tree.faces.iter().find(|f| f.is_disk() && f.boundary[0] == idx).expect("disk face per curve");
            Ok(vec![face.marked])
        })
        .collect()
}

enum Removal {
    Removable,
    NonDisk(usize),
    Inconclusive(String),
}

fn removable(p: &CoverPresentation, gamma: &CurveClass, side: u64, depth: usize) -> Result<Removal> {
    let mut seen: HashSet<(CurveClass, u64)> = HashSet::new();
    let mut frontier = vec![(gamma.clone(), side)];
    for level in 1..=depth {
        let mut next = Vec::new();
        for (c, x) in frontier {
            if !seen.insert((c.clone(), x)) {
                continue;
            }
            let topo = p.disk_preimage_topology(c.word(), x)?;
            if !topo.all_disks {
                return Ok(Removal::NonDisk(level));
            }
            for lift in topo.boundary_lifts.iter().filter(|l| l.kind == LiftKind::Essential) {
                let class = lift.class(p.marked())?;
                let candidates: Vec<u64> =
                    class.partition().sides().into_iter().filter(|&y| dynamics_image(p, y) & !x == 0).collect();
                match candidates.as_slice() {
                    [y] => next.push((class, *y)),
                    [] => return Err(Error::invalid(format!("lift {class} has no side mapping into its disk"))),
                    _ => return Ok(Removal::Inconclusive(format!("both sides of {class} map into the disk"))),
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(Removal::Removable)
}

/// Degenerate and removable tests for one cycle. Removability is only ever
/// claimed up to `depth` levels of preimages.
pub fn classify_levy(p: &CoverPresentation, cycle: &LevyCycle, depth: usize) -> Result<LevyClass> {
    if depth == 0 {
        return Err(Error::invalid("removability depth must be positive"));
    }
    let k = cycle.classes.len();
    let sides = disk_sides(p, &cycle.classes)?;
    if sides.is_empty() {
        return Ok(LevyClass::NotDegenerate);
    }
    // choose sides (only the singleton case has a real choice)
    let mut viable: Vec<Vec<u64>> = Vec::new();
    let mut choices: Vec<Vec<u64>> = vec![Vec::new()];
    for opts in &sides {
        choices = choices.into_iter().flat_map(|pre| opts.iter().map(move |&o| [pre.clone(), vec![o]].concat())).collect();
    }
    for choice in choices {
        let mut ok = true;
        for i in 0..k {
            let j = (i + 1) % k;
            if !admits_homeomorphic_disk(p, &cycle.classes[i], choice[i], choice[j])? {
                ok = false;
                break;
            }
        }
        if ok {
            viable.push(choice);
        }
    }
    if viable.is_empty() {
        return Ok(LevyClass::NotDegenerate);
    }
    let mut outcomes = Vec::new();
    for choice in &viable {
        let mut verdict = LevyClass::RemovableUpToDepth { depth };
        for (c, &x) in cycle.classes.iter().zip(choice) {
            match removable(p, c, x, depth)? {
                Removal::Removable => {}
                Removal::NonDisk(level) => {
                    verdict = LevyClass::Degenerate { level };
                    break;
                }
                Removal::Inconclusive(reason) => {
                    verdict = LevyClass::Inconclusive { reason };
                    break;
                }
            }
        }
        outcomes.push(verdict);
    }
    let distinct: BTreeSet<String> = outcomes.iter().map(|o| format!("{o:?}")).collect();
    if distinct.len() > 1 {
        return Ok(LevyClass::Inconclusive { reason: "both disk sides are viable with different outcomes".into() });
    }
    Ok(outcomes.swap_remove(0))
}

/// Levy report with every cycle classified.
pub fn classified_levy_cycles(p: &CoverPresentation, g: &Multicurve, depth: usize) -> Result<LevyReport> {
    let mut report = find_levy_cycles(p, g)?;
    for c in &mut report.cycles {
        c.classification = classify_levy(p, c, depth)?;
    }
    Ok(report)
}
