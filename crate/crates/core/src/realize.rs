//! Builds coherent restriction words from combinatorial data alone.
//!
//! Base model: marked points on a line, a ray from each point up to a common
//! unmarked point `∞`, base point below the line. The sphere cut along the
//! rays is a disk; the cover is `d` copies of it, the right side of ray `i` on
//! sheet `k` glued to its left side on sheet `sigma_i(k)`.
//!
//! Cutting the cover along a spanning tree of its 1-skeleton leaves a disk.
//! Loops from a base point in that disk around each vertex, taken at the
//! vertex's first corner along the disk boundary, form a geometric basis.
//! Matching the marked ones with a Hurwitz-sorted basis of the base group
//! fixes an identification of the cover with the base, and crossing a tree
//! edge becomes a base-group word by peeling leaves off the tree.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cover::{same_cycle, CoverPresentation};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::sphere_group::{Letter, MarkedSet, Word};

/// Combinatorial data of a branched self-cover without restriction words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    pub degree: usize,
    pub marked: MarkedSet,
    pub dynamics: Vec<usize>,
    /// All `n` monodromy permutations; `sigma_1 ∘ … ∘ sigma_n` must be the identity.
    pub perms: Vec<Perm>,
    pub assignment: Vec<Vec<usize>>,
}

impl Portrait {
    pub fn from_presentation(p: &CoverPresentation) -> Self {
        Portrait {
            degree: p.degree(),
            marked: p.marked().clone(),
            dynamics: p.dynamics().to_vec(),
            perms: p.all_perms(),
            assignment: (0..p.n()).map(|j| p.assignment(j).to_vec()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Vertex {
    /// Preimage of a marked point: (marked index, cycle index in `cycles()` order).
    Over(usize, usize),
    /// Preimage of `∞`, named by the sheet of its outer corner.
    Infinity(usize),
}

struct Surface {
    vertices: Vec<Vertex>,
    /// Edge `i * d + k` is ray `i` glued from sheet `k` to `sigma_i(k)`.
    ends: Vec<(usize, usize)>,
    /// Counter-clockwise edge order at each vertex, with the sign of a
    /// counter-clockwise crossing.
    rotation: Vec<Vec<(usize, bool)>>,
}

fn build_surface(d: usize, perms: &[Perm]) -> Surface {
    let n = perms.len();
    let mut vertices = Vec::new();
    let mut over_index = vec![vec![0usize; d]; n];
    let mut rotation = Vec::new();
    for (i, sigma) in perms.iter().enumerate() {
        for (ci, cycle) in sigma.cycles().into_iter().enumerate() {
            let v = vertices.len();
            vertices.push(Vertex::Over(i, ci));
            rotation.push(cycle.iter().map(|&k| (i * d + k, true)).collect());
            for &k in &cycle {
                over_index[i][k] = v;
            }
        }
    }
    let mut infinity_of_corner = vec![vec![0usize; d]; n];
    for s in 0..d {
        let v = vertices.len();
        vertices.push(Vertex::Infinity(s));
        let mut t = s;
        let mut rot = Vec::with_capacity(n);
        for (i, sigma) in perms.iter().enumerate() {
            t = sigma.inverse().apply(t);
            infinity_of_corner[i][t] = v;
            rot.push((i * d + t, false));
        }
        debug_assert_eq!(t, s);
        rotation.push(rot);
    }
    let ends = (0..n * d).map(|e| (over_index[e / d][e % d], infinity_of_corner[e / d][e % d])).collect();
    Surface { vertices, ends, rotation }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn spanning_tree(surface: &Surface, order: &[usize]) -> Vec<bool> {
    let mut parent: Vec<usize> = (0..surface.vertices.len()).collect();
    let mut in_tree = vec![false; surface.ends.len()];
    for &e in order {
        let (a, b) = surface.ends[e];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            in_tree[e] = true;
        }
    }
    in_tree
}

/// Deterministic realization using the first spanning tree in edge order.
pub fn realize(portrait: &Portrait) -> Result<CoverPresentation> {
    realize_inner(portrait, None::<&mut rand::rngs::ThreadRng>)
}

/// Realization with a random spanning tree; different trees give covers that
/// differ by a mapping class of the marked sphere.
pub fn realize_with_rng<R: Rng>(portrait: &Portrait, rng: &mut R) -> Result<CoverPresentation> {
    realize_inner(portrait, Some(rng))
}

fn realize_inner<R: Rng>(portrait: &Portrait, rng: Option<&mut R>) -> Result<CoverPresentation> {
    let d = portrait.degree;
    let n = portrait.marked.len();
    if portrait.perms.len() != n || portrait.perms.iter().any(|p| p.degree() != d) {
        return Err(Error::invalid(format!("need {n} permutations of degree {d}")));
    }
    let product = portrait.perms.iter().fold(Perm::identity(d), |acc, p| acc.compose(p));
    if !product.is_identity() {
        return Err(Error::invalid("product of the monodromy permutations is not the identity"));
    }
    let surface = build_surface(d, &portrait.perms);
    let nv = surface.vertices.len();
    let ne = surface.ends.len();
    if nv != ne - d + 2 {
        return Err(Error::invalid("cover is not a connected sphere"));
    }

    let mut order: Vec<usize> = (0..ne).collect();
    if let Some(rng) = rng {
        order.shuffle(rng);
    }
    let in_tree = spanning_tree(&surface, &order);
    if in_tree.iter().filter(|&&t| t).count() != nv - 1 {
        return Err(Error::invalid("cover is disconnected"));
    }

    // Marked labels of cover vertices.
    let mut label: Vec<Option<usize>> = vec![None; nv];
    for j in 0..n {
        let target = portrait.dynamics[j];
        let cycles = portrait.perms[target].cycles();
        let ci = cycles
            .iter()
            .position(|c| same_cycle(c, &portrait.assignment[j]))
            .ok_or_else(|| Error::invalid(format!("assignment of {} is not a cycle", portrait.marked.label(j))))?;
        let v = surface
            .vertices
            .iter()
            .position(|&x| x == Vertex::Over(target, ci))
            .expect("vertex exists");
        if label[v].is_some() {
            return Err(Error::invalid("two marked points share a preimage"));
        }
        label[v] = Some(j);
    }

    // Tree rotation and boundary walk.
    let tree_rot: Vec<Vec<(usize, bool)>> =
        surface.rotation.iter().map(|r| r.iter().copied().filter(|&(e, _)| in_tree[e]).collect()).collect();
    let other_end = |e: usize, v: usize| {
        let (a, b) = surface.ends[e];
        if a == v {
            b
        } else {
            a
        }
    };
    // First corner of each vertex: the tree edge we arrived by.
    let mut first_arrival: Vec<Option<usize>> = vec![None; nv];
    let mut corner_order = Vec::with_capacity(nv);
    let start_edge = (0..ne).find(|&e| in_tree[e]).expect("tree has an edge");
    let (mut from, mut e) = (surface.ends[start_edge].0, start_edge);
    for _ in 0..2 * (nv - 1) {
        let u = other_end(e, from);
        if first_arrival[u].is_none() {
            first_arrival[u] = Some(e);
            corner_order.push(u);
        }
        let rot = &tree_rot[u];
        let pos = rot.iter().position(|&(x, _)| x == e).expect("edge at vertex");
        let next = rot[(pos + 1) % rot.len()].0;
        from = u;
        e = next;
    }
    if corner_order.len() != nv {
        return Err(Error::invalid("boundary walk missed a vertex"));
    }

    // Loop around each vertex as a word in tree-edge crossings (generator = edge + 1).
    let loops: Vec<Vec<(usize, bool)>> = (0..nv)
        .map(|v| {
            let rot = &tree_rot[v];
            let arrival = first_arrival[v].expect("visited");
            let pos = rot.iter().position(|&(x, _)| x == arrival).expect("edge at vertex");
            // path order: successor of the arrival edge first, arrival edge last
            (1..=rot.len()).map(|t| rot[(pos + t) % rot.len()]).collect()
        })
        .collect();
    let as_word = |path: &[(usize, bool)]| -> Word {
        Word::from_letters(path.iter().rev().map(|&(e, ccw_forward)| Letter::new(e + 1, !ccw_forward)).collect())
    };
    let loop_words: Vec<Word> = loops.iter().map(|p| as_word(p)).collect();
    let product = |vs: &mut dyn Iterator<Item = usize>| vs.fold(Word::identity(), |acc, v| acc.mul(&loop_words[v]));
    let forward = product(&mut corner_order.iter().copied()).is_empty();
    let backward = product(&mut corner_order.iter().rev().copied()).is_empty();
    let vertex_seq: Vec<usize> = match (forward, backward) {
        (true, _) => corner_order.clone(),
        (false, true) => corner_order.iter().rev().copied().collect(),
        _ => return Err(Error::invalid("vertex loops do not satisfy the sphere relation")),
    };

    // Geometric basis of the base group in the order the marked vertices appear.
    let marked_seq: Vec<usize> = vertex_seq.iter().filter_map(|&v| label[v]).collect();
    debug_assert_eq!(marked_seq.len(), n);
    let mut basis: Vec<(usize, Word)> = (0..n).map(|j| (j, Word::peripheral(j, n))).collect();
    for t in 0..n {
        let want = marked_seq[t];
        let mut pos = basis.iter().position(|(j, _)| *j == want).expect("label present");
        while pos > t {
            let (xj, x) = basis[pos - 1].clone();
            let (yj, y) = basis[pos].clone();
            basis[pos - 1] = (yj, y.conjugate_by(&x));
            basis[pos] = (xj, x);
            pos -= 1;
        }
    }
    let mut target = vec![Word::identity(); nv];
    for (v, lab) in label.iter().enumerate() {
        if let Some(j) = lab {
            target[v] = basis.iter().find(|(x, _)| x == j).expect("label present").1.clone();
        }
    }

    // Peel leaves to solve for the image of each tree-edge crossing.
    let root = vertex_seq[0];
    let mut bfs = vec![root];
    let mut parent_edge: Vec<Option<usize>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[root] = true;
    let mut head = 0;
    while head < bfs.len() {
        let v = bfs[head];
        head += 1;
        for &(e, _) in &tree_rot[v] {
            let u = other_end(e, v);
            if !seen[u] {
                seen[u] = true;
                parent_edge[u] = Some(e);
                bfs.push(u);
            }
        }
    }
    let mut image: Vec<Option<Word>> = vec![None; ne];
    for &v in bfs.iter().skip(1).rev() {
        let pe = parent_edge[v].expect("non-root has a parent");
        let path = &loops[v];
        let idx = path.iter().position(|&(e, _)| e == pe).expect("parent edge at vertex");
        let known = |segment: &[(usize, bool)]| -> Word {
            // functional order: later crossings on the left
            segment.iter().fold(Word::identity(), |acc, &(e, fwd)| {
                let x = image[e].clone().expect("child edges solved first");
                let x = if fwd { x } else { x.inverse() };
                x.mul(&acc)
            })
        };
        let before = known(&path[..idx]);
        let after = known(&path[idx + 1..]);
        // target = after · x^s · before
        let xs = after.inverse().mul(&target[v]).mul(&before.inverse());
        image[pe] = Some(if path[idx].1 { xs } else { xs.inverse() });
    }
    let root_loop = loops[root].iter().fold(Word::identity(), |acc, &(e, fwd)| {
        let x = image[e].clone().expect("all tree edges solved");
        let x = if fwd { x } else { x.inverse() };
        x.mul(&acc)
    });
    if root_loop != target[root] {
        return Err(Error::invalid("leaf peeling is inconsistent at the root"));
    }

    // Restrictions of g_1 .. g_{n-1}; words for g_n are rewritten through the relation.
    let expand = |w: &Word| -> Word {
        w.substitute(|g| if g < n { Word::generator(g) } else { Word::peripheral(n - 1, n) })
    };
    let restrictions: Vec<Vec<Word>> = (0..n - 1)
        .map(|i| {
            (0..d)
                .map(|k| {
                    let e = i * d + k;
                    if in_tree[e] {
                        expand(image[e].as_ref().expect("tree edge solved"))
                    } else {
                        Word::identity()
                    }
                })
                .collect()
        })
        .collect();

    CoverPresentation::new(
        d,
        portrait.marked.clone(),
        portrait.dynamics.clone(),
        portrait.perms[..n - 1].to_vec(),
        restrictions,
        portrait.assignment.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyc(d: usize, cs: &[&[usize]]) -> Perm {
        Perm::from_cycles(d, &cs.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn z_cubed() -> Portrait {
        let s1 = cyc(3, &[&[0, 1, 2]]);
        let s2 = s1.inverse();
        Portrait {
            degree: 3,
            marked: MarkedSet::standard(2).unwrap(),
            dynamics: vec![0, 1],
            assignment: vec![s1.cycles()[0].clone(), s2.cycles()[0].clone()],
            perms: vec![s1, s2],
        }
    }

    /// Cubic with fixed simple critical points p1, p2 and free critical
    /// values p3, p4 swapped by the dynamics.
    fn cubic_two_fixed() -> Portrait {
        let s1 = cyc(3, &[&[0, 1]]);
        let s2 = cyc(3, &[&[1, 2]]);
        let s3 = cyc(3, &[&[1, 2]]);
        let s4 = cyc(3, &[&[0, 1]]);
        assert!(s1.compose(&s2).compose(&s3).compose(&s4).is_identity());
        Portrait {
            degree: 3,
            marked: MarkedSet::standard(4).unwrap(),
            dynamics: vec![0, 1, 3, 2],
            assignment: vec![vec![0, 1], vec![1, 2], vec![2], vec![0]],
            perms: vec![s1, s2, s3, s4],
        }
    }

    #[test]
    fn z_cubed_is_coherent() {
        let p = realize(&z_cubed()).unwrap();
        let report = p.validate();
        assert!(report.is_coherent(), "{report}");
    }

    #[test]
    fn random_trees_stay_coherent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = realize_with_rng(&cubic_two_fixed(), &mut rng).unwrap();
            let report = p.validate();
            assert!(report.is_coherent(), "{report}");
        }
    }

    #[test]
    fn rejects_bad_relation() {
        let mut pt = cubic_two_fixed();
        pt.perms[3] = Perm::identity(3);
        assert!(realize(&pt).is_err());
    }
}
