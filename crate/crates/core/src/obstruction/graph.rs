//! Small digraph routines on adjacency matrices.

/// Strongly connected components in reverse topological order (Tarjan).
pub fn strongly_connected_components(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<bool>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for w in 0..s.adj.len() {
            if !s.adj[v][w] {
                continue;
            }
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().expect("tarjan stack");
                s.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            s.out.push(comp);
        }
    }
    let n = adj.len();
    let mut s = State { adj, index: vec![None; n], low: vec![0; n], on_stack: vec![false; n], stack: Vec::new(), next: 0, out: Vec::new() };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

/// A component carries a cycle when it has two vertices or a self-loop.
pub fn component_has_cycle(adj: &[Vec<bool>], comp: &[usize]) -> bool {
    comp.len() > 1 || adj[comp[0]][comp[0]]
}

/// Strong connectivity with at least one edge, so `[[0]]` does not qualify.
pub fn is_strongly_connected(adj: &[Vec<bool>]) -> bool {
    let comps = strongly_connected_components(adj);
    comps.len() == 1 && component_has_cycle(adj, &comps[0])
}

/// All elementary cycles, each listed once starting at its least vertex.
/// Stops after `limit` cycles.
pub fn elementary_cycles(adj: &[Vec<bool>], limit: usize) -> Vec<Vec<usize>> {
    fn dfs(adj: &[Vec<bool>], start: usize, v: usize, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>, limit: usize) {
        for w in start..adj.len() {
            if out.len() >= limit {
                return;
            }
            if !adj[v][w] {
                continue;
            }
            if w == start {
                out.push(path.clone());
            } else if !used[w] {
                used[w] = true;
                path.push(w);
                dfs(adj, start, w, path, used, out, limit);
                path.pop();
                used[w] = false;
            }
        }
    }
    let n = adj.len();
    let mut out = Vec::new();
    for start in 0..n {
        let mut used = vec![false; n];
        used[start] = true;
        let mut path = vec![start];
        dfs(adj, start, start, &mut path, &mut used, &mut out, limit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(rows: &[&[u8]]) -> Vec<Vec<bool>> {
        rows.iter().map(|r| r.iter().map(|&x| x != 0).collect()).collect()
    }

    #[test]
    fn components() {
        let a = adj(&[&[0, 1, 0], &[1, 0, 0], &[1, 0, 0]]);
        let mut c = strongly_connected_components(&a);
        c.sort();
        assert_eq!(c, vec![vec![0, 1], vec![2]]);
        assert!(!is_strongly_connected(&a));
        assert!(!is_strongly_connected(&adj(&[&[0]])));
        assert!(is_strongly_connected(&adj(&[&[1]])));
    }

    #[test]
    fn cycles_of_complete_digraph() {
        let a = adj(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        // 3 loops, 3 two-cycles, 2 three-cycles
        assert_eq!(elementary_cycles(&a, 100).len(), 8);
        assert_eq!(elementary_cycles(&a, 4).len(), 4);
    }
}
