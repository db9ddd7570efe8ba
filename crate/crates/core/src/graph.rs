//! Small digraph utilities shared by the shift presentations.

use std::collections::VecDeque;

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order of the condensation.
pub(crate) fn strongly_connected_components(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&u) = succ[v].get(*pos) {
                *pos += 1;
                if index[u] == UNSEEN {
                    index[u] = next;
                    low[u] = next;
                    next += 1;
                    stack.push(u);
                    on_stack[u] = true;
                    call.push((u, 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(u) = stack.pop() {
                        on_stack[u] = false;
                        comp.push(u);
                        if u == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// True when the component carries at least one edge (size > 1 or a loop).
pub(crate) fn has_cycle(comp: &[usize], succ: &[Vec<usize>]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

/// Removes vertices without in- or out-edges until stable. Returns the
/// surviving vertices in increasing order.
pub(crate) fn essential_vertices(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, out) in succ.iter().enumerate() {
        for &v in out {
            outdeg[u] += 1;
            indeg[v] += 1;
            pred[v].push(u);
        }
    }
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&u| indeg[u] == 0 || outdeg[u] == 0).collect();
    while let Some(u) = queue.pop_front() {
        if !alive[u] {
            continue;
        }
        alive[u] = false;
        for &v in &succ[u] {
            if alive[v] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        for &v in &pred[u] {
            if alive[v] {
                outdeg[v] -= 1;
                if outdeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
    }
    (0..n).filter(|&u| alive[u]).collect()
}

/// Shortest path with at least one edge from `from` to a vertex satisfying
/// `accept`, by BFS visiting successors in stored order. Intermediate
/// vertices must satisfy `allowed`. Returns the vertex sequence including
/// both ends.
pub(crate) fn shortest_path(
    succ: &[Vec<usize>],
    from: usize,
    accept: impl Fn(usize) -> bool,
    allowed: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(u) = queue.pop_front() {
        for &v in &succ[u] {
            if accept(v) {
                let mut path = vec![v, u];
                let mut x = u;
                while x != from {
                    x = parent[x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            if !seen[v] && allowed(v) {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}
