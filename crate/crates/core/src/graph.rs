//! Internal digraph helpers: Tarjan components and reachability.

/// Strongly connected components of a digraph given by adjacency lists.
/// Components come out in reverse topological order of the condensation.
pub(crate) fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    #[derive(Clone)]
    struct State {
        index: usize,
        low: usize,
        on_stack: bool,
    }
    const UNSEEN: usize = usize::MAX;

    let n = adj.len();
    let mut state = vec![
        State {
            index: UNSEEN,
            low: 0,
            on_stack: false,
        };
        n
    ];
    let mut next_index = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    // explicit call stack: (vertex, next child position)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if state[root].index != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        while let Some(&mut (v, ref mut child)) = calls.last_mut() {
            if *child == 0 {
                state[v].index = next_index;
                state[v].low = next_index;
                next_index += 1;
                stack.push(v);
                state[v].on_stack = true;
            }
            if let Some(&u) = adj[v].get(*child) {
                *child += 1;
                if state[u].index == UNSEEN {
                    calls.push((u, 0));
                } else if state[u].on_stack {
                    state[v].low = state[v].low.min(state[u].index);
                }
            } else {
                if state[v].low == state[v].index {
                    let mut comp = Vec::new();
                    loop {
                        let u = stack.pop().expect("tarjan stack underflow");
                        state[u].on_stack = false;
                        comp.push(u);
                        if u == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
                calls.pop();
                if let Some(&mut (parent, _)) = calls.last_mut() {
                    state[parent].low = state[parent].low.min(state[v].low);
                }
            }
        }
    }
    components
}

/// Vertices reachable from `starts` (inclusive).
pub(crate) fn reachable_from(adj: &[Vec<usize>], starts: impl Iterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue: Vec<usize> = Vec::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push(s);
        }
    }
    while let Some(v) = queue.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push(u);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_on_two_cycles_and_a_bridge() {
        // 0 <-> 1, 2 <-> 3, 1 -> 2, 4 isolated
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let mut comps = tarjan_scc(&adj);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn scc_emits_sinks_before_sources() {
        let adj = vec![vec![1], vec![]];
        let comps = tarjan_scc(&adj);
        assert_eq!(comps, vec![vec![1], vec![0]]);
    }

    #[test]
    fn reachability() {
        let adj = vec![vec![1], vec![2], vec![], vec![0]];
        let seen = reachable_from(&adj, std::iter::once(1));
        assert_eq!(seen, vec![false, true, true, false]);
    }

    #[test]
    fn scc_deep_chain_does_not_overflow() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|v| if v + 1 < n { vec![v + 1] } else { vec![] }).collect();
        let comps = tarjan_scc(&adj);
        assert_eq!(comps.len(), n);
    }
}
