//! Best/worst reachable outcome on an explicit successor graph.
//!
//! Every node has at least one successor. Nodes flagged with a payoff are
//! absorbing for value purposes: any infinite path through them pays that
//! payoff. Infinite paths that stay on unflagged nodes pay 0, which is only
//! possible if they eventually loop inside a cyclic strongly connected
//! component of unflagged nodes.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    fn pick(self, a: i64, b: i64) -> i64 {
        match self {
            Extremum::Min => a.min(b),
            Extremum::Max => a.max(b),
        }
    }

    fn join(self, a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(self.pick(x, y)),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

/// For every node, the extremum over `{payoff(n) : n reachable}` together with
/// `0` when a cyclic component of payoff-free nodes is reachable and
/// `count_loops` is set. `None` means the set is empty, which can only happen
/// when loops are not counted.
pub(crate) fn extremal_values(
    succ: &[Vec<u32>],
    payoff: &[Option<i64>],
    mode: Extremum,
    count_loops: bool,
) -> Vec<Option<i64>> {
    let n = succ.len();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, n);
    for _ in 0..n {
        graph.add_node(());
    }
    for (u, list) in succ.iter().enumerate() {
        for &w in list {
            graph.add_edge(NodeIndex::new(u), NodeIndex::new(w as usize), ());
        }
    }

    // Components arrive sinks first.
    let sccs = tarjan_scc(&graph);
    let mut comp = vec![usize::MAX; n];
    for (c, members) in sccs.iter().enumerate() {
        for m in members {
            comp[m.index()] = c;
        }
    }

    let mut comp_value: Vec<Option<i64>> = vec![None; sccs.len()];
    for (c, members) in sccs.iter().enumerate() {
        let mut best = None;
        let cyclic = members.len() > 1 || {
            let u = members[0].index();
            succ[u].contains(&(u as u32))
        };
        for m in members {
            let u = m.index();
            match payoff[u] {
                Some(p) => best = mode.join(best, Some(p)),
                None if cyclic && count_loops => best = mode.join(best, Some(0)),
                None => {}
            }
            for &w in &succ[u] {
                let cw = comp[w as usize];
                if cw != c {
                    best = mode.join(best, comp_value[cw]);
                }
            }
        }
        comp_value[c] = best;
    }
    (0..n).map(|u| comp_value[comp[u]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_count_as_zero_only_when_requested() {
        // 0 <-> 1, 1 -> 2 (leaf 5), 2 -> 2
        let succ = vec![vec![1], vec![0, 2], vec![2]];
        let pay = vec![None, None, Some(5)];
        let max = extremal_values(&succ, &pay, Extremum::Max, true);
        let min = extremal_values(&succ, &pay, Extremum::Min, true);
        assert_eq!(max, vec![Some(5); 3]);
        assert_eq!(min, vec![Some(0), Some(0), Some(5)]);
        let min_no_loops = extremal_values(&succ, &pay, Extremum::Min, false);
        assert_eq!(min_no_loops, vec![Some(5); 3]);
    }

    #[test]
    fn acyclic_chain_without_leaves_is_empty() {
        // 0 -> 1 -> 1 (self-loop on an unflagged node counts as a loop)
        let succ = vec![vec![1], vec![1]];
        let pay = vec![None, None];
        assert_eq!(
            extremal_values(&succ, &pay, Extremum::Max, false),
            vec![None, None]
        );
        assert_eq!(
            extremal_values(&succ, &pay, Extremum::Max, true),
            vec![Some(0), Some(0)]
        );
    }
}
