//! Explicit products of strategies with a game graph.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::Serialize;

use super::{Color, ParamAutomaton, ParamRule, StateId, Strategy};
use crate::error::{Error, Result};
use crate::game::{GameGraph, VertexId};
use crate::reach::{extremal_values, Extremum};

/// Interns product states in BFS discovery order.
struct Interner<K> {
    keys: Vec<K>,
    index: HashMap<K, u32>,
}

impl<K: Copy + Eq + Hash> Interner<K> {
    fn new() -> Self {
        Interner {
            keys: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Returns the id and whether the key is new.
    fn intern(&mut self, k: K) -> (u32, bool) {
        if let Some(&i) = self.index.get(&k) {
            return (i, false);
        }
        let i = self.keys.len() as u32;
        self.keys.push(k);
        self.index.insert(k, i);
        (i, true)
    }
}

/// The one-player game left when the protagonist follows a fixed strategy:
/// states are (memory, vertex), the antagonist resolves all branching.
#[derive(Debug, Clone)]
pub struct OnePlayerProduct<M> {
    states: Vec<(M, VertexId)>,
    index: HashMap<(M, VertexId), u32>,
    parent: Vec<Option<u32>>,
    succ: Vec<Vec<u32>>,
    payoff: Vec<Option<i64>>,
}

/// Worst (`aval`) and best (`cval`) payoff over the plays of the product from
/// each state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyValues {
    pub aval: Vec<i64>,
    pub cval: Vec<i64>,
}

pub fn one_player_product<S: Strategy>(s: &S, g: &GameGraph) -> OnePlayerProduct<S::State> {
    OnePlayerProduct::build(s, g, [(s.initial(), g.init())])
}

impl<M: Copy + Eq + Hash> OnePlayerProduct<M> {
    /// The part of the product reachable from `roots`; roots get ids `0..`.
    pub fn build<S: Strategy<State = M>>(
        s: &S,
        g: &GameGraph,
        roots: impl IntoIterator<Item = (M, VertexId)>,
    ) -> Self {
        let mut ids = Interner::new();
        let mut queue = VecDeque::new();
        let mut parent = Vec::new();
        for r in roots {
            if ids.intern(r).1 {
                queue.push_back(r);
                parent.push(None);
            }
        }
        let mut succ: Vec<Vec<u32>> = Vec::new();
        while let Some((m, v)) = queue.pop_front() {
            let me = succ.len() as u32;
            let (next, mv) = s.step(m, v);
            let targets: &[VertexId] = match mv {
                Some(ref w) if g.is_protagonist(v) => std::slice::from_ref(w),
                _ => g.successors(v),
            };
            let mut out = Vec::with_capacity(targets.len());
            for &w in targets {
                let (i, fresh) = ids.intern((next, w));
                if fresh {
                    queue.push_back((next, w));
                    parent.push(Some(me));
                }
                out.push(i);
            }
            succ.push(out);
        }
        let payoff = ids.keys.iter().map(|&(_, v)| g.payoff(v)).collect();
        OnePlayerProduct {
            states: ids.keys,
            index: ids.index,
            parent,
            succ,
            payoff,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[(M, VertexId)] {
        &self.states
    }

    pub fn state(&self, i: usize) -> (M, VertexId) {
        self.states[i]
    }

    pub fn id(&self, m: M, v: VertexId) -> Option<usize> {
        self.index.get(&(m, v)).map(|&i| i as usize)
    }

    pub fn successors(&self, i: usize) -> &[u32] {
        &self.succ[i]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// The game history leading from a root to state `i` along a shortest path.
    pub fn history(&self, i: usize) -> Vec<VertexId> {
        let mut out = vec![self.states[i].1];
        let mut cur = i;
        while let Some(p) = self.parent[cur] {
            cur = p as usize;
            out.push(self.states[cur].1);
        }
        out.reverse();
        out
    }

    pub fn values(&self) -> StrategyValues {
        let get = |mode| {
            extremal_values(&self.succ, &self.payoff, mode, true)
                .into_iter()
                .map(|x| x.expect("every product state has an outcome"))
                .collect()
        };
        StrategyValues {
            aval: get(Extremum::Min),
            cval: get(Extremum::Max),
        }
    }
}

/// Two strategies run side by side on the same game, following their common
/// behaviour. Protagonist states where the two moves differ are terminal.
#[derive(Debug, Clone)]
pub struct SyncProduct<A, B> {
    states: Vec<(A, VertexId, B)>,
    parent: Vec<Option<u32>>,
    divergent: Vec<bool>,
    succ: Vec<Vec<u32>>,
}

pub fn sync_product<S1: Strategy, S2: Strategy>(
    s1: &S1,
    g: &GameGraph,
    s2: &S2,
) -> SyncProduct<S1::State, S2::State> {
    let mut ids = Interner::new();
    let root = (s1.initial(), g.init(), s2.initial());
    ids.intern(root);
    let mut parent = vec![None];
    let mut divergent = Vec::new();
    let mut succ = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some((m1, v, m2)) = queue.pop_front() {
        let me = succ.len() as u32;
        let (n1, mv1) = s1.step(m1, v);
        let (n2, mv2) = s2.step(m2, v);
        let targets: &[VertexId] = if g.is_protagonist(v) {
            if mv1 != mv2 {
                divergent.push(true);
                succ.push(Vec::new());
                continue;
            }
            std::slice::from_ref(mv1.as_ref().expect("protagonist move"))
        } else {
            g.successors(v)
        };
        divergent.push(false);
        let mut out = Vec::with_capacity(targets.len());
        for &w in targets {
            let (i, fresh) = ids.intern((n1, w, n2));
            if fresh {
                parent.push(Some(me));
                queue.push_back((n1, w, n2));
            }
            out.push(i);
        }
        succ.push(out);
    }
    SyncProduct {
        states: ids.keys,
        parent,
        divergent,
        succ,
    }
}

impl<A: Copy, B: Copy> SyncProduct<A, B> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> (A, VertexId, B) {
        self.states[i]
    }

    pub fn successors(&self, i: usize) -> &[u32] {
        &self.succ[i]
    }

    pub fn is_divergent(&self, i: usize) -> bool {
        self.divergent[i]
    }

    /// Divergence states in BFS discovery order.
    pub fn divergence_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.divergent[i])
    }

    /// Product states on the BFS-tree path from the root to `i`, inclusive.
    pub fn path_to(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut cur = i;
        while let Some(p) = self.parent[cur] {
            out.push(p as usize);
            cur = p as usize;
        }
        out.reverse();
        out
    }

    /// The game history leading to state `i` along a shortest path.
    pub fn history(&self, i: usize) -> Vec<VertexId> {
        self.path_to(i)
            .into_iter()
            .map(|j| self.states[j].1)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColoredEdge {
    pub from: u32,
    pub to: u32,
    pub color: Color,
}

/// Product of a parameterized automaton with the game, with counter tests
/// unfolded into a green and a red edge family.
#[derive(Debug, Clone)]
pub struct ColoredProduct {
    states: Vec<(StateId, VertexId)>,
    index: HashMap<(StateId, VertexId), u32>,
    edges: Vec<ColoredEdge>,
    out: Vec<Vec<u32>>,
}

pub fn colored_product(p: &ParamAutomaton, g: &GameGraph) -> ColoredProduct {
    let mut ids = Interner::new();
    let root = (p.init(), g.init());
    ids.intern(root);
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::new();
    let mut out = Vec::new();
    while let Some((m, v)) = queue.pop_front() {
        let me = out.len() as u32;
        let rules = match p.rule(m, v) {
            ParamRule::Black(r) => vec![(r, Color::Black)],
            ParamRule::Test { green, red } => vec![(green, Color::Green), (red, Color::Red)],
        };
        let mut mine = Vec::new();
        for (rule, color) in rules {
            let targets: &[VertexId] = match rule.mv {
                Some(ref w) if g.is_protagonist(v) => std::slice::from_ref(w),
                _ => g.successors(v),
            };
            for &w in targets {
                let (to, fresh) = ids.intern((rule.next, w));
                if fresh {
                    queue.push_back((rule.next, w));
                }
                mine.push(edges.len() as u32);
                edges.push(ColoredEdge {
                    from: me,
                    to,
                    color,
                });
            }
        }
        out.push(mine);
    }
    ColoredProduct {
        states: ids.keys,
        index: ids.index,
        edges,
        out,
    }
}

impl ColoredProduct {
    pub fn states(&self) -> &[(StateId, VertexId)] {
        &self.states
    }

    pub fn id(&self, m: StateId, v: VertexId) -> Option<usize> {
        self.index.get(&(m, v)).map(|&i| i as usize)
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    /// Edge ids leaving state `i`.
    pub fn out_edges(&self, i: usize) -> &[u32] {
        &self.out[i]
    }

    /// Edge between two states with the given color, if any.
    pub fn edge(&self, from: usize, to: usize, color: Color) -> Option<usize> {
        self.out[from]
            .iter()
            .map(|&e| e as usize)
            .find(|&e| self.edges[e].to as usize == to && self.edges[e].color == color)
    }

    /// Classifies a sequence of edge ids, which must form a path.
    pub fn path_counts(&self, path: &[usize]) -> Result<PathCounts> {
        for (i, &e) in path.iter().enumerate() {
            if e >= self.edges.len() {
                return Err(Error::InvalidPath(format!("no edge with id {e}")));
            }
            if i > 0 && self.edges[path[i - 1]].to != self.edges[e].from {
                return Err(Error::InvalidPath(format!(
                    "edge {} does not continue edge {}",
                    e,
                    path[i - 1]
                )));
            }
        }
        Ok(classify_colors(path.iter().map(|&e| self.edges[e].color)))
    }
}

/// Green and red edge counts of a colored path, and whether it is valid: no
/// green edge after a red one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PathCounts {
    pub valid: bool,
    pub green: u64,
    pub red: u64,
}

pub fn classify_colors(colors: impl IntoIterator<Item = Color>) -> PathCounts {
    let mut c = PathCounts {
        valid: true,
        green: 0,
        red: 0,
    };
    for color in colors {
        match color {
            Color::Black => {}
            Color::Green => {
                c.green += 1;
                if c.red > 0 {
                    c.valid = false;
                }
            }
            Color::Red => c.red += 1,
        }
    }
    c
}

/// Whether a valid path with these counts is followed by the strategy
/// obtained from counter value `k`.
pub fn compatible(counts: PathCounts, k: u64) -> bool {
    if counts.red == 0 {
        k >= counts.green
    } else {
        k == counts.green
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::MealyStrategy;
    use crate::testing::{helpme, mealy, param};

    fn names<M: Copy + Eq + Hash>(p: &OnePlayerProduct<M>, g: &GameGraph) -> Vec<String> {
        p.states()
            .iter()
            .map(|&(_, v)| g.name(v).to_string())
            .collect()
    }

    #[test]
    fn always_asking_never_settles() {
        let g = helpme();
        let p = one_player_product(&mealy(&g, "somega.mealy"), &g);
        assert_eq!(p.len(), 3);
        assert!(!names(&p, &g).contains(&"l1".to_string()));
        let vals = p.values();
        assert_eq!((vals.aval[0], vals.cval[0]), (0, 2));
    }

    #[test]
    fn settling_never_sees_l2() {
        let g = helpme();
        let p = one_player_product(&mealy(&g, "s0.mealy"), &g);
        assert!(!names(&p, &g).contains(&"l2".to_string()));
        let vals = p.values();
        assert_eq!((vals.aval[0], vals.cval[0]), (1, 1));
    }

    #[test]
    fn asking_once_keeps_both_leaves() {
        let g = helpme();
        let p = one_player_product(&mealy(&g, "s1.mealy"), &g);
        let vals = p.values();
        assert_eq!((vals.aval[0], vals.cval[0]), (1, 2));
    }

    #[test]
    fn single_loop_game_has_one_state() {
        let g = crate::game::parse_game("vertex v owner=P\nedge v v\ninit v\n").unwrap();
        let s = MealyStrategy::positional(&g, &[g.vertex("v")]).unwrap();
        let p = one_player_product(&s, &g);
        assert_eq!(p.len(), 1);
        assert_eq!(p.values().aval, vec![0]);
    }

    #[test]
    fn sync_with_itself_never_diverges() {
        let g = helpme();
        for f in ["s0.mealy", "s1.mealy", "somega.mealy"] {
            let s = mealy(&g, f);
            assert_eq!(sync_product(&s, &g, &s).divergence_states().count(), 0);
        }
    }

    #[test]
    fn settling_now_and_later_diverge_at_the_start() {
        let g = helpme();
        let (s0, s1) = (mealy(&g, "s0.mealy"), mealy(&g, "s1.mealy"));
        let sp = sync_product(&s0, &g, &s1);
        let d: Vec<_> = sp.divergence_states().collect();
        assert_eq!(d, vec![0]);
        assert_eq!(sp.state(0).1, g.vertex("v0").unwrap());
    }

    #[test]
    fn asking_once_and_always_diverge_after_one_loop() {
        let g = helpme();
        let (s1, so) = (mealy(&g, "s1.mealy"), mealy(&g, "somega.mealy"));
        let sp = sync_product(&s1, &g, &so);
        let d: Vec<_> = sp.divergence_states().collect();
        assert_eq!(d.len(), 1);
        let h: Vec<_> = sp.history(d[0]).into_iter().map(|v| g.name(v)).collect();
        assert_eq!(h, ["v0", "v1", "v0"]);
    }

    #[test]
    fn colored_product_of_sk() {
        let g = helpme();
        let cp = colored_product(&param(&g, "sk.param"), &g);
        let m = StateId(0);
        let at = |n: &str| cp.id(m, g.vertex(n).unwrap()).unwrap();
        assert!(cp.edge(at("v0"), at("v1"), Color::Green).is_some());
        assert!(cp.edge(at("v0"), at("l1"), Color::Red).is_some());
        let colored: Vec<_> = cp
            .edges()
            .iter()
            .filter(|e| e.color != Color::Black)
            .collect();
        assert_eq!(colored.len(), 2);

        let swapped = colored_product(&param(&g, "sk_swapped.param"), &g);
        let at = |n: &str| swapped.id(m, g.vertex(n).unwrap()).unwrap();
        assert!(swapped.edge(at("v0"), at("v1"), Color::Red).is_some());
        assert!(swapped.edge(at("v0"), at("l1"), Color::Green).is_some());
    }

    #[test]
    fn black_automaton_has_no_colored_edges() {
        let g = helpme();
        let cp = colored_product(&param(&g, "somega.param"), &g);
        assert!(cp.edges().iter().all(|e| e.color == Color::Black));
    }

    #[test]
    fn edge_count_matches_rules() {
        let g = helpme();
        for f in ["sk.param", "sk_shifted.param", "somega.param"] {
            let p = param(&g, f);
            let cp = colored_product(&p, &g);
            let expected: usize = cp
                .states()
                .iter()
                .map(|&(m, v)| {
                    let per_rule = if g.is_protagonist(v) {
                        1
                    } else {
                        g.successors(v).len()
                    };
                    let rules = if p.rule(m, v).is_test() { 2 } else { 1 };
                    per_rule * rules
                })
                .sum();
            assert_eq!(cp.edges().len(), expected, "{f}");
        }
    }

    #[test]
    fn color_sequences() {
        use Color::*;
        let c = classify_colors([Green, Black, Red, Red]);
        assert_eq!((c.valid, c.green, c.red), (true, 1, 2));
        assert!(!classify_colors([Red, Green]).valid);
        let c = classify_colors([Green, Green, Black]);
        assert_eq!((c.valid, c.green, c.red), (true, 2, 0));
    }

    #[test]
    fn compatibility_with_counter_values() {
        let counts = |green, red| PathCounts {
            valid: true,
            green,
            red,
        };
        assert!(compatible(counts(2, 0), 3));
        assert!(!compatible(counts(2, 1), 3));
        assert!(compatible(counts(2, 1), 2));
    }

    #[test]
    fn path_counts_reject_broken_paths() {
        let g = helpme();
        let cp = colored_product(&param(&g, "sk.param"), &g);
        let m = StateId(0);
        let at = |n: &str| cp.id(m, g.vertex(n).unwrap()).unwrap();
        let green = cp.edge(at("v0"), at("v1"), Color::Green).unwrap();
        let back = cp.edge(at("v1"), at("v0"), Color::Black).unwrap();
        let red = cp.edge(at("v0"), at("l1"), Color::Red).unwrap();
        let c = cp.path_counts(&[green, back, red]).unwrap();
        assert_eq!((c.valid, c.green, c.red), (true, 1, 1));
        assert!(cp.path_counts(&[green, red]).is_err());
        assert!(cp.path_counts(&[usize::MAX]).is_err());
    }

    #[test]
    fn values_of_an_unreachable_state_are_not_needed() {
        let g = helpme();
        let s0 = mealy(&g, "s0.mealy");
        let p = one_player_product(&s0, &g);
        assert!(p.id(StateId(0), g.vertex("l2").unwrap()).is_none());
    }
}
