use std::collections::{HashMap, VecDeque};

use super::{check_bound, check_rule, Rule, StateId, Strategy};
use crate::error::{Error, Result};
use crate::game::{GameGraph, VertexId};

/// A Mealy machine over a game's vertex alphabet, total on states × vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyStrategy {
    names: Vec<String>,
    init: StateId,
    vertex_count: usize,
    rows: Vec<Rule>,
}

impl MealyStrategy {
    /// Builds and validates a machine from a row table indexed `state * |V| + vertex`.
    pub fn new(g: &GameGraph, names: Vec<String>, init: StateId, rows: Vec<Rule>) -> Result<Self> {
        let m = MealyStrategy {
            names,
            init,
            vertex_count: g.vertex_count(),
            rows,
        };
        m.validate(g)?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        names: Vec<String>,
        init: StateId,
        vertex_count: usize,
        rows: Vec<Rule>,
    ) -> Self {
        debug_assert_eq!(rows.len(), names.len() * vertex_count);
        MealyStrategy {
            names,
            init,
            vertex_count,
            rows,
        }
    }

    /// A memoryless strategy: `moves[v]` must be set for every protagonist vertex.
    pub fn positional(g: &GameGraph, moves: &[Option<VertexId>]) -> Result<Self> {
        let rows = g
            .vertices()
            .map(|v| {
                Rule::new(
                    StateId(0),
                    if g.is_protagonist(v) {
                        moves[v.index()]
                    } else {
                        None
                    },
                )
            })
            .collect();
        MealyStrategy::new(g, vec!["m".to_string()], StateId(0), rows)
    }

    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        check_bound(self.vertex_count, g)?;
        if self.names.is_empty() || self.init.index() >= self.names.len() {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        if self.rows.len() != self.names.len() * self.vertex_count {
            return Err(Error::InvalidAutomaton(
                "transition table is not total".into(),
            ));
        }
        for s in self.states() {
            for v in g.vertices() {
                check_rule(g, self.names.len(), self.state_name(s), v, self.rule(s, v))?;
            }
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.names.len()).map(StateId::from)
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s.index()]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name).map(StateId::from)
    }

    pub fn rule(&self, s: StateId, v: VertexId) -> Rule {
        self.rows[s.index() * self.vertex_count + v.index()]
    }

    pub fn update(&self, s: StateId, v: VertexId) -> StateId {
        self.rule(s, v).next
    }

    /// The move at a protagonist vertex.
    pub fn choose(&self, s: StateId, v: VertexId) -> Option<VertexId> {
        self.rule(s, v).mv
    }

    pub(crate) fn rows(&self) -> &[Rule] {
        &self.rows
    }

    /// Memory states that occur in the product with `g` from the initial state.
    pub fn reachable_state_count(&self, g: &GameGraph) -> usize {
        reachable_memory(self, g).len()
    }

    /// Runs any finite-memory strategy against `g` and tabulates the memory
    /// states reachable in the product. Rows for (state, vertex) pairs that do
    /// not occur in the product keep the strategy's move but stay in place.
    pub fn materialize<S: Strategy>(strategy: &S, g: &GameGraph) -> Result<Self> {
        check_bound(strategy.vertex_count(), g)?;
        let order = reachable_memory(strategy, g);
        let index: HashMap<S::State, StateId> = order
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, StateId::from(i)))
            .collect();
        let mut rows = Vec::with_capacity(order.len() * g.vertex_count());
        for (i, &s) in order.iter().enumerate() {
            for v in g.vertices() {
                let (next, mv) = strategy.step(s, v);
                let next = index.get(&next).copied().unwrap_or(StateId::from(i));
                rows.push(Rule::new(next, mv));
            }
        }
        let names = order.iter().map(|&s| strategy.describe(s)).collect();
        Ok(MealyStrategy::new_unchecked(
            names,
            StateId(0),
            g.vertex_count(),
            rows,
        ))
    }

    /// Canonical text in the Mealy format.
    pub fn render(&self, g: &GameGraph) -> String {
        let mut out = String::new();
        for s in self.states() {
            out.push_str("state ");
            out.push_str(self.state_name(s));
            if s == self.init {
                out.push_str(" init");
            }
            out.push('\n');
        }
        for s in self.states() {
            for v in g.vertices() {
                let r = self.rule(s, v);
                out.push_str(&format!(
                    "trans {} {} -> {}",
                    self.state_name(s),
                    g.name(v),
                    self.state_name(r.next)
                ));
                if let Some(w) = r.mv {
                    out.push_str(&format!(" move={}", g.name(w)));
                }
                out.push('\n');
            }
        }
        out
    }
}

impl Strategy for MealyStrategy {
    type State = StateId;

    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn initial(&self) -> StateId {
        self.init
    }

    fn step(&self, state: StateId, v: VertexId) -> (StateId, Option<VertexId>) {
        let r = self.rule(state, v);
        (r.next, r.mv)
    }

    fn describe(&self, state: StateId) -> String {
        self.state_name(state).to_string()
    }
}

/// Memory states of the product with `g`, in BFS discovery order from
/// (initial state, initial vertex).
pub(crate) fn reachable_memory<S: Strategy>(strategy: &S, g: &GameGraph) -> Vec<S::State> {
    let mut seen = std::collections::HashSet::new();
    let mut order = Vec::new();
    let mut mem_seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    let root = (strategy.initial(), g.init());
    seen.insert(root);
    queue.push_back(root);
    while let Some((s, v)) = queue.pop_front() {
        if mem_seen.insert(s) {
            order.push(s);
        }
        let (next, mv) = strategy.step(s, v);
        let mut push = |w: VertexId| {
            if seen.insert((next, w)) {
                queue.push_back((next, w));
            }
        };
        match mv {
            Some(w) if g.is_protagonist(v) => push(w),
            _ => g.successors(v).iter().copied().for_each(&mut push),
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{helpme, mealy};

    #[test]
    fn positional_strategy_validates_moves() {
        let g = helpme();
        let v = |n| g.vertex(n);
        let mut moves = vec![None; g.vertex_count()];
        moves[0] = v("l1");
        let s = MealyStrategy::positional(&g, &moves).unwrap();
        assert_eq!(s.choose(s.init(), v("v0").unwrap()), v("l1"));
        moves[0] = v("l2");
        assert!(MealyStrategy::positional(&g, &moves).is_err());
        moves[0] = None;
        assert!(MealyStrategy::positional(&g, &moves).is_err());
    }

    #[test]
    fn materialize_keeps_behaviour() {
        let g = helpme();
        let s1 = mealy(&g, "s1.mealy");
        let m = MealyStrategy::materialize(&s1, &g).unwrap();
        assert_eq!(m, s1);
        assert_eq!(s1.reachable_state_count(&g), 2);
    }

    #[test]
    fn mismatched_game_is_rejected() {
        let g = helpme();
        let s = mealy(&g, "s0.mealy");
        let other = crate::game::parse_game("vertex v owner=A leaf=0\nedge v v\ninit v\n").unwrap();
        assert_eq!(
            s.validate(&other),
            Err(Error::Mismatch {
                expected: 1,
                found: 4
            })
        );
    }
}
