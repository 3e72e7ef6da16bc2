use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{check_bound, check_rule, MealyStrategy, Rule, StateId, Strategy};
use crate::error::{Error, Result};
use crate::game::{GameGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    Green,
    Red,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Black => "black",
            Color::Green => "green",
            Color::Red => "red",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamRule {
    Black(Rule),
    /// A counter test: `green` while the counter is positive (and decrements
    /// it), `red` once it is zero.
    Test {
        green: Rule,
        red: Rule,
    },
}

impl ParamRule {
    pub fn select(self, counter: u64) -> (Rule, Color) {
        match self {
            ParamRule::Black(r) => (r, Color::Black),
            ParamRule::Test { green, .. } if counter > 0 => (green, Color::Green),
            ParamRule::Test { red, .. } => (red, Color::Red),
        }
    }

    pub fn is_test(self) -> bool {
        matches!(self, ParamRule::Test { .. })
    }
}

/// A Mealy machine with one decrement-only counter. Initialising the counter
/// with `n` yields the `n`-th strategy of the realized sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamAutomaton {
    names: Vec<String>,
    init: StateId,
    vertex_count: usize,
    rows: Vec<ParamRule>,
}

impl ParamAutomaton {
    /// Builds and validates an automaton from a row table indexed `state * |V| + vertex`.
    pub fn new(
        g: &GameGraph,
        names: Vec<String>,
        init: StateId,
        rows: Vec<ParamRule>,
    ) -> Result<Self> {
        let p = ParamAutomaton {
            names,
            init,
            vertex_count: g.vertex_count(),
            rows,
        };
        p.validate(g)?;
        Ok(p)
    }

    /// The constant sequence of a Mealy strategy.
    pub fn from_mealy(m: &MealyStrategy) -> Self {
        ParamAutomaton {
            names: m.states().map(|s| m.state_name(s).to_string()).collect(),
            init: m.init(),
            vertex_count: m.vertex_count(),
            rows: m.rows().iter().map(|&r| ParamRule::Black(r)).collect(),
        }
    }

    /// The Mealy machine this automaton is, if it never reads its counter.
    pub fn to_mealy(&self) -> Option<MealyStrategy> {
        let rows = self
            .rows
            .iter()
            .map(|r| match r {
                ParamRule::Black(r) => Some(*r),
                ParamRule::Test { .. } => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(MealyStrategy::new_unchecked(
            self.names.clone(),
            self.init,
            self.vertex_count,
            rows,
        ))
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
            let name = self.state_name(s);
            for v in g.vertices() {
                match self.rule(s, v) {
                    ParamRule::Black(r) => check_rule(g, self.names.len(), name, v, r)?,
                    ParamRule::Test { green, red } => {
                        check_rule(g, self.names.len(), name, v, green)?;
                        check_rule(g, self.names.len(), name, v, red)?;
                    }
                }
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

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn rule(&self, s: StateId, v: VertexId) -> ParamRule {
        self.rows[s.index() * self.vertex_count + v.index()]
    }

    pub fn has_tests(&self) -> bool {
        self.rows.iter().any(|r| r.is_test())
    }

    /// Exchanges every green rule with its red counterpart.
    pub fn swap_colors(&self) -> ParamAutomaton {
        let rows = self
            .rows
            .iter()
            .map(|r| match *r {
                ParamRule::Test { green, red } => ParamRule::Test {
                    green: red,
                    red: green,
                },
                black => black,
            })
            .collect();
        ParamAutomaton {
            rows,
            ..self.clone()
        }
    }

    /// The `n`-th strategy, run lazily with the counter kept in the state.
    pub fn instance(&self, n: u64) -> Instance<'_> {
        Instance {
            param: self,
            counter: n,
        }
    }

    /// The `n`-th strategy as an explicit Mealy machine over (counter, state)
    /// pairs reachable from (n, init) by reading arbitrary vertices.
    pub fn instantiate(&self, n: u64) -> MealyStrategy {
        let nv = self.vertex_count;
        let root = (n, self.init);
        let mut index: HashMap<(u64, StateId), StateId> = HashMap::new();
        let mut order = vec![root];
        index.insert(root, StateId(0));
        let mut queue = VecDeque::from([root]);
        let mut rows: Vec<Rule> = Vec::new();
        while let Some((c, s)) = queue.pop_front() {
            for v in 0..nv {
                let (rule, color) = self.rule(s, VertexId::from(v)).select(c);
                let c2 = if color == Color::Green { c - 1 } else { c };
                let key = (c2, rule.next);
                let id = *index.entry(key).or_insert_with(|| {
                    order.push(key);
                    queue.push_back(key);
                    StateId::from(order.len() - 1)
                });
                rows.push(Rule::new(id, rule.mv));
            }
        }
        let names = order
            .iter()
            .map(|&(c, s)| format!("{}@{}", self.state_name(s), c))
            .collect();
        MealyStrategy::new_unchecked(names, StateId(0), nv, rows)
    }

    /// Memory states occurring in the colored product with `g`.
    pub fn reachable_state_count(&self, g: &GameGraph) -> usize {
        let prod = super::colored_product(self, g);
        let mut seen: Vec<bool> = vec![false; self.state_count()];
        for &(s, _) in prod.states() {
            seen[s.index()] = true;
        }
        seen.into_iter().filter(|&b| b).count()
    }

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
        let mut line = |s: StateId, v: VertexId, r: Rule, color: Color| {
            out.push_str(&format!(
                "trans {} {} -> {}",
                self.state_name(s),
                g.name(v),
                self.state_name(r.next)
            ));
            if let Some(w) = r.mv {
                out.push_str(&format!(" move={}", g.name(w)));
            }
            out.push_str(&format!(" color={color}\n"));
        };
        for s in self.states() {
            for v in g.vertices() {
                match self.rule(s, v) {
                    ParamRule::Black(r) => line(s, v, r, Color::Black),
                    ParamRule::Test { green, red } => {
                        line(s, v, green, Color::Green);
                        line(s, v, red, Color::Red);
                    }
                }
            }
        }
        out
    }
}

/// The strategy realized by a parameterized automaton for one counter value.
#[derive(Debug, Clone, Copy)]
pub struct Instance<'a> {
    param: &'a ParamAutomaton,
    counter: u64,
}

impl Instance<'_> {
    pub fn counter(&self) -> u64 {
        self.counter
    }
}

impl Strategy for Instance<'_> {
    type State = (u64, StateId);

    fn vertex_count(&self) -> usize {
        self.param.vertex_count
    }

    fn initial(&self) -> Self::State {
        (self.counter, self.param.init)
    }

    fn step(&self, (c, s): Self::State, v: VertexId) -> (Self::State, Option<VertexId>) {
        let (rule, color) = self.param.rule(s, v).select(c);
        let c2 = if color == Color::Green { c - 1 } else { c };
        ((c2, rule.next), rule.mv)
    }

    fn describe(&self, (c, s): Self::State) -> String {
        format!("{}@{}", self.param.state_name(s), c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{helpme, mealy, param};

    /// Vertices visited by `s` against an antagonist that always returns to v0.
    fn stubborn_run(g: &GameGraph, s: &MealyStrategy, steps: usize) -> Vec<String> {
        let v0 = g.vertex("v0").unwrap();
        let (mut m, mut v) = (s.init(), g.init());
        let mut out = vec![g.name(v).to_string()];
        for _ in 0..steps {
            let next = if g.is_protagonist(v) {
                s.choose(m, v).unwrap()
            } else if g.is_leaf(v) {
                v
            } else {
                v0
            };
            m = s.update(m, v);
            v = next;
            out.push(g.name(v).to_string());
        }
        out
    }

    #[test]
    fn instantiate_zero_settles_immediately() {
        let g = helpme();
        let s0 = param(&g, "sk.param").instantiate(0);
        assert_eq!(stubborn_run(&g, &s0, 2), ["v0", "l1", "l1"]);
        assert_eq!(s0.state_count(), 1);
    }

    #[test]
    fn instantiate_three_loops_three_times() {
        let g = helpme();
        let s3 = param(&g, "sk.param").instantiate(3);
        assert_eq!(
            stubborn_run(&g, &s3, 8),
            ["v0", "v1", "v0", "v1", "v0", "v1", "v0", "l1", "l1"]
        );
        assert_eq!(s3.state_count(), 4);
    }

    #[test]
    fn black_automata_ignore_the_counter() {
        let g = helpme();
        let p = param(&g, "somega.param");
        let somega = mealy(&g, "somega.mealy");
        for n in [0, 5] {
            let s = p.instantiate(n);
            assert_eq!(stubborn_run(&g, &s, 6), stubborn_run(&g, &somega, 6));
            assert!(crate::automata::sync_product(&s, &g, &somega)
                .divergence_states()
                .next()
                .is_none());
        }
    }

    #[test]
    fn lazy_instance_matches_explicit() {
        let g = helpme();
        let p = param(&g, "sk_shifted.param");
        for n in 0..4 {
            let explicit = p.instantiate(n);
            let lazy = MealyStrategy::materialize(&p.instance(n), &g).unwrap();
            assert!(crate::automata::sync_product(&explicit, &g, &lazy)
                .divergence_states()
                .next()
                .is_none());
        }
    }

    #[test]
    fn swapping_colors_twice_is_identity() {
        let g = helpme();
        let p = param(&g, "sk.param");
        assert_eq!(p.swap_colors().swap_colors(), p);
        assert_eq!(p.swap_colors(), param(&g, "sk_swapped.param"));
    }
}
