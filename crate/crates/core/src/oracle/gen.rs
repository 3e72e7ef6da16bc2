use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automata::{MealyStrategy, ParamAutomaton, ParamRule, Rule, StateId};
use crate::error::{Error, Result};
use crate::game::{GameBuilder, GameGraph, Player, VertexId};

/// Shape of randomly generated instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    pub vertex_count: usize,
    pub leaf_count: usize,
    /// Leaf payoffs are drawn from `-payoff_range..=payoff_range`.
    pub payoff_range: i64,
    pub max_out_degree: usize,
    pub mealy_states: usize,
    pub param_states: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 1,
            vertex_count: 5,
            leaf_count: 2,
            payoff_range: 3,
            max_out_degree: 2,
            mealy_states: 2,
            param_states: 2,
        }
    }
}

impl GenConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.leaf_count == 0 {
            return bad("at least one leaf is needed");
        }
        if self.vertex_count < self.leaf_count {
            return bad("more leaves than vertices");
        }
        if self.max_out_degree == 0 {
            return bad("out-degree must be at least 1");
        }
        if self.mealy_states == 0 || self.param_states == 0 {
            return bad("automata need at least one state");
        }
        if self.payoff_range < 0 {
            return bad("payoff range must be non-negative");
        }
        Ok(())
    }
}

/// A seeded stream of random games and strategies.
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: &GenConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Generator {
            cfg: cfg.clone(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        })
    }

    fn owner(&mut self) -> Player {
        if self.rng.random_bool(0.5) {
            Player::Protagonist
        } else {
            Player::Antagonist
        }
    }

    /// Inner vertices `v0, v1, ...` come first, then leaves `l0, l1, ...`.
    /// The play starts at the first vertex.
    pub fn game(&mut self) -> GameGraph {
        let n = self.cfg.vertex_count;
        let leaves = self.cfg.leaf_count;
        let inner = n - leaves;
        let r = self.cfg.payoff_range;
        let mut b = GameBuilder::new();
        let mut ids = Vec::with_capacity(n);
        for i in 0..inner {
            let owner = self.owner();
            ids.push(b.vertex(&format!("v{i}"), owner, None).expect("fresh name"));
        }
        for j in 0..leaves {
            let owner = self.owner();
            let pay = self.rng.random_range(-r..=r);
            ids.push(
                b.vertex(&format!("l{j}"), owner, Some(pay))
                    .expect("fresh name"),
            );
        }
        for (i, &u) in ids.iter().enumerate() {
            if i >= inner {
                b.edge(u, u);
                continue;
            }
            let degree = self.rng.random_range(1..=self.cfg.max_out_degree.min(n));
            for k in sample(&mut self.rng, n, degree) {
                b.edge(u, ids[k]);
            }
        }
        b.init(ids[0]);
        b.build().expect("generated games are well formed")
    }

    fn rule(&mut self, g: &GameGraph, states: usize, v: VertexId) -> Rule {
        let next = StateId::from(self.rng.random_range(0..states));
        let mv = g.is_protagonist(v).then(|| {
            let succ = g.successors(v);
            succ[self.rng.random_range(0..succ.len())]
        });
        Rule::new(next, mv)
    }

    pub fn mealy(&mut self, g: &GameGraph, states: usize) -> MealyStrategy {
        let rows = (0..states)
            .flat_map(|_| g.vertices().collect::<Vec<_>>())
            .map(|v| self.rule(g, states, v))
            .collect();
        let names = (0..states).map(|i| format!("m{i}")).collect();
        MealyStrategy::new(g, names, StateId(0), rows).expect("generated rules are valid")
    }

    /// A random parameterized automaton; about one inner pair in three
    /// carries a counter test.
    pub fn param(&mut self, g: &GameGraph, states: usize) -> ParamAutomaton {
        let mut rows = Vec::with_capacity(states * g.vertex_count());
        for _ in 0..states {
            for v in g.vertices() {
                let test = !g.is_leaf(v) && self.rng.random_bool(1.0 / 3.0);
                rows.push(if test {
                    ParamRule::Test {
                        green: self.rule(g, states, v),
                        red: self.rule(g, states, v),
                    }
                } else {
                    ParamRule::Black(self.rule(g, states, v))
                });
            }
        }
        let names = (0..states).map(|i| format!("p{i}")).collect();
        ParamAutomaton::new(g, names, StateId(0), rows).expect("generated rules are valid")
    }

    pub fn states(&mut self, max: usize) -> usize {
        self.rng.random_range(1..=max)
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }
}

pub fn gen_random_game(cfg: &GenConfig) -> Result<GameGraph> {
    Ok(Generator::new(cfg)?.game())
}

/// A strategy with `cfg.mealy_states` states, drawn from its own stream so
/// that it does not depend on how the game was drawn.
pub fn gen_random_mealy(cfg: &GenConfig, g: &GameGraph) -> Result<MealyStrategy> {
    let mut gen = Generator::new(cfg)?;
    gen.rng.set_stream(1);
    Ok(gen.mealy(g, cfg.mealy_states))
}

pub fn gen_random_param(cfg: &GenConfig, g: &GameGraph) -> Result<ParamAutomaton> {
    let mut gen = Generator::new(cfg)?;
    gen.rng.set_stream(2);
    Ok(gen.param(g, cfg.param_states))
}

/// A help-me game reached through an antagonist corridor, sized to exactly
/// `size` vertices, with the counting chain on it: ask for help while the
/// counter lasts, then settle.
pub fn lollipop(size: usize) -> Result<(GameGraph, ParamAutomaton)> {
    if size < 4 {
        return Err(Error::Config("a lollipop needs at least 4 vertices".into()));
    }
    let stick = size - 4;
    let mut b = GameBuilder::new();
    let corridor: Vec<VertexId> = (0..stick)
        .map(|i| b.vertex(&format!("s{i}"), Player::Antagonist, None))
        .collect::<Result<_>>()?;
    let v0 = b.vertex("v0", Player::Protagonist, None)?;
    let v1 = b.vertex("v1", Player::Antagonist, None)?;
    let l1 = b.vertex("l1", Player::Antagonist, Some(1))?;
    let l2 = b.vertex("l2", Player::Antagonist, Some(2))?;
    for w in corridor.windows(2) {
        b.edge(w[0], w[1]);
    }
    if let Some(&last) = corridor.last() {
        b.edge(last, v0);
    }
    b.edge(v0, v1)
        .edge(v0, l1)
        .edge(v1, v0)
        .edge(v1, l2)
        .edge(l1, l1)
        .edge(l2, l2);
    b.init(corridor.first().copied().unwrap_or(v0));
    let g = b.build()?;

    let m = StateId(0);
    let rows = g
        .vertices()
        .map(|v| {
            if v == v0 {
                ParamRule::Test {
                    green: Rule::new(m, Some(v1)),
                    red: Rule::new(m, Some(l1)),
                }
            } else {
                ParamRule::Black(Rule::new(m, None))
            }
        })
        .collect();
    let p = ParamAutomaton::new(&g, vec!["m".into()], m, rows)?;
    Ok((g, p))
}
