//! Construction of optimal strategies and improvement of a strategy to a
//! preadmissible one, and from there to an admissible strategy or a maximal
//! uniform chain.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::automata::{MealyStrategy, ParamAutomaton, ParamRule, Rule, StateId};
use crate::dominance::{analyse, problematic, Profile};
use crate::error::{Error, Result};
use crate::game::{GameGraph, VertexId};
use crate::values::{threshold_region, GameValues};

/// A positional move for every protagonist vertex that guarantees the
/// vertex's antagonistic value from wherever the play currently is.
///
/// Above 0 the move strictly decreases the attractor rank towards leaves
/// paying at least the value; at or below 0 it stays where the value is
/// still guaranteed. Ties go to the first successor in declaration order.
pub fn worst_case_moves(g: &GameGraph, gv: &GameValues) -> Vec<Option<VertexId>> {
    let mut ranks: HashMap<i64, Vec<Option<u32>>> = HashMap::new();
    g.vertices()
        .map(|u| {
            if !g.is_protagonist(u) {
                return None;
            }
            let t = gv.aval(u);
            let succ = g.successors(u);
            let pick = if g.is_leaf(u) {
                succ.first()
            } else if t > 0 {
                let r = ranks
                    .entry(t)
                    .or_insert_with(|| threshold_region(g, t).1.expect("ranks above 0"));
                let mine = r[u.index()].expect("the value is guaranteed");
                succ.iter()
                    .find(|w| r[w.index()].is_some_and(|rw| rw < mine))
            } else {
                succ.iter().find(|w| gv.aval(**w) >= t)
            };
            Some(*pick.expect("a value-preserving successor exists"))
        })
        .collect()
}

/// A memoryless strategy achieving the antagonistic value from every vertex.
pub fn synth_worst_case_optimal(g: &GameGraph) -> MealyStrategy {
    let gv = GameValues::compute(g);
    MealyStrategy::positional(g, &worst_case_moves(g, &gv)).expect("moves follow edges")
}

/// A cooperative route from `v` inside the region where `aVal(v)` stays
/// guaranteed, ending at a leaf paying `acVal(v)` or, when that value is 0
/// and comes from an infinite play, closing into a cycle. Returns the
/// vertices and the index of the vertex that follows the last one.
fn best_route(g: &GameGraph, gv: &GameValues, v: VertexId) -> (Vec<VertexId>, usize) {
    let t = gv.aval(v);
    let goal = gv.acval(v);
    let inside = |u: VertexId| gv.aval(u) >= t;
    let n = g.vertex_count();

    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([v]);
    seen[v.index()] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        if g.is_leaf(u) {
            continue;
        }
        for &w in g.successors(u) {
            if inside(w) && !seen[w.index()] {
                seen[w.index()] = true;
                parent[w.index()] = Some(u);
                queue.push_back(w);
            }
        }
    }
    let path_to = |mut u: VertexId| {
        let mut p = vec![u];
        while let Some(q) = parent[u.index()] {
            p.push(q);
            u = q;
        }
        p.reverse();
        p
    };

    if let Some(&leaf) = order.iter().find(|&&u| g.payoff(u) == Some(goal)) {
        let p = path_to(leaf);
        let last = p.len() - 1;
        return (p, last);
    }

    // No leaf pays the goal, so it is 0 and realized by a cycle of non-leaves
    // inside the region. Take the nearest vertex that lies on such a cycle.
    for &c in &order {
        if let Some(mut cycle) = cycle_through(g, c, &inside) {
            let mut p = path_to(c);
            let back = p.len() - 1;
            cycle.pop();
            p.extend(cycle);
            return (p, back);
        }
    }
    unreachable!("the antagonistic-cooperative value is realized by some play")
}

/// A shortest cycle from `c` back to `c` over non-leaf vertices in the
/// region, without its first vertex.
fn cycle_through(
    g: &GameGraph,
    c: VertexId,
    inside: &impl Fn(VertexId) -> bool,
) -> Option<Vec<VertexId>> {
    if g.is_leaf(c) {
        return None;
    }
    let n = g.vertex_count();
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([c]);
    while let Some(u) = queue.pop_front() {
        for &w in g.successors(u) {
            if g.is_leaf(w) || !inside(w) {
                continue;
            }
            if w == c {
                let mut cyc = vec![];
                let mut x = u;
                while x != c {
                    cyc.push(x);
                    x = parent[x.index()].expect("tree path");
                }
                cyc.reverse();
                cyc.push(c);
                return Some(cyc);
            }
            if !seen[w.index()] {
                seen[w.index()] = true;
                parent[w.index()] = Some(u);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Rows of a strategy that follows `route` from its first vertex and falls
/// back to worst-case optimal play at the first deviation. States are the
/// route positions followed by the fallback; `base` offsets every state id.
fn wco_rows(
    g: &GameGraph,
    opt: &[Option<VertexId>],
    route: &[VertexId],
    back: usize,
    base: usize,
) -> Vec<Rule> {
    let k = route.len();
    let fallback = StateId::from(base + k);
    let nv = g.vertex_count();
    let mut rows = Vec::with_capacity((k + 1) * nv);
    for (i, &expected) in route.iter().enumerate() {
        let next_i = if i + 1 < k { i + 1 } else { back };
        for v in g.vertices() {
            rows.push(if v == expected {
                let mv = g.is_protagonist(v).then(|| route[next_i]);
                Rule::new(StateId::from(base + next_i), mv)
            } else {
                Rule::new(fallback, opt[v.index()])
            });
        }
    }
    for v in g.vertices() {
        rows.push(Rule::new(fallback, opt[v.index()]));
    }
    rows
}

/// A strategy that, started at `v`, guarantees `aVal(v)` and still allows the
/// outcome `acVal(v)`: it hopes for the best route while the antagonist
/// cooperates and plays worst-case optimally as soon as it does not. The
/// returned machine starts at `v`; use it on `g.with_init(v)`.
pub fn synth_wco(g: &GameGraph, v: VertexId) -> MealyStrategy {
    let gv = GameValues::compute(g);
    let opt = worst_case_moves(g, &gv);
    let (route, back) = best_route(g, &gv, v);
    let rows = wco_rows(g, &opt, &route, back, 0);
    let mut names: Vec<String> = (0..route.len()).map(|i| format!("hope{i}")).collect();
    names.push("guard".to_string());
    MealyStrategy::new(g, names, StateId(0), rows).expect("routes follow edges")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RewireKind {
    /// Redirected into the hopeful strategy of the vertex.
    Hope,
    /// Made to act as at an earlier, better visit of the same vertex.
    Copy,
    /// Given a counter test: the earlier behaviour while the counter lasts,
    /// the original one afterwards.
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rewired {
    pub state: String,
    pub vertex: VertexId,
    pub kind: RewireKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preadmissible {
    pub strategy: MealyStrategy,
    pub rewired: Vec<Rewired>,
    pub rounds: usize,
}

/// Returns a preadmissible strategy weakly dominating `s`: problematic
/// witness states are redirected, round by round, into the hopeful strategy
/// of their vertex until none remain.
pub fn preadmissibilize(s: &MealyStrategy, g: &GameGraph) -> Result<Preadmissible> {
    s.validate(g)?;
    let gv = GameValues::compute(g);
    let opt = worst_case_moves(g, &gv);
    let nv = g.vertex_count();
    let mut names: Vec<String> = s.states().map(|m| s.state_name(m).to_string()).collect();
    let mut rows: Vec<Rule> = s.rows().to_vec();
    let mut entry: Vec<Option<Rule>> = vec![None; nv];
    let mut rewired = Vec::new();
    let max_rounds = nv + 1;

    for round in 0..=max_rounds {
        let current = MealyStrategy::new(g, names.clone(), s.init(), rows.clone())?;
        let p = Profile::new(&current, g)?;
        let bad = problematic(&p, g, &analyse(&p, &gv));
        if bad.is_empty() {
            return Ok(Preadmissible {
                strategy: current,
                rewired,
                rounds: round,
            });
        }
        if round == max_rounds {
            break;
        }
        for i in bad {
            let (m, v) = p.product().state(i);
            let rule = *entry[v.index()].get_or_insert_with(|| {
                let base = names.len();
                let (route, back) = best_route(g, &gv, v);
                let extra = wco_rows(g, &opt, &route, back, base);
                for j in 0..route.len() {
                    names.push(format!("{}.hope{j}", g.name(v)));
                }
                names.push(format!("{}.guard", g.name(v)));
                let first = extra[v.index()];
                rows.extend(extra);
                first
            });
            rows[m.index() * nv + v.index()] = rule;
            rewired.push(Rewired {
                state: names[m.index()].clone(),
                vertex: v,
                kind: RewireKind::Hope,
            });
        }
    }
    Err(Error::Config(format!(
        "no preadmissible strategy after {max_rounds} rounds"
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Improvement {
    /// An admissible strategy dominating the input.
    SingleStrategy(MealyStrategy),
    /// A maximal uniform chain whose members dominate the input.
    UniformChain(ParamAutomaton),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementResult {
    pub kind: Improvement,
    pub rewired: Vec<Rewired>,
}

/// Memory of the improved automaton: the original state plus, for each
/// witness vertex, the original state at its first good visit.
type Expanded = (StateId, Vec<Option<StateId>>);

/// Improves `s` to an admissible strategy or a maximal uniform chain that
/// dominates it.
///
/// After preadmissibilization every witness state (m, v) is preceded on
/// every path by a good visit (p, v). The memory is expanded to remember the
/// first such p. If `aVal(v) ≤ 0` the witness simply acts as p did, since
/// looping forever is no worse than the guaranteed value. Otherwise it acts
/// as p did only while the counter lasts.
pub fn improve_to_maximal(s: &MealyStrategy, g: &GameGraph) -> Result<ImprovementResult> {
    let pre = preadmissibilize(s, g)?;
    let sigma = pre.strategy;
    let mut rewired = pre.rewired;
    let gv = GameValues::compute(g);
    let profile = Profile::new(&sigma, g)?;
    let wa = analyse(&profile, &gv);
    if wa.witnesses.is_empty() {
        return Ok(ImprovementResult {
            kind: Improvement::SingleStrategy(sigma),
            rewired,
        });
    }

    let nv = g.vertex_count();
    let prod = profile.product();
    let mut slot: Vec<Option<usize>> = vec![None; nv];
    let mut tracked = 0;
    let mut is_witness = vec![false; prod.len()];
    for &i in &wa.witnesses {
        is_witness[i] = true;
        let v = prod.state(i).1;
        if slot[v.index()].is_none() {
            slot[v.index()] = Some(tracked);
            tracked += 1;
        }
    }
    let good = |m: StateId, v: VertexId| prod.id(m, v).is_some_and(|i| wa.good[i]);
    let witness = |m: StateId, v: VertexId| prod.id(m, v).is_some_and(|i| is_witness[i]);

    let mut index: HashMap<Expanded, StateId> = HashMap::new();
    let mut memory: Vec<Expanded> = Vec::new();
    let mut rows: HashMap<(usize, usize), ParamRule> = HashMap::new();
    let intern =
        |e: Expanded, index: &mut HashMap<Expanded, StateId>, memory: &mut Vec<Expanded>| {
            *index.entry(e.clone()).or_insert_with(|| {
                memory.push(e);
                StateId::from(memory.len() - 1)
            })
        };
    let root = intern((sigma.init(), vec![None; tracked]), &mut index, &mut memory);
    let mut seen: std::collections::HashSet<(StateId, VertexId)> = Default::default();
    let mut queue = VecDeque::from([(root, g.init())]);
    seen.insert((root, g.init()));
    let mut tests = false;

    while let Some((e, v)) = queue.pop_front() {
        let (m, rec) = memory[e.index()].clone();
        let mut rec2 = rec.clone();
        if let Some(k) = slot[v.index()] {
            if rec2[k].is_none() && good(m, v) {
                rec2[k] = Some(m);
            }
        }
        let prior = slot[v.index()]
            .and_then(|k| rec[k])
            .filter(|_| witness(m, v));
        let mut make = |from: StateId| {
            let next = intern(
                (sigma.update(from, v), rec2.clone()),
                &mut index,
                &mut memory,
            );
            Rule::new(next, sigma.choose(from, v))
        };
        let original = make(m);
        let rule = match prior {
            Some(p) => {
                let copied = make(p);
                let name = sigma.state_name(m).to_string();
                if gv.aval(v) <= 0 {
                    rewired.push(Rewired {
                        state: name,
                        vertex: v,
                        kind: RewireKind::Copy,
                    });
                    ParamRule::Black(copied)
                } else {
                    tests = true;
                    rewired.push(Rewired {
                        state: name,
                        vertex: v,
                        kind: RewireKind::Test,
                    });
                    ParamRule::Test {
                        green: copied,
                        red: original,
                    }
                }
            }
            None => ParamRule::Black(original),
        };
        let mut visit = |r: Rule| {
            let targets: Vec<VertexId> = match r.mv {
                Some(w) if g.is_protagonist(v) => vec![w],
                _ => g.successors(v).to_vec(),
            };
            for w in targets {
                if seen.insert((r.next, w)) {
                    queue.push_back((r.next, w));
                }
            }
        };
        match rule {
            ParamRule::Black(r) => visit(r),
            ParamRule::Test { green, red } => {
                visit(green);
                visit(red);
            }
        }
        rows.insert((e.index(), v.index()), rule);
    }

    let names: Vec<String> = memory
        .iter()
        .map(|(m, rec)| expanded_name(&sigma, g, &slot, *m, rec))
        .collect();
    let mut table = Vec::with_capacity(memory.len() * nv);
    for (e, (m, _)) in memory.iter().enumerate() {
        for v in g.vertices() {
            table.push(rows.get(&(e, v.index())).copied().unwrap_or_else(|| {
                ParamRule::Black(Rule::new(StateId::from(e), sigma.choose(*m, v)))
            }));
        }
    }
    let automaton = ParamAutomaton::new(g, names, root, table)?;
    let kind = if tests {
        Improvement::UniformChain(automaton)
    } else {
        Improvement::SingleStrategy(automaton.to_mealy().expect("no counter tests"))
    };
    Ok(ImprovementResult { kind, rewired })
}

fn expanded_name(
    sigma: &MealyStrategy,
    g: &GameGraph,
    slot: &[Option<usize>],
    m: StateId,
    rec: &[Option<StateId>],
) -> String {
    let mut parts = Vec::new();
    for v in g.vertices() {
        if let Some(p) = slot[v.index()].and_then(|k| rec[k]) {
            parts.push(format!("{}:{}", g.name(v), sigma.state_name(p)));
        }
    }
    if parts.is_empty() {
        sigma.state_name(m).to_string()
    } else {
        format!("{}/{}", sigma.state_name(m), parts.join(","))
    }
}
