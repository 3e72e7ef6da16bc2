//! Chains of strategies realized by parameterized automata.
//!
//! Each question about the infinite sequence `S_0, S_1, ...` reduces to
//! finitely many dominance checks between members whose index is bounded by
//! the sizes of the game and the automata involved.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::automata::{MealyStrategy, ParamAutomaton};
use crate::dominance::{dominance, strict_dominance, DominanceVerdict, Profile};
use crate::error::{Error, Result};
use crate::game::GameGraph;

/// Index bounds beyond which no new behaviour can appear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainBounds {
    /// Enough consecutive weak checks to decide chain-hood.
    pub n_weak: u64,
    /// Enough consecutive strict checks to decide increasing chain-hood.
    #[serde(serialize_with = "as_decimal")]
    pub n_strict: BigUint,
    /// Member of the upper chain a strategy has to be compared with.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_strategy: Option<u64>,
    /// Member of the lower chain that represents it in chain comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_chain: Option<u64>,
}

fn as_decimal<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

impl ChainBounds {
    /// Bounds for a chain alone, from the game size and the automaton's
    /// reachable state count.
    pub fn of_chain(g: &GameGraph, p: &ParamAutomaton) -> Self {
        let gs = (g.vertex_count() * p.reachable_state_count(g)) as u64;
        ChainBounds {
            n_weak: gs,
            n_strict: BigUint::from(gs) + factorial(gs),
            n_strategy: None,
            n_chain: None,
        }
    }

    pub fn strategy_index(g: &GameGraph, t: &ParamAutomaton, m: &MealyStrategy) -> u64 {
        (g.vertex_count() * t.reachable_state_count(g) * (m.reachable_state_count(g) + 1) + 1)
            as u64
    }

    pub fn chain_index(g: &GameGraph, s: &ParamAutomaton, t: &ParamAutomaton) -> u64 {
        (g.vertex_count() * s.reachable_state_count(g) * (2 * t.reachable_state_count(g) + 1))
            as u64
    }
}

/// Checks `check(i)` for every `i` in `0..=last`, in parallel batches, and
/// returns the smallest index where it fails.
fn first_failure(last: u64, check: impl Fn(u64) -> bool + Sync) -> Option<u64> {
    const BATCH: u64 = 64;
    let mut lo = 0;
    while lo <= last {
        let hi = last.min(lo.saturating_add(BATCH - 1));
        if let Some(i) = (lo..=hi).into_par_iter().filter(|&i| !check(i)).min() {
            return Some(i);
        }
        if hi == last {
            break;
        }
        lo = hi + 1;
    }
    None
}

fn weak_pair(p: &ParamAutomaton, g: &GameGraph, i: u64) -> bool {
    let a = Profile::new(p.instance(i), g).expect("bound checked");
    let b = Profile::new(p.instance(i + 1), g).expect("bound checked");
    dominance(&a, &b, g).holds
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub holds: bool,
    /// Smallest `i` with `S_i` not below `S_{i+1}`.
    pub failing_index: Option<u64>,
    pub bounds: ChainBounds,
}

/// Whether the automaton realizes a chain: `S_i ⪯ S_{i+1}` for every `i`.
pub fn is_chain(p: &ParamAutomaton, g: &GameGraph) -> Result<ChainCheck> {
    p.validate(g)?;
    let bounds = ChainBounds::of_chain(g, p);
    let failing_index = first_failure(bounds.n_weak, |i| weak_pair(p, g, i));
    Ok(ChainCheck {
        holds: failing_index.is_none(),
        failing_index,
        bounds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Increasing {
    Yes,
    /// `S_index` is not strictly below `S_{index+1}`.
    No {
        index: u64,
    },
    /// Every checked pair was strict, but the cap stopped short of the bound.
    BoundExceeded {
        #[serde(serialize_with = "as_decimal")]
        required: BigUint,
        checked: u64,
    },
}

/// Whether the automaton realizes a strictly increasing chain. The bound is
/// factorial in the automaton size, so at most `cap + 1` pairs are checked.
pub fn is_increasing_chain(
    p: &ParamAutomaton,
    g: &GameGraph,
    cap: Option<u64>,
) -> Result<(Increasing, ChainBounds)> {
    p.validate(g)?;
    let bounds = ChainBounds::of_chain(g, p);
    let cap = cap.unwrap_or(u64::MAX - 1);
    let required = bounds.n_strict.clone();
    let (last, complete) = match u64::try_from(&required) {
        Ok(n) if n <= cap => (n, true),
        _ => (cap, false),
    };
    let verdict = match first_failure(last, |i| {
        let a = Profile::new(p.instance(i), g).expect("bound checked");
        let b = Profile::new(p.instance(i + 1), g).expect("bound checked");
        strict_dominance(&a, &b, g)
    }) {
        Some(index) => Increasing::No { index },
        None if complete => Increasing::Yes,
        None => Increasing::BoundExceeded {
            required,
            checked: last,
        },
    };
    Ok((verdict, bounds))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BelowChain {
    pub holds: bool,
    /// The comparison with the representative member of the upper chain.
    pub dominance: DominanceVerdict,
    pub bounds: ChainBounds,
}

fn require_chain(p: &ParamAutomaton, g: &GameGraph, which: &str) -> Result<ChainBounds> {
    let c = is_chain(p, g)?;
    match c.failing_index {
        None => Ok(c.bounds),
        Some(i) => Err(Error::NotAChain(format!(
            "the {which} automaton (member {i} is not below member {})",
            i + 1
        ))),
    }
}

/// Whether `m` is below some member of the chain realized by `t`.
pub fn strategy_below_chain(
    m: &MealyStrategy,
    t: &ParamAutomaton,
    g: &GameGraph,
) -> Result<BelowChain> {
    m.validate(g)?;
    let mut bounds = require_chain(t, g, "upper")?;
    Ok(below(m, t, g, &mut bounds))
}

fn below(
    m: &MealyStrategy,
    t: &ParamAutomaton,
    g: &GameGraph,
    bounds: &mut ChainBounds,
) -> BelowChain {
    let n = ChainBounds::strategy_index(g, t, m);
    bounds.n_strategy = Some(n);
    let a = Profile::new(m, g).expect("bound checked");
    let b = Profile::new(t.instance(n), g).expect("bound checked");
    let dominance = dominance(&a, &b, g);
    BelowChain {
        holds: dominance.holds,
        dominance,
        bounds: bounds.clone(),
    }
}

/// Whether every member of the chain realized by `s` is below some member of
/// the chain realized by `t`.
pub fn chain_below_chain(
    s: &ParamAutomaton,
    t: &ParamAutomaton,
    g: &GameGraph,
) -> Result<BelowChain> {
    require_chain(s, g, "lower")?;
    let mut bounds = require_chain(t, g, "upper")?;
    let n = ChainBounds::chain_index(g, s, t);
    bounds.n_chain = Some(n);
    let member = representative(s, g, n)?;
    Ok(below(&member, t, g, &mut bounds))
}

/// The `n`-th member of a chain as an explicit machine over the memory
/// states it can reach.
pub fn representative(s: &ParamAutomaton, g: &GameGraph, n: u64) -> Result<MealyStrategy> {
    s.validate(g)?;
    MealyStrategy::materialize(&s.instance(n), g)
}
