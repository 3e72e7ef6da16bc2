//! Finite-memory strategies: Mealy machines and counter-parameterized automata.
//!
//! Both read the current game vertex, update their memory, and (at
//! protagonist vertices) output the next vertex. A parameterized automaton
//! additionally reads a single counter at designated (state, vertex) pairs:
//! the *green* rule fires and decrements while the counter is positive, the
//! *red* rule fires once it is zero. All other rules are *black*.

mod mealy;
mod param;
mod product;
mod text;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameGraph, VertexId};

pub use mealy::MealyStrategy;
pub use param::{Color, Instance, ParamAutomaton, ParamRule};
pub use product::{
    classify_colors, colored_product, compatible, one_player_product, sync_product, ColoredEdge,
    ColoredProduct, OnePlayerProduct, PathCounts, StrategyValues, SyncProduct,
};
pub use text::{parse_mealy, parse_param};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for StateId {
    fn from(i: usize) -> Self {
        StateId(i as u32)
    }
}

/// Memory update and (at protagonist vertices) the chosen move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub next: StateId,
    pub mv: Option<VertexId>,
}

impl Rule {
    pub fn new(next: StateId, mv: Option<VertexId>) -> Self {
        Rule { next, mv }
    }
}

/// A deterministic finite-memory protagonist strategy that can be run step by
/// step. Explicit Mealy machines and counter instantiations of parameterized
/// automata both implement it, so products never need a materialized table.
pub trait Strategy {
    type State: Copy + Eq + Hash + Debug + Send + Sync;

    /// Size of the vertex alphabet the strategy was built for.
    fn vertex_count(&self) -> usize;

    fn initial(&self) -> Self::State;

    /// Reads `v` in memory `state`; returns the new memory and, when `v` is a
    /// protagonist vertex, the chosen successor.
    fn step(&self, state: Self::State, v: VertexId) -> (Self::State, Option<VertexId>);

    fn describe(&self, state: Self::State) -> String;
}

impl<T: Strategy + ?Sized> Strategy for &T {
    type State = T::State;

    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }

    fn initial(&self) -> Self::State {
        (**self).initial()
    }

    fn step(&self, state: Self::State, v: VertexId) -> (Self::State, Option<VertexId>) {
        (**self).step(state, v)
    }

    fn describe(&self, state: Self::State) -> String {
        (**self).describe(state)
    }
}

pub(crate) fn check_bound(found: usize, g: &GameGraph) -> Result<()> {
    if found == g.vertex_count() {
        Ok(())
    } else {
        Err(Error::Mismatch {
            expected: g.vertex_count(),
            found,
        })
    }
}

/// Checks one rule against the game: the target state exists, protagonist
/// vertices carry a move along an edge, antagonist vertices carry none.
pub(crate) fn check_rule(
    g: &GameGraph,
    state_count: usize,
    state_name: &str,
    v: VertexId,
    rule: Rule,
) -> Result<()> {
    if rule.next.index() >= state_count {
        return Err(Error::InvalidAutomaton(format!(
            "rule at ({state_name}, {}) targets an unknown state",
            g.name(v)
        )));
    }
    match (g.is_protagonist(v), rule.mv) {
        (true, Some(w)) if g.has_edge(v, w) => Ok(()),
        (true, Some(w)) => Err(Error::InvalidAutomaton(format!(
            "move {} -> {} at state {state_name} is not an edge",
            g.name(v),
            if w.index() < g.vertex_count() {
                g.name(w)
            } else {
                "?"
            }
        ))),
        (true, None) => Err(Error::InvalidAutomaton(format!(
            "no move at protagonist vertex {} in state {state_name}",
            g.name(v)
        ))),
        (false, Some(_)) => Err(Error::InvalidAutomaton(format!(
            "move given at antagonist vertex {} in state {state_name}",
            g.name(v)
        ))),
        (false, None) => Ok(()),
    }
}
