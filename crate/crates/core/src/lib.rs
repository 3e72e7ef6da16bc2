//! Admissibility analysis for two-player turn-based games on finite graphs
//! whose plays either end in a payoff leaf or run forever for payoff 0.
//!
//! The crate computes antagonistic and cooperative vertex values, compares
//! finite-memory strategies for dominance, decides admissibility, improves
//! strategies to maximal ones and checks chains of strategies given by
//! counter-parameterized automata.

pub mod automata;
pub mod chains;
pub mod dominance;
pub mod dot;
pub mod error;
pub mod game;
pub mod oracle;
mod reach;
pub mod synthesis;
pub mod values;

#[cfg(test)]
mod testing;

pub use automata::{
    parse_mealy, parse_param, Color, MealyStrategy, ParamAutomaton, StateId, Strategy,
};
pub use chains::{
    chain_below_chain, is_chain, is_increasing_chain, strategy_below_chain, ChainBounds, Increasing,
};
pub use dominance::{
    admissibility, is_admissible, is_preadmissible, strictly_dominated, weakly_dominated,
    AdmissibilityVerdict, DominanceVerdict,
};
pub use error::{Error, Result};
pub use game::{parse_game, GameBuilder, GameGraph, Lasso, Player, VertexId};
pub use reach::Extremum;
pub use synthesis::{improve_to_maximal, preadmissibilize, Improvement, ImprovementResult};
pub use values::{GameValues, ValueTriple};
