//! Fixture access for unit tests.

use std::path::PathBuf;

use crate::automata::{parse_mealy, parse_param, MealyStrategy, ParamAutomaton};
use crate::game::{parse_game, GameGraph};

pub(crate) const HELPME: &str = include_str!("../../../fixtures/helpme.game");

pub(crate) fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub(crate) fn helpme() -> GameGraph {
    parse_game(HELPME).unwrap()
}

pub(crate) fn mealy(g: &GameGraph, name: &str) -> MealyStrategy {
    parse_mealy(&fixture(name), g).unwrap()
}

pub(crate) fn param(g: &GameGraph, name: &str) -> ParamAutomaton {
    parse_param(&fixture(name), g).unwrap()
}
