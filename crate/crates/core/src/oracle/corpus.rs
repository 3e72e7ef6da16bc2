//! Seeded comparison runs of the library against the brute-force oracle.

use rayon::prelude::*;
use serde::Serialize;

use super::{brute_dominance, brute_value_table, GenConfig, Generator, MAX_MEMORY};
use crate::dominance::weakly_dominated;
use crate::error::{Error, Result};
use crate::values::GameValues;

/// A disagreement, serialized so it can be replayed from files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub what: String,
    pub game: String,
    pub strategies: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub instances: usize,
    pub value_checks: usize,
    pub dominance_checks: usize,
    /// Instances beyond the oracle's guards.
    pub skipped: usize,
    pub mismatches: usize,
    pub first: Option<Counterexample>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

struct Outcome {
    value_checks: usize,
    dominance_checks: usize,
    skipped: bool,
    mismatches: Vec<Counterexample>,
}

fn run_one(cfg: &GenConfig) -> Result<Outcome> {
    let mut gen = Generator::new(cfg)?;
    let g = gen.game();
    let mut out = Outcome {
        value_checks: 0,
        dominance_checks: 0,
        skipped: false,
        mismatches: Vec::new(),
    };
    let ce = |what: String, strategies: Vec<String>| Counterexample {
        seed: cfg.seed,
        what,
        game: g.render(),
        strategies,
    };

    let lib = GameValues::compute(&g);
    match brute_value_table(&g, 2) {
        Ok(mut brute) => {
            // A bounded-memory search can only under-approximate the
            // cooperative part; widen the bound before calling it a mismatch.
            let short = g.vertices().any(|v| lib.acval(v) > brute[v.index()].acval);
            if short {
                if let Ok(wider) = brute_value_table(&g, MAX_MEMORY) {
                    brute = wider;
                }
            }
            out.value_checks += 1;
            for v in g.vertices() {
                if lib.get(v) != brute[v.index()] {
                    out.mismatches.push(ce(
                        format!(
                            "values at {}: library {:?}, oracle {:?}",
                            g.name(v),
                            lib.get(v),
                            brute[v.index()]
                        ),
                        vec![],
                    ));
                }
            }
        }
        Err(Error::TooLarge(_)) => out.skipped = true,
        Err(e) => return Err(e),
    }

    let k1 = gen.states(cfg.mealy_states);
    let a = gen.mealy(&g, k1);
    let k2 = gen.states(cfg.mealy_states);
    let b = gen.mealy(&g, k2);
    for (x, y) in [(&a, &b), (&b, &a), (&a, &a)] {
        let fast = weakly_dominated(x, y, &g)?.holds;
        let slow = brute_dominance(x, y, &g)?;
        out.dominance_checks += 1;
        if fast != slow {
            out.mismatches.push(ce(
                format!("dominance: library {fast}, oracle {slow}"),
                vec![x.render(&g), y.render(&g)],
            ));
        }
    }
    Ok(out)
}

/// Runs `count` instances with seeds `cfg.seed, cfg.seed + 1, ...`.
pub fn check_corpus(cfg: &GenConfig, count: usize) -> Result<CorpusReport> {
    cfg.validate()?;
    let outcomes: Vec<Outcome> = (0..count as u64)
        .into_par_iter()
        .map(|i| run_one(&cfg.with_seed(cfg.seed.wrapping_add(i))))
        .collect::<Result<_>>()?;
    let mut report = CorpusReport {
        instances: count,
        ..CorpusReport::default()
    };
    for o in outcomes {
        report.value_checks += o.value_checks;
        report.dominance_checks += o.dominance_checks;
        report.skipped += usize::from(o.skipped);
        report.mismatches += o.mismatches.len();
        if report.first.is_none() {
            report.first = o.mismatches.into_iter().next();
        }
    }
    Ok(report)
}
