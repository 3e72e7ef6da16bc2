//! Scaling workloads for the chain checks, shared by the criterion benches
//! and the growth report in the CLI acceptance run.

use std::time::{Duration, Instant};

use admit_core::chains::{chain_below_chain, is_chain};
use admit_core::oracle::lollipop;
use admit_core::{GameGraph, ParamAutomaton};

pub const SIZES: [usize; 4] = [10, 20, 40, 80];

pub struct Workload {
    pub game: GameGraph,
    pub chain: ParamAutomaton,
}

impl Workload {
    pub fn lollipop(size: usize) -> Self {
        let (game, chain) = lollipop(size).expect("size is at least 4");
        Workload { game, chain }
    }

    /// Game size times reachable memory size.
    pub fn product_size(&self) -> usize {
        self.game.vertex_count() * self.chain.reachable_state_count(&self.game)
    }

    pub fn is_chain(&self) -> bool {
        is_chain(&self.chain, &self.game)
            .expect("valid workload")
            .holds
    }

    pub fn below_itself(&self) -> bool {
        chain_below_chain(&self.chain, &self.chain, &self.game)
            .expect("valid workload")
            .holds
    }
}

/// Median wall time of `runs` calls.
pub fn median_time(runs: usize, mut f: impl FnMut()) -> Duration {
    let mut times: Vec<Duration> = (0..runs.max(1))
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .collect();
    times.sort();
    times[times.len() / 2]
}

/// Least-squares slope of `log t` against `log n`.
pub fn fitted_exponent(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, t)| (n.ln(), t.max(1e-9).ln()))
        .collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let num: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_of_exact_powers() {
        let cubic: Vec<_> = SIZES
            .iter()
            .map(|&n| (n as f64, (n as f64).powi(3)))
            .collect();
        assert!((fitted_exponent(&cubic) - 3.0).abs() < 1e-9);
        let flat: Vec<_> = SIZES.iter().map(|&n| (n as f64, 2.0)).collect();
        assert!(fitted_exponent(&flat).abs() < 1e-9);
    }

    #[test]
    fn workloads_are_chains() {
        for n in [4, 10] {
            let w = Workload::lollipop(n);
            assert_eq!(w.product_size(), n);
            assert!(w.is_chain());
            assert!(w.below_itself());
        }
    }
}
