//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use admit_bench::{fitted_exponent, median_time, Workload, SIZES};
use admit_core::automata::sync_product;
use admit_core::chains::{chain_below_chain, is_chain, strategy_below_chain, ChainBounds};
use admit_core::dominance::admissibility;
use admit_core::oracle::{check_corpus, lollipop, GenConfig, Generator};
use admit_core::{
    improve_to_maximal, is_admissible, parse_game, parse_mealy, parse_param, preadmissibilize,
    strictly_dominated, weakly_dominated, GameGraph, Improvement, MealyStrategy, ParamAutomaton,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn game(name: &str) -> GameGraph {
    parse_game(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn mealy(g: &GameGraph, name: &str) -> MealyStrategy {
    parse_mealy(&std::fs::read_to_string(fixture(name)).unwrap(), g).unwrap()
}

fn param(g: &GameGraph, name: &str) -> ParamAutomaton {
    parse_param(&std::fs::read_to_string(fixture(name)).unwrap(), g).unwrap()
}

fn admit(args: &[&str]) -> (String, Option<i32>) {
    let o = Command::new(env!("CARGO_BIN_EXE_admit"))
        .args(args)
        .output()
        .unwrap();
    (
        String::from_utf8_lossy(&o.stdout).into_owned(),
        o.status.code(),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn values_golden() -> Outcome {
    let path = fixture("helpme.game");
    let (out, code) = admit(&["values", path.to_str().unwrap()]);
    let want = "v0\t1\t2\t2\nv1\t1\t2\t2\nl1\t1\t1\t1\nl2\t2\t2\t2\n";
    outcome(
        out == want && code == Some(0),
        format!("{:?}", out.replace('\t', " ")),
    )
}

fn dominance_golden() -> Outcome {
    let g = game("helpme.game");
    let sk = param(&g, "sk.param");
    let somega = mealy(&g, "somega.mealy");
    let mut bad = Vec::new();
    for k in 0..=5u64 {
        let (a, b) = (sk.instantiate(k), sk.instantiate(k + 1));
        if !strictly_dominated(&a, &b, &g).unwrap() {
            bad.push(format!("s{k} not strictly below s{}", k + 1));
        }
        if weakly_dominated(&somega, &a, &g).unwrap().holds {
            bad.push(format!("somega below s{k}"));
        }
        if weakly_dominated(&a, &somega, &g).unwrap().holds {
            bad.push(format!("s{k} below somega"));
        }
        if is_admissible(&a, &g).unwrap() {
            bad.push(format!("s{k} admissible"));
        }
    }
    if !is_admissible(&somega, &g).unwrap() {
        bad.push("somega not admissible".into());
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "25 checks".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn chain_decisions() -> Outcome {
    let g = fixture("helpme.game");
    let g = g.to_str().unwrap();
    let sk = fixture("sk.param");
    let swapped = fixture("sk_swapped.param");
    let (a, ca) = admit(&["is-chain", g, sk.to_str().unwrap()]);
    let (b, cb) = admit(&["is-chain", g, swapped.to_str().unwrap()]);
    let (c, cc) = admit(&[
        "is-increasing-chain",
        "--cap",
        "28",
        g,
        sk.to_str().unwrap(),
    ]);
    let first = |s: &str| s.lines().next().unwrap_or("").to_string();
    let got = [(first(&a), ca), (first(&b), cb), (first(&c), cc)];
    let want = [("yes", Some(0)), ("no", Some(1)), ("yes", Some(0))];
    let ok = got.iter().zip(want).all(|(g, w)| g.0 == w.0 && g.1 == w.1);
    outcome(
        ok,
        format!(
            "is-chain {}, swapped {}, increasing {}",
            got[0].0, got[1].0, got[2].0
        ),
    )
}

fn chain_dominance() -> Outcome {
    let g = game("helpme.game");
    let sk = param(&g, "sk.param");
    let somega = param(&g, "somega.param");
    let got = [
        chain_below_chain(&somega, &sk, &g).unwrap().holds,
        chain_below_chain(&sk, &somega, &g).unwrap().holds,
        chain_below_chain(&sk, &sk, &g).unwrap().holds,
        strategy_below_chain(&mealy(&g, "s0.mealy"), &sk, &g)
            .unwrap()
            .holds,
    ];
    outcome(got == [false, false, true, true], format!("{got:?}"))
}

fn oracle_equivalence() -> Outcome {
    let corpora = [
        (
            GenConfig {
                seed: 10_000,
                ..GenConfig::default()
            },
            200,
        ),
        (
            GenConfig {
                seed: 20_000,
                vertex_count: 6,
                max_out_degree: 3,
                mealy_states: 3,
                param_states: 3,
                ..GenConfig::default()
            },
            200,
        ),
        (
            GenConfig {
                seed: 30_000,
                vertex_count: 4,
                leaf_count: 1,
                payoff_range: 4,
                mealy_states: 3,
                param_states: 3,
                ..GenConfig::default()
            },
            150,
        ),
    ];
    let (mut instances, mut mismatches, mut skipped, mut checks) = (0, 0, 0, 0);
    let mut first = None;
    for (cfg, n) in corpora {
        let r = check_corpus(&cfg, n).unwrap();
        instances += r.instances - r.skipped;
        skipped += r.skipped;
        mismatches += r.mismatches;
        checks += r.value_checks + r.dominance_checks;
        first = first.or(r.first);
    }
    let mut detail = format!(
        "{instances} instances, {checks} checks, {skipped} skipped, {mismatches} mismatches"
    );
    if let Some(ce) = first {
        detail.push_str(&format!("; first: seed {} {}", ce.seed, ce.what));
    }
    outcome(mismatches == 0 && instances >= 500, detail)
}

/// Random games rarely let a strategy revisit a vertex after a good visit,
/// so a third of the strategies run on help-me shaped games where chains
/// are the common outcome.
fn synthesis_instances() -> Vec<(u64, GameGraph, MealyStrategy)> {
    let mut out = Vec::new();
    for seed in 0..300u64 {
        let cfg = GenConfig {
            seed: 50_000 + seed,
            vertex_count: 3 + (seed % 4) as usize,
            max_out_degree: 3,
            mealy_states: 3,
            ..GenConfig::default()
        };
        let mut gen = Generator::new(&cfg).unwrap();
        let g = if seed % 3 == 0 {
            match seed % 4 {
                0 => game("two_paths.game"),
                n => lollipop(3 + n as usize).unwrap().0,
            }
        } else {
            gen.game()
        };
        let states = gen.states(3);
        let s = gen.mealy(&g, states);
        out.push((cfg.seed, g, s));
    }
    out
}

fn synthesis_contract() -> Outcome {
    let mut violations = Vec::new();
    let (mut singles, mut chains, mut total) = (0, 0, 0);
    for (seed, g, s) in synthesis_instances() {
        total += 1;
        let below = |t: &MealyStrategy| weakly_dominated(&s, t, &g).unwrap().holds;

        let pre = preadmissibilize(&s, &g).unwrap();
        if !admissibility(&pre.strategy, &g).unwrap().preadmissible || !below(&pre.strategy) {
            violations.push(format!("seed {seed}: preadmissibilize"));
        }
        match improve_to_maximal(&s, &g).unwrap().kind {
            Improvement::SingleStrategy(m) => {
                singles += 1;
                if !is_admissible(&m, &g).unwrap() || !below(&m) {
                    violations.push(format!("seed {seed}: single strategy"));
                }
            }
            Improvement::UniformChain(p) => {
                chains += 1;
                let n_t = ChainBounds::strategy_index(&g, &p, &s);
                let ok = is_chain(&p, &g).unwrap().holds
                    && [0, 1, 2, n_t].into_iter().all(|n| below(&p.instantiate(n)));
                if !ok {
                    violations.push(format!("seed {seed}: chain"));
                }
            }
        }
    }
    let mut detail = format!(
        "{total} strategies ({singles} single, {chains} chains), {} violations",
        violations.len()
    );
    if let Some(v) = violations.first() {
        detail.push_str(&format!("; first: {v}"));
    }
    outcome(violations.is_empty() && total >= 200, detail)
}

fn boolean_variant() -> Outcome {
    let g = game("helpme_bool.game");
    let somega = mealy(&g, "somega.mealy");
    match improve_to_maximal(&mealy(&g, "s0.mealy"), &g).unwrap().kind {
        Improvement::SingleStrategy(m) => {
            let same = sync_product(&m, &g, &somega)
                .divergence_states()
                .next()
                .is_none();
            outcome(
                same,
                format!("single strategy, equivalent to somega: {same}"),
            )
        }
        Improvement::UniformChain(_) => outcome(false, "got a chain"),
    }
}

fn polynomial_smoke() -> Outcome {
    let mut chain_points = Vec::new();
    let mut below_points = Vec::new();
    let mut rows = Vec::new();
    for n in SIZES {
        let w = Workload::lollipop(n);
        let size = w.product_size() as f64;
        let tc = median_time(3, || assert!(w.is_chain()));
        let tb = median_time(3, || assert!(w.below_itself()));
        chain_points.push((size, tc.as_secs_f64()));
        below_points.push((size, tb.as_secs_f64()));
        rows.push(format!("{n}: {:.2?}/{:.2?}", tc, tb));
    }
    let (ec, eb) = (
        fitted_exponent(&chain_points),
        fitted_exponent(&below_points),
    );
    outcome(
        ec < 3.0 && eb < 3.0,
        format!(
            "exponents is_chain {ec:.2}, chain_below_chain {eb:.2}; times {}",
            rows.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden values", Duration::from_secs(1), values_golden),
        (
            "dominance golden suite",
            Duration::from_secs(1),
            dominance_golden,
        ),
        ("chain decisions", Duration::from_secs(5), chain_decisions),
        ("chain dominance", Duration::from_secs(5), chain_dominance),
        (
            "oracle equivalence",
            Duration::from_secs(300),
            oracle_equivalence,
        ),
        (
            "synthesis contract",
            Duration::from_secs(300),
            synthesis_contract,
        ),
        ("boolean variant", Duration::from_secs(60), boolean_variant),
        (
            "polynomial smoke check",
            Duration::from_secs(300),
            polynomial_smoke,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let ok = o.ok && took <= limit;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {}. {name} ({:.2?}, limit {:?}): {}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took,
            limit,
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
