mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use admit_core::chains::{self, Increasing};
use admit_core::dominance::{self, Profile};
use admit_core::oracle::{self, GenConfig, Generator};
use admit_core::synthesis::{self, Improvement};
use admit_core::{
    dot, parse_game, parse_mealy, parse_param, GameGraph, GameValues, MealyStrategy, ParamAutomaton,
};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{history, Report};

/// Admissibility analysis for games on graphs with leaf payoffs.
#[derive(Parser)]
#[command(name = "admit", version)]
struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Write the relevant game or product graph in DOT format to this file.
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Antagonistic, cooperative and antagonistic-cooperative value of every vertex.
    Values { game: PathBuf },
    /// Whether the first strategy is dominated by the second.
    Dominates {
        game: PathBuf,
        first: PathBuf,
        second: PathBuf,
        /// Decide strict instead of weak dominance.
        #[arg(long)]
        strict: bool,
    },
    /// Whether a strategy is admissible, with witnesses if not.
    Admissible { game: PathBuf, mealy: PathBuf },
    /// Whether every witness of non-admissibility follows a good visit of its vertex.
    Preadmissible { game: PathBuf, mealy: PathBuf },
    /// Replace a strategy by an admissible one or a maximal chain dominating it.
    Improve {
        game: PathBuf,
        mealy: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// The member of a chain for one counter value, as a Mealy machine.
    Instantiate {
        game: PathBuf,
        param: PathBuf,
        counter: u64,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Whether a parameterized automaton realizes a chain.
    IsChain { game: PathBuf, param: PathBuf },
    /// Whether a parameterized automaton realizes a strictly increasing chain.
    IsIncreasingChain {
        game: PathBuf,
        param: PathBuf,
        /// Check at most this many consecutive pairs beyond the first.
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
    },
    /// Whether a strategy is below some member of a chain.
    BelowChain {
        game: PathBuf,
        mealy: PathBuf,
        param: PathBuf,
    },
    /// Whether every member of the first chain is below some member of the second.
    ChainDominates {
        game: PathBuf,
        lower: PathBuf,
        upper: PathBuf,
    },
    /// Compare the library with the brute-force oracle on random instances.
    OracleCheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        shape: Shape,
    },
    /// Print a random game, or a random strategy for a given game.
    Gen {
        #[arg(long, value_enum, default_value_t = Kind::Game)]
        kind: Kind,
        /// Game to generate a strategy for.
        #[arg(long, value_name = "FILE", required_if_eq_any = [("kind", "mealy"), ("kind", "param")])]
        game: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        shape: Shape,
    },
}

#[derive(Args)]
struct Shape {
    #[arg(long, default_value_t = 5)]
    vertices: usize,
    #[arg(long, default_value_t = 2)]
    leaves: usize,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, default_value_t = 3)]
    payoff_range: i64,
    /// Memory states of generated strategies.
    #[arg(long, default_value_t = 2)]
    states: usize,
}

impl Shape {
    fn config(&self, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            vertex_count: self.vertices,
            leaf_count: self.leaves,
            payoff_range: self.payoff_range,
            max_out_degree: self.degree,
            mealy_states: self.states,
            param_states: self.states,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Game,
    Mealy,
    Param,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_game(path: &Path) -> Result<GameGraph> {
    parse_game(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_mealy(path: &Path, g: &GameGraph) -> Result<MealyStrategy> {
    parse_mealy(&read(path)?, g).with_context(|| format!("in {}", path.display()))
}

fn load_param(path: &Path, g: &GameGraph) -> Result<ParamAutomaton> {
    parse_param(&read(path)?, g).with_context(|| format!("in {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: &Cli) -> Result<Report> {
    let dot_out = |text: String| -> Result<()> {
        match &cli.dot {
            Some(path) => write(path, &text),
            None => Ok(()),
        }
    };
    let report = match &cli.command {
        Command::Values { game } => {
            let g = load_game(game)?;
            dot_out(dot::game_dot(&g))?;
            let gv = GameValues::compute(&g);
            let mut r = Report::success("ok");
            let mut rows = Vec::new();
            for (v, t) in gv.iter() {
                r.line(format!(
                    "{}\t{}\t{}\t{}",
                    g.name(v),
                    t.aval,
                    t.cval,
                    t.acval
                ));
                rows.push(
                    json!({"vertex": g.name(v), "aval": t.aval, "cval": t.cval, "acval": t.acval}),
                );
            }
            r.values = Some(json!(rows));
            r.quiet_verdict()
        }
        Command::Dominates {
            game,
            first,
            second,
            strict,
        } => {
            let g = load_game(game)?;
            let (s1, s2) = (load_mealy(first, &g)?, load_mealy(second, &g)?);
            dot_out(dot::sync_product_dot(&s1, &g, &s2))?;
            let a = Profile::new(&s1, &g)?;
            let b = Profile::new(&s2, &g)?;
            let forward = dominance::dominance(&a, &b, &g);
            let holds = if *strict {
                forward.holds && !dominance::dominance(&b, &a, &g).holds
            } else {
                forward.holds
            };
            let mut r = Report::answer(holds);
            match (&forward.witness, holds) {
                (Some(w), _) => {
                    r.line(format!("witness: {}", history(&g, &w.history)));
                    r.line(format!(
                        "first strategy in {} may still reach {}; second in {} guarantees only {}",
                        w.first_state, w.first_cval, w.second_state, w.second_aval
                    ));
                    r.witness = Some(json!({
                        "history": report::names(&g, &w.history),
                        "first_state": w.first_state,
                        "second_state": w.second_state,
                        "first_cval": w.first_cval,
                        "second_aval": w.second_aval,
                    }));
                }
                (None, false) => r.line("the second strategy is also dominated by the first"),
                (None, true) => {}
            }
            r
        }
        Command::Admissible { game, mealy } | Command::Preadmissible { game, mealy } => {
            let g = load_game(game)?;
            let s = load_mealy(mealy, &g)?;
            dot_out(dot::strategy_product_dot(&s, &g))?;
            let v = dominance::admissibility(&s, &g)?;
            let holds = match cli.command {
                Command::Admissible { .. } => v.admissible,
                _ => v.preadmissible,
            };
            let mut r = Report::answer(holds);
            let mut ws = Vec::new();
            for w in &v.witnesses {
                r.line(format!(
                    "witness: {} in state {} (strategy {}..{}, game {}..{})",
                    history(&g, &w.history),
                    w.state,
                    w.strategy_aval,
                    w.strategy_cval,
                    w.aval,
                    w.acval
                ));
                ws.push(json!({
                    "history": report::names(&g, &w.history),
                    "state": w.state,
                    "strategy_aval": w.strategy_aval,
                    "strategy_cval": w.strategy_cval,
                    "aval": w.aval,
                    "acval": w.acval,
                }));
            }
            if !ws.is_empty() {
                r.witness = Some(json!(ws));
            }
            r
        }
        Command::Improve {
            game,
            mealy,
            output,
        } => {
            let g = load_game(game)?;
            let s = load_mealy(mealy, &g)?;
            let res = synthesis::improve_to_maximal(&s, &g)?;
            let mut r = match &res.kind {
                Improvement::SingleStrategy(m) => {
                    write(output, &m.render(&g))?;
                    dot_out(dot::strategy_product_dot(m, &g))?;
                    Report::success("single")
                }
                Improvement::UniformChain(p) => {
                    write(output, &p.render(&g))?;
                    dot_out(dot::colored_product_dot(p, &g))?;
                    Report::success("chain")
                }
            };
            let mut rewired = Vec::new();
            for w in &res.rewired {
                let kind = serde_json::to_value(w.kind)?;
                let kind = kind.as_str().unwrap_or_default().to_string();
                r.line(format!(
                    "rewired {} at {} ({kind})",
                    w.state,
                    g.name(w.vertex)
                ));
                rewired.push(json!({"state": w.state, "vertex": g.name(w.vertex), "kind": kind}));
            }
            r.witness = Some(json!({ "rewired": rewired }));
            r
        }
        Command::Instantiate {
            game,
            param,
            counter,
            output,
        } => {
            let g = load_game(game)?;
            let p = load_param(param, &g)?;
            let m = chains::representative(&p, &g, *counter)?;
            dot_out(dot::strategy_product_dot(&m, &g))?;
            let text = m.render(&g);
            let mut r = Report::success("ok");
            match output {
                Some(path) => write(path, &text)?,
                None => r.raw(text),
            }
            r.quiet_verdict()
        }
        Command::IsChain { game, param } => {
            let g = load_game(game)?;
            let p = load_param(param, &g)?;
            dot_out(dot::colored_product_dot(&p, &g))?;
            let c = chains::is_chain(&p, &g)?;
            let mut r = Report::answer(c.holds);
            if let Some(i) = c.failing_index {
                r.line(format!("member {i} is not below member {}", i + 1));
                r.witness = Some(json!({ "index": i }));
            }
            r.with_bounds(&c.bounds)
        }
        Command::IsIncreasingChain { game, param, cap } => {
            let g = load_game(game)?;
            let p = load_param(param, &g)?;
            dot_out(dot::colored_product_dot(&p, &g))?;
            let (v, bounds) = chains::is_increasing_chain(&p, &g, Some(*cap))?;
            let r = match v {
                Increasing::Yes => Report::answer(true),
                Increasing::No { index } => {
                    let mut r = Report::answer(false);
                    r.line(format!(
                        "member {index} is not strictly below member {}",
                        index + 1
                    ));
                    r.witness = Some(json!({ "index": index }));
                    r
                }
                Increasing::BoundExceeded { required, checked } => {
                    let mut r = Report::inconclusive();
                    r.line(format!(
                        "pairs 0..={checked} are strict, but the bound requires {required}"
                    ));
                    r
                }
            };
            r.with_bounds(&bounds)
        }
        Command::BelowChain { game, mealy, param } => {
            let g = load_game(game)?;
            let m = load_mealy(mealy, &g)?;
            let p = load_param(param, &g)?;
            dot_out(dot::colored_product_dot(&p, &g))?;
            let b = chains::strategy_below_chain(&m, &p, &g)?;
            below_report(&g, &b)
        }
        Command::ChainDominates { game, lower, upper } => {
            let g = load_game(game)?;
            let s = load_param(lower, &g)?;
            let t = load_param(upper, &g)?;
            dot_out(dot::colored_product_dot(&s, &g))?;
            let b = chains::chain_below_chain(&s, &t, &g)?;
            below_report(&g, &b)
        }
        Command::OracleCheck { seed, count, shape } => {
            let rep = oracle::check_corpus(&shape.config(*seed), *count)?;
            let mut r = if rep.passed() {
                Report::success("pass")
            } else {
                Report::failure("fail")
            };
            r.line(format!(
                "{} instances, {} value checks, {} dominance checks, {} skipped, {} mismatches",
                rep.instances, rep.value_checks, rep.dominance_checks, rep.skipped, rep.mismatches
            ));
            if let Some(ce) = &rep.first {
                r.line(format!(
                    "first counterexample (seed {}): {}",
                    ce.seed, ce.what
                ));
                r.raw(ce.game.clone());
                for s in &ce.strategies {
                    r.raw(s.clone());
                }
                r.witness = Some(serde_json::to_value(ce)?);
            }
            r
        }
        Command::Gen {
            kind,
            game,
            seed,
            shape,
        } => {
            let cfg = shape.config(*seed);
            let mut gen = Generator::new(&cfg)?;
            let text = match kind {
                Kind::Game => {
                    let g = gen.game();
                    dot_out(dot::game_dot(&g))?;
                    g.render()
                }
                Kind::Mealy | Kind::Param => {
                    let path = game.as_ref().context("--game is required")?;
                    let g = load_game(path)?;
                    if *kind == Kind::Mealy {
                        gen.mealy(&g, cfg.mealy_states).render(&g)
                    } else {
                        gen.param(&g, cfg.param_states).render(&g)
                    }
                }
            };
            let mut r = Report::success("ok");
            r.raw(text);
            r.quiet_verdict()
        }
    };
    Ok(report)
}

fn below_report(g: &GameGraph, b: &chains::BelowChain) -> Report {
    let mut r = Report::answer(b.holds);
    if let Some(w) = &b.dominance.witness {
        r.line(format!("witness: {}", history(g, &w.history)));
        r.witness = Some(json!({
            "history": report::names(g, &w.history),
            "first_cval": w.first_cval,
            "second_aval": w.second_aval,
        }));
    }
    r.with_bounds(&b.bounds)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => report.emit(cli.json),
        Err(e) => {
            eprintln!("error: {e:#}");
            if cli.json {
                println!(
                    "{}",
                    json!({ "verdict": "error", "error": format!("{e:#}") })
                );
            }
            ExitCode::from(2)
        }
    }
}
