//! Line-based automaton formats.
//!
//! ```text
//! state <name> [init]
//! trans <state> <vertex> -> <state> [move=<vertex>] [color=<black|green|red>]
//! ```
//!
//! Mealy files may only use `color=black` (or omit it). Param files must give
//! a color on every transition; each (state, vertex) pair has either one black
//! transition or one green and one red. Pairs without a transition stay in
//! their state and, at protagonist vertices, take the only successor if there
//! is exactly one.

use std::collections::HashMap;

use super::{check_rule, Color, MealyStrategy, ParamAutomaton, ParamRule, Rule, StateId};
use crate::error::{syntax, Error, Result};
use crate::game::{tokens, GameGraph, VertexId};

struct Trans {
    line: usize,
    from: StateId,
    at: VertexId,
    rule: Rule,
    color: Option<Color>,
}

struct Parsed {
    names: Vec<String>,
    init: StateId,
    trans: Vec<Trans>,
}

fn parse_color(line: usize, c: &str) -> Result<Color> {
    match c {
        "black" => Ok(Color::Black),
        "green" => Ok(Color::Green),
        "red" => Ok(Color::Red),
        _ => Err(syntax(line, format!("unknown color `{c}`"))),
    }
}

fn parse_lines(text: &str, g: &GameGraph) -> Result<Parsed> {
    let mut names: Vec<String> = Vec::new();
    let mut by_name: HashMap<String, StateId> = HashMap::new();
    let mut init: Option<StateId> = None;
    let mut pending: Vec<(usize, Vec<&str>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some((&kw, args)) = toks.split_first() else {
            continue;
        };
        match kw {
            "state" => {
                let (name, rest) = args
                    .split_first()
                    .ok_or_else(|| syntax(line, "state needs a name"))?;
                let id = StateId::from(names.len());
                if by_name.insert(name.to_string(), id).is_some() {
                    return Err(syntax(line, format!("state `{name}` declared twice")));
                }
                names.push(name.to_string());
                match rest {
                    [] => {}
                    ["init"] => {
                        if init.replace(id).is_some() {
                            return Err(syntax(line, "more than one initial state"));
                        }
                    }
                    _ => return Err(syntax(line, "state takes a name and an optional `init`")),
                }
            }
            "trans" => pending.push((line, args.to_vec())),
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let init = init.ok_or_else(|| Error::InvalidAutomaton("no initial state declared".into()))?;

    let state = |line: usize, n: &str| {
        by_name
            .get(n)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown state `{n}`")))
    };
    let vertex = |line: usize, n: &str| {
        g.vertex(n)
            .ok_or_else(|| syntax(line, format!("unknown vertex `{n}`")))
    };

    let mut trans = Vec::with_capacity(pending.len());
    for (line, args) in pending {
        let [from, at, "->", to, attrs @ ..] = args.as_slice() else {
            return Err(syntax(
                line,
                "expected `trans <state> <vertex> -> <state> ...`",
            ));
        };
        let mut mv = None;
        let mut color = None;
        for attr in attrs {
            match attr.split_once('=') {
                Some(("move", w)) if mv.is_none() => mv = Some(vertex(line, w)?),
                Some(("color", c)) if color.is_none() => color = Some(parse_color(line, c)?),
                _ => return Err(syntax(line, format!("unexpected attribute `{attr}`"))),
            }
        }
        trans.push(Trans {
            line,
            from: state(line, from)?,
            at: vertex(line, at)?,
            rule: Rule::new(state(line, to)?, mv),
            color,
        });
    }
    Ok(Parsed { names, init, trans })
}

fn default_rule(g: &GameGraph, s: StateId, v: VertexId, name: &str) -> Result<Rule> {
    if !g.is_protagonist(v) {
        return Ok(Rule::new(s, None));
    }
    match g.successors(v) {
        [w] => Ok(Rule::new(s, Some(*w))),
        _ => Err(Error::InvalidAutomaton(format!(
            "no transition for state {name} at protagonist vertex {}",
            g.name(v)
        ))),
    }
}

fn checked(g: &GameGraph, p: &Parsed, t: &Trans) -> Result<Rule> {
    check_rule(g, p.names.len(), &p.names[t.from.index()], t.at, t.rule).map_err(|e| match e {
        Error::InvalidAutomaton(msg) => Error::InvalidAutomaton(format!("line {}: {msg}", t.line)),
        other => other,
    })?;
    Ok(t.rule)
}

pub fn parse_mealy(text: &str, g: &GameGraph) -> Result<MealyStrategy> {
    let p = parse_lines(text, g)?;
    let nv = g.vertex_count();
    let mut rows: Vec<Option<Rule>> = vec![None; p.names.len() * nv];
    for t in &p.trans {
        if !matches!(t.color, None | Some(Color::Black)) {
            return Err(syntax(t.line, "Mealy transitions cannot be colored"));
        }
        let slot = &mut rows[t.from.index() * nv + t.at.index()];
        if slot.is_some() {
            return Err(syntax(t.line, "duplicate transition"));
        }
        *slot = Some(checked(g, &p, t)?);
    }
    let rows = fill(g, &p, rows, |r| r)?;
    MealyStrategy::new(g, p.names, p.init, rows)
}

pub fn parse_param(text: &str, g: &GameGraph) -> Result<ParamAutomaton> {
    let p = parse_lines(text, g)?;
    let nv = g.vertex_count();
    let mut slots: Vec<[Option<Rule>; 3]> = vec![[None; 3]; p.names.len() * nv];
    for t in &p.trans {
        let color = t
            .color
            .ok_or_else(|| syntax(t.line, "transition needs a color"))?;
        let slot = &mut slots[t.from.index() * nv + t.at.index()];
        let k = color as usize;
        if slot[k].is_some() {
            return Err(syntax(
                t.line,
                format!("second {color} transition for the same pair"),
            ));
        }
        slot[k] = Some(checked(g, &p, t)?);
        let [black, green, red] = *slot;
        if black.is_some() && (green.is_some() || red.is_some()) {
            return Err(syntax(
                t.line,
                "black and colored transitions for the same pair",
            ));
        }
    }
    let mut rows: Vec<Option<ParamRule>> = Vec::with_capacity(slots.len());
    for (i, slot) in slots.iter().enumerate() {
        rows.push(match *slot {
            [None, None, None] => None,
            [Some(b), None, None] => Some(ParamRule::Black(b)),
            [None, Some(green), Some(red)] => Some(ParamRule::Test { green, red }),
            _ => {
                return Err(Error::InvalidAutomaton(format!(
                    "state {} at vertex {} has a green transition without a red one or vice versa",
                    p.names[i / nv],
                    g.name(VertexId::from(i % nv))
                )))
            }
        });
    }
    let rows = fill(g, &p, rows, ParamRule::Black)?;
    ParamAutomaton::new(g, p.names, p.init, rows)
}

fn fill<T>(
    g: &GameGraph,
    p: &Parsed,
    rows: Vec<Option<T>>,
    wrap: impl Fn(Rule) -> T,
) -> Result<Vec<T>> {
    let nv = g.vertex_count();
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| match r {
            Some(r) => Ok(r),
            None => {
                let s = StateId::from(i / nv);
                default_rule(g, s, VertexId::from(i % nv), &p.names[s.index()]).map(&wrap)
            }
        })
        .collect()
}
