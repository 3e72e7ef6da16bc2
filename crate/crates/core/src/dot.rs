//! Graphviz export of games and products.

use std::fmt::Write;

use crate::automata::{
    colored_product, one_player_product, sync_product, ParamAutomaton, Strategy,
};
use crate::game::{GameGraph, VertexId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn vertex_attrs(g: &GameGraph, v: VertexId) -> &'static str {
    match (g.is_protagonist(v), g.is_leaf(v)) {
        (_, true) => "shape=doublecircle",
        (true, false) => "shape=circle",
        (false, false) => "shape=box",
    }
}

fn vertex_label(g: &GameGraph, v: VertexId) -> String {
    match g.payoff(v) {
        Some(p) => format!("{} ({p})", g.name(v)),
        None => g.name(v).to_string(),
    }
}

/// Protagonist vertices are circles, antagonist vertices boxes, leaves
/// double circles labelled with their payoff.
pub fn game_dot(g: &GameGraph) -> String {
    let mut out = String::from("digraph game {\n");
    for v in g.vertices() {
        let _ = writeln!(
            out,
            "  n{} [label={}, {}];",
            v.0,
            quote(&vertex_label(g, v)),
            vertex_attrs(g, v)
        );
    }
    for v in g.vertices() {
        for w in g.successors(v) {
            let _ = writeln!(out, "  n{} -> n{} [color=black];", v.0, w.0);
        }
    }
    let _ = writeln!(out, "  start [shape=point];\n  start -> n{};", g.init().0);
    out.push_str("}\n");
    out
}

pub fn strategy_product_dot<S: Strategy>(s: &S, g: &GameGraph) -> String {
    let p = one_player_product(s, g);
    let mut out = String::from("digraph product {\n");
    for (i, &(m, v)) in p.states().iter().enumerate() {
        let label = format!("{}, {}", s.describe(m), vertex_label(g, v));
        let _ = writeln!(
            out,
            "  n{i} [label={}, {}];",
            quote(&label),
            vertex_attrs(g, v)
        );
    }
    for i in 0..p.len() {
        for j in p.successors(i) {
            let _ = writeln!(out, "  n{i} -> n{j} [color=black];");
        }
    }
    out.push_str("  start [shape=point];\n  start -> n0;\n}\n");
    out
}

pub fn colored_product_dot(p: &ParamAutomaton, g: &GameGraph) -> String {
    let cp = colored_product(p, g);
    let mut out = String::from("digraph product {\n");
    for (i, &(m, v)) in cp.states().iter().enumerate() {
        let label = format!("{}, {}", p.state_name(m), vertex_label(g, v));
        let _ = writeln!(
            out,
            "  n{i} [label={}, {}];",
            quote(&label),
            vertex_attrs(g, v)
        );
    }
    for e in cp.edges() {
        let _ = writeln!(out, "  n{} -> n{} [color={}];", e.from, e.to, e.color);
    }
    out.push_str("  start [shape=point];\n  start -> n0;\n}\n");
    out
}

/// Divergence states are drawn filled.
pub fn sync_product_dot<A: Strategy, B: Strategy>(a: &A, g: &GameGraph, b: &B) -> String {
    let sp = sync_product(a, g, b);
    let mut out = String::from("digraph sync {\n");
    for i in 0..sp.len() {
        let (m1, v, m2) = sp.state(i);
        let label = format!(
            "{}, {}, {}",
            a.describe(m1),
            vertex_label(g, v),
            b.describe(m2)
        );
        let fill = if sp.is_divergent(i) {
            ", style=filled"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  n{i} [label={}, {}{fill}];",
            quote(&label),
            vertex_attrs(g, v)
        );
    }
    for i in 0..sp.len() {
        for j in sp.successors(i) {
            let _ = writeln!(out, "  n{i} -> n{j} [color=black];");
        }
    }
    out.push_str("  start [shape=point];\n  start -> n0;\n}\n");
    out
}
