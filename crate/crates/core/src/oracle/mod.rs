//! Brute-force reference implementations for cross-checking the decision
//! procedures on small instances, plus seeded random instance generators.
//!
//! Nothing here uses the value, product or dominance code of the library:
//! values come from exhaustive strategy enumeration and plays are evaluated
//! by walking them.

mod corpus;
mod gen;

use crate::automata::MealyStrategy;
use crate::error::{Error, Result};
use crate::game::{GameGraph, VertexId};
use crate::values::ValueTriple;

pub use corpus::{check_corpus, CorpusReport, Counterexample};
pub use gen::{
    gen_random_game, gen_random_mealy, gen_random_param, lollipop, GenConfig, Generator,
};

pub const MAX_VERTICES: usize = 7;
pub const MAX_MEMORY: usize = 3;
/// Largest number of candidate strategies any single enumeration may visit.
pub const MAX_CANDIDATES: u64 = 2_000_000;

fn guard_vertices(g: &GameGraph) -> Result<()> {
    if g.vertex_count() > MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices (at most {MAX_VERTICES})",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Payoff of the play from `v` when every vertex `u` moves to `choice[u]`.
fn walk(g: &GameGraph, choice: &[VertexId], v: VertexId) -> i64 {
    let mut seen = vec![false; g.vertex_count()];
    let mut u = v;
    loop {
        if let Some(p) = g.payoff(u) {
            return p;
        }
        if seen[u.index()] {
            return 0;
        }
        seen[u.index()] = true;
        u = choice[u.index()];
    }
}

/// Steps a mixed-radix counter; false once it wraps around.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Antagonistic and cooperative values of every vertex, by enumerating all
/// positional strategy pairs.
fn positional_values(g: &GameGraph) -> Result<(Vec<i64>, Vec<i64>)> {
    let inner: Vec<VertexId> = g.vertices().filter(|&v| !g.is_leaf(v)).collect();
    let (mine, theirs): (Vec<VertexId>, Vec<VertexId>) =
        inner.iter().partition(|&&v| g.is_protagonist(v));
    let total: u64 = inner
        .iter()
        .map(|&v| g.successors(v).len() as u64)
        .product();
    if total > MAX_CANDIDATES {
        return Err(Error::TooLarge(format!(
            "{total} positional strategy pairs"
        )));
    }
    let radix = |vs: &[VertexId]| {
        vs.iter()
            .map(|&v| g.successors(v).len())
            .collect::<Vec<_>>()
    };
    let (rp, ra) = (radix(&mine), radix(&theirs));
    let n = g.vertex_count();
    let mut choice: Vec<VertexId> = g.vertices().map(|v| g.successors(v)[0]).collect();
    let mut aval = vec![i64::MIN; n];
    let mut cval = vec![i64::MIN; n];
    let mut dp = vec![0; mine.len()];
    loop {
        for (k, &v) in mine.iter().enumerate() {
            choice[v.index()] = g.successors(v)[dp[k]];
        }
        let mut worst = vec![i64::MAX; n];
        let mut da = vec![0; theirs.len()];
        loop {
            for (k, &v) in theirs.iter().enumerate() {
                choice[v.index()] = g.successors(v)[da[k]];
            }
            for v in g.vertices() {
                let p = walk(g, &choice, v);
                worst[v.index()] = worst[v.index()].min(p);
                cval[v.index()] = cval[v.index()].max(p);
            }
            if !advance(&mut da, &ra) {
                break;
            }
        }
        for i in 0..n {
            aval[i] = aval[i].max(worst[i]);
        }
        if !advance(&mut dp, &rp) {
            break;
        }
    }
    Ok((aval, cval))
}

/// A Mealy strategy given as plain tables: `next[m][v]` and `mv[m][v]`.
struct Table<'a> {
    next: &'a [Vec<usize>],
    mv: &'a [Vec<Option<VertexId>>],
}

/// Worst and best payoff of the plays from (m, v) that follow `t`, found by
/// exploring every reachable (memory, vertex) pair.
fn table_values(g: &GameGraph, t: &Table, m: usize, v: VertexId) -> (i64, i64) {
    let memory = t.next.len();
    let n = g.vertex_count();
    let key = |m: usize, v: VertexId| m * n + v.index();
    let succ = |m: usize, v: VertexId| -> Vec<(usize, VertexId)> {
        if g.is_leaf(v) {
            return vec![];
        }
        let m2 = t.next[m][v.index()];
        match t.mv[m][v.index()] {
            Some(w) if g.is_protagonist(v) => vec![(m2, w)],
            _ => g.successors(v).iter().map(|&w| (m2, w)).collect(),
        }
    };
    let mut reached = vec![false; memory * n];
    let mut stack = vec![(m, v)];
    reached[key(m, v)] = true;
    let mut order = Vec::new();
    while let Some((a, u)) = stack.pop() {
        order.push((a, u));
        for (b, w) in succ(a, u) {
            if !reached[key(b, w)] {
                reached[key(b, w)] = true;
                stack.push((b, w));
            }
        }
    }
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    let mut note = |p: i64| {
        lo = lo.min(p);
        hi = hi.max(p);
    };
    for &(_, u) in &order {
        if let Some(p) = g.payoff(u) {
            note(p);
        }
    }
    // A reachable pair that can come back to itself without touching a leaf
    // gives an infinite play worth 0.
    let on_cycle = order.iter().any(|&(a, u)| {
        let mut seen = vec![false; memory * n];
        let mut stack = succ(a, u);
        while let Some((b, w)) = stack.pop() {
            if (b, w) == (a, u) {
                return true;
            }
            if g.is_leaf(w) || seen[key(b, w)] {
                continue;
            }
            seen[key(b, w)] = true;
            stack.extend(succ(b, w));
        }
        false
    });
    if on_cycle {
        note(0);
    }
    (lo, hi)
}

/// Value triples of every vertex. acVal is the best cooperative value among
/// Mealy strategies with at most `memory` states that guarantee aVal.
pub fn brute_value_table(g: &GameGraph, memory: usize) -> Result<Vec<ValueTriple>> {
    guard_vertices(g)?;
    if memory == 0 || memory > MAX_MEMORY {
        return Err(Error::TooLarge(format!(
            "memory bound {memory} (1 to {MAX_MEMORY})"
        )));
    }
    let (aval, cval) = positional_values(g)?;

    let inner: Vec<VertexId> = g.vertices().filter(|&v| !g.is_leaf(v)).collect();
    let per_state: Vec<usize> = inner
        .iter()
        .map(|&v| {
            memory
                * if g.is_protagonist(v) {
                    g.successors(v).len()
                } else {
                    1
                }
        })
        .collect();
    let radix: Vec<usize> = (0..memory)
        .flat_map(|_| per_state.iter().copied())
        .collect();
    radix
        .iter()
        .try_fold(1u64, |acc, &r| acc.checked_mul(r as u64))
        .filter(|&t| t <= MAX_CANDIDATES)
        .ok_or_else(|| Error::TooLarge(format!("too many {memory}-state strategies")))?;

    let n = g.vertex_count();
    let mut next = vec![vec![0usize; n]; memory];
    let mut mv: Vec<Vec<Option<VertexId>>> = vec![vec![None; n]; memory];
    let mut acval = vec![i64::MIN; n];
    let mut digits = vec![0; radix.len()];
    loop {
        for m in 0..memory {
            for (k, &v) in inner.iter().enumerate() {
                let d = digits[m * inner.len() + k];
                next[m][v.index()] = d % memory;
                mv[m][v.index()] = g.is_protagonist(v).then(|| g.successors(v)[d / memory]);
            }
        }
        let t = Table {
            next: &next,
            mv: &mv,
        };
        for v in g.vertices() {
            let (lo, hi) = table_values(g, &t, 0, v);
            if lo == aval[v.index()] {
                acval[v.index()] = acval[v.index()].max(hi);
            }
        }
        if !advance(&mut digits, &radix) {
            break;
        }
    }
    Ok((0..n)
        .map(|i| ValueTriple {
            aval: aval[i],
            cval: cval[i],
            acval: acval[i],
        })
        .collect())
}

/// The value triple of one vertex with the default memory bound of 2.
pub fn brute_values(g: &GameGraph, v: VertexId) -> Result<ValueTriple> {
    Ok(brute_value_table(g, 2)?[v.index()])
}

fn tables(s: &MealyStrategy, g: &GameGraph) -> (Vec<Vec<usize>>, Vec<Vec<Option<VertexId>>>) {
    let next = s
        .states()
        .map(|m| g.vertices().map(|v| s.update(m, v).index()).collect())
        .collect();
    let mv = s
        .states()
        .map(|m| g.vertices().map(|v| s.choose(m, v)).collect())
        .collect();
    (next, mv)
}

/// Whether `s1 ⪯ s2`, by unrolling the histories both strategies agree on
/// and testing every point where they first disagree.
pub fn brute_dominance(s1: &MealyStrategy, s2: &MealyStrategy, g: &GameGraph) -> Result<bool> {
    guard_vertices(g)?;
    for s in [s1, s2] {
        s.validate(g)?;
        if s.state_count() > MAX_MEMORY {
            return Err(Error::TooLarge(format!(
                "{} memory states (at most {MAX_MEMORY})",
                s.state_count()
            )));
        }
    }
    let (n1, m1) = tables(s1, g);
    let (n2, m2) = tables(s2, g);
    let t1 = Table { next: &n1, mv: &m1 };
    let t2 = Table { next: &n2, mv: &m2 };

    let mut visited = std::collections::HashSet::new();
    let mut stack = vec![(s1.init().index(), g.init(), s2.init().index())];
    while let Some((a, v, b)) = stack.pop() {
        if !visited.insert((a, v, b)) {
            continue;
        }
        let (na, nb) = (n1[a][v.index()], n2[b][v.index()]);
        if g.is_protagonist(v) {
            let (x, y) = (m1[a][v.index()], m2[b][v.index()]);
            if x != y {
                let best_first = table_values(g, &t1, a, v).1;
                let worst_second = table_values(g, &t2, b, v).0;
                if best_first > worst_second {
                    return Ok(false);
                }
                continue;
            }
            stack.push((na, x.expect("protagonist move"), nb));
        } else {
            for &w in g.successors(v) {
                stack.push((na, w, nb));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::parse_game;
    use crate::testing::{fixture, helpme, mealy};

    fn triple(aval: i64, cval: i64, acval: i64) -> ValueTriple {
        ValueTriple { aval, cval, acval }
    }

    #[test]
    fn helpme_values() {
        let g = helpme();
        let v = |n| g.vertex(n).unwrap();
        assert_eq!(brute_values(&g, v("v0")).unwrap(), triple(1, 2, 2));
        assert_eq!(brute_values(&g, v("v1")).unwrap(), triple(1, 2, 2));
        assert_eq!(brute_values(&g, v("l2")).unwrap(), triple(2, 2, 2));
    }

    #[test]
    fn memoryless_strategies_miss_the_hopeful_value() {
        let g = helpme();
        let t = brute_value_table(&g, 1).unwrap();
        assert_eq!(t[0], triple(1, 2, 1));
    }

    #[test]
    fn entry_loop_owned_by_the_protagonist() {
        let g = parse_game(&fixture("helpme_loop.game")).unwrap();
        assert_eq!(brute_values(&g, g.vertex("v0").unwrap()).unwrap().aval, 1);
        let g = parse_game(&fixture("helpme_loop_antag.game")).unwrap();
        assert_eq!(brute_values(&g, g.vertex("v0").unwrap()).unwrap().aval, 0);
    }

    #[test]
    fn dominance_examples() {
        let g = helpme();
        let (s0, s1, so) = (
            mealy(&g, "s0.mealy"),
            mealy(&g, "s1.mealy"),
            mealy(&g, "somega.mealy"),
        );
        assert!(brute_dominance(&s0, &s1, &g).unwrap());
        assert!(brute_dominance(&s1, &s1, &g).unwrap());
        assert!(!brute_dominance(&s1, &so, &g).unwrap());
        assert!(!brute_dominance(&so, &s0, &g).unwrap());
    }

    #[test]
    fn guards_reject_large_games() {
        let mut text = String::new();
        for i in 0..8 {
            text.push_str(&format!("vertex l{i} owner=A leaf={i}\nedge l{i} l{i}\n"));
        }
        text.push_str("init l0\n");
        let g = parse_game(&text).unwrap();
        assert!(matches!(
            brute_values(&g, g.init()),
            Err(Error::TooLarge(_))
        ));
    }
}
