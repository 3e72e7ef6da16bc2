//! Dominance between finite-memory strategies, admissibility and
//! preadmissibility.
//!
//! Payoffs are prefix independent, so whether a history witnesses
//! non-dominance depends only on the product state it reaches. Every check
//! below therefore runs on explicit products and their per-state values.

use std::collections::VecDeque;

use serde::Serialize;

use crate::automata::{
    check_bound, one_player_product, sync_product, OnePlayerProduct, Strategy, StrategyValues,
};
use crate::error::Result;
use crate::game::{GameGraph, VertexId};
use crate::values::GameValues;

/// A strategy together with its reachable product and per-state values.
/// Building it once lets many comparisons share the work.
pub struct Profile<S: Strategy> {
    strategy: S,
    product: OnePlayerProduct<S::State>,
    values: StrategyValues,
}

impl<S: Strategy> Profile<S> {
    pub fn new(strategy: S, g: &GameGraph) -> Result<Self> {
        check_bound(strategy.vertex_count(), g)?;
        let product = one_player_product(&strategy, g);
        let values = product.values();
        Ok(Profile {
            strategy,
            product,
            values,
        })
    }

    pub fn strategy(&self) -> &S {
        &self.strategy
    }

    pub fn product(&self) -> &OnePlayerProduct<S::State> {
        &self.product
    }

    pub fn values(&self) -> &StrategyValues {
        &self.values
    }

    /// Worst-case value from the product state (m, v), if reachable.
    pub fn aval(&self, m: S::State, v: VertexId) -> Option<i64> {
        self.product.id(m, v).map(|i| self.values.aval[i])
    }

    /// Best-case value from the product state (m, v), if reachable.
    pub fn cval(&self, m: S::State, v: VertexId) -> Option<i64> {
        self.product.id(m, v).map(|i| self.values.cval[i])
    }

    /// Worst-case value of the strategy from the start of the game.
    pub fn initial_aval(&self) -> i64 {
        self.values.aval[0]
    }

    pub fn initial_cval(&self) -> i64 {
        self.values.cval[0]
    }
}

/// A history after which the first strategy may still earn more than the
/// second can guarantee, while the two strategies already disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceWitness {
    pub history: Vec<VertexId>,
    pub first_state: String,
    pub second_state: String,
    /// Best case of the first strategy after the history.
    pub first_cval: i64,
    /// Worst case of the second strategy after the history.
    pub second_aval: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceVerdict {
    pub holds: bool,
    pub witness: Option<DominanceWitness>,
}

/// Decides whether `a` is weakly dominated by `b`, with a witness history
/// (shortest, first in successor order) when it is not.
pub fn dominance<A: Strategy, B: Strategy>(
    a: &Profile<A>,
    b: &Profile<B>,
    g: &GameGraph,
) -> DominanceVerdict {
    let sp = sync_product(&a.strategy, g, &b.strategy);
    for i in sp.divergence_states() {
        let (m1, v, m2) = sp.state(i);
        let c1 = a.cval(m1, v).expect("synchronized states are reachable");
        let a2 = b.aval(m2, v).expect("synchronized states are reachable");
        if c1 > a2 {
            return DominanceVerdict {
                holds: false,
                witness: Some(DominanceWitness {
                    history: sp.history(i),
                    first_state: a.strategy.describe(m1),
                    second_state: b.strategy.describe(m2),
                    first_cval: c1,
                    second_aval: a2,
                }),
            };
        }
    }
    DominanceVerdict {
        holds: true,
        witness: None,
    }
}

/// [`dominance`] without building a witness.
fn holds<A: Strategy, B: Strategy>(a: &Profile<A>, b: &Profile<B>, g: &GameGraph) -> bool {
    let sp = sync_product(&a.strategy, g, &b.strategy);
    let ok = sp.divergence_states().all(|i| {
        let (m1, v, m2) = sp.state(i);
        a.cval(m1, v) <= b.aval(m2, v)
    });
    ok
}

/// `s1 ⪯ s2`: against every antagonist strategy, `s2` does at least as well.
pub fn weakly_dominated<A: Strategy, B: Strategy>(
    s1: A,
    s2: B,
    g: &GameGraph,
) -> Result<DominanceVerdict> {
    let a = Profile::new(s1, g)?;
    let b = Profile::new(s2, g)?;
    Ok(dominance(&a, &b, g))
}

/// Strict dominance from the profiles of both strategies.
pub fn strict_dominance<A: Strategy, B: Strategy>(
    a: &Profile<A>,
    b: &Profile<B>,
    g: &GameGraph,
) -> bool {
    holds(a, b, g) && !holds(b, a, g)
}

/// `s1 ≺ s2`: weakly dominated and not the other way round.
pub fn strictly_dominated<A: Strategy, B: Strategy>(s1: A, s2: B, g: &GameGraph) -> Result<bool> {
    let a = Profile::new(s1, g)?;
    let b = Profile::new(s2, g)?;
    Ok(strict_dominance(&a, &b, g))
}

/// A reachable product state from which some other strategy does strictly
/// better against some antagonist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityWitness {
    pub state: String,
    pub vertex: VertexId,
    pub history: Vec<VertexId>,
    pub strategy_aval: i64,
    pub strategy_cval: i64,
    pub aval: i64,
    pub acval: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub preadmissible: bool,
    pub witnesses: Vec<AdmissibilityWitness>,
}

/// Product-level witness analysis of one strategy.
pub(crate) struct WitnessAnalysis {
    /// Product state ids that witness non-admissibility, in BFS order.
    pub witnesses: Vec<usize>,
    /// States where the strategy is as good as the game allows: worst case
    /// equal to the vertex's antagonistic value and best case equal to its
    /// antagonistic-cooperative value.
    pub good: Vec<bool>,
}

pub(crate) fn is_witness(sa: i64, sc: i64, aval: i64, acval: i64) -> bool {
    sc <= aval && aval <= acval && (sa < sc || sc < aval || aval < acval)
}

pub(crate) fn analyse<S: Strategy>(p: &Profile<S>, gv: &GameValues) -> WitnessAnalysis {
    let mut witnesses = Vec::new();
    let mut good = Vec::with_capacity(p.product.len());
    for (i, &(_, v)) in p.product.states().iter().enumerate() {
        let (sa, sc) = (p.values.aval[i], p.values.cval[i]);
        let t = gv.get(v);
        if is_witness(sa, sc, t.aval, t.acval) {
            witnesses.push(i);
        }
        good.push(sa == t.aval && sc == t.acval);
    }
    WitnessAnalysis { witnesses, good }
}

/// Witnesses that some path reaches without first passing through a good
/// state at the same vertex. The strategy is preadmissible iff there are none.
pub(crate) fn problematic<S: Strategy>(
    p: &Profile<S>,
    g: &GameGraph,
    wa: &WitnessAnalysis,
) -> Vec<usize> {
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for &w in &wa.witnesses {
        by_vertex[p.product.state(w).1.index()].push(w);
    }
    let n = p.product.len();
    let mut out = Vec::new();
    for (v, ws) in by_vertex.iter().enumerate() {
        if ws.is_empty() {
            continue;
        }
        let blocked = |i: usize| wa.good[i] && p.product.state(i).1.index() == v;
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        if !blocked(0) {
            seen[0] = true;
            queue.push_back(0);
        }
        while let Some(i) = queue.pop_front() {
            for &j in p.product.successors(i) {
                let j = j as usize;
                if !seen[j] && !blocked(j) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        out.extend(ws.iter().copied().filter(|&w| seen[w]));
    }
    out.sort_unstable();
    out
}

pub fn admissibility<S: Strategy>(s: S, g: &GameGraph) -> Result<AdmissibilityVerdict> {
    let p = Profile::new(s, g)?;
    let gv = GameValues::compute(g);
    Ok(admissibility_of(&p, g, &gv))
}

pub fn admissibility_of<S: Strategy>(
    p: &Profile<S>,
    g: &GameGraph,
    gv: &GameValues,
) -> AdmissibilityVerdict {
    let wa = analyse(p, gv);
    let preadmissible = problematic(p, g, &wa).is_empty();
    let witnesses = wa
        .witnesses
        .iter()
        .map(|&i| {
            let (m, v) = p.product.state(i);
            let t = gv.get(v);
            AdmissibilityWitness {
                state: p.strategy.describe(m),
                vertex: v,
                history: p.product.history(i),
                strategy_aval: p.values.aval[i],
                strategy_cval: p.values.cval[i],
                aval: t.aval,
                acval: t.acval,
            }
        })
        .collect();
    AdmissibilityVerdict {
        admissible: wa.witnesses.is_empty(),
        preadmissible,
        witnesses,
    }
}

/// Reachable product states (memory, vertex) witnessing non-admissibility.
pub fn non_admissibility_witnesses<S: Strategy>(
    s: S,
    g: &GameGraph,
) -> Result<Vec<(S::State, VertexId)>> {
    let p = Profile::new(s, g)?;
    let wa = analyse(&p, &GameValues::compute(g));
    Ok(wa.witnesses.iter().map(|&i| p.product.state(i)).collect())
}

pub fn is_admissible<S: Strategy>(s: S, g: &GameGraph) -> Result<bool> {
    Ok(non_admissibility_witnesses(s, g)?.is_empty())
}

pub fn is_preadmissible<S: Strategy>(s: S, g: &GameGraph) -> Result<bool> {
    let p = Profile::new(s, g)?;
    let wa = analyse(&p, &GameValues::compute(g));
    Ok(problematic(&p, g, &wa).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::MealyStrategy;
    use crate::testing::{fixture, helpme, mealy};

    fn names(g: &GameGraph, h: &[VertexId]) -> Vec<String> {
        h.iter().map(|&v| g.name(v).to_string()).collect()
    }

    #[test]
    fn settling_now_is_dominated_by_asking_once() {
        let g = helpme();
        let (s0, s1) = (mealy(&g, "s0.mealy"), mealy(&g, "s1.mealy"));
        assert!(weakly_dominated(&s0, &s1, &g).unwrap().holds);
        assert!(strictly_dominated(&s0, &s1, &g).unwrap());
        assert!(!weakly_dominated(&s1, &s0, &g).unwrap().holds);
    }

    #[test]
    fn always_asking_is_not_below_settling() {
        let g = helpme();
        let (so, s0) = (mealy(&g, "somega.mealy"), mealy(&g, "s0.mealy"));
        let v = weakly_dominated(&so, &s0, &g).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(names(&g, &w.history), ["v0"]);
        assert_eq!((w.first_cval, w.second_aval), (2, 1));
        assert!(!strictly_dominated(&s0, &so, &g).unwrap());
    }

    #[test]
    fn asking_once_is_not_below_always_asking() {
        let g = helpme();
        let (s1, so) = (mealy(&g, "s1.mealy"), mealy(&g, "somega.mealy"));
        let v = weakly_dominated(&s1, &so, &g).unwrap();
        assert!(!v.holds);
        assert_eq!(names(&g, &v.witness.unwrap().history), ["v0", "v1", "v0"]);
    }

    #[test]
    fn dominance_is_reflexive_but_not_strict() {
        let g = helpme();
        for f in ["s0.mealy", "s1.mealy", "somega.mealy"] {
            let s = mealy(&g, f);
            assert!(weakly_dominated(&s, &s, &g).unwrap().holds);
            assert!(!strictly_dominated(&s, &s, &g).unwrap());
        }
    }

    #[test]
    fn settling_now_is_not_admissible() {
        let g = helpme();
        let s0 = mealy(&g, "s0.mealy");
        let v = admissibility(&s0, &g).unwrap();
        assert!(!v.admissible);
        assert!(!v.preadmissible);
        assert_eq!(names(&g, &v.witnesses[0].history), ["v0"]);
    }

    #[test]
    fn always_asking_is_admissible() {
        let g = helpme();
        let v = admissibility(mealy(&g, "somega.mealy"), &g).unwrap();
        assert!(v.admissible && v.preadmissible && v.witnesses.is_empty());
    }

    #[test]
    fn asking_once_is_preadmissible_but_not_admissible() {
        let g = helpme();
        let s1 = mealy(&g, "s1.mealy");
        assert!(!is_admissible(&s1, &g).unwrap());
        assert!(is_preadmissible(&s1, &g).unwrap());
    }

    #[test]
    fn corridor_games_have_no_witnesses() {
        let g = crate::game::parse_game(
            "vertex a owner=P\nvertex b owner=A\nvertex l owner=A leaf=3\n\
             edge a b\nedge b l\nedge l l\ninit a\n",
        )
        .unwrap();
        let s = MealyStrategy::positional(&g, &[g.vertex("b"), None, None]).unwrap();
        assert!(is_admissible(&s, &g).unwrap());
    }

    #[test]
    fn mismatched_strategy_is_an_error() {
        let g = helpme();
        let other = crate::game::parse_game(&fixture("helpme_loop.game")).unwrap();
        let s0 = mealy(&g, "s0.mealy");
        assert!(weakly_dominated(&s0, &s0, &other).is_err());
        assert!(admissibility(&s0, &other).is_err());
    }
}
