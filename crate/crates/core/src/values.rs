//! Antagonistic, cooperative and antagonistic-cooperative values of vertices.

use std::collections::VecDeque;

use serde::Serialize;

use crate::game::{GameGraph, Player, VertexId};
use crate::reach::{extremal_values, Extremum};

/// `aval ≤ acval ≤ cval` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ValueTriple {
    pub aval: i64,
    pub cval: i64,
    pub acval: i64,
}

/// Vertices from which `player` can force a visit to `target`.
pub fn attractor(g: &GameGraph, player: Player, target: &[bool]) -> Vec<bool> {
    attractor_ranks(g, player, target)
        .into_iter()
        .map(|r| r.is_some())
        .collect()
}

/// Attractor with the round in which each vertex was added (0 for targets).
/// From a player vertex of rank `r > 0` some successor has rank `< r`; from an
/// opponent vertex of rank `r > 0` every successor does.
pub(crate) fn attractor_ranks(g: &GameGraph, player: Player, target: &[bool]) -> Vec<Option<u32>> {
    let n = g.vertex_count();
    assert_eq!(target.len(), n);
    let mut preds: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for v in g.vertices() {
        for &w in g.successors(v) {
            preds[w.index()].push(v);
        }
    }
    let mut pending: Vec<usize> = g.vertices().map(|v| g.successors(v).len()).collect();
    let mut rank = vec![None; n];
    let mut queue = VecDeque::new();
    for v in g.vertices() {
        if target[v.index()] {
            rank[v.index()] = Some(0);
            queue.push_back(v);
        }
    }
    while let Some(w) = queue.pop_front() {
        let r = rank[w.index()].unwrap();
        for &p in &preds[w.index()] {
            if rank[p.index()].is_some() {
                continue;
            }
            let forced = if g.owner(p) == player {
                true
            } else {
                pending[p.index()] -= 1;
                pending[p.index()] == 0
            };
            if forced {
                rank[p.index()] = Some(r + 1);
                queue.push_back(p);
            }
        }
    }
    rank
}

/// Candidate antagonistic values: every leaf payoff and 0, descending.
pub fn candidate_thresholds(g: &GameGraph) -> Vec<i64> {
    let mut ts: Vec<i64> = g.leaves().filter_map(|l| g.payoff(l)).collect();
    ts.push(0);
    ts.sort_unstable_by(|a, b| b.cmp(a));
    ts.dedup();
    ts
}

/// Where the protagonist can guarantee a payoff of at least `t`.
///
/// For `t > 0` this is the protagonist attractor of the leaves paying at least
/// `t`, returned with its ranks. For `t ≤ 0` it is the complement of the
/// antagonist attractor of the leaves paying less than `t`.
pub(crate) fn threshold_region(g: &GameGraph, t: i64) -> (Vec<bool>, Option<Vec<Option<u32>>>) {
    if t > 0 {
        let good: Vec<bool> = g
            .vertices()
            .map(|v| g.payoff(v).is_some_and(|p| p >= t))
            .collect();
        let ranks = attractor_ranks(g, Player::Protagonist, &good);
        (ranks.iter().map(|r| r.is_some()).collect(), Some(ranks))
    } else {
        let bad: Vec<bool> = g
            .vertices()
            .map(|v| g.payoff(v).is_some_and(|p| p < t))
            .collect();
        let trap = attractor(g, Player::Antagonist, &bad);
        (trap.into_iter().map(|b| !b).collect(), None)
    }
}

/// The value table of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameValues {
    triples: Vec<ValueTriple>,
}

impl GameValues {
    pub fn compute(g: &GameGraph) -> Self {
        let n = g.vertex_count();
        let succ: Vec<Vec<u32>> = g
            .vertices()
            .map(|v| g.successors(v).iter().map(|w| w.0).collect())
            .collect();
        let payoff: Vec<Option<i64>> = g.vertices().map(|v| g.payoff(v)).collect();

        let cval: Vec<i64> = extremal_values(&succ, &payoff, Extremum::Max, true)
            .into_iter()
            .map(|x| x.expect("every vertex has an infinite continuation"))
            .collect();

        // Regions shrink as the threshold grows, so the first hit is the maximum.
        let mut aval: Vec<Option<i64>> = vec![None; n];
        for t in candidate_thresholds(g) {
            let (win, _) = threshold_region(g, t);
            for (i, w) in win.into_iter().enumerate() {
                if w && aval[i].is_none() {
                    aval[i] = Some(t);
                }
            }
        }
        let aval: Vec<i64> = aval
            .into_iter()
            .map(|x| x.expect("the lowest threshold is always winning"))
            .collect();

        // acVal: best cooperative outcome that never leaves the region where the
        // current antagonistic value is still guaranteed.
        let mut acval = vec![0i64; n];
        let mut levels = aval.clone();
        levels.sort_unstable();
        levels.dedup();
        for t in levels {
            let inside: Vec<bool> = aval.iter().map(|&a| a >= t).collect();
            let sub_succ: Vec<Vec<u32>> = succ
                .iter()
                .enumerate()
                .map(|(u, list)| {
                    if inside[u] {
                        list.iter()
                            .copied()
                            .filter(|&w| inside[w as usize])
                            .collect()
                    } else {
                        // Unused; keep the graph total.
                        vec![u as u32]
                    }
                })
                .collect();
            let best = extremal_values(&sub_succ, &payoff, Extremum::Max, t <= 0);
            for u in 0..n {
                if aval[u] == t {
                    acval[u] = best[u].expect("a guaranteeing play exists inside the region");
                }
            }
        }

        let triples = (0..n)
            .map(|i| ValueTriple {
                aval: aval[i],
                cval: cval[i],
                acval: acval[i],
            })
            .collect();
        GameValues { triples }
    }

    pub fn get(&self, v: VertexId) -> ValueTriple {
        self.triples[v.index()]
    }

    pub fn aval(&self, v: VertexId) -> i64 {
        self.triples[v.index()].aval
    }

    pub fn cval(&self, v: VertexId) -> i64 {
        self.triples[v.index()].cval
    }

    pub fn acval(&self, v: VertexId) -> i64 {
        self.triples[v.index()].acval
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, ValueTriple)> + '_ {
        self.triples
            .iter()
            .enumerate()
            .map(|(i, t)| (VertexId::from(i), *t))
    }
}

pub fn coop_value(g: &GameGraph, v: VertexId) -> i64 {
    GameValues::compute(g).cval(v)
}

pub fn antag_value(g: &GameGraph, v: VertexId) -> i64 {
    GameValues::compute(g).aval(v)
}

pub fn antag_coop_value(g: &GameGraph, v: VertexId) -> i64 {
    GameValues::compute(g).acval(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::parse_game;
    use crate::testing::{fixture, HELPME};

    fn set(g: &GameGraph, names: &[&str]) -> Vec<bool> {
        let mut s = vec![false; g.vertex_count()];
        for n in names {
            s[g.vertex(n).unwrap().index()] = true;
        }
        s
    }

    #[test]
    fn helpme_attractors() {
        let g = parse_game(HELPME).unwrap();
        assert_eq!(
            attractor(&g, Player::Protagonist, &set(&g, &["l1"])),
            set(&g, &["l1", "v0"])
        );
        assert_eq!(
            attractor(&g, Player::Protagonist, &set(&g, &["l2"])),
            set(&g, &["l2"])
        );
        let all = vec![true; g.vertex_count()];
        assert_eq!(attractor(&g, Player::Antagonist, &all), all);
    }

    #[test]
    fn helpme_values() {
        let g = parse_game(HELPME).unwrap();
        let vals = GameValues::compute(&g);
        let t = |n: &str| vals.get(g.vertex(n).unwrap());
        let triple = |a, c, ac| ValueTriple {
            aval: a,
            cval: c,
            acval: ac,
        };
        assert_eq!(t("v0"), triple(1, 2, 2));
        assert_eq!(t("v1"), triple(1, 2, 2));
        assert_eq!(t("l1"), triple(1, 1, 1));
        assert_eq!(t("l2"), triple(2, 2, 2));
        let v0 = g.vertex("v0").unwrap();
        assert_eq!(coop_value(&g, v0), 2);
        assert_eq!(antag_value(&g, v0), 1);
        assert_eq!(antag_coop_value(&g, v0), 2);
    }

    #[test]
    fn loop_variants() {
        // As drawn, the antagonist can idle on v0 forever.
        let g = parse_game(&fixture("helpme_loop_antag.game")).unwrap();
        let vals = GameValues::compute(&g);
        let v = |n| g.vertex(n).unwrap();
        assert_eq!(vals.aval(v("v0")), 0);
        assert_eq!(vals.acval(v("v0")), 2);
        assert_eq!(
            vals.get(v("v1")),
            ValueTriple {
                aval: 1,
                cval: 2,
                acval: 2
            }
        );

        let g = parse_game(&fixture("helpme_loop.game")).unwrap();
        let vals = GameValues::compute(&g);
        let v = |n| g.vertex(n).unwrap();
        assert_eq!(vals.aval(v("v0")), 1);
        assert_eq!(vals.acval(v("v1")), 2);
    }

    #[test]
    fn boolean_variant() {
        let g = parse_game(&fixture("helpme_bool.game")).unwrap();
        let vals = GameValues::compute(&g);
        let v0 = g.vertex("v0").unwrap();
        assert_eq!(
            vals.get(v0),
            ValueTriple {
                aval: 0,
                cval: 1,
                acval: 1
            }
        );
    }

    #[test]
    fn negative_payoffs_use_safety() {
        // p (protagonist) chooses between a leaf at -3 and an antagonist vertex
        // that may loop forever (0) or drop to -1.
        let text = "\
vertex p owner=P
vertex a owner=A
vertex bad owner=A leaf=-3
vertex meh owner=A leaf=-1
edge p bad
edge p a
edge a a
edge a meh
edge bad bad
edge meh meh
init p
";
        let g = parse_game(text).unwrap();
        let vals = GameValues::compute(&g);
        let v = |n| g.vertex(n).unwrap();
        assert_eq!(
            vals.get(v("p")),
            ValueTriple {
                aval: -1,
                cval: 0,
                acval: 0
            }
        );
        assert_eq!(
            vals.get(v("a")),
            ValueTriple {
                aval: -1,
                cval: 0,
                acval: 0
            }
        );
    }

    #[test]
    fn thresholds_are_descending_and_include_zero() {
        let g = parse_game(HELPME).unwrap();
        assert_eq!(candidate_thresholds(&g), vec![2, 1, 0]);
    }
}
