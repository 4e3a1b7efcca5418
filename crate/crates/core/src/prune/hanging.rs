//! The κ-hanging predicate and the per-pair sets `B[s, t]`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::paths::{DistanceOracle, ScaledGraph, Walk, INF};
use crate::rational::{split_u64, Rational};

/// Indices `i < j` (0-based) into a walk at which an edge hangs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HangingWitness {
    pub edge: EdgeId,
    pub i: usize,
    pub j: usize,
    pub kappa: Rational,
}

/// `1 / (3(1 + ε))`, the hanging threshold used by the pruning rounds.
pub fn pruning_kappa(eps: &Rational) -> Rational {
    Rational::one() / (Rational::from_integer(3.into()) * (Rational::one() + eps))
}

/// Smallest `(i, j)` with `i < j` such that `edge` hangs on `walk` at
/// `(walk[i], walk[j])`, trying both orientations of the edge.
pub fn is_hanging(
    g: &WeightedGraph,
    dist: &DistanceOracle,
    edge: EdgeId,
    walk: &Walk,
    kappa: &Rational,
    eps: &Rational,
) -> Result<Option<HangingWitness>> {
    if edge >= g.m() {
        return Err(Error::InvalidParameter(format!("edge id {edge} out of range")));
    }
    let e = g.edge(edge);
    let mut prefix = vec![Rational::zero()];
    for id in walk.edge_ids(g)? {
        let next = prefix.last().unwrap() + &g.edge(id).w;
        prefix.push(next);
    }
    let need = kappa * &e.w;
    let budget = (Rational::one() + eps) * &e.w;
    let vs = walk.vertices();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let span = &prefix[j] - &prefix[i];
            if span < need {
                continue;
            }
            let ends = |x: usize, y: usize| match (dist.dist(x, vs[i]), dist.dist(vs[j], y)) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            let best = match (ends(e.u, e.v), ends(e.v, e.u)) {
                (Some(a), Some(b)) => Some(if a < b { a } else { b }),
                (a, b) => a.or(b),
            };
            if best.is_some_and(|c| c + &span <= budget) {
                return Ok(Some(HangingWitness {
                    edge,
                    i,
                    j,
                    kappa: kappa.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// A pool edge hanging at `(s, t)` on the shortest path. `limit` is the
/// largest walk length between `s` and `t` on which it still hangs at the
/// endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BMember {
    pub edge: EdgeId,
    pub weight: u64,
    pub limit: u64,
}

/// `B[s, t]` for every ordered pair, in scaled integer units.
#[derive(Clone, Debug)]
pub struct BTable {
    n: usize,
    sets: Vec<Vec<BMember>>,
}

impl BTable {
    pub fn members(&self, s: usize, t: usize) -> &[BMember] {
        &self.sets[s * self.n + t]
    }

    pub fn edges(&self, s: usize, t: usize) -> impl Iterator<Item = EdgeId> + '_ {
        self.members(s, t).iter().map(|m| m.edge)
    }

    pub fn weight(&self, s: usize, t: usize) -> u64 {
        self.members(s, t).iter().map(|m| m.weight).sum()
    }

    /// Weight of the members still hanging on an `s`–`t` walk of length `len`.
    pub fn weight_at(&self, s: usize, t: usize, len: u64) -> u64 {
        self.members(s, t)
            .iter()
            .filter(|m| m.limit >= len)
            .map(|m| m.weight)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.iter().all(Vec::is_empty)
    }
}

/// Computes `B[s, t]` over `pool` for a graph whose distances are `dist`.
pub fn compute_b(
    g: &WeightedGraph,
    pool: &[EdgeId],
    dist: &DistanceOracle,
    eps: &Rational,
) -> Result<BTable> {
    let sg = ScaledGraph::with_scale(g, dist.scale())?;
    compute_b_scaled(&sg, pool, dist, eps)
}

pub(crate) fn compute_b_scaled(
    sg: &ScaledGraph,
    pool: &[EdgeId],
    dist: &DistanceOracle,
    eps: &Rational,
) -> Result<BTable> {
    let (p, q) = split_u64(eps)?;
    let (p, q) = (p as u128, q as u128);
    let n = sg.n();
    let mut sets = vec![Vec::new(); n * n];
    for &id in pool {
        let (a, b, w) = sg.edge(id);
        let w128 = w as u128;
        let reach = (q + p) * w128 / q;
        for s in 0..n {
            for t in 0..n {
                let d = dist.int_dist(s, t);
                if s == t || d == INF || 3 * (q + p) * (d as u128) < q * w128 {
                    continue;
                }
                let side = |x: usize, y: usize| {
                    let (l, r) = (dist.int_dist(x, s), dist.int_dist(t, y));
                    if l == INF || r == INF {
                        None
                    } else {
                        Some(l as u128 + r as u128)
                    }
                };
                let c = match (side(a, b), side(b, a)) {
                    (Some(x), Some(y)) => x.min(y),
                    (x, y) => match x.or(y) {
                        Some(c) => c,
                        None => continue,
                    },
                };
                if c + d as u128 <= reach {
                    sets[s * n + t].push(BMember {
                        edge: id,
                        weight: w,
                        limit: (reach - c) as u64,
                    });
                }
            }
        }
    }
    for set in &mut sets {
        set.sort_by_key(|m| m.edge);
    }
    Ok(BTable { n, sets })
}
