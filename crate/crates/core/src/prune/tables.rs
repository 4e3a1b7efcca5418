//! Dynamic programming over `(s, t, L)` triples.

use num_bigint::BigInt;

use super::hanging::{compute_b_scaled, BTable};
use super::PruneOptions;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::paths::{DistanceOracle, EdgeMultiset, ScaledGraph, Walk, INF};
use crate::rational::{floor_pow2, split_u64, Rational};

/// How an entry's walk was formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Back {
    /// The canonical shortest path, charged with `B[s, t]`.
    Base,
    /// `ρ[s, z, left] ∘ ρ[z, t, L - left]`, plus the members of `B[s, t]`
    /// still hanging at length `L` when `include_b` is set.
    Split { z: usize, left: u64, include_b: bool },
}

/// A realizable table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpEntry {
    pub value: u64,
    pub back: Back,
}

/// Filled tables for one pruning round, in scaled integer units.
#[derive(Clone, Debug)]
pub struct DpTables {
    n: usize,
    dist: DistanceOracle,
    b: BTable,
    // Per ordered pair: entries for L in [dist, hi].
    lo: Vec<u64>,
    cells: Vec<Vec<Option<DpEntry>>>,
}

/// The triple maximizing `DP / L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestTriple {
    pub s: usize,
    pub t: usize,
    pub len: u64,
    pub value: u64,
    pub beta: Rational,
}

impl DpTables {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> &BTable {
        &self.b
    }

    pub fn dist(&self) -> &DistanceOracle {
        &self.dist
    }

    /// The entry at `(s, t, len)`, or `None` when it is not realizable.
    pub fn entry(&self, s: usize, t: usize, len: u64) -> Option<&DpEntry> {
        let k = s * self.n + t;
        let lo = self.lo[k];
        if len < lo {
            return None;
        }
        self.cells[k].get((len - lo) as usize)?.as_ref()
    }

    pub fn is_realizable(&self, s: usize, t: usize, len: u64) -> bool {
        self.entry(s, t, len).is_some()
    }

    /// Realizable entries with `s != t`, ordered by `(s, t, L)`.
    pub fn realizable(&self) -> impl Iterator<Item = (usize, usize, u64, &DpEntry)> + '_ {
        (0..self.n * self.n)
            .filter(move |k| k / self.n != k % self.n)
            .flat_map(move |k| {
                let lo = self.lo[k];
                self.cells[k].iter().enumerate().filter_map(move |(i, c)| {
                    c.as_ref()
                        .map(|e| (k / self.n, k % self.n, lo + i as u64, e))
                })
            })
    }

    /// Walk and charged multiset of a realizable entry.
    pub fn reconstruct(&self, s: usize, t: usize, len: u64) -> Result<(Walk, EdgeMultiset)> {
        if s == t && len == 0 {
            return Ok((Walk::single(s), EdgeMultiset::new()));
        }
        let mut vertices = Vec::new();
        let mut charged = EdgeMultiset::new();
        self.unfold(s, t, len, &mut vertices, &mut charged)?;
        Ok((Walk::new(vertices)?, charged))
    }

    fn unfold(
        &self,
        s: usize,
        t: usize,
        len: u64,
        vertices: &mut Vec<usize>,
        charged: &mut EdgeMultiset,
    ) -> Result<()> {
        let entry = self
            .entry(s, t, len)
            .ok_or(Error::Unrealizable { s, t, len })?;
        match entry.back {
            Back::Base => {
                let path = self.dist.path(s, t).ok_or(Error::Unrealizable { s, t, len })?;
                let skip = usize::from(!vertices.is_empty());
                vertices.extend_from_slice(&path.vertices()[skip..]);
                for id in self.b.edges(s, t) {
                    charged.insert(id);
                }
            }
            Back::Split { z, left, include_b } => {
                self.unfold(s, z, left, vertices, charged)?;
                self.unfold(z, t, len - left, vertices, charged)?;
                if include_b {
                    for m in self.b.members(s, t).iter().filter(|m| m.limit >= len) {
                        charged.insert(m.edge);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Fills the tables for `g` (positive integer weights) with charging pool
/// `pool`, using the default cell cap.
pub fn dp_fill(
    g: &WeightedGraph,
    pool: &[EdgeId],
    dist: &DistanceOracle,
    eps: &Rational,
) -> Result<DpTables> {
    dp_fill_with(g, pool, dist, eps, &PruneOptions::default())
}

pub fn dp_fill_with(
    g: &WeightedGraph,
    pool: &[EdgeId],
    dist: &DistanceOracle,
    eps: &Rational,
    opts: &PruneOptions,
) -> Result<DpTables> {
    if !g.has_positive_integer_weights() {
        return Err(Error::NonIntegralWeights(
            "the pruning tables are indexed by integer walk length".into(),
        ));
    }
    let sg = ScaledGraph::with_scale(g, &Rational::from_integer(BigInt::from(1)))?;
    fill(&sg, pool, dist, eps, opts)
}

pub(crate) fn fill(
    sg: &ScaledGraph,
    pool: &[EdgeId],
    dist: &DistanceOracle,
    eps: &Rational,
    opts: &PruneOptions,
) -> Result<DpTables> {
    let n = sg.n();
    let required = n as u128 * sg.max_weight() as u128;
    if required > opts.cell_cap as u128 {
        return Err(Error::CellCapExceeded {
            required,
            cap: opts.cell_cap,
        });
    }
    let (p, q) = split_u64(eps)?;
    let b = compute_b_scaled(sg, pool, dist, eps)?;

    let mut lo = vec![0u64; n * n];
    let mut hi = vec![0u64; n * n];
    let mut cells: Vec<Vec<Option<DpEntry>>> = vec![Vec::new(); n * n];
    let mut max_len = 0;
    for s in 0..n {
        for t in 0..n {
            let k = s * n + t;
            let d = dist.int_dist(s, t);
            if d == INF {
                lo[k] = 1;
                hi[k] = 0;
                continue;
            }
            let top = ((q as u128 + p as u128) * d as u128 / q as u128) as u64;
            lo[k] = d;
            hi[k] = top;
            cells[k] = vec![None; (top - d + 1) as usize];
            max_len = max_len.max(top);
        }
        let k = s * n + s;
        cells[k][0] = Some(DpEntry {
            value: 0,
            back: Back::Base,
        });
    }

    let overflow = || Error::Overflow("table value exceeds 64 bits".into());
    for len in 1..=max_len {
        let gate = floor_pow2(len)?;
        for s in 0..n {
            for t in 0..n {
                let k = s * n + t;
                if s == t || len < lo[k] || len > hi[k] {
                    continue;
                }
                let b_len = b.weight_at(s, t, len);
                let mut best = (len == lo[k]).then(|| DpEntry {
                    value: b.weight(s, t),
                    back: Back::Base,
                });
                for z in 0..n {
                    if z == s || z == t {
                        continue;
                    }
                    let (k1, k2) = (s * n + z, z * n + t);
                    if lo[k1] > hi[k1] || lo[k2] > hi[k2] || lo[k2] >= len {
                        continue;
                    }
                    let from = lo[k1].max(len.saturating_sub(hi[k2])).max(1);
                    let to = hi[k1].min(len - lo[k2]).min(len - 1);
                    for left in from..=to {
                        let (Some(a), Some(c)) = (
                            &cells[k1][(left - lo[k1]) as usize],
                            &cells[k2][(len - left - lo[k2]) as usize],
                        ) else {
                            continue;
                        };
                        let include_b = left.max(len - left) < gate;
                        let value = a
                            .value
                            .checked_add(c.value)
                            .and_then(|v| v.checked_add(if include_b { b_len } else { 0 }))
                            .ok_or_else(overflow)?;
                        if best.is_none_or(|e| value > e.value) {
                            best = Some(DpEntry {
                                value,
                                back: Back::Split { z, left, include_b },
                            });
                        }
                    }
                }
                // Longer walks must charge at least what the shortest path does.
                if len > lo[k] && best.is_some_and(|e| e.value < b.weight(s, t)) {
                    best = None;
                }
                cells[k][(len - lo[k]) as usize] = best;
            }
        }
    }
    Ok(DpTables {
        n,
        dist: dist.clone(),
        b,
        lo,
        cells,
    })
}

/// The realizable triple with `L ≥ 1` maximizing `DP / L`; ties go to the
/// larger value, then the smaller `(s, t, L)`. `None` when every value is 0.
pub fn select_best_triple(tables: &DpTables) -> Option<BestTriple> {
    let mut best: Option<(usize, usize, u64, u64)> = None;
    for (s, t, len, e) in tables.realizable() {
        if e.value == 0 || len == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, _, bl, bv)) => {
                let (lhs, rhs) = (e.value as u128 * bl as u128, bv as u128 * len as u128);
                lhs > rhs || (lhs == rhs && e.value > bv)
            }
        };
        if better {
            best = Some((s, t, len, e.value));
        }
    }
    best.map(|(s, t, len, value)| BestTriple {
        s,
        t,
        len,
        value,
        beta: Rational::new(BigInt::from(value), BigInt::from(len)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::apsp;
    use crate::rational::{int, ratio};

    /// Ladder with rungs `(i, n+1+i)` of weight 8 and spokes of weight 1
    /// (ε = 1/4 scaled by 8), without the base rung in the pool.
    fn scaled_ladder(n: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for i in 0..=n {
            edges.push((i, n + 1 + i, int(8)));
        }
        for j in 1..=n {
            edges.push((0, j, int(1)));
            edges.push((n + 1, n + 1 + j, int(1)));
        }
        WeightedGraph::new(2 * n + 2, edges, true).unwrap()
    }

    #[test]
    fn ladder_best_triple_is_the_base_rung() {
        let g = scaled_ladder(4);
        let d = apsp(&g);
        let pool: Vec<EdgeId> = (1..g.m()).collect();
        let eps = ratio(1, 4);
        let tables = dp_fill(&g, &pool, &d, &eps).unwrap();
        let best = select_best_triple(&tables).unwrap();
        assert_eq!((best.s, best.t, best.len), (0, 5, 8));
        assert_eq!(best.beta, int(4));
        let (walk, charged) = tables.reconstruct(0, 5, 8).unwrap();
        assert_eq!(walk.vertices(), &[0, 5]);
        let support: Vec<_> = charged.support().collect();
        assert_eq!(support, (1..=4).collect::<Vec<_>>());
        assert!(charged.iter().all(|(_, k)| k == 1));
    }

    #[test]
    fn empty_pool_has_no_triple() {
        let g = scaled_ladder(2);
        let d = apsp(&g);
        let tables = dp_fill(&g, &[], &d, &ratio(1, 4)).unwrap();
        assert!(select_best_triple(&tables).is_none());
    }

    #[test]
    fn self_hang_gives_ratio_one() {
        let g = WeightedGraph::new(2, [(0, 1, int(5))], true).unwrap();
        let d = apsp(&g);
        let tables = dp_fill(&g, &[0], &d, &ratio(1, 100)).unwrap();
        let best = select_best_triple(&tables).unwrap();
        assert_eq!(best.beta, int(1));
    }

    #[test]
    fn rejects_fractional_weights_and_cap() {
        let g = WeightedGraph::new(2, [(0, 1, ratio(1, 2))], true).unwrap();
        let d = apsp(&g);
        assert!(matches!(
            dp_fill(&g, &[0], &d, &ratio(1, 4)),
            Err(Error::NonIntegralWeights(_))
        ));
        let g = WeightedGraph::new(2, [(0, 1, int(100))], true).unwrap();
        let d = apsp(&g);
        let opts = PruneOptions { cell_cap: 10 };
        assert!(matches!(
            dp_fill_with(&g, &[0], &d, &ratio(1, 4), &opts),
            Err(Error::CellCapExceeded { required: 200, cap: 10 })
        ));
    }

    #[test]
    fn unrealizable_entries_are_refused() {
        let g = scaled_ladder(2);
        let d = apsp(&g);
        let tables = dp_fill(&g, &[], &d, &ratio(1, 4)).unwrap();
        assert!(matches!(
            tables.reconstruct(0, 1, 2),
            Err(Error::Unrealizable { .. })
        ));
    }
}
