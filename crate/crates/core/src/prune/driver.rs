use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::tables::{fill, select_best_triple};
use super::PruneOptions;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::greedy::greedy_spanner;
use crate::paths::{stretch_of_mask, DistanceOracle, ScaledGraph, Stretch};
use crate::rational::{log_star, ratio, to_pq, Rational};

/// One accepted round. Weights are in the graph's (integer) units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundLog {
    pub s: usize,
    pub t: usize,
    pub len: u64,
    pub beta: String,
    pub rho_weight: u64,
    pub multiset_weight: u64,
    pub pruned_weight: u64,
    pub pool_weight_remaining: u64,
}

/// Edges added (`f_new`, any edge of G) and removed (`f_old`, edges of H).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PruneState {
    pub f_new: BTreeSet<EdgeId>,
    pub f_old: BTreeSet<EdgeId>,
    pub rounds: Vec<RoundLog>,
}

impl PruneState {
    /// Edge ids of `F_new ∪ (H \ F_old)`.
    pub fn result_ids(&self, h: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: BTreeSet<EdgeId> = self.f_new.clone();
        out.extend(h.iter().copied().filter(|id| !self.f_old.contains(id)));
        out.into_iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterationLog {
    pub iteration: usize,
    pub weight: String,
    pub stretch: String,
    pub changed: bool,
    pub rounds: Vec<RoundLog>,
}

#[derive(Clone, Debug)]
pub struct IterateOutput {
    pub initial: WeightedGraph,
    pub spanner: WeightedGraph,
    pub iterations: Vec<IterationLog>,
}

/// Shared per-graph data for all rounds on the same host.
pub(crate) struct Host<'a> {
    g: &'a WeightedGraph,
    sg: ScaledGraph,
    dist: DistanceOracle,
    eps: Rational,
    opts: PruneOptions,
}

impl<'a> Host<'a> {
    pub(crate) fn new(g: &'a WeightedGraph, eps: &Rational, opts: &PruneOptions) -> Result<Self> {
        if *eps <= Rational::from_integer(0.into()) {
            return Err(Error::InvalidParameter(format!(
                "eps = {} must be positive",
                to_pq(eps)
            )));
        }
        if *eps > ratio(1, 100) {
            log::warn!(
                "eps = {} exceeds 1/100; the pruning guarantees assume smaller values",
                to_pq(eps)
            );
        }
        if !g.has_positive_integer_weights() {
            return Err(Error::NonIntegralWeights(
                "pruning needs positive integer weights; scale the graph first".into(),
            ));
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let sg = ScaledGraph::with_scale(g, &Rational::from_integer(BigInt::from(1)))?;
        let dist = sg.all_pairs(None);
        Ok(Self {
            g,
            sg,
            dist,
            eps: eps.clone(),
            opts: opts.clone(),
        })
    }

    fn round(&self, h: &[EdgeId], state: &mut PruneState) -> Result<bool> {
        let pool: Vec<EdgeId> = h
            .iter()
            .copied()
            .filter(|id| !state.f_new.contains(id) && !state.f_old.contains(id))
            .collect();
        if pool.is_empty() {
            return Ok(false);
        }
        let tables = fill(&self.sg, &pool, &self.dist, &self.eps, &self.opts)?;
        let Some(best) = select_best_triple(&tables) else {
            return Ok(false);
        };
        if best.beta < Rational::one() {
            return Ok(false);
        }
        let (walk, charged) = tables.reconstruct(best.s, best.t, best.len)?;
        let walk_edges = walk.edge_ids(self.g)?;
        state.f_new.extend(walk_edges.iter().copied());
        let support: Vec<EdgeId> = charged.support().collect();
        state.f_old.extend(support.iter().copied());
        let pruned = self
            .sg
            .weight_of(support.iter().copied().filter(|id| !state.f_new.contains(id)));
        let remaining = self.sg.weight_of(
            pool.iter()
                .copied()
                .filter(|id| !state.f_new.contains(id) && !state.f_old.contains(id)),
        );
        state.rounds.push(RoundLog {
            s: best.s,
            t: best.t,
            len: best.len,
            beta: to_pq(&best.beta),
            rho_weight: best.len,
            multiset_weight: best.value,
            pruned_weight: pruned,
            pool_weight_remaining: remaining,
        });
        log::debug!(
            "round {}: ({}, {}, {}) beta = {}",
            state.rounds.len(),
            best.s,
            best.t,
            best.len,
            to_pq(&best.beta)
        );
        Ok(true)
    }

    /// Runs rounds until none makes progress; returns the edge ids of H₁.
    pub(crate) fn prune_ids(&self, h: &[EdgeId]) -> Result<(Vec<EdgeId>, PruneState)> {
        let mut state = PruneState::default();
        while self.round(h, &mut state)? {}
        Ok((state.result_ids(h), state))
    }

    fn stretch_of(&self, ids: &[EdgeId]) -> Stretch {
        let mut mask = vec![false; self.g.m()];
        for &id in ids {
            mask[id] = true;
        }
        stretch_of_mask(&self.sg, &mask)
    }

    pub(crate) fn iterate(&self, start: Vec<EdgeId>) -> Result<(Vec<EdgeId>, Vec<IterationLog>)> {
        let mut current = start;
        let mut logs = Vec::new();
        for iteration in 1..=iteration_budget(&self.eps) as usize {
            let (next, state) = self.prune_ids(&current)?;
            // A pass that does not lower the weight only trades edges.
            let changed =
                self.g.weight_of(next.iter().copied()) < self.g.weight_of(current.iter().copied());
            if changed {
                current = next;
            }
            logs.push(IterationLog {
                iteration,
                weight: to_pq(&self.g.weight_of(current.iter().copied())),
                stretch: self.stretch_of(&current).to_pq(),
                changed,
                rounds: state.rounds,
            });
            if !changed {
                break;
            }
        }
        Ok((current, logs))
    }
}

/// `⌈log*(1/ε)⌉ + 2`, the number of pruning passes the driver allows.
pub fn iteration_budget(eps: &Rational) -> u32 {
    log_star(&(Rational::one() / eps)) + 2
}

fn host_ids(g: &WeightedGraph, h: &WeightedGraph) -> Result<Vec<EdgeId>> {
    if h.n() != g.n() {
        return Err(Error::NotSubgraph(format!(
            "vertex counts differ: {} vs {}",
            h.n(),
            g.n()
        )));
    }
    g.edge_ids_of(h)
}

/// One round of pruning `h` against `g`; returns whether it made progress.
pub fn prune_round(
    g: &WeightedGraph,
    h: &WeightedGraph,
    state: &mut PruneState,
    eps: &Rational,
) -> Result<bool> {
    let host = Host::new(g, eps, &PruneOptions::default())?;
    let ids = host_ids(g, h)?;
    host.round(&ids, state)
}

/// Prunes `h` until no round makes progress: `H₁ = F_new ∪ (H \ F_old)`.
pub fn prune(
    g: &WeightedGraph,
    h: &WeightedGraph,
    eps: &Rational,
) -> Result<(WeightedGraph, PruneState)> {
    prune_with(g, h, eps, &PruneOptions::default())
}

pub fn prune_with(
    g: &WeightedGraph,
    h: &WeightedGraph,
    eps: &Rational,
    opts: &PruneOptions,
) -> Result<(WeightedGraph, PruneState)> {
    let host = Host::new(g, eps, opts)?;
    let ids = host_ids(g, h)?;
    let (out, state) = host.prune_ids(&ids)?;
    Ok((g.subgraph(out), state))
}

/// Greedy `(1+ε)`-spanner followed by repeated pruning passes.
pub fn iterate_prune(g: &WeightedGraph, eps: &Rational) -> Result<IterateOutput> {
    iterate_prune_with(g, eps, &PruneOptions::default())
}

pub fn iterate_prune_with(
    g: &WeightedGraph,
    eps: &Rational,
    opts: &PruneOptions,
) -> Result<IterateOutput> {
    let host = Host::new(g, eps, opts)?;
    let initial = greedy_spanner(g, &(Rational::one() + eps))?;
    run_from(&host, initial)
}

/// Repeated pruning passes starting from the given spanner.
pub fn iterate_prune_from(
    g: &WeightedGraph,
    h: &WeightedGraph,
    eps: &Rational,
) -> Result<IterateOutput> {
    iterate_prune_from_with(g, h, eps, &PruneOptions::default())
}

pub fn iterate_prune_from_with(
    g: &WeightedGraph,
    h: &WeightedGraph,
    eps: &Rational,
    opts: &PruneOptions,
) -> Result<IterateOutput> {
    let host = Host::new(g, eps, opts)?;
    host_ids(g, h)?;
    run_from(&host, h.clone())
}

fn run_from(host: &Host<'_>, initial: WeightedGraph) -> Result<IterateOutput> {
    let ids = host.g.edge_ids_of(&initial)?;
    let (out, iterations) = host.iterate(ids)?;
    Ok(IterateOutput {
        initial,
        spanner: host.g.subgraph(out),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::stretch;
    use crate::rational::int;

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
    fn ladder_prunes_to_optimum() {
        let g = scaled_ladder(6);
        let eps = ratio(1, 4);
        let h = g.subgraph(1..g.m());
        let (h1, state) = prune(&g, &h, &eps).unwrap();
        assert_eq!(h1.total_weight(), int(20));
        assert!(stretch(&g, &h1).unwrap().within(&ratio(5, 4)));
        assert!(state.f_new.contains(&0));
        assert!((1..=6).all(|i| state.f_old.contains(&i)));
    }

    #[test]
    fn first_round_swaps_rungs_for_the_base() {
        let g = scaled_ladder(3);
        let eps = ratio(1, 4);
        let h = g.subgraph(1..g.m());
        let mut state = PruneState::default();
        assert!(prune_round(&g, &h, &mut state, &eps).unwrap());
        assert_eq!(state.f_new.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert!((1..=3).all(|i| state.f_old.contains(&i)));
        let log = &state.rounds[0];
        assert_eq!(log.beta, "3/1");
        assert!(log.pruned_weight <= log.multiset_weight);
    }

    #[test]
    fn optimal_spanner_keeps_its_weight() {
        // Only ratio-one rounds exist; they may swap rungs but never add weight.
        let g = scaled_ladder(3);
        let eps = ratio(1, 4);
        let ids: Vec<_> = std::iter::once(0).chain(4..g.m()).collect();
        let h = g.subgraph(ids);
        let (h1, state) = prune(&g, &h, &eps).unwrap();
        assert!(state.rounds.iter().all(|r| r.beta == "1/1"));
        assert_eq!(h1.total_weight(), h.total_weight());
        assert!(stretch(&g, &h1).unwrap().within(&(int(1) + int(11) * &eps)));
        let out = iterate_prune_from(&g, &h, &eps).unwrap();
        assert_eq!(out.spanner, h);
        assert_eq!(out.iterations.len(), 1);
        assert!(!out.iterations[0].changed);
    }

    #[test]
    fn single_edge_and_tree() {
        let g = WeightedGraph::new(2, [(0, 1, int(3))], true).unwrap();
        let (h1, _) = prune(&g, &g, &ratio(1, 100)).unwrap();
        assert_eq!(h1, g);
        let tree = WeightedGraph::new(4, [(0, 1, int(2)), (1, 2, int(5)), (1, 3, int(1))], true)
            .unwrap();
        assert_eq!(iterate_prune(&tree, &ratio(1, 64)).unwrap().spanner, tree);
    }

    #[test]
    fn rejects_bad_hosts() {
        let split = WeightedGraph::new(3, [(0, 1, int(1))], true).unwrap();
        assert!(matches!(
            prune(&split, &split, &ratio(1, 100)),
            Err(Error::Disconnected)
        ));
        let frac = WeightedGraph::new(2, [(0, 1, ratio(1, 2))], true).unwrap();
        assert!(prune(&frac, &frac, &ratio(1, 100)).is_err());
    }

    #[test]
    fn budget_follows_iterated_log() {
        assert_eq!(iteration_budget(&ratio(1, 4)), log_star(&int(4)) + 2);
    }
}
