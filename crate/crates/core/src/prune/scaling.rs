//! Pruning for large weight ranges: contract the light components, round the
//! remaining weights down to a polynomial range, prune there, and keep every
//! light edge.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::driver::{iterate_prune_with, Host, IterateOutput};
use super::PruneOptions;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, UnionFind, WeightedGraph};
use crate::paths::{stretch, Stretch};
use crate::rational::{int, split_u64, to_pq, Rational};

/// The pruning run on the contracted, rounded graph.
#[derive(Clone, Debug)]
pub struct ContractedRun {
    pub graph: WeightedGraph,
    /// Host edge standing in for each contracted edge.
    pub representatives: Vec<EdgeId>,
    /// The parameter used inside, `2ε`.
    pub eps: Rational,
    pub inner: IterateOutput,
    /// Stretch of the inner result with respect to the contracted graph.
    pub inner_stretch: Stretch,
    /// Host edges of weight at most `W / n`.
    pub light: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct ScalingOutput {
    pub spanner: WeightedGraph,
    /// `None` when the weights were small enough to prune directly.
    pub contracted: Option<ContractedRun>,
}

pub fn prune_with_scaling(g: &WeightedGraph, eps: &Rational) -> Result<ScalingOutput> {
    prune_with_scaling_with(g, eps, &PruneOptions::default())
}

pub fn prune_with_scaling_with(
    g: &WeightedGraph,
    eps: &Rational,
    opts: &PruneOptions,
) -> Result<ScalingOutput> {
    // Validates the host the same way the direct path does.
    drop(Host::new(g, eps, opts)?);
    let n = g.n() as u128;
    let (p, q) = split_u64(eps)?;
    let (p, q) = (p as u128, q as u128);
    let max_w = g
        .max_weight()
        .map(|w| w.to_integer().to_u128().ok_or_else(|| Error::Overflow(to_pq(w))))
        .transpose()?
        .unwrap_or(0);
    if max_w * p < n * n * q {
        return Ok(ScalingOutput {
            spanner: iterate_prune_with(g, eps, opts)?.spanner,
            contracted: None,
        });
    }

    let weight = |id: EdgeId| g.edge(id).w.to_integer().to_u128().expect("checked above");
    let normalized = g.normalize_edges();
    let kept: Vec<EdgeId> = normalized
        .edges()
        .iter()
        .map(|e| g.find_edge(e.u, e.v).expect("normalization keeps host edges"))
        .collect();

    let mut uf = UnionFind::new(g.n());
    for &id in &kept {
        if weight(id) * q * n * n < p * max_w {
            let e = g.edge(id);
            uf.union(e.u, e.v);
        }
    }
    let label = uf.labels();
    let nodes = label.iter().copied().max().map_or(0, |x| x + 1);

    // Lightest rounded edge per component pair; ties keep the lighter host
    // edge, then the smaller id.
    let mut best: BTreeMap<(usize, usize), (u128, u128, EdgeId)> = BTreeMap::new();
    for &id in &kept {
        let e = g.edge(id);
        let (a, b) = (label[e.u], label[e.v]);
        if a == b {
            continue;
        }
        let w = weight(id);
        let rounded = w * n * n * q / (max_w * p);
        let key = (a.min(b), a.max(b));
        let cand = (rounded, w, id);
        if best.get(&key).is_none_or(|cur| cand < *cur) {
            best.insert(key, cand);
        }
    }
    let mut edges = Vec::with_capacity(best.len());
    let mut representatives = Vec::with_capacity(best.len());
    for (&(a, b), &(rounded, _, id)) in &best {
        edges.push((a, b, Rational::from_integer(rounded.into())));
        representatives.push(id);
    }
    let contracted = WeightedGraph::new(nodes, edges, false)?;
    let inner_eps = int(2) * eps;
    let inner = iterate_prune_with(&contracted, &inner_eps, opts)?;
    let inner_stretch = stretch(&contracted, &inner.spanner)?;

    let light: Vec<EdgeId> = (0..g.m()).filter(|&id| weight(id) * n <= max_w).collect();
    let mut out: Vec<EdgeId> = contracted
        .edge_ids_of(&inner.spanner)?
        .into_iter()
        .map(|cid| representatives[cid])
        .chain(light.iter().copied())
        .collect();
    out.sort_unstable();
    out.dedup();
    log::debug!(
        "contracted {} vertices to {}, inner stretch {}",
        g.n(),
        nodes,
        inner_stretch
    );
    Ok(ScalingOutput {
        spanner: g.subgraph(out),
        contracted: Some(ContractedRun {
            graph: contracted,
            representatives,
            eps: inner_eps,
            inner,
            inner_stretch,
            light,
        }),
    })
}

/// `1 + ε₀ + 2ε` where `1 + ε₀` is the inner stretch.
pub fn scaled_stretch_bound(run: &ContractedRun, eps: &Rational) -> Option<Rational> {
    let inner = run.inner_stretch.finite()?;
    Some(inner + int(2) * eps)
}
