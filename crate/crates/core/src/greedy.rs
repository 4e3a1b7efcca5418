//! Greedy t-spanner baseline.

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::paths::{ScaledGraph, StretchBound};
use crate::rational::{to_pq, Rational};

/// Greedy t-spanner: scan edges by `(weight, u, v)` ascending and keep an
/// edge iff the spanner built so far has `dist_H(u, v) > t·w(u, v)`.
pub fn greedy_spanner(g: &WeightedGraph, t: &Rational) -> Result<WeightedGraph> {
    Ok(g.subgraph(greedy_edge_ids(g, t)?))
}

pub fn greedy_edge_ids(g: &WeightedGraph, t: &Rational) -> Result<Vec<EdgeId>> {
    if *t <= Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "stretch t = {} must exceed 1",
            to_pq(t)
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let sg = ScaledGraph::new(g)?;
    let bound = StretchBound::new(t)?;
    Ok(greedy_on_scaled(&sg, &bound))
}

pub(crate) fn greedy_on_scaled(sg: &ScaledGraph, bound: &StretchBound) -> Vec<EdgeId> {
    let mut order: Vec<EdgeId> = (0..sg.m()).collect();
    order.sort_by_key(|&id| {
        let (u, v, w) = sg.edge(id);
        (w, u, v)
    });
    let mut mask = vec![false; sg.m()];
    for id in order {
        let (u, v, w) = sg.edge(id);
        if sg
            .bounded_distance(u, v, bound.limit(w), Some(&mask))
            .is_none()
        {
            mask[id] = true;
        }
    }
    (0..sg.m()).filter(|&id| mask[id]).collect()
}
