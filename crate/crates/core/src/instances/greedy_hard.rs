use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::rational::{int, ratio, to_pq, Rational};

/// The instance on which the greedy `(1+xε)`-spanner is heavy.
#[derive(Clone, Debug)]
pub struct GreedyHard {
    pub graph: WeightedGraph,
    /// Number of `(x_i, y_i)` pairs.
    pub n: usize,
    /// The light `(1+ε)`-spanner: the path through `w` plus `(x_n, y_1)`.
    pub witness: Vec<EdgeId>,
}

impl GreedyHard {
    pub fn witness_spanner(&self) -> WeightedGraph {
        self.graph.subgraph(self.witness.iter().copied())
    }
}

/// `x_i = i - 1`, `w = n`, `y_i = n + i`. Edges: the rungs `(x_i, y_i)` of
/// weight 1, the path `x_1 … x_n w y_1 … y_n` with `xε` steps, the chord
/// `(x_n, y_1)`, and the two edges through `w`.
pub fn gen_greedy_hard(eps: &Rational, x: &Rational) -> Result<GreedyHard> {
    if *eps <= Rational::zero() || *eps >= ratio(1, 4) {
        return Err(Error::InvalidParameter(format!(
            "eps = {} must lie in (0, 1/4)",
            to_pq(eps)
        )));
    }
    if *x < Rational::one() || int(4) * x * x * eps > Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "x = {} must satisfy 1 <= x <= sqrt(1/eps)/2",
            to_pq(x)
        )));
    }
    let raw = Rational::one() / x + (Rational::one() / eps) / (int(2) * x * x);
    let ceil = raw.numer().div_ceil(raw.denom());
    let n: usize = (ceil + 1u32)
        .try_into()
        .map_err(|_| Error::Overflow("instance size".into()))?;

    let step = x * eps;
    let chord = Rational::one() + eps - int(n as i64 - 1) * &step;
    let half = ratio(1, 2) * (Rational::one() + &step) * &chord;
    let (xv, w, yv) = (|i: usize| i - 1, n, |i: usize| n + i);

    let mut edges = Vec::new();
    for i in 1..=n {
        edges.push((xv(i), yv(i), Rational::one()));
    }
    let mut witness = Vec::new();
    for i in 1..n {
        witness.push(edges.len());
        edges.push((xv(i), xv(i + 1), step.clone()));
        witness.push(edges.len());
        edges.push((yv(i), yv(i + 1), step.clone()));
    }
    witness.push(edges.len());
    edges.push((xv(n), w, half.clone()));
    witness.push(edges.len());
    edges.push((w, yv(1), half));
    witness.push(edges.len());
    edges.push((xv(n), yv(1), chord));
    witness.sort_unstable();
    let graph = WeightedGraph::new(2 * n + 1, edges, true)?;
    Ok(GreedyHard { graph, n, witness })
}
