use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rational::{int, to_pq, Rational};

fn check_eps(eps: &Rational) -> Result<()> {
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "eps = {} must lie in (0, 1)",
            to_pq(eps)
        )));
    }
    Ok(())
}

/// Rung weights of a ladder block. With `perturb`, rung `i ≥ 1` gets
/// `1 + iδ` and the base rung `1 + (n+1)δ`, so the base is scanned last.
fn rung_weights(n: usize, eps: &Rational, perturb: bool) -> Vec<Rational> {
    if !perturb {
        return vec![Rational::one(); n + 1];
    }
    let n_i = n as i64;
    let delta = eps / int(8 * n_i * n_i * (n_i + 2));
    (0..=n_i)
        .map(|i| {
            let k = if i == 0 { n_i + 1 } else { i };
            Rational::one() + &delta * int(k)
        })
        .collect()
}

/// Pushes one ladder block with `u_i = offset + i`, `v_i = offset + n + 1 + i`:
/// rungs first, then the spoke pairs `(u_0, u_j)`, `(v_0, v_j)`.
fn push_block(
    edges: &mut Vec<(usize, usize, Rational)>,
    offset: usize,
    n: usize,
    eps: &Rational,
    perturb: bool,
) {
    for (i, w) in rung_weights(n, eps, perturb).into_iter().enumerate() {
        edges.push((offset + i, offset + n + 1 + i, w));
    }
    let spoke = eps / int(2);
    for j in 1..=n {
        edges.push((offset, offset + j, spoke.clone()));
        edges.push((offset + n + 1, offset + n + 1 + j, spoke.clone()));
    }
}

/// The ladder: rungs `(u_i, v_i)` of weight 1 and spokes `(u_0, u_j)`,
/// `(v_0, v_j)` of weight `ε/2`, with `u_i = i` and `v_i = n + 1 + i`.
pub fn gen_ladder(n: usize, eps: &Rational, perturb: bool) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("ladder needs n >= 1".into()));
    }
    check_eps(eps)?;
    let mut edges = Vec::with_capacity(3 * n + 1);
    push_block(&mut edges, 0, n, eps, perturb);
    WeightedGraph::new(2 * n + 2, edges, true)
}

/// `k` ladder blocks hanging on a path `s → (u_0, v_0) → … → t` whose
/// connecting edges have weight 1. Vertex `s` is 0, block `b` starts at
/// `1 + b(2n+2)`, and `t` is last.
pub fn gen_multiladder(k: usize, n: usize, eps: &Rational, perturb: bool) -> Result<WeightedGraph> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("multiladder needs k, n >= 1".into()));
    }
    check_eps(eps)?;
    let block = 2 * n + 2;
    let t = 1 + k * block;
    let mut edges = Vec::new();
    for b in 0..k {
        push_block(&mut edges, 1 + b * block, n, eps, perturb);
    }
    let mut prev = 0;
    for b in 0..k {
        let off = 1 + b * block;
        edges.push((prev, off, Rational::one()));
        prev = off + n + 1;
    }
    edges.push((prev, t, Rational::one()));
    WeightedGraph::new(t + 1, edges, true)
}
