#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spanner_core::graph::UnionFind;
use spanner_core::rational::int;
use spanner_core::WeightedGraph;

/// Triangulated `rows × cols` grid edges (one random diagonal per cell).
fn grid_edges(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
            if r + 1 < rows && c + 1 < cols {
                if rng.gen_bool(0.5) {
                    edges.push((id(r, c), id(r + 1, c + 1)));
                } else {
                    edges.push((id(r, c + 1), id(r + 1, c)));
                }
            }
        }
    }
    edges
}

/// A random connected planar graph: a subgraph of a triangulated grid with
/// at most `max_n` vertices and `max_m` edges, integer weights in `1..=max_w`.
pub fn random_planar(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, max_w: i64) -> WeightedGraph {
    let shapes: Vec<(usize, usize)> = (1..=max_n)
        .flat_map(|r| (1..=max_n).map(move |c| (r, c)))
        .filter(|&(r, c)| r * c <= max_n && r * c >= 3)
        .collect();
    let &(rows, cols) = shapes.choose(rng).expect("max_n >= 3");
    let n = rows * cols;
    let mut edges = grid_edges(rows, cols, rng);
    edges.shuffle(rng);
    let mut uf = UnionFind::new(n);
    let (mut tree, mut extra) = (Vec::new(), Vec::new());
    for e in edges {
        if uf.union(e.0, e.1) {
            tree.push(e);
        } else {
            extra.push(e);
        }
    }
    let budget = max_m.saturating_sub(tree.len());
    let keep = rng.gen_range(0..=budget.min(extra.len()));
    tree.extend(extra.into_iter().take(keep));
    let weighted: Vec<_> = tree
        .into_iter()
        .map(|(u, v)| (u, v, int(rng.gen_range(1..=max_w))))
        .collect();
    WeightedGraph::new(n, weighted, true).expect("grid subgraphs are valid planar graphs")
}

/// A random connected graph on `n` vertices (not necessarily planar) with
/// rational weights `p/q`, `p in 1..=20`, `q in 1..=4`.
pub fn random_rational(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> WeightedGraph {
    use spanner_core::rational::ratio;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        seen.insert((u, v));
        edges.push((u, v));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (u, v) = (a.min(b), a.max(b));
        if u != v && seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    let weighted: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| (u, v, ratio(rng.gen_range(1..=20), rng.gen_range(1..=4))))
        .collect();
    WeightedGraph::new(n, weighted, false).unwrap()
}
