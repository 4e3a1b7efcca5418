//! Weighted undirected graphs with exact rational weights.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, to_pq, Rational};

pub type EdgeId = usize;

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Rational,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Vertex count plus edge list. Both the host graph `G` and every spanner
/// `H ⊆ G` use this type; subgraphs keep the host's vertex set.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    declared_planar: bool,
    index: HashMap<(usize, usize), EdgeId>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.declared_planar == other.declared_planar
            && self.edges == other.edges
    }
}

impl Eq for WeightedGraph {}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl WeightedGraph {
    /// Validates and builds a graph. Rejects self loops, out-of-range
    /// endpoints, repeated vertex pairs and negative weights. When
    /// `declared_planar` is set the Euler bound `m <= 3n - 6` (n >= 3) is checked.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, Rational)>,
        declared_planar: bool,
    ) -> Result<Self> {
        let mut out = Vec::new();
        let mut index = HashMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self loop at vertex {u}")));
            }
            if w.is_negative() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has negative weight {}",
                    to_pq(&w)
                )));
            }
            let k = key(u, v);
            if index.insert(k, out.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", k.0, k.1)));
            }
            out.push(Edge { u: k.0, v: k.1, w });
        }
        if declared_planar && n >= 3 && out.len() > 3 * n - 6 {
            return Err(Error::InvalidGraph(format!(
                "declared planar but m = {} exceeds 3n - 6 = {}",
                out.len(),
                3 * n - 6
            )));
        }
        Ok(Self {
            n,
            edges: out,
            declared_planar,
            index,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            declared_planar: true,
            index: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn declared_planar(&self) -> bool {
        self.declared_planar
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.iter().map(|e| &e.w).sum()
    }

    pub fn weight_of(&self, ids: impl IntoIterator<Item = EdgeId>) -> Rational {
        ids.into_iter().map(|id| &self.edges[id].w).sum()
    }

    pub fn max_weight(&self) -> Option<&Rational> {
        self.edges.iter().map(|e| &e.w).max()
    }

    /// The subgraph on the same vertex set made of the given edges, in host order.
    pub fn subgraph(&self, ids: impl IntoIterator<Item = EdgeId>) -> WeightedGraph {
        let ids: BTreeSet<EdgeId> = ids.into_iter().collect();
        let mut index = HashMap::with_capacity(ids.len());
        let mut edges = Vec::with_capacity(ids.len());
        for id in ids {
            let e = self.edges[id].clone();
            index.insert((e.u, e.v), edges.len());
            edges.push(e);
        }
        WeightedGraph {
            n: self.n,
            edges,
            declared_planar: self.declared_planar,
            index,
        }
    }

    /// Maps every edge of `h` to its id in `self`. Fails unless `h` has the
    /// same vertex count and each of its edges exists here with equal weight.
    pub fn edge_ids_of(&self, h: &WeightedGraph) -> Result<Vec<EdgeId>> {
        if h.n != self.n {
            return Err(Error::NotSubgraph(format!(
                "vertex counts differ ({} vs {})",
                h.n, self.n
            )));
        }
        let mut ids = Vec::with_capacity(h.m());
        for e in &h.edges {
            let id = self.find_edge(e.u, e.v).ok_or_else(|| {
                Error::NotSubgraph(format!("edge ({}, {}) is not in the host graph", e.u, e.v))
            })?;
            if self.edges[id].w != e.w {
                return Err(Error::NotSubgraph(format!(
                    "edge ({}, {}) has weight {} but the host has {}",
                    e.u,
                    e.v,
                    to_pq(&e.w),
                    to_pq(&self.edges[id].w)
                )));
            }
            ids.push(id);
        }
        ids.sort_unstable();
        Ok(ids)
    }

    /// Same topology, new weights (one per edge, in order).
    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<WeightedGraph> {
        if weights.len() != self.m() {
            return Err(Error::InvalidParameter(format!(
                "expected {} weights, got {}",
                self.m(),
                weights.len()
            )));
        }
        WeightedGraph::new(
            self.n,
            self.edges.iter().zip(weights).map(|(e, w)| (e.u, e.v, w)),
            self.declared_planar,
        )
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        adj
    }

    /// Connected component label per vertex, labels assigned in order of the
    /// smallest vertex of each component.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().iter().all(|&c| c == 0)
    }

    pub fn has_positive_integer_weights(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.w.is_integer() && e.w > Rational::zero())
    }

    /// Multiplies every weight by the LCM of the denominators, returning the
    /// integral graph and the factor used.
    pub fn scale_to_integers(&self) -> (WeightedGraph, Rational) {
        let lcm = lcm_of_denominators(self.edges.iter().map(|e| &e.w));
        let scale = Rational::from_integer(lcm);
        let scaled = WeightedGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    u: e.u,
                    v: e.v,
                    w: &e.w * &scale,
                })
                .collect(),
            declared_planar: self.declared_planar,
            index: self.index.clone(),
        };
        (scaled, scale)
    }

    /// Removes every edge heavier than the distance between its endpoints.
    /// Afterwards each remaining edge is a shortest path; distances are unchanged.
    pub fn normalize_edges(&self) -> WeightedGraph {
        let dist = crate::paths::apsp(self);
        let keep = self.edges.iter().enumerate().filter_map(|(id, e)| {
            let d = dist
                .dist(e.u, e.v)
                .expect("an edge's endpoints are connected");
            (e.w <= d).then_some(id)
        });
        self.subgraph(keep.collect::<Vec<_>>())
    }
}

/// Path-compressed union-find.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut label_of_root = HashMap::new();
        (0..n)
            .map(|v| {
                let r = self.find(v);
                let next = label_of_root.len();
                *label_of_root.entry(r).or_insert(next)
            })
            .collect()
    }
}
