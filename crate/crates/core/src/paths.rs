//! Shortest paths, walks, edge multisets and stretch.
//!
//! Rational weights are scaled by the LCM of their denominators once, and all
//! path computations run on the resulting machine integers. Results are
//! converted back to exact rationals at the API boundary.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::rational::{lcm_of_denominators, split_u64, to_pq, Rational};

pub const INF: u64 = u64::MAX;

/// Integer view of a [`WeightedGraph`]: weight × scale, same edge ids.
#[derive(Clone, Debug)]
pub struct ScaledGraph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    adj: Vec<Vec<(usize, u64, EdgeId)>>,
    scale: Rational,
}

impl ScaledGraph {
    /// Scales by the LCM of the denominators.
    pub fn new(g: &WeightedGraph) -> Result<Self> {
        let lcm = lcm_of_denominators(g.edges().iter().map(|e| &e.w));
        Self::with_scale(g, &Rational::from_integer(lcm))
    }

    pub fn with_scale(g: &WeightedGraph, scale: &Rational) -> Result<Self> {
        let mut edges = Vec::with_capacity(g.m());
        let mut total: u128 = 0;
        for e in g.edges() {
            let w = &e.w * scale;
            if !w.is_integer() {
                return Err(Error::NonIntegralWeights(format!(
                    "weight {} is not integral after scaling by {}",
                    to_pq(&e.w),
                    to_pq(scale)
                )));
            }
            let w = w
                .numer()
                .to_u64()
                .ok_or_else(|| Error::Overflow(format!("scaled weight of ({}, {})", e.u, e.v)))?;
            total += w as u128;
            edges.push((e.u, e.v, w));
        }
        // Path sums and the u128 products in stretch tests need headroom.
        if total >= 1u128 << 62 {
            return Err(Error::Overflow("total scaled weight exceeds 2^62".into()));
        }
        let mut adj = vec![Vec::new(); g.n()];
        for (id, &(u, v, w)) in edges.iter().enumerate() {
            adj[u].push((v, w, id));
            adj[v].push((u, w, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self {
            n: g.n(),
            edges,
            adj,
            scale: scale.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn edge(&self, id: EdgeId) -> (usize, usize, u64) {
        self.edges[id]
    }

    pub fn weight(&self, id: EdgeId) -> u64 {
        self.edges[id].2
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }

    /// Neighbours of `v` sorted by vertex index.
    pub fn neighbours(&self, v: usize) -> &[(usize, u64, EdgeId)] {
        &self.adj[v]
    }

    pub fn unscale(&self, w: u64) -> Rational {
        Rational::from_integer(BigInt::from(w)) / &self.scale
    }

    pub fn weight_of(&self, ids: impl IntoIterator<Item = EdgeId>) -> u64 {
        ids.into_iter().map(|id| self.edges[id].2).sum()
    }

    /// Single-source distances and minimum hop counts among shortest paths,
    /// restricted to edges with `mask[id] == true` when a mask is given.
    pub fn dijkstra(&self, src: usize, mask: Option<&[bool]>) -> (Vec<u64>, Vec<u32>) {
        let mut dist = vec![INF; self.n];
        let mut hops = vec![u32::MAX; self.n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        hops[src] = 0;
        heap.push(Reverse((0u64, 0u32, src)));
        while let Some(Reverse((d, h, v))) = heap.pop() {
            if (d, h) > (dist[v], hops[v]) {
                continue;
            }
            for &(x, w, id) in &self.adj[v] {
                if mask.is_some_and(|m| !m[id]) {
                    continue;
                }
                let cand = (d + w, h + 1);
                if cand < (dist[x], hops[x]) {
                    dist[x] = cand.0;
                    hops[x] = cand.1;
                    heap.push(Reverse((cand.0, cand.1, x)));
                }
            }
        }
        (dist, hops)
    }

    /// Distance from `s` to `t`, giving up once every remaining candidate
    /// exceeds `limit` (then returns `None`).
    pub fn bounded_distance(
        &self,
        s: usize,
        t: usize,
        limit: u64,
        mask: Option<&[bool]>,
    ) -> Option<u64> {
        let mut dist = vec![INF; self.n];
        let mut heap = BinaryHeap::new();
        dist[s] = 0;
        heap.push(Reverse((0u64, s)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > limit {
                return None;
            }
            if v == t {
                return Some(d);
            }
            if d > dist[v] {
                continue;
            }
            for &(x, w, id) in &self.adj[v] {
                if mask.is_some_and(|m| !m[id]) {
                    continue;
                }
                let nd = d + w;
                if nd < dist[x] && nd <= limit {
                    dist[x] = nd;
                    heap.push(Reverse((nd, x)));
                }
            }
        }
        None
    }

    pub fn all_pairs(&self, mask: Option<&[bool]>) -> DistanceOracle {
        let n = self.n;
        let mut d = Vec::with_capacity(n * n);
        let mut hops = Vec::with_capacity(n * n);
        for s in 0..n {
            let (ds, hs) = self.dijkstra(s, mask);
            d.extend(ds);
            hops.extend(hs);
        }
        let mut next = vec![u32::MAX; n * n];
        for s in 0..n {
            for t in 0..n {
                let dst = d[s * n + t];
                if s == t || dst == INF {
                    continue;
                }
                // First hop of the lexicographically smallest shortest path.
                // Zero-weight hops must strictly reduce the hop count so the
                // reconstruction cannot cycle.
                let hst = hops[s * n + t];
                next[s * n + t] = self.adj[s]
                    .iter()
                    .filter(|&&(_, _, id)| mask.is_none_or(|m| m[id]))
                    .find(|&&(v, w, _)| {
                        let dv = d[v * n + t];
                        dv != INF && w + dv == dst && (w > 0 || hops[v * n + t] < hst)
                    })
                    .map(|&(v, _, _)| v as u32)
                    .expect("a shortest path has a first hop");
            }
        }
        DistanceOracle {
            n,
            scale: self.scale.clone(),
            d,
            hops,
            next,
        }
    }

    /// Vertex-connectivity of the masked subgraph.
    pub fn is_connected(&self, mask: Option<&[bool]>) -> bool {
        if self.n <= 1 {
            return true;
        }
        let (d, _) = self.dijkstra(0, mask);
        d.iter().all(|&x| x != INF)
    }
}

/// Exact all-pairs distances with canonical shortest paths.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    n: usize,
    scale: Rational,
    d: Vec<u64>,
    hops: Vec<u32>,
    next: Vec<u32>,
}

impl DistanceOracle {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `None` when `u` and `v` are disconnected.
    pub fn dist(&self, u: usize, v: usize) -> Option<Rational> {
        let d = self.d[u * self.n + v];
        (d != INF).then(|| Rational::from_integer(BigInt::from(d)) / &self.scale)
    }

    /// Distance in scaled integer units; [`INF`] when disconnected.
    pub fn int_dist(&self, u: usize, v: usize) -> u64 {
        self.d[u * self.n + v]
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn hops(&self, u: usize, v: usize) -> u32 {
        self.hops[u * self.n + v]
    }

    /// The canonical shortest path: among minimum-weight paths, the
    /// lexicographically smallest vertex sequence.
    pub fn path(&self, s: usize, t: usize) -> Option<Walk> {
        if self.d[s * self.n + t] == INF {
            return None;
        }
        let mut vertices = vec![s];
        let mut cur = s;
        while cur != t {
            cur = self.next[cur * self.n + t] as usize;
            vertices.push(cur);
        }
        Some(Walk(vertices))
    }
}

/// All-pairs shortest paths of `g`.
pub fn apsp(g: &WeightedGraph) -> DistanceOracle {
    ScaledGraph::new(g)
        .expect("graph weights fit in machine integers after scaling")
        .all_pairs(None)
}

/// A possibly non-simple vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk(Vec<usize>);

impl Walk {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidWalk("a walk has at least one vertex".into()));
        }
        Ok(Walk(vertices))
    }

    pub fn single(v: usize) -> Self {
        Walk(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("walks are nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ∘ other`; the shared endpoint appears once.
    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if self.last() != other.first() {
            return Err(Error::InvalidWalk(format!(
                "cannot join a walk ending at {} with one starting at {}",
                self.last(),
                other.first()
            )));
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Ok(Walk(v))
    }

    /// Host edge ids along the walk, one per step.
    pub fn edge_ids(&self, g: &WeightedGraph) -> Result<Vec<EdgeId>> {
        self.0
            .windows(2)
            .map(|p| {
                g.find_edge(p[0], p[1]).ok_or_else(|| {
                    Error::InvalidWalk(format!("({}, {}) is not an edge", p[0], p[1]))
                })
            })
            .collect()
    }

    pub fn weight(&self, g: &WeightedGraph) -> Result<Rational> {
        Ok(g.weight_of(self.edge_ids(g)?))
    }

    /// Prefix sums of scaled weights: `out[i]` is the weight of `v_0..v_i`.
    pub fn prefix_weights(&self, g: &ScaledGraph, host: &WeightedGraph) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(self.0.len());
        out.push(0);
        for id in self.edge_ids(host)? {
            out.push(out.last().unwrap() + g.weight(id));
        }
        Ok(out)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "⟩")
    }
}

/// Edge ids with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeMultiset(BTreeMap<EdgeId, u32>);

impl EdgeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: EdgeId) {
        *self.0.entry(id).or_insert(0) += 1;
    }

    pub fn multiplicity(&self, id: EdgeId) -> u32 {
        self.0.get(&id).copied().unwrap_or(0)
    }

    /// Multiset union, summing multiplicities.
    pub fn union_with(&mut self, other: &EdgeMultiset) {
        for (&id, &k) in &other.0 {
            *self.0.entry(id).or_insert(0) += k;
        }
    }

    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, u32)> + '_ {
        self.0.iter().map(|(&id, &k)| (id, k))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, g: &WeightedGraph) -> Rational {
        self.0
            .iter()
            .map(|(&id, &k)| &g.edge(id).w * Rational::from_integer(BigInt::from(k)))
            .sum()
    }

    pub fn int_weight(&self, g: &ScaledGraph) -> u64 {
        self.0.iter().map(|(&id, &k)| g.weight(id) * k as u64).sum()
    }
}

impl FromIterator<EdgeId> for EdgeMultiset {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        let mut m = EdgeMultiset::new();
        for id in iter {
            m.insert(id);
        }
        m
    }
}

/// Worst ratio `dist_H / dist_G`; `Unbounded` when `H` disconnects a
/// pair that `G` connects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stretch {
    Finite(Rational),
    Unbounded,
}

impl Stretch {
    /// `self <= bound`, exactly.
    pub fn within(&self, bound: &Rational) -> bool {
        match self {
            Stretch::Finite(s) => s <= bound,
            Stretch::Unbounded => false,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Stretch::Finite(s) => Some(s),
            Stretch::Unbounded => None,
        }
    }

    pub fn to_pq(&self) -> String {
        match self {
            Stretch::Finite(s) => to_pq(s),
            Stretch::Unbounded => "inf".into(),
        }
    }
}

impl fmt::Display for Stretch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pq())
    }
}

/// A stretch factor `t = num/den` for integer comparisons `dist <= t·w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StretchBound {
    num: u128,
    den: u128,
}

impl StretchBound {
    pub fn new(t: &Rational) -> Result<Self> {
        let (num, den) = split_u64(t)?;
        Ok(Self {
            num: num as u128,
            den: den as u128,
        })
    }

    /// `1 + eps`.
    pub fn one_plus(eps: &Rational) -> Result<Self> {
        Self::new(&(Rational::from_integer(1.into()) + eps))
    }

    pub fn admits(&self, dist: u64, w: u64) -> bool {
        dist != INF && (dist as u128) * self.den <= (w as u128) * self.num
    }

    /// Largest integer distance admitted for weight `w`.
    pub fn limit(&self, w: u64) -> u64 {
        ((w as u128 * self.num) / self.den).min(INF as u128 - 1) as u64
    }
}

/// Worst-edge stretch of the masked subgraph over a scaled host. Zero-weight
/// host edges count as ratio 1 when their endpoints stay at distance 0.
pub(crate) fn stretch_of_mask(g: &ScaledGraph, mask: &[bool]) -> Stretch {
    let mut by_source: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for id in 0..g.m() {
        let (u, v, w) = g.edge(id);
        by_source.entry(u).or_default().push((v, w));
    }
    // Best ratio so far as (num, den).
    let mut best: (u64, u64) = (1, 1);
    for (u, targets) in by_source {
        let (d, _) = g.dijkstra(u, Some(mask));
        for (v, w) in targets {
            let dh = d[v];
            if dh == INF {
                return Stretch::Unbounded;
            }
            if w == 0 {
                if dh > 0 {
                    return Stretch::Unbounded;
                }
                continue;
            }
            if (dh as u128) * (best.1 as u128) > (best.0 as u128) * (w as u128) {
                best = (dh, w);
            }
        }
    }
    Stretch::Finite(Rational::new(BigInt::from(best.0), BigInt::from(best.1)))
}

/// Whether every masked-out host edge is served within `bound`.
pub(crate) fn mask_admits(g: &ScaledGraph, mask: &[bool], bound: &StretchBound) -> bool {
    let mut by_source: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for id in (0..g.m()).filter(|&id| !mask[id]) {
        let (u, v, w) = g.edge(id);
        by_source.entry(u).or_default().push((v, w));
    }
    for (u, targets) in by_source {
        let (d, _) = g.dijkstra(u, Some(mask));
        if targets.iter().any(|&(v, w)| !bound.admits(d[v], w)) {
            return false;
        }
    }
    true
}

/// Stretch of `h` with respect to `g`: the maximum over host edges `(u, v)`
/// of `dist_H(u, v) / w(u, v)`. Equals the maximum over all connected vertex
/// pairs because every shortest path decomposes into edges.
pub fn stretch(g: &WeightedGraph, h: &WeightedGraph) -> Result<Stretch> {
    let ids = g.edge_ids_of(h)?;
    let sg = ScaledGraph::new(g)?;
    let mut mask = vec![false; g.m()];
    for id in ids {
        mask[id] = true;
    }
    Ok(stretch_of_mask(&sg, &mask))
}

/// `true` iff `stretch(g, h) <= 1 + eps`.
pub fn within_stretch(g: &WeightedGraph, h: &WeightedGraph, eps: &Rational) -> Result<bool> {
    let bound = Rational::from_integer(1.into()) + eps;
    Ok(stretch(g, h)?.within(&bound))
}
