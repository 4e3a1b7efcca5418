//! Exact ground truth: minimum-weight `(1+ε)`-spanners by branch and bound,
//! and a brute-force SAT solver.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, UnionFind, WeightedGraph};
use crate::instances::SatInstance;
use crate::paths::{mask_admits, within_stretch, ScaledGraph, StretchBound};
use crate::rational::Rational;

/// Largest number of undecided edges the search accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 24;

/// Largest formula `sat_brute_force` enumerates.
pub const MAX_SAT_VARS: usize = 20;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub opt_weight: Rational,
    pub opt_edges: Vec<EdgeId>,
    pub spanner: WeightedGraph,
    pub nodes_explored: u64,
    /// Edges fixed before branching: zero weights and edges whose removal
    /// alone breaks the stretch.
    pub forced: Vec<EdgeId>,
}

/// `stretch(g, h) <= 1 + eps`.
pub fn is_spanner(g: &WeightedGraph, h: &WeightedGraph, eps: &Rational) -> Result<bool> {
    within_stretch(g, h, eps)
}

pub fn exact_opt_spanner(g: &WeightedGraph, eps: &Rational) -> Result<OracleResult> {
    exact_opt_spanner_with_cap(g, eps, DEFAULT_ORACLE_CAP)
}

/// Minimum-weight `(1+ε)`-spanner of `g`. `cap` bounds the number of edges
/// left undecided after forcing.
pub fn exact_opt_spanner_with_cap(
    g: &WeightedGraph,
    eps: &Rational,
    cap: usize,
) -> Result<OracleResult> {
    if *eps < Rational::zero() {
        return Err(Error::InvalidParameter("eps must be nonnegative".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let sg = ScaledGraph::new(g)?;
    let bound = StretchBound::one_plus(eps)?;
    let m = g.m();

    let mut forced = Vec::new();
    let mut free = Vec::new();
    let mut all = vec![true; m];
    for id in 0..m {
        all[id] = false;
        let needed = sg.weight(id) == 0 || !mask_admits(&sg, &all, &bound);
        all[id] = true;
        if needed {
            forced.push(id);
        } else {
            free.push(id);
        }
    }
    if free.len() > cap {
        return Err(Error::OracleCapExceeded {
            free_edges: free.len(),
            cap,
        });
    }
    free.sort_by_key(|&id| (std::cmp::Reverse(sg.weight(id)), id));

    let mut search = Search {
        sg: &sg,
        bound,
        free: &free,
        included: vec![false; m],
        excluded: vec![false; m],
        best_weight: sg.weight_of(0..m).saturating_add(1),
        best: Vec::new(),
        nodes: 0,
    };
    for &id in &forced {
        search.included[id] = true;
    }
    let base = sg.weight_of(forced.iter().copied());
    search.dfs(0, base);

    let mut opt_edges = search.best.clone();
    opt_edges.sort_unstable();
    Ok(OracleResult {
        opt_weight: g.weight_of(opt_edges.iter().copied()),
        spanner: g.subgraph(opt_edges.iter().copied()),
        opt_edges,
        nodes_explored: search.nodes,
        forced,
    })
}

struct Search<'a> {
    sg: &'a ScaledGraph,
    bound: StretchBound,
    free: &'a [EdgeId],
    included: Vec<bool>,
    excluded: Vec<bool>,
    best_weight: u64,
    best: Vec<EdgeId>,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize, weight: u64) {
        self.nodes += 1;
        let Some(lb) = self.connect_bound(k) else {
            return;
        };
        if weight + lb >= self.best_weight {
            return;
        }
        if mask_admits(self.sg, &self.included, &self.bound) {
            self.best_weight = weight;
            self.best = (0..self.included.len()).filter(|&id| self.included[id]).collect();
            return;
        }
        if k == self.free.len() {
            return;
        }
        let id = self.free[k];
        self.included[id] = true;
        self.dfs(k + 1, weight + self.sg.weight(id));
        self.included[id] = false;

        self.excluded[id] = true;
        let allowed: Vec<bool> = self.excluded.iter().map(|&x| !x).collect();
        if mask_admits(self.sg, &allowed, &self.bound) {
            self.dfs(k + 1, weight);
        }
        self.excluded[id] = false;
    }

    /// Weight of a minimum spanning forest joining the components of the
    /// included edges using undecided edges; `None` if they cannot connect.
    fn connect_bound(&self, k: usize) -> Option<u64> {
        let n = self.sg.n();
        let mut uf = UnionFind::new(n);
        let mut parts = n;
        for (id, &inc) in self.included.iter().enumerate() {
            if inc {
                let (u, v, _) = self.sg.edge(id);
                if uf.union(u, v) {
                    parts -= 1;
                }
            }
        }
        let mut rest: Vec<EdgeId> = self.free[k..].to_vec();
        rest.sort_by_key(|&id| (self.sg.weight(id), id));
        let mut total = 0;
        for id in rest {
            if parts <= 1 {
                break;
            }
            let (u, v, w) = self.sg.edge(id);
            if uf.union(u, v) {
                parts -= 1;
                total += w;
            }
        }
        (parts <= 1).then_some(total)
    }
}

/// A satisfying assignment by enumeration, or `None`.
pub fn sat_brute_force(inst: &SatInstance) -> Result<Option<Vec<bool>>> {
    if inst.num_vars > MAX_SAT_VARS {
        return Err(Error::InvalidSat(format!(
            "{} variables exceed the enumeration limit of {MAX_SAT_VARS}",
            inst.num_vars
        )));
    }
    let n = inst.num_vars;
    for mask in 0u32..(1u32 << n) {
        let a: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if inst.satisfies(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_ladder, Clause, Side};
    use crate::rational::{int, ratio};

    #[test]
    fn ladder_optimum() {
        let eps = ratio(1, 2);
        let g = gen_ladder(3, &eps, false).unwrap();
        let res = exact_opt_spanner(&g, &eps).unwrap();
        assert_eq!(res.opt_weight, ratio(5, 2));
        let mut expected = vec![0];
        expected.extend(4..g.m());
        assert_eq!(res.opt_edges, expected);
    }

    #[test]
    fn tree_and_triangle() {
        let tree = WeightedGraph::new(4, [(0, 1, int(1)), (1, 2, int(2)), (1, 3, int(3))], true)
            .unwrap();
        assert_eq!(exact_opt_spanner(&tree, &ratio(1, 2)).unwrap().spanner, tree);
        let tri = WeightedGraph::new(3, [(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))], true)
            .unwrap();
        assert_eq!(exact_opt_spanner(&tri, &ratio(1, 10)).unwrap().opt_edges, vec![0, 1, 2]);
    }

    #[test]
    fn cap_is_enforced() {
        let eps = ratio(1, 2);
        let g = gen_ladder(3, &eps, false).unwrap();
        assert!(matches!(
            exact_opt_spanner_with_cap(&g, &eps, 1),
            Err(Error::OracleCapExceeded { .. })
        ));
    }

    #[test]
    fn spanner_predicate() {
        let eps = ratio(1, 10);
        let g = gen_ladder(3, &eps, false).unwrap();
        assert!(is_spanner(&g, &g, &eps).unwrap());
        let stars = g.subgraph(4..g.m());
        assert!(!is_spanner(&g, &stars, &eps).unwrap());
    }

    fn clause(side: Side, lits: &[usize]) -> Clause {
        Clause {
            literals: lits.to_vec(),
            side,
        }
    }

    #[test]
    fn brute_force_sat() {
        let formula = SatInstance::new(
            5,
            vec![
                clause(Side::Above, &[0, 1, 2]),
                clause(Side::Above, &[0, 3, 4]),
                clause(Side::Below, &[0, 2, 3]),
            ],
        )
        .unwrap();
        let a = sat_brute_force(&formula).unwrap().unwrap();
        assert!(formula.satisfies(&a));
        let empty = SatInstance::new(0, vec![]).unwrap();
        assert_eq!(sat_brute_force(&empty).unwrap(), Some(vec![]));
        let unsat = SatInstance::new(
            2,
            vec![
                clause(Side::Above, &[0, 1]),
                clause(Side::Below, &[0]),
                clause(Side::Below, &[1]),
            ],
        )
        .unwrap();
        assert_eq!(sat_brute_force(&unsat).unwrap(), None);
        let big = SatInstance::new(21, vec![]).unwrap();
        assert!(sat_brute_force(&big).is_err());
    }
}
