//! Gadget reduction from planar rectilinear monotone 3SAT to the
//! minimum-weight `(1+ε)`-spanner decision problem.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use super::sat::{ForcedAssignment, SatInstance};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::paths::within_stretch;
use crate::rational::{int, to_pq, Rational};

/// What a gadget edge is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeRole {
    /// Weight-0 filler.
    Zero,
    /// `(l, a)` or `(r, b)`, weight ε.
    Connector { clause: usize, var: usize },
    /// `(a, g)` or `(b, g)`, weight `1+ε`.
    Apex { var: usize },
    /// `(u_i, u'_i)` or `(v_i, v'_i)`, weight `2h_i`.
    Terminal { var: usize },
    /// `(a, b)`, weight 2; `true_edge` on the upper path.
    Crossing { var: usize, true_edge: bool },
    /// `(s_i, t_i)`, weight `4h_i/(1+ε)`.
    Chord { var: usize },
    /// `(l, r)` in a clause cycle, weight `2+2ε`.
    ClauseRung { clause: usize },
    /// `(e_j, f_j)`.
    ClauseChord { clause: usize },
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub graph: WeightedGraph,
    pub eps: Rational,
    /// The weight bound `W`.
    pub threshold: Rational,
    pub labels: BTreeMap<String, usize>,
    /// `h_i = max(|C⁺_i|, |C⁻_i|)`.
    pub h: Vec<usize>,
    pub roles: Vec<EdgeRole>,
    pub instance: SatInstance,
    /// Assignments fixed before the reduction, in the caller's numbering.
    pub forced: Vec<ForcedAssignment>,
}

impl ReductionOutput {
    /// JSON sidecar: `W` and `eps` as `"p/q"`, labels, `h`, forced values.
    pub fn sidecar(&self) -> serde_json::Value {
        json!({
            "W": to_pq(&self.threshold),
            "eps": to_pq(&self.eps),
            "labels": self.labels,
            "h": self.h,
            "forced": self.forced,
        })
    }

    /// The gadget graph with every zero weight replaced by `eta`.
    pub fn perturb_zeros(&self, eta: &Rational) -> Result<WeightedGraph> {
        let weights = self
            .graph
            .edges()
            .iter()
            .map(|e| if e.w.is_zero() { eta.clone() } else { e.w.clone() })
            .collect();
        self.graph.with_weights(weights)
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.get(label).copied()
    }
}

/// `(clause weight, h weight)` form of `W = 2ε·Σ|c_j| + 2(5+2ε)·Σh_i`.
pub fn threshold(eps: &Rational, total_literals: usize, total_h: usize) -> Rational {
    int(2) * eps * int(total_literals as i64)
        + int(2) * (int(5) + int(2) * eps) * int(total_h as i64)
}

struct Builder {
    n: usize,
    labels: BTreeMap<String, usize>,
    edges: Vec<(usize, usize, Rational)>,
    roles: Vec<EdgeRole>,
}

impl Builder {
    fn vertex(&mut self, label: String) -> usize {
        let id = self.n;
        self.n += 1;
        self.labels.insert(label, id);
        id
    }

    fn edge(&mut self, u: usize, v: usize, w: Rational, role: EdgeRole) {
        self.edges.push((u, v, w));
        self.roles.push(role);
    }
}

pub fn reduce_sat(inst: &SatInstance, eps: &Rational) -> Result<ReductionOutput> {
    if *eps <= Rational::zero() || *eps > Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "eps = {} must lie in (0, 1]",
            to_pq(eps)
        )));
    }
    inst.validate()?;
    if !inst.is_preprocessed() {
        return Err(Error::InvalidSat(
            "every variable must occur in both polarities; preprocess first".into(),
        ));
    }
    let one_eps = Rational::one() + eps;
    let mut b = Builder {
        n: 0,
        labels: BTreeMap::new(),
        edges: Vec::new(),
        roles: Vec::new(),
    };

    // Clause cycles e_j, l_{j,·}, r_{j,·}, …, f_j.
    let mut lr: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (j, c) in inst.clauses.iter().enumerate() {
        let e = b.vertex(format!("e_{j}"));
        let mut prev = e;
        for &v in &c.literals {
            let l = b.vertex(format!("l_{j}_{v}"));
            let r = b.vertex(format!("r_{j}_{v}"));
            b.edge(prev, l, Rational::zero(), EdgeRole::Zero);
            b.edge(l, r, int(2) * &one_eps, EdgeRole::ClauseRung { clause: j });
            lr.insert((j, v), (l, r));
            prev = r;
        }
        let f = b.vertex(format!("f_{j}"));
        b.edge(prev, f, Rational::zero(), EdgeRole::Zero);
        let k = c.literals.len() as i64;
        let chord = (int(2 * k) + int(4 * k - 2) * eps) / &one_eps;
        b.edge(e, f, chord, EdgeRole::ClauseChord { clause: j });
    }

    // Literal gadgets.
    let mut hs = Vec::with_capacity(inst.num_vars);
    for i in 0..inst.num_vars {
        let (pos, neg) = (inst.positive(i), inst.negative(i));
        let h = pos.len().max(neg.len());
        hs.push(h);
        let s = b.vertex(format!("s_{i}"));
        let t = b.vertex(format!("t_{i}"));
        for (clauses, upper) in [(pos, true), (neg, false)] {
            let mut prev = s;
            let slots = clauses
                .iter()
                .map(|&j| Some(j))
                .chain(std::iter::repeat_n(None, h - clauses.len()));
            for (k, slot) in slots.enumerate() {
                let tag = match slot {
                    Some(j) => format!("{j}_{i}"),
                    None => format!("pad{}_{i}_{k}", if upper { "+" } else { "-" }),
                };
                let a = b.vertex(format!("a_{tag}"));
                let bb = b.vertex(format!("b_{tag}"));
                let g = b.vertex(format!("g_{tag}"));
                b.edge(prev, a, Rational::zero(), EdgeRole::Zero);
                b.edge(a, bb, int(2), EdgeRole::Crossing { var: i, true_edge: upper });
                b.edge(a, g, one_eps.clone(), EdgeRole::Apex { var: i });
                b.edge(bb, g, one_eps.clone(), EdgeRole::Apex { var: i });
                if let Some(j) = slot {
                    let (l, r) = lr[&(j, i)];
                    b.edge(l, a, eps.clone(), EdgeRole::Connector { clause: j, var: i });
                    b.edge(r, bb, eps.clone(), EdgeRole::Connector { clause: j, var: i });
                }
                prev = bb;
            }
            let name = if upper { "u" } else { "v" };
            let x = b.vertex(format!("{name}_{i}"));
            let x2 = b.vertex(format!("{name}'_{i}"));
            b.edge(prev, x, Rational::zero(), EdgeRole::Zero);
            b.edge(x, x2, int(2 * h as i64), EdgeRole::Terminal { var: i });
            b.edge(x2, t, Rational::zero(), EdgeRole::Zero);
        }
        b.edge(s, t, int(4 * h as i64) / &one_eps, EdgeRole::Chord { var: i });
    }

    let total_literals: usize = inst.clauses.iter().map(|c| c.literals.len()).sum();
    let total_h: usize = hs.iter().sum();
    let graph = WeightedGraph::new(b.n, b.edges, true)?;
    Ok(ReductionOutput {
        graph,
        eps: eps.clone(),
        threshold: threshold(eps, total_literals, total_h),
        labels: b.labels,
        h: hs,
        roles: b.roles,
        instance: inst.clone(),
        forced: Vec::new(),
    })
}

fn is_spanner(out: &ReductionOutput, h: &WeightedGraph) -> Result<bool> {
    within_stretch(&out.graph, h, &out.eps)
}

/// The spanner built from a satisfying assignment: every weight-0, connector,
/// apex and terminal edge, plus the true or false crossing edges of each
/// variable according to its value.
pub fn assignment_to_spanner(out: &ReductionOutput, assignment: &[bool]) -> Result<WeightedGraph> {
    if assignment.len() != out.instance.num_vars {
        return Err(Error::InvalidParameter(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            out.instance.num_vars
        )));
    }
    let ids: Vec<EdgeId> = out
        .roles
        .iter()
        .enumerate()
        .filter(|(_, role)| match **role {
            EdgeRole::Zero
            | EdgeRole::Connector { .. }
            | EdgeRole::Apex { .. }
            | EdgeRole::Terminal { .. } => true,
            EdgeRole::Crossing { var, true_edge } => assignment[var] == true_edge,
            _ => false,
        })
        .map(|(id, _)| id)
        .collect();
    let h = out.graph.subgraph(ids);
    if h.total_weight() != out.threshold || !is_spanner(out, &h)? {
        return Err(Error::Precondition(
            "the assignment does not satisfy the formula".into(),
        ));
    }
    Ok(h)
}

/// Reads the assignment off a light spanner: `x_i` is true iff every true
/// crossing edge of its gadget is kept.
pub fn spanner_to_assignment(out: &ReductionOutput, h: &WeightedGraph) -> Result<Vec<bool>> {
    let ids = out.graph.edge_ids_of(h)?;
    if h.total_weight() > out.threshold {
        return Err(Error::Precondition(format!(
            "spanner weight {} exceeds W = {}",
            to_pq(&h.total_weight()),
            to_pq(&out.threshold)
        )));
    }
    if !is_spanner(out, h)? {
        return Err(Error::Precondition(format!(
            "not a (1+{})-spanner",
            to_pq(&out.eps)
        )));
    }
    let mut kept = vec![false; out.graph.m()];
    for id in ids {
        kept[id] = true;
    }
    let mut assignment = vec![true; out.instance.num_vars];
    for (id, role) in out.roles.iter().enumerate() {
        if let EdgeRole::Crossing {
            var,
            true_edge: true,
        } = *role
        {
            assignment[var] &= kept[id];
        }
    }
    if !out.instance.satisfies(&assignment) {
        return Err(Error::Precondition(
            "the extracted assignment does not satisfy the formula".into(),
        ));
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sat::{Clause, Side};
    use crate::paths::apsp;
    use crate::rational::ratio;

    fn clause(side: Side, lits: &[usize]) -> Clause {
        Clause {
            literals: lits.to_vec(),
            side,
        }
    }

    /// The three-clause layout example over five variables, reduced to the
    /// variables occurring in both polarities.
    fn three_clause_formula() -> SatInstance {
        SatInstance::new(
            5,
            vec![
                clause(Side::Above, &[0, 1, 2]),
                clause(Side::Above, &[0, 3, 4]),
                clause(Side::Below, &[0, 2, 3]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tiny_instance_threshold() {
        // x0 in one positive and one negative 2-literal clause, x1 likewise.
        let inst = SatInstance::new(
            2,
            vec![clause(Side::Above, &[0, 1]), clause(Side::Below, &[0, 1])],
        )
        .unwrap();
        let eps = ratio(1, 10);
        let out = reduce_sat(&inst, &eps).unwrap();
        assert_eq!(out.h, vec![1, 1]);
        // 2ε·4 + 2(5+2ε)·2
        assert_eq!(out.threshold, ratio(8, 10) + int(4) * ratio(52, 10));
    }

    #[test]
    fn rejects_unpreprocessed() {
        let inst = three_clause_formula();
        assert!(reduce_sat(&inst, &ratio(1, 10)).is_err());
        let pre = inst.preprocess().unwrap();
        assert!(reduce_sat(&pre.instance, &ratio(1, 10)).is_ok());
        assert!(reduce_sat(&pre.instance, &int(1)).is_ok());
        assert!(reduce_sat(&pre.instance, &int(2)).is_err());
    }

    #[test]
    fn labelled_weights_match_the_construction() {
        let eps = ratio(1, 10);
        let inst = SatInstance::new(
            3,
            vec![
                clause(Side::Above, &[0, 1, 2]),
                clause(Side::Below, &[0, 1]),
                clause(Side::Below, &[2]),
            ],
        )
        .unwrap();
        let out = reduce_sat(&inst, &eps).unwrap();
        let g = &out.graph;
        assert!(g.m() <= 3 * g.n() - 6);
        let w = |a: &str, b: &str| {
            let id = g.find_edge(out.vertex(a).unwrap(), out.vertex(b).unwrap()).unwrap();
            g.edge(id).w.clone()
        };
        let one_eps = Rational::one() + &eps;
        assert_eq!(w("e_0", "f_0"), (int(6) + int(10) * &eps) / &one_eps);
        assert_eq!(w("e_1", "f_1"), (int(4) + int(6) * &eps) / &one_eps);
        assert_eq!(w("e_2", "f_2"), int(2));
        assert_eq!(w("l_0_1", "r_0_1"), int(2) * &one_eps);
        assert_eq!(w("l_0_1", "a_0_1"), eps);
        assert_eq!(w("r_1_0", "b_1_0"), eps);
        assert_eq!(w("a_0_1", "b_0_1"), int(2));
        assert_eq!(w("a_0_1", "g_0_1"), one_eps);
        assert_eq!(w("s_0", "t_0"), int(4) / &one_eps);
        assert_eq!(w("u_0", "u'_0"), int(2));
        assert_eq!(w("v_2", "v'_2"), int(2));
        // Every s–t path has length 4h.
        let d = apsp(&g.subgraph(
            (0..g.m()).filter(|&id| !matches!(out.roles[id], EdgeRole::Chord { .. })),
        ));
        for i in 0..3 {
            let (s, t) = (out.vertex(&format!("s_{i}")).unwrap(), out.vertex(&format!("t_{i}")).unwrap());
            assert_eq!(d.dist(s, t), Some(int(4 * out.h[i] as i64)));
        }
    }

    #[test]
    fn padding_fills_the_lighter_side() {
        let inst = SatInstance::new(
            2,
            vec![
                clause(Side::Above, &[0]),
                clause(Side::Above, &[0, 1]),
                clause(Side::Below, &[0, 1]),
            ],
        )
        .unwrap();
        let out = reduce_sat(&inst, &ratio(1, 10)).unwrap();
        assert_eq!(out.h, vec![2, 1]);
        assert!(out.vertex("a_pad-_0_1").is_some());
        let falses = out
            .roles
            .iter()
            .filter(|r| matches!(r, EdgeRole::Crossing { var: 0, true_edge: false }))
            .count();
        assert_eq!(falses, 2);
    }

    #[test]
    fn satisfying_assignment_round_trips() {
        let eps = ratio(1, 10);
        let inst = SatInstance::new(
            3,
            vec![
                clause(Side::Above, &[0, 1, 2]),
                clause(Side::Below, &[0, 1]),
                clause(Side::Below, &[2]),
            ],
        )
        .unwrap();
        let out = reduce_sat(&inst, &eps).unwrap();
        let a = vec![true, false, false];
        assert!(inst.satisfies(&a));
        let h = assignment_to_spanner(&out, &a).unwrap();
        assert_eq!(h.total_weight(), out.threshold);
        assert_eq!(spanner_to_assignment(&out, &h).unwrap(), a);
        // One true literal in the 3-clause: the detour is exactly (1+ε)·w(e,f).
        let hd = apsp(&h);
        let (e, f) = (out.vertex("e_0").unwrap(), out.vertex("f_0").unwrap());
        assert_eq!(hd.dist(e, f), Some(int(6) + int(10) * &eps));
        assert!(assignment_to_spanner(&out, &[true, true, true]).is_err());
    }

    #[test]
    fn chord_spanner_is_rejected() {
        let eps = ratio(1, 10);
        let inst = SatInstance::new(
            1,
            vec![clause(Side::Above, &[0]), clause(Side::Below, &[0])],
        )
        .unwrap();
        let out = reduce_sat(&inst, &eps).unwrap();
        let h = assignment_to_spanner(&out, &[true]);
        assert!(h.is_err(), "x and not x is unsatisfiable");
        let heavy = out.graph.subgraph(
            (0..out.graph.m()).filter(|&id| !matches!(out.roles[id], EdgeRole::ClauseChord { .. })),
        );
        assert!(matches!(
            spanner_to_assignment(&out, &heavy),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sidecar_fields() {
        let inst = SatInstance::new(
            1,
            vec![clause(Side::Above, &[0]), clause(Side::Below, &[0])],
        )
        .unwrap();
        let out = reduce_sat(&inst, &ratio(1, 2)).unwrap();
        let js = out.sidecar();
        assert_eq!(js["W"], to_pq(&out.threshold));
        assert_eq!(js["h"][0], 1);
        assert!(js["labels"]["s_0"].is_number());
        let bumped = out.perturb_zeros(&ratio(1, 1000)).unwrap();
        assert!(bumped.edges().iter().all(|e| !e.w.is_zero()));
    }
}
