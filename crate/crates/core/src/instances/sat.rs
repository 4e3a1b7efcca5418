//! Planar rectilinear monotone 3SAT instances.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Positive clause, drawn above the variable axis.
    Above,
    /// Negative clause, drawn below.
    Below,
}

impl Side {
    pub fn is_positive(self) -> bool {
        self == Side::Above
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    /// Variable indices in left-to-right drawing order.
    pub literals: Vec<usize>,
    pub side: Side,
}

/// A monotone formula with its layout: per variable, the left-to-right order
/// of the positive and negative clauses it meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatInstance {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    pub pos_order: Vec<Vec<usize>>,
    pub neg_order: Vec<Vec<usize>>,
}

/// A variable fixed by preprocessing, in original numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ForcedAssignment {
    pub var: usize,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preprocessed {
    pub instance: SatInstance,
    pub forced: Vec<ForcedAssignment>,
    /// Original index of each remaining variable.
    pub var_map: Vec<usize>,
}

impl Preprocessed {
    /// Extends an assignment of the reduced instance to the original variables.
    pub fn lift(&self, assignment: &[bool], num_vars: usize) -> Vec<bool> {
        let mut out = vec![false; num_vars];
        for f in &self.forced {
            out[f.var] = f.value;
        }
        for (i, &orig) in self.var_map.iter().enumerate() {
            out[orig] = assignment[i];
        }
        out
    }
}

impl SatInstance {
    /// Builds an instance whose layout orders follow clause order.
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        let (pos_order, neg_order) = default_orders(num_vars, &clauses)?;
        let inst = Self {
            num_vars,
            clauses,
            pos_order,
            neg_order,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Positive clauses containing `var`, left to right.
    pub fn positive(&self, var: usize) -> &[usize] {
        &self.pos_order[var]
    }

    pub fn negative(&self, var: usize) -> &[usize] {
        &self.neg_order[var]
    }

    pub fn validate(&self) -> Result<()> {
        if self.pos_order.len() != self.num_vars || self.neg_order.len() != self.num_vars {
            return Err(Error::InvalidSat("one layout order per variable".into()));
        }
        for (j, c) in self.clauses.iter().enumerate() {
            if c.literals.is_empty() || c.literals.len() > 3 {
                return Err(Error::InvalidSat(format!(
                    "clause {j} has {} literals, expected 1 to 3",
                    c.literals.len()
                )));
            }
            for (k, &v) in c.literals.iter().enumerate() {
                if v >= self.num_vars {
                    return Err(Error::InvalidSat(format!(
                        "clause {j} uses variable {v} of {}",
                        self.num_vars
                    )));
                }
                if c.literals[..k].contains(&v) {
                    return Err(Error::InvalidSat(format!(
                        "clause {j} repeats variable {v}"
                    )));
                }
            }
        }
        let (pos, neg) = default_orders(self.num_vars, &self.clauses)?;
        for v in 0..self.num_vars {
            for (given, expected, sign) in [
                (&self.pos_order[v], &pos[v], '+'),
                (&self.neg_order[v], &neg[v], '-'),
            ] {
                let mut a = given.clone();
                a.sort_unstable();
                if a != *expected {
                    return Err(Error::InvalidSat(format!(
                        "order{sign} for variable {v} must list exactly its clauses"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether every variable occurs in at least one positive and one
    /// negative clause.
    pub fn is_preprocessed(&self) -> bool {
        (0..self.num_vars).all(|v| !self.pos_order[v].is_empty() && !self.neg_order[v].is_empty())
    }

    pub fn satisfies(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self.clauses.iter().all(|c| {
                c.literals
                    .iter()
                    .any(|&v| assignment[v] == c.side.is_positive())
            })
    }

    /// Repeatedly fixes variables that occur in one polarity only (or not at
    /// all) and deletes the clauses they satisfy, then renumbers.
    #[allow(clippy::needless_range_loop)]
    pub fn preprocess(&self) -> Result<Preprocessed> {
        self.validate()?;
        let mut alive = vec![true; self.clauses.len()];
        let mut fixed: Vec<Option<bool>> = vec![None; self.num_vars];
        let mut forced = Vec::new();
        loop {
            let mut changed = false;
            for v in 0..self.num_vars {
                if fixed[v].is_some() {
                    continue;
                }
                let live = |order: &Vec<usize>| order.iter().any(|&c| alive[c]);
                let (p, n) = (live(&self.pos_order[v]), live(&self.neg_order[v]));
                if p && n {
                    continue;
                }
                let value = p;
                fixed[v] = Some(value);
                forced.push(ForcedAssignment { var: v, value });
                for (c, clause) in self.clauses.iter().enumerate() {
                    if clause.literals.contains(&v) && clause.side.is_positive() == value {
                        alive[c] = false;
                    }
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let var_map: Vec<usize> = (0..self.num_vars).filter(|&v| fixed[v].is_none()).collect();
        let mut new_var = vec![usize::MAX; self.num_vars];
        for (i, &v) in var_map.iter().enumerate() {
            new_var[v] = i;
        }
        let mut new_clause = vec![usize::MAX; self.clauses.len()];
        let mut clauses = Vec::new();
        for (c, clause) in self.clauses.iter().enumerate() {
            if alive[c] {
                new_clause[c] = clauses.len();
                clauses.push(Clause {
                    literals: clause.literals.iter().map(|&v| new_var[v]).collect(),
                    side: clause.side,
                });
            }
        }
        let remap = |orders: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            var_map
                .iter()
                .map(|&v| {
                    orders[v]
                        .iter()
                        .filter(|&&c| alive[c])
                        .map(|&c| new_clause[c])
                        .collect()
                })
                .collect()
        };
        let instance = SatInstance {
            num_vars: var_map.len(),
            pos_order: remap(&self.pos_order),
            neg_order: remap(&self.neg_order),
            clauses,
        };
        instance.validate()?;
        Ok(Preprocessed {
            instance,
            forced,
            var_map,
        })
    }

    /// Parses the text format: `vars k`, `clause above|below v…`, and
    /// optional `order+ i c…` / `order- i c…` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut num_vars = None;
        let mut clauses = Vec::new();
        let mut orders: Vec<(usize, bool, usize, Vec<usize>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            let nums = |parts: std::str::SplitWhitespace<'_>| -> Result<Vec<usize>> {
                parts
                    .map(|p| {
                        p.parse::<usize>()
                            .map_err(|_| Error::parse(line_no, format!("expected an index, got {p:?}")))
                    })
                    .collect()
            };
            match key {
                "vars" => {
                    let v = nums(parts)?;
                    if v.len() != 1 {
                        return Err(Error::parse(line_no, "expected `vars k`"));
                    }
                    num_vars = Some(v[0]);
                }
                "clause" => {
                    let side = match parts.next() {
                        Some("above") => Side::Above,
                        Some("below") => Side::Below,
                        other => {
                            return Err(Error::parse(
                                line_no,
                                format!("expected above or below, got {other:?}"),
                            ))
                        }
                    };
                    clauses.push(Clause {
                        literals: nums(parts)?,
                        side,
                    });
                }
                "order+" | "order-" => {
                    let v = nums(parts)?;
                    let Some((&var, rest)) = v.split_first() else {
                        return Err(Error::parse(line_no, "expected a variable index"));
                    };
                    orders.push((line_no, key == "order+", var, rest.to_vec()));
                }
                other => return Err(Error::parse(line_no, format!("unknown directive {other:?}"))),
            }
        }
        let num_vars = num_vars.ok_or_else(|| Error::parse(1, "missing `vars` line"))?;
        let (mut pos_order, mut neg_order) = default_orders(num_vars, &clauses)?;
        for (line_no, positive, var, list) in orders {
            if var >= num_vars {
                return Err(Error::parse(line_no, format!("variable {var} out of range")));
            }
            if positive {
                pos_order[var] = list;
            } else {
                neg_order[var] = list;
            }
        }
        let inst = Self {
            num_vars,
            clauses,
            pos_order,
            neg_order,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vars {}\n", self.num_vars);
        for c in &self.clauses {
            let side = if c.side.is_positive() { "above" } else { "below" };
            let lits: Vec<String> = c.literals.iter().map(ToString::to_string).collect();
            writeln!(out, "clause {side} {}", lits.join(" ")).unwrap();
        }
        for v in 0..self.num_vars {
            for (key, order) in [("order+", &self.pos_order[v]), ("order-", &self.neg_order[v])] {
                if !order.is_empty() {
                    let cs: Vec<String> = order.iter().map(ToString::to_string).collect();
                    writeln!(out, "{key} {v} {}", cs.join(" ")).unwrap();
                }
            }
        }
        out
    }
}

/// Per-variable clause indices, positive then negative.
type Orders = (Vec<Vec<usize>>, Vec<Vec<usize>>);

fn default_orders(num_vars: usize, clauses: &[Clause]) -> Result<Orders> {
    let mut pos = vec![Vec::new(); num_vars];
    let mut neg = vec![Vec::new(); num_vars];
    for (j, c) in clauses.iter().enumerate() {
        for &v in &c.literals {
            let list = if c.side.is_positive() { &mut pos } else { &mut neg };
            let slot = list.get_mut(v).ok_or_else(|| {
                Error::InvalidSat(format!("clause {j} uses variable {v} of {num_vars}"))
            })?;
            if !slot.contains(&j) {
                slot.push(j);
            }
        }
    }
    Ok((pos, neg))
}
