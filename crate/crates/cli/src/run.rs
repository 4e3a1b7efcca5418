use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use spanner_core::greedy::greedy_spanner;
use spanner_core::oracle::{exact_opt_spanner_with_cap, DEFAULT_ORACLE_CAP};
use spanner_core::prune::{
    iterate_prune_from_with, iterate_prune_with, prune_with, prune_with_scaling_with,
    scaled_stretch_bound, PruneOptions,
};
use spanner_core::rational::{int, to_pq};
use spanner_core::{stretch, Rational, Stretch, WeightedGraph};

use crate::util::{exact, prune_options, rational_arg, read_graph, write_graph, BadParameter, VerificationFailed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Greedy,
    Prune,
    Iterate,
    Scaled,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Prune => "prune",
            Algorithm::Iterate => "iterate",
            Algorithm::Scaled => "scaled",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(value_enum)]
    pub algorithm: Algorithm,
    pub graph: PathBuf,
    #[arg(long, value_parser = rational_arg)]
    pub eps: Option<Rational>,
    /// Stretch for `greedy`; defaults to `1 + eps`.
    #[arg(long, value_parser = rational_arg)]
    pub t: Option<Rational>,
    /// Starting spanner for `prune` and `iterate`; the greedy `(1+ε)`-spanner otherwise.
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Largest number of undecided edges the oracle accepts.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub cap: usize,
    /// Spanner edge list destination.
    #[arg(short, long)]
    pub out: PathBuf,
    /// JSON report destination; standard output when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Algorithm parameters shared by `run` and `bench`.
#[derive(Clone, Debug)]
pub struct Params {
    pub eps: Option<Rational>,
    pub t: Option<Rational>,
    pub init: Option<WeightedGraph>,
    pub cap: usize,
    pub prune: PruneOptions,
}

pub struct Outcome {
    pub spanner: WeightedGraph,
    /// Stretch the algorithm guarantees, when it has a closed form.
    pub bound: Option<Rational>,
    pub details: Value,
}

fn need_eps(algo: Algorithm, p: &Params) -> Result<Rational> {
    match &p.eps {
        Some(e) if *e > int(0) => Ok(e.clone()),
        Some(e) => Err(BadParameter(format!("eps must be positive, got {}", to_pq(e))).into()),
        None => Err(BadParameter(format!("`{}` needs --eps", algo.name())).into()),
    }
}

/// Maps edges of `h` (a subgraph of `from`) onto the same ids of `to`.
fn transfer(from: &WeightedGraph, to: &WeightedGraph, h: &WeightedGraph) -> Result<WeightedGraph> {
    Ok(to.subgraph(from.edge_ids_of(h)?))
}

pub fn execute(g: &WeightedGraph, algo: Algorithm, p: &Params) -> Result<Outcome> {
    match algo {
        Algorithm::Greedy => {
            let t = match (&p.t, &p.eps) {
                (Some(t), _) => t.clone(),
                (None, Some(e)) => int(1) + e,
                (None, None) => return Err(BadParameter("`greedy` needs --t or --eps".into()).into()),
            };
            let h = greedy_spanner(g, &t)?;
            Ok(Outcome {
                spanner: h,
                bound: Some(t.clone()),
                details: json!({ "t": to_pq(&t) }),
            })
        }
        Algorithm::Oracle => {
            let eps = need_eps(algo, p)?;
            let res = exact_opt_spanner_with_cap(g, &eps, p.cap)?;
            Ok(Outcome {
                spanner: res.spanner,
                bound: Some(int(1) + &eps),
                details: json!({
                    "nodes_explored": res.nodes_explored,
                    "forced_edges": res.forced.len(),
                    "cap": p.cap,
                }),
            })
        }
        Algorithm::Prune | Algorithm::Iterate | Algorithm::Scaled => {
            let eps = need_eps(algo, p)?;
            if g.edges().iter().any(|e| e.w == int(0)) {
                return Err(BadParameter(format!(
                    "`{}` needs positive weights; regenerate with --perturb-zeros",
                    algo.name()
                ))
                .into());
            }
            let (gi, scale) = g.scale_to_integers();
            let init = p.init.as_ref().map(|h| transfer(g, &gi, h)).transpose()?;
            let mut details = json!({ "scale": to_pq(&scale) });
            let (hi, bound) = match algo {
                Algorithm::Prune => {
                    let start = match init {
                        Some(h) => h,
                        None => greedy_spanner(&gi, &(int(1) + &eps))?,
                    };
                    let delta = match stretch(&gi, &start)? {
                        Stretch::Finite(s) => (s - int(1)).max(eps.clone()),
                        Stretch::Unbounded => {
                            return Err(BadParameter("the starting spanner disconnects the graph".into()).into())
                        }
                    };
                    let (h1, state) = prune_with(&gi, &start, &eps, &p.prune)?;
                    details["initial_weight"] = exact(&(start.total_weight() / &scale));
                    details["rounds"] = serde_json::to_value(&state.rounds)?;
                    details["f_new"] = json!(state.f_new);
                    details["f_old"] = json!(state.f_old);
                    (h1, Some(int(1) + int(11) * delta))
                }
                Algorithm::Iterate => {
                    let out = match init {
                        Some(h) => iterate_prune_from_with(&gi, &h, &eps, &p.prune)?,
                        None => iterate_prune_with(&gi, &eps, &p.prune)?,
                    };
                    details["initial_weight"] = exact(&(out.initial.total_weight() / &scale));
                    details["iterations"] = serde_json::to_value(&out.iterations)?;
                    (out.spanner, None)
                }
                _ => {
                    let out = prune_with_scaling_with(&gi, &eps, &p.prune)?;
                    let bound = match &out.contracted {
                        Some(run) => {
                            details["contracted"] = json!({
                                "n": run.graph.n(),
                                "m": run.graph.m(),
                                "eps": to_pq(&run.eps),
                                "inner_stretch": run.inner_stretch.to_pq(),
                                "light_edges": run.light.len(),
                                "iterations": run.inner.iterations,
                            });
                            scaled_stretch_bound(run, &eps)
                        }
                        None => None,
                    };
                    (out.spanner, bound)
                }
            };
            Ok(Outcome {
                spanner: transfer(&gi, g, &hi)?,
                bound,
                details,
            })
        }
    }
}

/// Weight and stretch of the spanner as read back from disk.
pub struct Verified {
    pub weight: Rational,
    pub stretch: Stretch,
}

pub fn reverify(g: &WeightedGraph, path: &Path) -> Result<Verified> {
    let h = read_graph(path)?;
    g.edge_ids_of(&h)
        .with_context(|| format!("{} is not a subgraph of the input", path.display()))?;
    Ok(Verified {
        weight: h.total_weight(),
        stretch: stretch(g, &h)?,
    })
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let params = Params {
        eps: args.eps.clone(),
        t: args.t.clone(),
        init: args.init.as_deref().map(read_graph).transpose()?,
        cap: args.cap,
        prune: prune_options()?,
    };
    let start = Instant::now();
    let outcome = execute(&g, args.algorithm, &params)?;
    let elapsed = start.elapsed();

    write_graph(&args.out, &outcome.spanner)?;
    let checked = reverify(&g, &args.out)?;
    if checked.weight != outcome.spanner.total_weight() {
        return Err(VerificationFailed(format!(
            "weight read back from {} differs from the computed spanner",
            args.out.display()
        ))
        .into());
    }
    let within = outcome.bound.as_ref().map(|b| checked.stretch.within(b));
    let report = json!({
        "instance": {
            "path": args.graph.display().to_string(),
            "n": g.n(),
            "m": g.m(),
            "declared_planar": g.declared_planar(),
            "total_weight": exact(&g.total_weight()),
        },
        "algorithm": args.algorithm.name(),
        "params": {
            "eps": args.eps.as_ref().map(to_pq),
            "t": args.t.as_ref().map(to_pq),
            "init": args.init.as_ref().map(|p| p.display().to_string()),
            "cell_cap": params.prune.cell_cap,
        },
        "spanner": args.out.display().to_string(),
        "edges": outcome.spanner.m(),
        "weight": exact(&checked.weight),
        "stretch": checked.stretch.to_pq(),
        "stretch_bound": outcome.bound.as_ref().map(to_pq),
        "within_bound": within,
        "wall_time_ms": elapsed.as_secs_f64() * 1e3,
        "details": outcome.details,
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &args.report {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if within == Some(false) {
        return Err(VerificationFailed(format!(
            "stretch {} exceeds the guaranteed {}",
            checked.stretch.to_pq(),
            to_pq(outcome.bound.as_ref().expect("within is set only with a bound"))
        ))
        .into());
    }
    Ok(())
}
