use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use spanner_core::instances::{gen_greedy_hard, gen_ladder, gen_multiladder, reduce_sat, SatInstance};
use spanner_core::io::write_edge_list;
use spanner_core::{Rational, WeightedGraph};

use crate::util::{rational_arg, write_graph, BadParameter};

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(subcommand)]
    pub family: Family,
    /// Destination edge list; standard output when absent.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// Ladder with `n+1` rungs of weight 1 and spokes of weight `ε/2`.
    Ladder {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        /// Perturb rung weights so greedy meets them in its worst order.
        #[arg(long)]
        perturb: bool,
    },
    /// `k` ladders chained between two terminals.
    Multiladder {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        perturb: bool,
    },
    /// Instance on which the greedy `(1+xε)`-spanner is heavy.
    Greedyhard {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, value_parser = rational_arg)]
        x: Rational,
    },
    /// Gadget graph of a monotone formula, with a JSON sidecar.
    Sat {
        /// Formula file (`vars`, `clause`, `order+`, `order-` lines).
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        /// Sidecar path; defaults to the output path with `.json` appended.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Replace weight-0 edges by this value.
        #[arg(long, value_parser = rational_arg)]
        perturb_zeros: Option<Rational>,
    },
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let graph = match &args.family {
        Family::Ladder { n, eps, perturb } => gen_ladder(*n, eps, *perturb)?,
        Family::Multiladder { k, n, eps, perturb } => gen_multiladder(*k, *n, eps, *perturb)?,
        Family::Greedyhard { eps, x } => gen_greedy_hard(eps, x)?.graph,
        Family::Sat {
            input,
            eps,
            sidecar,
            perturb_zeros,
        } => gen_sat(input, eps, sidecar.as_deref(), perturb_zeros.as_ref(), args.out.as_deref())?,
    };
    emit(&graph, args.out.as_deref())
}

fn gen_sat(
    input: &Path,
    eps: &Rational,
    sidecar: Option<&Path>,
    perturb_zeros: Option<&Rational>,
    out: Option<&Path>,
) -> Result<WeightedGraph> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let inst = SatInstance::parse(&text).with_context(|| format!("parsing {}", input.display()))?;
    let pre = inst.preprocess()?;
    if pre.instance.num_vars == 0 {
        return Err(BadParameter(
            "preprocessing fixes every variable; there is nothing to reduce".into(),
        )
        .into());
    }
    let mut red = reduce_sat(&pre.instance, eps)?;
    red.forced = pre.forced;
    let mut meta = red.sidecar();
    meta["var_map"] = serde_json::json!(pre.var_map);
    let sidecar_path = match (sidecar, out) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(o)) => {
            let mut s = o.as_os_str().to_owned();
            s.push(".json");
            PathBuf::from(s)
        }
        (None, None) => {
            return Err(BadParameter("`gen sat` needs --out or --sidecar".into()).into());
        }
    };
    fs::write(&sidecar_path, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", sidecar_path.display()))?;
    match perturb_zeros {
        Some(eta) => Ok(red.perturb_zeros(eta)?),
        None => Ok(red.graph),
    }
}

fn emit(g: &WeightedGraph, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_graph(path, g),
        None => {
            print!("{}", write_edge_list(g));
            Ok(())
        }
    }
}
