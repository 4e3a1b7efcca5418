use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde_json::json;
use spanner_core::rational::{int, to_pq};
use spanner_core::Rational;

use crate::run::reverify;
use crate::util::{exact, rational_arg, read_graph, BadParameter, VerificationFailed};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    pub spanner: PathBuf,
    /// Accept stretch up to `1 + eps`.
    #[arg(long, value_parser = rational_arg)]
    pub eps: Option<Rational>,
    /// Accept stretch up to `t` (instead of `--eps`).
    #[arg(long, value_parser = rational_arg, conflicts_with = "eps")]
    pub t: Option<Rational>,
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let bound = match (&args.eps, &args.t) {
        (Some(e), _) if *e >= int(0) => int(1) + e,
        (None, Some(t)) if *t >= int(1) => t.clone(),
        (None, None) => return Err(BadParameter("verify needs --eps or --t".into()).into()),
        _ => return Err(BadParameter("the stretch bound must be at least 1".into()).into()),
    };
    let g = read_graph(&args.graph)?;
    let checked = reverify(&g, &args.spanner)?;
    let ok = checked.stretch.within(&bound);
    let out = json!({
        "ok": ok,
        "stretch": checked.stretch.to_pq(),
        "bound": to_pq(&bound),
        "weight": exact(&checked.weight),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    if ok {
        Ok(())
    } else {
        Err(VerificationFailed(format!(
            "stretch {} exceeds {}",
            checked.stretch.to_pq(),
            to_pq(&bound)
        ))
        .into())
    }
}
