use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use spanner_core::io::{parse_edge_list, write_edge_list};
use spanner_core::prune::{PruneOptions, DEFAULT_CELL_CAP};
use spanner_core::rational::{parse_rational, to_f64, to_pq};
use spanner_core::{Error, Rational, WeightedGraph};

pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_PARAM: u8 = 3;
pub const EXIT_CAP: u8 = 4;
const EXIT_OTHER: u8 = 1;

pub const CELL_CAP_ENV: &str = "SPANNER_LAB_CELL_CAP";

/// Raised when a result does not verify.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct VerificationFailed(pub String);

/// Raised for bad command-line values that clap cannot check.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct BadParameter(pub String);

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = if error.downcast_ref::<VerificationFailed>().is_some() {
            EXIT_VERIFY
        } else if error.downcast_ref::<BadParameter>().is_some()
            || error.downcast_ref::<std::io::Error>().is_some()
        {
            EXIT_PARAM
        } else if let Some(core) = error.downcast_ref::<Error>() {
            match core {
                Error::CellCapExceeded { .. } | Error::OracleCapExceeded { .. } => EXIT_CAP,
                Error::Overflow(_) => EXIT_OTHER,
                _ => EXIT_PARAM,
            }
        } else {
            EXIT_OTHER
        };
        Failure { code, error }
    }
}

pub fn rational_arg(text: &str) -> std::result::Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

pub fn read_graph(path: &Path) -> Result<WeightedGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_graph(path: &Path, g: &WeightedGraph) -> Result<()> {
    fs::write(path, write_edge_list(g)).with_context(|| format!("writing {}", path.display()))
}

pub fn prune_options() -> Result<PruneOptions> {
    let cell_cap = match std::env::var(CELL_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| BadParameter(format!("{CELL_CAP_ENV}={v} is not a nonnegative integer")))?,
        Err(_) => DEFAULT_CELL_CAP,
    };
    Ok(PruneOptions { cell_cap })
}

/// `"p/q"` plus a display decimal.
pub fn exact(r: &Rational) -> serde_json::Value {
    serde_json::json!({ "exact": to_pq(r), "decimal": to_f64(r) })
}
