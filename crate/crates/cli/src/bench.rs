//! Manifest format, one run per line (`#` starts a comment):
//!
//! ```text
//! <instance> <algorithm> [key=value ...]
//! ladder:n=6,eps=1/4          prune  eps=1/4
//! greedyhard:eps=1/64,x=2     greedy t=33/32
//! graphs/tiny.g               oracle eps=1/2 cap=20
//! ```
//!
//! An instance is a generator (`ladder`, `multiladder`, `greedyhard` with
//! comma-separated parameters) or an edge-list path relative to the manifest.
//! Keys: `eps`, `t`, `init` (path), `cap` (oracle edge cap) and `oracle`
//! (`0` skips the comparison with the exact optimum).

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::ValueEnum;
use spanner_core::instances::{gen_greedy_hard, gen_ladder, gen_multiladder};
use spanner_core::oracle::{exact_opt_spanner_with_cap, DEFAULT_ORACLE_CAP};
use spanner_core::rational::{int, parse_rational, to_f64, to_pq};
use spanner_core::{stretch, Rational, WeightedGraph};

use crate::run::{execute, reverify, Algorithm, Params};
use crate::util::{prune_options, read_graph, write_graph, BadParameter};

const HEADER: [&str; 16] = [
    "row",
    "instance",
    "algorithm",
    "params",
    "n",
    "m",
    "weight",
    "weight_decimal",
    "stretch",
    "stretch_decimal",
    "oracle_weight",
    "oracle_weight_decimal",
    "ratio",
    "ratio_decimal",
    "runtime_ms",
    "status",
];

struct Row {
    line: usize,
    instance: String,
    algorithm: Algorithm,
    params: BTreeMap<String, String>,
}

fn bad(line: usize, msg: impl Into<String>) -> anyhow::Error {
    BadParameter(format!("manifest line {line}: {}", msg.into())).into()
}

fn parse_manifest(text: &str) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split_whitespace();
        let instance = fields.next().expect("non-empty line").to_string();
        let algo = fields
            .next()
            .ok_or_else(|| bad(line, "missing algorithm"))?;
        let algorithm =
            Algorithm::from_str(algo, true).map_err(|_| bad(line, format!("unknown algorithm `{algo}`")))?;
        let mut params = BTreeMap::new();
        for kv in fields {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(line, format!("expected key=value, got `{kv}`")))?;
            if !matches!(k, "eps" | "t" | "init" | "cap" | "oracle") {
                return Err(bad(line, format!("unknown key `{k}`")));
            }
            params.insert(k.to_string(), v.to_string());
        }
        rows.push(Row {
            line,
            instance,
            algorithm,
            params,
        });
    }
    Ok(rows)
}

fn generator_params(source: &str) -> Result<HashMap<&str, &str>> {
    source.split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| kv.split_once('=').ok_or_else(|| anyhow!("expected key=value, got `{kv}`")))
        .collect()
}

fn load_instance(source: &str, base: &Path) -> Result<WeightedGraph> {
    let Some((family, rest)) = source.split_once(':') else {
        return read_graph(&base.join(source));
    };
    let kv = generator_params(rest)?;
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| anyhow!("`{family}` needs `{k}`"));
    let rat = |k: &str| -> Result<Rational> { Ok(parse_rational(get(k)?)?) };
    let num = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| anyhow!("`{k}` must be an integer")) };
    let perturb = kv.get("perturb").is_some_and(|v| *v == "1" || *v == "true");
    Ok(match family {
        "ladder" => gen_ladder(num("n")?, &rat("eps")?, perturb)?,
        "multiladder" => gen_multiladder(num("k")?, num("n")?, &rat("eps")?, perturb)?,
        "greedyhard" => gen_greedy_hard(&rat("eps")?, &rat("x")?)?.graph,
        other => return Err(anyhow!("unknown generator `{other}`")),
    })
}

fn row_params(row: &Row, base: &Path, g: &WeightedGraph) -> Result<Params> {
    let rat = |k: &str| -> Result<Option<Rational>> {
        row.params
            .get(k)
            .map(|v| parse_rational(v).map_err(|e| bad(row.line, e.to_string())))
            .transpose()
    };
    let init = match row.params.get("init") {
        Some(p) => {
            let h = read_graph(&base.join(p))?;
            g.edge_ids_of(&h)?;
            Some(h)
        }
        None => None,
    };
    let cap = match row.params.get("cap") {
        Some(v) => v.parse().map_err(|_| bad(row.line, "cap must be an integer"))?,
        None => DEFAULT_ORACLE_CAP,
    };
    Ok(Params {
        eps: rat("eps")?,
        t: rat("t")?,
        init,
        cap,
        prune: prune_options()?,
    })
}

fn decimal(r: &Rational) -> String {
    format!("{:.6}", to_f64(r))
}

pub fn cmd_bench(manifest: &Path, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let rows = parse_manifest(&text)?;
    let base = manifest.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));

    let sink: Box<dyn std::io::Write> = match out {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    csv.write_record(HEADER)?;

    let mut oracle_cache: HashMap<(String, String), Option<Rational>> = HashMap::new();
    for (index, row) in rows.iter().enumerate() {
        let params_text = row
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut record = vec![
            index.to_string(),
            row.instance.clone(),
            row.algorithm.name().to_string(),
            params_text,
        ];
        match bench_row(row, &base, &mut oracle_cache) {
            Ok(cells) => {
                record.extend(cells);
                record.push("ok".into());
            }
            Err(e) => {
                log::warn!("manifest line {}: {e:#}", row.line);
                record.extend(std::iter::repeat_n(String::new(), HEADER.len() - 5));
                record.push(format!("error: {e:#}"));
            }
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}

/// Columns from `n` through `runtime_ms`.
fn bench_row(
    row: &Row,
    base: &Path,
    oracle_cache: &mut HashMap<(String, String), Option<Rational>>,
) -> Result<Vec<String>> {
    let g = load_instance(&row.instance, base).map_err(|e| bad(row.line, format!("{e:#}")))?;
    let params = row_params(row, base, &g)?;
    let start = Instant::now();
    let outcome = execute(&g, row.algorithm, &params)?;
    let runtime = start.elapsed().as_secs_f64() * 1e3;

    // Verify from the written artifact rather than the in-memory result.
    let dir = std::env::temp_dir().join(format!("spanner-lab-bench-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("line{}.g", row.line));
    write_graph(&path, &outcome.spanner)?;
    let checked = reverify(&g, &path)?;
    let _ = fs::remove_file(&path);
    debug_assert_eq!(checked.stretch, stretch(&g, &outcome.spanner)?);

    let compare = row.params.get("oracle").is_none_or(|v| v != "0");
    let target_eps = match (row.algorithm, &params.t, &params.eps) {
        (Algorithm::Greedy, Some(t), _) => Some(t - int(1)),
        (_, _, Some(e)) => Some(e.clone()),
        _ => None,
    };
    let oracle = match (compare, target_eps) {
        (true, Some(eps)) => oracle_cache
            .entry((row.instance.clone(), to_pq(&eps)))
            .or_insert_with(|| match exact_opt_spanner_with_cap(&g, &eps, params.cap) {
                Ok(res) => Some(res.opt_weight),
                Err(e) => {
                    log::info!("no oracle value for {}: {e}", row.instance);
                    None
                }
            })
            .clone(),
        _ => None,
    };
    let ratio = oracle
        .as_ref()
        .filter(|o| **o > int(0))
        .map(|o| &checked.weight / o);
    Ok(vec![
        g.n().to_string(),
        g.m().to_string(),
        to_pq(&checked.weight),
        decimal(&checked.weight),
        checked.stretch.to_pq(),
        checked.stretch.finite().map(decimal).unwrap_or_default(),
        oracle.as_ref().map(to_pq).unwrap_or_default(),
        oracle.as_ref().map(decimal).unwrap_or_default(),
        ratio.as_ref().map(to_pq).unwrap_or_default(),
        ratio.as_ref().map(decimal).unwrap_or_default(),
        format!("{runtime:.3}"),
    ])
}
