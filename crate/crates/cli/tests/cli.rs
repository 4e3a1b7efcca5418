use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use spanner_core::instances::gen_greedy_hard;
use spanner_core::io::{parse_edge_list, write_edge_list};
use spanner_core::rational::{int, parse_rational, ratio};
use tempfile::TempDir;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spanner-lab"))
        .args(args)
        .env("RUST_LOG", "error")
        .env_remove("SPANNER_LAB_CELL_CAP")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lab(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON")
}

fn gen_ladder(dir: &TempDir, n: usize, perturb: bool) -> PathBuf {
    let p = path(dir, &format!("ladder{n}{}.g", if perturb { "p" } else { "" }));
    let n = n.to_string();
    let mut args = vec!["gen", "ladder", "--n", &n, "--eps", "1/4", "-o", s(&p)];
    if perturb {
        args.push("--perturb");
    }
    ok(&args);
    p
}

#[test]
fn gen_families_have_expected_sizes() {
    let dir = TempDir::new().unwrap();
    let ladder = gen_ladder(&dir, 6, false);
    let g = parse_edge_list(&fs::read_to_string(ladder).unwrap()).unwrap();
    assert_eq!(g.n(), 14);

    let hard = parse_edge_list(&ok(&["gen", "greedyhard", "--eps", "1/64", "--x", "2"])).unwrap();
    assert_eq!(hard.n(), 21);

    let multi = parse_edge_list(&ok(&["gen", "multiladder", "--k", "2", "--n", "3", "--eps", "1/4"])).unwrap();
    assert!(multi.is_connected());
}

#[test]
fn gen_sat_writes_threshold_sidecar() {
    let dir = TempDir::new().unwrap();
    let formula = path(&dir, "f.txt");
    fs::write(&formula, "vars 2\nclause above 0 1\nclause below 0 1\n").unwrap();
    let graph = path(&dir, "sat.g");
    ok(&["gen", "sat", "--in", s(&formula), "--eps", "1/10", "-o", s(&graph)]);
    let meta = json(&fs::read_to_string(path(&dir, "sat.g.json")).unwrap());
    // 2ε·4 literals + 2(5+2ε)·2
    assert_eq!(meta["W"], "108/5");
    assert_eq!(meta["h"], serde_json::json!([1, 1]));
    assert!(meta["labels"]["s_0"].is_number());

    let report = json(&ok(&["run", "oracle", s(&graph), "--eps", "1/10", "-o", s(&path(&dir, "opt.g"))]));
    let w = parse_rational(report["weight"]["exact"].as_str().unwrap()).unwrap();
    assert!(w <= ratio(108, 5));

    let out = lab(&["run", "prune", s(&graph), "--eps", "1/10", "-o", s(&path(&dir, "x.g"))]);
    assert_eq!(out.status.code(), Some(3));
    let perturbed = path(&dir, "satp.g");
    ok(&["gen", "sat", "--in", s(&formula), "--eps", "1/10", "--perturb-zeros", "1/100", "-o", s(&perturbed)]);
    let g = parse_edge_list(&fs::read_to_string(perturbed).unwrap()).unwrap();
    assert!(g.edges().iter().all(|e| e.w > int(0)));
}

#[test]
fn run_prune_reaches_ladder_optimum_deterministically() {
    let dir = TempDir::new().unwrap();
    let ladder = gen_ladder(&dir, 6, false);
    let (a, b) = (path(&dir, "a.g"), path(&dir, "b.g"));
    let report = json(&ok(&["run", "prune", s(&ladder), "--eps", "1/4", "-o", s(&a)]));
    ok(&["run", "prune", s(&ladder), "--eps", "1/4", "-o", s(&b)]);
    assert_eq!(report["weight"]["exact"], "5/2");
    assert_eq!(report["algorithm"], "prune");
    assert_eq!(report["within_bound"], true);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let verified = json(&ok(&["verify", s(&ladder), s(&a), "--eps", "11/4"]));
    assert_eq!(verified["weight"]["exact"], report["weight"]["exact"]);
    assert_eq!(verified["stretch"], report["stretch"]);
}

#[test]
fn run_greedy_and_iterate_from_init() {
    let dir = TempDir::new().unwrap();
    let ladder = gen_ladder(&dir, 6, true);
    let greedy = path(&dir, "greedy.g");
    let report = json(&ok(&["run", "greedy", s(&ladder), "--t", "5/4", "-o", s(&greedy)]));
    let w = parse_rational(report["weight"]["exact"].as_str().unwrap()).unwrap();
    // All rungs but the first, plus the spokes.
    assert!(w > ratio(15, 2) && w < ratio(31, 4));

    let exact = gen_ladder(&dir, 6, false);
    let exact_g = parse_edge_list(&fs::read_to_string(&exact).unwrap()).unwrap();
    let kept = parse_edge_list(&fs::read_to_string(&greedy).unwrap()).unwrap();
    let start = exact_g.subgraph(kept.edges().iter().map(|e| exact_g.find_edge(e.u, e.v).unwrap()));
    let init = path(&dir, "init.g");
    fs::write(&init, write_edge_list(&start)).unwrap();
    let out = path(&dir, "it.g");
    let report = json(&ok(&[
        "run", "iterate", s(&exact), "--eps", "1/4", "--init", s(&init), "-o", s(&out),
    ]));
    assert_eq!(report["weight"]["exact"], "5/2");
    assert_eq!(report["stretch"], "5/4");
    assert!(!report["details"]["iterations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let ladder = gen_ladder(&dir, 4, false);
    let v = json(&ok(&["verify", s(&ladder), s(&ladder), "--eps", "0"]));
    assert_eq!(v["ok"], true);
    assert_eq!(v["stretch"], "1/1");

    let g = parse_edge_list(&fs::read_to_string(&ladder).unwrap()).unwrap();
    let star = g.subgraph((0..g.m()).filter(|&id| g.edge(id).w != int(1)));
    let star_path = path(&dir, "star.g");
    fs::write(&star_path, write_edge_list(&star)).unwrap();
    let out = lab(&["verify", s(&ladder), s(&star_path), "--eps", "1/100"]);
    assert_eq!(out.status.code(), Some(2));

    let hard = gen_greedy_hard(&ratio(1, 64), &int(2)).unwrap();
    let (gp, wp) = (path(&dir, "hard.g"), path(&dir, "witness.g"));
    fs::write(&gp, write_edge_list(&hard.graph)).unwrap();
    fs::write(&wp, write_edge_list(&hard.witness_spanner())).unwrap();
    assert_eq!(json(&ok(&["verify", s(&gp), s(&wp), "--eps", "1/64"]))["ok"], true);
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = TempDir::new().unwrap();
    let ladder = gen_ladder(&dir, 3, false);
    let x = path(&dir, "x.g");
    assert_eq!(lab(&["gen", "ladder", "--n", "0", "--eps", "1/4"]).status.code(), Some(3));
    assert_eq!(lab(&["run", "bogus", s(&ladder), "-o", s(&x)]).status.code(), Some(3));
    assert_eq!(lab(&["run", "prune", s(&ladder), "-o", s(&x)]).status.code(), Some(3));
    assert_eq!(lab(&["run", "oracle", "missing.g", "--eps", "1/4", "-o", s(&x)]).status.code(), Some(3));
    assert_eq!(
        lab(&["run", "oracle", s(&ladder), "--eps", "1/4", "--cap", "1", "-o", s(&x)]).status.code(),
        Some(4)
    );
    let capped = Command::new(env!("CARGO_BIN_EXE_spanner-lab"))
        .args(["run", "prune", s(&ladder), "--eps", "1/4", "-o", s(&x)])
        .env("SPANNER_LAB_CELL_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(4));
    assert_eq!(lab(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_tabulates_manifest_rows() {
    let dir = TempDir::new().unwrap();
    let manifest = path(&dir, "m.txt");
    fs::write(
        &manifest,
        "# ladders\n\
         ladder:n=2,eps=1/4 prune eps=1/4\n\
         ladder:n=4,eps=1/4 prune eps=1/4\n\
         ladder:n=6,eps=1/4 prune eps=1/4\n\
         greedyhard:eps=1/64,x=2 greedy t=33/32 oracle=0\n\
         greedyhard:eps=1/64,x=2 iterate eps=1/64 oracle=0\n",
    )
    .unwrap();
    let csv_path = path(&dir, "out.csv");
    ok(&["bench", s(&manifest), "-o", s(&csv_path)]);
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for row in &rows[..3] {
        assert_eq!(&row[col("ratio")], "1/1");
        assert_eq!(&row[col("status")], "ok");
    }
    let greedy = parse_rational(&rows[3][col("weight")]).unwrap();
    let pruned = parse_rational(&rows[4][col("weight")]).unwrap();
    assert!(greedy / pruned > int(2));
    assert!(rows[3][col("weight_decimal")].parse::<f64>().is_ok());

    let empty = path(&dir, "empty.txt");
    fs::write(&empty, "").unwrap();
    let text = ok(&["bench", s(&empty)]);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("row,instance,algorithm"));
}
