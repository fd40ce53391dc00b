use std::path::{Path, PathBuf};

use pstgraph::cli::{run_with, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use pstgraph::PartitionedGraph;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn pst(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pstgraph").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn json(r: &Run) -> Value {
    assert_eq!(r.code, EXIT_OK, "stderr: {}", r.err);
    serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}", r.out))
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &TempDir, family: &str, dim: Option<&str>, name: &str) -> PathBuf {
    let p = path(dir, name);
    let mut args = vec!["build", family, "-o", s(&p)];
    if let Some(d) = dim {
        args.extend(["--dim", d]);
    }
    let r = pst(&args);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    p
}

#[test]
fn build_validate_verify() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "p2-chain", Some("3"), "c3.json");
    let v = json(&pst(&["validate", s(&g)]));
    assert_eq!(v["violations"], Value::Array(vec![]));
    let cert = json(&pst(&["verify", s(&g)]));
    assert_eq!(cert["verdict"], "pst");
    assert!((cert["transfer_time"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let explicit = json(&pst(&["verify", s(&g), "--explicit"]));
    assert_eq!(explicit["size"], 8);
    assert_eq!(explicit["verdict"], "pst");
}

#[test]
fn invalid_graph_exits_one() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "bad.json");
    let bad = r#"{"nodes":[{"id":"a","occupancy":1},{"id":"b","occupancy":2}],
                  "edges":[{"u":"a","v":"b","du":1,"dv":1}],"input":"a","output":"b"}"#;
    std::fs::write(&p, bad).unwrap();
    let r = pst(&["validate", s(&p)]);
    assert_eq!(r.code, EXIT_FAILED);
    assert!(r.out.contains("inconsistent"), "{}", r.out);
    let r = pst(&["reduce", s(&p)]);
    assert_eq!(r.code, EXIT_FAILED);
    assert!(r.err.starts_with("error:"));
}

#[test]
fn usage_errors() {
    assert_eq!(pst(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(pst(&["build"]).code, EXIT_USAGE);
    assert_eq!(pst(&["--help"]).code, EXIT_OK);
    assert_eq!(pst(&["build", "no-such-family"]).code, EXIT_FAILED);
    assert_eq!(pst(&["build", "p2-chain"]).code, EXIT_FAILED);
}

#[test]
fn reduce_writes_trace_that_replays() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "p2-chain", Some("6"), "c6.json");
    let trace = path(&dir, "t.jsonl");
    let out = path(&dir, "r.json");
    let summary = json(&pst(&["reduce", s(&g), "--trace", s(&trace), "-o", s(&out)]));
    assert_eq!(summary["final_vertex_count"], "49");
    assert!(summary.get("graph").is_none());
    let replayed = pst(&["replay", s(&g), s(&trace)]);
    assert_eq!(replayed.code, EXIT_OK, "{}", replayed.err);
    let a = PartitionedGraph::from_json(&replayed.out).unwrap();
    let b = PartitionedGraph::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(a, b);

    // a trace recorded on another graph is refused
    let other = build(&dir, "p2-chain", Some("4"), "c4.json");
    assert_eq!(pst(&["replay", s(&other), s(&trace)]).code, EXIT_FAILED);
}

#[test]
fn greedy_reduce_prints_graph_inline() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "p3-grid", Some("5"), "grid.json");
    let summary = json(&pst(&["reduce", s(&g), "--strategy", "greedy"]));
    assert_eq!(summary["initial_vertex_count"], "243");
    assert_eq!(summary["final_vertex_count"], "198");
    assert!(summary["graph"]["nodes"].is_array());
}

#[test]
fn lift_then_scoped_reduce() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "p2-chain", Some("2"), "c2.json");
    let lifted = path(&dir, "l.json");
    assert_eq!(pst(&["lift", s(&g), "-o", s(&lifted)]).code, EXIT_OK);
    let lg = PartitionedGraph::from_json(&std::fs::read_to_string(&lifted).unwrap()).unwrap();
    assert_eq!(lg.delta, Some(8));
    assert_eq!(lg.vertex_count(), 6u32.into());
    let summary = json(&pst(&["reduce", s(&lifted), "--scope", "odd", "--strategy", "greedy"]));
    assert_eq!(summary["final_vertex_count"], "6");
}

#[test]
fn split_lists_and_writes() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "p2-chain", Some("4"), "c4.json");
    let out = path(&dir, "split.json");
    let listing = json(&pst(&["split", s(&g), "--node", "2", "-o", s(&out)]));
    assert_eq!(listing["candidates"][0]["total"], 3);
    let stats = json(&pst(&["stats", s(&out)]));
    assert_eq!(stats["vertices"], "13");
    assert_eq!(stats["distance"], 4);
    assert_eq!(pst(&["split", s(&g), "--node", "0"]).code, EXIT_FAILED);
    assert_eq!(pst(&["split", s(&g), "--node", "2", "--pick", "99", "-o", s(&out)]).code, EXIT_FAILED);
}

#[test]
fn product_and_symmetrize() {
    let dir = TempDir::new().unwrap();
    let c = build(&dir, "coutinho", None, "c.json");
    let p = build(&dir, "p2-chain", Some("1"), "p.json");
    let prod = path(&dir, "prod.json");
    assert_eq!(pst(&["product", s(&c), s(&p), "-o", s(&prod)]).code, EXIT_OK);
    let st = json(&pst(&["stats", s(&prod)]));
    assert_eq!(st["vertices"], "26");
    assert_eq!(st["distance"], 5);

    let sq = pst(&["symmetrize", s(&p)]);
    let g = PartitionedGraph::from_json(&sq.out).unwrap();
    let occ: Vec<u64> = g.nodes.iter().map(|n| n.occupancy).collect();
    assert_eq!(occ, vec![1, 2, 1]);

    // product needs equal deltas
    let grid = build(&dir, "p3-grid", Some("1"), "g.json");
    assert_eq!(pst(&["product", s(&c), s(&grid)]).code, EXIT_FAILED);
}

#[test]
fn expand_formats() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "p2-chain", Some("2"), "c2.json");
    let edges = pst(&["expand", s(&g)]);
    assert!(edges.out.starts_with("N 4 IN 0 OUT 3"), "{}", edges.out);
    assert_eq!(edges.out.lines().count(), 5);
    let dot = pst(&["expand", s(&g), "--format", "dot"]);
    assert!(dot.out.contains("graph"));
    let ex = path(&dir, "c2.edges");
    std::fs::write(&ex, &edges.out).unwrap();
    assert_eq!(json(&pst(&["verify", s(&ex), "--explicit"]))["verdict"], "pst");
    let q = json(&pst(&["quotient", s(&g)]));
    assert_eq!(q["size"], 3);
}

#[test]
fn bounds_helper_r_and_column_search() {
    let b = json(&pst(&["bounds", "--dim", "4"]));
    assert_eq!(b["edge_bound"]["min_edges"], "5");
    let b = json(&pst(&["bounds", "--dim", "5", "--delta", "2", "--degree", "4"]));
    assert_eq!(b["parity"]["accepted"], false);
    assert_eq!(pst(&["bounds", "--dim", "0"]).code, EXIT_FAILED);

    let r = json(&pst(&["helper-r", "--set", "0,1,2,3"]));
    assert_eq!(r["r"], "-3/4");
    assert_eq!(r["denominator_even"], true);
    let r = json(&pst(&["helper-r", "--set", "-3,-2"]));
    assert_eq!(r["set"], serde_json::json!([-3, -2]));
    assert_eq!(r["r"], "1/2");
    assert_eq!(r["denominator_even"], Value::Null);
    // 1/(-3+1) * -1 + 1/(-1+3) * -1 = 0
    assert_eq!(pst(&["helper-r", "--set", "-3,-1"]).code, EXIT_FAILED);

    let c = json(&pst(&["search-column", "--dim", "4"]));
    assert_eq!(c["k"], 3);
    assert_eq!(pst(&["search-column", "--dim", "0"]).code, EXIT_FAILED);
}

#[test]
fn stevanovic_is_revival_only() {
    let dir = TempDir::new().unwrap();
    let g = build(&dir, "stevanovic", Some("5"), "s.json");
    assert_eq!(json(&pst(&["verify", s(&g)]))["verdict"], "revival-only");
}
