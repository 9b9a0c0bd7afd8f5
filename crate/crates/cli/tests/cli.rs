use std::io::Write;
use std::process::Command;

use tempfile::NamedTempFile;
use twins_cli::{run_with_io, CheckReport, RunReport};
use twins_core::{check_twins, parse_graph};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn twins(args: &[&str], stdin: &str) -> Run {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("twins").chain(args.iter().copied());
    let code = run_with_io(argv, &mut input, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn graph_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const P4: &str = "4 3\n0 1\n1 2\n2 3\n";
const STAR5: &str = "5 4\n0 1\n0 2\n0 3\n0 4\n";

fn report(r: &Run) -> RunReport {
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

/// The emitted numbers must agree with a recount on the emitted sets.
fn assert_recount(text: &str, rep: &RunReport) {
    let g = parse_graph(text).unwrap();
    assert_eq!((rep.n, rep.e), (g.n(), g.edge_count()));
    assert_eq!(rep.edges_a, g.induced_edge_count(&rep.a).unwrap());
    assert_eq!(rep.edges_b, g.induced_edge_count(&rep.b).unwrap());
    assert_eq!(rep.size, rep.a.len());
    assert_eq!(rep.disc, rep.edges_a.abs_diff(rep.edges_b));
    if rep.disc == 0 {
        assert!(check_twins(&g, &rep.a, &rep.b).valid);
    }
}

#[test]
fn check_valid_pair() {
    let f = graph_file(P4);
    let r = twins(&["check", f.path().to_str().unwrap(), "--a", "0,1", "--b", "2,3"], "");
    assert_eq!(r.code, 0);
    let c: CheckReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(c.valid);
    assert_eq!((c.edges_a, c.edges_b), (Some(1), Some(1)));
}

#[test]
fn check_invalid_pair_fails() {
    let f = graph_file(P4);
    let r = twins(&["check", f.path().to_str().unwrap(), "--a", "0,1", "--b", "1,2"], "");
    assert_eq!(r.code, 1);
    let c: CheckReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(!c.valid);
}

#[test]
fn exact_refuses_large_graphs() {
    let mut text = String::from("20 0\n");
    text.push_str("# no edges\n");
    let f = graph_file(&text);
    let r = twins(&["exact", f.path().to_str().unwrap()], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("cap"), "{}", r.stderr);
}

#[test]
fn exact_on_path() {
    let f = graph_file(P4);
    let rep = report(&twins(&["exact", f.path().to_str().unwrap()], ""));
    assert_eq!(rep.size, 2);
    assert_eq!(rep.trace["t"], 2);
    assert_recount(P4, &rep);
}

#[test]
fn forest_on_star() {
    let f = graph_file(STAR5);
    let rep = report(&twins(&["forest", f.path().to_str().unwrap()], ""));
    assert_eq!(rep.size, 2);
    assert_eq!(rep.disc, 0);
    assert_eq!(rep.bound_satisfied, Some(true));
    assert_recount(STAR5, &rep);
}

#[test]
fn forest_rejects_cycles() {
    let r = twins(&["forest", "-"], "3 3\n0 1\n1 2\n0 2\n");
    assert_eq!(r.code, 2);
}

#[test]
fn parse_errors_exit_two() {
    let r = twins(&["forest", "-"], "3 2\n0 1\n1 1\n");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    assert_eq!(twins(&["exact", "/nonexistent/graph.txt"], "").code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(twins(&["frobnicate"], "").code, 2);
    assert_eq!(twins(&["exact"], "").code, 2);
    assert_eq!(twins(&["bench", "--n", "7", "--samples", "2"], "").code, 2);
    assert_eq!(twins(&["exact", "-", "--format", "yaml"], P4).code, 2);
}

#[test]
fn help_exits_zero() {
    let r = twins(&["--help"], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("forest"));
}

#[test]
fn approx_branches_report_their_bounds() {
    let gen = twins(&["gen", "--family", "gnp", "--n", "40", "--p", "0.3", "--seed", "9"], "");
    assert_eq!(gen.code, 0);
    for branch in ["best", "extraction", "local-search"] {
        let rep = report(&twins(&["approx", "-", "--branch", branch], &gen.stdout));
        assert_recount(&gen.stdout, &rep);
        assert_eq!(rep.bound_satisfied, Some(true), "{branch}");
    }
}

#[test]
fn sparse_and_criteria_recount() {
    let gen = twins(&["gen", "--family", "gnp", "--n", "200", "--p", "0.01", "--seed", "2"], "");
    let rep = report(&twins(&["sparse", "-"], &gen.stdout));
    assert_eq!(rep.disc, 0);
    assert_recount(&gen.stdout, &rep);

    let gen = twins(&["gen", "--family", "criterion", "--criterion", "2", "--n", "16", "--seed", "5"], "");
    let rep = report(&twins(&["criteria", "-"], &gen.stdout));
    assert_eq!((rep.size, rep.disc), (8, 0));
    assert_recount(&gen.stdout, &rep);
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let args = ["gen", "--family", "forest", "--n", "30", "--seed", "17"];
    let (x, y) = (twins(&args, ""), twins(&args, ""));
    assert_eq!(x.stdout, y.stdout);
    let g = parse_graph(&x.stdout).unwrap();
    assert!(g.is_forest() && g.n() == 30);

    let j = twins(&["gen", "--family", "odd-cliques", "--m", "2", "--format", "json"], "");
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["n"], 4);
}

#[test]
fn reports_round_trip_through_json() {
    let gen = twins(&["gen", "--family", "forest", "--n", "25", "--seed", "3"], "");
    for cmd in ["forest", "approx", "sparse", "criteria"] {
        let r = twins(&[cmd, "-"], &gen.stdout);
        let rep = report(&r);
        let again: RunReport = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(again, rep, "{cmd}");
    }
}

#[test]
fn bench_is_deterministic() {
    let args = ["bench", "--n", "12", "--p", "0.5", "--samples", "50", "--seed", "7"];
    let (x, y) = (twins(&args, ""), twins(&args, ""));
    assert_eq!(x.code, 0);
    assert_eq!(x.stdout, y.stdout);
    let empty = twins(&["bench", "--n", "4", "--p", "0", "--samples", "10", "--seed", "1"], "");
    let v: serde_json::Value = serde_json::from_str(&empty.stdout).unwrap();
    assert_eq!(v["perfect_twin_fraction"], 1.0);
}

#[test]
fn text_format() {
    let r = twins(&["forest", "-", "--format", "text"], STAR5);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("size: 2"));
}

#[test]
fn binary_reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twins"))
        .args(["check", "-", "--a", "0,3", "--b", "1,2"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(P4.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let c: CheckReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!c.valid);
}
