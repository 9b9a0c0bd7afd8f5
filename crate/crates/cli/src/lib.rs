//! Command-line front end for `twins-core`.
//!
//! Every pair an algorithm returns is re-checked against the input graph
//! before it is reported, so the numbers in a report never come from an
//! algorithm's own bookkeeping.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use twins_core::bench::{bench_gnp, BenchReport};
use twins_core::criteria::perfect_twins;
use twins_core::discrepancy::{almost_twins, almost_twins_extraction, almost_twins_local_search, AlmostTwinsTrace};
use twins_core::forest::forest_twins;
use twins_core::generators::{Family, GenSpec};
use twins_core::oracle::{exact_t, DEFAULT_CAP};
use twins_core::sparse::sparse_twins;
use twins_core::{check_twins, parse_graph, Error, Graph, TwinPair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "twins", version, about = "Find twins (equal-size disjoint vertex sets with equally many edges) in graphs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `gen` defaults to the edge-list text format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Best,
    Extraction,
    LocalSearch,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a candidate pair.
    Check {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        b: Vec<usize>,
    },
    /// Exhaustive t(G) for small graphs.
    Exact {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Low-discrepancy pair covering almost every vertex.
    Approx {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = BranchArg::Best)]
        branch: BranchArg,
    },
    /// Exact twins for sparse graphs.
    Sparse { file: PathBuf },
    /// Detect degree criteria and build perfect twins when one holds.
    Criteria { file: PathBuf },
    /// Twins of size at least ceil(n/2) - 1 in a forest.
    Forest { file: PathBuf },
    /// Generate a graph.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        criterion: u8,
    },
    /// Perfect-twin frequency over seeded G(n, p) samples.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Gnp,
    Star,
    Forest,
    OddCliques,
    Criterion,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Gnp => Family::Gnp,
            FamilyArg::Star => Family::Star,
            FamilyArg::Forest => Family::Forest,
            FamilyArg::OddCliques => Family::OddCliques,
            FamilyArg::Criterion => Family::Criterion,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Upper bound on the discrepancy.
    MaxDisc,
    /// Lower bound on the pair size.
    MinSize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub n: usize,
    pub e: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub edges_a: usize,
    pub edges_b: usize,
    pub size: usize,
    pub disc: usize,
    pub bound: Option<f64>,
    pub bound_kind: Option<BoundKind>,
    pub bound_satisfied: Option<bool>,
    pub trace: Value,
    pub wall_time_ms: u64,
}

impl RunReport {
    /// Recounts the pair on `g`; a pair that is not even well formed is an
    /// internal error.
    fn new(algorithm: &str, g: &Graph, pair: &TwinPair, bound: Option<(f64, BoundKind)>, trace: Value, start: Instant) -> Result<Self, Error> {
        let p = TwinPair::new(g, &pair.a, &pair.b)?;
        if (p.edges_a, p.edges_b) != (pair.edges_a, pair.edges_b) {
            return Err(Error::Internal(format!("{algorithm}: reported edge counts disagree with a recount")));
        }
        let bound_satisfied = bound.map(|(x, kind)| match kind {
            BoundKind::MaxDisc => p.disc as f64 <= x,
            BoundKind::MinSize => p.size() as f64 >= x,
        });
        Ok(RunReport {
            algorithm: algorithm.to_string(),
            n: g.n(),
            e: g.edge_count(),
            size: p.size(),
            disc: p.disc,
            edges_a: p.edges_a,
            edges_b: p.edges_b,
            a: p.a,
            b: p.b,
            bound: bound.map(|b| b.0),
            bound_kind: bound.map(|b| b.1),
            bound_satisfied,
            trace,
            wall_time_ms: start.elapsed().as_millis() as u64,
        })
    }

    fn text(&self) -> String {
        let list = |s: &[usize]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "algorithm: {}\nn: {}  e: {}\nA: {}\nB: {}\nsize: {}  e(A): {}  e(B): {}  disc: {}\n",
            self.algorithm,
            self.n,
            self.e,
            list(&self.a),
            list(&self.b),
            self.size,
            self.edges_a,
            self.edges_b,
            self.disc
        );
        if let (Some(b), Some(k), Some(ok)) = (self.bound, self.bound_kind, self.bound_satisfied) {
            let rel = match k {
                BoundKind::MaxDisc => "disc <=",
                BoundKind::MinSize => "size >=",
            };
            out += &format!("bound: {rel} {b}  satisfied: {ok}\n");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub valid: bool,
    pub violations: Vec<twins_core::graph::Violation>,
    pub size_a: usize,
    pub size_b: usize,
    pub edges_a: Option<usize>,
    pub edges_b: Option<usize>,
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Algorithm(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Construction(_) | Error::Internal(_) => Failure::Algorithm(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    body: String,
    code: i32,
}

fn read_graph(path: &PathBuf, stdin: &mut dyn Read) -> Result<Graph, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?
    };
    parse_graph(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialise") + "\n"
}

fn emit(report: &RunReport, format: Format, code: i32) -> Output {
    let body = match format {
        Format::Json => to_json(report),
        Format::Text => report.text(),
    };
    Output { body, code }
}

fn trace_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("traces serialise")
}

fn approx_bound(t: &AlmostTwinsTrace) -> Option<(f64, BoundKind)> {
    Some((t.bound, BoundKind::MaxDisc))
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> Result<Output, Failure> {
    let start = Instant::now();
    let format = cli.format.unwrap_or(Format::Json);
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Check { file, a, b } => {
            let g = read_graph(&file, stdin)?;
            let c = check_twins(&g, &a, &b);
            let count = |s: &[usize]| g.induced_edge_count(s).ok();
            let report = CheckReport {
                valid: c.valid,
                violations: c.violations,
                size_a: a.len(),
                size_b: b.len(),
                edges_a: count(&a),
                edges_b: count(&b),
            };
            let body = match format {
                Format::Json => to_json(&report),
                Format::Text => {
                    let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
                    format!(
                        "valid: {}\nviolations: {:?}\n|A| = {}  |B| = {}  e(A) = {}  e(B) = {}\n",
                        report.valid,
                        report.violations,
                        report.size_a,
                        report.size_b,
                        show(report.edges_a),
                        show(report.edges_b)
                    )
                }
            };
            Ok(Output { body, code: if report.valid { EXIT_OK } else { EXIT_FAILURE } })
        }
        Command::Exact { file, cap } => {
            let g = read_graph(&file, stdin)?;
            let r = exact_t(&g, cap)?;
            let trace = json!({ "t": r.t, "nodes_examined": r.nodes_examined });
            Ok(emit(&RunReport::new("exact", &g, &r.witness, None, trace, start)?, format, EXIT_OK))
        }
        Command::Approx { file, branch } => {
            let g = read_graph(&file, stdin)?;
            let (name, pair, trace) = match branch {
                BranchArg::Best => {
                    let at = almost_twins(&g)?;
                    let t = match at.chosen {
                        twins_core::discrepancy::Branch::Extraction => &at.extraction.1,
                        twins_core::discrepancy::Branch::LocalSearch => &at.local_search.1,
                    };
                    (t.branch, at.pair.clone(), t.clone())
                }
                BranchArg::Extraction => {
                    let (p, t) = almost_twins_extraction(&g)?;
                    (t.branch, p, t)
                }
                BranchArg::LocalSearch => {
                    let (p, t) = almost_twins_local_search(&g)?;
                    (t.branch, p, t)
                }
            };
            let algorithm = match name {
                twins_core::discrepancy::Branch::Extraction => "approx-extraction",
                twins_core::discrepancy::Branch::LocalSearch => "approx-local-search",
            };
            let report = RunReport::new(algorithm, &g, &pair, approx_bound(&trace), trace_value(&trace), start)?;
            Ok(emit(&report, format, EXIT_OK))
        }
        Command::Sparse { file } => {
            let g = read_graph(&file, stdin)?;
            let (pair, trace) = sparse_twins(&g)?;
            let bound = (trace.bound > 0.0).then_some((trace.bound, BoundKind::MinSize));
            let report = RunReport::new("sparse", &g, &pair, bound, trace_value(&trace), start)?;
            let code = if report.disc == 0 { EXIT_OK } else { EXIT_FAILURE };
            Ok(emit(&report, format, code))
        }
        Command::Criteria { file } => {
            let g = read_graph(&file, stdin)?;
            let attempt = perfect_twins(&g);
            let pair = attempt.pair.clone().unwrap_or_else(TwinPair::empty);
            let report = RunReport::new("criteria", &g, &pair, None, trace_value(&attempt), start)?;
            Ok(emit(&report, format, EXIT_OK))
        }
        Command::Forest { file } => {
            let g = read_graph(&file, stdin)?;
            let (pair, trace) = forest_twins(&g)?;
            let bound = Some(((g.n().div_ceil(2)).saturating_sub(1) as f64, BoundKind::MinSize));
            let report = RunReport::new("forest", &g, &pair, bound, trace_value(&trace), start)?;
            Ok(emit(&report, format, EXIT_OK))
        }
        Command::Gen { family, n, p, m, criterion } => {
            let spec = GenSpec { family: family.into(), n, p, m, criterion, seed };
            let g = spec.generate()?;
            let body = match cli.format.unwrap_or(Format::Text) {
                Format::Text => g.to_edge_list(),
                Format::Json => to_json(&json!({ "spec": spec, "n": g.n(), "edges": g.edges() })),
            };
            Ok(Output { body, code: EXIT_OK })
        }
        Command::Bench { n, p, samples } => {
            let r: BenchReport = bench_gnp(n, p, samples, seed)?;
            let body = match format {
                Format::Json => to_json(&r),
                Format::Text => format!(
                    "G({n}, {p}) samples: {}  seed: {}\nperfect: {} ({:.3})\nsizes: {:?}\n",
                    r.samples, r.seed, r.perfect, r.perfect_twin_fraction, r.size_histogram
                ),
            };
            Ok(Output { body, code: EXIT_OK })
        }
    }
}

/// Runs the command line `args` (including the program name) against the
/// given streams and returns the exit code.
pub fn run_with_io<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, stdin) {
        Ok(out) => {
            let _ = stdout.write_all(out.body.as_bytes());
            out.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Algorithm(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_io(args, &mut std::io::stdin(), &mut std::io::stdout(), &mut std::io::stderr())
}
