//! The `pstgraph` command line. Reports go to stdout as JSON.
//!
//! Exit codes: 0 success, 1 failed precondition or invalid input, 2 internal
//! error, 64 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, BoundsError};
use crate::catalog::{Built, CatalogError, Family, FamilySpec};
use crate::explicit::ExplicitGraph;
use crate::partition::{GraphError, PartitionedGraph};
use crate::rewrite::{self, RewriteError, RewriteTrace, SearchOptions, Strategy};
use crate::spectral::{self, CertifyOptions, SpectralError};
use crate::weighted::WeightedGraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "pstgraph", version, about = "Build, shrink and certify perfect state transfer graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Edges,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    All,
    /// Only the side of the bipartition away from the ends.
    Odd,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a catalog graph.
    Build {
        family: String,
        #[arg(long)]
        dim: Option<u64>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the partition conditions.
    Validate { graph: PathBuf },
    /// Weighted quotient graph.
    Quotient {
        graph: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Explicit graph behind a partition.
    Expand {
        graph: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "edges")]
        format: Format,
    },
    /// Spectral certificate for a partitioned graph's quotient, a weighted graph, or an edge list.
    Verify {
        graph: PathBuf,
        #[arg(long)]
        explicit: bool,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Search for fewer vertices with the manipulation rules.
    Reduce {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 2_000_000)]
        budget: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        factors: Vec<u64>,
        #[arg(long, value_enum, default_value = "all")]
        scope: ScopeArg,
        #[arg(long, default_value_t = 64)]
        reverse_cap: u64,
        #[arg(long)]
        no_reverse: bool,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Double delta via the bipartition.
    Lift {
        graph: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// List node splits; write the chosen one with -o.
    Split {
        graph: PathBuf,
        #[arg(long)]
        node: String,
        #[arg(long, default_value_t = 3)]
        max_parts: usize,
        #[arg(long, default_value_t = 0)]
        pick: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Cartesian product of two partitioned graphs.
    Product {
        first: PathBuf,
        second: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Square of a graph with the coordinate swap merged.
    Symmetrize {
        graph: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Size, degree, delta, efficiency and bound verdicts.
    Stats { graph: PathBuf },
    /// Bounds for a transfer distance.
    Bounds {
        #[arg(long)]
        dim: u64,
        #[arg(long)]
        delta: Option<u64>,
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Exact R and its 2-adic valuation for a set of integers.
    HelperR {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        set: Vec<i64>,
    },
    /// Smallest row count for the all-ones eigenvector condition.
    SearchColumn {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Re-apply a trace and emit the resulting graph.
    Replay {
        graph: PathBuf,
        trace: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Rejected(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Rejected(_) => EXIT_FAILED,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }
}

macro_rules! rejected {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Rejected(e.to_string())
            }
        }
    )*};
}
rejected!(GraphError, RewriteError, CatalogError, BoundsError);

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::ConvergenceFailure(_) => Failure::Internal(e.to_string()),
            other => Failure::Rejected(other.to_string()),
        }
    }
}

/// Runs with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let msg = match &f {
                Failure::Rejected(m) | Failure::Internal(m) => m,
            };
            let _ = writeln!(err, "error: {msg}");
            f.code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Rejected(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PartitionedGraph, Failure> {
    Ok(PartitionedGraph::from_json(&read(path)?)?)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to `out` when there is no path.
fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Rejected(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::Internal(e.to_string())),
    }
}

fn render(g: &PartitionedGraph, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => g.to_json(),
        Format::Edges => g.expand()?.to_edges_format(),
        Format::Dot => g.expand()?.to_dot(),
    })
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Build { family, dim, output, format } => {
            let family: Family = family.parse()?;
            match FamilySpec::new(family, dim).build()? {
                Built::Partitioned(g) => emit(&render(&g, format)?, output.as_deref(), out)?,
                Built::Weighted(w) => match format {
                    Format::Json => emit(&to_json(&w)?, output.as_deref(), out)?,
                    _ => return Err(Failure::Rejected(format!("{family} is a weighted graph; only json output applies"))),
                },
            }
        }
        Command::Validate { graph } => {
            let report = load(&graph)?.validate();
            emit(&to_json(&report)?, None, out)?;
            if !report.is_valid() {
                return Ok(EXIT_FAILED);
            }
        }
        Command::Quotient { graph, output } => emit(&to_json(&load(&graph)?.quotient()?)?, output.as_deref(), out)?,
        Command::Expand { graph, output, format } => {
            let g = load(&graph)?;
            let text = match format {
                Format::Json => to_json(&g.expand()?)?,
                f => render(&g, f)?,
            };
            emit(&text, output.as_deref(), out)?;
        }
        Command::Verify { graph, explicit, tol } => {
            let weighted = load_weighted(&graph, explicit)?;
            let report = spectral::certify_with(&weighted, &CertifyOptions { tol, ..Default::default() })?;
            emit(&to_json(&report)?, None, out)?;
        }
        Command::Reduce { graph, strategy, budget, factors, scope, reverse_cap, no_reverse, trace, output } => {
            let g = load(&graph)?;
            let scope = match scope {
                ScopeArg::All => None,
                ScopeArg::Odd => Some(g.odd_side().ok_or(RewriteError::NotBipartite)?),
            };
            let opts = SearchOptions {
                strategy: match strategy {
                    StrategyArg::Greedy => Strategy::Greedy,
                    StrategyArg::Exhaustive => Strategy::Exhaustive,
                },
                factors,
                budget,
                reverse_cap,
                allow_reverse: !no_reverse,
                scope,
            };
            let outcome = rewrite::reduce_search(&g, &opts)?;
            if let Some(p) = &trace {
                emit(&outcome.trace.to_jsonl(), Some(p), out)?;
            }
            if let Some(p) = &output {
                emit(&outcome.graph.to_json(), Some(p), out)?;
            }
            let mut summary = json!({
                "initial_vertex_count": g.vertex_count().to_string(),
                "final_vertex_count": outcome.trace.final_vertex_count.to_string(),
                "steps": outcome.trace.steps.len(),
                "complete": outcome.complete,
                "states_explored": outcome.states_explored,
            });
            if output.is_none() {
                summary["graph"] = serde_json::to_value(&outcome.graph).map_err(|e| Failure::Internal(e.to_string()))?;
            }
            emit(&to_json(&summary)?, None, out)?;
        }
        Command::Lift { graph, output } => emit(&rewrite::delta_double(&load(&graph)?)?.to_json(), output.as_deref(), out)?,
        Command::Split { graph, node, max_parts, pick, output } => {
            let g = load(&graph)?;
            let cands = rewrite::split_node(&g, &node, max_parts)?;
            let listing: Vec<_> = cands.iter().map(|c| json!({ "total": c.total, "parts": c.parts })).collect();
            emit(&to_json(&json!({ "node": node, "candidates": listing }))?, None, out)?;
            if let Some(p) = &output {
                let chosen = cands.get(pick).ok_or_else(|| Failure::Rejected(format!("no candidate {pick}; {} available", cands.len())))?;
                emit(&chosen.graph.to_json(), Some(p), out)?;
            }
        }
        Command::Product { first, second, output } => {
            let g = rewrite::cartesian_product(&load(&first)?, &load(&second)?)?;
            emit(&g.to_json(), output.as_deref(), out)?;
        }
        Command::Symmetrize { graph, output } => emit(&rewrite::symmetrize_square(&load(&graph)?)?.to_json(), output.as_deref(), out)?,
        Command::Stats { graph } => emit(&to_json(&bounds::stats(&load(&graph)?)?)?, None, out)?,
        Command::Bounds { dim, delta, degree } => {
            if dim == 0 {
                return Err(Failure::Rejected("distance must be at least 1".into()));
            }
            let mut report = json!({ "distance": dim, "edge_bound": bounds::edge_lower_bound(dim) });
            if let Some(delta) = delta {
                report["parity"] = serde_json::to_value(bounds::parity_theorem_check(delta, dim, true)).expect("plain data");
                if let Some(d) = degree {
                    let limit = bounds::degree_distance_bound(d, delta);
                    report["degree_distance_limit"] = json!(limit);
                    report["degree_distance_ok"] = json!(dim as f64 <= limit + 1e-9);
                }
            }
            emit(&to_json(&report)?, None, out)?;
        }
        Command::HelperR { set } => {
            let r = bounds::helper_r(&set)?;
            let lemma = bounds::lemma4_parity_check(&set).ok();
            let mut report = serde_json::to_value(&r).expect("plain data");
            report["denominator_even"] = json!(lemma);
            emit(&to_json(&report)?, None, out)?;
        }
        Command::SearchColumn { dim, k_max } => {
            if !(1..=20).contains(&dim) {
                return Err(Failure::Rejected("column count must be between 1 and 20".into()));
            }
            emit(&to_json(&bounds::minimal_column_count(dim, k_max))?, None, out)?;
        }
        Command::Replay { graph, trace, output } => {
            let trace = RewriteTrace::from_jsonl(&read(&trace)?)?;
            emit(&rewrite::replay(&load(&graph)?, &trace)?.to_json(), output.as_deref(), out)?;
        }
    }
    Ok(EXIT_OK)
}

fn load_weighted(path: &Path, explicit: bool) -> Result<WeightedGraph, Failure> {
    let text = read(path)?;
    if explicit {
        let g = match PartitionedGraph::from_json(&text) {
            Ok(p) => p.expand()?,
            Err(_) => ExplicitGraph::parse_edges_format(&text)?,
        };
        return Ok(g.to_weighted());
    }
    if let Ok(p) = PartitionedGraph::from_json(&text) {
        return Ok(p.quotient()?);
    }
    let w: WeightedGraph = serde_json::from_str(&text).map_err(|e| Failure::Rejected(format!("not a graph file: {e}")))?;
    if w.weights.len() != w.size || w.weights.iter().any(|r| r.len() != w.size) || w.input >= w.size || w.output >= w.size {
        return Err(Failure::Rejected("weighted graph dimensions are inconsistent".into()));
    }
    Ok(w)
}
