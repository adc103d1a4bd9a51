//! Command-line front end. Every command prints its effective configuration
//! as a `#` line on stderr, so a run can be repeated from its log.
//!
//! Exit codes: 0 success, 1 operational error, 2 theorem violation or a
//! recorded result that does not recompute, 64 usage error, 65 bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::closure::closure_power;
use crate::decomp::{associated_primes, AssSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::harness::{self, Check, CorpusSpec, RunOptions, VerificationReport};
use crate::homology::betti_numbers;
use crate::io::{encode_graph6, parse_corpus, read_graph, read_ideal, write_edge_list};
use crate::monomial::MonomialIdeal;
use crate::stability::{report_with, Invariants, StabilityOptions, StabilityReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

/// Default worker count for `verify`.
pub const JOBS_ENV: &str = "CLOSURESTAB_JOBS";

#[derive(Debug, Parser, Serialize)]
#[command(name = "closurestab", version, about = "Integral closures of powers of edge ideals and their stability indices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Graph invariants n0, n1, phi0, phi1 and friends.
    Invariants(InvariantsArgs),
    /// Minimal generators of closure(I^n) or I^n.
    Closure(PowerArgs),
    /// Associated primes of R/closure(I^n) or R/I^n.
    Ass(PowerArgs),
    /// Depth and total Betti numbers of R/closure(I^n) or R/I^n.
    Depth(PowerArgs),
    /// Ass and depth sequences with their stability indices.
    Stability(StabilityArgs),
    /// Run theorem checks over a graph corpus.
    Verify(VerifyArgs),
    /// Write a graph corpus.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Human,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["graph", "input"])))]
pub struct InvariantsArgs {
    /// Graph file: edge list, graph6 or JSON.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Recheck a previous `invariants` output.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["graph", "ideal", "input"])))]
pub struct PowerArgs {
    /// Graph file: edge list, graph6 or JSON.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Ideal file: ideal JSON, or variable count then one monomial per line.
    #[arg(long)]
    pub ideal: Option<PathBuf>,
    /// Recheck a previous output of the same command.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    pub power: Option<usize>,
    /// Use the integral closure of the power (default).
    #[arg(long, conflicts_with = "ordinary")]
    pub closure: bool,
    /// Use the ordinary power.
    #[arg(long)]
    pub ordinary: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["graph", "corpus", "input"])))]
pub struct StabilityArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Corpus file; one report per graph.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Recheck previous `stability` JSON output.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// One CSV row per graph, with a header line.
    #[arg(long)]
    pub csv: bool,
    /// Compute closures of bipartite graphs instead of using ordinary powers.
    #[arg(long)]
    pub paranoid: bool,
    /// Powers computed past each bound to confirm stabilization.
    #[arg(long, default_value_t = 0)]
    pub extra_powers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CorpusSelect {
    /// All graphs up to this many vertices, up to isomorphism.
    #[arg(long, value_name = "N")]
    pub exhaustive: Option<usize>,
    /// Random pseudoforests; needs --max-vertices and --seed.
    #[arg(long, value_name = "COUNT", requires_all = ["max_vertices", "seed"])]
    pub random_pseudoforest: Option<usize>,
    #[arg(long, value_name = "M")]
    pub max_vertices: Option<usize>,
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Graphs from a corpus file.
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Keep disconnected graphs in exhaustive corpora.
    #[arg(long)]
    pub all_graphs: bool,
    #[arg(long)]
    pub pseudoforest_only: bool,
    #[arg(long)]
    pub no_c4: bool,
    /// Permit exhaustive corpora on 7 vertices.
    #[arg(long)]
    pub allow_large: bool,
}

impl CorpusSelect {
    fn spec(&self) -> Result<CorpusSpec> {
        let mut spec = match (self.exhaustive, self.random_pseudoforest, &self.corpus) {
            (Some(n), None, None) => {
                let mut s = CorpusSpec::exhaustive(n);
                s.connected_only = !self.all_graphs;
                s
            }
            (None, Some(count), None) => {
                let (Some(m), Some(seed)) = (self.max_vertices, self.seed) else {
                    return Err(Error::InvalidSpec("--random-pseudoforest needs --max-vertices and --seed".into()));
                };
                CorpusSpec::random_pseudoforest(count, m, seed)
            }
            (None, None, Some(path)) => CorpusSpec::file(path),
            _ => return Err(Error::InvalidSpec("choose exactly one corpus source".into())),
        };
        spec.pseudoforest_only = self.pseudoforest_only;
        spec.no_c4 = self.no_c4;
        spec.allow_large = self.allow_large;
        Ok(spec)
    }
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["exhaustive", "random_pseudoforest", "corpus", "input"])))]
pub struct VerifyArgs {
    #[command(flatten)]
    pub select: CorpusSelect,
    /// Summarize a previous report instead of running.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Comma-separated checks, or `all`.
    #[arg(long, default_value = "all")]
    pub checks: String,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = JOBS_ENV)]
    pub jobs: Option<usize>,
    /// Largest bipartite and nonbipartite graphs paired for t0, t1, t2.
    #[arg(long, default_value_t = 4)]
    pub pair_bipartite_max: usize,
    #[arg(long, default_value_t = 5)]
    pub pair_other_max: usize,
    /// Largest power used by t0, t1, t2.
    #[arg(long, default_value_t = 3)]
    pub pair_max_power: usize,
    #[arg(long, default_value_t = 1)]
    pub extra_powers: usize,
    /// One stderr line per finished instance.
    #[arg(long)]
    pub log: bool,
    /// Report path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    #[default]
    Graph6,
    Edges,
    Json,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["exhaustive", "random_pseudoforest", "corpus"])))]
pub struct CorpusArgs {
    #[command(flatten)]
    pub select: CorpusSelect,
    #[arg(long, value_enum, default_value_t)]
    pub format: CorpusFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Input {
    Graph(Graph),
    Ideal(MonomialIdeal),
}

impl Input {
    fn ideal(&self) -> Result<MonomialIdeal> {
        match self {
            Input::Graph(g) if g.edge_count() == 0 => Err(Error::NoEdges),
            Input::Graph(g) => Ok(MonomialIdeal::edge_ideal(g)),
            Input::Ideal(i) => Ok(i.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerKind {
    Closure,
    Ordinary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsOutput {
    pub id: String,
    pub graph: Graph,
    #[serde(flatten)]
    pub invariants: Invariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureOutput {
    pub input: Input,
    pub power: usize,
    pub kind: PowerKind,
    pub ideal: MonomialIdeal,
    /// Generators written as `x1^2*x2*x3`.
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssOutput {
    pub input: Input,
    pub power: usize,
    pub kind: PowerKind,
    pub primes: AssSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthOutput {
    pub input: Input,
    pub power: usize,
    pub kind: PowerKind,
    pub depth: usize,
    pub projective_dimension: usize,
    /// Total Betti numbers `β_i` of the ideal, `i = 0..`.
    pub betti_totals: Vec<u64>,
    /// Number of multidegrees carrying a nonzero Betti number.
    pub betti_multidegrees: usize,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    eprintln!("# closurestab {} {}", env!("CARGO_PKG_VERSION"), serde_json::to_string(&cli.command).unwrap());
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Violation(_) => EXIT_VIOLATION,
        Error::InvalidSpec(_) | Error::InvalidPower(_) => EXIT_USAGE,
        Error::Parse { .. }
        | Error::Json(_)
        | Error::InvalidVertex { .. }
        | Error::InvalidEdge(..)
        | Error::TooManyVertices { .. }
        | Error::DimensionMismatch { .. }
        | Error::ZeroIdeal
        | Error::UnitIdeal
        | Error::NoEdges => EXIT_DATA,
        _ => EXIT_ERROR,
    }
}

fn dispatch(command: &Command) -> Result<i32> {
    if !matches!(command, Command::Verify(_)) {
        // a second in-process call finds the pool already built
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    match command {
        Command::Invariants(a) => invariants(a),
        Command::Closure(a) => closure(a),
        Command::Ass(a) => ass(a),
        Command::Depth(a) => depth(a),
        Command::Stability(a) => stability(a),
        Command::Verify(a) => verify(a),
        Command::Corpus(a) => corpus(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Recomputes a recorded result; a mismatch is a violation.
fn recheck<T: PartialEq>(recorded: T, fresh: T) -> Result<T> {
    if recorded != fresh {
        return Err(Error::Violation("recorded result differs from its recomputation".into()));
    }
    Ok(fresh)
}

fn invariants_of(g: &Graph) -> InvariantsOutput {
    InvariantsOutput { id: encode_graph6(g), graph: g.clone(), invariants: Invariants::of(g) }
}

fn invariants(a: &InvariantsArgs) -> Result<i32> {
    let out = match (&a.graph, &a.input) {
        (Some(path), _) => invariants_of(&read_graph(path)?),
        (_, Some(path)) => {
            let recorded: InvariantsOutput = read_json(path)?;
            let fresh = invariants_of(&recorded.graph);
            recheck(recorded, fresh)?
        }
        _ => unreachable!("clap requires a source"),
    };
    let text = match a.format {
        Format::Json => to_json(&out),
        Format::Human => {
            let inv = &out.invariants;
            let opt = |v: Option<usize>| v.map_or("none".to_string(), |v| v.to_string());
            format!(
                "graph {}\nvertices {}\nedges {}\nbipartite {}\npseudoforest {}\nodd girth {}\nn0 {}\nn1 {}\nphi0 {}\nphi1 {}",
                out.id,
                inv.vertices,
                inv.edges,
                inv.bipartite,
                inv.pseudoforest,
                opt(inv.odd_girth),
                inv.n0,
                opt(inv.n1),
                inv.phi0,
                inv.phi1
            )
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

/// The input and power named on the command line, or `None` with `--in`.
fn power_request(a: &PowerArgs) -> Result<Option<(Input, usize, PowerKind)>> {
    let input = match (&a.graph, &a.ideal) {
        (Some(path), _) => Input::Graph(read_graph(path)?),
        (_, Some(path)) => Input::Ideal(read_ideal(path)?),
        _ => return Ok(None),
    };
    let n = a.power.expect("clap requires --power");
    if n == 0 {
        return Err(Error::InvalidPower(0));
    }
    input.ideal()?;
    let kind = if a.ordinary { PowerKind::Ordinary } else { PowerKind::Closure };
    Ok(Some((input, n, kind)))
}

fn power_ideal(input: &Input, n: usize, kind: PowerKind) -> Result<MonomialIdeal> {
    let base = input.ideal()?;
    match kind {
        PowerKind::Closure => closure_power(&base, n),
        PowerKind::Ordinary if n == 0 => Err(Error::InvalidPower(0)),
        PowerKind::Ordinary => Ok(base.power(n)),
    }
}

/// Runs `compute` on the command-line request, or rechecks a recorded
/// output read from `--in`.
fn power_command<T, F>(a: &PowerArgs, compute: F, key: fn(&T) -> (&Input, usize, PowerKind)) -> Result<T>
where
    T: PartialEq + DeserializeOwned,
    F: Fn(Input, usize, PowerKind) -> Result<T>,
{
    match power_request(a)? {
        Some((input, n, kind)) => compute(input, n, kind),
        None => {
            let path = a.input.as_ref().expect("clap requires a source");
            let recorded: T = read_json(path)?;
            let (input, n, kind) = key(&recorded);
            let fresh = compute(input.clone(), n, kind)?;
            recheck(recorded, fresh)
        }
    }
}

fn closure(a: &PowerArgs) -> Result<i32> {
    let out = power_command(
        a,
        |input, power, kind| {
            let ideal = power_ideal(&input, power, kind)?;
            let generators = ideal.generators().iter().map(|g| g.to_string()).collect();
            Ok(ClosureOutput { input, power, kind, ideal, generators })
        },
        |o: &ClosureOutput| (&o.input, o.power, o.kind),
    )?;
    let text = match a.format {
        Format::Json => to_json(&out),
        Format::Human => out.generators.join("\n"),
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn ass(a: &PowerArgs) -> Result<i32> {
    let out = power_command(
        a,
        |input, power, kind| {
            let primes = associated_primes(&power_ideal(&input, power, kind)?)?;
            Ok(AssOutput { input, power, kind, primes })
        },
        |o: &AssOutput| (&o.input, o.power, o.kind),
    )?;
    let text = match a.format {
        Format::Json => to_json(&out),
        Format::Human => {
            let mut s = String::new();
            for p in out.primes.primes() {
                let vars: Vec<String> = p.vars().iter().map(|v| format!("x{v}")).collect();
                writeln!(s, "({})", vars.join(", ")).unwrap();
            }
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn depth(a: &PowerArgs) -> Result<i32> {
    let out = power_command(
        a,
        |input, power, kind| {
            let ideal = power_ideal(&input, power, kind)?;
            let table = betti_numbers(&ideal)?;
            let pd = table.max_index().expect("a proper nonzero ideal has generators") + 1;
            Ok(DepthOutput {
                depth: ideal.ambient() - pd,
                projective_dimension: pd,
                betti_totals: table.totals(),
                betti_multidegrees: table.entries.values().map(|row| row.len()).sum(),
                input,
                power,
                kind,
            })
        },
        |o: &DepthOutput| (&o.input, o.power, o.kind),
    )?;
    let text = match a.format {
        Format::Json => to_json(&out),
        Format::Human => {
            let totals: Vec<String> = out.betti_totals.iter().map(u64::to_string).collect();
            format!("{}\nbetti {}", out.depth, totals.join(" "))
        }
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn stability(a: &StabilityArgs) -> Result<i32> {
    let opts = StabilityOptions { paranoid: a.paranoid, extra_powers: a.extra_powers };
    let (reports, single) = match (&a.graph, &a.corpus, &a.input) {
        (Some(path), _, _) => (vec![report_with(&read_graph(path)?, opts)?], true),
        (_, Some(path), _) => {
            let graphs = parse_corpus(&std::fs::read_to_string(path)?)?;
            (graphs.iter().map(|g| report_with(g, opts)).collect::<Result<Vec<_>>>()?, false)
        }
        (_, _, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let (recorded, single) = if text.trim_start().starts_with('[') {
                (serde_json::from_str::<Vec<StabilityReport>>(&text)?, false)
            } else {
                (vec![serde_json::from_str::<StabilityReport>(&text)?], true)
            };
            let mut fresh = Vec::new();
            for r in recorded {
                let extra = r.ass_checked_to.saturating_sub(r.invariants.phi0);
                let again = report_with(&r.graph, StabilityOptions { paranoid: a.paranoid, extra_powers: extra })?;
                fresh.push(recheck(r, again)?);
            }
            (fresh, single)
        }
        _ => unreachable!("clap requires a source"),
    };
    let text = if a.csv {
        let mut s = format!("{}\n", StabilityReport::CSV_HEADER);
        for r in &reports {
            writeln!(s, "{}", r.csv_row()).unwrap();
        }
        s
    } else if single {
        to_json(&reports[0])
    } else {
        to_json(&reports)
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs) -> Result<i32> {
    let report: VerificationReport = match &a.input {
        Some(path) => {
            let report: VerificationReport = read_json(path)?;
            if report.schema != 1 {
                return Err(Error::InvalidSpec(format!("unsupported report schema {}", report.schema)));
            }
            report
        }
        None => {
            let spec = a.select.spec()?;
            let opts = RunOptions {
                checks: Check::parse_list(&a.checks)?,
                jobs: a.jobs,
                pair_bipartite_max: a.pair_bipartite_max,
                pair_other_max: a.pair_other_max,
                pair_max_power: a.pair_max_power,
                extra_powers: a.extra_powers,
                log: a.log,
            };
            if opts.checks.is_empty() {
                return Err(Error::InvalidSpec("no checks selected".into()));
            }
            harness::run(&spec, &opts)?
        }
    };
    eprintln!("{}", report.summary());
    emit(&a.out, &to_json(&report))?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VIOLATION })
}

fn corpus(a: &CorpusArgs) -> Result<i32> {
    let spec = a.select.spec()?;
    let mut graphs = harness::generate_corpus(&spec)?;
    graphs.sort_by_cached_key(harness::sort_key);
    let text = match a.format {
        CorpusFormat::Graph6 => graphs.iter().map(|g| encode_graph6(g) + "\n").collect(),
        CorpusFormat::Edges => graphs.iter().map(write_edge_list).collect::<Vec<_>>().join("\n"),
        CorpusFormat::Json => to_json(&graphs),
    };
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}
