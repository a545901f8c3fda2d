use std::io::Read;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use pdrank_core::bounds::{
    extremal_monomial, lower_bound_extremal, upper_bound_linearity, CandidateConfig, Direction, MonomialOrderSpec,
};
use pdrank_core::corpus::{random_corpus, PolyShape};
use pdrank_core::exact::dim_partials;
use pdrank_core::reductions::{verify_reduction, ExhaustiveSummary, ReductionInput, ReductionReport};
use pdrank_core::symmetric::{sym_gap_series, GapMode, SymGapPoint};
use pdrank_core::trace::{closed_form_l, explicit_b_oracle, semirandom_estimate, TraceContext, TraceStats};
use pdrank_core::{Basis, ExponentVector, Limits, OrderSpec, Rational, SparsePoly};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::config::FileConfig;
use crate::formats::{self, monomial_text, PolyJson};
use crate::parallel;
use crate::report::{big_nat, decimal, nat_to_rational, render_text, InputDigest, Num, SIGNIFICANT_DIGITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl From<pdrank_core::Error> for CliError {
    fn from(e: pdrank_core::Error) -> Self {
        if e.is_resource_limit() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderDir {
    Min,
    Max,
}

#[derive(Debug, Parser)]
#[command(
    name = "pdrank",
    version,
    about = "Exact dimensions and fast bounds for partial-derivative spaces of sparse polynomials"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format (default: text)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for every randomized step (default: 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the trace sum and exhaustive sweeps (default: 1)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on ordered monomial triples in the Tr(B²) sum
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    max_rows: Option<usize>,
    #[arg(long, global = true)]
    max_cols: Option<usize>,
    /// Cap on entry updates during one exact elimination
    #[arg(long, global = true)]
    elimination_budget: Option<u64>,
    /// Largest ground set for subset enumeration
    #[arg(long, global = true)]
    max_ground: Option<usize>,
    /// Add wall-clock stage timings to reports (makes output run-dependent)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// Polynomial file (text grammar or JSON); `-` reads stdin
    file: PathBuf,
    /// Derivative order; every order 0..=deg when omitted
    #[arg(long)]
    k: Option<u32>,
    /// Variable order for the extremal bound, e.g. `perm=3,1,2` or `perm=z,x,y`
    #[arg(long)]
    order: Option<String>,
    #[arg(long, value_enum)]
    order_dir: Option<OrderDir>,
    /// Random linear functionals used to find Newton-polytope vertices
    #[arg(long)]
    vertex_trials: Option<usize>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    file: PathBuf,
    #[arg(long)]
    k: Option<u32>,
    /// Cross-check against the explicitly materialized B = MᵀM
    #[arg(long)]
    oracle: bool,
    /// Run the random-coefficient experiment on the support of the input
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum ReduceCmd {
    /// Edge list; builds the edge-complement complex and its polynomial
    Graph { file: PathBuf },
    /// Facet list of a pure complex
    Complex { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum SymCmd {
    /// Proxy rank against exact dimension for elementary symmetric polynomials
    Gap {
        /// `d=3 k=1 n=4..200`
        #[arg(long, num_args = 1.., conflicts_with = "scaled", required_unless_present = "scaled")]
        fixed: Option<Vec<String>>,
        /// `kp=1 dp=3 np=8 m=1..3`
        #[arg(long, num_args = 1..)]
        scaled: Option<Vec<String>>,
    },
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact dimension with every bound and the self-check
    Dim(BoundArgs),
    /// Polynomial-time bounds only
    Bounds(BoundArgs),
    /// Trace statistics, optionally with the explicit oracle and sampling
    Trace(TraceArgs),
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Check the reduction identity on every graph of the given sizes
    Verify {
        /// `n=5` or `n=3..5`
        #[arg(long)]
        exhaustive: String,
    },
    #[command(subcommand)]
    Sym(SymCmd),
    /// Seeded random polynomials (the cross-validation corpus)
    RandomCorpus {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_vars: usize,
        #[arg(long, default_value_t = 10)]
        max_terms: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
}

struct Settings {
    format: Format,
    seed: u64,
    threads: usize,
    limits: Limits,
    timings: bool,
    file: FileConfig,
}

impl Settings {
    fn resolve(g: &GlobalArgs, file: FileConfig) -> CliResult<Self> {
        let format = match (g.format, &file.format) {
            (Some(f), _) => f,
            (None, Some(s)) => Format::from_str(s, true)
                .map_err(|_| CliError::Input(format!("config: unknown format {s:?}")))?,
            (None, None) => Format::Text,
        };
        let d = Limits::default();
        let limits = Limits {
            max_rows: g.max_rows.or(file.max_rows).unwrap_or(d.max_rows),
            max_cols: g.max_cols.or(file.max_cols).unwrap_or(d.max_cols),
            elimination_budget: g.elimination_budget.or(file.elimination_budget).unwrap_or(d.elimination_budget),
            triple_budget: g.budget.or(file.budget).map_or(d.triple_budget, u128::from),
            max_ground: g.max_ground.or(file.max_ground).unwrap_or(d.max_ground),
            max_terms: d.max_terms,
        };
        let threads = g.threads.or(file.threads).unwrap_or(1);
        if threads == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        Ok(Settings {
            format,
            seed: g.seed.or(file.seed).unwrap_or(0),
            threads,
            limits,
            timings: g.timings || file.timings.unwrap_or(false),
            file,
        })
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// What a command produced: the JSON document, optional alternative
/// renderings, and self-check violations (which turn into exit code 4).
struct Outcome {
    json: Value,
    text: Option<String>,
    csv: Option<String>,
    violations: Vec<String>,
}

impl Outcome {
    fn new(v: impl Serialize) -> Self {
        Outcome {
            json: serde_json::to_value(v).expect("report types serialize"),
            text: None,
            csv: None,
            violations: Vec::new(),
        }
    }
}

/// Runs the tool; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let file = match FileConfig::from_env() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: config: {e}");
            return EXIT_INPUT;
        }
    };
    let settings = match Settings::resolve(&cli.global, file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(&cli.command, &settings).and_then(|o| emit(o, &cli.command, settings.format)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(o: Outcome, cmd: &Command, format: Format) -> CliResult<i32> {
    let rendered = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&o.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => o.text.unwrap_or_else(|| render_text(&o.json)),
        Format::Csv => match o.csv {
            Some(c) => c,
            None => {
                return Err(CliError::Input(format!(
                    "csv output is only available for `sym gap`, not `{}`",
                    command_name(cmd)
                )))
            }
        },
    };
    print!("{rendered}");
    if !o.violations.is_empty() {
        for v in &o.violations {
            eprintln!("self-check failed: {v}");
        }
        Ok(EXIT_INVARIANT)
    } else if any_capped(&o.json) {
        eprintln!("warning: a resource cap prevented part of the computation (status skipped:caps)");
        Ok(EXIT_RESOURCE)
    } else {
        Ok(EXIT_OK)
    }
}

/// Some section of the report was skipped because of a cap.
fn any_capped(v: &Value) -> bool {
    match v {
        Value::Object(o) => o.get("status").is_some_and(|s| s == "skipped:caps") || o.values().any(any_capped),
        Value::Array(a) => a.iter().any(any_capped),
        _ => false,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Dim(_) => "dim",
        Command::Bounds(_) => "bounds",
        Command::Trace(_) => "trace",
        Command::Reduce(_) => "reduce",
        Command::Verify { .. } => "verify",
        Command::Sym(_) => "sym gap",
        Command::RandomCorpus { .. } => "random-corpus",
    }
}

fn execute(cmd: &Command, s: &Settings) -> CliResult<Outcome> {
    match cmd {
        Command::Dim(a) => bound_command(a, s, true),
        Command::Bounds(a) => bound_command(a, s, false),
        Command::Trace(a) => trace_command(a, s),
        Command::Reduce(r) => reduce_command(r, s),
        Command::Verify { exhaustive } => verify_command(exhaustive, s),
        Command::Sym(SymCmd::Gap { fixed, scaled }) => sym_command(fixed.as_deref(), scaled.as_deref()),
        Command::RandomCorpus {
            count,
            max_vars,
            max_terms,
            max_degree,
        } => corpus_command(
            *count,
            PolyShape {
                max_vars: *max_vars,
                max_terms: *max_terms,
                max_degree: *max_degree,
            },
            s,
        ),
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

fn load_poly(path: &Path) -> CliResult<SparsePoly> {
    formats::read_poly(&read_input(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn ks_for(f: &SparsePoly, k: Option<u32>) -> Vec<u32> {
    match (k, f.degree()) {
        (Some(k), _) => vec![k],
        (None, Some(d)) => (0..=d as u32).collect(),
        (None, None) => vec![0],
    }
}

const CONVENTIONS: [&str; 3] = [
    "derivative matrices and trace sums use the scaled monomial basis a_g = c_g * prod(g_i!)",
    "the space of all derivatives includes order 0 (f itself) and order deg f (constants)",
    "rationals are exact p/q strings with a 12-significant-digit decimal",
];

const PROV_EXACT: &str = "rank of the order-k derivative matrix, fraction-free integer elimination";
const PROV_EXTREMAL: &str = "derivative-space dimension of an extremal monomial of f";
const PROV_L: &str = "sum_P C(sup P, k) a_P^2 / (|M| sum_P a_P^2) over scaled coefficients";
const PROV_PROXY: &str = "Tr(B)^2 / Tr(B^2) for B = M^T M, triple sum over monomials";
const PROV_LINEARITY: &str = "min(sum of monomial dimensions, distinct matrix rows, matrix columns)";

#[derive(Serialize)]
struct Status {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl Status {
    fn of(r: CliResult<usize>) -> CliResult<Self> {
        match r {
            Ok(v) => Ok(Status {
                status: "computed",
                value: Some(v),
                detail: None,
            }),
            Err(CliError::Resource(d)) => Ok(Status {
                status: "skipped:caps",
                value: None,
                detail: Some(d),
            }),
            Err(e) => Err(e),
        }
    }

    fn zero_poly() -> Self {
        Status {
            status: "zero-poly",
            value: Some(0),
            detail: None,
        }
    }
}

#[derive(Serialize)]
struct ExactDim {
    #[serde(flatten)]
    status: Status,
    provenance: &'static str,
}

#[derive(Serialize)]
struct Extremal {
    value: Value,
    witness: Vec<u32>,
    witness_monomial: String,
    source: String,
    candidates: usize,
    provenance: &'static str,
}

#[derive(Serialize)]
struct RatBound {
    value: Num,
    provenance: &'static str,
}

#[derive(Serialize)]
struct Linearity {
    value: Value,
    by_terms: Value,
    distinct_rows: Option<usize>,
    cols: Option<usize>,
    provenance: &'static str,
}

#[derive(Serialize)]
struct Bounds {
    extremal_lower: Option<Extremal>,
    l_lower: Option<RatBound>,
    proxy_lower: Option<RatBound>,
    linearity_upper: Option<Linearity>,
}

#[derive(Serialize)]
struct TraceSection {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    monomial_count: usize,
    tr_b: Option<Num>,
    tr_b2: Option<Num>,
    proxy: Option<Num>,
    vacuous: Option<bool>,
    /// `L` with ordinary coefficients; differs from the certified value
    /// only for non-multilinear input.
    l_ordinary: Option<Num>,
}

#[derive(Serialize)]
struct SelfCheck {
    ok: bool,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct BoundReport {
    k: u32,
    exact_dim: Option<ExactDim>,
    bounds: Bounds,
    trace: TraceSection,
    self_check: SelfCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<Vec<(String, f64)>>,
}

#[derive(Serialize)]
struct Spaces {
    all: Status,
    interior: Option<Status>,
}

#[derive(Serialize)]
struct BoundDoc {
    command: &'static str,
    input: InputDigest,
    conventions: [&'static str; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    spaces: Option<Spaces>,
    reports: Vec<BoundReport>,
}

struct Stopwatch {
    on: bool,
    last: Instant,
    laps: Vec<(String, f64)>,
}

impl Stopwatch {
    fn new(on: bool) -> Self {
        Stopwatch {
            on,
            last: Instant::now(),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        if self.on {
            let now = Instant::now();
            self.laps.push((name.into(), (now - self.last).as_secs_f64() * 1e3));
            self.last = now;
        }
    }

    fn finish(self) -> Option<Vec<(String, f64)>> {
        self.on.then_some(self.laps)
    }
}

fn parse_order(spec: Option<&str>, dir: Option<OrderDir>, f: &SparsePoly) -> CliResult<Vec<MonomialOrderSpec>> {
    let n = f.nvars();
    let dirs: Vec<Direction> = match dir {
        Some(OrderDir::Min) => vec![Direction::Min],
        Some(OrderDir::Max) => vec![Direction::Max],
        None => vec![Direction::Min, Direction::Max],
    };
    let Some(spec) = spec else {
        return Ok(dirs
            .iter()
            .flat_map(|&d| [MonomialOrderSpec::identity(n, d), MonomialOrderSpec::reversed(n, d)])
            .collect());
    };
    let body = spec.strip_prefix("perm=").unwrap_or(spec);
    let perm = body
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Some(i) = f.vars().iter().position(|v| v == tok) {
                return Ok(i);
            }
            match tok.parse::<usize>() {
                Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
                _ => Err(CliError::Input(format!("--order: {tok:?} is neither a variable nor an index in 1..={n}"))),
            }
        })
        .collect::<CliResult<Vec<usize>>>()?;
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(CliError::Input(format!("--order must list each of the {n} variables exactly once")));
    }
    Ok(dirs
        .into_iter()
        .map(|direction| MonomialOrderSpec {
            permutation: perm.clone(),
            direction,
        })
        .collect())
}

fn describe_order(o: &MonomialOrderSpec, vars: &[String]) -> String {
    let names: Vec<&str> = o.permutation.iter().map(|&i| vars[i].as_str()).collect();
    let dir = match o.direction {
        Direction::Min => "min",
        Direction::Max => "max",
    };
    format!("lex-{dir} perm={}", names.join(","))
}

fn ordinary_as_scaled(f: &SparsePoly) -> CliResult<SparsePoly> {
    let f = f.to_ordinary();
    Ok(SparsePoly::from_terms(
        f.vars().to_vec(),
        f.terms().iter().map(|t| (t.exps.clone(), t.coef.clone())),
        Basis::Scaled,
    )?)
}

fn trace_section(f: &SparsePoly, k: u32, s: &Settings) -> CliResult<(TraceSection, Option<TraceStats>)> {
    let ctx = TraceContext::new(f, k)?;
    let l_ordinary = Some(Num::new(&closed_form_l(&ordinary_as_scaled(f)?, k)?));
    let tr_b = ctx.trace_b();
    match parallel::trace_b2(&ctx, &s.limits, s.threads) {
        Ok(tr_b2) => {
            let st = ctx.stats(tr_b, tr_b2);
            Ok((
                TraceSection {
                    status: "computed",
                    detail: None,
                    monomial_count: st.monomial_count,
                    tr_b: Some(Num::new(&st.tr_b)),
                    tr_b2: Some(Num::new(&st.tr_b2)),
                    proxy: Some(Num::new(&st.proxy)),
                    vacuous: Some(st.vacuous),
                    l_ordinary,
                },
                Some(st),
            ))
        }
        Err(e) if e.is_resource_limit() => Ok((
            TraceSection {
                status: "skipped:caps",
                detail: Some(e.to_string()),
                monomial_count: ctx.monomial_count(),
                tr_b: Some(Num::new(&tr_b)),
                tr_b2: None,
                proxy: None,
                vacuous: None,
                l_ordinary,
            },
            None,
        )),
        Err(e) => Err(e.into()),
    }
}

fn zero_trace() -> TraceSection {
    TraceSection {
        status: "zero-poly",
        detail: None,
        monomial_count: 0,
        tr_b: None,
        tr_b2: None,
        proxy: None,
        vacuous: None,
        l_ordinary: None,
    }
}

fn bound_command(a: &BoundArgs, s: &Settings, exact: bool) -> CliResult<Outcome> {
    let f = load_poly(&a.file)?;
    let order = a.order.clone().or(s.file.order.clone());
    let dir = match (a.order_dir, &s.file.order_dir) {
        (Some(d), _) => Some(d),
        (None, Some(d)) => Some(
            OrderDir::from_str(d, true).map_err(|_| CliError::Input(format!("config: unknown order-dir {d:?}")))?,
        ),
        (None, None) => None,
    };
    let config = CandidateConfig {
        orders: parse_order(order.as_deref(), dir, &f)?,
        vertex_trials: a.vertex_trials.or(s.file.vertex_trials).unwrap_or(32),
    };

    let spaces = if exact && !f.is_zero() {
        let deg = f.degree().unwrap_or(0);
        Some(Spaces {
            all: Status::of(dim_partials(&f, OrderSpec::All, &s.limits).map_err(CliError::from))?,
            interior: if deg >= 2 {
                Some(Status::of(dim_partials(&f, OrderSpec::Interior, &s.limits).map_err(CliError::from))?)
            } else {
                None
            },
        })
    } else {
        None
    };

    let mut reports = Vec::new();
    let mut violations = Vec::new();
    for k in ks_for(&f, a.k.or(s.file.k)) {
        let r = bound_report(&f, k, &config, s, exact)?;
        violations.extend(r.self_check.violations.iter().map(|v| format!("k={k}: {v}")));
        reports.push(r);
    }
    let mut o = Outcome::new(BoundDoc {
        command: if exact { "dim" } else { "bounds" },
        input: InputDigest::of(&f),
        conventions: CONVENTIONS,
        spaces,
        reports,
    });
    o.violations = violations;
    Ok(o)
}

fn bound_report(f: &SparsePoly, k: u32, config: &CandidateConfig, s: &Settings, exact: bool) -> CliResult<BoundReport> {
    let mut clock = Stopwatch::new(s.timings);
    if f.is_zero() {
        return Ok(BoundReport {
            k,
            exact_dim: exact.then(|| ExactDim {
                status: Status::zero_poly(),
                provenance: PROV_EXACT,
            }),
            bounds: Bounds {
                extremal_lower: None,
                l_lower: None,
                proxy_lower: None,
                linearity_upper: None,
            },
            trace: zero_trace(),
            self_check: SelfCheck {
                ok: true,
                violations: Vec::new(),
            },
            timings_ms: clock.finish(),
        });
    }

    let exact_dim = if exact {
        let st = Status::of(dim_partials(f, OrderSpec::Exact(k), &s.limits).map_err(CliError::from))?;
        clock.lap("exact");
        Some(ExactDim {
            status: st,
            provenance: PROV_EXACT,
        })
    } else {
        None
    };

    let ext = lower_bound_extremal(f, k as u64, config, &mut s.rng())?;
    let source = config
        .orders
        .iter()
        .find(|o| extremal_monomial(f, o).is_ok_and(|m| m == ext.witness))
        .map_or_else(|| "newton-vertex sample".to_string(), |o| describe_order(o, f.vars()));
    clock.lap("extremal");

    let l = closed_form_l(f, k)?;
    let (trace, stats) = trace_section(f, k, s)?;
    clock.lap("trace");

    let lin = upper_bound_linearity(f, k as u64, &s.limits)?;
    clock.lap("linearity");

    // every lower <= exact <= every upper; lowers <= upper regardless
    let mut violations = Vec::new();
    let upper = nat_to_rational(&lin.value);
    let mut lowers: Vec<(&str, Rational)> = vec![("extremal_lower", nat_to_rational(&ext.value)), ("l_lower", l.clone())];
    if let Some(st) = &stats {
        lowers.push(("proxy_lower", st.proxy.clone()));
        if l > st.proxy {
            violations.push(format!("l_lower {} > proxy_lower {}", l, st.proxy));
        }
    }
    let exact_value = exact_dim.as_ref().and_then(|e| e.status.value);
    for (name, v) in &lowers {
        if let Some(e) = exact_value {
            if *v > Rational::from_integer(e.into()) {
                violations.push(format!("{name} {v} > exact_dim {e}"));
            }
        }
        if *v > upper {
            violations.push(format!("{name} {v} > linearity_upper {}", lin.value));
        }
    }
    if let Some(e) = exact_value {
        if BigUint::from(e) > lin.value {
            violations.push(format!("exact_dim {e} > linearity_upper {}", lin.value));
        }
    }

    Ok(BoundReport {
        k,
        exact_dim,
        bounds: Bounds {
            extremal_lower: Some(Extremal {
                value: big_nat(&ext.value),
                witness_monomial: monomial_or_one(f.vars(), &ext.witness),
                witness: ext.witness.into_vec(),
                source,
                candidates: ext.candidates.len(),
                provenance: PROV_EXTREMAL,
            }),
            l_lower: Some(RatBound {
                value: Num::new(&l),
                provenance: PROV_L,
            }),
            proxy_lower: stats.as_ref().map(|st| RatBound {
                value: Num::new(&st.proxy),
                provenance: PROV_PROXY,
            }),
            linearity_upper: Some(Linearity {
                value: big_nat(&lin.value),
                by_terms: big_nat(&lin.by_terms),
                distinct_rows: lin.distinct_rows,
                cols: lin.cols,
                provenance: PROV_LINEARITY,
            }),
        },
        trace,
        self_check: SelfCheck {
            ok: violations.is_empty(),
            violations,
        },
        timings_ms: clock.finish(),
    })
}

fn monomial_or_one(vars: &[String], e: &ExponentVector) -> String {
    let m = monomial_text(vars, e);
    if m.is_empty() {
        "1".into()
    } else {
        m
    }
}

#[derive(Serialize)]
struct OracleSection {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    rows: Option<usize>,
    cols: Option<usize>,
    tr_b: Option<Num>,
    tr_b2: Option<Num>,
    rank_b: Option<usize>,
    agrees: Option<bool>,
}

#[derive(Serialize)]
struct SemirandomSection {
    samples: usize,
    seed: u64,
    mean: Num,
    expected: Num,
    relative_error: Num,
}

#[derive(Serialize)]
struct TraceReport {
    k: u32,
    trace: TraceSection,
    l_lower: Option<Num>,
    oracle: Option<OracleSection>,
    semirandom: Option<SemirandomSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<Vec<(String, f64)>>,
}

#[derive(Serialize)]
struct TraceDoc {
    command: &'static str,
    input: InputDigest,
    conventions: [&'static str; 3],
    reports: Vec<TraceReport>,
}

fn trace_command(a: &TraceArgs, s: &Settings) -> CliResult<Outcome> {
    let f = load_poly(&a.file)?;
    let oracle = a.oracle || s.file.oracle.unwrap_or(false);
    let samples = a.samples.or(s.file.samples);
    let mut reports = Vec::new();
    let mut violations = Vec::new();
    for k in ks_for(&f, a.k.or(s.file.k)) {
        let mut clock = Stopwatch::new(s.timings);
        if f.is_zero() {
            reports.push(TraceReport {
                k,
                trace: zero_trace(),
                l_lower: None,
                oracle: None,
                semirandom: None,
                timings_ms: clock.finish(),
            });
            continue;
        }
        let (trace, stats) = trace_section(&f, k, s)?;
        clock.lap("trace");
        let l = closed_form_l(&f, k)?;
        let oracle = if oracle {
            let sec = oracle_section(&f, k, stats.as_ref(), s, &mut violations)?;
            clock.lap("oracle");
            Some(sec)
        } else {
            None
        };
        let semirandom = match samples {
            Some(n) => {
                let support: Vec<ExponentVector> = f.terms().iter().map(|t| t.exps.clone()).collect();
                let est = semirandom_estimate(&support, k, n, &mut s.rng())?;
                let rel = if est.expected.is_zero() {
                    (&est.mean - &est.expected).abs()
                } else {
                    ((&est.mean - &est.expected) / &est.expected).abs()
                };
                clock.lap("semirandom");
                Some(SemirandomSection {
                    samples: n,
                    seed: s.seed,
                    mean: Num::new(&est.mean),
                    expected: Num::new(&est.expected),
                    relative_error: Num::new(&rel),
                })
            }
            None => None,
        };
        reports.push(TraceReport {
            k,
            trace,
            l_lower: Some(Num::new(&l)),
            oracle,
            semirandom,
            timings_ms: clock.finish(),
        });
    }
    let mut o = Outcome::new(TraceDoc {
        command: "trace",
        input: InputDigest::of(&f),
        conventions: CONVENTIONS,
        reports,
    });
    o.violations = violations;
    Ok(o)
}

fn oracle_section(
    f: &SparsePoly,
    k: u32,
    stats: Option<&TraceStats>,
    s: &Settings,
    violations: &mut Vec<String>,
) -> CliResult<OracleSection> {
    match explicit_b_oracle(f, k, &s.limits) {
        Ok(ex) => {
            let agrees = stats.map(|st| st.tr_b == ex.tr_b && st.tr_b2 == ex.tr_b2);
            if agrees == Some(false) {
                violations.push(format!("k={k}: trace sums disagree with the explicit B"));
            }
            if let Some(st) = stats {
                if st.proxy > Rational::from_integer(ex.rank_b.into()) {
                    violations.push(format!("k={k}: proxy {} > rank(B) {}", st.proxy, ex.rank_b));
                }
            }
            Ok(OracleSection {
                status: "computed",
                detail: None,
                rows: Some(ex.m.nrows()),
                cols: Some(ex.m.ncols()),
                tr_b: Some(Num::new(&ex.tr_b)),
                tr_b2: Some(Num::new(&ex.tr_b2)),
                rank_b: Some(ex.rank_b),
                agrees,
            })
        }
        Err(e) if e.is_resource_limit() => Ok(OracleSection {
            status: "skipped:caps",
            detail: Some(e.to_string()),
            rows: None,
            cols: None,
            tr_b: None,
            tr_b2: None,
            rank_b: None,
            agrees: None,
        }),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct ReduceDoc {
    command: &'static str,
    kind: &'static str,
    n: usize,
    m: usize,
    ind_count: Option<u64>,
    face_count: u64,
    dim_plus: usize,
    identity_holds: bool,
    basis_verified: bool,
    facet_size: Option<usize>,
    dimension: Option<usize>,
    note: Option<String>,
    conventions: [&'static str; 2],
}

fn reduce_command(r: &ReduceCmd, s: &Settings) -> CliResult<Outcome> {
    let (kind, input, path) = match r {
        ReduceCmd::Graph { file } => {
            let text = read_input(file)?;
            let g = formats::parse_graph(&text).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
            ("graph", ReductionInput::Graph(g), file)
        }
        ReduceCmd::Complex { file } => {
            let text = read_input(file)?;
            let c = formats::parse_complex(&text).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
            ("complex", ReductionInput::Complex(c), file)
        }
    };
    let facet_size = match &input {
        ReductionInput::Graph(g) if g.m() > 0 => Some(g.n().saturating_sub(2)),
        ReductionInput::Graph(_) => None,
        ReductionInput::Complex(c) => c.facets().first().map(Vec::len),
    };
    let ReductionReport {
        n,
        m,
        ind_count,
        face_count,
        dim_plus,
        identity_holds,
        basis_verified,
        note,
    } = verify_reduction(&input, &s.limits).map_err(|e| match e {
        e if e.is_resource_limit() => CliError::Resource(format!("{}: {e}", path.display())),
        e => CliError::Input(format!("{}: {e}", path.display())),
    })?;
    let mut violations = Vec::new();
    if note.is_none() && !identity_holds {
        violations.push(format!("dim_plus {dim_plus} != 2 * face_count {face_count}"));
    }
    if !basis_verified {
        violations.push("explicit basis is not a basis of the interior derivative space".into());
    }
    let mut o = Outcome::new(ReduceDoc {
        command: "reduce",
        kind,
        n,
        m,
        ind_count,
        face_count,
        dim_plus,
        identity_holds,
        basis_verified,
        facet_size,
        dimension: facet_size.map(|d| d.saturating_sub(1)),
        note,
        conventions: [
            "faces are nonempty; dimension of a face F is |F| - 1",
            "edge-complement complexes have facets of size n - 2, hence dimension n - 3",
        ],
    });
    o.violations = violations;
    Ok(o)
}

fn parse_range(key: &str, v: &str) -> CliResult<RangeInclusive<u64>> {
    let bad = || CliError::Input(format!("{key}={v}: expected a number or a range a..b"));
    match v.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let x = v.trim().parse().map_err(|_| bad())?;
            Ok(x..=x)
        }
    }
}

/// `key=value` tokens (space- or comma-separated) into a lookup table.
fn key_values(tokens: &[String], keys: &[&str]) -> CliResult<Vec<String>> {
    let mut out: Vec<Option<String>> = vec![None; keys.len()];
    for tok in tokens.iter().flat_map(|t| t.split([',', ' '])).filter(|t| !t.is_empty()) {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("expected key=value, found {tok:?}")))?;
        let i = keys
            .iter()
            .position(|&x| x == k)
            .ok_or_else(|| CliError::Input(format!("unknown key {k:?}; expected {}", keys.join(", "))))?;
        if out[i].replace(v.to_string()).is_some() {
            return Err(CliError::Input(format!("key {k:?} given twice")));
        }
    }
    keys.iter()
        .zip(out)
        .map(|(k, v)| v.ok_or_else(|| CliError::Input(format!("missing {k}=..."))))
        .collect()
}

fn single(key: &str, v: &str) -> CliResult<u64> {
    let r = parse_range(key, v)?;
    if r.start() != r.end() {
        return Err(CliError::Input(format!("{key} must be a single number")));
    }
    Ok(*r.start())
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    graphs: u64,
    identity_failures: Vec<u64>,
    basis_failures: Vec<u64>,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyDoc {
    command: &'static str,
    summaries: Vec<Summary>,
    passed: bool,
}

fn verify_command(spec: &str, s: &Settings) -> CliResult<Outcome> {
    let [n] = <[String; 1]>::try_from(key_values(&[spec.to_string()], &["n"])?).expect("one key");
    let range = parse_range("n", &n)?;
    if range.is_empty() || *range.start() < 3 || *range.end() > 11 {
        return Err(CliError::Input(format!("--exhaustive n={n}: sizes must lie in 3..=11")));
    }
    let mut summaries = Vec::new();
    for n in range {
        let ExhaustiveSummary {
            n,
            graphs,
            identity_failures,
            basis_failures,
        } = parallel::exhaustive(n as usize, &s.limits, s.threads)?;
        summaries.push(Summary {
            passed: identity_failures.is_empty() && basis_failures.is_empty(),
            n,
            graphs,
            identity_failures,
            basis_failures,
        });
    }
    let passed = summaries.iter().all(|x| x.passed);
    let mut o = Outcome::new(VerifyDoc {
        command: "verify",
        summaries,
        passed,
    });
    if !passed {
        o.violations.push("reduction identity or basis check failed (see edge masks in the report)".into());
    }
    Ok(o)
}

#[derive(Serialize)]
struct GapRow {
    n: u64,
    d: u64,
    k: u64,
    u: Value,
    v: Num,
    upper_v: Option<Num>,
    ratio: Num,
}

#[derive(Serialize)]
struct GapDoc {
    command: &'static str,
    mode: Value,
    points: Vec<GapRow>,
}

fn sym_command(fixed: Option<&[String]>, scaled: Option<&[String]>) -> CliResult<Outcome> {
    let (mode, mode_json) = match (fixed, scaled) {
        (Some(t), None) => {
            let [d, k, n] = <[String; 3]>::try_from(key_values(t, &["d", "k", "n"])?).expect("three keys");
            let (d, k, n) = (single("d", &d)?, single("k", &k)?, parse_range("n", &n)?);
            let json = serde_json::json!({"fixed": {"d": d, "k": k, "n": [n.start(), n.end()]}});
            (GapMode::Fixed { d, k, n }, json)
        }
        (None, Some(t)) => {
            let [kp, dp, np, m] =
                <[String; 4]>::try_from(key_values(t, &["kp", "dp", "np", "m"])?).expect("four keys");
            let (kp, dp, np, m) = (single("kp", &kp)?, single("dp", &dp)?, single("np", &np)?, parse_range("m", &m)?);
            let json = serde_json::json!({"scaled": {"kp": kp, "dp": dp, "np": np, "m": [m.start(), m.end()]}});
            (GapMode::Scaled { kp, dp, np, m }, json)
        }
        _ => return Err(CliError::Input("give exactly one of --fixed or --scaled".into())),
    };
    let points = sym_gap_series(&mode)?;
    let mut violations = Vec::new();
    for p in &points {
        if p.v > nat_to_rational(&p.u) {
            violations.push(format!("n={} d={} k={}: v > u", p.n, p.d, p.k));
        }
        if let Some(up) = &p.upper_v {
            if p.v > *up {
                violations.push(format!("n={} d={} k={}: v > upper_v", p.n, p.d, p.k));
            }
        }
    }
    let csv = gap_csv(&points);
    let rows = points
        .into_iter()
        .map(|p| GapRow {
            n: p.n,
            d: p.d,
            k: p.k,
            u: big_nat(&p.u),
            v: Num::new(&p.v),
            upper_v: p.upper_v.as_ref().map(Num::new),
            ratio: Num::new(&p.ratio),
        })
        .collect();
    let mut o = Outcome::new(GapDoc {
        command: "sym gap",
        mode: mode_json,
        points: rows,
    });
    o.csv = Some(csv);
    o.violations = violations;
    Ok(o)
}

fn gap_csv(points: &[SymGapPoint]) -> String {
    let mut out = String::from("n,d,k,u,v,v_decimal,upper_v,upper_v_decimal,ratio,ratio_decimal\n");
    let dec = |r: &Rational| decimal(r, SIGNIFICANT_DIGITS);
    for p in points {
        let (up, up_dec) = match &p.upper_v {
            Some(u) => (formats::ratio_string(u), dec(u)),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            p.n,
            p.d,
            p.k,
            p.u,
            formats::ratio_string(&p.v),
            dec(&p.v),
            up,
            up_dec,
            formats::ratio_string(&p.ratio),
            dec(&p.ratio)
        ));
    }
    out
}

#[derive(Serialize)]
struct CorpusDoc {
    command: &'static str,
    seed: u64,
    count: usize,
    max_vars: usize,
    max_terms: usize,
    max_degree: u32,
    polys: Vec<PolyJson>,
}

fn corpus_command(count: usize, shape: PolyShape, s: &Settings) -> CliResult<Outcome> {
    if shape.max_vars == 0 || shape.max_terms == 0 {
        return Err(CliError::Input("--max-vars and --max-terms must be positive".into()));
    }
    let polys = random_corpus(&mut s.rng(), count, &shape);
    let mut text = String::new();
    for (i, f) in polys.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&formats::format_poly(f));
    }
    let mut o = Outcome::new(CorpusDoc {
        command: "random-corpus",
        seed: s.seed,
        count,
        max_vars: shape.max_vars,
        max_terms: shape.max_terms,
        max_degree: shape.max_degree,
        polys: polys.iter().map(PolyJson::from_poly).collect(),
    });
    o.text = Some(text);
    Ok(o)
}
