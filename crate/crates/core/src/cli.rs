//! Command-line front end.
//!
//! `parse_config` turns argv into a validated [`RunConfig`], `run` does the
//! computation and `emit` renders it. Exit statuses: 0 success, 1 runtime
//! or I/O failure, 2 usage error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::decay::{
    error_sweep, fit_decay, fit_decay_table, ingham_check, lemma2_backward_sweep,
    lemma2_forward_sweep, spread, DecayFit, DecayModel, InghamRow, SupRatioCheck, SweepResult,
    TrendConfig, TrendVerdict,
};
use crate::error::{Error, Result};
use crate::expansion::expansion_coeffs;
use crate::family::FamilySpec;
use crate::ramanujan::{cr_row, ramanujan_sum};
use crate::scalar::{render_f64, Exact, Scalar, Value, ValueKind};
use crate::shifted::{report, BoundKind, ConvolutionProblem, ConvolutionReport, Envelope};
use crate::sieve::SieveTables;

/// Largest `N` the exact backend accepts without `--allow-large-exact`.
pub const EXACT_MAX_N: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "ramexp",
    version,
    about = "Finite Ramanujan expansions and shifted convolution sums"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Ramanujan sums: a single c_r(n), or the row c_r(h) for r <= r-max
    Csum(CsumArgs),
    /// Finite Ramanujan coefficients of a family relative to a support N
    Expand(ExpandArgs),
    /// One shifted convolution sum: brute force, main term, error, envelope
    Conv(ConvArgs),
    /// Error scaling of a shifted convolution sum across a list of N
    Sweep(SweepArgs),
    /// Divisor correlation sum against its asymptotic
    Ingham(InghamArgs),
    /// Coefficient decay fits and sup-ratio checks
    Decay(DecayArgs),
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Numeric backend
    #[arg(long, default_value = "float", value_parser = ["exact", "float"])]
    backend: String,
    /// Output format
    #[arg(long, default_value = "human", value_parser = ["human", "csv", "json"])]
    output: String,
    /// Write output here instead of stdout
    #[arg(long)]
    output_path: Option<PathBuf>,
    /// Sieve extent; defaults to the smallest value that covers the run
    #[arg(long)]
    n_max: Option<usize>,
    /// Lift the exact-backend size guard
    #[arg(long)]
    allow_large_exact: bool,
    /// Reserved for randomized diagnostics; unused by deterministic paths
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct CsumArgs {
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    h: usize,
    #[arg(long)]
    r_max: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[arg(long)]
    f: String,
    #[arg(long = "N")]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct TheoremArgs {
    /// Error envelope: power-delta or log-beta
    #[arg(long)]
    theorem: Option<String>,
    /// Envelope parameter (δ or β); inferred from the families when omitted
    #[arg(long)]
    theorem_param: Option<f64>,
}

#[derive(Debug, Args)]
struct ConvArgs {
    #[arg(long)]
    f: String,
    /// Defaults to the f family
    #[arg(long)]
    g: Option<String>,
    #[arg(long = "N", default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    h: usize,
    #[command(flatten)]
    theorem: TheoremArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 1)]
    h: usize,
    /// Comma-separated, strictly ascending
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[command(flatten)]
    theorem: TheoremArgs,
    #[command(flatten)]
    trend: TrendArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct TrendArgs {
    #[arg(long)]
    slope_slack: Option<f64>,
    #[arg(long)]
    spread_factor: Option<f64>,
    #[arg(long)]
    spearman_max: Option<f64>,
}

#[derive(Debug, Args)]
struct InghamArgs {
    #[arg(long, default_value_t = 1)]
    h: usize,
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct DecayArgs {
    /// Family to fit (ignored by --lemma2, which uses its own families)
    #[arg(long, default_value = "divisor")]
    f: String,
    /// Support N; a list runs the sup-ratio check once per entry
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value = "power")]
    model: String,
    /// Sup-ratio sweep instead of a fit: forward:α or backward:β
    #[arg(long)]
    lemma2: Option<String>,
    #[command(flatten)]
    trend: TrendArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma2Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// `c_r(n)` for one pair.
    CsumSingle {
        r: usize,
        n: usize,
    },
    /// `c_r(h)` for `r <= r_max`.
    CsumRow {
        r_max: usize,
    },
    Expand,
    Conv,
    Sweep,
    Ingham,
    DecayFit {
        model: DecayModel,
    },
    Lemma2 {
        direction: Lemma2Direction,
        exponent: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_max: usize,
    pub h: usize,
    pub f: Option<FamilySpec>,
    pub g: Option<FamilySpec>,
    pub n_list: Vec<usize>,
    pub backend: ValueKind,
    pub output: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub theorem: Option<Envelope>,
    pub trend: TrendConfig,
    pub seed: Option<u64>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn parse_family(flag: &str, s: &str) -> Result<FamilySpec> {
    s.parse::<FamilySpec>().map_err(|e| match e {
        Error::Usage(m) => usage(format!("--{flag}: {m}")),
        other => other,
    })
}

/// Envelope parameter implied by the families for `kind`: the weakest
/// (smallest) δ or β among families of the matching shape.
fn family_parameter(kind: BoundKind, fams: &[&FamilySpec]) -> Option<f64> {
    fams.iter()
        .filter_map(|f| match (kind, f) {
            (BoundKind::PowerDelta, FamilySpec::Power(d)) => Some(*d),
            (BoundKind::LogBeta, FamilySpec::Log(b)) => Some(*b),
            _ => None,
        })
        .reduce(f64::min)
}

fn resolve_theorem(args: &TheoremArgs, f: &FamilySpec, g: &FamilySpec) -> Result<Option<Envelope>> {
    let fams = [f, g];
    let kind = match &args.theorem {
        Some(k) => Some(k.parse::<BoundKind>().map_err(|_| {
            usage(format!(
                "--theorem: unknown `{k}`; expected power-delta or log-beta"
            ))
        })?),
        None => {
            let shaped = |pred: fn(&FamilySpec) -> bool| {
                fams.iter().all(|f| pred(f) || **f == FamilySpec::Unit)
                    && fams.iter().any(|f| pred(f))
            };
            if shaped(|f| matches!(f, FamilySpec::Power(_))) {
                Some(BoundKind::PowerDelta)
            } else if shaped(|f| matches!(f, FamilySpec::Log(_)))
                && family_parameter(BoundKind::LogBeta, &fams).is_some_and(|b| b > 2.0)
            {
                Some(BoundKind::LogBeta)
            } else {
                None
            }
        }
    };
    let Some(kind) = kind else {
        if args.theorem_param.is_some() {
            return Err(usage("--theorem-param given without --theorem"));
        }
        return Ok(None);
    };
    let param = args
        .theorem_param
        .or_else(|| family_parameter(kind, &fams))
        .ok_or_else(|| {
            usage(format!(
                "--theorem {kind}: no parameter can be inferred from the families; pass --theorem-param"
            ))
        })?;
    match Envelope::new(kind, param) {
        Ok(env) => Ok(Some(env)),
        Err(_) => Err(usage(match kind {
            BoundKind::LogBeta => {
                format!("--theorem log-beta: β = {param} is outside the hypothesis β > 2")
            }
            BoundKind::PowerDelta => {
                format!("--theorem power-delta: δ = {param} is outside the hypothesis δ > 0")
            }
        })),
    }
}

fn resolve_trend(args: &TrendArgs) -> Result<TrendConfig> {
    let mut cfg = TrendConfig::default();
    if let Some(v) = args.slope_slack {
        cfg.slope_slack = v;
    }
    if let Some(v) = args.spread_factor {
        if v < 1.0 {
            return Err(usage("--spread-factor must be >= 1"));
        }
        cfg.spread_factor = v;
    }
    if let Some(v) = args.spearman_max {
        if !(-1.0..=1.0).contains(&v) {
            return Err(usage("--spearman-max must lie in [-1, 1]"));
        }
        cfg.spearman_max = v;
    }
    Ok(cfg)
}

fn check_ascending(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(usage("--N: at least one value required"));
    }
    if n_list.contains(&0) {
        return Err(usage("--N: values must be positive"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("--N: values must be strictly ascending"));
    }
    Ok(())
}

fn exact_capable(f: &FamilySpec) -> bool {
    !matches!(f, FamilySpec::Power(_) | FamilySpec::Log(_))
}

struct Base {
    backend: ValueKind,
    output: OutputFormat,
    output_path: Option<PathBuf>,
    n_max: Option<usize>,
    allow_large_exact: bool,
    seed: Option<u64>,
}

fn base(c: &Common) -> Base {
    Base {
        backend: if c.backend == "exact" {
            ValueKind::Exact
        } else {
            ValueKind::Floating
        },
        output: match c.output.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            _ => OutputFormat::Human,
        },
        output_path: c.output_path.clone(),
        n_max: c.n_max,
        allow_large_exact: c.allow_large_exact,
        seed: c.seed,
    }
}

pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Error::Help(e.to_string()),
            _ => usage(e.to_string().trim_end().to_string()),
        }
    })?;

    let (command, b, h, f, g, n_list, theorem, trend, needed) = match cli.command {
        CliCommand::Csum(a) => {
            let b = base(&a.common);
            match (a.r, a.n, a.r_max) {
                (Some(r), Some(n), None) => {
                    if r == 0 {
                        return Err(usage("--r must be positive"));
                    }
                    (
                        Command::CsumSingle { r, n },
                        b,
                        n,
                        None,
                        None,
                        vec![],
                        None,
                        TrendConfig::default(),
                        r,
                    )
                }
                (None, None, Some(r_max)) => {
                    if r_max == 0 {
                        return Err(usage("--r-max must be positive"));
                    }
                    (
                        Command::CsumRow { r_max },
                        b,
                        a.h,
                        None,
                        None,
                        vec![],
                        None,
                        TrendConfig::default(),
                        r_max,
                    )
                }
                _ => return Err(usage("csum takes either --r and --n, or --h and --r-max")),
            }
        }
        CliCommand::Expand(a) => {
            if a.n == 0 {
                return Err(usage("--N must be positive"));
            }
            let f = parse_family("f", &a.f)?;
            (
                Command::Expand,
                base(&a.common),
                0,
                Some(f),
                None,
                vec![a.n],
                None,
                TrendConfig::default(),
                a.n,
            )
        }
        CliCommand::Conv(a) => {
            let f = parse_family("f", &a.f)?;
            let g = match &a.g {
                Some(g) => parse_family("g", g)?,
                None => f.clone(),
            };
            let theorem = resolve_theorem(&a.theorem, &f, &g)?;
            if a.n == 0 {
                return Err(usage("--N must be positive"));
            }
            if theorem.is_some() && a.n < 2 {
                return Err(usage(
                    "--N must be at least 2 when an envelope is evaluated",
                ));
            }
            if theorem.is_some() && a.h == 0 {
                return Err(usage(
                    "--h 0 is outside the theorems; drop --theorem to compute it",
                ));
            }
            (
                Command::Conv,
                base(&a.common),
                a.h,
                Some(f),
                Some(g),
                vec![a.n],
                theorem,
                TrendConfig::default(),
                a.n + a.h,
            )
        }
        CliCommand::Sweep(a) => {
            let f = parse_family("f", &a.f)?;
            let g = match &a.g {
                Some(g) => parse_family("g", g)?,
                None => f.clone(),
            };
            let theorem = resolve_theorem(&a.theorem, &f, &g)?.ok_or_else(|| {
                usage("sweep needs an envelope: pass --theorem (and --theorem-param if needed)")
            })?;
            check_ascending(&a.n)?;
            if a.n.len() < 5 {
                return Err(usage("--N: a sweep needs at least 5 values"));
            }
            if a.n[0] < 2 {
                return Err(usage("--N: sweep values must be >= 2"));
            }
            if a.h == 0 {
                return Err(usage("--h must be positive for a sweep"));
            }
            let trend = resolve_trend(&a.trend)?;
            let top = *a.n.last().unwrap() + a.h;
            (
                Command::Sweep,
                base(&a.common),
                a.h,
                Some(f),
                Some(g),
                a.n,
                Some(theorem),
                trend,
                top,
            )
        }
        CliCommand::Ingham(a) => {
            check_ascending(&a.n)?;
            if a.h == 0 {
                return Err(usage("--h must be positive"));
            }
            if a.n[0] < 2 {
                return Err(usage("--N: values must be >= 2"));
            }
            let top = *a.n.last().unwrap() + a.h;
            (
                Command::Ingham,
                base(&a.common),
                a.h,
                None,
                None,
                a.n,
                None,
                TrendConfig::default(),
                top,
            )
        }
        CliCommand::Decay(a) => {
            check_ascending(&a.n)?;
            let f = parse_family("f", &a.f)?;
            let trend = resolve_trend(&a.trend)?;
            let command = match &a.lemma2 {
                Some(spec) => {
                    let (dir, val) = spec
                        .split_once(':')
                        .ok_or_else(|| usage("--lemma2 expects forward:α or backward:β"))?;
                    let exponent: f64 = val
                        .parse()
                        .map_err(|_| usage(format!("--lemma2: `{val}` is not a number")))?;
                    if !(exponent > 1.0 && exponent.is_finite()) {
                        return Err(usage("--lemma2: the exponent must exceed 1"));
                    }
                    let direction = match dir {
                        "forward" => Lemma2Direction::Forward,
                        "backward" => Lemma2Direction::Backward,
                        _ => return Err(usage("--lemma2 expects forward:α or backward:β")),
                    };
                    Command::Lemma2 {
                        direction,
                        exponent,
                    }
                }
                None => {
                    if a.n.len() != 1 {
                        return Err(usage("--N: a decay fit takes a single support"));
                    }
                    let model = a.model.parse::<DecayModel>().map_err(|_| {
                        usage(format!(
                            "--model: unknown `{}`; expected power, log or fprime-log",
                            a.model
                        ))
                    })?;
                    Command::DecayFit { model }
                }
            };
            let top = *a.n.last().unwrap();
            (
                command,
                base(&a.common),
                0,
                Some(f),
                None,
                a.n,
                None,
                trend,
                top,
            )
        }
    };

    if b.backend == ValueKind::Exact {
        for fam in f.iter().chain(g.iter()) {
            if !exact_capable(fam) {
                return Err(usage(format!(
                    "--backend exact: family `{fam}` has irrational values; use --backend float"
                )));
            }
        }
        if matches!(command, Command::Lemma2 { .. }) {
            return Err(usage(
                "--backend exact: sup-ratio checks run on the float backend",
            ));
        }
        let top_n = n_list.iter().copied().max().unwrap_or(0);
        if top_n > EXACT_MAX_N && !b.allow_large_exact {
            return Err(usage(format!(
                "--backend exact is limited to N <= {EXACT_MAX_N}; pass --allow-large-exact to override"
            )));
        }
    }

    let n_max = match b.n_max {
        Some(m) if m < needed => {
            return Err(usage(format!(
                "--n-max {m} is below the required extent {needed}"
            )));
        }
        Some(m) => m,
        None => needed.max(1),
    };

    Ok(RunConfig {
        command,
        n_max,
        h,
        f,
        g,
        n_list,
        backend: b.backend,
        output: b.output,
        output_path: b.output_path,
        theorem,
        trend,
        seed: b.seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsumValue {
    pub r: usize,
    pub n: usize,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsumRowOutput {
    pub h: usize,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandOutput {
    pub label: String,
    pub support: usize,
    pub backend: ValueKind,
    pub fprime: Vec<Value>,
    pub fhat: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    #[serde(flatten)]
    pub result: SweepResult,
    pub verdict: TrendVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Output {
    pub direction: Lemma2Direction,
    pub exponent: f64,
    pub checks: Vec<SupRatioCheck>,
    pub spread: Option<f64>,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Csum(CsumValue),
    CsumRow(CsumRowOutput),
    Expand(ExpandOutput),
    Conv(ConvolutionReport),
    Sweep(SweepOutput),
    Ingham { h: usize, rows: Vec<InghamRow> },
    DecayFit(DecayFit),
    Lemma2(Lemma2Output),
}

fn family_of(spec: &Option<FamilySpec>, support: usize) -> Result<crate::family::Family> {
    spec.as_ref()
        .expect("validated by parse_config")
        .resolve(support)
}

fn run_typed<S: Scalar>(cfg: &RunConfig, tables: &SieveTables) -> Result<Output> {
    let n_max = cfg.n_max;
    Ok(match &cfg.command {
        Command::Expand => {
            let n = cfg.n_list[0];
            let fam = family_of(&cfg.f, n)?;
            let fprime = fam.fprime::<S>(n, tables)?;
            let exp = expansion_coeffs(&fprime, n)?;
            Output::Expand(ExpandOutput {
                label: fam.label(),
                support: n,
                backend: S::KIND,
                fprime: fprime.as_slice().iter().map(Scalar::to_value).collect(),
                fhat: exp.as_slice().iter().map(Scalar::to_value).collect(),
            })
        }
        Command::Conv => {
            let n = cfg.n_list[0];
            let f = family_of(&cfg.f, n_max)?;
            let g = family_of(&cfg.g, n_max)?;
            let p = ConvolutionProblem::new(
                f.fprime::<S>(n, tables)?,
                g.fprime::<S>(n + cfg.h, tables)?,
                n,
                cfg.h,
            )?;
            Output::Conv(report(&p, cfg.theorem.as_ref(), tables)?)
        }
        Command::Sweep => {
            let f = family_of(&cfg.f, n_max)?;
            let g = family_of(&cfg.g, n_max)?;
            let theorem = cfg.theorem.expect("validated by parse_config");
            let result = error_sweep::<S>(&f, &g, theorem, cfg.h, &cfg.n_list, tables)?;
            let verdict = result.judge(&cfg.trend);
            Output::Sweep(SweepOutput { result, verdict })
        }
        Command::DecayFit { model } => {
            let n = cfg.n_list[0];
            let fam = family_of(&cfg.f, n)?;
            let fprime = fam.fprime::<S>(n, tables)?;
            let fit = match model {
                DecayModel::FprimeLog => fit_decay_table(&fprime, *model)?,
                _ => fit_decay(&expansion_coeffs(&fprime, n)?, *model)?,
            };
            Output::DecayFit(fit)
        }
        _ => unreachable!("backend-independent commands are dispatched in run"),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Output> {
    let tables = SieveTables::build(cfg.n_max)?;
    match &cfg.command {
        Command::CsumSingle { r, n } => Ok(Output::Csum(CsumValue {
            r: *r,
            n: *n,
            value: ramanujan_sum(*r, *n, &tables)?,
        })),
        Command::CsumRow { r_max } => Ok(Output::CsumRow(CsumRowOutput {
            h: cfg.h,
            values: cr_row(cfg.h, *r_max, &tables)?.as_slice().to_vec(),
        })),
        Command::Ingham => Ok(Output::Ingham {
            h: cfg.h,
            rows: ingham_check(cfg.h, &cfg.n_list, &tables)?,
        }),
        Command::Lemma2 {
            direction,
            exponent,
        } => {
            let checks = match direction {
                Lemma2Direction::Forward => lemma2_forward_sweep(*exponent, &cfg.n_list, &tables)?,
                Lemma2Direction::Backward => {
                    lemma2_backward_sweep(*exponent, &cfg.n_list, &tables)?
                }
            };
            let ratios: Vec<f64> = checks.iter().filter_map(|c| c.ratio).collect();
            let spread = spread(ratios);
            Ok(Output::Lemma2(Lemma2Output {
                direction: *direction,
                exponent: *exponent,
                bounded: spread.is_some_and(|s| s <= cfg.trend.spread_factor),
                checks,
                spread,
            }))
        }
        _ => match cfg.backend {
            ValueKind::Exact => run_typed::<Exact>(cfg, &tables),
            ValueKind::Floating => run_typed::<f64>(cfg, &tables),
        },
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(render_f64).unwrap_or_default()
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Serialize(e.to_string()))
}

const CONV_HEADER: &str = "N,h,brute_force,main_term,error,envelope,ratio";

fn emit_csv(out: &Output) -> String {
    let mut s = String::new();
    match out {
        Output::Csum(c) => {
            s.push_str("r,n,c\n");
            let _ = writeln!(s, "{},{},{}", c.r, c.n, c.value);
        }
        Output::CsumRow(row) => {
            s.push_str("r,h,c\n");
            for (i, v) in row.values.iter().enumerate() {
                let _ = writeln!(s, "{},{},{}", i + 1, row.h, v);
            }
        }
        Output::Expand(e) => {
            s.push_str("r,fprime,fhat\n");
            for (i, (a, b)) in e.fprime.iter().zip(&e.fhat).enumerate() {
                let _ = writeln!(s, "{},{},{}", i + 1, a, b);
            }
        }
        Output::Conv(r) => {
            s.push_str(CONV_HEADER);
            s.push('\n');
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.n,
                r.h,
                r.brute_force,
                r.main_term,
                r.error,
                opt(r.envelope),
                opt(r.ratio)
            );
        }
        Output::Sweep(sw) => {
            s.push_str(CONV_HEADER);
            s.push('\n');
            for row in &sw.result.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    row.n,
                    sw.result.h,
                    row.brute_force,
                    row.main_term,
                    row.error,
                    render_f64(row.envelope),
                    render_f64(row.ratio)
                );
            }
        }
        Output::Ingham { h, rows } => {
            s.push_str("N,h,lhs,rhs,ratio\n");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.n,
                    h,
                    r.lhs,
                    render_f64(r.rhs),
                    render_f64(r.ratio)
                );
            }
        }
        Output::DecayFit(fit) => {
            s.push_str("model,exponent,constant,max_ratio,r_min,r_max,points,residual_rms\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                serde_json::to_value(fit.model)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                render_f64(fit.exponent),
                render_f64(fit.constant),
                render_f64(fit.max_ratio),
                fit.sample_range.0,
                fit.sample_range.1,
                fit.points,
                render_f64(fit.residual_rms)
            );
        }
        Output::Lemma2(l) => {
            s.push_str("support,hypothesis_sup,conclusion_sup,ratio\n");
            for c in &l.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    c.support,
                    render_f64(c.hypothesis_sup),
                    render_f64(c.conclusion_sup),
                    opt(c.ratio)
                );
            }
        }
    }
    s
}

fn emit_json(out: &Output) -> Result<String> {
    match out {
        Output::Csum(c) => json(c),
        Output::CsumRow(r) => json(r),
        Output::Expand(e) => json(e),
        Output::Conv(r) => json(r),
        Output::Sweep(s) => json(s),
        Output::Ingham { h, rows } => json(&serde_json::json!({ "h": h, "rows": rows })),
        Output::DecayFit(f) => json(f),
        Output::Lemma2(l) => json(l),
    }
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                if i == 0 {
                    format!("{cell:<w$}", w = widths[i])
                } else {
                    format!("{cell:>w$}", w = widths[i])
                }
            })
            .collect();
        s.push_str(line.join("  ").trim_end());
        s.push('\n');
    }
    s
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "exceeded"
    }
}

fn emit_human(out: &Output) -> String {
    match out {
        Output::Csum(c) => format!("c_{}({}) = {}\n", c.r, c.n, c.value),
        Output::CsumRow(row) => {
            let mut rows = vec![vec!["r".to_string(), format!("c_r({})", row.h)]];
            rows.extend(row.values.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), v.to_string()]));
            table(&rows)
        }
        Output::Expand(e) => {
            let mut s = format!("{} relative to N = {} ({})\n", e.label, e.support, e.backend);
            let mut rows = vec![vec!["r".to_string(), "f'(r)".to_string(), "f^(r)".to_string()]];
            rows.extend(
                e.fprime
                    .iter()
                    .zip(&e.fhat)
                    .enumerate()
                    .map(|(i, (a, b))| vec![(i + 1).to_string(), a.to_string(), b.to_string()]),
            );
            s.push_str(&table(&rows));
            s
        }
        Output::Conv(r) => {
            let mut s = format!("f = {}, g = {}, N = {}, h = {} ({})\n", r.f, r.g, r.n, r.h, r.backend);
            let theorem = r
                .theorem
                .map(|t| format!("{}:{}", t.kind, t.parameter))
                .unwrap_or_else(|| "-".into());
            let rows = vec![
                vec!["brute force".to_string(), r.brute_force.to_string()],
                vec!["main term".to_string(), r.main_term.to_string()],
                vec!["error".to_string(), r.error.to_string()],
                vec!["theorem".to_string(), theorem],
                vec!["envelope".to_string(), r.envelope.map(render_f64).unwrap_or_else(|| "-".into())],
                vec!["ratio".to_string(), r.ratio.map(render_f64).unwrap_or_else(|| "-".into())],
            ];
            s.push_str(&table(&rows));
            s
        }
        Output::Sweep(sw) => {
            let r = &sw.result;
            let mut s = format!(
                "f = {}, g = {}, h = {}, envelope {}:{}\n",
                r.f, r.g, r.h, r.theorem.kind, r.theorem.parameter
            );
            let mut rows = vec![["N", "brute_force", "main_term", "error", "envelope", "ratio"]
                .map(String::from)
                .to_vec()];
            rows.extend(r.rows.iter().map(|row| {
                vec![
                    row.n.to_string(),
                    row.brute_force.to_string(),
                    row.main_term.to_string(),
                    row.error.to_string(),
                    render_f64(row.envelope),
                    render_f64(row.ratio),
                ]
            }));
            s.push_str(&table(&rows));
            let v = &sw.verdict;
            match r.fitted_slope {
                Some(slope) => {
                    let _ = writeln!(
                        s,
                        "fitted slope {} vs envelope slope {} ({})",
                        render_f64(slope),
                        render_f64(r.envelope_slope),
                        pass(v.slope_ok.unwrap_or(false))
                    );
                }
                None => {
                    let _ = writeln!(
                        s,
                        "fitted slope: degenerate ({} of {} rows have zero error)",
                        r.zero_error_rows,
                        r.rows.len()
                    );
                }
            }
            let _ = writeln!(
                s,
                "tail Spearman {} ({}), tail spread {} ({})",
                opt(v.tail_spearman),
                pass(v.spearman_ok),
                opt(v.tail_spread),
                pass(v.spread_ok)
            );
            s
        }
        Output::Ingham { h, rows } => {
            let mut t = vec![["N", "lhs", "rhs", "ratio"].map(String::from).to_vec()];
            t.extend(rows.iter().map(|r| {
                vec![r.n.to_string(), r.lhs.to_string(), render_f64(r.rhs), render_f64(r.ratio)]
            }));
            format!("h = {h}\n{}", table(&t))
        }
        Output::DecayFit(f) => format!(
            "model {:?} over r = {}..={} ({} points)\nexponent  {}\nconstant  {}\nmax ratio {}\nrms resid {}\n",
            f.model,
            f.sample_range.0,
            f.sample_range.1,
            f.points,
            render_f64(f.exponent),
            render_f64(f.constant),
            render_f64(f.max_ratio),
            render_f64(f.residual_rms)
        ),
        Output::Lemma2(l) => {
            let mut t = vec![["support", "hypothesis sup", "conclusion sup", "ratio"].map(String::from).to_vec()];
            t.extend(l.checks.iter().map(|c| {
                vec![
                    c.support.to_string(),
                    render_f64(c.hypothesis_sup),
                    render_f64(c.conclusion_sup),
                    opt(c.ratio),
                ]
            }));
            format!(
                "{:?} check, exponent {}\n{}spread {} ({})\n",
                l.direction,
                l.exponent,
                table(&t),
                opt(l.spread),
                if l.bounded { "bounded" } else { "not bounded" }
            )
        }
    }
}

pub fn emit(out: &Output, cfg: &RunConfig) -> Result<String> {
    match cfg.output {
        OutputFormat::Csv => Ok(emit_csv(out)),
        OutputFormat::Json => emit_json(out),
        OutputFormat::Human => Ok(emit_human(out)),
    }
}

/// Parses, runs and writes output; the binary is a thin wrapper around this.
pub fn main_with<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = parse_config(argv)?;
    let out = run(&cfg)?;
    let text = emit(&out, &cfg)?;
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &str) -> Result<RunConfig> {
        parse_config(std::iter::once("ramexp").chain(args.split_whitespace()))
    }

    #[test]
    fn conv_happy_path() {
        let c = cfg("conv --f divisor --g divisor --N 1000 --h 2 --backend float --output json")
            .unwrap();
        assert_eq!(c.command, Command::Conv);
        assert_eq!(c.n_max, 1002);
        assert_eq!(c.output, OutputFormat::Json);
        assert_eq!(c.theorem, None);
    }

    #[test]
    fn sweep_happy_path() {
        let c = cfg("sweep --f power:0.5 --g power:0.5 --h 1 --N 1024,4096,16384,65536,262144")
            .unwrap();
        assert_eq!(c.n_list, vec![1024, 4096, 16384, 65536, 262144]);
        assert_eq!(c.n_max, 262145);
        assert_eq!(
            c.theorem,
            Some(Envelope::new(BoundKind::PowerDelta, 0.5).unwrap())
        );
    }

    #[test]
    fn log_beta_outside_hypothesis() {
        let err = cfg("conv --f log:1.5 --theorem log-beta").unwrap_err();
        assert!(matches!(err, Error::Usage(ref m) if m.contains("--theorem")));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn usage_errors() {
        for args in [
            "conv --f gauss",
            "sweep --f power:0.5 --N 10,20,15,40,50",
            "sweep --f power:0.5 --N 10,20,30",
            "conv --f power:0.5 --backend exact --N 10",
            "conv --f divisor --backend exact --N 20000",
            "conv --f divisor --N 100 --n-max 50",
            "csum --r 3",
            "decay --f divisor --N 100 --model cubic",
            "conv --f divisor --theorem power-delta",
            "bogus",
        ] {
            let e = cfg(args).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{args}: {e}");
        }
        assert!(cfg("conv --f divisor --backend exact --N 20000 --allow-large-exact").is_ok());
    }

    #[test]
    fn help_is_not_a_failure() {
        assert_eq!(cfg("--help").unwrap_err().exit_code(), 0);
    }

    #[test]
    fn theorem_inference() {
        let c = cfg("conv --f log:3 --g log:4 --N 100").unwrap();
        assert_eq!(
            c.theorem,
            Some(Envelope::new(BoundKind::LogBeta, 3.0).unwrap())
        );
        let c = cfg("conv --f log:1.5 --N 100").unwrap();
        assert_eq!(c.theorem, None);
        let c = cfg("conv --f unit --g power:0.25 --N 100").unwrap();
        assert_eq!(
            c.theorem,
            Some(Envelope::new(BoundKind::PowerDelta, 0.25).unwrap())
        );
        let c = cfg("conv --f divisor --theorem power-delta --theorem-param 0.5 --N 100").unwrap();
        assert_eq!(c.theorem.unwrap().parameter, 0.5);
    }

    fn run_str(args: &str) -> String {
        let c = cfg(args).unwrap();
        emit(&run(&c).unwrap(), &c).unwrap()
    }

    #[test]
    fn unit_conv_csv_row() {
        let s = run_str("conv --f unit --g unit --N 10 --h 1 --output csv");
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some(CONV_HEADER));
        assert!(lines.next().unwrap().starts_with("10,1,10,10,0,"));
    }

    #[test]
    fn divisor_conv_human() {
        let s = run_str("conv --f divisor --N 4 --h 2 --backend exact");
        assert!(s.contains("brute force  24\n"), "{s}");
        assert!(s.contains("main term    22\n"), "{s}");
        assert!(s.contains("error         2\n"), "{s}");
    }

    #[test]
    fn csum_outputs() {
        assert_eq!(run_str("csum --r 4 --n 2"), "c_4(2) = -2\n");
        let csv = run_str("csum --h 2 --r-max 4 --output csv");
        assert_eq!(csv, "r,h,c\n1,2,1\n2,2,1\n3,2,-1\n4,2,-2\n");
    }

    #[test]
    fn expand_exact_csv() {
        let csv = run_str("expand --f divisor --N 4 --backend exact --output csv");
        assert_eq!(csv, "r,fprime,fhat\n1,1,25/12\n2,1,3/4\n3,1,1/3\n4,1,1/4\n");
    }
}
