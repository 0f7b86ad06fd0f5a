//! The `mockgw` command line: argument parsing, configuration, data loading
//! and the table/report writers behind each subcommand.
//!
//! Exit codes: 0 success or verification pass, 1 verification fail,
//! 2 missing or invalid input data, 3 numerical failure.

mod config;
mod data;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use config::{parse_tau, Config, Overrides};
pub use data::{load_catalog, Rank3DataFile};

use crate::genseries::{
    bps_invert, chern_range, BpsLattice, ChTriple, GenError, IntegralityReport, SeriesCatalog, SeriesSpec,
};
use crate::mockverify::pipeline::{run_verification, Target, VerifyError, VerifyOutcome, VerifyRequest};
use crate::mockverify::{Element, MockError, TauPoint};
use crate::numtheory::HurwitzTable;
use crate::qseries::{QSeries, Rational};
use crate::toricgeo::{ChernData, CorrespondenceRecord, Fan, GeometryError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("data: {0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("output: {0}")]
    Output(#[from] io::Error),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Numeric(#[from] MockError),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => EXIT_NUMERIC,
            _ => EXIT_DATA,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Data(g) => CliError::Gen(g),
            VerifyError::Numeric(m) => CliError::Numeric(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mockgw",
    version,
    about = "VW/GW generating series on P² and their mock modularity"
)]
pub struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the q-expansion of h_vw or h_gw.
    Expand(ExpandArgs),
    /// Print the correspondence record of γ = (r, c1, c2).
    Correspond(CorrespondArgs),
    /// Fit the S or T transformation of a generating-series vector.
    Verify(VerifyArgs),
    /// Table of Hurwitz class numbers H(0..=max).
    Hurwitz(HurwitzArgs),
    /// Ω̄ and Ω for γ = (r, c1, 0..=c2max).
    Bps(BpsArgs),
    /// Rays of the fan with their self-intersections.
    Fan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Vw,
    Gw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ExpandArgs {
    #[arg(long, value_enum, default_value = "vw")]
    pub series: SeriesKind,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub c1: i64,
    /// Integer q-steps past the leading exponent (default: the configured truncation order).
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Rank-3 numerator file (repeatable).
    #[arg(long = "data", value_name = "FILE")]
    pub data: Vec<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CorrespondArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub c1: i64,
    #[arg(long)]
    pub c2: i64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long, default_value = "S")]
    pub element: Element,
    /// h, f, or auto (h for rank 1, f otherwise).
    #[arg(long, default_value = "auto")]
    pub target: Target,
    /// Fit the holomorphic series without their completions.
    #[arg(long)]
    pub uncompleted: bool,
    #[arg(long, default_value_t = 3)]
    pub sets: usize,
    #[arg(long, default_value_t = 6)]
    pub fit_points: usize,
    #[arg(long, default_value_t = 6)]
    pub holdout_points: usize,
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[arg(long)]
    pub order: Option<usize>,
    /// Requested significant digits (≤ 16 runs in f64, otherwise double-double).
    #[arg(long)]
    pub digits: Option<u32>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Explicit sample point `re,im` (repeatable); alternate points fit and hold out.
    #[arg(long = "tau", value_parser = parse_tau, allow_hyphen_values = true)]
    pub tau: Vec<TauPoint>,
    #[arg(long = "data", value_name = "FILE")]
    pub data: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HurwitzArgs {
    #[arg(long)]
    pub max: usize,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BpsArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub c1: i64,
    #[arg(long)]
    pub c2max: i64,
    #[arg(long = "data", value_name = "FILE")]
    pub data: Vec<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_DATA } else { EXIT_OK };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn base_config(path: Option<&Path>) -> Result<Config, CliError> {
    match path {
        Some(p) => Config::load_relative(p),
        None => Ok(Config::default()),
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let base = base_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Expand(a) => {
            let cfg = base.apply(&Overrides {
                data_paths: a.data.clone(),
                ..Default::default()
            })?;
            let catalog = load_catalog(&cfg.data_paths)?;
            let order = a.order.unwrap_or(cfg.truncation_order);
            expand(&catalog, a.series, a.r, a.c1, order, a.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Correspond(a) => {
            correspond(&ChernData::new(a.r, a.c1, a.c2), out)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let cfg = base.apply(&Overrides {
                truncation_order: a.order,
                precision_digits: a.digits,
                tolerance: a.tolerance,
                tau_grid: a.tau.clone(),
                data_paths: a.data.clone(),
            })?;
            let catalog = load_catalog(&cfg.data_paths)?;
            let mut req = VerifyRequest::new(a.r, a.element);
            req.target = a.target;
            req.completed = !a.uncompleted;
            req.order = cfg.truncation_order;
            req.precision_digits = cfg.precision_digits;
            req.tolerance = cfg.tolerance;
            req.sets = a.sets;
            req.fit_points = a.fit_points;
            req.holdout_points = a.holdout_points;
            req.seed = a.seed;
            req.tau_grid = cfg.tau_grid.clone();
            let outcome = verify(&catalog, &req, out)?;
            if !outcome.pass {
                writeln!(
                    err,
                    "verification failed: holdout residuals {:?}, matrix spread {:e}, tolerance {:e}",
                    outcome
                        .stability
                        .reports
                        .iter()
                        .map(|r| r.holdout_residual)
                        .collect::<Vec<_>>(),
                    outcome.stability.max_spread,
                    req.tolerance
                )?;
            }
            Ok(if outcome.pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
        }
        Command::Hurwitz(a) => {
            hurwitz(a.max, out)?;
            Ok(EXIT_OK)
        }
        Command::Bps(a) => {
            let cfg = base.apply(&Overrides {
                data_paths: a.data.clone(),
                ..Default::default()
            })?;
            let catalog = load_catalog(&cfg.data_paths)?;
            let report = bps(&catalog, a.r, a.c1, a.c2max, out)?;
            if !report.is_integral() {
                writeln!(err, "{}", report.diagnostic())?;
            }
            Ok(EXIT_OK)
        }
        Command::Fan => {
            fan(&Fan::standard(), out)?;
            Ok(EXIT_OK)
        }
    }
}

/// JSON shape of `expand`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionOutput {
    pub series: SeriesKind,
    pub r: i64,
    pub c1: i64,
    pub order: usize,
    pub expansion: QSeries,
}

pub const EXPAND_CSV_HEADER: &str = "exponent_num,exponent_den,coeff_num,coeff_den";
pub const HURWITZ_CSV_HEADER: &str = "N,H_num,H_den";
pub const BPS_CSV_HEADER: &str = "r,c1,c2,ch2_num,ch2_den,omega_bar_num,omega_bar_den,omega_num,omega_den,integral";
pub const FAN_CSV_HEADER: &str = "x,y,self_intersection";

fn frac_cols(q: &Rational) -> String {
    format!("{},{}", q.numer(), q.denom())
}

pub fn expand_series(
    catalog: &SeriesCatalog,
    kind: SeriesKind,
    r: i64,
    c1: i64,
    order: usize,
) -> Result<QSeries, CliError> {
    let spec = SeriesSpec::new(r, c1, order)?;
    Ok(match kind {
        SeriesKind::Vw => catalog.h_vw(&spec)?,
        SeriesKind::Gw => catalog.h_gw(&spec)?,
    })
}

pub fn expand(
    catalog: &SeriesCatalog,
    kind: SeriesKind,
    r: i64,
    c1: i64,
    order: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let series = expand_series(catalog, kind, r, c1, order)?;
    match format {
        Format::Csv => {
            writeln!(out, "{EXPAND_CSV_HEADER}")?;
            for (e, c) in series.terms() {
                writeln!(out, "{},{}", frac_cols(e), frac_cols(c))?;
            }
        }
        Format::Json => {
            let o = ExpansionOutput {
                series: kind,
                r,
                c1,
                order,
                expansion: series,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&o).expect("serializable"))?;
        }
    }
    Ok(())
}

/// Parses `expand --format csv` output back into `(exponent, coefficient)` pairs.
pub fn parse_expand_csv(text: &str) -> Result<Vec<(Rational, Rational)>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some(EXPAND_CSV_HEADER) {
        return Err(CliError::Data("missing expand CSV header".into()));
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(CliError::Data(format!("bad row {line:?}")));
            }
            let e = crate::qseries::parse_rational(f[0], f[1]).map_err(|e| CliError::Data(e.to_string()))?;
            let c = crate::qseries::parse_rational(f[2], f[3]).map_err(|e| CliError::Data(e.to_string()))?;
            Ok((e, c))
        })
        .collect()
}

pub fn correspond(gamma: &ChernData, out: &mut dyn Write) -> Result<CorrespondenceRecord, CliError> {
    let rec = CorrespondenceRecord::build(&Fan::standard(), gamma)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&rec).expect("serializable"))?;
    Ok(rec)
}

/// Runs the verification and writes its JSON report, pass or fail.
pub fn verify(catalog: &SeriesCatalog, req: &VerifyRequest, out: &mut dyn Write) -> Result<VerifyOutcome, CliError> {
    let outcome = run_verification(catalog, req)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&outcome).expect("serializable"))?;
    Ok(outcome)
}

pub fn hurwitz(max: usize, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{HURWITZ_CSV_HEADER}")?;
    for (n, h) in HurwitzTable::new(max).iter() {
        writeln!(out, "{n},{}", frac_cols(&h))?;
    }
    Ok(())
}

pub fn bps(
    catalog: &SeriesCatalog,
    r: i64,
    c1: i64,
    c2max: i64,
    out: &mut dyn Write,
) -> Result<IntegralityReport, CliError> {
    if c2max < 0 {
        return Err(CliError::Config(format!("c2max must be non-negative, got {c2max}")));
    }
    let classes: Vec<ChernData> = chern_range(r, c1, 0..=c2max).collect();
    let lattice = BpsLattice::from_catalog(catalog, classes.iter().copied())?;
    let omega = bps_invert(&lattice)?;
    let mut rows = std::collections::BTreeMap::new();
    writeln!(out, "{BPS_CSV_HEADER}")?;
    for gamma in &classes {
        let t = ChTriple::from_chern(gamma);
        let bar = &lattice.data[&t];
        let om = &omega[&t];
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            gamma.r,
            gamma.c1,
            gamma.c2,
            frac_cols(&t.ch2),
            frac_cols(bar),
            frac_cols(om),
            om.is_integer()
        )?;
        rows.insert(t, om.clone());
    }
    Ok(IntegralityReport::from_omega(&rows))
}

pub fn fan(fan: &Fan, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{FAN_CSV_HEADER}")?;
    for w in fan.rays() {
        writeln!(out, "{},{},{}", w.x, w.y, fan.self_intersection(*w)?)?;
    }
    Ok(())
}
