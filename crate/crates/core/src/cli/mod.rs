//! Command-line front end.
//!
//! Start states are written as comma-separated counts in the order
//! `black,white` for two-color urns (the `(m, n)` order of the formulas'
//! statements) and `n_1,...,n_r` for r-color urns. Output states use the
//! same order.

pub mod report;
pub mod spec_file;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::closed_form;
use crate::dp;
use crate::error::{Result, UrnError};
use crate::limits::ConvergenceCase;
use crate::montecarlo::{self, SimConfig};
use crate::presets::ModelPreset;
use crate::rational::{self, ExactRational};
use crate::urn::{State, UrnSpec};

use report::{Format, FormulaReport, KsRow, LimitReport, PgfOut, SimulateReport, SolveReport};
use spec_file::SpecFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NON_TERMINATING: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "urnkit", version, about = "Exact and simulated absorption laws of diminishing urns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact absorption distribution and white-count moments.
    Solve(SolveArgs),
    /// Closed-form value for a named urn.
    Formula(FormulaArgs),
    /// Monte Carlo estimate of the absorption distribution.
    Simulate(SimulateArgs),
    /// Kolmogorov-Smirnov distance to the limiting law over growing sizes.
    LimitCheck(LimitArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// pills, rpills:R, pills-variant, cannibal, cannibal-unmodified, okcorral, sampling
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    pub model: Option<ModelPreset>,
    /// JSON urn description
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Write the resolved urn description as JSON to this path (`-` for stderr)
    #[arg(long)]
    pub dump_spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated start counts
    #[arg(long, value_parser = parse_counts)]
    pub start: Counts,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Highest factorial moment reported
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Evaluate the white-count pgf at v (same as --v1 1 --v2 v)
    #[arg(long, conflicts_with_all = ["v1", "v2"])]
    pub v: Option<f64>,
    /// Black-count variable of the bivariate pgf
    #[arg(long, requires = "v2")]
    pub v1: Option<f64>,
    /// White-count variable of the bivariate pgf
    #[arg(long, requires = "v1")]
    pub v2: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Pgf,
    Expectation,
    Pmf,
    Survive,
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    #[arg(long)]
    pub model: ModelPreset,
    #[arg(long, value_parser = parse_counts)]
    pub start: Counts,
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    /// pgf argument
    #[arg(long)]
    pub v: Option<f64>,
    /// pmf argument (number of white balls left)
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_counts)]
    pub start: Counts,
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scaling {
    /// pills, black count grows: `X / (n/m + log m)` against Exponential(1)
    Exponential,
    /// pills, white count grows: `X / n` against Beta(1, m)
    Beta,
    /// pills-variant, black count `2m` grows: `X / (n/sqrt(m) + 2 sqrt(m))` against Rayleigh
    Rayleigh,
    /// pills-variant, white count grows: `X / n` against sqrt(Beta(1, m))
    SqrtBeta,
    /// cannibal, both counts grow: standardized against N(0, 1)
    Normal,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long)]
    pub model: ModelPreset,
    #[arg(long, value_enum)]
    pub scaling: Scaling,
    /// Comma-separated growing sizes
    #[arg(long, value_parser = parse_counts)]
    pub sizes: Counts,
    /// The count held fixed: white for exponential/rayleigh (default 0),
    /// black for beta (default 3), half the black count for sqrt-beta (default 2)
    #[arg(long)]
    pub fixed: Option<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Parsed comma-separated counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts(pub Vec<u32>);

fn parse_counts(text: &str) -> std::result::Result<Counts, String> {
    text.split(',')
        .map(|c| c.trim().parse::<u32>().map_err(|e| format!("`{c}`: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Counts)
}

/// Parses `args` (program name first), runs the command writing to `out`
/// and diagnostics to `err`, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(error: &UrnError) -> i32 {
    match error {
        UrnError::NonTerminating { .. } => EXIT_NON_TERMINATING,
        _ => EXIT_USAGE,
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Solve(args) => solve(args, out, err),
        Command::Formula(args) => formula(args, out),
        Command::Simulate(args) => simulate(args, out, err),
        Command::LimitCheck(args) => limit_check(args, out),
    }
}

fn resolve_model(args: &ModelArgs, err: &mut dyn Write) -> Result<(String, UrnSpec)> {
    let (name, spec) = match (&args.model, &args.spec) {
        (Some(preset), _) => (preset.to_string(), preset.spec()),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| {
                UrnError::InvalidSpec(format!("cannot read {}: {e}", path.display()))
            })?;
            (path.display().to_string(), SpecFile::parse(&text)?)
        }
        (None, None) => return Err(UrnError::InvalidArgument("--model or --spec is required".into())),
    };
    if let Some(path) = &args.dump_spec {
        let text = SpecFile::render(&spec);
        if path.as_os_str() == "-" {
            writeln!(err, "{text}").map_err(io_error)?;
        } else {
            fs::write(path, text + "\n").map_err(|e| {
                UrnError::InvalidArgument(format!("cannot write {}: {e}", path.display()))
            })?;
        }
    }
    Ok((name, spec))
}

fn start_state(spec: &UrnSpec, counts: &Counts) -> Result<State> {
    let state = State::from_display_counts(counts.0.clone());
    if state.colors() != spec.colors() {
        return Err(UrnError::DimensionMismatch(state, spec.colors(), counts.0.len()));
    }
    Ok(state)
}

fn io_error(e: std::io::Error) -> UrnError {
    UrnError::InvalidArgument(format!("write failed: {e}"))
}

fn csv_error(e: csv::Error) -> UrnError {
    UrnError::InvalidArgument(format!("write failed: {e}"))
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| UrnError::InvalidArgument(format!("write failed: {e}")))?;
    writeln!(out).map_err(io_error)
}

fn solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let (name, spec) = resolve_model(&args.model, err)?;
    let start = start_state(&spec, &args.start)?;
    let dist = dp::absorption_distribution(&spec, &start)?;
    let moments = dp::white_marginal_moments(&dist, args.order)?;
    let pgf = match (args.v, args.v1, args.v2) {
        (Some(v), _, _) => Some((1.0, v)),
        (None, Some(v1), Some(v2)) => Some((v1, v2)),
        _ => None,
    }
    .map(|(v1, v2)| PgfOut { v1, v2, value: dp::pgf_eval(&dist, v1, v2) });
    let report = SolveReport::new(name, &dist, &moments, pgf);
    match args.format {
        Format::Csv => report.write_csv(out).map_err(csv_error),
        Format::Json => write_json(out, &report),
    }
}

fn unsupported(model: ModelPreset, quantity: Quantity) -> UrnError {
    UrnError::InvalidArgument(format!("no closed form for {quantity:?} of the {model} urn"))
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| UrnError::InvalidArgument(format!("this quantity needs --{flag}")))
}

enum FormulaValue {
    Exact(ExactRational),
    Approx(f64, f64),
}

fn formula(args: FormulaArgs, out: &mut dyn Write) -> Result<()> {
    let spec = args.model.spec();
    let start = start_state(&spec, &args.start)?;
    let (n, m) = (start.white(), start.black());
    let value = match (args.model, args.quantity) {
        (ModelPreset::Pills, Quantity::Pgf) => FormulaValue::Approx(
            closed_form::pills_pgf(n, m, required(args.v, "v")?)?,
            closed_form::PILLS_PGF_TOL,
        ),
        (ModelPreset::Pills, Quantity::Expectation) => {
            FormulaValue::Exact(closed_form::pills_expectation(n, m)?)
        }
        (ModelPreset::RPills(r), Quantity::Pgf) if r >= 3 => FormulaValue::Approx(
            closed_form::rpills_pgf(start.counts(), required(args.v, "v")?)?,
            closed_form::RPILLS_PGF_TOL,
        ),
        (ModelPreset::RPills(2), _) => {
            return Err(UrnError::InvalidArgument("rpills:2 is the pills urn; use --model pills".into()))
        }
        (ModelPreset::PillsVariant, Quantity::Expectation) => {
            if m % 2 != 0 {
                return Err(UrnError::InvalidArgument(
                    "the variant expectation needs an even black count 2m".into(),
                ));
            }
            FormulaValue::Exact(closed_form::variant_pills_expectation(n, m / 2)?)
        }
        (ModelPreset::Cannibal, Quantity::Pmf) => {
            FormulaValue::Exact(closed_form::cannibal_pmf(n, m, required(args.k, "k")?)?)
        }
        (ModelPreset::OkCorral, Quantity::Survive) => {
            FormulaValue::Exact(closed_form::okcorral_survive_prob(n, m)?)
        }
        (ModelPreset::OkCorral, Quantity::Pmf) => {
            FormulaValue::Exact(closed_form::okcorral_survivor_pmf(n, m, required(args.k, "k")?)?)
        }
        (ModelPreset::Sampling, Quantity::Survive) => {
            FormulaValue::Exact(closed_form::sampling_survive_prob(n, m)?)
        }
        (ModelPreset::Sampling, Quantity::Pmf) => {
            FormulaValue::Exact(closed_form::sampling_pmf(n, m, required(args.k, "k")?)?)
        }
        (model, quantity) => return Err(unsupported(model, quantity)),
    };
    let quantity = args.quantity.to_possible_value().expect("no skipped variants");
    let (value, float, exact, tolerance) = match value {
        FormulaValue::Exact(q) => (rational::format(&q), rational::to_f64(&q), true, None),
        FormulaValue::Approx(x, tol) => (x.to_string(), x, false, Some(tol)),
    };
    let report = FormulaReport {
        model: args.model.to_string(),
        start: start.display_counts(),
        quantity: quantity.get_name().to_string(),
        value,
        float,
        exact,
        tolerance,
    };
    match args.format {
        Format::Csv => report.write_csv(out).map_err(csv_error),
        Format::Json => write_json(out, &report),
    }
}

fn simulate(args: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let (name, spec) = resolve_model(&args.model, err)?;
    let start = start_state(&spec, &args.start)?;
    let cfg = SimConfig { spec, start: start.clone(), replications: args.reps, seed: args.seed };
    let emp = montecarlo::run_batch(&cfg)?;
    let report = SimulateReport::new(name, &start, args.seed, &emp);
    match args.format {
        Format::Csv => report.write_csv(out).map_err(csv_error),
        Format::Json => write_json(out, &report),
    }
}

fn convergence_case(model: ModelPreset, scaling: Scaling, fixed: Option<u32>) -> Result<ConvergenceCase> {
    let case = match (model, scaling) {
        (ModelPreset::Pills, Scaling::Exponential) => {
            ConvergenceCase::PillsExponential { white: fixed.unwrap_or(0) }
        }
        (ModelPreset::Pills, Scaling::Beta) => ConvergenceCase::PillsBeta { black: fixed.unwrap_or(3) },
        (ModelPreset::PillsVariant, Scaling::Rayleigh) => {
            ConvergenceCase::VariantRayleigh { white: fixed.unwrap_or(0) }
        }
        (ModelPreset::PillsVariant, Scaling::SqrtBeta) => {
            ConvergenceCase::VariantSqrtBeta { half_black: fixed.unwrap_or(2) }
        }
        (ModelPreset::Cannibal, Scaling::Normal) => ConvergenceCase::CannibalNormal,
        (model, scaling) => {
            return Err(UrnError::InvalidArgument(format!(
                "no limit law for the {model} urn under {scaling:?} scaling"
            )))
        }
    };
    let bad_fixed = match case {
        ConvergenceCase::PillsBeta { black: 0 } | ConvergenceCase::VariantSqrtBeta { half_black: 0 } => true,
        ConvergenceCase::CannibalNormal => fixed.is_some(),
        _ => false,
    };
    if bad_fixed {
        return Err(UrnError::InvalidArgument(format!("--fixed is not valid for {case:?}")));
    }
    Ok(case)
}

fn limit_check(args: LimitArgs, out: &mut dyn Write) -> Result<()> {
    let case = convergence_case(args.model, args.scaling, args.fixed)?;
    let min_size = if case == ConvergenceCase::CannibalNormal { 4 } else { 1 };
    if let Some(&bad) = args.sizes.0.iter().find(|&&s| s < min_size) {
        return Err(UrnError::InvalidArgument(format!("size {bad} is below {min_size}")));
    }
    let rows = args
        .sizes
        .0
        .iter()
        .map(|&size| {
            Ok(KsRow { size, start: case.start(size).display_counts(), ks: case.ks_at(size)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let decreasing = rows.windows(2).all(|w| w[1].ks < w[0].ks);
    let report = LimitReport {
        model: args.model.to_string(),
        scaling: args.scaling.to_possible_value().expect("no skipped variants").get_name().into(),
        law: case.law().to_string(),
        rows,
        decreasing,
    };
    match args.format {
        Format::Csv => report.write_csv(out).map_err(csv_error),
        Format::Json => write_json(out, &report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("urnkit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn counts_parse() {
        assert_eq!(parse_counts("1, 2,3").unwrap(), Counts(vec![1, 2, 3]));
        assert!(parse_counts("1,-2").is_err());
        assert!(parse_counts("").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["solve", "--start", "1,1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["solve", "--model", "nope", "--start", "1,1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["solve", "--model", "pills", "--start", "1,1,1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn unsupported_pairs_exit_two() {
        let (code, _, err) = run_str(&["formula", "--model", "cannibal-unmodified", "--start", "3,3", "--quantity", "pmf", "--k", "2"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        let (code, _, _) = run_str(&["limit-check", "--model", "okcorral", "--scaling", "normal", "--sizes", "10,20"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn case_selection() {
        assert_eq!(
            convergence_case(ModelPreset::Pills, Scaling::Beta, None).unwrap(),
            ConvergenceCase::PillsBeta { black: 3 }
        );
        assert!(convergence_case(ModelPreset::Pills, Scaling::Rayleigh, None).is_err());
        assert!(convergence_case(ModelPreset::Cannibal, Scaling::Normal, Some(2)).is_err());
    }
}
