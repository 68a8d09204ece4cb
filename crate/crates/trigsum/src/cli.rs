//! Argument parsing and output formatting for the `trigsum` binary.
//!
//! Three subcommands: `sum` (brute-force reference sum), `accelerate` (the
//! full report: direct cost vs transformed cost at each depth), and
//! `estimate-r` (the scale-factor chain alone). All floating-point output is
//! printed with 17 significant digits so results round-trip through text
//! exactly; values whose imaginary part is negligible are printed as plain
//! real numbers.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};

use crate::acceleration::{estimate_r_sequence, RSelectionConfig, StopReason, ValidationReport};
use crate::evaluation::{build_report, oracle_sum, AccelerationReport};
use crate::operators::{TrigKind, TrigPhase};
use crate::sequence::CoefficientSequence;
use crate::transforms::SeriesSpec;
use crate::{Error, Result, Scalar};

/// Relative imaginary-part threshold below which a value prints as real.
const REAL_REPORT_TOL: f64 = 1e-12;

/// Minimum number of values a coefficient file must supply: enough to probe
/// ratios meaningfully past the initial transient.
const MIN_FILE_VALUES: usize = 32;

#[derive(Debug, Parser)]
#[command(
    name = "trigsum",
    version,
    about = "Accelerate slowly convergent trigonometric series"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sum the series directly with a conservative stopping rule.
    Sum {
        #[command(flatten)]
        series: SeriesArgs,
        /// Stop once terms stay a factor 100 below this bound.
        #[arg(long, default_value_t = 1e-14, allow_hyphen_values = true)]
        tail_bound: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Estimate scale factors and compare direct vs transformed term counts.
    Accelerate {
        #[command(flatten)]
        series: SeriesArgs,
        /// Target absolute error for the term counts.
        #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
        tol: f64,
        /// Maximum number of scale factors to estimate (0 = direct only).
        #[arg(long, default_value_t = 3)]
        max_p: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Estimate the scale-factor chain and report why it stopped.
    EstimateR {
        #[command(flatten)]
        series: SeriesArgs,
        /// Maximum number of scale factors to estimate.
        #[arg(long, default_value_t = 3)]
        max_p: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// aₙ = 1/(aⁿ + bⁿ), needs --a and --b
    TwoExp,
    /// aₙ = ρⁿ, needs --rho
    Geometric,
    /// aₙ = n⁻ˢ, needs --s
    Power,
    /// values read from --path, one per line
    File,
}

/// The series description shared by every subcommand.
#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Phase slope α in (αn + β)x.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Phase offset β in (αn + β)x.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    /// Evaluation point; accepts plain numbers or pi literals like "3pi/4".
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Trigonometric factor.
    #[arg(long, value_enum, default_value_t = KindArg::Cos)]
    kind: KindArg,
    /// Coefficient family.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Smaller base for the two-exp family.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Larger base for the two-exp family.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Ratio for the geometric family.
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    /// Exponent for the power family.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Coefficient file for the file family.
    #[arg(long)]
    path: Option<PathBuf>,
}

impl SeriesArgs {
    pub fn build(&self) -> Result<SeriesSpec> {
        let x = parse_x_literal(&self.x)?;
        let phase = TrigPhase::new(self.alpha, self.beta, x)?;
        let kind = match self.kind {
            KindArg::Cos => TrigKind::Cosine,
            KindArg::Sin => TrigKind::Sine,
        };
        let coefficients = match self.family {
            FamilyArg::TwoExp => {
                let (a, b) = self.a.zip(self.b).ok_or_else(|| {
                    Error::InvalidInput("the two-exp family requires --a and --b".into())
                })?;
                CoefficientSequence::two_exponential(a, b)?
            }
            FamilyArg::Geometric => {
                let rho = self.rho.ok_or_else(|| {
                    Error::InvalidInput("the geometric family requires --rho".into())
                })?;
                CoefficientSequence::geometric(rho)?
            }
            FamilyArg::Power => {
                let s = self
                    .s
                    .ok_or_else(|| Error::InvalidInput("the power family requires --s".into()))?;
                CoefficientSequence::power(s)?
            }
            FamilyArg::File => {
                let path = self
                    .path
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("the file family requires --path".into()))?;
                parse_coefficient_file(path)?
            }
        };
        Ok(SeriesSpec::new(coefficients, phase, kind))
    }
}

/// Parses the evaluation point: a plain number, or `[N]pi[/M]` with optional
/// sign and decimal `N`, `M` — e.g. `3pi/4`, `-pi/2`, `0.5pi`, `2.356`.
pub fn parse_x_literal(raw: &str) -> Result<f64> {
    let bad = |detail: &str| {
        Error::InvalidInput(format!(
            "cannot parse x value '{raw}': {detail} (expected a number or 'Npi/M')"
        ))
    };
    let s = raw.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = if let Some(idx) = body.find("pi") {
        let coef_str = &body[..idx];
        let rest = &body[idx + 2..];
        let coef = if coef_str.is_empty() {
            1.0
        } else {
            coef_str
                .parse::<f64>()
                .map_err(|_| bad("bad multiplier before 'pi'"))?
        };
        let divisor = if rest.is_empty() {
            1.0
        } else if let Some(d) = rest.strip_prefix('/') {
            let d = d
                .parse::<f64>()
                .map_err(|_| bad("bad divisor after 'pi/'"))?;
            if d == 0.0 {
                return Err(bad("division by zero"));
            }
            d
        } else {
            return Err(bad("unexpected trailing text after 'pi'"));
        };
        coef * std::f64::consts::PI / divisor
    } else {
        body.parse::<f64>().map_err(|_| bad("not a number"))?
    };
    let x = sign * value;
    if !x.is_finite() {
        return Err(bad("not finite"));
    }
    Ok(x)
}

/// Reads a coefficient file: UTF-8, one value per line (`re` or `re,im`),
/// `#`-prefixed comment lines and blank lines ignored; line k (of the kept
/// lines) is the k-th coefficient.
pub fn parse_coefficient_file(path: &std::path::Path) -> Result<CoefficientSequence> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidInput(format!(
            "cannot read coefficient file {}: {e}",
            path.display()
        ))
    })?;
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |part: &str| {
            part.trim().parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!(
                    "bad value '{line}' on line {} of {}",
                    line_no + 1,
                    path.display()
                ))
            })
        };
        let value = match line.split_once(',') {
            Some((re, im)) => Scalar::new(parse(re)?, parse(im)?),
            None => Scalar::new(parse(line)?, 0.0),
        };
        values.push(value);
    }
    if values.len() < MIN_FILE_VALUES {
        return Err(Error::InvalidInput(format!(
            "coefficient file {} must provide at least {MIN_FILE_VALUES} values (got {})",
            path.display(),
            values.len()
        )));
    }
    CoefficientSequence::from_values(values)
}

impl Cli {
    /// Executes the parsed command and returns the text to print.
    pub fn run(&self) -> Result<String> {
        match &self.command {
            Command::Sum {
                series,
                tail_bound,
                format,
            } => cmd_sum(&series.build()?, *tail_bound, *format),
            Command::Accelerate {
                series,
                tol,
                max_p,
                format,
            } => cmd_accelerate(&series.build()?, *tol, *max_p, *format),
            Command::EstimateR {
                series,
                max_p,
                format,
            } => cmd_estimate_r(&series.build()?, *max_p, *format),
        }
    }
}

/// Exit code for an error: 3 when a budget ran out, 2 for invalid input and
/// every other failure the user can act on.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

pub fn cmd_sum(series: &SeriesSpec, tail_bound: f64, format: OutputFormat) -> Result<String> {
    let (sum, terms) = oracle_sum(series, tail_bound)?;
    match format {
        OutputFormat::Json => {
            let mut obj = Map::new();
            obj.insert("sum".into(), scalar_value(sum));
            obj.insert("terms".into(), Value::from(terms));
            Ok(serde_json::to_string_pretty(&Value::Object(obj)).expect("static shape"))
        }
        OutputFormat::Csv => Ok(format!("sum,terms\n{},{terms}", csv_scalar(sum))),
    }
}

pub fn cmd_accelerate(
    series: &SeriesSpec,
    tol: f64,
    max_p: usize,
    format: OutputFormat,
) -> Result<String> {
    let report = build_report(series, &RSelectionConfig::new(max_p), tol)?;
    match format {
        OutputFormat::Json => Ok(report_json(&report)),
        OutputFormat::Csv => Ok(report_csv(&report)),
    }
}

pub fn cmd_estimate_r(series: &SeriesSpec, max_p: usize, format: OutputFormat) -> Result<String> {
    let est = estimate_r_sequence(series.coefficients(), &RSelectionConfig::new(max_p))?;
    match format {
        OutputFormat::Json => {
            let mut obj = Map::new();
            obj.insert(
                "r".into(),
                Value::Array(est.values().iter().map(|&v| scalar_value(v)).collect()),
            );
            obj.insert("reason".into(), Value::String(est.reason().to_string()));
            if let StopReason::RatioDivergent {
                last_estimate: Some(last),
                ..
            } = est.reason()
            {
                obj.insert("last_estimate".into(), scalar_value(*last));
            }
            Ok(serde_json::to_string_pretty(&Value::Object(obj)).expect("static shape"))
        }
        OutputFormat::Csv => {
            let mut out = String::from("index,r");
            for (i, &v) in est.values().iter().enumerate() {
                out.push_str(&format!("\n{},{}", i + 1, csv_scalar(v)));
            }
            Ok(out)
        }
    }
}

/// Serializes the full report with the documented key set:
/// `reference_sum`, `reference_terms`, `direct_terms`, `tolerance`,
/// `validation`, `per_p`. Depths that failed to count are omitted from
/// `per_p`; their causes are available programmatically on
/// [`AccelerationReport`].
pub fn report_json(report: &AccelerationReport) -> String {
    let mut obj = Map::new();
    obj.insert("reference_sum".into(), scalar_value(report.reference_sum));
    obj.insert(
        "reference_terms".into(),
        Value::from(report.reference_terms),
    );
    obj.insert(
        "direct_terms".into(),
        Value::from(report.direct_terms_needed),
    );
    obj.insert(
        "tolerance".into(),
        Value::Number(number_17(report.tolerance)),
    );
    obj.insert(
        "validation".into(),
        match &report.validation {
            Some(v) => validation_value(v),
            None => Value::Null,
        },
    );
    let per_p = report
        .per_p
        .iter()
        .map(|entry| {
            let mut e = Map::new();
            e.insert("p".into(), Value::from(entry.p as u64));
            e.insert(
                "r".into(),
                Value::Array(entry.r_values.iter().map(|&v| scalar_value(v)).collect()),
            );
            e.insert(
                "remainder_terms".into(),
                Value::from(entry.remainder_terms_needed),
            );
            e.insert("total_terms".into(), Value::from(entry.total_terms));
            e.insert(
                "achieved_error".into(),
                Value::Number(number_17(entry.achieved_error)),
            );
            Value::Object(e)
        })
        .collect();
    obj.insert("per_p".into(), Value::Array(per_p));
    serde_json::to_string_pretty(&Value::Object(obj)).expect("static shape")
}

fn validation_value(v: &ValidationReport) -> Value {
    let mut obj = Map::new();
    obj.insert("domain_ok".into(), Value::Bool(v.domain_ok));
    obj.insert("r_positive_real".into(), Value::Bool(v.r_positive_real));
    obj.insert(
        "decay_condition".into(),
        Value::String(v.decay_condition.to_string()),
    );
    obj.insert(
        "lambda_hat".into(),
        match v.lambda_hat {
            Some(l) => Value::Number(number_17(l)),
            None => Value::Null,
        },
    );
    obj.insert("denominators_ok".into(), Value::Bool(v.denominators_ok));
    Value::Object(obj)
}

/// One CSV row per depth; the scale factors are semicolon-joined inside
/// their column. The reference data is JSON-only.
pub fn report_csv(report: &AccelerationReport) -> String {
    let mut out = String::from("p,r,remainder_terms,total_terms,achieved_error");
    for entry in &report.per_p {
        let r = entry
            .r_values
            .iter()
            .map(|&v| csv_scalar(v))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "\n{},{},{},{},{}",
            entry.p,
            r,
            entry.remainder_terms_needed,
            entry.total_terms,
            float_17(entry.achieved_error)
        ));
    }
    out
}

/// 17-significant-digit scientific form; parses back to the identical f64.
pub fn float_17(v: f64) -> String {
    format!("{v:.16e}")
}

fn number_17(v: f64) -> Number {
    Number::from_str(&float_17(v)).expect("17-digit scientific form is valid JSON")
}

fn effectively_real(z: Scalar) -> bool {
    z.im == 0.0 || z.im.abs() <= REAL_REPORT_TOL * z.norm()
}

/// JSON form of a scalar: a bare number when effectively real, otherwise an
/// object with `re` and `im`.
pub fn scalar_value(z: Scalar) -> Value {
    if effectively_real(z) {
        Value::Number(number_17(z.re))
    } else {
        let mut obj = Map::new();
        obj.insert("re".into(), Value::Number(number_17(z.re)));
        obj.insert("im".into(), Value::Number(number_17(z.im)));
        Value::Object(obj)
    }
}

/// CSV form of a scalar: `re` when effectively real, else `re+imi` (comma
/// free, so it can sit inside a CSV field).
pub fn csv_scalar(z: Scalar) -> String {
    if effectively_real(z) {
        float_17(z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", float_17(z.re), float_17(z.im))
    } else {
        format!("{}-{}i", float_17(z.re), float_17(-z.im))
    }
}
