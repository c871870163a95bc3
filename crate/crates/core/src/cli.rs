//! Command-line front end. [`run`] is what the `pcm-alloc` binary calls; it
//! takes explicit writers so it can be driven from tests.
//!
//! Exit status: 0 on success, 1 when the input or a computation fails
//! validation, 2 on a usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::alloc::{allocate, indifferent_alpha, sweep, write_allocations_csv, AlphaGrid};
use crate::error::Error;
use crate::goals::{goals_matrix, load_goals, write_goals, GoalsMatrix};
use crate::ingest::{parse_season, SeasonResults};
use crate::metrics::{scale_invariance_scan, DEFAULT_REFINE_TOL};
use crate::numfmt::Precision;
use crate::pcm::build_pcm;
use crate::scoring::{builtin_system, builtin_systems, score_season, PointsSystem, Standings};
use crate::weights::{WeightVector, WeightingMethod};

#[derive(Debug, Parser)]
#[command(
    name = "pcm-alloc",
    version,
    about = "Revenue allocation from race results via pairwise comparison matrices"
)]
pub struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Aggregate race results into the season goals matrix.
    Goals {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Pairwise comparison matrix at a given alpha.
    Pcm {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Weight vector(s) at a given alpha.
    Weights {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Rgm)]
        method: MethodArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Split a money pot according to the weights.
    Allocate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Rgm)]
        method: MethodArg,
        #[arg(long)]
        pot: f64,
        #[arg(long, default_value_t = 1.0)]
        unit: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Weights, HHI* and rank reversals over an alpha grid.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long, default_value = "0:3:0.02")]
        grid: AlphaGrid,
        #[arg(long, default_value_t = DEFAULT_REFINE_TOL)]
        refine_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Alpha values at which a team's share equals a target share.
    IndifferentAlpha {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long)]
        team: String,
        #[arg(long)]
        target: f64,
        #[arg(long, default_value = "0:3:0.02")]
        grid: AlphaGrid,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Report rank reversals of a weighting method across alpha.
    CheckScaleInvariance {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long, default_value = "0.02:3:0.02")]
        grid: AlphaGrid,
        #[arg(long, default_value_t = DEFAULT_REFINE_TOL)]
        refine_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Constructors' standings under a points system.
    Standings {
        #[arg(long)]
        races: PathBuf,
        /// Built-in system name, `all`, or a path to a points-system JSON file.
        #[arg(long, default_value = "2010-")]
        system: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Goals matrix CSV.
    #[arg(long, conflicts_with = "races")]
    goals: Option<PathBuf>,
    /// Season race results CSV.
    #[arg(long)]
    races: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    output: String,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
    /// Round reals to N decimals for display.
    #[arg(long)]
    round: Option<usize>,
}

impl OutputArgs {
    fn precision(&self) -> Precision {
        self.round.map_or(Precision::Full, Precision::Decimals)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Em,
    Rgm,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<WeightingMethod> {
        match self {
            MethodArg::Em => vec![WeightingMethod::eigenvector()],
            MethodArg::Rgm => vec![WeightingMethod::row_geometric_mean()],
            MethodArg::Both => vec![WeightingMethod::eigenvector(), WeightingMethod::row_geometric_mean()],
        }
    }
}

enum Failure {
    Usage(String),
    Invalid(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parse `args` (including the program name) and execute one subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                2
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match execute(&config.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            2
        }
        Err(Failure::Invalid(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Invalid(Error::InvalidParameter(format!("{}: {e}", path.display()))))
}

fn load_season(path: &Path) -> CliResult<SeasonResults> {
    Ok(parse_season(open(path)?)?)
}

fn load_input(input: &InputArgs) -> CliResult<GoalsMatrix> {
    match (&input.goals, &input.races) {
        (Some(path), None) => Ok(load_goals(open(path)?)?),
        (None, Some(path)) => Ok(goals_matrix(&load_season(path)?)),
        _ => Err(Failure::Usage("exactly one of --goals or --races is required".into())),
    }
}

fn check_format(format: Option<Format>, allowed: &[Format]) -> CliResult<Format> {
    match format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Failure::Usage(format!(
            "format {f:?} is not available for this subcommand"
        ))),
    }
}

fn round_json(value: Value, decimals: usize) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or_default();
            let scale = 10f64.powi(decimals as i32);
            serde_json::Number::from_f64((x * scale).round() / scale).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(|v| round_json(v, decimals)).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v, decimals))).collect()),
        other => other,
    }
}

fn json<T: Serialize>(item: &T, output: &OutputArgs) -> CliResult<Vec<u8>> {
    let mut value = serde_json::to_value(item).map_err(Error::from)?;
    if let Some(d) = output.round {
        value = round_json(value, d);
    }
    let mut text = serde_json::to_string_pretty(&value).map_err(Error::from)?;
    text.push('\n');
    Ok(text.into_bytes())
}

fn emit(bytes: &[u8], output: &OutputArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if output.output == "-" {
        stdout.write_all(bytes).map_err(Error::from)?;
        return Ok(());
    }
    let path = Path::new(&output.output);
    if path.exists() && !output.force {
        return Err(Failure::Invalid(Error::InvalidParameter(format!(
            "{} exists; pass --force to overwrite",
            path.display()
        ))));
    }
    std::fs::write(path, bytes).map_err(Error::from)?;
    Ok(())
}

fn weights_table(vectors: &[WeightVector], precision: Precision, sep: u8) -> CliResult<Vec<u8>> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(sep)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record(["method", "alpha", "team", "weight"])
        .map_err(Error::from)?;
    for v in vectors {
        for (team, w) in v.teams.iter().zip(&v.weights) {
            writer
                .write_record([v.method.tag(), &precision.format(v.alpha), team, &precision.format(*w)])
                .map_err(Error::from)?;
        }
    }
    writer
        .into_inner()
        .map_err(|e| Failure::Invalid(Error::Io(e.into_error())))
}

fn resolve_systems(name: &str) -> CliResult<Vec<PointsSystem>> {
    if name == "all" {
        return Ok(builtin_systems().into_iter().take(4).collect());
    }
    if let Some(system) = builtin_system(name) {
        return Ok(vec![system]);
    }
    let path = Path::new(name);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        return Ok(vec![PointsSystem::from_json(&text)?]);
    }
    Err(Failure::Usage(format!(
        "`{name}` is neither a built-in points system nor a readable file"
    )))
}

fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Goals { input, output } => {
            let goals = load_input(input)?;
            let bytes = match check_format(output.format, &[Format::Csv, Format::Json])? {
                Format::Json => json(&goals, output)?,
                _ => {
                    let mut buf = Vec::new();
                    write_goals(&goals, &mut buf)?;
                    buf
                }
            };
            emit(&bytes, output, stdout)
        }
        Command::Pcm { input, model, output } => {
            let goals = load_input(input)?;
            let m = build_pcm(&goals, model.alpha, model.epsilon)?;
            let bytes = match check_format(output.format, &[Format::Csv, Format::Json])? {
                Format::Json => json(&m, output)?,
                _ => {
                    let mut buf = Vec::new();
                    m.write_csv(&mut buf, output.precision())?;
                    buf
                }
            };
            emit(&bytes, output, stdout)
        }
        Command::Weights {
            input,
            model,
            method,
            output,
        } => {
            let goals = load_input(input)?;
            let m = build_pcm(&goals, model.alpha, model.epsilon)?;
            let vectors = method
                .methods()
                .iter()
                .map(|wm| wm.weights(&m))
                .collect::<Result<Vec<_>, _>>()?;
            let bytes = match check_format(output.format, &[Format::Json, Format::Csv, Format::Tsv])? {
                Format::Json if vectors.len() == 1 => json(&vectors[0], output)?,
                Format::Json => json(&vectors, output)?,
                Format::Csv => weights_table(&vectors, output.precision(), b',')?,
                Format::Tsv => weights_table(&vectors, output.precision(), b'\t')?,
            };
            emit(&bytes, output, stdout)
        }
        Command::Allocate {
            input,
            model,
            method,
            pot,
            unit,
            output,
        } => {
            let goals = load_input(input)?;
            let m = build_pcm(&goals, model.alpha, model.epsilon)?;
            let reports = method
                .methods()
                .iter()
                .map(|wm| allocate(&wm.weights(&m)?, *pot, *unit))
                .collect::<Result<Vec<_>, _>>()?;
            let bytes = match check_format(output.format, &[Format::Json, Format::Csv])? {
                Format::Json if reports.len() == 1 => json(&reports[0], output)?,
                Format::Json => json(&reports, output)?,
                _ => {
                    let mut buf = Vec::new();
                    write_allocations_csv(&reports, &mut buf, output.precision())?;
                    buf
                }
            };
            emit(&bytes, output, stdout)
        }
        Command::Sweep {
            input,
            epsilon,
            method,
            grid,
            refine_tol,
            output,
        } => {
            let goals = load_input(input)?;
            let result = sweep(&goals, &method.methods(), &grid.points(), *epsilon, *refine_tol)?;
            let bytes = match check_format(output.format, &[Format::Tsv, Format::Json])? {
                Format::Json => json(&result, output)?,
                _ => {
                    let mut buf = Vec::new();
                    result.write_tsv(&mut buf, output.precision())?;
                    buf
                }
            };
            emit(&bytes, output, stdout)
        }
        Command::IndifferentAlpha {
            input,
            epsilon,
            method,
            team,
            target,
            grid,
            tol,
            output,
        } => {
            let goals = load_input(input)?;
            check_format(output.format, &[Format::Json])?;
            #[derive(Serialize)]
            struct Labeled {
                #[serde(flatten)]
                result: crate::alloc::IndifferenceResult,
                smallest_root: Option<f64>,
            }
            let results = method
                .methods()
                .iter()
                .map(|wm| {
                    let result = indifferent_alpha(&goals, team, *target, wm, &grid.points(), *tol, *epsilon)?;
                    Ok(Labeled {
                        smallest_root: result.smallest_root(),
                        result,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let bytes = if results.len() == 1 {
                json(&results[0], output)?
            } else {
                json(&results, output)?
            };
            emit(&bytes, output, stdout)
        }
        Command::CheckScaleInvariance {
            input,
            epsilon,
            method,
            grid,
            refine_tol,
            output,
        } => {
            let goals = load_input(input)?;
            check_format(output.format, &[Format::Json])?;
            let reports = method
                .methods()
                .iter()
                .map(|wm| scale_invariance_scan(&goals, wm, &grid.points(), *refine_tol, *epsilon))
                .collect::<Result<Vec<_>, _>>()?;
            let bytes = if reports.len() == 1 {
                json(&reports[0], output)?
            } else {
                json(&reports, output)?
            };
            emit(&bytes, output, stdout)
        }
        Command::Standings { races, system, output } => {
            let season = load_season(races)?;
            let standings: Vec<Standings> = resolve_systems(system)?
                .iter()
                .map(|s| score_season(&season, s))
                .collect();
            let bytes = match check_format(output.format, &[Format::Csv, Format::Json])? {
                Format::Json if standings.len() == 1 => json(&standings[0], output)?,
                Format::Json => json(&standings, output)?,
                _ if standings.len() == 1 => {
                    let mut buf = Vec::new();
                    standings[0].write_csv(&mut buf)?;
                    buf
                }
                _ => {
                    let mut writer = csv::WriterBuilder::new()
                        .terminator(csv::Terminator::Any(b'\n'))
                        .from_writer(Vec::new());
                    writer
                        .write_record(["system", "team", "points", "rank", "tie_flag"])
                        .map_err(Error::from)?;
                    for s in &standings {
                        for e in &s.entries {
                            writer
                                .write_record([
                                    s.system.clone(),
                                    e.team.clone(),
                                    e.points.to_string(),
                                    e.rank.to_string(),
                                    e.tie.to_string(),
                                ])
                                .map_err(Error::from)?;
                        }
                    }
                    writer
                        .into_inner()
                        .map_err(|e| Failure::Invalid(Error::Io(e.into_error())))?
                }
            };
            emit(&bytes, output, stdout)
        }
    }
}
