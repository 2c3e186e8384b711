//! `rectfit`: optimal rectangular score transforms from the command line.
//!
//! Exit codes: 0 on success (including help and version), 1 on usage,
//! input, or solver errors, 2 when `bench` catches solvers disagreeing.

mod bench;
mod input;
mod output;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rectfit::{
    brute_force_fit, iterative_fit, linear_fit, losses_from_labels, FitConfig, LossValue, RectFit,
    Sample, Score, StreamEngine,
};
use serde_json::json;

use input::PairRows;
use output::JsonLoss;

#[derive(Parser)]
#[command(
    name = "rectfit",
    version,
    about = "Fit the loss-minimal rectangular (two-level) transform of univariate scores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one rectangle to (score, loss) rows and print it as JSON.
    Fit(FitArgs),
    /// Fit binary-labeled rows and print the transformed score per row.
    Calibrate(CalibrateArgs),
    /// Insert rows one by one and print the running fit.
    Stream(StreamArgs),
    /// Cross-check the solvers on random instances and time them.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    /// Two-scan linear-time solver.
    Linear,
    /// Quadratic sweep of every rank pair.
    Iterative,
    /// Cubic exhaustive reference.
    Brute,
    /// Balanced-tree streaming engine.
    Stream,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Exact integer losses when every loss token is an integer, floats
    /// otherwise.
    Auto,
    /// Require integer losses and exact arithmetic.
    Int,
    /// Treat all losses as floats.
    Float,
}

#[derive(Args)]
struct LevelArgs {
    /// Output level outside the rectangle.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    q0: f64,
    /// Output level inside the rectangle; must be at least q0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    q1: f64,
}

#[derive(Args)]
struct FitArgs {
    /// Input file of (score, loss) rows, or - for stdin.
    #[arg(default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = Algorithm::Linear)]
    algorithm: Algorithm,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    #[command(flatten)]
    levels: LevelArgs,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Input file of (score, label[, weight]) rows, or - for stdin.
    #[arg(default_value = "-")]
    input: String,
    /// Weight of label-1 losses relative to label-0 losses.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[command(flatten)]
    levels: LevelArgs,
}

#[derive(Args)]
struct StreamArgs {
    /// Input file of (score, loss) rows, or - for stdin.
    #[arg(default_value = "-")]
    input: String,
    /// Print the running fit after every EVERY-th insert (and the last).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    every: u64,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    #[command(flatten)]
    levels: LevelArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::Stream(args) => cmd_stream(args),
        Command::Bench(args) => bench::run(&args),
    }
}

fn config(levels: &LevelArgs) -> Result<FitConfig> {
    Ok(FitConfig::new(levels.q0, levels.q1)?)
}

/// Integer rows when the mode allows and the data permits, float rows
/// otherwise.
enum ModeRows {
    Int(Vec<(f64, i64)>),
    Float(Vec<(f64, f64)>),
}

fn resolve_mode(mode: Mode, pairs: PairRows) -> Result<ModeRows> {
    let as_int = |rows: Vec<(f64, f64)>, ints: Vec<i64>| {
        rows.into_iter()
            .map(|(x, _)| x)
            .zip(ints)
            .collect::<Vec<_>>()
    };
    Ok(match (mode, pairs.int_losses) {
        (Mode::Float, _) | (Mode::Auto, None) => ModeRows::Float(pairs.rows),
        (Mode::Auto, Some(ints)) | (Mode::Int, Some(ints)) => {
            ModeRows::Int(as_int(pairs.rows, ints))
        }
        (Mode::Int, None) => bail!("--mode int requires every loss to be an integer"),
    })
}

fn sorted_samples<Z: LossValue>(rows: &[(f64, Z)]) -> Result<Vec<Sample<Z>>> {
    let mut samples = rows
        .iter()
        .enumerate()
        .map(|(id, &(x, z))| Ok(Sample::new(Score::new(x)?, z, id as u64)))
        .collect::<Result<Vec<_>, rectfit::FitError>>()?;
    samples.sort_by_key(|s| (s.x, s.id));
    Ok(samples)
}

fn solve<Z: LossValue>(rows: &[(f64, Z)], algorithm: Algorithm) -> Result<RectFit<Z>> {
    if let Algorithm::Stream = algorithm {
        if rows.is_empty() {
            bail!(rectfit::FitError::EmptyInput);
        }
        let mut engine = StreamEngine::new();
        for &(x, z) in rows {
            engine.insert(Score::new(x)?, z)?;
        }
        return Ok(engine.current_fit());
    }
    let samples = sorted_samples(rows)?;
    Ok(match algorithm {
        Algorithm::Linear => linear_fit(&samples)?,
        Algorithm::Iterative => iterative_fit(&samples)?,
        Algorithm::Brute => brute_force_fit(&samples)?,
        Algorithm::Stream => unreachable!("handled above"),
    })
}

fn cmd_fit(args: FitArgs) -> Result<u8> {
    let pairs = input::read_pairs(&args.input)?;
    let config = config(&args.levels)?;
    fn emit<Z: JsonLoss>(
        rows: &[(f64, Z)],
        algorithm: Algorithm,
        config: &FitConfig,
    ) -> Result<u8> {
        let fit = solve(rows, algorithm)?;
        println!("{}", output::fit_record(&fit, config, rows.len()));
        Ok(0)
    }
    match resolve_mode(args.mode, pairs)? {
        ModeRows::Int(rows) => emit(&rows, args.algorithm, &config),
        ModeRows::Float(rows) => emit(&rows, args.algorithm, &config),
    }
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<u8> {
    let data = input::read_labeled(&args.input)?;
    let derived = losses_from_labels(&data.ys, args.alpha, data.ws.as_deref())?;
    let config = config(&args.levels)?.with_bounds(Some(derived.zl), Some(derived.zu))?;
    let rows: Vec<(f64, f64)> = data.xs.iter().copied().zip(derived.losses).collect();
    let fit = linear_fit(&sorted_samples(&rows)?)?;
    for &x in &data.xs {
        println!(
            "{}",
            json!({ "x": x, "q": fit.apply(&config, Score::new(x)?) })
        );
    }
    eprintln!("{}", output::fit_record(&fit, &config, rows.len()));
    Ok(0)
}

fn cmd_stream(args: StreamArgs) -> Result<u8> {
    let pairs = input::read_pairs(&args.input)?;
    let config = config(&args.levels)?;
    fn emit<Z: JsonLoss>(rows: &[(f64, Z)], every: u64, config: &FitConfig) -> Result<u8> {
        let mut engine = StreamEngine::new();
        for (i, &(x, z)) in rows.iter().enumerate() {
            engine.insert(Score::new(x)?, z)?;
            let i = i as u64 + 1;
            if i % every == 0 || i == rows.len() as u64 {
                let mut record = output::fit_record(&engine.current_fit(), config, engine.len());
                record["merges"] = json!(engine.merge_invocations());
                println!("{record}");
            }
        }
        Ok(0)
    }
    match resolve_mode(args.mode, pairs)? {
        ModeRows::Int(rows) => emit(&rows, args.every, &config),
        ModeRows::Float(rows) => emit(&rows, args.every, &config),
    }
}
