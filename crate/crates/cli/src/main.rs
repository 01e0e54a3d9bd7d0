//! `sievelab` — sieve-ratio, chaotic-polytope, and prime-gap experiments
//! from the command line.
//!
//! Subcommands: gaps, tuple, chaos, volume, ratio, optimize, predict,
//! reproduce. Output is JSON by default (`--format text` for a summary,
//! `--format csv` for the gap histogram). Every stochastic subcommand takes
//! a seed (default 42) and echoes it; results are independent of
//! `--threads`.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error, 3 capacity error,
//! 4 insufficient samples.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use sievelab::geometry::PolytopeSpec;
use sievelab::ratio::Region;
use sievelab::reference;
use sievelab::weights::SymmetricPolynomial;
use sievelab::LogisticParams;

use commands::{CommandOutput, OptimizeParams};
use config::Config;

/// Environment variable overriding the default worker count.
const THREADS_ENV: &str = "SIEVELAB_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(sievelab::Error),
}

impl From<sievelab::Error> for CliError {
    fn from(e: sievelab::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e {
                sievelab::Error::Capacity(_) => 3,
                sievelab::Error::InsufficientSamples(_) => 4,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "sievelab",
    version,
    about = "Sieve-ratio, chaotic-polytope, and prime-gap experiments"
)]
struct Cli {
    /// Config file with `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: json, csv (gap histograms), or text.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores, or SIEVELAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prime-gap statistics for primes below a limit.
    Gaps {
        #[arg(long)]
        limit: Option<u64>,
        /// Comma-separated gap thresholds, e.g. 700,180,8.
        #[arg(long)]
        thresholds: Option<String>,
        /// How many of the most common gaps to report.
        #[arg(long)]
        top: Option<usize>,
        #[arg(long)]
        segment_bytes: Option<usize>,
    },
    /// Search for a narrow admissible k-tuple.
    Tuple {
        #[arg(long)]
        k: Option<usize>,
        /// Search effort: candidate intervals examined.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Logistic-orbit statistics and arcsine-density distance.
    Chaos {
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        y0: Option<f64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        burn_in: Option<u64>,
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Monte Carlo (or exact) volume of the base and perturbed polytopes.
    Volume {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        iterations: Option<u32>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Exact inclusion-exclusion volume of the base region only.
        #[arg(long)]
        exact: bool,
    },
    /// The sieve ratio M(F): exact on the simplex or Monte Carlo on a region.
    Ratio {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// base or perturbed.
        #[arg(long)]
        region: Option<String>,
        #[arg(long)]
        exact: bool,
        /// Test function in the polynomial text format (default: F = 1).
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        iterations: Option<u32>,
    },
    /// Maximize M(F) over a symmetric polynomial basis.
    Optimize {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<u32>,
        /// exact or mc.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the optimal polynomial text to this path.
        #[arg(long)]
        poly_out: Option<PathBuf>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        iterations: Option<u32>,
    },
    /// Closed-form heuristic predictions for (k, delta, eps).
    Predict {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        m_base: Option<f64>,
        /// Baseline table `k=m,k=m`, e.g. 30=2.0,40=2.5.
        #[arg(long)]
        baseline: Option<String>,
        /// Report the smallest baseline k whose extrapolation exceeds this level.
        #[arg(long)]
        level: Option<u64>,
    },
    /// Rerun the published toy experiments and report deviations.
    Reproduce {
        /// Prime-gap limit for the scaled run (default 1e7).
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref())?;

    let threads = match cli.threads {
        Some(t) => Some(t),
        None => match cfg.get::<usize>("threads")? {
            Some(t) => Some(t),
            None => std::env::var(THREADS_ENV)
                .ok()
                .map(|v| {
                    v.parse::<usize>()
                        .map_err(|e| CliError::Usage(format!("bad {THREADS_ENV} value `{v}`: {e}")))
                })
                .transpose()?,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        // Ignore the error from re-initialization (tests call run repeatedly).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }

    let format = cli
        .format
        .clone()
        .or(cfg.get::<String>("format")?)
        .unwrap_or_else(|| "json".to_string());
    if !["json", "csv", "text"].contains(&format.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown format `{format}` (expected json, csv, or text)"
        )));
    }

    let (name, output) = dispatch(&cli.command, &cfg)?;

    let rendered = match format.as_str() {
        "json" => {
            let envelope = json!({
                "schema": 1,
                "command": name,
                "timestamp": unix_timestamp(),
                "report": output.body,
            });
            let mut s = serde_json::to_string_pretty(&envelope).expect("envelope serializes");
            s.push('\n');
            s
        }
        "text" => output.text.clone(),
        "csv" => output.csv.clone().ok_or_else(|| {
            CliError::Usage(format!(
                "the {name} command has no CSV form; use json or text"
            ))
        })?,
        _ => unreachable!(),
    };

    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(())
}

fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn polytope_from(
    cfg: &Config,
    k: Option<usize>,
    tau: Option<f64>,
    delta: Option<f64>,
    r: Option<f64>,
    iterations: Option<u32>,
) -> Result<PolytopeSpec, CliError> {
    let k = cfg.resolve(k, "k", reference::DEFAULT_K)?;
    let tau = cfg.resolve(tau, "tau", reference::DEFAULT_TAU)?;
    let delta = cfg.resolve(delta, "delta", reference::DEFAULT_DELTA)?;
    let r = cfg.resolve(r, "r", reference::DEFAULT_R)?;
    let iterations = cfg.resolve(iterations, "iterations", reference::DEFAULT_ITERATIONS)?;
    let logistic = LogisticParams::new(r, iterations)?;
    Ok(PolytopeSpec::new(k, tau, delta, logistic)?)
}

fn dispatch(command: &Command, cfg: &Config) -> Result<(&'static str, CommandOutput), CliError> {
    match command {
        Command::Gaps {
            limit,
            thresholds,
            top,
            segment_bytes,
        } => {
            let limit = cfg.resolve(*limit, "limit", reference::GAP_LIMIT)?;
            let thresholds = match cfg.resolve_opt(thresholds.clone(), "thresholds")? {
                Some(s) => config::parse_u64_list(&s)?,
                None => reference::GAP_THRESHOLDS.to_vec(),
            };
            let top = cfg.resolve(*top, "top", sievelab::primes::DEFAULT_TOP_GAPS)?;
            let segment_bytes = cfg.resolve(
                *segment_bytes,
                "segment_bytes",
                sievelab::primes::DEFAULT_SEGMENT_BYTES,
            )?;
            Ok((
                "gaps",
                commands::run_gaps(limit, &thresholds, top, segment_bytes)?,
            ))
        }
        Command::Tuple { k, budget } => {
            let k = cfg.require::<usize>(*k, "k")?;
            let budget = cfg.resolve(*budget, "budget", sievelab::tuples::DEFAULT_SEARCH_BUDGET)?;
            Ok(("tuple", commands::run_tuple(k, budget)?))
        }
        Command::Chaos {
            r,
            y0,
            n,
            burn_in,
            bins,
        } => {
            let r = cfg.resolve(*r, "r", reference::DEFAULT_R)?;
            let y0 = cfg.resolve(*y0, "y0", sievelab::chaos::DEFAULT_Y0)?;
            let n = cfg.resolve(*n, "n", 1_000_000u64)?;
            let burn_in = cfg.resolve(*burn_in, "burn_in", sievelab::chaos::DEFAULT_BURN_IN)?;
            let bins = cfg.resolve(*bins, "bins", 20usize)?;
            Ok(("chaos", commands::run_chaos(r, y0, n, burn_in, bins)?))
        }
        Command::Volume {
            k,
            tau,
            delta,
            r,
            iterations,
            samples,
            seed,
            exact,
        } => {
            let spec = polytope_from(cfg, *k, *tau, *delta, *r, *iterations)?;
            let samples = cfg.resolve(*samples, "samples", reference::DEFAULT_SAMPLES)?;
            let seed = cfg.resolve(*seed, "seed", reference::DEFAULT_SEED)?;
            Ok((
                "volume",
                commands::run_volume(&spec, samples, seed, *exact)?,
            ))
        }
        Command::Ratio {
            k,
            tau,
            delta,
            eps,
            samples,
            seed,
            region,
            exact,
            poly,
            r,
            iterations,
        } => {
            let spec = polytope_from(cfg, *k, *tau, *delta, *r, *iterations)?;
            let eps = cfg.resolve(*eps, "eps", reference::DEFAULT_EPS)?;
            let samples = cfg.resolve(*samples, "samples", reference::DEFAULT_SAMPLES)?;
            let seed = cfg.resolve(*seed, "seed", reference::DEFAULT_SEED)?;
            let region = match cfg
                .resolve(region.clone(), "region", "base".to_string())?
                .as_str()
            {
                "base" => Region::Base,
                "perturbed" => Region::Perturbed,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown region `{other}` (expected base or perturbed)"
                    )))
                }
            };
            let poly = match cfg.resolve_opt(poly.clone(), "poly")? {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        CliError::Usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    Some(SymmetricPolynomial::from_text(spec.k, &text)?)
                }
                None => None,
            };
            Ok((
                "ratio",
                commands::run_ratio(&spec, eps, samples, seed, region, *exact, poly)?,
            ))
        }
        Command::Optimize {
            k,
            d,
            mode,
            tau,
            delta,
            eps,
            samples,
            seed,
            poly_out,
            r,
            iterations,
        } => {
            let spec = polytope_from(cfg, *k, *tau, *delta, *r, *iterations)?;
            let d = cfg.resolve(*d, "d", 2u32)?;
            let mode = cfg.resolve(mode.clone(), "mode", "exact".to_string())?;
            let eps = cfg.resolve(*eps, "eps", reference::DEFAULT_EPS)?;
            let samples = cfg.resolve(*samples, "samples", 200_000u64)?;
            let seed = cfg.resolve(*seed, "seed", reference::DEFAULT_SEED)?;
            let output = commands::run_optimize(&OptimizeParams {
                k: spec.k,
                d,
                mode: &mode,
                spec: &spec,
                eps,
                samples,
                seed,
            })?;
            if let Some(path) = cfg.resolve_opt(poly_out.clone(), "poly_out")? {
                let text = output.body["polynomial"]
                    .as_str()
                    .expect("polynomial text present");
                std::fs::write(&path, text).map_err(|e| {
                    CliError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(("optimize", output))
        }
        Command::Predict {
            k,
            delta,
            eps,
            m_base,
            baseline,
            level,
        } => {
            let k = cfg.require::<u64>(*k, "k")?;
            let delta = cfg.resolve(*delta, "delta", 0.3)?;
            let eps = cfg.resolve(*eps, "eps", 0.1)?;
            let m_base = cfg.resolve_opt(*m_base, "m_base")?;
            let baseline = match cfg.resolve_opt(baseline.clone(), "baseline")? {
                Some(s) => Some(config::parse_baseline(&s)?),
                None => None,
            };
            let level = cfg.resolve_opt(*level, "level")?;
            Ok((
                "predict",
                commands::run_predict(k, delta, eps, m_base, baseline, level)?,
            ))
        }
        Command::Reproduce {
            limit,
            samples,
            seed,
        } => {
            let spec = polytope_from(cfg, None, None, None, None, None)?;
            let limit = cfg.resolve(*limit, "limit", 10_000_000u64)?;
            let samples = cfg.resolve(*samples, "samples", reference::DEFAULT_SAMPLES)?;
            let seed = cfg.resolve(*seed, "seed", reference::DEFAULT_SEED)?;
            Ok((
                "reproduce",
                commands::run_reproduce(&spec, samples, seed, limit)?,
            ))
        }
    }
}
