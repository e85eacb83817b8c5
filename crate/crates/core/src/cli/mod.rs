//! The `fiberthresh` command-line front end.
//!
//! Exit statuses: 0 success, 2 file error, 3 parse error (syntax, unknown key,
//! unparsable value), 4 validation error, 5 numerical failure.

mod config;
mod io;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::channel::transmit;
use crate::detector::{adapt_threshold, detect_stream};
use crate::distfit::fit_best;
use crate::harness::{evaluate_ber, histogram, sweep_epsilon, sweep_separation};

pub use config::{parse_config, ExperimentConfig, Settings, CONFIG_KEYS};
pub use io::{read_bits, read_samples, write_output, FitRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    File,
    Parse,
    Validation,
    Numerical,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        match self {
            ExitKind::File => 2,
            ExitKind::Parse => 3,
            ExitKind::Validation => 4,
            ExitKind::Numerical => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ExitKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    fn from_config(kind: ExitKind, key: &str, reason: &str) -> Self {
        CliError::new(kind, format!("invalid configuration: `{key}`: {reason}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(
    name = "fiberthresh",
    version,
    about = "Adaptive threshold detection over a simulated Rayleigh-scattering fiber link"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat `key = value` config file
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Override one config key, applied after the file (repeatable)
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output file; standard output when omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Override rng_seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one block and write `index,bit,tx_level,rx_sample` CSV
    Simulate(CommonArgs),
    /// Fit the candidate families to a sample file and print the best as JSON
    Fit {
        #[command(flatten)]
        common: CommonArgs,
        /// Samples, one per line, or a `simulate` CSV
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Detect bits with tau = sigma-hat + epsilon, one bit per line
    Detect {
        #[command(flatten)]
        common: CommonArgs,
        /// Samples, one per line, or a `simulate` CSV
        #[arg(short, long)]
        input: PathBuf,
        /// Transmitted bits (one per line, or a `simulate` CSV) for a BER summary
        #[arg(short, long)]
        truth: Option<PathBuf>,
    },
    /// Mean BER over `epsilon_grid` at the configured link
    SweepEps(CommonArgs),
    /// Mean BER over `separations` x `p1_list`
    SweepSep(CommonArgs),
    /// Histogram of the received signal with the threshold marker
    Hist {
        #[command(flatten)]
        common: CommonArgs,
        /// Samples to bin instead of a fresh simulation
        #[arg(short, long)]
        input: Option<PathBuf>,
    },
}

/// Help text listing every config key.
pub fn config_help() -> String {
    let width = CONFIG_KEYS.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::from("Config keys (file lines `key = value`, or --set key=value):\n");
    for (key, doc) in CONFIG_KEYS {
        out.push_str(&format!("  {key:<width$}  {doc}\n"));
    }
    out
}

/// Clap command with the config key listing attached.
pub fn command() -> clap::Command {
    Cli::command().after_help(config_help())
}

fn settings(common: &CommonArgs) -> Result<Settings, CliError> {
    parse_config(common.config.as_deref(), &common.overrides, common.seed)
}

/// Execute one parsed invocation.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(common) => {
            let s = settings(&common)?;
            let record = transmit(&s.link)?;
            write_output(common.output.as_deref(), &io::record_csv(&record))?;
            eprintln!("simulated {} bits", record.bits.len());
        }
        Command::Fit { common, input } => {
            let s = settings(&common)?;
            let samples = read_samples(&input)?;
            let selection = fit_best(&samples, &s.experiment.families)?;
            let line = FitRecord::from(&selection.best).to_json_line();
            write_output(common.output.as_deref(), &line)?;
            eprintln!(
                "best family {} over {} samples ({} zeros excluded)",
                selection.best.family, selection.best.n, selection.zeros_excluded
            );
        }
        Command::Detect {
            common,
            input,
            truth,
        } => {
            let s = settings(&common)?;
            let samples = read_samples(&input)?;
            let threshold = adapt_threshold(&samples, s.experiment.epsilon)?;
            let detected = detect_stream(&samples, &threshold);
            write_output(
                common.output.as_deref(),
                &io::bits_text(detected.as_slice()),
            )?;
            match truth {
                Some(path) => {
                    let truth = read_bits(&path)?;
                    let errors = evaluate_ber(&truth, &detected)?;
                    eprintln!(
                        "n_bits={} n_errors={} ber={} tau={}",
                        errors.n_bits,
                        errors.n_errors,
                        errors.ber,
                        threshold.tau()
                    );
                }
                None => eprintln!("detected {} bits, tau={}", detected.len(), threshold.tau()),
            }
        }
        Command::SweepEps(common) => {
            let s = settings(&common)?;
            let table = sweep_epsilon(&s.link, &s.experiment.epsilon_grid, s.experiment.trials)?;
            write_output(common.output.as_deref(), &table.to_csv())?;
            eprintln!("swept {} epsilon values", table.rows.len());
        }
        Command::SweepSep(common) => {
            let s = settings(&common)?;
            let x = &s.experiment;
            let table = sweep_separation(
                &s.link,
                &x.separations,
                &x.p1_list,
                &x.epsilon_policy(),
                x.trials,
            )?;
            write_output(common.output.as_deref(), &table.to_csv())?;
            eprintln!("swept {} cells", table.rows.len());
        }
        Command::Hist { common, input } => {
            let s = settings(&common)?;
            let samples = match input {
                Some(path) => read_samples(&path)?,
                None => transmit(&s.link)?.rx_samples,
            };
            let threshold = adapt_threshold(&samples, s.experiment.epsilon)?;
            let hist = histogram(&samples, &s.experiment.histogram, &threshold)?;
            write_output(common.output.as_deref(), &hist.to_csv())?;
            eprintln!(
                "{} bins, {} samples out of range, tau={}",
                hist.counts.len(),
                hist.out_of_range,
                hist.tau
            );
        }
    }
    Ok(())
}

/// Parse `args` (program name first), run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitKind::Parse.code()
            } else {
                0
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitKind::Parse.code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.kind.code()
        }
    }
}
