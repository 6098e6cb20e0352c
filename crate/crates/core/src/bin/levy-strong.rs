//! Command-line front end for the convergence studies.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levy_strong::config::StudyConfig;
use levy_strong::exec::Execution;
use levy_strong::harness;
use levy_strong::{Error, Result};

#[derive(Parser)]
#[command(name = "levy-strong", version, about = "Strong-order studies for jump-diffusion schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One trajectory of the scheme and the oracle to trajectory.csv
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Dyadic level of the scheme grid (defaults to the finest study level)
        #[arg(long)]
        level: Option<u32>,
    },
    /// Strong-error study to errors.csv and report.json
    Converge {
        #[command(flatten)]
        common: Common,
    },
    /// ε-truncation study to truncation.csv and truncation_report.json
    Truncate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the master seed of the config
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of Monte-Carlo paths
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Run paths on one thread
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn load(&self) -> Result<StudyConfig> {
        let mut cfg = StudyConfig::from_file(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(paths) = self.paths {
            cfg.paths = paths;
        }
        cfg.validate()?;
        std::fs::create_dir_all(&self.out_dir)?;
        Ok(cfg)
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { common, level } => {
            let cfg = common.load()?;
            let rows = harness::simulate_trajectory(&cfg, level.unwrap_or(cfg.max_level()))?;
            harness::write_trajectory_csv(&rows, create(&common.out_dir, "trajectory.csv")?)?;
        }
        Command::Converge { common } => {
            let cfg = common.load()?;
            let report = harness::strong_error_study(&cfg, common.execution())?;
            harness::write_errors_csv(&report, create(&common.out_dir, "errors.csv")?)?;
            harness::write_json(&report, create(&common.out_dir, "report.json")?)?;
            println!(
                "{} slope {:.3} (95% CI {:.3}..{:.3}), target {}",
                report.scheme, report.fit.slope, report.fit.ci_low, report.fit.ci_high, report.target_order
            );
        }
        Command::Truncate { common } => {
            let cfg = common.load()?;
            let report = harness::truncation_study(&cfg, common.execution())?;
            harness::write_truncation_csv(&report, create(&common.out_dir, "truncation.csv")?)?;
            harness::write_json(&report, create(&common.out_dir, "truncation_report.json")?)?;
            println!(
                "truncation slope {:.3} (95% CI {:.3}..{:.3}), 2 - a = {}",
                report.fit.slope, report.fit.ci_low, report.fit.ci_high, report.target_slope
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) | Err(e @ Error::Json(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
