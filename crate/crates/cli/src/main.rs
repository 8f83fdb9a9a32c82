use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use gic_cli::{analyze_report, parse_config, partition_report, verify_report, RunConfig};
use gic_core::codec::Codebook;
use gic_core::sim::{run_sweep, write_curves_csv};

#[derive(Parser)]
#[command(name = "gic", version, about = "Golden-coded index coding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the worked factorisations of 2, 17 and 73.
    VerifyExamples,
    /// Print partition sizes and generators.
    PartitionInfo { config: PathBuf },
    /// Print determinant spectra and side-information gains.
    Analyze { config: PathBuf },
    /// Run the CER sweep and write CSV.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load(path: &PathBuf) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::VerifyExamples => {
            let (report, ok) = verify_report();
            print!("{report}");
            Ok(ok)
        }
        Command::PartitionInfo { config } => {
            let spec = load(&config)?.partition()?;
            print!("{}", partition_report(&spec));
            Ok(true)
        }
        Command::Analyze { config } => {
            let cfg = load(&config)?;
            print!("{}", analyze_report(cfg.partition()?, &cfg.side_configs, cfg.n_r)?);
            Ok(true)
        }
        Command::Simulate { config, out, seed } => {
            let mut cfg = load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let book = Codebook::new(cfg.partition()?);
            let sweep = cfg.sweep();
            let curves = run_sweep(&book, &sweep)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_curves_csv(book.spec(), &sweep, &curves, BufWriter::new(file))?;
            println!("wrote={}", out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
