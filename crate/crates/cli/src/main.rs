use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use bicm_core::harness::config::ExperimentConfig;
use bicm_core::harness::run::{self, write_csv};

#[derive(Parser)]
#[command(name = "bicm", version, about = "Quantized-LLR BICM link simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ergodic rate per SNR and word length.
    Ergodic(Common),
    /// Outage probability per SNR, word length and target rate.
    Outage(Common),
    /// Required SNR of symmetric 2-bit quantizers against the equiprobable design.
    SweepBoundary(Common),
    /// Coded bit error rate of an LDPC code.
    Ber(Common),
    /// Coded bit error rate versus the 1-bit level.
    LevelSweep(Common),
    /// Writes quantizer records, one per SNR and word length.
    DesignQuantizer(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    config: PathBuf,
    /// Overrides the master seed of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Output file; overrides `output_path`, stdout if neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(command: Command) -> Result<()> {
    let (kind, common) = match command {
        Command::Ergodic(c) => ("ergodic", c),
        Command::Outage(c) => ("outage", c),
        Command::SweepBoundary(c) => ("sweep-boundary", c),
        Command::Ber(c) => ("ber", c),
        Command::LevelSweep(c) => ("level-sweep", c),
        Command::DesignQuantizer(c) => ("design-quantizer", c),
    };
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.threads {
        if t == 0 {
            anyhow::bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let out_path = common.out.clone().or_else(|| cfg.output_path.clone());
    // run first so a failed experiment leaves no partial file behind
    let mut buf = Vec::new();
    match kind {
        "ergodic" => write_csv(&run::run_ergodic_capacity(&cfg)?, &mut buf)?,
        "outage" => write_csv(&run::run_outage(&cfg)?, &mut buf)?,
        "sweep-boundary" => write_csv(&run::run_boundary_sweep(&cfg)?, &mut buf)?,
        "ber" => write_csv(&run::run_ber(&cfg)?, &mut buf)?,
        "level-sweep" => write_csv(&run::run_level_sweep(&cfg)?, &mut buf)?,
        _ => {
            for r in run::run_design_quantizer(&cfg)? {
                writeln!(buf, "{r}")?;
            }
        }
    }
    let mut out = open_out(out_path.as_deref())?;
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
