mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{Command, Context};
use config::RunConfig;
use failure::Failure;
use output::OutputSet;

#[derive(Parser, Debug)]
#[command(name = "skinlab", version, about = "Non-Hermitian sp-ladder toolkit: spectra, GBZ, Bloch-oscillation dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Reserved; recorded in the manifest but used by nothing numeric
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Sub {
    /// Open-boundary eigensolve with boundary weight and fractional dimension
    Spectrum,
    /// State-averaged density field
    Density,
    /// κ map over the oblique momentum grid, plus optional GBZ slices
    Gbz,
    /// Driven wave packet, reconstructed spectrum and exact bands
    Dynamics,
    /// Boundary weight and lifetime splitting across rotation angles
    SweepTheta,
    /// Tight-binding couplings from a continuum optical lattice
    Wannier,
    /// Symmetry residuals and invariant checks
    Check,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Spectrum => Command::Spectrum,
            Sub::Density => Command::Density,
            Sub::Gbz => Command::Gbz,
            Sub::Dynamics => Command::Dynamics,
            Sub::SweepTheta => Command::SweepTheta,
            Sub::Wannier => Command::Wannier,
            Sub::Check => Command::Check,
        }
    }
}

fn load(cli: &Cli) -> Result<RunConfig, Failure> {
    let path = cli.config.as_ref().ok_or_else(|| Failure::config("--config is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(out) = &cli.out {
        cfg.output.dir = out.clone();
    }
    if cli.threads == 0 {
        return Err(Failure::config("--threads must be positive"));
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<Vec<PathBuf>, Failure> {
    let cfg = load(cli)?;
    let cmd = Command::from(cli.command);
    let hash = cfg.hash(cmd.name());
    let ctx = Context { cfg: &cfg, threads: cli.threads, verbose: cli.verbose };
    let outcome = commands::run(cmd, &ctx)?;

    let mut set = OutputSet::new(&cfg.output.dir, cmd.name(), &hash)?;
    let mut files = Vec::new();
    for (suffix, csv) in &outcome.tables {
        let name = set.name(*suffix, "csv");
        set.write(&name, csv)?;
        files.push(name);
    }
    for (suffix, doc) in &outcome.documents {
        let name = set.name(Some(suffix), "json");
        set.write(&name, &format!("{}\n", serde_json::to_string_pretty(doc).expect("json serializes")))?;
        files.push(name);
    }
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": cmd.name(),
        "config_hash": hash,
        "config": cfg,
        "seed": cli.seed,
        "threads": cli.threads,
        "files": files,
        "summary": outcome.summary,
    });
    let name = set.name(None, "json");
    set.write(&name, &format!("{}\n", serde_json::to_string_pretty(&manifest).expect("json serializes")))?;
    Ok(set.commit())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.verbose {
                eprintln!("skinlab: {e}");
            }
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
