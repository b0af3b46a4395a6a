//! `salem`: configuration-driven analyses of Salem type substitutions.

mod commands;
mod config;
mod error;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Context;
use crate::config::AnalysisConfig;
use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "salem", version, about = "Substitution, orbit, spectral and bound analyses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON analysis configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Overrides the configured precision in bits.
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<usize>,
    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Matrix, polynomials, Perron data and Salem verdict.
    Analyze,
    /// Integer traces, residues and fractional parts along the orbit of each η.
    TraceOrbit,
    /// Empirical against limiting frequencies for each (η, J).
    Equidist,
    /// Selberg majorant and minorant sandwich checks.
    SelbergCheck,
    /// Twisted ergodic integrals, Hölder fits and product bounds.
    Spectral,
    /// Case selection, δ, γ, N₀ and r₀ for each η.
    Bounds,
    /// All of the above.
    Report,
}

impl Command {
    fn run(self, ctx: &Context) -> CliResult<Vec<output::OutputFile>> {
        match self {
            Command::Analyze => commands::analyze(ctx),
            Command::TraceOrbit => commands::trace_orbit_cmd(ctx),
            Command::Equidist => commands::equidist(ctx),
            Command::SelbergCheck => commands::selberg_check(ctx),
            Command::Spectral => commands::spectral(ctx),
            Command::Bounds => commands::bounds(ctx),
            Command::Report => commands::report(ctx),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::TraceOrbit => "trace-orbit",
            Command::Equidist => "equidist",
            Command::SelbergCheck => "selberg-check",
            Command::Spectral => "spectral",
            Command::Bounds => "bounds",
            Command::Report => "report",
        }
    }
}

fn load_config(common: &Common) -> CliResult<AnalysisConfig> {
    let path = common.config.as_ref().ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let mut cfg = AnalysisConfig::from_json(&text)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(bits) = common.precision {
        cfg.precision_bits = bits;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> CliResult<()> {
    let cfg = load_config(&cli.common)?;
    let ctx = Context::new(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let files = pool.install(|| cli.command.run(&ctx))?;
    let meta = ctx.meta(cli.command.name());
    for path in output::write_bundle(&cli.common.out, &meta, &files)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
