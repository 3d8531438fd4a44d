use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use twotone_cli::commands;
use twotone_cli::RunConfig;
use twotone_core::Quantity;

/// Two-tone driven cavity-magnon response simulator.
#[derive(Parser, Debug)]
#[command(name = "twotone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration file; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Response to evaluate: R1, T2, R2, T1, S11, S21, S13 or S23.
    #[arg(long, global = true)]
    quantity: Option<Quantity>,

    /// Port 3 to port 1 amplitude ratio.
    #[arg(long, global = true, conflicts_with = "delta0")]
    delta: Option<f64>,

    /// Effective amplitude √(κ1κ3)/|g|·δ.
    #[arg(long, global = true)]
    delta0: Option<f64>,

    /// Port 3 drive phase in radians.
    #[arg(long, global = true, allow_negative_numbers = true)]
    phi: Option<f64>,

    /// Also write a PNG heatmap.
    #[arg(long, global = true)]
    png: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// 1-D response along the probe axis.
    Spectrum,
    /// 2-D response over probe × magnon frequency.
    Sweep,
    /// Poles, zeros and regime over a list of magnon frequencies.
    Poles,
    /// Run the invariant suites; exits non-zero if any fails.
    Verify,
}

fn load(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            RunConfig::from_toml(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(q) = cli.quantity {
        config.quantity = q;
    }
    if let Some(delta) = cli.delta {
        config.drive.delta = Some(delta);
        config.drive.delta0 = None;
    }
    if let Some(d0) = cli.delta0 {
        config.drive.delta0 = Some(d0);
        config.drive.delta = None;
    }
    if let Some(phi) = cli.phi {
        config.drive.phi = phi;
    }
    if cli.png {
        config.emit_plots = true;
    }
    if let Some(out) = &cli.out {
        config.output.dir = out.to_string_lossy().into_owned();
    }
    config.validate()?;
    Ok(config)
}

fn workers(config: &RunConfig) -> anyhow::Result<Option<usize>> {
    match std::env::var("TWOTONE_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("TWOTONE_THREADS = '{v}'"))?;
            anyhow::ensure!(n > 0, "TWOTONE_THREADS must be positive");
            Ok(Some(n))
        }
        Err(_) => Ok(config.output.workers),
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let config = load(cli)?;
    let dir = PathBuf::from(&config.output.dir);
    match cli.command {
        Command::Spectrum => {
            let path = commands::cmd_spectrum(&config, &dir)?;
            println!("wrote {}", path.display());
        }
        Command::Sweep => {
            let summary = commands::cmd_sweep(&config, &dir, workers(&config)?)?;
            for f in &summary.files {
                println!("wrote {}", dir.join(f).display());
            }
            if summary.singular_cells > 0 {
                eprintln!("warning: {} singular cells written as NaN", summary.singular_cells);
            }
        }
        Command::Poles => {
            let report = commands::cmd_poles(&config, &dir)?;
            println!("regime {}, wrote {}", report.regime, dir.join("poles.json").display());
        }
        Command::Verify => {
            let report = commands::cmd_verify(&config, &dir, workers(&config)?)?;
            for s in &report.suites {
                println!(
                    "{} {} (worst {:.3e}, tolerance {:.1e}, {} samples)",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.name,
                    s.worst_residual,
                    s.tolerance,
                    s.samples
                );
            }
            println!("wrote {}", dir.join("verify.json").display());
            return Ok(report.all_passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
