use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use wco_cli::{dump_gtable, run, run_oracle_battery, CliError, Config, RunOptions};

/// Boundedness and essential-norm reports for weighted composition
/// operators between holomorphic Lipschitz-type spaces on the unit disk.
#[derive(Parser, Debug)]
#[command(name = "wco", version, about)]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the target-space exponent α from the config.
    #[arg(long)]
    alpha: Option<f64>,

    /// Override the source-space exponent β from the config.
    #[arg(long)]
    beta: Option<f64>,

    /// Print the coefficient table for the given derivative order and,
    /// with --json-out, write it as JSON.
    #[arg(long, value_name = "J")]
    dump_gtable: Option<u32>,

    /// Directory for plot-ready CSV curves.
    #[arg(long)]
    curves_dir: Option<PathBuf>,

    /// Run the oracle battery (finite differences, dense suprema,
    /// defining identity) before the pipeline.
    #[arg(long)]
    oracle: bool,

    /// Override the discrete sequence cap from the config.
    #[arg(long)]
    n_max: Option<u32>,

    /// Override the radial level count K from the config.
    #[arg(long)]
    grid_k: Option<usize>,

    /// Report path (default report.json).
    #[arg(long)]
    json_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("wco: {e}");
            ExitCode::from(1)
        }
        Err(e @ CliError::Eval(_)) => {
            eprintln!("wco: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(j_max) = cli.dump_gtable {
        if j_max > 20 {
            return Err(CliError::Config("gtable order capped at 20".into()));
        }
        let (text, json) = dump_gtable(j_max);
        println!("{text}");
        if let Some(path) = &cli.json_out {
            let body = serde_json::to_string_pretty(&json)
                .map_err(|e| CliError::Eval(e.to_string()))?;
            std::fs::write(path, body).map_err(|e| CliError::Eval(e.to_string()))?;
            println!("table written to {}", path.display());
        }
        if cli.config.is_none() {
            return Ok(());
        }
    }

    if cli.oracle {
        let checks = run_oracle_battery()?;
        println!("oracle battery: {checks} checks passed");
        if cli.config.is_none() {
            return Ok(());
        }
    }

    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required to run the pipeline".into()))?;
    let config = Config::from_path(config_path)?;
    let options = RunOptions {
        alpha_override: cli.alpha,
        beta_override: cli.beta,
        n_max_override: cli.n_max,
        grid_k_override: cli.grid_k,
        curves_dir: cli.curves_dir.clone(),
    };
    let json_out = cli.json_out.unwrap_or_else(|| PathBuf::from("report.json"));
    let (report, _) = run(&config, &options, &json_out)?;

    println!(
        "α = {}, β = {} (J = {}, N = {})",
        report.params.alpha, report.params.beta, report.params.j, report.params.n
    );
    println!("boundedness: {:?}", report.boundedness.verdict);
    match &report.essential_norm {
        Some(ess) => {
            println!(
                "essential norm in [{:.6}, {:.6}] (discrete {:.6}), compact: {}",
                ess.interval[0], ess.interval[1], ess.discrete_estimate, ess.compact
            );
        }
        None => println!("essential norm: undefined (unbounded operator)"),
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!("report written to {}", json_out.display());
    Ok(())
}
