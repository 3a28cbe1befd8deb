//! `emproc` — strong-law experiments for empirical distribution functions
//! and plug-in estimators.
//!
//! Exit codes: 0 when every configured verdict passes, 1 when a verdict
//! fails, 2 on usage or configuration errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "emproc",
    version,
    about = "Convergence-rate experiments and inequality checks for empirical processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrability, mixing log-tail, and feasibility-window checks
    Conditions(CommonArgs),
    /// Monte Carlo convergence-rate experiment with log-log slope fit
    Rate(CommonArgs),
    /// Per-replication Hölder-bound check for L-functional plug-ins
    Holder(CommonArgs),
    /// Bracket construction, verification, and the bracketing inequality
    Brackets(CommonArgs),
    /// Dyadic block inequality and the mixing tail bound
    Chaining(CommonArgs),
    /// One-sided-moment risk: kernel-bound sweep plus plug-in rate
    Riskcheck(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file
    #[arg(long, short)]
    config: PathBuf,
    /// Directory for report.json / report.csv / plot.svg / run_meta.json
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    /// Override a config entry: dotted path, JSON value (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Also write an SVG log-log plot where applicable
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(threads) = std::env::var("EMPROC_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("error: EMPROC_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Conditions(a) => ("conditions", a),
        Command::Rate(a) => ("rate", a),
        Command::Holder(a) => ("holder", a),
        Command::Brackets(a) => ("brackets", a),
        Command::Chaining(a) => ("chaining", a),
        Command::Riskcheck(a) => ("riskcheck", a),
    };
    match run(name, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(name: &str, args: &CommonArgs) -> anyhow::Result<bool> {
    let started = Instant::now();
    let cfg = config::load_config(&args.config, &args.set)?;
    let outcome = match name {
        "conditions" => commands::conditions(&cfg)?,
        "rate" => commands::rate(&cfg, args.svg)?,
        "holder" => commands::holder(&cfg)?,
        "brackets" => commands::brackets(&cfg)?,
        "chaining" => commands::chaining(&cfg)?,
        "riskcheck" => commands::riskcheck(&cfg, args.svg)?,
        _ => unreachable!(),
    };
    std::fs::create_dir_all(&args.output_dir)?;
    output::write_json(&args.output_dir, "report.json", &outcome.report)?;
    if let Some(csv) = &outcome.csv {
        output::write_text(&args.output_dir, "report.csv", csv)?;
    }
    if let Some(svg) = &outcome.svg {
        output::write_text(&args.output_dir, "plot.svg", svg)?;
    }
    output::write_meta(&args.output_dir, name, started.elapsed().as_secs_f64())?;
    for (k, v) in &outcome.verdicts {
        println!("[{}] {k}", if *v { "PASS" } else { "FAIL" });
    }
    Ok(outcome.all_pass())
}
