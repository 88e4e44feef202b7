use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bmoforge_cli::config::{parse_config_with, ExperimentConfig, ExperimentKind};
use bmoforge_cli::report::{load_manifests, report_summary, to_csv, to_table};
use bmoforge_cli::run_experiment;
use clap::{Args, Parser, Subcommand};

/// Exact and Monte Carlo experiments on processes of bounded mean oscillation.
#[derive(Parser)]
#[command(name = "bmoforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML or JSON config; without one, defaults for the subcommand are used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides `BMOFORGE_SEED` and the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact inequality suites on randomized finite filtrations.
    VerifyFinite(RunArgs),
    /// Nested Monte Carlo grid of conditional moduli.
    RhoGrid(RunArgs),
    /// Moment John–Nirenberg checks on a chosen process family.
    JnCheck(RunArgs),
    /// Moments of the Davie functional and their shift scaling.
    Davie(RunArgs),
    /// Quadrature error of mesh-point sampling.
    Quadrature(RunArgs),
    /// Strong error of tamed Euler–Maruyama against a coupled fine reference.
    TamedEm(RunArgs),
    /// Aggregate manifests into a CSV and a text table.
    Report {
        /// Manifest files or run directories.
        manifests: Vec<PathBuf>,
        /// Directory for `report.csv`; printed only when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_seed() -> anyhow::Result<Option<u64>> {
    match std::env::var("BMOFORGE_SEED") {
        Ok(s) => Ok(Some(s.trim().parse().with_context(|| format!("BMOFORGE_SEED = {s:?} is not a u64"))?)),
        Err(_) => Ok(None),
    }
}

fn load(kind: ExperimentKind, args: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    let seed = args.seed.or(env_seed()?);
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config_with(&text, seed)?
        }
        None => ExperimentConfig::defaults(kind, seed.context("no config given: pass --seed or set BMOFORGE_SEED")?),
    };
    if config.kind != kind {
        anyhow::bail!("config is for `{}` but the subcommand is `{kind}`", config.kind);
    }
    Ok(config)
}

fn run(kind: ExperimentKind, args: &RunArgs) -> anyhow::Result<bool> {
    let config = load(kind, args)?;
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    let out = args
        .out
        .clone()
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("bmoforge-out/{kind}")));
    let manifest = run_experiment(&config, &out)?;
    println!("{} -> {}", kind, out.display());
    for row in &manifest.summary {
        println!("  {:<28} cases {:>7}  violations {:>4}  worst ratio {:.4}", row.check, row.n_cases, row.violations, row.worst_ratio);
    }
    for b in &manifest.bands {
        let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        println!(
            "  {:<28} {} in [{}, {}]: {}",
            b.name,
            show(b.value),
            show(b.low),
            show(b.high),
            if b.met { "met" } else { "MISSED" }
        );
    }
    if manifest.violations > 0 {
        eprintln!("{} violations; witnesses in {}", manifest.violations, out.join("violations.jsonl").display());
    }
    Ok(manifest.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::VerifyFinite(a) => run(ExperimentKind::VerifyFinite, a),
        Command::RhoGrid(a) => run(ExperimentKind::RhoGrid, a),
        Command::JnCheck(a) => run(ExperimentKind::JnCheck, a),
        Command::Davie(a) => run(ExperimentKind::Davie, a),
        Command::Quadrature(a) => run(ExperimentKind::Quadrature, a),
        Command::TamedEm(a) => run(ExperimentKind::TamedEm, a),
        Command::Report { manifests, out } => (|| {
            let rows = report_summary(&load_manifests(manifests)?);
            print!("{}", to_table(&rows));
            if let Some(dir) = out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("report.csv"), to_csv(&rows)?)?;
            }
            Ok(true)
        })(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
