//! `usmc`: experiment runner for interaction-guided crawl ordering.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O or input-format
//! error, 4 degenerate data.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toml::Value;
use usmc::StrategyKind;

use config::{parse_assignment, read_file, ExperimentConfig, Flat, Stop};
use error::Result;

#[derive(Parser)]
#[command(name = "usmc", version, about = "Simulate and evaluate metadata-guided crawl orders")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Flat TOML configuration (a previous run's manifest.toml works).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Override any configuration key, e.g. `--set gen.pages=20`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus and print its descriptive statistics.
    Generate,
    /// Simulate crawls with the request-cost model.
    Crawl(CrawlFlags),
    /// Coverage curves, network recall and degree distributions.
    Evaluate,
    /// Comment-network summaries and exports.
    Netstats(NetFlags),
    /// OLS R², Friedman, Nemenyi and Cohen's d.
    Stats,
    /// Descriptive statistics of a corpus.
    Report,
}

#[derive(Args)]
struct CrawlFlags {
    #[arg(long)]
    strategy: Option<StrategyKind>,
    /// Crawl only this page.
    #[arg(long)]
    page: Option<u64>,
    /// Crawl this share of each page's posts.
    #[arg(long, group = "stop")]
    budget_fraction: Option<f64>,
    /// Stop once this many model seconds have elapsed.
    #[arg(long, group = "stop")]
    time_budget: Option<f64>,
    /// Stop once this many interactions are collected.
    #[arg(long, group = "stop")]
    interaction_target: Option<u64>,
    /// Random stream index.
    #[arg(long)]
    iteration: Option<u64>,
}

#[derive(Args)]
struct NetFlags {
    /// Export only this page (edge list, degree CSV, CCDF).
    #[arg(long)]
    page: Option<u64>,
    /// Build the network from this strategy's sample instead of all posts.
    #[arg(long)]
    strategy: Option<StrategyKind>,
    /// Sample budget fraction.
    #[arg(long)]
    budget: Option<f64>,
}

fn int(x: u64) -> Value {
    if x <= i64::MAX as u64 {
        Value::Integer(x as i64)
    } else {
        Value::String(x.to_string())
    }
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let g = &cli.global;
    let mut flat: Flat = match &g.config {
        Some(p) => read_file(p)?,
        None => Flat::new(),
    };
    for raw in &g.set {
        let (k, v) = parse_assignment(raw)?;
        flat.insert(k, v);
    }
    let mut put = |k: &str, v: Value| {
        flat.insert(k.to_string(), v);
    };
    if let Some(s) = g.seed {
        put("seed", int(s));
    }
    if let Some(o) = &g.out {
        put("out", Value::String(o.display().to_string()));
    }
    if let Some(j) = g.jobs {
        put("jobs", int(j as u64));
    }
    match &cli.command {
        Command::Crawl(c) => {
            if let Some(s) = c.strategy {
                put("crawl.strategy", Value::String(s.token().into()));
            }
            if let Some(p) = c.page {
                put("crawl.page", int(p));
            }
            if let Some(i) = c.iteration {
                put("crawl.iteration", int(i));
            }
            let stop = match (c.budget_fraction, c.time_budget, c.interaction_target) {
                (Some(f), _, _) => Some(Stop::Fraction(f)),
                (_, Some(t), _) => Some(Stop::Time(t)),
                (_, _, Some(m)) => Some(Stop::Target(m)),
                _ => None,
            };
            if let Some(s) = stop {
                put("crawl.stop", Value::String(s.to_string()));
            }
        }
        Command::Netstats(n) => {
            if let Some(p) = n.page {
                put("netstats.page", int(p));
            }
            if let Some(s) = n.strategy {
                put("netstats.strategy", Value::String(s.token().into()));
            }
            if let Some(b) = n.budget {
                put("netstats.budget", Value::Float(b));
            }
        }
        _ => {}
    }
    ExperimentConfig::from_flat(&flat)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = resolve(cli)?;
    match cli.command {
        Command::Generate => print!("{}", commands::generate::run(&cfg)?),
        Command::Report => print!("{}", commands::report::run(&cfg)?),
        Command::Crawl(_) => commands::crawl::run(&cfg)?,
        Command::Evaluate => commands::evaluate::run(&cfg)?,
        Command::Netstats(_) => commands::netstats::run(&cfg)?,
        Command::Stats => commands::stats::run(&cfg)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("usmc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

