use usmc::corpus::descriptive_stats;

use super::{load, Output};
use crate::config::ExperimentConfig;
use crate::error::Result;

/// Descriptive statistics with network rows: `corpus_stats.csv` and the text table.
pub fn run(cfg: &ExperimentConfig) -> Result<String> {
    let corpus = load(cfg)?;
    let table = descriptive_stats(&corpus, true)?;
    let out = Output::create(&cfg.out)?;
    out.write("corpus_stats.csv", &table.to_csv())?;
    out.manifest(cfg, "report")?;
    Ok(table.to_text())
}
