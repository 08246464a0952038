use usmc::corpus::{descriptive_stats, generate_synthetic, write_corpus};

use super::Output;
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

pub const CORPUS_FILE: &str = "corpus.jsonl";

/// Writes `corpus.jsonl`, `corpus_stats.csv` and the manifest; returns the
/// descriptive statistics as a text table.
pub fn run(cfg: &ExperimentConfig) -> Result<String> {
    // Validate before touching the output directory so a bad request leaves no file.
    let corpus = generate_synthetic(&cfg.gen, cfg.gen_seed)?;
    let mut bytes = Vec::new();
    write_corpus(&corpus, &mut bytes)?;
    let table = descriptive_stats(&corpus, false)?;
    let out = Output::create(&cfg.out)?;
    out.write(
        CORPUS_FILE,
        std::str::from_utf8(&bytes).map_err(|e| CliError::Io(e.to_string()))?,
    )?;
    out.write("corpus_stats.csv", &table.to_csv())?;
    out.manifest(cfg, "generate")?;
    Ok(table.to_text())
}
