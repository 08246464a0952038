pub mod crawl;
pub mod evaluate;
pub mod generate;
pub mod netstats;
pub mod report;
pub mod stats;

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use usmc::corpus::{generate_synthetic, load_corpus};
use usmc::{Corpus, Page};

use crate::config::{render_flat, CorpusSource, ExperimentConfig};
use crate::error::{io_err, CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn load(cfg: &ExperimentConfig) -> Result<Corpus> {
    match &cfg.corpus {
        CorpusSource::Path(p) => load_corpus(p).map_err(|e| match e {
            usmc::CorpusError::Io(inner) => io_err(p, inner),
            other => CliError::Io(format!("{}: {other}", p.display())),
        }),
        CorpusSource::Generate { params, seed } => Ok(generate_synthetic(params, *seed)?),
    }
}

/// Maps `f` over `items` on a pool of `cfg.jobs` threads; output keeps input order.
pub fn par_map<T: Sync, R: Send>(cfg: &ExperimentConfig, items: &[T], f: impl Fn(&T) -> R + Sync) -> Result<Vec<R>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

pub struct Output<'a> {
    dir: &'a Path,
}

impl<'a> Output<'a> {
    pub fn create(dir: &'a Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Output { dir })
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| io_err(&path, e))
    }

    /// Resolved config plus tool metadata; valid input for `--config`.
    pub fn manifest(&self, cfg: &ExperimentConfig, command: &str) -> Result<()> {
        let mut flat = cfg.to_flat();
        flat.insert("tool.name".into(), toml::Value::String("usmc".into()));
        flat.insert("tool.version".into(), toml::Value::String(VERSION.into()));
        flat.insert("tool.command".into(), toml::Value::String(command.into()));
        self.write("manifest.toml", &render_flat(&flat))
    }
}

/// Pages with at least one interaction, and the ids of those skipped.
pub fn usable_pages<'c>(cfg: &ExperimentConfig, corpus: &'c Corpus) -> (Vec<&'c Page>, Vec<u64>) {
    let (mut ok, mut skipped) = (Vec::new(), Vec::new());
    for p in &corpus.pages {
        if p.total_interactions(cfg.interactions) > 0 {
            ok.push(p);
        } else {
            skipped.push(p.id.0);
        }
    }
    (ok, skipped)
}

pub fn skipped_csv(rows: &[(u64, &str)]) -> String {
    let mut out = String::from("page,reason\n");
    for (p, r) in rows {
        out.push_str(&format!("{p},{r}\n"));
    }
    out
}
