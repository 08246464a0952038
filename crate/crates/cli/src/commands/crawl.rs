use usmc::simulator::{simulate_crawl, trace_coverage_points};
use usmc::strategies::{plan_page, take_budget};
use usmc::{InteractionDef, Page, PageId, StopRule, Strategy};

use super::{load, par_map, skipped_csv, usable_pages, Output};
use crate::config::{ExperimentConfig, Stop};
use crate::error::{CliError, Result};

pub const TRACE_HEADER: &str =
    "page,strategy,step,post,requests,cumulative_time,post_likes,comments,comment_likes,time_fraction,coverage";
pub const SUMMARY_HEADER: &str =
    "page,strategy,posts_total,posts_crawled,requests,metadata_requests,elapsed,interactions,coverage";

struct PageRun {
    trace: String,
    summary: String,
}

fn crawl_page(cfg: &ExperimentConfig, page: &Page) -> Result<PageRun> {
    let strategy = match cfg.strategy(cfg.crawl_strategy) {
        Strategy::Random { seed, .. } => Strategy::Random {
            seed,
            iteration: cfg.crawl_iteration,
        },
        s => s,
    };
    let def: InteractionDef = cfg.interactions;
    let full_plan = plan_page(page, strategy).map_err(|e| CliError::Degenerate(e.to_string()))?;
    let (plan, stop) = match cfg.crawl_stop {
        Stop::Whole => (full_plan.clone(), StopRule::WholePlan),
        Stop::Fraction(f) => (take_budget(&full_plan, f), StopRule::WholePlan),
        Stop::Time(t) => (full_plan.clone(), StopRule::TimeBudget(t)),
        Stop::Target(m) => (full_plan.clone(), StopRule::InteractionTarget { target: m, def }),
    };
    let sim = |plan, stop| simulate_crawl(page, plan, &cfg.cost, stop).map_err(|e| CliError::Config(e.to_string()));
    let trace = sim(&plan, stop)?;
    let full = sim(&full_plan, StopRule::WholePlan)?;
    let points = trace_coverage_points(&trace, &full, def);
    let token = cfg.crawl_strategy.token();
    let mut rows = String::new();
    for (i, (step, (tf, cov))) in trace.steps.iter().zip(points.points.iter()).enumerate() {
        rows.push_str(&format!(
            "{},{token},{},{},{},{},{},{},{},{tf},{cov}\n",
            page.id,
            i + 1,
            step.post_id,
            step.requests,
            step.cumulative_time,
            step.tally.post_likes,
            step.tally.comments,
            step.tally.comment_likes,
        ));
    }
    let got = trace.totals.interactions(def);
    let summary = format!(
        "{},{token},{},{},{},{},{},{got},{}\n",
        page.id,
        page.posts.len(),
        trace.steps.len(),
        trace.total_requests,
        trace.metadata_requests,
        trace.elapsed,
        got as f64 / page.total_interactions(def) as f64,
    );
    Ok(PageRun { trace: rows, summary })
}

/// Simulates one crawl per page (or the selected page) and writes
/// `crawl_trace.csv`, `crawl_summary.csv` and the manifest.
pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let corpus = load(cfg)?;
    let mut pages: Vec<&Page> = match cfg.crawl_page {
        id if id > 0 => vec![corpus
            .page(PageId(id))
            .ok_or_else(|| CliError::Config(format!("page {id} not in corpus")))?],
        _ => corpus.pages.iter().collect(),
    };
    let (usable, skipped) = usable_pages(cfg, &corpus);
    pages.retain(|p| usable.iter().any(|u| u.id == p.id));
    if pages.is_empty() {
        return Err(CliError::Degenerate("no selected page has interactions".into()));
    }
    let runs = par_map(cfg, &pages, |p| crawl_page(cfg, p))?;
    let mut trace = format!("{TRACE_HEADER}\n");
    let mut summary = format!("{SUMMARY_HEADER}\n");
    for r in runs {
        let r = r?;
        trace.push_str(&r.trace);
        summary.push_str(&r.summary);
    }
    let out = Output::create(&cfg.out)?;
    out.write("crawl_trace.csv", &trace)?;
    out.write("crawl_summary.csv", &summary)?;
    let skipped: Vec<(u64, &str)> = skipped
        .into_iter()
        .filter(|id| cfg.crawl_page == 0 || cfg.crawl_page == *id)
        .map(|id| (id, "zero interactions"))
        .collect();
    out.write("skipped_pages.csv", &skipped_csv(&skipped))?;
    out.manifest(cfg, "crawl")
}
