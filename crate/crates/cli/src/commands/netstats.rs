use usmc::network::{build_bipartite, degree_distribution, project_comment_network};
use usmc::strategies::{plan_page, take_budget};
use usmc::svg::loglog_plot;
use usmc::{Page, PageId, PostId};

use super::evaluate::limits;
use super::{load, par_map, Output};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

pub const HEADER: &str = "page,posts,sample,budget,posts_sampled,nodes,edges,mean_degree,max_degree";

fn sample_posts(cfg: &ExperimentConfig, page: &Page) -> Result<Vec<PostId>> {
    match cfg.net_strategy {
        None => Ok(take_budget(
            &usmc::CrawlPlan {
                page_id: page.id,
                posts: page.posts.iter().map(|p| p.id).collect(),
                strategy: usmc::Strategy::Chronological,
            },
            cfg.net_budget,
        )
        .posts),
        Some(kind) => {
            let plan = plan_page(page, cfg.strategy(kind)).map_err(|e| CliError::Degenerate(e.to_string()))?;
            Ok(take_budget(&plan, cfg.net_budget).posts)
        }
    }
}

/// Comment-network summary per page (`network_stats.csv`); for a single
/// selected page also its edge list, degree histogram and CCDF plot.
pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let corpus = load(cfg)?;
    let pages: Vec<&Page> = match cfg.net_page {
        0 => corpus.pages.iter().collect(),
        id => vec![corpus
            .page(PageId(id))
            .ok_or_else(|| CliError::Config(format!("page {id} not in corpus")))?],
    };
    if pages.is_empty() {
        return Err(CliError::Degenerate("corpus has no pages".into()));
    }
    let sample = cfg.net_strategy.map_or("full", |k| k.token());
    let nets = par_map(cfg, &pages, |page| -> Result<_> {
        let posts = sample_posts(cfg, page)?;
        let bip = build_bipartite(page, &posts).map_err(|e| CliError::Degenerate(e.to_string()))?;
        let net = project_comment_network(&bip, limits(cfg)).map_err(|e| CliError::Degenerate(e.to_string()))?;
        Ok((posts.len(), net))
    })?;
    let out = Output::create(&cfg.out)?;
    let mut csv = format!("{HEADER}\n");
    for (page, r) in pages.iter().zip(nets) {
        let (sampled, net) = r?;
        let deg = net.degrees();
        let mean = if deg.is_empty() {
            0.0
        } else {
            2.0 * net.edge_count() as f64 / deg.len() as f64
        };
        csv.push_str(&format!(
            "{},{},{sample},{},{sampled},{},{},{mean},{}\n",
            page.id,
            page.posts.len(),
            cfg.net_budget,
            net.node_count(),
            net.edge_count(),
            deg.values().max().copied().unwrap_or(0),
        ));
        if cfg.net_page != 0 {
            let dist = degree_distribution(&net);
            out.write(&format!("edges_{}.txt", page.id), &net.edge_list())?;
            out.write(&format!("degree_{}.csv", page.id), &dist.to_csv())?;
            if cfg.svg {
                let series = usmc::svg::Series {
                    label: sample.into(),
                    color: "#000000".into(),
                    points: dist.ccdf::<f64>().into_iter().map(|(d, p)| (d as f64, p)).collect(),
                    error: None,
                };
                out.write(
                    &format!("degree_{}.svg", page.id),
                    &loglog_plot(&format!("Degree CCDF, page {}", page.id), "degree", "P(D >= d)", &[series]),
                )?;
            }
        }
    }
    out.write("network_stats.csv", &csv)?;
    out.manifest(cfg, "netstats")
}
