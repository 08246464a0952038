use std::collections::BTreeMap;

use usmc::metrics::{aggregate, coverage_curve, curves_to_csv, AggregateCurve, CoverageCurve, CurveOptions};
use usmc::network::{
    build_bipartite, build_bipartite_all, degree_distance, degree_distribution, prefix_network_sizes,
    project_comment_network, DegreeDistribution, ProjectionLimits, SocialNetwork,
};
use usmc::strategies::{budget_len, plan_page, take_budget};
use usmc::svg::{line_plot, loglog_plot, strategy_color, Series};
use usmc::{Axis, Page, Strategy, StrategyKind};

use super::{load, par_map, skipped_csv, usable_pages, Output};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

pub const RECALL_HEADER: &str = "strategy,grid,node_mean,node_std,edge_mean,edge_std,page_count";
pub const KS_HEADER: &str = "quantile,page,posts,strategy,ks";

/// Representative pages: the Q1, median and Q3 of the post-count distribution.
pub const QUANTILES: [(&str, f64); 3] = [("q1", 0.25), ("median", 0.5), ("q3", 0.75)];

struct PageResult {
    /// `[strategy][axis]`
    curves: Vec<Vec<CoverageCurve<f64>>>,
    /// `[strategy][grid point]`, absent when the page has no comment network.
    recall: Option<Vec<Vec<(f64, f64)>>>,
}

fn degenerate(e: impl std::fmt::Display) -> CliError {
    CliError::Degenerate(e.to_string())
}

pub fn limits(cfg: &ExperimentConfig) -> ProjectionLimits {
    ProjectionLimits {
        max_clique: cfg.max_clique,
    }
}

/// Plans whose results are averaged for `kind`: one for ranked strategies,
/// `cfg.iterations` independent permutations for random.
pub fn plans(cfg: &ExperimentConfig, page: &Page, kind: StrategyKind) -> Result<Vec<usmc::CrawlPlan>> {
    let runs = if kind == StrategyKind::Random { cfg.iterations as u64 } else { 1 };
    (0..runs)
        .map(|iteration| {
            let s = match cfg.strategy(kind) {
                Strategy::Random { seed, .. } => Strategy::Random { seed, iteration },
                s => s,
            };
            plan_page(page, s).map_err(degenerate)
        })
        .collect()
}

fn recall_for_page(cfg: &ExperimentConfig, page: &Page) -> Result<Option<Vec<Vec<(f64, f64)>>>> {
    let full = project_comment_network(&build_bipartite_all(page), limits(cfg)).map_err(degenerate)?;
    if full.node_count() == 0 {
        return Ok(None);
    }
    let n = page.posts.len();
    let cutoffs: Vec<usize> = cfg.sample_grid.iter().map(|&g| budget_len(n, g)).collect();
    let (fn_, fe) = (full.node_count() as f64, full.edge_count() as f64);
    let mut out = Vec::with_capacity(cfg.strategies.len());
    for &kind in &cfg.strategies {
        let runs = plans(cfg, page, kind)?;
        let mut acc = vec![(0.0, 0.0); cutoffs.len()];
        for plan in &runs {
            let sizes = prefix_network_sizes(page, &plan.posts, &cutoffs, limits(cfg)).map_err(degenerate)?;
            for (a, (nodes, edges)) in acc.iter_mut().zip(sizes) {
                a.0 += nodes as f64 / fn_;
                a.1 += if fe > 0.0 { edges as f64 / fe } else { 1.0 };
            }
        }
        let r = runs.len() as f64;
        out.push(acc.into_iter().map(|(x, y)| (x / r, y / r)).collect());
    }
    Ok(Some(out))
}

fn evaluate_page(cfg: &ExperimentConfig, page: &Page) -> Result<PageResult> {
    let opts = CurveOptions {
        cost: cfg.cost,
        def: cfg.interactions,
        iterations: cfg.iterations,
    };
    let curves = cfg
        .strategies
        .iter()
        .map(|&kind| {
            cfg.axes
                .iter()
                .map(|&axis| coverage_curve(page, cfg.strategy(kind), &cfg.grid, axis, &opts).map_err(degenerate))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PageResult {
        curves,
        recall: recall_for_page(cfg, page)?,
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    (m, (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)).sqrt())
}

/// Index of the page at quantile `q` of the post-count order (ties by page id).
pub fn representative(pages: &[&Page], q: f64) -> usize {
    let mut idx: Vec<usize> = (0..pages.len()).collect();
    idx.sort_by_key(|&i| (pages[i].posts.len(), pages[i].id));
    idx[((pages.len() - 1) as f64 * q).round() as usize]
}

fn sample_network(cfg: &ExperimentConfig, page: &Page, plan: &usmc::CrawlPlan) -> Result<SocialNetwork> {
    let subset = take_budget(plan, cfg.degree_budget);
    project_comment_network(&build_bipartite(page, &subset.posts).map_err(degenerate)?, limits(cfg)).map_err(degenerate)
}

fn ccdf_series(label: &str, color: &str, d: &DegreeDistribution) -> Series {
    Series {
        label: label.into(),
        color: color.into(),
        points: d.ccdf::<f64>().into_iter().map(|(k, p)| (k as f64, p)).collect(),
        error: None,
    }
}

fn degree_outputs(cfg: &ExperimentConfig, pages: &[&Page], out: &Output) -> Result<()> {
    let mut ks = format!("{KS_HEADER}\n");
    if pages.is_empty() {
        return out.write("degree_ks.csv", &ks);
    }
    for (label, q) in QUANTILES {
        let page = pages[representative(pages, q)];
        let full = project_comment_network(&build_bipartite_all(page), limits(cfg)).map_err(degenerate)?;
        let full_d = degree_distribution(&full);
        out.write(&format!("degree_{label}_full.csv"), &full_d.to_csv())?;
        let mut series = vec![ccdf_series("full", "#000000", &full_d)];
        for &kind in &cfg.strategies {
            let runs = plans(cfg, page, kind)?;
            let mut dists = Vec::with_capacity(runs.len());
            for plan in &runs {
                dists.push(degree_distribution(&sample_network(cfg, page, plan)?));
            }
            let mut total = 0.0;
            for d in &dists {
                total += degree_distance::<f64>(d, &full_d).unwrap_or(f64::NAN);
            }
            ks.push_str(&format!(
                "{label},{},{},{kind},{}\n",
                page.id,
                page.posts.len(),
                total / dists.len() as f64
            ));
            out.write(&format!("degree_{label}_{kind}.csv"), &dists[0].to_csv())?;
            series.push(ccdf_series(kind.token(), strategy_color(kind), &dists[0]));
        }
        if cfg.svg {
            out.write(
                &format!("degree_{label}.svg"),
                &loglog_plot(
                    &format!("Degree CCDF, {label} page {} ({} posts)", page.id, page.posts.len()),
                    "degree",
                    "P(D >= d)",
                    &series,
                ),
            )?;
        }
    }
    out.write("degree_ks.csv", &ks)
}

fn curve_svg(curves: &[AggregateCurve<f64>], axis: Axis) -> String {
    let series: Vec<Series> = curves
        .iter()
        .map(|c| Series {
            label: c.strategy.token().into(),
            color: strategy_color(c.strategy).into(),
            points: c.grid.iter().copied().zip(c.mean.iter().copied()).collect(),
            error: (c.strategy == StrategyKind::Random).then(|| c.std.clone()),
        })
        .collect();
    let x = match axis {
        Axis::PostBudget => "share of posts crawled",
        Axis::TimeBudget => "share of full crawl time",
    };
    line_plot("Average interaction coverage", x, "interactions collected", &series)
}

/// Runs the coverage, recall and degree experiments; see the README for the
/// files written.
pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let corpus = load(cfg)?;
    let (pages, zero) = usable_pages(cfg, &corpus);
    let out = Output::create(&cfg.out)?;
    let mut skipped: Vec<(u64, &str)> = zero.iter().map(|&p| (p, "zero interactions")).collect();
    if pages.is_empty() {
        out.write("skipped_pages.csv", &skipped_csv(&skipped))?;
        return Err(CliError::Degenerate("every page has zero interactions".into()));
    }
    for id in &zero {
        eprintln!("skipping page {id}: zero interactions");
    }
    let results = par_map(cfg, &pages, |p| evaluate_page(cfg, p))?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    for (ai, &axis) in cfg.axes.iter().enumerate() {
        let aggs = (0..cfg.strategies.len())
            .map(|si| {
                let curves: Vec<_> = results.iter().map(|r| r.curves[si][ai].clone()).collect();
                aggregate(&curves).map_err(degenerate)
            })
            .collect::<Result<Vec<_>>>()?;
        out.write(&format!("coverage_{}.csv", axis.token()), &curves_to_csv(&aggs))?;
        if cfg.svg {
            out.write(&format!("coverage_{}.svg", axis.token()), &curve_svg(&aggs, axis))?;
        }
    }

    let mut with_net = Vec::new();
    for (page, r) in pages.iter().zip(&results) {
        match &r.recall {
            Some(rec) => with_net.push((*page, rec)),
            None => skipped.push((page.id.0, "empty comment network")),
        }
    }
    let mut recall = format!("{RECALL_HEADER}\n");
    let mut node_series = Vec::new();
    let mut edge_series = Vec::new();
    for (si, &kind) in cfg.strategies.iter().enumerate() {
        let mut nodes_pts = Vec::new();
        let mut edges_pts = Vec::new();
        for (gi, &g) in cfg.sample_grid.iter().enumerate() {
            let nodes: Vec<f64> = with_net.iter().map(|(_, r)| r[si][gi].0).collect();
            let edges: Vec<f64> = with_net.iter().map(|(_, r)| r[si][gi].1).collect();
            if nodes.is_empty() {
                continue;
            }
            let (nm, ns) = mean_std(&nodes);
            let (em, es) = mean_std(&edges);
            recall.push_str(&format!("{kind},{g},{nm},{ns},{em},{es},{}\n", nodes.len()));
            nodes_pts.push((g, nm));
            edges_pts.push((g, em));
        }
        let s = |points| Series {
            label: kind.token().into(),
            color: strategy_color(kind).into(),
            points,
            error: None,
        };
        node_series.push(s(nodes_pts));
        edge_series.push(s(edges_pts));
    }
    out.write("recall.csv", &recall)?;
    if cfg.svg {
        out.write("recall_nodes.svg", &line_plot("Fraction of nodes", "share of posts crawled", "nodes", &node_series))?;
        out.write("recall_edges.svg", &line_plot("Fraction of edges", "share of posts crawled", "edges", &edge_series))?;
    }

    let net_pages: Vec<&Page> = with_net.iter().map(|(p, _)| *p).collect();
    degree_outputs(cfg, &net_pages, &out)?;

    let mut order: BTreeMap<u64, &str> = BTreeMap::new();
    for (p, r) in skipped {
        order.insert(p, r);
    }
    let skipped: Vec<(u64, &str)> = order.into_iter().collect();
    out.write("skipped_pages.csv", &skipped_csv(&skipped))?;
    out.manifest(cfg, "evaluate")
}
