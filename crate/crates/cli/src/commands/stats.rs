use usmc::corpus::page_metadata;
use usmc::metrics::{coverage_curve, CurveOptions};
use usmc::stats::{cohens_d, friedman_test, nemenyi_posthoc, ols_r2, FriedmanResult, StatsError};
use usmc::svg::box_plot;
use usmc::{Axis, Page};

use super::{load, par_map, skipped_csv, Output};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

pub const TREATMENTS: [&str; 4] = ["lifetime", "comments", "likes", "combined"];
pub const R2_HEADER: &str = "page,posts,lifetime,comments,likes,combined";
pub const TESTS_HEADER: &str = "test,treatments,statistic,df,p_value,p_method,p_chi_squared,n,k";
pub const COHEN_HEADER: &str = "strategy_a,strategy_b,grid,mean_a,mean_b,d";

/// `[lifetime, comments, likes, combined]` R², or why the page is excluded.
fn page_r2(cfg: &ExperimentConfig, page: &Page) -> std::result::Result<[f64; 4], &'static str> {
    let meta = page_metadata(page);
    let lifetime: Vec<f64> = meta.iter().map(|m| m.lifetime as f64).collect();
    let comments: Vec<f64> = meta.iter().map(|m| m.comment_count as f64).collect();
    let likes: Vec<f64> = meta.iter().map(|m| m.like_count as f64).collect();
    let y: Vec<f64> = page.posts.iter().map(|p| p.interactions(cfg.interactions) as f64).collect();
    let fit = |cols: &[&[f64]]| match ols_r2("", cols, &y) {
        Ok(r) => Ok(r.r_squared),
        Err(StatsError::DegenerateResponse) => Err("zero-variance response"),
        Err(_) => Err("too few posts"),
    };
    Ok([
        fit(&[&lifetime])?,
        fit(&[&comments])?,
        fit(&[&likes])?,
        fit(&[&lifetime, &comments, &likes])?,
    ])
}

fn test_row(label: &str, treatments: &[&str], f: &FriedmanResult<f64>) -> String {
    format!(
        "{label},{},{},{},{},{},{},{},{}\n",
        treatments.join("|"),
        f.chi_squared,
        f.df,
        f.p_value,
        match f.p_method {
            usmc::stats::PValueMethod::Exact => "exact",
            usmc::stats::PValueMethod::ChiSquared => "chi_squared",
        },
        f.p_chi_squared,
        f.n,
        f.k
    )
}

fn stats_err(e: StatsError) -> CliError {
    CliError::Degenerate(e.to_string())
}

/// Per-page R², Friedman and Nemenyi over the R² matrix and Cohen's d
/// between strategy coverages; see the README for the files written.
pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let corpus = load(cfg)?;
    let pages: Vec<&Page> = corpus.pages.iter().collect();
    let r2 = par_map(cfg, &pages, |p| page_r2(cfg, p))?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut csv = format!("{R2_HEADER}\n");
    for (page, r) in pages.iter().zip(&r2) {
        match r {
            Ok(v) => {
                csv.push_str(&format!("{},{},{},{},{},{}\n", page.id, page.posts.len(), v[0], v[1], v[2], v[3]));
                rows.push(v.to_vec());
            }
            Err(why) => skipped.push((page.id.0, *why)),
        }
    }
    let out = Output::create(&cfg.out)?;
    out.write("skipped_pages.csv", &skipped_csv(&skipped))?;
    if rows.len() < 2 {
        return Err(CliError::Degenerate(format!(
            "{} usable page(s); the rank tests need at least 2",
            rows.len()
        )));
    }
    out.write("r2.csv", &csv)?;

    let singles: Vec<Vec<f64>> = rows.iter().map(|r| r[..3].to_vec()).collect();
    let f3 = friedman_test(&singles).map_err(stats_err)?;
    let f4 = friedman_test(&rows).map_err(stats_err)?;
    let mut tests = format!("{TESTS_HEADER}\n");
    tests.push_str(&test_row("friedman", &TREATMENTS[..3], &f3));
    tests.push_str(&test_row("friedman", &TREATMENTS, &f4));
    out.write("tests.csv", &tests)?;

    let post = nemenyi_posthoc(&rows).map_err(stats_err)?;
    let mut nem = format!("treatment,{}\n", TREATMENTS.join(","));
    for (name, row) in TREATMENTS.iter().zip(&post.p_values) {
        let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        nem.push_str(&format!("{name},{}\n", cells.join(",")));
    }
    out.write("nemenyi.csv", &nem)?;
    let mut ranks = String::from("treatment,mean_rank_3,mean_rank_4\n");
    for (i, name) in TREATMENTS.iter().enumerate() {
        let r3 = f3.mean_ranks.get(i).map_or(String::new(), |r| r.to_string());
        ranks.push_str(&format!("{name},{r3},{}\n", f4.mean_ranks[i]));
    }
    out.write("mean_ranks.csv", &ranks)?;

    if cfg.svg {
        let groups: Vec<(String, Vec<f64>)> = TREATMENTS
            .iter()
            .enumerate()
            .map(|(i, t)| (t.to_string(), rows.iter().map(|r| r[i]).collect()))
            .collect();
        out.write("r2_boxplot.svg", &box_plot("R2 of OLS regression per page", "R2", &groups))?;
    }

    let opts = CurveOptions {
        cost: cfg.cost,
        def: cfg.interactions,
        iterations: cfg.iterations,
    };
    let covered: Vec<&Page> = pages
        .iter()
        .copied()
        .filter(|p| p.total_interactions(cfg.interactions) > 0)
        .collect();
    let coverage = par_map(cfg, &covered, |p| {
        cfg.strategies
            .iter()
            .map(|&k| {
                coverage_curve(p, cfg.strategy(k), &cfg.sample_grid, Axis::PostBudget, &opts)
                    .map(|c| c.values)
                    .map_err(|e| CliError::Degenerate(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut cohen = format!("{COHEN_HEADER}\n");
    for (i, &a) in cfg.strategies.iter().enumerate() {
        for (j, &b) in cfg.strategies.iter().enumerate().skip(i + 1) {
            for (gi, g) in cfg.sample_grid.iter().enumerate() {
                let xa: Vec<f64> = coverage.iter().map(|c| c[i][gi]).collect();
                let xb: Vec<f64> = coverage.iter().map(|c| c[j][gi]).collect();
                let d = cohens_d(&xa, &xb).unwrap_or(f64::NAN);
                let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
                cohen.push_str(&format!("{a},{b},{g},{},{},{d}\n", mean(&xa), mean(&xb)));
            }
        }
    }
    out.write("cohens_d.csv", &cohen)?;
    out.manifest(cfg, "stats")
}
