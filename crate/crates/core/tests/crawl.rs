//! Simulator accounting and coverage-curve properties.

mod common;

use proptest::prelude::*;
use usmc::corpus::{generate_synthetic, page_metadata, CountDist, GenParams};
use usmc::metrics::{aggregate, coverage_at, coverage_curve, dense_grid, CurveOptions};
use usmc::simulator::{simulate_crawl, trace_coverage_points};
use usmc::strategies::{budget_len, plan_page, take_budget};
use usmc::{Axis, CostModel, CrawlPlan, InteractionDef, Page, PostId, StopRule, Strategy};

fn heavy_pages(n: usize, seed: u64) -> Vec<Page> {
    let params = GenParams {
        pages: n,
        posts_per_page: CountDist::LogNormal { mu: 4.0, sigma: 0.4 },
        min_posts: 20,
        max_posts: 200,
        user_pool: 5000,
        ..Default::default()
    };
    generate_synthetic(&params, seed).unwrap().pages
}

fn plan_of(page: &Page, posts: Vec<PostId>) -> CrawlPlan {
    CrawlPlan {
        page_id: page.id,
        posts,
        strategy: Strategy::ByLikes,
    }
}

/// Plan sorted by exact interaction totals, the best any ranking can do.
fn oracle_plan(page: &Page, def: InteractionDef) -> CrawlPlan {
    let mut posts: Vec<_> = page.posts.iter().collect();
    posts.sort_by(|a, b| b.interactions(def).cmp(&a.interactions(def)));
    plan_of(page, posts.iter().map(|p| p.id).collect())
}

proptest! {
    #[test]
    fn full_crawl_requests_do_not_depend_on_order(page in common::arb_page(12, 10), seed: u64) {
        let cost = CostModel { items_per_request: 3, seconds_per_request: 0.5 };
        let a = simulate_crawl(&page, &plan_page(&page, Strategy::ByLikes).unwrap(), &cost, StopRule::WholePlan).unwrap();
        let b = simulate_crawl(&page, &plan_page(&page, Strategy::Random { seed, iteration: 0 }).unwrap(), &cost, StopRule::WholePlan).unwrap();
        prop_assert_eq!(a.total_requests, b.total_requests);
        prop_assert_eq!(a.totals, b.totals);
    }

    #[test]
    fn stops_keep_posts_atomic(page in common::arb_page(12, 10), budget in 0.0f64..60.0, target in 0u64..40) {
        let cost = CostModel { items_per_request: 2, seconds_per_request: 1.0 };
        let plan = plan_page(&page, Strategy::Chronological).unwrap();
        let def = InteractionDef::LikesAndComments;
        for stop in [StopRule::TimeBudget(budget), StopRule::InteractionTarget { target, def }] {
            let t = simulate_crawl(&page, &plan, &cost, stop).unwrap();
            prop_assert_eq!(&t.steps.iter().map(|s| s.post_id).collect::<Vec<_>>()[..], &plan.posts[..t.steps.len()]);
            let mut sum = 0u64;
            let mut last = 0.0;
            for (s, id) in t.steps.iter().zip(&plan.posts) {
                let post = page.post(*id).unwrap();
                prop_assert_eq!(s.requests, cost.post_requests(post));
                prop_assert!(s.requests >= 3 && s.cumulative_time >= last);
                last = s.cumulative_time;
                sum += post.interactions(def);
            }
            prop_assert_eq!(t.totals.interactions(def), sum);
            // Continuing past the stop point would have been allowed only if the rule was unmet.
            if t.steps.len() < plan.posts.len() {
                match stop {
                    StopRule::TimeBudget(b) => prop_assert!(t.elapsed >= b),
                    StopRule::InteractionTarget { .. } => prop_assert!(sum >= target),
                    StopRule::WholePlan => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn coverage_points_end_at_one(page in common::arb_page(12, 10)) {
        let plan = plan_page(&page, Strategy::ByComments).unwrap();
        let t = simulate_crawl(&page, &plan, &CostModel::default(), StopRule::WholePlan).unwrap();
        let pts = trace_coverage_points(&t, &t, InteractionDef::LikesAndComments);
        if !pts.zero_interactions {
            let last = *pts.points.last().unwrap();
            prop_assert!((last.0 - 1.0).abs() < 1e-12 && (last.1 - 1.0).abs() < 1e-12);
            prop_assert!(pts.points.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
        }
    }

    #[test]
    fn ranked_curves_are_monotone_and_bounded_by_oracle(page in common::arb_page(12, 10)) {
        let def = InteractionDef::LikesAndComments;
        prop_assume!(page.total_interactions(def) > 0);
        let grid = dense_grid::<f64>();
        let opts = CurveOptions::default();
        let oracle = oracle_plan(&page, def);
        for s in [Strategy::ByLikes, Strategy::ByComments, Strategy::ByLifetime, Strategy::Chronological] {
            let c = coverage_curve(&page, s, &grid, Axis::PostBudget, &opts).unwrap();
            prop_assert!(c.values.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(c.values[0], 0.0);
            prop_assert_eq!(*c.values.last().unwrap(), 1.0);
            for (g, v) in grid.iter().zip(&c.values) {
                let best = coverage_at::<f64>(&page, &take_budget(&oracle, *g), def).unwrap();
                prop_assert!(*v <= best + 1e-12);
            }
        }
    }
}

#[test]
fn likes_trace_starts_above_ascending_trace() {
    let cost = CostModel::default();
    let def = InteractionDef::LikesAndComments;
    for page in heavy_pages(30, 1) {
        let desc = plan_page(&page, Strategy::ByLikes).unwrap();
        let mut asc = desc.posts.clone();
        asc.reverse();
        let full = simulate_crawl(&page, &desc, &cost, StopRule::WholePlan).unwrap();
        let run = |plan: &CrawlPlan| {
            let t = simulate_crawl(&page, plan, &cost, StopRule::WholePlan).unwrap();
            trace_coverage_points(&t, &full, def).points
        };
        let a = run(&desc);
        let b = run(&plan_of(&page, asc));
        assert!(a[0].1 >= b[0].1);
    }
}

#[test]
fn likes_dominate_random_and_outrank_comments_and_lifetime() {
    let pages = heavy_pages(50, 2);
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let opts = CurveOptions::default();
    let curves = |s: Strategy| {
        let cs: Vec<_> = pages
            .iter()
            .map(|p| coverage_curve(p, s, &grid, Axis::PostBudget, &opts).unwrap())
            .collect();
        aggregate(&cs).unwrap()
    };
    let likes = curves(Strategy::ByLikes);
    let comments = curves(Strategy::ByComments);
    let lifetime = curves(Strategy::ByLifetime);
    let random = curves(Strategy::Random { seed: 3, iteration: 0 });
    for i in 0..grid.len() {
        assert!(likes.mean[i] >= random.mean[i] - 1e-12);
        assert!(likes.mean[i] >= comments.mean[i] - 1e-12);
        assert!(comments.mean[i] >= lifetime.mean[i] - 1e-12);
    }
}

#[test]
fn aggregate_matches_recomputation() {
    let pages = heavy_pages(12, 3);
    let grid = dense_grid::<f64>();
    let opts = CurveOptions { iterations: 10, ..Default::default() };
    for axis in [Axis::PostBudget, Axis::TimeBudget] {
        let curves: Vec<_> = pages
            .iter()
            .map(|p| coverage_curve(p, Strategy::Random { seed: 8, iteration: 0 }, &grid, axis, &opts).unwrap())
            .collect();
        let agg = aggregate(&curves).unwrap();
        assert_eq!(agg.page_count, pages.len());
        for i in 0..grid.len() {
            let xs: Vec<f64> = curves.iter().map(|c| c.values[i]).collect();
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
            assert!((agg.mean[i] - m).abs() < 1e-12);
            assert!((agg.std[i] - v.sqrt()).abs() < 1e-12);
        }
    }
}

#[test]
fn random_curve_is_mean_of_independent_draws() {
    let page = &heavy_pages(1, 4)[0];
    let grid = vec![0.0, 0.3, 0.7, 1.0];
    let opts = CurveOptions { iterations: 7, ..Default::default() };
    let c = coverage_curve(page, Strategy::Random { seed: 5, iteration: 0 }, &grid, Axis::PostBudget, &opts).unwrap();
    let def = opts.def;
    for (i, g) in grid.iter().enumerate() {
        let vals: Vec<f64> = (0..7)
            .map(|it| {
                let plan = plan_page(page, Strategy::Random { seed: 5, iteration: it }).unwrap();
                coverage_at::<f64>(page, &take_budget(&plan, *g), def).unwrap()
            })
            .collect();
        assert!((c.values[i] - vals.iter().sum::<f64>() / 7.0).abs() < 1e-12);
    }
    assert_eq!(budget_len(page.posts.len(), 1.0), page.posts.len());
    assert_eq!(page_metadata(page).len(), page.posts.len());
}
