//! Crawl plans: metadata rankings, oldest-first ordering and uniform random
//! sampling without replacement.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{page_metadata, Page, PageId, PostId, PostMeta};
use crate::rng::{derive_seed, partial_shuffle, rng_from_seed};

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("no posts to rank")]
    EmptyMeta,
    #[error("random strategy has no ranking; use sample_random")]
    NotRankable,
    #[error("sample size {k} out of range for {n} posts")]
    SampleSize { k: usize, n: usize },
    #[error("combined weights must be finite")]
    NonFiniteWeights,
}

/// Weights of the z-scored metrics in the combined ranking.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricWeights {
    pub likes: f64,
    pub comments: f64,
    pub lifetime: f64,
}

impl Default for MetricWeights {
    fn default() -> Self {
        MetricWeights {
            likes: 1.0,
            comments: 1.0,
            lifetime: 1.0,
        }
    }
}

/// Strategy family as selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyKind {
    Likes,
    Comments,
    Lifetime,
    Combined,
    Chrono,
    Random,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 6] = [
        StrategyKind::Likes,
        StrategyKind::Comments,
        StrategyKind::Lifetime,
        StrategyKind::Combined,
        StrategyKind::Chrono,
        StrategyKind::Random,
    ];

    pub fn token(self) -> &'static str {
        match self {
            StrategyKind::Likes => "likes",
            StrategyKind::Comments => "comments",
            StrategyKind::Lifetime => "lifetime",
            StrategyKind::Combined => "combined",
            StrategyKind::Chrono => "chrono",
            StrategyKind::Random => "random",
        }
    }

    /// The concrete strategy; `seed` and `iteration` only matter for `Random`.
    pub fn with_seed(self, seed: u64, iteration: u64) -> Strategy {
        match self {
            StrategyKind::Likes => Strategy::ByLikes,
            StrategyKind::Comments => Strategy::ByComments,
            StrategyKind::Lifetime => Strategy::ByLifetime,
            StrategyKind::Combined => Strategy::Combined(MetricWeights::default()),
            StrategyKind::Chrono => Strategy::Chronological,
            StrategyKind::Random => Strategy::Random { seed, iteration },
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected likes|comments|lifetime|combined|chrono|random)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    ByLikes,
    ByComments,
    ByLifetime,
    Combined(MetricWeights),
    Chronological,
    Random { seed: u64, iteration: u64 },
}

impl Strategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Strategy::ByLikes => StrategyKind::Likes,
            Strategy::ByComments => StrategyKind::Comments,
            Strategy::ByLifetime => StrategyKind::Lifetime,
            Strategy::Combined(_) => StrategyKind::Combined,
            Strategy::Chronological => StrategyKind::Chrono,
            Strategy::Random { .. } => StrategyKind::Random,
        }
    }
}

/// Ordered selection of posts from one page.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrawlPlan {
    pub page_id: PageId,
    pub posts: Vec<PostId>,
    pub strategy: Strategy,
}

impl CrawlPlan {
    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }
}

/// Sorts posts by the strategy's score, descending, ties by ascending post id.
/// `Chronological` takes the oldest post first.
pub fn rank_posts(
    page_id: PageId,
    meta: &[PostMeta],
    strategy: Strategy,
) -> Result<CrawlPlan, StrategyError> {
    if meta.is_empty() {
        return Err(StrategyError::EmptyMeta);
    }
    let mut order: Vec<&PostMeta> = meta.iter().collect();
    match strategy {
        Strategy::ByLikes => order.sort_by(|a, b| desc(a.like_count, b.like_count, a, b)),
        Strategy::ByComments => order.sort_by(|a, b| desc(a.comment_count, b.comment_count, a, b)),
        Strategy::ByLifetime => order.sort_by(|a, b| desc(a.lifetime, b.lifetime, a, b)),
        Strategy::Chronological => order.sort_by(|a, b| {
            a.created_at
                .cmp(&b.created_at)
                .then(a.post_id.cmp(&b.post_id))
        }),
        Strategy::Combined(w) => {
            if !(w.likes.is_finite() && w.comments.is_finite() && w.lifetime.is_finite()) {
                return Err(StrategyError::NonFiniteWeights);
            }
            let scores = combined_scores(meta, w);
            let mut idx: Vec<usize> = (0..meta.len()).collect();
            idx.sort_by(|&i, &j| {
                scores[j]
                    .total_cmp(&scores[i])
                    .then(meta[i].post_id.cmp(&meta[j].post_id))
            });
            order = idx.into_iter().map(|i| &meta[i]).collect();
        }
        Strategy::Random { .. } => return Err(StrategyError::NotRankable),
    }
    Ok(CrawlPlan {
        page_id,
        posts: order.into_iter().map(|m| m.post_id).collect(),
        strategy,
    })
}

fn desc(x: u64, y: u64, a: &PostMeta, b: &PostMeta) -> Ordering {
    y.cmp(&x).then(a.post_id.cmp(&b.post_id))
}

/// Weighted sum of per-page z-scores (population std; a constant metric
/// contributes zero).
fn combined_scores(meta: &[PostMeta], w: MetricWeights) -> Vec<f64> {
    let z = |f: &dyn Fn(&PostMeta) -> f64| -> Vec<f64> {
        let xs: Vec<f64> = meta.iter().map(f).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
        xs.iter()
            .map(|x| if sd > 0.0 { (x - mean) / sd } else { 0.0 })
            .collect()
    };
    let likes = z(&|m| m.like_count as f64);
    let comments = z(&|m| m.comment_count as f64);
    let lifetime = z(&|m| m.lifetime as f64);
    (0..meta.len())
        .map(|i| w.likes * likes[i] + w.comments * comments[i] + w.lifetime * lifetime[i])
        .collect()
}

/// Uniform sample of `k` posts without replacement, in draw order.
pub fn sample_random(
    page_id: PageId,
    meta: &[PostMeta],
    k: usize,
    seed: u64,
) -> Result<CrawlPlan, StrategyError> {
    if k > meta.len() {
        return Err(StrategyError::SampleSize { k, n: meta.len() });
    }
    let mut ids: Vec<PostId> = meta.iter().map(|m| m.post_id).collect();
    let mut rng = rng_from_seed(seed);
    partial_shuffle(&mut ids, k, &mut rng);
    ids.truncate(k);
    Ok(CrawlPlan {
        page_id,
        posts: ids,
        strategy: Strategy::Random {
            seed,
            iteration: 0,
        },
    })
}

/// Full-length plan for any strategy. `Random { seed, iteration }` draws a
/// uniform permutation from the stream `derive_seed(seed, page, iteration)`.
pub fn plan_page(page: &Page, strategy: Strategy) -> Result<CrawlPlan, StrategyError> {
    let meta = page_metadata(page);
    match strategy {
        Strategy::Random { seed, iteration } => {
            let stream = derive_seed(seed, page.id.0, iteration);
            let mut plan = sample_random(page.id, &meta, meta.len(), stream)?;
            plan.strategy = strategy;
            Ok(plan)
        }
        s => rank_posts(page.id, &meta, s),
    }
}

/// Number of posts a budget fraction buys: `round(fraction * n)`, halves up.
pub fn budget_len(n: usize, fraction: f64) -> usize {
    let f = fraction.clamp(0.0, 1.0);
    (((f * n as f64) + 0.5 + 1e-9).floor() as usize).min(n)
}

/// Order-preserving prefix of `plan` for a budget fraction.
pub fn take_budget(plan: &CrawlPlan, fraction: f64) -> CrawlPlan {
    let k = budget_len(plan.posts.len(), fraction);
    CrawlPlan {
        page_id: plan.page_id,
        posts: plan.posts[..k].to_vec(),
        strategy: plan.strategy,
    }
}
