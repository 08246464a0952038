//! Mock paginated API executing a crawl plan.
//!
//! For each post the crawler fetches the post body, pages through its likes,
//! pages through its comments and, for every comment that has likes, pages
//! through those likes. An empty like or comment list still costs one probe
//! request, so a bare post costs three requests. Posts are atomic: a crawl
//! stops only between posts.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{InteractionDef, Page, PageId, Post, PostId};
use crate::strategies::CrawlPlan;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("plan for page {plan} applied to page {page}")]
    WrongPage { plan: PageId, page: PageId },
    #[error("plan references post {0} which is not on the page")]
    UnknownPost(PostId),
    #[error("invalid cost model: {0}")]
    InvalidCost(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Items returned per paginated request.
    pub items_per_request: u64,
    pub seconds_per_request: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            items_per_request: 25,
            seconds_per_request: 1.0,
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.items_per_request == 0 {
            return Err(SimError::InvalidCost("items_per_request must be >= 1".into()));
        }
        if !(self.seconds_per_request > 0.0 && self.seconds_per_request.is_finite()) {
            return Err(SimError::InvalidCost("seconds_per_request must be > 0".into()));
        }
        Ok(())
    }

    fn pages_of(&self, items: u64) -> u64 {
        items.div_ceil(self.items_per_request)
    }

    /// Requests for the initial metadata listing of `posts` posts.
    pub fn metadata_requests(&self, posts: usize) -> u64 {
        self.pages_of(posts as u64)
    }

    /// Requests for a full crawl of one post.
    pub fn post_requests(&self, post: &Post) -> u64 {
        let likes = self.pages_of(post.like_count()).max(1);
        let comments = self.pages_of(post.comment_count()).max(1);
        let comment_likes: u64 = post
            .comments
            .iter()
            .map(|c| self.pages_of(c.likers.len() as u64))
            .sum();
        1 + likes + comments + comment_likes
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum StopRule {
    #[default]
    WholePlan,
    /// Stop at the first post boundary where elapsed model time >= budget.
    TimeBudget(f64),
    /// Stop at the first post boundary where collected interactions >= target.
    InteractionTarget { target: u64, def: InteractionDef },
}

/// Interactions collected from one or more posts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub post_likes: u64,
    pub comments: u64,
    pub comment_likes: u64,
}

impl Tally {
    pub fn of_post(post: &Post) -> Self {
        Tally {
            post_likes: post.like_count(),
            comments: post.comment_count(),
            comment_likes: post.comment_like_count(),
        }
    }

    pub fn interactions(&self, def: InteractionDef) -> u64 {
        match def {
            InteractionDef::LikesAndComments => self.post_likes + self.comments,
            InteractionDef::WithCommentLikes => self.post_likes + self.comments + self.comment_likes,
        }
    }

    fn add(&mut self, other: &Tally) {
        self.post_likes += other.post_likes;
        self.comments += other.comments;
        self.comment_likes += other.comment_likes;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub post_id: PostId,
    pub requests: u64,
    /// Model time when this post finished.
    pub cumulative_time: f64,
    pub tally: Tally,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrawlTrace {
    pub page_id: PageId,
    pub steps: Vec<TraceStep>,
    pub totals: Tally,
    pub total_requests: u64,
    /// Listing requests made before the first post; not part of `elapsed`.
    pub metadata_requests: u64,
    pub elapsed: f64,
}

pub fn simulate_crawl(
    page: &Page,
    plan: &CrawlPlan,
    cost: &CostModel,
    stop: StopRule,
) -> Result<CrawlTrace, SimError> {
    cost.validate()?;
    if plan.page_id != page.id {
        return Err(SimError::WrongPage {
            plan: plan.page_id,
            page: page.id,
        });
    }
    let by_id: HashMap<PostId, &Post> = page.posts.iter().map(|p| (p.id, p)).collect();
    let posts = plan
        .posts
        .iter()
        .map(|id| by_id.get(id).copied().ok_or(SimError::UnknownPost(*id)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut steps = Vec::new();
    let mut totals = Tally::default();
    let mut requests = 0u64;
    for post in posts {
        let elapsed = requests as f64 * cost.seconds_per_request;
        let done = match stop {
            StopRule::WholePlan => false,
            StopRule::TimeBudget(budget) => elapsed >= budget,
            StopRule::InteractionTarget { target, def } => totals.interactions(def) >= target,
        };
        if done {
            break;
        }
        let used = cost.post_requests(post);
        requests += used;
        let tally = Tally::of_post(post);
        totals.add(&tally);
        steps.push(TraceStep {
            post_id: post.id,
            requests: used,
            cumulative_time: requests as f64 * cost.seconds_per_request,
            tally,
        });
    }
    Ok(CrawlTrace {
        page_id: page.id,
        steps,
        totals,
        total_requests: requests,
        metadata_requests: cost.metadata_requests(page.posts.len()),
        elapsed: requests as f64 * cost.seconds_per_request,
    })
}

/// `(time_fraction, interaction_fraction)` after each crawled post.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePoints {
    pub points: Vec<(f64, f64)>,
    /// The page has no interactions; `points` is `[(0.0, 1.0)]` by convention.
    pub zero_interactions: bool,
}

/// Normalizes `trace` by `full`, a whole-plan crawl of the same page.
pub fn trace_coverage_points(trace: &CrawlTrace, full: &CrawlTrace, def: InteractionDef) -> TracePoints {
    let total = full.totals.interactions(def);
    if total == 0 {
        return TracePoints {
            points: vec![(0.0, 1.0)],
            zero_interactions: true,
        };
    }
    let mut collected = 0u64;
    let points = trace
        .steps
        .iter()
        .map(|s| {
            collected += s.tally.interactions(def);
            (s.cumulative_time / full.elapsed, collected as f64 / total as f64)
        })
        .collect();
    TracePoints {
        points,
        zero_interactions: false,
    }
}
