//! Budget-limited crawling of social-media pages guided by interaction
//! metadata.
//!
//! Posts are ranked by metadata observed in a cheap first pass (likes,
//! comments, lifetime) and crawled in that order through a simulated
//! paginated API. The crate measures how much of a page's interactions, and
//! of its comment co-interaction network, each crawl order recovers for a
//! given budget, and carries the statistics used to compare the orders.
//!
//! Numeric code in [`metrics`], [`network`] and [`stats`] is generic over
//! [`Scalar`] (`f32` or `f64`); the aliases below fix it to `f64`.

pub mod corpus;
pub mod fixture;
pub mod metrics;
pub mod network;
pub mod rng;
mod scalar;
pub mod simulator;
pub mod stats;
pub mod strategies;
pub mod svg;

pub use scalar::Scalar;

pub use corpus::{
    Comment, Corpus, CorpusError, InteractionDef, Page, PageId, Post, PostId, PostMeta, Timestamp, UserId,
};
pub use metrics::Axis;
pub use simulator::{CostModel, CrawlTrace, StopRule};
pub use strategies::{CrawlPlan, Strategy, StrategyKind};

pub type CoverageCurve = metrics::CoverageCurve<f64>;
pub type AggregateCurve = metrics::AggregateCurve<f64>;
pub type RegressionResult = stats::RegressionResult<f64>;
pub type FriedmanResult = stats::FriedmanResult<f64>;
pub type PosthocResult = stats::PosthocResult<f64>;
