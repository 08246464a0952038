//! Interaction coverage as a function of crawl budget.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{InteractionDef, Page, PageId, PostId};
use crate::scalar::{mean, sample_std, Scalar};
use crate::simulator::{simulate_crawl, trace_coverage_points, CostModel, SimError, StopRule};
use crate::strategies::{budget_len, plan_page, CrawlPlan, Strategy, StrategyError, StrategyKind};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("page {0} has no interactions")]
    ZeroInteractions(PageId),
    #[error("post {0} is not on the page")]
    ForeignPost(PostId),
    #[error("grid must be ascending within [0, 1]")]
    BadGrid,
    #[error("curves differ in grid, axis or strategy")]
    MixedCurves,
    #[error("nothing to aggregate")]
    NoCurves,
    #[error("iterations must be at least 1")]
    NoIterations,
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Budget dimension of a coverage curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// Fraction of the page's posts crawled.
    PostBudget,
    /// Fraction of the full-crawl model time spent.
    TimeBudget,
}

impl Axis {
    pub fn token(self) -> &'static str {
        match self {
            Axis::PostBudget => "posts",
            Axis::TimeBudget => "time",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "posts" => Ok(Axis::PostBudget),
            "time" => Ok(Axis::TimeBudget),
            other => Err(format!("unknown axis `{other}` (expected posts|time)")),
        }
    }
}

/// Coverage of one page at each grid point. For the random strategy `values`
/// are iteration means and `spread` the iteration standard deviations; for
/// deterministic strategies `spread` is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageCurve<T> {
    pub page_id: PageId,
    pub strategy: StrategyKind,
    pub axis: Axis,
    pub grid: Vec<T>,
    pub values: Vec<T>,
    pub spread: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateCurve<T> {
    pub strategy: StrategyKind,
    pub axis: Axis,
    pub grid: Vec<T>,
    pub mean: Vec<T>,
    pub std: Vec<T>,
    pub page_count: usize,
}

impl<T: Scalar> AggregateCurve<T> {
    pub const CSV_HEADER: &'static str = "strategy,axis,grid,mean,std,page_count";

    /// Rows without the header, one per grid point.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for i in 0..self.grid.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.strategy, self.axis, self.grid[i], self.mean[i], self.std[i], self.page_count
            ));
        }
        out
    }

    /// Smallest grid point whose mean coverage reaches `level`.
    pub fn first_reaching(&self, level: T) -> Option<T> {
        self.grid
            .iter()
            .zip(&self.mean)
            .find(|(_, &m)| m >= level)
            .map(|(&g, _)| g)
    }
}

pub fn curves_to_csv<T: Scalar>(curves: &[AggregateCurve<T>]) -> String {
    let mut out = format!("{}\n", AggregateCurve::<T>::CSV_HEADER);
    for c in curves {
        out.push_str(&c.csv_rows());
    }
    out
}

/// `{1, 10, 20, 30, 60, 90}%`.
pub fn network_grid<T: Scalar>() -> Vec<T> {
    [0.01, 0.1, 0.2, 0.3, 0.6, 0.9].into_iter().map(T::of).collect()
}

/// `0%, 1%, ..., 100%`.
pub fn dense_grid<T: Scalar>() -> Vec<T> {
    (0..=100).map(|i| T::of_usize(i) / T::of_usize(100)).collect()
}

pub fn validate_grid<T: Scalar>(grid: &[T]) -> Result<(), MetricsError> {
    let in_range = grid.iter().all(|&g| g >= T::zero() && g <= T::one());
    let ascending = grid.windows(2).all(|w| w[0] <= w[1]);
    if in_range && ascending {
        Ok(())
    } else {
        Err(MetricsError::BadGrid)
    }
}

/// Share of the page's interactions held by the posts of `prefix`.
pub fn coverage_at<T: Scalar>(page: &Page, prefix: &CrawlPlan, def: InteractionDef) -> Result<T, MetricsError> {
    let total = page.total_interactions(def);
    if total == 0 {
        return Err(MetricsError::ZeroInteractions(page.id));
    }
    let by_id: HashMap<PostId, u64> = page.posts.iter().map(|p| (p.id, p.interactions(def))).collect();
    let mut got = 0u64;
    for id in &prefix.posts {
        got += by_id.get(id).ok_or(MetricsError::ForeignPost(*id))?;
    }
    Ok(T::of_u64(got) / T::of_u64(total))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveOptions {
    pub cost: CostModel,
    pub def: InteractionDef,
    /// Repetitions of the random strategy.
    pub iterations: usize,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions {
            cost: CostModel::default(),
            def: InteractionDef::default(),
            iterations: 100,
        }
    }
}

/// Coverage of a whole-page plan evaluated at each budget on `grid`.
pub fn coverage_curve<T: Scalar>(
    page: &Page,
    strategy: Strategy,
    grid: &[T],
    axis: Axis,
    opts: &CurveOptions,
) -> Result<CoverageCurve<T>, MetricsError> {
    validate_grid(grid)?;
    if page.total_interactions(opts.def) == 0 {
        return Err(MetricsError::ZeroInteractions(page.id));
    }
    let runs: Vec<Vec<T>> = match strategy {
        Strategy::Random { seed, .. } => {
            if opts.iterations == 0 {
                return Err(MetricsError::NoIterations);
            }
            (0..opts.iterations as u64)
                .map(|iteration| {
                    let plan = plan_page(page, Strategy::Random { seed, iteration })?;
                    plan_values(page, &plan, grid, axis, opts)
                })
                .collect::<Result<_, _>>()?
        }
        s => vec![plan_values(page, &plan_page(page, s)?, grid, axis, opts)?],
    };
    let mut values = Vec::with_capacity(grid.len());
    let mut spread = Vec::with_capacity(grid.len());
    let mut column = Vec::with_capacity(runs.len());
    for i in 0..grid.len() {
        column.clear();
        column.extend(runs.iter().map(|r| r[i]));
        values.push(mean(&column));
        spread.push(sample_std(&column));
    }
    Ok(CoverageCurve {
        page_id: page.id,
        strategy: strategy.kind(),
        axis,
        grid: grid.to_vec(),
        values,
        spread,
    })
}

fn plan_values<T: Scalar>(
    page: &Page,
    plan: &CrawlPlan,
    grid: &[T],
    axis: Axis,
    opts: &CurveOptions,
) -> Result<Vec<T>, MetricsError> {
    match axis {
        Axis::PostBudget => {
            let by_id: HashMap<PostId, u64> =
                page.posts.iter().map(|p| (p.id, p.interactions(opts.def))).collect();
            let mut prefix = Vec::with_capacity(plan.posts.len() + 1);
            prefix.push(0u64);
            for id in &plan.posts {
                let x = by_id.get(id).ok_or(MetricsError::ForeignPost(*id))?;
                prefix.push(prefix.last().unwrap() + x);
            }
            let total = T::of_u64(*prefix.last().unwrap());
            Ok(grid
                .iter()
                .map(|&g| {
                    let k = budget_len(plan.posts.len(), g.as_f64());
                    T::of_u64(prefix[k]) / total
                })
                .collect())
        }
        Axis::TimeBudget => {
            let trace = simulate_crawl(page, plan, &opts.cost, StopRule::WholePlan)?;
            let pts = trace_coverage_points(&trace, &trace, opts.def);
            // Step function: only posts finished by the time budget count.
            Ok(grid
                .iter()
                .map(|&g| {
                    let g = g.as_f64();
                    let reached = pts.points.partition_point(|&(t, _)| t <= g + 1e-12);
                    if reached == 0 {
                        T::zero()
                    } else {
                        T::of(pts.points[reached - 1].1)
                    }
                })
                .collect())
        }
    }
}

/// Pointwise mean and sample standard deviation across pages.
pub fn aggregate<T: Scalar>(curves: &[CoverageCurve<T>]) -> Result<AggregateCurve<T>, MetricsError> {
    let first = curves.first().ok_or(MetricsError::NoCurves)?;
    if curves
        .iter()
        .any(|c| c.grid != first.grid || c.axis != first.axis || c.strategy != first.strategy)
    {
        return Err(MetricsError::MixedCurves);
    }
    let mut means = Vec::with_capacity(first.grid.len());
    let mut stds = Vec::with_capacity(first.grid.len());
    let mut column = Vec::with_capacity(curves.len());
    for i in 0..first.grid.len() {
        column.clear();
        column.extend(curves.iter().map(|c| c.values[i]));
        means.push(mean(&column));
        stds.push(sample_std(&column));
    }
    Ok(AggregateCurve {
        strategy: first.strategy,
        axis: first.axis,
        grid: first.grid.clone(),
        mean: means,
        std: stds,
        page_count: curves.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Post, UserId};

    fn page(likes: &[u64]) -> Page {
        Page {
            id: PageId(1),
            snapshot_time: 100,
            posts: likes
                .iter()
                .enumerate()
                .map(|(i, &l)| Post {
                    id: PostId(i as u64 + 1),
                    created_at: i as i64,
                    likers: (0..l).map(UserId).collect(),
                    comments: vec![],
                })
                .collect(),
        }
    }

    fn curve(v: f64) -> CoverageCurve<f64> {
        CoverageCurve {
            page_id: PageId(1),
            strategy: StrategyKind::Likes,
            axis: Axis::PostBudget,
            grid: vec![0.0, 1.0],
            values: vec![v, v],
            spread: vec![0.0, 0.0],
        }
    }

    #[test]
    fn coverage_edges() {
        let pg = page(&[3, 1, 4]);
        let full = plan_page(&pg, Strategy::ByLikes).unwrap();
        assert_eq!(coverage_at::<f64>(&pg, &full, InteractionDef::default()).unwrap(), 1.0);
        let empty = CrawlPlan { posts: vec![], ..full.clone() };
        assert_eq!(coverage_at::<f64>(&pg, &empty, InteractionDef::default()).unwrap(), 0.0);
        let foreign = CrawlPlan { posts: vec![PostId(99)], ..full };
        assert_eq!(
            coverage_at::<f64>(&pg, &foreign, InteractionDef::default()),
            Err(MetricsError::ForeignPost(PostId(99)))
        );
        let zero = page(&[0, 0]);
        let plan = plan_page(&zero, Strategy::ByLikes).unwrap();
        assert_eq!(
            coverage_at::<f64>(&zero, &plan, InteractionDef::default()),
            Err(MetricsError::ZeroInteractions(PageId(1)))
        );
    }

    #[test]
    fn endpoints_of_any_curve() {
        let pg = page(&[3, 1, 4, 0, 9]);
        for axis in [Axis::PostBudget, Axis::TimeBudget] {
            for kind in StrategyKind::ALL {
                let c: CoverageCurve<f64> =
                    coverage_curve(&pg, kind.with_seed(5, 0), &[0.0, 1.0], axis, &CurveOptions::default()).unwrap();
                assert_eq!(c.values, vec![0.0, 1.0], "{kind} {axis}");
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let pg = page(&[3, 1, 4, 0, 9]);
        let c: CoverageCurve<f32> =
            coverage_curve(&pg, Strategy::ByLikes, &[0.0, 0.2, 1.0], Axis::PostBudget, &CurveOptions::default()).unwrap();
        assert!((c.values[1] - 9.0 / 17.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_grids() {
        let pg = page(&[1]);
        let o = CurveOptions::default();
        assert_eq!(
            coverage_curve::<f64>(&pg, Strategy::ByLikes, &[0.5, 0.2], Axis::PostBudget, &o),
            Err(MetricsError::BadGrid)
        );
        assert_eq!(
            coverage_curve::<f64>(&pg, Strategy::ByLikes, &[1.5], Axis::PostBudget, &o),
            Err(MetricsError::BadGrid)
        );
    }

    #[test]
    fn aggregate_arithmetic() {
        let one = aggregate(&[curve(0.5)]).unwrap();
        assert_eq!(one.mean, vec![0.5, 0.5]);
        assert_eq!(one.std, vec![0.0, 0.0]);
        let two = aggregate(&[curve(0.2), curve(0.4)]).unwrap();
        assert!((two.mean[0] - 0.3).abs() < 1e-12);
        assert!((two.std[0] - 0.1414213562373095).abs() < 1e-12);
        let mut other = curve(0.1);
        other.grid = vec![0.0, 0.5];
        assert_eq!(aggregate(&[curve(0.2), other]), Err(MetricsError::MixedCurves));
        assert_eq!(aggregate::<f64>(&[]), Err(MetricsError::NoCurves));
    }

    #[test]
    fn csv_layout() {
        let agg = aggregate(&[curve(0.25)]).unwrap();
        assert_eq!(
            curves_to_csv(&[agg]),
            "strategy,axis,grid,mean,std,page_count\nlikes,posts,0,0.25,0,1\nlikes,posts,1,0.25,0,1\n"
        );
    }
}
