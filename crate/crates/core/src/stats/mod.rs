//! OLS goodness of fit, Friedman and Nemenyi rank tests, Cohen's d.

pub mod dist;
mod friedman;
mod ols;

pub use friedman::{friedman_test, nemenyi_posthoc, FriedmanResult, PValueMethod, PosthocResult};
pub use ols::{ols_r2, RegressionResult};

use thiserror::Error;

use crate::scalar::{mean, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} observations, got {n}")]
    TooFewObservations { n: usize, needed: usize },
    #[error("columns differ in length")]
    LengthMismatch,
    #[error("rows differ in length")]
    NonRectangular,
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("response has zero variance")]
    DegenerateResponse,
    #[error("pooled standard deviation is zero")]
    ZeroPooledStd,
}

/// Standardized mean difference `(mean(a) - mean(b)) / s_pooled`, with the
/// pooled variance over `n_a + n_b - 2` degrees of freedom.
pub fn cohens_d<T: Scalar>(a: &[T], b: &[T]) -> Result<T, StatsError> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::TooFewObservations {
                n: s.len(),
                needed: 2,
            });
        }
    }
    let (ma, mb) = (mean(a), mean(b));
    let ss = |xs: &[T], m: T| xs.iter().map(|&x| (x - m) * (x - m)).sum::<T>();
    let dof = T::of_usize(a.len() + b.len() - 2);
    let pooled = ((ss(a, ma) + ss(b, mb)) / dof).sqrt();
    if pooled == T::zero() {
        if ma == mb {
            return Ok(T::zero());
        }
        return Err(StatsError::ZeroPooledStd);
    }
    Ok((ma - mb) / pooled)
}
