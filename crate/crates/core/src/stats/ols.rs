use super::StatsError;
use crate::scalar::Scalar;

/// Least-squares fit with intercept.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionResult<T> {
    pub label: String,
    pub r_squared: T,
    /// One per predictor column; aliased columns get zero.
    pub coefficients: Vec<T>,
    pub intercept: T,
    pub n: usize,
    /// Predictor columns found linearly dependent on the intercept and
    /// earlier columns (constant columns included).
    pub aliased: Vec<usize>,
}

/// Fits `response ~ 1 + predictors` by Householder QR of the centered design
/// and reports `R^2 = 1 - SS_res / SS_tot`.
pub fn ols_r2<T: Scalar>(
    label: &str,
    predictors: &[&[T]],
    response: &[T],
) -> Result<RegressionResult<T>, StatsError> {
    let n = response.len();
    let p = predictors.len();
    if predictors.iter().any(|c| c.len() != n) {
        return Err(StatsError::LengthMismatch);
    }
    if n < p + 2 {
        return Err(StatsError::TooFewObservations { n, needed: p + 2 });
    }
    let nt = T::of_usize(n);
    let y_mean = response.iter().copied().sum::<T>() / nt;
    let mut y: Vec<T> = response.iter().map(|&v| v - y_mean).collect();
    let ss_tot: T = y.iter().map(|&v| v * v).sum();
    if ss_tot <= T::zero() {
        return Err(StatsError::DegenerateResponse);
    }

    let x_means: Vec<T> = predictors.iter().map(|c| c.iter().copied().sum::<T>() / nt).collect();
    let mut cols: Vec<Vec<T>> = predictors
        .iter()
        .zip(&x_means)
        .map(|(c, &m)| c.iter().map(|&v| v - m).collect())
        .collect();
    let col_norms: Vec<T> = cols.iter().map(|c| norm(c)).collect();
    let tol = T::of(1e3) * T::epsilon() * nt.sqrt();

    // Householder sweep; `rank` is the next pivot row.
    let mut rank = 0;
    let mut kept = Vec::with_capacity(p);
    let mut aliased = Vec::new();
    for j in 0..p {
        let sub_norm = norm(&cols[j][rank..]);
        if col_norms[j] == T::zero() || sub_norm <= tol * col_norms[j] {
            aliased.push(j);
            continue;
        }
        let alpha = if cols[j][rank] > T::zero() { -sub_norm } else { sub_norm };
        let mut v: Vec<T> = cols[j][rank..].to_vec();
        v[0] = v[0] - alpha;
        let vnorm2: T = v.iter().map(|&x| x * x).sum();
        let reflect = |target: &mut [T]| {
            let dot: T = v.iter().zip(target.iter()).map(|(&a, &b)| a * b).sum();
            let scale = (dot + dot) / vnorm2;
            for (t, &vi) in target.iter_mut().zip(&v) {
                *t = *t - scale * vi;
            }
        };
        for c in cols.iter_mut().skip(j) {
            reflect(&mut c[rank..]);
        }
        reflect(&mut y[rank..]);
        kept.push(j);
        rank += 1;
    }

    // Back substitution on the kept columns: R beta = (Q^T y)[..rank].
    let mut beta_kept = vec![T::zero(); rank];
    for row in (0..rank).rev() {
        let mut acc = y[row];
        for (idx, &j) in kept.iter().enumerate().skip(row + 1) {
            acc = acc - cols[j][row] * beta_kept[idx];
        }
        beta_kept[row] = acc / cols[kept[row]][row];
    }
    let mut coefficients = vec![T::zero(); p];
    for (idx, &j) in kept.iter().enumerate() {
        coefficients[j] = beta_kept[idx];
    }
    let intercept = y_mean
        - coefficients
            .iter()
            .zip(&x_means)
            .map(|(&b, &m)| b * m)
            .sum::<T>();
    let ss_res: T = y[rank..].iter().map(|&v| v * v).sum();
    let r_squared = (T::one() - ss_res / ss_tot).max(T::zero()).min(T::one());
    Ok(RegressionResult {
        label: label.to_string(),
        r_squared,
        coefficients,
        intercept,
        n,
        aliased,
    })
}

fn norm<T: Scalar>(xs: &[T]) -> T {
    // Scaled to avoid overflow on large raw magnitudes (lifetimes in seconds).
    let scale = xs.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = xs.iter().map(|&x| (x / scale) * (x / scale)).sum();
    scale * s.sqrt()
}
