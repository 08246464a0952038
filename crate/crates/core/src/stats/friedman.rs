use std::collections::HashMap;

use super::dist::{chi_squared_sf, studentized_range_sf};
use super::StatsError;
use crate::scalar::Scalar;

/// How [`FriedmanResult::p_value`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PValueMethod {
    /// Exact permutation distribution of the rank sums under the null.
    Exact,
    /// Chi-squared approximation with `k - 1` degrees of freedom.
    ChiSquared,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FriedmanResult<T> {
    /// Tie-corrected statistic.
    pub chi_squared: T,
    pub df: usize,
    pub p_value: T,
    pub p_method: PValueMethod,
    /// Chi-squared upper-tail p-value, always reported.
    pub p_chi_squared: T,
    pub n: usize,
    pub k: usize,
    pub mean_ranks: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PosthocResult<T> {
    /// Symmetric `k x k` pairwise p-values with unit diagonal.
    pub p_values: Vec<Vec<T>>,
    pub mean_ranks: Vec<T>,
    pub method: &'static str,
}

/// Row ranks, ascending values get ascending ranks, ties share their average.
fn rank_row<T: Scalar>(row: &[T]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..row.len()).collect();
    idx.sort_by(|&a, &b| row[a].partial_cmp(&row[b]).expect("finite values"));
    let mut ranks = vec![0.0; row.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && row[idx[j + 1]] == row[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &pos in &idx[i..=j] {
            ranks[pos] = avg;
        }
        i = j + 1;
    }
    ranks
}

struct Ranked {
    n: usize,
    k: usize,
    rows: Vec<Vec<f64>>,
    sums: Vec<f64>,
    /// `sum over rows and tie groups of (t^3 - t)`.
    ties: f64,
}

fn rank_matrix<T: Scalar>(values: &[Vec<T>]) -> Result<Ranked, StatsError> {
    let n = values.len();
    let k = values.first().map_or(0, Vec::len);
    if n < 2 || k < 2 {
        return Err(StatsError::TooFewObservations {
            n: n.min(k),
            needed: 2,
        });
    }
    if values.iter().any(|r| r.len() != k) {
        return Err(StatsError::NonRectangular);
    }
    if values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let rows: Vec<Vec<f64>> = values.iter().map(|r| rank_row(r)).collect();
    let mut sums = vec![0.0; k];
    let mut ties = 0.0;
    for r in &rows {
        for (s, &x) in sums.iter_mut().zip(r) {
            *s += x;
        }
        let mut counts: HashMap<u64, f64> = HashMap::new();
        for &x in r {
            *counts.entry(x.to_bits()).or_insert(0.0) += 1.0;
        }
        ties += counts.values().map(|&t| t * t * t - t).sum::<f64>();
    }
    Ok(Ranked {
        n,
        k,
        rows,
        sums,
        ties,
    })
}

/// Largest permutation state space explored for an exact p-value.
const EXACT_STATE_LIMIT: f64 = 2.0e5;

/// Friedman rank test over `values`, one row per block and one column per
/// treatment. The exact permutation p-value is used when the rank-sum state
/// space is small enough, otherwise the chi-squared approximation.
pub fn friedman_test<T: Scalar>(values: &[Vec<T>]) -> Result<FriedmanResult<T>, StatsError> {
    let ranked = rank_matrix(values)?;
    let (n, k) = (ranked.n as f64, ranked.k as f64);
    let correction = 1.0 - ranked.ties / (n * (k * k * k - k));
    let sum_sq: f64 = ranked.sums.iter().map(|s| s * s).sum();
    let raw = 12.0 / (n * k * (k + 1.0)) * sum_sq - 3.0 * n * (k + 1.0);
    let stat = if correction <= 1e-12 {
        0.0
    } else {
        (raw / correction).max(0.0)
    };
    let df = ranked.k - 1;
    let p_chi = if correction <= 1e-12 {
        1.0
    } else {
        chi_squared_sf(stat, df as f64)
    };
    let (p_value, p_method) = match exact_p_value(&ranked) {
        Some(p) if correction > 1e-12 => (p, PValueMethod::Exact),
        Some(_) => (1.0, PValueMethod::Exact),
        None => (p_chi, PValueMethod::ChiSquared),
    };
    Ok(FriedmanResult {
        chi_squared: T::of(stat),
        df,
        p_value: T::of(p_value.clamp(0.0, 1.0)),
        p_method,
        p_chi_squared: T::of(p_chi),
        n: ranked.n,
        k: ranked.k,
        mean_ranks: ranked.sums.iter().map(|&s| T::of(s / n)).collect(),
    })
}

/// `P(sum R_j^2 >= observed)` when every row's ranks are permuted uniformly
/// and independently, by dynamic programming over the rank-sum vector. Ranks
/// are doubled so ties stay integral. `None` if the state space is too big.
fn exact_p_value(ranked: &Ranked) -> Option<f64> {
    let (n, k) = (ranked.n, ranked.k);
    if k > 6 {
        return None;
    }
    let width = (2 * n * (k - 1) + 1) as f64;
    if width.powi(k as i32 - 1) > EXACT_STATE_LIMIT {
        return None;
    }
    let doubled: Vec<Vec<i64>> = ranked
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| (2.0 * x).round() as i64).collect())
        .collect();
    let observed: i64 = ranked
        .sums
        .iter()
        .map(|&s| {
            let d = (2.0 * s).round() as i64;
            d * d
        })
        .sum();
    let total_sum: i64 = doubled.iter().flatten().sum();

    let mut states: HashMap<Vec<i64>, f64> = HashMap::from([(vec![0; k - 1], 1.0)]);
    for row in &doubled {
        let perms = distinct_permutations(row);
        let w = 1.0 / perms.len() as f64;
        let mut next: HashMap<Vec<i64>, f64> = HashMap::with_capacity(states.len() * 2);
        for (state, prob) in &states {
            for perm in &perms {
                let key: Vec<i64> = state.iter().zip(perm).map(|(s, r)| s + r).collect();
                *next.entry(key).or_insert(0.0) += prob * w;
            }
        }
        states = next;
    }
    let p = states
        .iter()
        .filter(|(state, _)| {
            let last = total_sum - state.iter().sum::<i64>();
            state.iter().map(|s| s * s).sum::<i64>() + last * last >= observed
        })
        .map(|(_, p)| p)
        .sum::<f64>();
    Some(p)
}

fn distinct_permutations(row: &[i64]) -> Vec<Vec<i64>> {
    let mut v = row.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // Lexicographic next-permutation enumerates each distinct arrangement once.
    loop {
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            break;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
    out
}

/// Nemenyi pairwise comparison of mean ranks: `|Ri - Rj| / sqrt(k (k + 1) /
/// (6 n))`, scaled by `sqrt 2`, referred to the studentized range with `k`
/// groups and infinite degrees of freedom.
pub fn nemenyi_posthoc<T: Scalar>(values: &[Vec<T>]) -> Result<PosthocResult<T>, StatsError> {
    let ranked = rank_matrix(values)?;
    let (n, k) = (ranked.n as f64, ranked.k);
    let mean_ranks: Vec<f64> = ranked.sums.iter().map(|&s| s / n).collect();
    let se = (k as f64 * (k as f64 + 1.0) / (6.0 * n)).sqrt();
    let mut p = vec![vec![T::one(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let q = (mean_ranks[i] - mean_ranks[j]).abs() / se * std::f64::consts::SQRT_2;
            let pij = T::of(studentized_range_sf(q, k));
            p[i][j] = pij;
            p[j][i] = pij;
        }
    }
    Ok(PosthocResult {
        p_values: p,
        mean_ranks: mean_ranks.into_iter().map(T::of).collect(),
        method: "nemenyi",
    })
}
