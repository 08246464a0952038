//! Distribution tails used by the tests. Evaluated in `f64`.

use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Upper tail `P(X > x)` of the chi-squared distribution.
pub fn chi_squared_sf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(df / 2.0, x / 2.0).clamp(0.0, 1.0)
}

/// Absolute tolerance of the studentized-range quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Upper tail `P(Q > q)` of the studentized range of `k` standard normals
/// with infinite degrees of freedom:
///
/// `P(Q > q) = k * integral phi(z) * (Phi(z)^(k-1) - (Phi(z) - Phi(z - q))^(k-1)) dz`,
///
/// integrated by adaptive Simpson quadrature on `[-12, q + 12]`.
pub fn studentized_range_sf(q: f64, k: usize) -> f64 {
    assert!(k >= 2, "studentized range needs k >= 2");
    if q <= 0.0 {
        return 1.0;
    }
    if !q.is_finite() {
        return 0.0;
    }
    let km1 = (k - 1) as i32;
    let f = |z: f64| {
        let pz = normal_cdf(z);
        let inner = (pz - normal_cdf(z - q)).max(0.0);
        normal_pdf(z) * (pz.powi(km1) - inner.powi(km1))
    };
    let knots = [-12.0, -4.0, 0.0, 0.5 * q, q, q + 4.0, q + 12.0];
    let mut total = 0.0;
    for w in knots.windows(2) {
        if w[1] > w[0] {
            total += adaptive_simpson(&f, w[0], w[1], QUADRATURE_TOL / 8.0);
        }
    }
    (k as f64 * total).clamp(0.0, 1.0)
}

pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
