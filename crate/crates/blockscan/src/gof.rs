//! Goodness-of-fit statistics on sorted p-values.
//!
//! All statistics scan order statistics p_(1) <= ... <= p_(i_max) with
//! i_max = floor(n/2) and return the maximizing index alongside the value.
//! `hc` deliberately carries no side restriction; `hc_plus` (the variant
//! restricted to p_(i) < i/n) exists because the phi-divergence family at
//! s = 2 equals half its square, and tests hold us to that identity.

use crate::error::Error;
use crate::gauss;
use crate::Result;

/// P-values sorted ascending and clamped into the usable range.
#[derive(Debug, Clone)]
pub struct SortedPValues {
    values: Vec<f64>,
}

impl SortedPValues {
    /// Clamp, validate and sort. Requires at least two values.
    pub fn new(mut raw: Vec<f64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::domain("need at least two p-values"));
        }
        for v in raw.iter_mut() {
            if v.is_nan() {
                return Err(Error::domain("p-value is NaN"));
            }
            *v = gauss::clamp_p(*v);
        }
        raw.sort_unstable_by(f64::total_cmp);
        Ok(SortedPValues { values: raw })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A statistic value plus the 1-based order-statistic index attaining it.
/// `index` is None when no index qualifies (possible for the one-sided
/// statistics, which then report their empty-max convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofValue {
    pub value: f64,
    pub index: Option<usize>,
}

/// Higher criticism: max over 1 <= i <= n/2 of
/// sqrt(n) (i/n - p_(i)) / sqrt(p_(i)(1 - p_(i))), no side restriction.
pub fn hc(p: &SortedPValues) -> GofValue {
    let n = p.len();
    hc_scan(&p.values[..n / 2], n)
}

/// Higher criticism restricted to indices with p_(i) < i/n; 0 when none
/// qualify. This is the variant whose square links to the s = 2 divergence.
pub fn hc_plus(p: &SortedPValues) -> GofValue {
    let n = p.len();
    hc_plus_scan(&p.values[..n / 2], n)
}

/// Berk-Jones: max over 1 <= i <= n/2, restricted to p_(i) < i/n, of the
/// binomial log-likelihood ratio at (i, p_(i)); 0 when no index qualifies.
pub fn bj(p: &SortedPValues) -> GofValue {
    let n = p.len();
    bj_scan(&p.values[..n / 2], n)
}

/// Phi-divergence statistic with index s in [-1, 2]. s = 1 is Berk-Jones
/// (same code path, so the values agree exactly); s = 0 is the reversed KL;
/// s = 2 is half the square of `hc_plus`.
pub fn phi_divergence(p: &SortedPValues, s: f64) -> Result<GofValue> {
    if !(-1.0..=2.0).contains(&s) {
        return Err(Error::domain(format!("divergence index {s} outside [-1, 2]")));
    }
    let n = p.len();
    Ok(phi_scan(&p.values[..n / 2], n, s))
}

// ---------------------------------------------------------------------------
// scans over sorted prefixes; `prefix` holds p_(1)..p_(floor(n/2)) ascending.
// The structured evaluator calls these directly on half-sorted buffers.

pub(crate) fn hc_scan(prefix: &[f64], n: usize) -> GofValue {
    debug_assert!(prefix.len() == n / 2);
    let sqrt_n = (n as f64).sqrt();
    let n_f = n as f64;
    let mut best = f64::NEG_INFINITY;
    let mut best_i = None;
    for (idx, &p) in prefix.iter().enumerate() {
        let i_f = (idx + 1) as f64;
        let t = sqrt_n * (i_f / n_f - p) / (p * (1.0 - p)).sqrt();
        if t > best {
            best = t;
            best_i = Some(idx + 1);
        }
    }
    GofValue {
        value: best,
        index: best_i,
    }
}

pub(crate) fn hc_plus_scan(prefix: &[f64], n: usize) -> GofValue {
    debug_assert!(prefix.len() == n / 2);
    let sqrt_n = (n as f64).sqrt();
    let n_f = n as f64;
    let mut best = 0.0f64;
    let mut best_i = None;
    for (idx, &p) in prefix.iter().enumerate() {
        let i_f = (idx + 1) as f64;
        if p < i_f / n_f {
            let t = sqrt_n * (i_f / n_f - p) / (p * (1.0 - p)).sqrt();
            if t > best {
                best = t;
                best_i = Some(idx + 1);
            }
        }
    }
    GofValue {
        value: best,
        index: best_i,
    }
}

/// Binomial log-likelihood ratio term: i log(i/(n p)) + (n-i) log((1-i/n)/(1-p)).
/// Shared verbatim by `bj` and the s = 1 divergence branch.
#[inline]
fn loglik_term(i: usize, n: usize, p: f64) -> f64 {
    let i_f = i as f64;
    let n_f = n as f64;
    let rest = (n - i) as f64;
    i_f * (i_f / (n_f * p)).ln() + rest * ((rest / n_f) / (1.0 - p)).ln()
}

pub(crate) fn bj_scan(prefix: &[f64], n: usize) -> GofValue {
    debug_assert!(prefix.len() == n / 2);
    let n_f = n as f64;
    let mut best = 0.0f64;
    let mut best_i = None;
    for (idx, &p) in prefix.iter().enumerate() {
        let i = idx + 1;
        if p < i as f64 / n_f {
            let t = loglik_term(i, n, p);
            if t > best {
                best = t;
                best_i = Some(i);
            }
        }
    }
    GofValue {
        value: best,
        index: best_i,
    }
}

pub(crate) fn phi_scan(prefix: &[f64], n: usize, s: f64) -> GofValue {
    if s == 1.0 {
        return bj_scan(prefix, n);
    }
    debug_assert!(prefix.len() == n / 2);
    let n_f = n as f64;
    let mut best = 0.0f64;
    let mut best_i = None;
    for (idx, &p) in prefix.iter().enumerate() {
        let i = idx + 1;
        let u = i as f64 / n_f;
        if p < u {
            let t = n_f * k_div(s, u, p);
            if t > best {
                best = t;
                best_i = Some(i);
            }
        }
    }
    GofValue {
        value: best,
        index: best_i,
    }
}

/// The divergence kernel K_s(u, v) between Bernoulli(u) and Bernoulli(v),
/// with the KL limits at s = 1 and s = 0.
#[inline]
fn k_div(s: f64, u: f64, v: f64) -> f64 {
    if s == 0.0 {
        v * (v / u).ln() + (1.0 - v) * ((1.0 - v) / (1.0 - u)).ln()
    } else {
        debug_assert!(s != 1.0, "s = 1 routes through loglik_term");
        (1.0 - u.powf(s) * v.powf(1.0 - s) - (1.0 - u).powf(s) * (1.0 - v).powf(1.0 - s))
            / (s * (1.0 - s))
    }
}

// ---------------------------------------------------------------------------
// supremum statistics over a t-range, used by the tail-bound harness

/// sup over t in [a, b] of n K_1(F_n(t), t) for the empirical CDF F_n of the
/// given sorted sample. On each interval where F_n is constant the integrand
/// is convex in t, so the supremum is attained at interval endpoints; we
/// evaluate those candidates exactly.
pub fn loglik_sup(p: &SortedPValues, a: f64, b: f64) -> Result<f64> {
    if !(0.0 < a && a < b && b < 1.0) {
        return Err(Error::domain(format!("need 0 < a < b < 1, got [{a}, {b}]")));
    }
    let v = &p.values;
    let n = v.len();
    let n_f = n as f64;
    let count_le = |t: f64| v.partition_point(|&x| x <= t);
    let term = |k: usize, t: f64| -> f64 {
        // n K_1(k/n, t) with the 0 log 0 = 0 convention at k = 0, n
        let k_f = k as f64;
        let mut out = 0.0;
        if k > 0 {
            out += k_f * ((k_f / n_f) / t).ln();
        }
        if k < n {
            let r = (n - k) as f64;
            out += r * ((r / n_f) / (1.0 - t)).ln();
        }
        out
    };
    let mut best = term(count_le(a), a).max(term(count_le(b), b));
    let lo = v.partition_point(|&x| x <= a);
    let hi = v.partition_point(|&x| x <= b);
    for i in lo..hi {
        let t = v[i];
        // at t = p_(i+1): F_n jumps from i/n to (i+1)/n; both sides are
        // endpoint candidates
        best = best.max(term(i + 1, t));
        if i > 0 || a < t {
            best = best.max(term(i, t));
        }
    }
    Ok(best)
}

/// Two-sided Berk-Jones: sup over t in [p_(1), p_(n)] of n K_1(F_n(t), t).
/// This is the object the analytic Berk-Jones tail bound actually controls;
/// it dominates `bj` pointwise.
pub fn bj_two_sided(p: &SortedPValues) -> Result<f64> {
    let v = &p.values;
    loglik_sup(p, v[0], v[v.len() - 1].min(gauss::P_CEIL))
}
