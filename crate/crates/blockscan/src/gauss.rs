//! Gaussian tail probabilities.
//!
//! Everything downstream consumes upper-tail p-values, often deep in the
//! tail, so the central requirement here is relative (not absolute) accuracy:
//! `upper_tail` is good to about 1e-14 relative error wherever the result is
//! representable, and values are clamped away from 0 and 1 before they reach
//! any log or ratio.

use crate::error::Error;
use crate::Result;

/// Lower clamp for p-values; anything smaller underflows downstream logs.
pub const P_FLOOR: f64 = 1e-300;
/// Upper clamp; keeps 1 - p from rounding to zero.
pub const P_CEIL: f64 = 1.0 - 1e-16;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A probability clamped to [`P_FLOOR`, `P_CEIL`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    /// Clamp a raw value into the usable range. NaN is rejected.
    pub fn clamped(raw: f64) -> Result<Self> {
        if raw.is_nan() {
            return Err(Error::domain("probability is NaN"));
        }
        Ok(Probability(raw.clamp(P_FLOOR, P_CEIL)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Clamp helper for hot paths that work on bare f64 p-values.
#[inline]
pub fn clamp_p(raw: f64) -> f64 {
    raw.clamp(P_FLOOR, P_CEIL)
}

/// P(Z > z) for standard normal Z, clamped into the usable range.
///
/// Computed through erfc with an explicit branch: the direct form for z >= 0
/// where the tail is small, the reflection for z < 0 where the complement is
/// the small quantity.
#[inline]
pub fn upper_tail(z: f64) -> f64 {
    let raw = upper_tail_raw(z);
    clamp_p(raw)
}

#[inline]
pub fn upper_tail_raw(z: f64) -> f64 {
    if z >= 0.0 {
        0.5 * libm::erfc(z * FRAC_1_SQRT_2)
    } else {
        1.0 - 0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
    }
}

/// Standard normal density.
#[inline]
pub fn phi(z: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.3989422804014327;
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Inverse of [`upper_tail`]: the z with P(Z > z) = p.
///
/// Monotone bisection brings the bracket down, then Newton steps polish to
/// ~1e-12 relative. The bisection alone would do; Newton just saves
/// iterations once the density is safely nonzero.
pub fn upper_tail_inv(p: Probability) -> f64 {
    let p = p.value();
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    // upper_tail is decreasing: upper_tail(lo) ~ 1 > p > upper_tail(hi) ~ 0
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if upper_tail_raw(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..4 {
        let f = upper_tail_raw(z) - p;
        let d = phi(z);
        if d <= 0.0 {
            break;
        }
        let step = f / d;
        if !step.is_finite() {
            break;
        }
        z += step;
        z = z.clamp(lo - 1.0, hi + 1.0);
    }
    z
}

/// Aggregate z-score of a region: sum of cells divided by sqrt(cell count).
#[inline]
pub fn region_score(sum: f64, size: u64) -> f64 {
    debug_assert!(size > 0);
    sum / (size as f64).sqrt()
}

/// Upper-tail p-value of a region's aggregate score.
#[inline]
pub fn region_pvalue(sum: f64, size: u64) -> f64 {
    upper_tail(region_score(sum, size))
}
