//! The uniform median: the median of `X + U` with `U ~ Uniform[-0.5, 0.5]`
//! independent of the integer-valued `X`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::IntegerDistribution;

/// `|F(k0) - 0.5|` below this marks the boundary case. Diagnostic only; the
/// uniform median value never depends on it.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UmedResult {
    pub value: f64,
    /// Smallest `k` with `F(k) >= 0.5`.
    pub k0: u64,
    /// `p(k0)`.
    pub p0: f64,
    /// `F(k0 - 1)`, zero when `k0 = 0`.
    pub cdf_below: f64,
    /// `F(k0)`.
    pub cdf_at: f64,
    pub boundary: bool,
}

/// Huber's score: `x` clipped to `[-m, m]`.
#[inline]
pub fn huber_psi(x: f64, m: f64) -> f64 {
    x.clamp(-m, m)
}

/// `min { k : F(k) >= 0.5 }`, compared exactly.
pub fn k0<D: IntegerDistribution + ?Sized>(dist: &D) -> Result<u64> {
    let mut lo = dist.support_start();
    let mut hi = dist.eval_bound();
    if dist.cdf(hi) < 0.5 {
        return Err(Error::Internal(format!(
            "cdf stays below 0.5 up to the evaluation bound {hi}"
        )));
    }
    // Invariant: cdf(hi) >= 0.5 and every k < lo has cdf(k) < 0.5.
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if dist.cdf(mid) >= 0.5 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// `umed(F) = k0 - 0.5 + (0.5 - F(k0 - 1)) / p(k0)`.
pub fn umed<D: IntegerDistribution + ?Sized>(dist: &D) -> Result<UmedResult> {
    let k0 = k0(dist)?;
    let p0 = dist.pmf(k0);
    if !(p0 > 0.0) {
        return Err(Error::Internal(format!("zero mass at k0 = {k0}")));
    }
    let cdf_below = if k0 == 0 { 0.0 } else { dist.cdf(k0 - 1) };
    let cdf_at = dist.cdf(k0);
    // The fraction lies in (0, 1]; clamp away rounding when F(k0) = 0.5.
    let value = k0 as f64 - 0.5 + ((0.5 - cdf_below) / p0).min(1.0);
    Ok(UmedResult {
        value,
        k0,
        p0,
        cdf_below,
        cdf_at,
        boundary: (cdf_at - 0.5).abs() < BOUNDARY_TOL,
    })
}

/// Median of `X + U` found by bisection on the piecewise-linear cdf of the
/// sum, independently of the closed-form expression in [`umed`].
pub fn umed_oracle<D: IntegerDistribution + ?Sized>(dist: &D) -> f64 {
    let smoothed_cdf = |t: f64| -> f64 {
        let j = (t + 0.5).floor();
        if j < 0.0 {
            return 0.0;
        }
        let j = j as u64;
        let below = if j == 0 { 0.0 } else { dist.cdf(j - 1) };
        below + dist.pmf(j) * (t - j as f64 + 0.5)
    };
    let mut lo = -0.5;
    let mut hi = dist.eval_bound() as f64 + 0.5;
    while hi - lo > 1e-12 * (1.0 + hi.abs()) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if smoothed_cdf(mid) >= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
