//! Scalar root finding for monotone functions: geometric bracket expansion
//! followed by bisection.
//!
//! Bisection is used throughout because the functions solved here have kinks
//! wherever the median cell `k0` changes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop once `|f(x)|` falls below this.
    pub residual_tol: f64,
    /// Stop once the bracket is narrower than `rel_width_tol * (1 + |x|)`.
    pub rel_width_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            rel_width_tol: 1e-12,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Which side of the sign change a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// Finds `[lo, hi]` inside `bounds` with `side(lo) == Below` and
/// `side(hi) == Above`, starting at `guess` and halving/doubling outwards.
///
/// `side` must be monotone: `Below` on a left interval, `Above` on the rest.
pub fn expand_bracket<F>(mut side: F, guess: f64, bounds: (f64, f64)) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<Side>,
{
    let (lower, upper) = bounds;
    let start = if guess.is_finite() { guess.clamp(lower, upper) } else { upper };
    let mut evals = 1;
    match side(start)? {
        Side::Above => {
            let mut lo = start;
            loop {
                if lo <= lower {
                    return Err(Error::NoRootInRange { lower, upper });
                }
                let hi = lo;
                lo = (lo * 0.5).max(lower);
                evals += 1;
                if side(lo)? == Side::Below {
                    return Ok((lo, hi, evals));
                }
            }
        }
        Side::Below => {
            let mut hi = start;
            loop {
                if hi >= upper {
                    return Err(Error::NoRootInRange { lower, upper });
                }
                let lo = hi;
                hi = (hi * 2.0).min(upper);
                evals += 1;
                if side(hi)? == Side::Above {
                    return Ok((lo, hi, evals));
                }
            }
        }
    }
}

/// Root of an increasing function `f` inside `bounds`.
pub fn solve_increasing<F>(mut f: F, guess: f64, bounds: (f64, f64), cfg: &SolverConfig) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut last = None;
    let (lo, hi, evals) = expand_bracket(
        |x| {
            let v = f(x)?;
            last = Some((x, v));
            Ok(if v < 0.0 { Side::Below } else { Side::Above })
        },
        guess,
        bounds,
    )?;
    if let Some((x, v)) = last {
        if v.abs() < cfg.residual_tol {
            return Ok(Root { x, residual: v, iterations: evals });
        }
    }
    bisect(f, lo, hi, cfg, evals)
}

/// Bisection on `[lo, hi]` with `f(lo) < 0 <= f(hi)`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, cfg: &SolverConfig, mut iterations: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut best = (hi, f64::INFINITY);
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        iterations += 1;
        if v.abs() < best.1.abs() {
            best = (mid, v);
        }
        if v.abs() < cfg.residual_tol {
            return Ok(Root { x: mid, residual: v, iterations });
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < cfg.rel_width_tol * (1.0 + mid.abs()) {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    let v = f(x)?;
    if v.abs() <= best.1.abs() {
        best = (x, v);
    }
    Ok(Root { x: best.0, residual: best.1, iterations: iterations + 1 })
}

/// Left end of the sign change of a nonincreasing `side` predicate: the
/// infimum of `{x : side(x) == Above}`, located to the relative width
/// tolerance. Used where the function may vanish on a whole interval.
pub fn bisect_sign_change<F>(mut side: F, mut lo: f64, mut hi: f64, cfg: &SolverConfig) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> Result<Side>,
{
    let mut iterations = 0;
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        match side(mid)? {
            Side::Below => lo = mid,
            Side::Above => hi = mid,
        }
        if hi - lo < cfg.rel_width_tol * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok((0.5 * (lo + hi), iterations))
}
