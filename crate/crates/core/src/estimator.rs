//! The minimum-GES estimator, defined by matching uniform medians
//! `umed(F_n) = umed(F_theta)`, and the Hampel-optimal M-estimator with
//! Huberized centered score that coincides with it for small truncation
//! levels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{IntegerDistribution, ParametricFamily};
use crate::solve::{self, Side, SolverConfig};
use crate::umedian::{huber_psi, k0, umed};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateResult {
    pub theta_hat: f64,
    /// `umed` of the data distribution.
    pub umed_target: f64,
    pub iterations: usize,
    /// Residual of the equation solved at `theta_hat`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HampelConfig {
    /// Huber truncation level.
    pub m: f64,
    /// Maximum residual accepted for the centering constant.
    pub c_tol: f64,
    /// Relative bracket width at which the outer bisection stops.
    pub theta_tol: f64,
}

impl HampelConfig {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Domain(format!("truncation level m must be positive, got {m}")));
        }
        Ok(Self { m, c_tol: 1e-11, theta_tol: 1e-12 })
    }
}

/// `g(theta) = umed(F_theta)`: continuous and strictly increasing.
pub fn g<F: ParametricFamily>(family: &F, theta: f64) -> Result<f64> {
    let dist = family.distribution(theta)?;
    Ok(umed(&dist)?.value)
}

fn initial_guess<F: ParametricFamily>(family: &F, guess: f64) -> f64 {
    let (lo, hi) = family.search_bounds();
    if guess.is_finite() && guess > 0.0 {
        guess.clamp(lo, hi)
    } else {
        lo
    }
}

/// Solve `g(theta) = target` by bracket expansion and bisection.
pub fn g_inverse<F: ParametricFamily>(family: &F, target: f64, guess: f64) -> Result<EstimateResult> {
    g_inverse_with(family, target, guess, &SolverConfig::default())
}

pub fn g_inverse_with<F: ParametricFamily>(
    family: &F,
    target: f64,
    guess: f64,
    cfg: &SolverConfig,
) -> Result<EstimateResult> {
    let bounds = family.search_bounds();
    let root = solve::solve_increasing(
        |theta| Ok(g(family, theta)? - target),
        initial_guess(family, guess),
        bounds,
        cfg,
    )
    .map_err(|e| match e {
        Error::NoRootInRange { .. } => Error::TargetOutsideRange {
            target,
            lower: g(family, bounds.0).unwrap_or(f64::NAN),
            upper: g(family, bounds.1).unwrap_or(f64::NAN),
        },
        other => other,
    })?;
    Ok(EstimateResult {
        theta_hat: root.x,
        umed_target: target,
        iterations: root.iterations,
        residual: root.residual,
    })
}

/// The minimum-GES estimate: `theta` with `umed(F_theta) = umed(F)`.
///
/// Applied to an empirical distribution this is the estimator; applied to any
/// other distribution it evaluates the estimator's functional.
pub fn estimate_optimal<D, F>(dist: &D, family: &F) -> Result<EstimateResult>
where
    D: IntegerDistribution + ?Sized,
    F: ParametricFamily,
{
    let target = umed(dist)?.value;
    // Guess from the target alone, so the estimate is a function of umed(F).
    g_inverse(family, target, target + 0.5)
}

/// Half the smaller score gap around `k0(F_theta)`; below this truncation
/// level the Hampel estimator coincides with the umed-matching estimator.
pub fn m0<F: ParametricFamily>(family: &F, theta: f64) -> Result<f64> {
    let dist = family.distribution(theta)?;
    let k = k0(&dist)?;
    let upper = family.score(k + 1, theta) - family.score(k, theta);
    let gap = if k == 0 {
        upper
    } else {
        let lower = family.score(k, theta) - family.score(k - 1, theta);
        if lower * upper <= 0.0 {
            return Err(Error::ScoreNotMonotone { k });
        }
        lower.abs().min(upper.abs())
    };
    if !(gap.abs() > 0.0) {
        return Err(Error::ScoreNotMonotone { k });
    }
    Ok(0.5 * gap.abs())
}

/// Expected Huberized centered score `sum_k p(k) psi_m(psi0(k) - c)`.
fn centered_expectation(masses: &[(u64, f64)], scores: &[f64], m: f64, c: f64) -> f64 {
    masses
        .iter()
        .zip(scores)
        .map(|(&(_, p), &s)| p * huber_psi(s - c, m))
        .sum()
}

/// The centering constant `c(m, theta)` with `E_theta psi_m(psi0 - c) = 0`.
pub fn hampel_c<F: ParametricFamily>(family: &F, m: f64, theta: f64) -> Result<f64> {
    let cfg = HampelConfig::new(m)?;
    let dist = family.distribution(theta)?;
    let masses = dist.masses();
    let scores: Vec<f64> = masses.iter().map(|&(k, _)| family.score(k, theta)).collect();
    solve_centering(&masses, &scores, &cfg)
}

fn solve_centering(masses: &[(u64, f64)], scores: &[f64], cfg: &HampelConfig) -> Result<f64> {
    let m = cfg.m;
    let (smin, smax) = scores
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    let mut lo = smin - m;
    let mut hi = smax + m;
    let e_lo = centered_expectation(masses, scores, m, lo);
    let e_hi = centered_expectation(masses, scores, m, hi);
    if !(e_lo > 0.0 && e_hi < 0.0) {
        return Err(Error::Internal(format!(
            "centering equation has no sign change on [{lo}, {hi}]"
        )));
    }
    // The expectation is piecewise linear and nonincreasing in c; bisect
    // until the bracket collapses so c is accurate to rounding.
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let e = centered_expectation(masses, scores, m, mid);
        if e > 0.0 {
            lo = mid;
        } else if e < 0.0 {
            hi = mid;
        } else {
            return Ok(mid);
        }
    }
    let c = 0.5 * (lo + hi);
    let residual = centered_expectation(masses, scores, m, c);
    if residual.abs() >= cfg.c_tol {
        return Err(Error::Internal(format!("centering residual {residual:e} at c = {c}")));
    }
    Ok(c)
}

/// `Lambda(theta) = sum_k p(k) psi_m(psi0(k, theta) - c(m, theta))` for the
/// data distribution `dist`, including any mass placed at infinity.
pub fn hampel_estimating_function<D, F>(dist: &D, family: &F, cfg: &HampelConfig, theta: f64) -> Result<f64>
where
    D: IntegerDistribution + ?Sized,
    F: ParametricFamily,
{
    hampel_lambda(&dist.masses(), dist.mass_at_infinity(), family, cfg, theta)
}

fn hampel_lambda<F: ParametricFamily>(
    data: &[(u64, f64)],
    mass_at_infinity: f64,
    family: &F,
    cfg: &HampelConfig,
    theta: f64,
) -> Result<f64> {
    let model = family.distribution(theta)?;
    let masses = model.masses();
    let scores: Vec<f64> = masses.iter().map(|&(k, _)| family.score(k, theta)).collect();
    let c = solve_centering(&masses, &scores, cfg)?;
    let finite: f64 = data
        .iter()
        .map(|&(k, p)| p * huber_psi(family.score(k, theta) - c, cfg.m))
        .sum();
    let infinite = if mass_at_infinity > 0.0 {
        mass_at_infinity * huber_psi(family.score_at_infinity(theta) - c, cfg.m)
    } else {
        0.0
    };
    Ok(finite + infinite)
}

/// Hampel-optimal M-estimate: root of `Lambda(theta) = 0`.
///
/// `Lambda` is nonincreasing in `theta`; where it vanishes on an interval the
/// left end is returned, which is where it crosses from positive values.
pub fn estimate_hampel<D, F>(dist: &D, family: &F, cfg: &HampelConfig) -> Result<EstimateResult>
where
    D: IntegerDistribution + ?Sized,
    F: ParametricFamily,
{
    let data = dist.masses();
    let at_infinity = dist.mass_at_infinity();
    // Rounding noise in Lambda is a few ulps of m; anything below this counts
    // as zero so flat stretches are not mistaken for positive values.
    let zero_tol = 1e-13 * cfg.m;
    let side = |theta: f64| -> Result<Side> {
        let v = hampel_lambda(&data, at_infinity, family, cfg, theta)?;
        Ok(if v > zero_tol { Side::Below } else { Side::Above })
    };
    let bounds = family.search_bounds();
    let (lo, hi, expand_evals) = solve::expand_bracket(side, initial_guess(family, dist.mean()), bounds)?;
    let solver = SolverConfig {
        rel_width_tol: cfg.theta_tol,
        ..SolverConfig::default()
    };
    let (theta_hat, iterations) = solve::bisect_sign_change(side, lo, hi, &solver)?;
    let residual = hampel_lambda(&data, at_infinity, family, cfg, theta_hat)?;
    let umed_target = umed(dist).map(|r| r.value).unwrap_or(f64::NAN);
    Ok(EstimateResult {
        theta_hat,
        umed_target,
        iterations: iterations + expand_evals,
        residual,
    })
}
