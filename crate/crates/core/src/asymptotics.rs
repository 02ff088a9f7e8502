//! Limit laws of the uniform median and of the minimum-GES estimator, the
//! derivative of `g(theta) = umed(F_theta)`, and asymptotic efficiency
//! relative to maximum likelihood.

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::families::{IntegerDistribution, ParametricFamily};
use crate::umedian::{umed, UmedResult};

/// Standard normal cdf.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Asymptotic law of a root-n scaled, centered statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum LimitLaw {
    /// `N(0, variance)`.
    Interior { variance: f64 },
    /// `Phi(t / left_scale)` for `t <= 0`, `Phi(t / right_scale)` for `t > 0`.
    Boundary { left_scale: f64, right_scale: f64 },
}

impl LimitLaw {
    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            LimitLaw::Interior { variance } => std_normal_cdf(t / variance.sqrt()),
            LimitLaw::Boundary { left_scale, right_scale } => {
                if t <= 0.0 {
                    std_normal_cdf(t / left_scale)
                } else {
                    std_normal_cdf(t / right_scale)
                }
            }
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, LimitLaw::Boundary { .. })
    }
}

fn sigma2_from(r: &UmedResult) -> f64 {
    let f1 = r.cdf_below;
    let p0 = r.p0;
    0.25 / (p0 * p0 * p0) * (4.0 * f1 * (f1 - 1.0 + p0) - p0 + 1.0)
}

/// Asymptotic variance of `sqrt(n) (umed(F_n) - umed(F))` when `F(k0) > 0.5`.
pub fn sigma2_umed<D: IntegerDistribution + ?Sized>(dist: &D) -> Result<f64> {
    let r = umed(dist)?;
    if r.boundary {
        return Err(Error::BoundaryCase { k0: r.k0 });
    }
    Ok(sigma2_from(&r))
}

/// Limit law of `sqrt(n) (umed(F_n) - umed(F))`, normal or two-sided normal.
pub fn umed_limit_law<D: IntegerDistribution + ?Sized>(dist: &D) -> Result<LimitLaw> {
    let r = umed(dist)?;
    if !r.boundary {
        return Ok(LimitLaw::Interior { variance: sigma2_from(&r) });
    }
    let p_next = dist.pmf(r.k0 + 1);
    if !(p_next > 0.0) {
        return Err(Error::DegenerateRightTail { k0: r.k0 });
    }
    Ok(LimitLaw::Boundary {
        left_scale: 1.0 / (2.0 * r.p0),
        right_scale: 1.0 / (2.0 * p_next),
    })
}

/// The umed formula with the median cell forced to `k`:
/// `k - 0.5 + (0.5 - F(k - 1)) / p(k)`. Equals `umed(F)` when `k = k0(F)`.
pub fn umed_branch<D: IntegerDistribution + ?Sized>(dist: &D, k: u64) -> f64 {
    let below = if k == 0 { 0.0 } else { dist.cdf(k - 1) };
    k as f64 - 0.5 + (0.5 - below) / dist.pmf(k)
}

/// Central difference with one Richardson step, `h` and `h / 2`.
fn richardson_central<G>(mut f: G, x: f64, h: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let d = |f: &mut G, h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let coarse = d(&mut f, h)?;
    let fine = d(&mut f, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn derivative_step(theta: f64) -> f64 {
    1e-6 * (1.0 + theta.abs())
}

/// Derivative of `g` on the smooth branch through the cell `k`.
fn branch_derivative<F: ParametricFamily>(family: &F, theta: f64, k: u64) -> Result<f64> {
    let h = derivative_step(theta).min(0.5 * theta.abs().max(f64::MIN_POSITIVE));
    richardson_central(
        |t| {
            let dist = family.distribution(t)?;
            Ok(umed_branch(&dist, k))
        },
        theta,
        h,
    )
}

/// `g'(theta)` at a point where `F_theta(k0) > 0.5`.
///
/// On a neighbourhood of such a point `k0(F_t)` is constant, so the
/// derivative is taken on that branch of `g`.
pub fn g_prime<F: ParametricFamily>(family: &F, theta: f64) -> Result<f64> {
    let dist = family.distribution(theta)?;
    let r = umed(&dist)?;
    if r.boundary {
        return Err(Error::NotDifferentiable { k0: r.k0 });
    }
    branch_derivative(family, theta, r.k0)
}

/// One-sided derivatives `(g'_-, g'_+)` at a boundary point `F_theta(K) = 0.5`.
///
/// Left of the boundary the median cell is `K`, right of it `K + 1`; each
/// one-sided derivative is the derivative of the corresponding branch.
pub fn g_lateral<F: ParametricFamily>(family: &F, theta: f64) -> Result<(f64, f64)> {
    let dist = family.distribution(theta)?;
    let r = umed(&dist)?;
    if !r.boundary {
        return Err(Error::InteriorCase { k0: r.k0 });
    }
    let left = branch_derivative(family, theta, r.k0)?;
    let right = branch_derivative(family, theta, r.k0 + 1)?;
    Ok((left, right))
}

/// Limit law of `sqrt(n) (theta_hat_n - theta)` under `F_theta`.
pub fn estimator_limit_law<F: ParametricFamily>(family: &F, theta: f64) -> Result<LimitLaw> {
    let dist = family.distribution(theta)?;
    let r = umed(&dist)?;
    if !r.boundary {
        let gp = g_prime(family, theta)?;
        return Ok(LimitLaw::Interior { variance: sigma2_from(&r) / (gp * gp) });
    }
    let p_next = dist.pmf(r.k0 + 1);
    if !(p_next > 0.0) {
        return Err(Error::DegenerateRightTail { k0: r.k0 });
    }
    let (left, right) = g_lateral(family, theta)?;
    Ok(LimitLaw::Boundary {
        left_scale: 1.0 / (2.0 * left * r.p0),
        right_scale: 1.0 / (2.0 * right * p_next),
    })
}

/// `(1 / I(theta)) / (sigma^2 / g'(theta)^2)`.
pub fn asymptotic_efficiency<F: ParametricFamily>(family: &F, theta: f64) -> Result<f64> {
    match estimator_limit_law(family, theta)? {
        LimitLaw::Interior { variance } => Ok(1.0 / family.fisher_information(theta) / variance),
        LimitLaw::Boundary { .. } => {
            let dist = family.distribution(theta)?;
            Err(Error::BoundaryCase { k0: umed(&dist)?.k0 })
        }
    }
}
