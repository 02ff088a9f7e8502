//! Asymptotic bias under point-mass contamination, the maximum over
//! contamination points, and a numerical gross-error sensitivity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::estimate_optimal;
use crate::families::{contaminate, ContaminatedDistribution, ContaminationPoint, ParametricFamily};
use crate::umedian::{k0, umed};

/// Contamination step used by [`ges_numeric`].
pub const GES_STEP: f64 = 1e-4;

/// Biases closer than this are equal up to root-finder tolerance.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasRecord {
    pub x0: ContaminationPoint,
    pub theta_contaminated: f64,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxBias {
    pub epsilon: f64,
    pub theta: f64,
    /// Supremum over the finite grid and the point at infinity.
    pub bias: f64,
    pub argmax: ContaminationPoint,
    /// Maximum over the finite grid `0..=ceil(3 theta)` alone.
    pub grid_bias: f64,
    pub grid_argmax: ContaminationPoint,
    pub bias_at_infinity: f64,
    pub records: Vec<BiasRecord>,
}

/// `{0, 1, ..., ceil(3 theta)}` followed by the point at infinity.
pub fn contamination_grid(theta: f64) -> Vec<ContaminationPoint> {
    let top = (3.0 * theta).ceil().max(0.0) as u64;
    (0..=top)
        .map(ContaminationPoint::At)
        .chain(std::iter::once(ContaminationPoint::AtInfinity))
        .collect()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..0.5).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "contamination proportion must lie in [0, 0.5), got {epsilon}"
        )))
    }
}

/// Bias of an arbitrary functional `T` at `(1 - eps) F_theta + eps delta_x0`.
pub fn asymptotic_bias_with<F, T>(
    family: &F,
    theta: f64,
    epsilon: f64,
    x0: ContaminationPoint,
    functional: T,
) -> Result<BiasRecord>
where
    F: ParametricFamily,
    T: Fn(&ContaminatedDistribution<&F::Distribution>) -> Result<f64>,
{
    check_epsilon(epsilon)?;
    let base = family.distribution(theta)?;
    let mixed = contaminate(&base, epsilon, x0)?;
    let theta_contaminated = functional(&mixed)?;
    Ok(BiasRecord {
        x0,
        theta_contaminated,
        bias: (theta_contaminated - theta).abs(),
    })
}

/// `|T((1 - eps) F_theta + eps delta_x0) - theta|` for the minimum-GES functional.
pub fn asymptotic_bias<F: ParametricFamily>(
    family: &F,
    theta: f64,
    epsilon: f64,
    x0: ContaminationPoint,
) -> Result<BiasRecord> {
    asymptotic_bias_with(family, theta, epsilon, x0, |d| {
        Ok(estimate_optimal(d, family)?.theta_hat)
    })
}

/// Maximum of [`asymptotic_bias`] over [`contamination_grid`].
///
/// Values within [`TIE_TOL`] of the maximum count as ties, which are reported
/// at the extremes: infinity first, then zero, then the smallest grid point.
pub fn max_bias<F: ParametricFamily>(family: &F, theta: f64, epsilon: f64) -> Result<MaxBias> {
    check_epsilon(epsilon)?;
    let records = contamination_grid(theta)
        .into_iter()
        .map(|x0| asymptotic_bias(family, theta, epsilon, x0))
        .collect::<Result<Vec<_>>>()?;
    summarize(theta, epsilon, records)
}

fn summarize(theta: f64, epsilon: f64, records: Vec<BiasRecord>) -> Result<MaxBias> {
    let pick = |rs: &mut dyn Iterator<Item = &BiasRecord>| -> Option<(f64, ContaminationPoint)> {
        let all: Vec<&BiasRecord> = rs.collect();
        let best = all.iter().map(|r| r.bias).fold(f64::NEG_INFINITY, f64::max);
        let preferred = all
            .iter()
            .filter(|r| r.bias >= best - TIE_TOL)
            .min_by_key(|r| match r.x0 {
                ContaminationPoint::AtInfinity => (0, 0),
                ContaminationPoint::At(k) => (1, k),
            })?;
        Some((best, preferred.x0))
    };
    let (bias, argmax) = pick(&mut records.iter())
        .ok_or_else(|| Error::Internal("empty contamination grid".into()))?;
    let (grid_bias, grid_argmax) = pick(&mut records.iter().filter(|r| r.x0 != ContaminationPoint::AtInfinity))
        .ok_or_else(|| Error::Internal("empty finite contamination grid".into()))?;
    let bias_at_infinity = records
        .iter()
        .find(|r| r.x0 == ContaminationPoint::AtInfinity)
        .map(|r| r.bias)
        .ok_or_else(|| Error::Internal("grid lacks the point at infinity".into()))?;
    Ok(MaxBias {
        epsilon,
        theta,
        bias,
        argmax,
        grid_bias,
        grid_argmax,
        bias_at_infinity,
        records,
    })
}

/// `max_x0 |T((1 - eps) F_theta + eps delta_x0) - theta| / eps` for a small
/// `eps`, with `T` an arbitrary functional.
pub fn ges_numeric_with<F, T>(family: &F, theta: f64, epsilon: f64, functional: T) -> Result<f64>
where
    F: ParametricFamily,
    T: Fn(&ContaminatedDistribution<&F::Distribution>) -> Result<f64>,
{
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("GES step must be positive, got {epsilon}")));
    }
    let mut worst: f64 = 0.0;
    for x0 in contamination_grid(theta) {
        let r = asymptotic_bias_with(family, theta, epsilon, x0, &functional)?;
        worst = worst.max(r.bias / epsilon);
    }
    Ok(worst)
}

/// Gross-error sensitivity of the minimum-GES functional at `F_theta`.
pub fn ges_numeric<F: ParametricFamily>(family: &F, theta: f64) -> Result<f64> {
    ges_numeric_at(family, theta, GES_STEP)
}

pub fn ges_numeric_at<F: ParametricFamily>(family: &F, theta: f64, epsilon: f64) -> Result<f64> {
    let dist = family.distribution(theta)?;
    if umed(&dist)?.boundary {
        return Err(Error::BoundaryCase { k0: k0(&dist)? });
    }
    ges_numeric_with(family, theta, epsilon, |d| Ok(estimate_optimal(d, family)?.theta_hat))
}
