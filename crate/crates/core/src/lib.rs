//! Minimum gross-error-sensitivity estimation for one-parameter families on
//! the nonnegative integers.
//!
//! The estimator matches uniform medians: `theta_hat` solves
//! `umed(F_n) = umed(F_theta)`, where `umed(F)` is the median of `X + U` with
//! `U ~ Uniform[-0.5, 0.5]`. The crate also provides the Hampel-optimal
//! M-estimator it coincides with for small truncation levels, the asymptotic
//! laws of both, contamination bias curves and a reproducible Monte Carlo
//! harness.
//!
//! ```
//! use umedian::{estimate_optimal, EmpiricalDistribution, PoissonFamily};
//!
//! let data = EmpiricalDistribution::from_sample(&[3, 5, 4, 6, 5, 7, 2, 5]).unwrap();
//! let fit = estimate_optimal(&data, &PoissonFamily::new()).unwrap();
//! assert!(fit.theta_hat > 4.0 && fit.theta_hat < 6.0);
//! ```

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bias;
pub mod error;
pub mod estimator;
pub mod families;
pub mod montecarlo;
pub mod report;
pub mod solve;
pub mod umedian;

pub use asymptotics::{
    asymptotic_efficiency, estimator_limit_law, g_lateral, g_prime, sigma2_umed, umed_limit_law, LimitLaw,
};
pub use bias::{asymptotic_bias, ges_numeric, max_bias, BiasRecord, MaxBias};
pub use error::{Error, Result};
pub use estimator::{estimate_hampel, estimate_optimal, g, hampel_c, m0, EstimateResult, HampelConfig};
pub use families::{
    contaminate, poisson_pmf, sample_poisson, ContaminatedDistribution, ContaminationPoint, EmpiricalDistribution,
    FinitePmf, IntegerDistribution, ParametricFamily, PoissonDistribution, PoissonFamily,
};
pub use montecarlo::{EstimatorKind, SimulationConfig, SimulationResult};
pub use umedian::{k0, umed, umed_oracle, UmedResult};
