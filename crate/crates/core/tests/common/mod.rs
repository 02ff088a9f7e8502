//! Monte Carlo helpers shared by the integration tests and the acceptance run.

#![allow(dead_code)]

use umedian::solve::{solve_increasing, SolverConfig};
use umedian::{sample_poisson, umed, EmpiricalDistribution, IntegerDistribution, PoissonDistribution};

pub fn empirical(values: &[u64]) -> EmpiricalDistribution {
    EmpiricalDistribution::from_values(values).unwrap()
}

/// Seed of replication `rep` within a test's seed block.
pub fn seed(block: u64, rep: usize) -> u64 {
    block.wrapping_mul(1_000_003).wrapping_add(rep as u64)
}

/// `sqrt(n) (umed(F_n) - umed(F))` over `reps` Poisson(lambda) samples.
pub fn scaled_umed_errors(lambda: f64, n: usize, reps: usize, block: u64) -> Vec<f64> {
    let truth = umed(&PoissonDistribution::new(lambda).unwrap()).unwrap().value;
    let root_n = (n as f64).sqrt();
    (0..reps)
        .map(|r| {
            let x = sample_poisson(lambda, n, seed(block, r)).unwrap();
            root_n * (umed(&empirical(&x)).unwrap().value - truth)
        })
        .collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with divisor `len - 1`.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Kolmogorov distance between the empirical cdf of `xs` and `cdf`,
/// checked on both sides of every jump.
pub fn kolmogorov_distance(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        let mut j = i;
        while j < v.len() && v[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let below = i as f64 / n;
        let at = j as f64 / n;
        // Left limit of a continuous-at-x model cdf equals its value.
        d = d.max((f - below).abs()).max((f - at).abs());
        i = j;
    }
    d
}

/// The Poisson rate with `F_lambda(0) = P(X = 0) = 0.5`, found numerically
/// and then moved down to the nearest rate with `F_lambda(0) >= 0.5`, so the
/// median cell is 0 rather than 1.
pub fn boundary_rate() -> f64 {
    let mut lambda = boundary_root();
    while PoissonDistribution::new(lambda).unwrap().cdf(0) < 0.5 {
        lambda = f64::from_bits(lambda.to_bits() - 1);
    }
    lambda
}

fn boundary_root() -> f64 {
    let cfg = SolverConfig {
        residual_tol: 0.0,
        ..SolverConfig::default()
    };
    solve_increasing(
        |l| Ok(0.5 - PoissonDistribution::new(l)?.cdf(0)),
        1.0,
        (1e-3, 10.0),
        &cfg,
    )
    .unwrap()
    .x
}
