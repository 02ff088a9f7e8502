//! Finite-sample simulation: clean-data efficiency and maximum MSE under
//! replacement contamination.
//!
//! Every replication draws from its own ChaCha8 stream whose seed is derived
//! from the master seed, the sample settings `(n, lambda, eps, x0)` and the
//! replication index. Results therefore do not depend on scheduling or on the
//! number of worker threads. Estimators evaluated on the same settings share
//! samples.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{estimate_hampel, estimate_optimal, HampelConfig};
use crate::families::{sample_into, EmpiricalDistribution, IntegerDistribution, ParametricFamily, PoissonFamily};

/// Largest fraction of failed replications tolerated in a cell.
pub const MAX_FAILURE_RATE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    #[default]
    Poisson,
}

/// Families whose maximum-likelihood estimate has a closed form.
pub trait MaximumLikelihood: ParametricFamily {
    fn mle(&self, data: &EmpiricalDistribution) -> f64;
}

impl MaximumLikelihood for PoissonFamily {
    fn mle(&self, data: &EmpiricalDistribution) -> f64 {
        data.mean()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    Optimal,
    Mle,
    Hampel { m: f64 },
}

impl EstimatorKind {
    pub fn estimate<F: MaximumLikelihood>(&self, family: &F, data: &EmpiricalDistribution) -> Result<f64> {
        match *self {
            EstimatorKind::Optimal => Ok(estimate_optimal(data, family)?.theta_hat),
            EstimatorKind::Mle => Ok(family.mle(data)),
            EstimatorKind::Hampel { m } => {
                Ok(estimate_hampel(data, family, &HampelConfig::new(m)?)?.theta_hat)
            }
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorKind::Optimal => f.write_str("optimal"),
            EstimatorKind::Mle => f.write_str("mle"),
            EstimatorKind::Hampel { m } => write!(f, "hampel:{m}"),
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "optimal" => Ok(EstimatorKind::Optimal),
            "mle" => Ok(EstimatorKind::Mle),
            other => {
                let m = other
                    .strip_prefix("hampel:")
                    .and_then(|m| m.trim().parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "unknown estimator {other:?} (expected optimal, mle or hampel:<m>)"
                        ))
                    })?;
                HampelConfig::new(m).map_err(|e| Error::Config(e.to_string()))?;
                Ok(EstimatorKind::Hampel { m })
            }
        }
    }
}

impl Serialize for EstimatorKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EstimatorKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which contamination points are simulated for each rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum X0Grid {
    /// `x0 = 0, 1, ..., ceil(3 lambda)`.
    #[default]
    ThreeLambda,
}

impl X0Grid {
    pub fn points(&self, lambda: f64) -> Vec<u64> {
        match self {
            X0Grid::ThreeLambda => (0..=(3.0 * lambda).ceil() as u64).collect(),
        }
    }
}

fn default_replications() -> usize {
    500
}

fn default_estimators() -> Vec<EstimatorKind> {
    vec![EstimatorKind::Optimal, EstimatorKind::Mle]
}

/// Simulation settings, usually read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default)]
    pub family: FamilyId,
    pub lambdas: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Contamination proportions; clean cells are always simulated.
    #[serde(default)]
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub x0_grid: X0Grid,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorKind>,
}

impl SimulationConfig {
    /// Poisson rates 5, 10, 20; n = 20, 50; 500 replications; contamination
    /// 0.1 and 0.2 over x0 = 0..=3 lambda.
    pub fn reference_study() -> Self {
        Self {
            family: FamilyId::Poisson,
            lambdas: vec![5.0, 10.0, 20.0],
            sample_sizes: vec![20, 50],
            replications: 500,
            epsilons: vec![0.1, 0.2],
            x0_grid: X0Grid::ThreeLambda,
            seed: 0,
            estimators: default_estimators(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim().to_owned()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: String, msg: &str| Err(Error::Config(format!("{field}: {msg}")));
        if self.replications < 1 {
            return bad("replications".into(), "must be at least 1");
        }
        if self.lambdas.is_empty() {
            return bad("lambdas".into(), "must not be empty");
        }
        for (i, &l) in self.lambdas.iter().enumerate() {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("lambdas[{i}]"), "must be positive and finite");
            }
        }
        if self.sample_sizes.is_empty() {
            return bad("sample_sizes".into(), "must not be empty");
        }
        for (i, &n) in self.sample_sizes.iter().enumerate() {
            if n < 1 {
                return bad(format!("sample_sizes[{i}]"), "must be at least 1");
            }
        }
        for (i, &e) in self.epsilons.iter().enumerate() {
            if !(0.0..1.0).contains(&e) {
                return bad(format!("epsilons[{i}]"), "must lie in [0, 1)");
            }
        }
        if self.estimators.is_empty() {
            return bad("estimators".into(), "must not be empty");
        }
        Ok(())
    }

    /// Sample settings in output order: per `n`, per `lambda`, the clean cell
    /// followed by each contamination rate over the `x0` grid.
    pub fn settings(&self) -> Vec<SampleSetting> {
        let mut out = Vec::new();
        for &n in &self.sample_sizes {
            for &lambda in &self.lambdas {
                out.push(SampleSetting { n, lambda, epsilon: 0.0, x0: None });
                for &epsilon in self.epsilons.iter().filter(|&&e| e > 0.0) {
                    for x0 in self.x0_grid.points(lambda) {
                        out.push(SampleSetting { n, lambda, epsilon, x0: Some(x0) });
                    }
                }
            }
        }
        out
    }
}

/// How samples for one cell are generated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSetting {
    pub n: usize,
    pub lambda: f64,
    pub epsilon: f64,
    /// Replacement value; `None` for clean data.
    pub x0: Option<u64>,
}

impl SampleSetting {
    /// Number of replaced positions, `floor(eps * n)`.
    pub fn replaced(&self) -> usize {
        if self.x0.is_none() {
            return 0;
        }
        // Guard against eps * n landing a hair below an integer.
        ((self.epsilon * self.n as f64) + 1e-9).floor() as usize
    }

    fn key(&self) -> u64 {
        // FNV-1a over a fixed little-endian encoding.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        eat(self.n as u64);
        eat(self.lambda.to_bits());
        eat(self.epsilon.to_bits());
        eat(self.x0.map_or(u64::MAX, |x| x));
        h
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one replication's generator.
pub fn replication_seed(master: u64, setting: &SampleSetting, replication: u64) -> u64 {
    splitmix64(splitmix64(master ^ setting.key()).wrapping_add(replication))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellRecord {
    pub estimator: EstimatorKind,
    pub n: usize,
    pub lambda: f64,
    pub epsilon: f64,
    pub x0: Option<u64>,
    /// Replications that produced an estimate.
    pub replications: usize,
    pub failures: usize,
    pub mse: f64,
    /// Mean of `theta_hat - lambda`.
    pub mean_bias: f64,
    /// Variance of `theta_hat` (divisor: replications used).
    pub variance: f64,
}

impl CellRecord {
    pub fn label(&self) -> String {
        let x0 = self.x0.map_or_else(|| "clean".to_owned(), |x| x.to_string());
        format!(
            "{} n={} lambda={} eps={} x0={}",
            self.estimator, self.n, self.lambda, self.epsilon, x0
        )
    }
}

fn summarize_cell(estimator: EstimatorKind, setting: &SampleSetting, estimates: &[f64], failures: usize) -> CellRecord {
    let used = estimates.len();
    let r = used as f64;
    let mean = estimates.iter().sum::<f64>() / r;
    let variance = estimates.iter().map(|&t| (t - mean).powi(2)).sum::<f64>() / r;
    let mse = estimates.iter().map(|&t| (t - setting.lambda).powi(2)).sum::<f64>() / r;
    CellRecord {
        estimator,
        n: setting.n,
        lambda: setting.lambda,
        epsilon: setting.epsilon,
        x0: setting.x0,
        replications: used,
        failures,
        mse,
        mean_bias: mean - setting.lambda,
        variance,
    }
}

/// Simulates one sample setting for several estimators on shared samples.
pub fn run_setting<F: MaximumLikelihood>(
    family: &F,
    setting: &SampleSetting,
    estimators: &[EstimatorKind],
    replications: usize,
    master_seed: u64,
) -> Result<Vec<CellRecord>> {
    let dist = family.distribution(setting.lambda)?;
    let replaced = setting.replaced().min(setting.n);
    let mut estimates: Vec<Vec<f64>> = vec![Vec::with_capacity(replications); estimators.len()];
    let mut failures = vec![0usize; estimators.len()];
    let mut sample = Vec::with_capacity(setting.n);

    for rep in 0..replications {
        let mut rng = ChaCha8Rng::seed_from_u64(replication_seed(master_seed, setting, rep as u64));
        sample_into(&dist, &mut rng, &mut sample, setting.n);
        if let Some(x0) = setting.x0 {
            sample[..replaced].fill(x0);
        }
        let data = EmpiricalDistribution::from_values(&sample)?;
        for (i, est) in estimators.iter().enumerate() {
            match est.estimate(family, &data) {
                Ok(t) => estimates[i].push(t),
                Err(_) => failures[i] += 1,
            }
        }
    }

    estimators
        .iter()
        .zip(estimates.iter().zip(&failures))
        .map(|(&est, (ests, &failed))| {
            if failed as f64 > MAX_FAILURE_RATE * replications as f64 || ests.is_empty() {
                let probe = summarize_cell(est, setting, &[f64::NAN], failed);
                return Err(Error::CellFailed {
                    cell: probe.label(),
                    failed,
                    replications,
                });
            }
            Ok(summarize_cell(est, setting, ests, failed))
        })
        .collect()
}

/// Simulates a single `(setting, estimator)` cell.
pub fn run_cell<F: MaximumLikelihood>(
    family: &F,
    setting: &SampleSetting,
    estimator: EstimatorKind,
    replications: usize,
    master_seed: u64,
) -> Result<CellRecord> {
    let mut v = run_setting(family, setting, &[estimator], replications, master_seed)?;
    Ok(v.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyRow {
    pub estimator: EstimatorKind,
    pub n: usize,
    pub lambda: f64,
    pub mse_mle: f64,
    pub mse: f64,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxMseRow {
    pub estimator: EstimatorKind,
    pub n: usize,
    pub epsilon: f64,
    pub lambda: f64,
    pub max_mse: f64,
    pub argmax_x0: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub config: SimulationConfig,
    pub records: Vec<CellRecord>,
    pub efficiency: Vec<EfficiencyRow>,
    pub max_mse: Vec<MaxMseRow>,
}

impl SimulationResult {
    pub fn find(&self, estimator: EstimatorKind, n: usize, lambda: f64, epsilon: f64, x0: Option<u64>) -> Option<&CellRecord> {
        self.records.iter().find(|r| {
            r.estimator == estimator && r.n == n && r.lambda == lambda && r.epsilon == epsilon && r.x0 == x0
        })
    }
}

/// `MSE(mle) / MSE(estimator)` on clean data.
pub fn efficiency_of(result: &SimulationResult, estimator: EstimatorKind, n: usize, lambda: f64) -> Result<EfficiencyRow> {
    let missing = |e: EstimatorKind| format!("{e} n={n} lambda={lambda} clean");
    let mle = result
        .find(EstimatorKind::Mle, n, lambda, 0.0, None)
        .ok_or_else(|| Error::MissingCells(vec![missing(EstimatorKind::Mle)]))?;
    let cell = result
        .find(estimator, n, lambda, 0.0, None)
        .ok_or_else(|| Error::MissingCells(vec![missing(estimator)]))?;
    Ok(EfficiencyRow {
        estimator,
        n,
        lambda,
        mse_mle: mle.mse,
        mse: cell.mse,
        efficiency: mle.mse / cell.mse,
    })
}

/// Finite-sample efficiency of the minimum-GES estimator.
pub fn finite_sample_efficiency(result: &SimulationResult, n: usize, lambda: f64) -> Result<f64> {
    Ok(efficiency_of(result, EstimatorKind::Optimal, n, lambda)?.efficiency)
}

/// Per-`lambda` maximum over the `x0` grid of one estimator's MSE.
pub fn max_mse_table_of(result: &SimulationResult, estimator: EstimatorKind, n: usize, epsilon: f64) -> Result<Vec<MaxMseRow>> {
    let mut rows = Vec::new();
    let mut missing = Vec::new();
    for &lambda in &result.config.lambdas {
        let mut best: Option<(f64, u64)> = None;
        for x0 in result.config.x0_grid.points(lambda) {
            match result.find(estimator, n, lambda, epsilon, Some(x0)) {
                Some(r) => {
                    if best.is_none_or(|(m, _)| r.mse > m) {
                        best = Some((r.mse, x0));
                    }
                }
                None => missing.push(format!("{estimator} n={n} eps={epsilon} lambda={lambda} x0={x0}")),
            }
        }
        if let Some((max_mse, argmax_x0)) = best {
            rows.push(MaxMseRow { estimator, n, epsilon, lambda, max_mse, argmax_x0 });
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingCells(missing));
    }
    Ok(rows)
}

/// Maximum MSE of the minimum-GES estimator per `lambda`.
pub fn max_mse_table(result: &SimulationResult, n: usize, epsilon: f64) -> Result<Vec<MaxMseRow>> {
    max_mse_table_of(result, EstimatorKind::Optimal, n, epsilon)
}

/// Runs every cell of `config` on the current rayon pool.
pub fn run(config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let family = match config.family {
        FamilyId::Poisson => PoissonFamily::new(),
    };
    let settings = config.settings();
    let per_setting: Vec<Vec<CellRecord>> = settings
        .par_iter()
        .map(|s| run_setting(&family, s, &config.estimators, config.replications, config.seed))
        .collect::<Result<_>>()?;
    let records: Vec<CellRecord> = per_setting.into_iter().flatten().collect();

    let mut result = SimulationResult {
        config: config.clone(),
        records,
        efficiency: Vec::new(),
        max_mse: Vec::new(),
    };

    if config.estimators.contains(&EstimatorKind::Mle) {
        for &est in config.estimators.iter().filter(|&&e| e != EstimatorKind::Mle) {
            for &n in &config.sample_sizes {
                for &lambda in &config.lambdas {
                    result.efficiency.push(efficiency_of(&result, est, n, lambda)?);
                }
            }
        }
    }
    for &est in &config.estimators {
        for &n in &config.sample_sizes {
            for &eps in config.epsilons.iter().filter(|&&e| e > 0.0) {
                let rows = max_mse_table_of(&result, est, n, eps)?;
                result.max_mse.extend(rows);
            }
        }
    }
    Ok(result)
}

/// Runs `config` on a dedicated pool with `threads` workers.
pub fn run_with_threads(config: &SimulationConfig, threads: usize) -> Result<SimulationResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| run(config))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SimulationConfig {
        SimulationConfig {
            lambdas: vec![2.0],
            sample_sizes: vec![10],
            replications: 20,
            epsilons: vec![0.2],
            seed: 11,
            ..SimulationConfig::reference_study()
        }
    }

    #[test]
    fn replaced_count_is_exact() {
        let s = |n, epsilon| SampleSetting { n, lambda: 5.0, epsilon, x0: Some(3) };
        assert_eq!(s(20, 0.1).replaced(), 2);
        assert_eq!(s(50, 0.2).replaced(), 10);
        assert_eq!(s(20, 0.2).replaced(), 4);
        assert_eq!(s(7, 0.1).replaced(), 0);
        let clean = SampleSetting { n: 20, lambda: 5.0, epsilon: 0.0, x0: None };
        assert_eq!(clean.replaced(), 0);
    }

    #[test]
    fn settings_layout() {
        let cfg = small_config();
        let s = cfg.settings();
        // clean + x0 in 0..=6
        assert_eq!(s.len(), 1 + 7);
        assert_eq!(s[0].x0, None);
        assert_eq!(s[1].x0, Some(0));
        assert_eq!(s[7].x0, Some(6));
    }

    #[test]
    fn estimator_parsing() {
        assert_eq!("optimal".parse::<EstimatorKind>().unwrap(), EstimatorKind::Optimal);
        assert_eq!("mle".parse::<EstimatorKind>().unwrap(), EstimatorKind::Mle);
        assert_eq!("hampel:0.05".parse::<EstimatorKind>().unwrap(), EstimatorKind::Hampel { m: 0.05 });
        assert!("hampel:-1".parse::<EstimatorKind>().is_err());
        assert!("median".parse::<EstimatorKind>().is_err());
    }

    #[test]
    fn config_validation_names_field() {
        let mut cfg = small_config();
        cfg.lambdas = vec![1.0, -2.0];
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("lambdas[1]"), "{err}");

        let mut cfg = small_config();
        cfg.replications = 0;
        assert!(cfg.validate().unwrap_err().to_string().contains("replications"));

        let err = SimulationConfig::from_toml_str("lambdas = [5.0]\nsample_sizes = [20]\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn toml_round_trip() {
        let cfg = SimulationConfig::reference_study();
        let back = SimulationConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn mse_accounting_identity() {
        let result = run(&small_config()).unwrap();
        for r in &result.records {
            assert!(r.mse + 1e-12 >= r.mean_bias * r.mean_bias);
            assert!((r.mse - (r.variance + r.mean_bias * r.mean_bias)).abs() < 1e-12, "{}", r.label());
        }
    }

    #[test]
    fn same_seed_same_records() {
        let cfg = small_config();
        let a = run_with_threads(&cfg, 1).unwrap();
        let b = run_with_threads(&cfg, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn max_mse_dominates_cells() {
        let result = run(&small_config()).unwrap();
        let rows = max_mse_table(&result, 10, 0.2).unwrap();
        assert_eq!(rows.len(), 1);
        for r in result.records.iter().filter(|r| r.estimator == EstimatorKind::Optimal && r.x0.is_some()) {
            assert!(rows[0].max_mse >= r.mse);
        }
        assert!(matches!(max_mse_table(&result, 99, 0.2), Err(Error::MissingCells(_))));
        assert!(matches!(finite_sample_efficiency(&result, 99, 2.0), Err(Error::MissingCells(_))));
    }
}
