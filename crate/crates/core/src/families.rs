//! Distributions on the nonnegative integers.
//!
//! [`IntegerDistribution`] is the common interface used by the uniform median
//! and the estimators: parametric members ([`PoissonDistribution`]), empirical
//! distributions built from samples ([`EmpiricalDistribution`]), arbitrary
//! finite pmfs ([`FinitePmf`]) and point-mass mixtures
//! ([`ContaminatedDistribution`]).

use std::collections::BTreeMap;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tail mass left beyond [`IntegerDistribution::eval_bound`].
pub const TAIL_MASS: f64 = 1e-12;

/// A probability distribution supported on `{0, 1, 2, ...}`.
///
/// Values are immutable after construction, so every implementation is
/// expected to be `Send + Sync`.
pub trait IntegerDistribution: Send + Sync {
    fn pmf(&self, k: u64) -> f64;

    /// `P(X <= k)`. `F(-1)` is zero by convention and has no method.
    fn cdf(&self, k: u64) -> f64;

    /// Smallest integer that may carry mass.
    fn support_start(&self) -> u64 {
        0
    }

    /// Integer beyond which the remaining finite mass is below [`TAIL_MASS`].
    fn eval_bound(&self) -> u64;

    /// Mass placed at `+infinity` (only point contaminations use this).
    fn mass_at_infinity(&self) -> f64 {
        0.0
    }

    /// All `(k, pmf(k))` pairs with positive mass up to the evaluation bound.
    fn masses(&self) -> Vec<(u64, f64)> {
        (self.support_start()..=self.eval_bound())
            .map(|k| (k, self.pmf(k)))
            .filter(|&(_, p)| p > 0.0)
            .collect()
    }

    /// Smallest `k` with `cdf(k) > u`, capped at the evaluation bound.
    fn inverse_cdf(&self, u: f64) -> u64 {
        let bound = self.eval_bound();
        (self.support_start()..=bound)
            .find(|&k| self.cdf(k) > u)
            .unwrap_or(bound)
    }

    fn mean(&self) -> f64 {
        self.masses().iter().map(|&(k, p)| k as f64 * p).sum()
    }
}

impl<D: IntegerDistribution + ?Sized> IntegerDistribution for &D {
    fn pmf(&self, k: u64) -> f64 {
        (**self).pmf(k)
    }
    fn cdf(&self, k: u64) -> f64 {
        (**self).cdf(k)
    }
    fn support_start(&self) -> u64 {
        (**self).support_start()
    }
    fn eval_bound(&self) -> u64 {
        (**self).eval_bound()
    }
    fn mass_at_infinity(&self) -> f64 {
        (**self).mass_at_infinity()
    }
    fn masses(&self) -> Vec<(u64, f64)> {
        (**self).masses()
    }
    fn inverse_cdf(&self, u: f64) -> u64 {
        (**self).inverse_cdf(u)
    }
    fn mean(&self) -> f64 {
        (**self).mean()
    }
}

/// A one-parameter family `theta -> F_theta` on the nonnegative integers.
///
/// Implementations must be stochastically increasing in `theta` (the cdf at
/// every `k` decreases with `theta`) and have a score `psi0(k, theta)` that is
/// strictly monotone in `k`.
pub trait ParametricFamily: Send + Sync {
    type Distribution: IntegerDistribution;

    fn name(&self) -> &str;

    /// Open parameter interval `(theta1, theta2)`.
    fn parameter_range(&self) -> (f64, f64);

    /// Closed interval searched by the root finders; strictly inside the range.
    fn search_bounds(&self) -> (f64, f64);

    fn distribution(&self, theta: f64) -> Result<Self::Distribution>;

    /// `d/dtheta log p(k, theta)`.
    fn score(&self, k: u64, theta: f64) -> f64;

    /// Limit of the score as `k -> infinity`, used for mass placed at infinity.
    fn score_at_infinity(&self, theta: f64) -> f64;

    /// `E_theta[psi0^2]`.
    fn fisher_information(&self, theta: f64) -> f64;

    fn contains(&self, theta: f64) -> bool {
        let (lo, hi) = self.parameter_range();
        theta > lo && theta < hi
    }

    fn check_parameter(&self, theta: f64) -> Result<()> {
        if self.contains(theta) {
            Ok(())
        } else {
            let (lo, hi) = self.parameter_range();
            Err(Error::Domain(format!(
                "{} parameter {theta} outside ({lo}, {hi})",
                self.name()
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// Poisson
// ---------------------------------------------------------------------------

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)]` for n = 1..=15.
#[allow(clippy::excessive_precision)]
const STIRLING_ERROR: [f64; 15] = [
    0.081_061_466_795_327_258,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_339,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_192,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_770,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_530,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

fn stirling_error(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        return STIRLING_ERROR[n as usize - 1];
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x log(x / mu) + mu - x`, evaluated without cancellation.
fn deviance_term(x: f64, mu: f64) -> f64 {
    if (x - mu).abs() < 0.1 * (x + mu) {
        let mut v = (x - mu) / (x + mu);
        let mut s = (x - mu) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let next = s + ej / f64::from(2 * j + 1);
            if next == s {
                return next;
            }
            s = next;
        }
        s
    } else {
        x * (x / mu).ln() + mu - x
    }
}

/// Log of the Poisson pmf, split into Stirling remainder and deviance so the
/// relative error stays flat for large `k`.
fn poisson_ln_pmf(k: u64, lambda: f64) -> f64 {
    if k == 0 {
        return -lambda;
    }
    let x = k as f64;
    -stirling_error(x) - deviance_term(x, lambda) - LN_SQRT_2PI - 0.5 * x.ln()
}

/// `e^-lambda lambda^k / k!`, evaluated in log space.
pub fn poisson_pmf(k: i64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("Poisson rate must be positive, got {lambda}")));
    }
    if k < 0 {
        return Err(Error::Domain(format!("Poisson pmf at negative k = {k}")));
    }
    Ok(poisson_ln_pmf(k as u64, lambda).exp())
}

#[derive(Debug, Clone, Copy, Default)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Poisson(lambda) with its pmf and cdf tabulated over the region that
/// carries all but [`TAIL_MASS`] of the probability.
#[derive(Debug, Clone)]
pub struct PoissonDistribution {
    lambda: f64,
    start: u64,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl PoissonDistribution {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("Poisson rate must be positive, got {lambda}")));
        }
        // Mass below `start` is under exp(-200).
        let spread = 20.0 * lambda.sqrt() + 20.0;
        let start = (lambda - spread).max(0.0).floor() as u64;
        let hard_stop = (lambda + 2.0 * spread).ceil() as u64 + 1;

        let mut pmf = Vec::new();
        let mut cdf = Vec::new();
        let mut acc = NeumaierSum::default();
        let mut k = start;
        loop {
            let p = poisson_ln_pmf(k, lambda).exp();
            acc.add(p);
            let c = acc.value().min(1.0);
            pmf.push(p);
            cdf.push(c);
            if c >= 1.0 - TAIL_MASS || k >= hard_stop {
                break;
            }
            k += 1;
        }
        Ok(Self { lambda, start, pmf, cdf })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl IntegerDistribution for PoissonDistribution {
    fn pmf(&self, k: u64) -> f64 {
        match k.checked_sub(self.start) {
            Some(i) if (i as usize) < self.pmf.len() => self.pmf[i as usize],
            _ => poisson_ln_pmf(k, self.lambda).exp(),
        }
    }

    fn cdf(&self, k: u64) -> f64 {
        match k.checked_sub(self.start) {
            None => 0.0,
            Some(i) if (i as usize) < self.cdf.len() => self.cdf[i as usize],
            Some(_) => {
                // Past the table the remaining mass is below TAIL_MASS.
                let mut acc = NeumaierSum::default();
                acc.add(*self.cdf.last().expect("table is never empty"));
                for j in self.eval_bound() + 1..=k {
                    let p = poisson_ln_pmf(j, self.lambda).exp();
                    if p == 0.0 {
                        break;
                    }
                    acc.add(p);
                }
                acc.value().min(1.0)
            }
        }
    }

    fn support_start(&self) -> u64 {
        self.start
    }

    fn eval_bound(&self) -> u64 {
        self.start + self.pmf.len() as u64 - 1
    }

    fn masses(&self) -> Vec<(u64, f64)> {
        (self.start..)
            .zip(self.pmf.iter().copied())
            .filter(|&(_, p)| p > 0.0)
            .collect()
    }

    fn inverse_cdf(&self, u: f64) -> u64 {
        let i = self.cdf.partition_point(|&c| c <= u);
        if i < self.cdf.len() {
            return self.start + i as u64;
        }
        // u landed in the last 1e-12 of mass: keep walking the tail.
        let mut k = self.eval_bound();
        let mut acc = *self.cdf.last().expect("table is never empty");
        while acc <= u && acc < 1.0 {
            k += 1;
            let p = poisson_ln_pmf(k, self.lambda).exp();
            if p == 0.0 {
                break;
            }
            acc += p;
        }
        k
    }

    fn mean(&self) -> f64 {
        self.lambda
    }
}

/// The Poisson family, `theta = lambda in (0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonFamily {
    search: (f64, f64),
}

impl Default for PoissonFamily {
    fn default() -> Self {
        Self { search: (1e-8, 1e6) }
    }
}

impl PoissonFamily {
    pub fn new() -> Self {
        Self::default()
    }

    /// Restrict the root-finder search interval.
    pub fn with_search_bounds(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && upper > lower && upper.is_finite()) {
            return Err(Error::Domain(format!(
                "invalid Poisson search bounds [{lower}, {upper}]"
            )));
        }
        Ok(Self { search: (lower, upper) })
    }
}

impl ParametricFamily for PoissonFamily {
    type Distribution = PoissonDistribution;

    fn name(&self) -> &str {
        "poisson"
    }

    fn parameter_range(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn search_bounds(&self) -> (f64, f64) {
        self.search
    }

    fn distribution(&self, theta: f64) -> Result<PoissonDistribution> {
        self.check_parameter(theta)?;
        PoissonDistribution::new(theta)
    }

    fn score(&self, k: u64, theta: f64) -> f64 {
        k as f64 / theta - 1.0
    }

    fn score_at_infinity(&self, _theta: f64) -> f64 {
        f64::INFINITY
    }

    fn fisher_information(&self, theta: f64) -> f64 {
        1.0 / theta
    }
}

// ---------------------------------------------------------------------------
// Empirical and finite distributions
// ---------------------------------------------------------------------------

/// Empirical distribution of a sample; `pmf(k) = #{x_i = k} / n`.
///
/// Cumulative probabilities are formed as a single integer ratio, so an even
/// sample split exactly in half yields a cdf of exactly `0.5`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<u64>,
    counts: Vec<u64>,
    cumulative: Vec<u64>,
    n: u64,
}

impl EmpiricalDistribution {
    /// Tally a sample. Negative entries are rejected with their index.
    pub fn from_sample(sample: &[i64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::NoData);
        }
        let mut counts = BTreeMap::new();
        for (index, &value) in sample.iter().enumerate() {
            if value < 0 {
                return Err(Error::NegativeValue { index, value });
            }
            *counts.entry(value as u64).or_insert(0u64) += 1;
        }
        Self::from_counts(counts)
    }

    pub fn from_values(sample: &[u64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::NoData);
        }
        let mut counts = BTreeMap::new();
        for &value in sample {
            *counts.entry(value).or_insert(0u64) += 1;
        }
        Self::from_counts(counts)
    }

    /// Build from `(value, count)` pairs; repeated values are merged and
    /// zero counts dropped.
    pub fn from_counts<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut merged = BTreeMap::new();
        for (k, c) in pairs {
            if c > 0 {
                *merged.entry(k).or_insert(0u64) += c;
            }
        }
        let n: u64 = merged.values().sum();
        if n == 0 {
            return Err(Error::NoData);
        }
        let (values, counts): (Vec<u64>, Vec<u64>) = merged.into_iter().unzip();
        let cumulative = counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        Ok(Self { values, counts, cumulative, n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn count(&self, k: u64) -> u64 {
        self.values
            .binary_search(&k)
            .map(|i| self.counts[i])
            .unwrap_or(0)
    }

    /// `(value, count)` pairs in increasing value order.
    pub fn counts(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.values.iter().copied().zip(self.counts.iter().copied())
    }
}

impl IntegerDistribution for EmpiricalDistribution {
    fn pmf(&self, k: u64) -> f64 {
        self.count(k) as f64 / self.n as f64
    }

    fn cdf(&self, k: u64) -> f64 {
        let i = self.values.partition_point(|&v| v <= k);
        if i == 0 {
            0.0
        } else {
            self.cumulative[i - 1] as f64 / self.n as f64
        }
    }

    fn support_start(&self) -> u64 {
        self.values[0]
    }

    fn eval_bound(&self) -> u64 {
        *self.values.last().expect("nonempty by construction")
    }

    fn masses(&self) -> Vec<(u64, f64)> {
        let n = self.n as f64;
        self.counts().map(|(k, c)| (k, c as f64 / n)).collect()
    }

    fn inverse_cdf(&self, u: f64) -> u64 {
        let n = self.n as f64;
        let i = self.cumulative.partition_point(|&c| c as f64 / n <= u);
        self.values[i.min(self.values.len() - 1)]
    }

    fn mean(&self) -> f64 {
        let total: u128 = self.counts().map(|(k, c)| u128::from(k) * u128::from(c)).sum();
        total as f64 / self.n as f64
    }
}

/// A distribution given by a finite table of probabilities `p[0..len]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePmf {
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl FinitePmf {
    /// Normalizes nonnegative weights into a pmf.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Domain("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::NoData);
        }
        let pmf: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut acc = NeumaierSum::default();
        let cdf = pmf
            .iter()
            .map(|&p| {
                acc.add(p);
                acc.value().min(1.0)
            })
            .collect();
        Ok(Self { pmf, cdf })
    }

    /// The point mass `delta_k`.
    pub fn point_mass(k: u64) -> Self {
        let mut pmf = vec![0.0; k as usize + 1];
        pmf[k as usize] = 1.0;
        let mut cdf = vec![0.0; k as usize + 1];
        cdf[k as usize] = 1.0;
        Self { pmf, cdf }
    }
}

impl IntegerDistribution for FinitePmf {
    fn pmf(&self, k: u64) -> f64 {
        self.pmf.get(k as usize).copied().unwrap_or(0.0)
    }

    fn cdf(&self, k: u64) -> f64 {
        let last = self.cdf.len() - 1;
        self.cdf[(k as usize).min(last)]
    }

    fn eval_bound(&self) -> u64 {
        self.pmf.len() as u64 - 1
    }
}

// ---------------------------------------------------------------------------
// Point contamination
// ---------------------------------------------------------------------------

/// Location of a contaminating point mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContaminationPoint {
    At(u64),
    AtInfinity,
}

impl fmt::Display for ContaminationPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContaminationPoint::At(k) => write!(f, "{k}"),
            ContaminationPoint::AtInfinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ContaminationPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ContaminationPoint::At(k) => s.serialize_u64(*k),
            ContaminationPoint::AtInfinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ContaminationPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(k) => Ok(ContaminationPoint::At(k)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for ContaminationPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" => Ok(ContaminationPoint::AtInfinity),
            other => other
                .parse::<u64>()
                .map(ContaminationPoint::At)
                .map_err(|_| Error::Domain(format!("invalid contamination point {other:?}"))),
        }
    }
}

/// `(1 - eps) * base + eps * delta_{x0}`.
#[derive(Debug, Clone)]
pub struct ContaminatedDistribution<D> {
    base: D,
    epsilon: f64,
    point: ContaminationPoint,
}

/// Mix `base` with a point mass of weight `epsilon` at `point`.
pub fn contaminate<D: IntegerDistribution>(
    base: D,
    epsilon: f64,
    point: ContaminationPoint,
) -> Result<ContaminatedDistribution<D>> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!(
            "contamination proportion must lie in [0, 1), got {epsilon}"
        )));
    }
    Ok(ContaminatedDistribution { base, epsilon, point })
}

impl<D> ContaminatedDistribution<D> {
    pub fn base(&self) -> &D {
        &self.base
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn point(&self) -> ContaminationPoint {
        self.point
    }
}

impl<D: IntegerDistribution> IntegerDistribution for ContaminatedDistribution<D> {
    fn pmf(&self, k: u64) -> f64 {
        let atom = match self.point {
            ContaminationPoint::At(x0) if x0 == k => self.epsilon,
            _ => 0.0,
        };
        (1.0 - self.epsilon) * self.base.pmf(k) + atom
    }

    fn cdf(&self, k: u64) -> f64 {
        let atom = match self.point {
            ContaminationPoint::At(x0) if k >= x0 => self.epsilon,
            _ => 0.0,
        };
        (1.0 - self.epsilon) * self.base.cdf(k) + atom
    }

    fn support_start(&self) -> u64 {
        match self.point {
            ContaminationPoint::At(x0) if self.epsilon > 0.0 => x0.min(self.base.support_start()),
            _ => self.base.support_start(),
        }
    }

    fn eval_bound(&self) -> u64 {
        match self.point {
            ContaminationPoint::At(x0) if self.epsilon > 0.0 => x0.max(self.base.eval_bound()),
            _ => self.base.eval_bound(),
        }
    }

    fn mass_at_infinity(&self) -> f64 {
        match self.point {
            ContaminationPoint::AtInfinity => self.epsilon + (1.0 - self.epsilon) * self.base.mass_at_infinity(),
            ContaminationPoint::At(_) => (1.0 - self.epsilon) * self.base.mass_at_infinity(),
        }
    }

    fn masses(&self) -> Vec<(u64, f64)> {
        let scale = 1.0 - self.epsilon;
        let mut out: BTreeMap<u64, f64> = self
            .base
            .masses()
            .into_iter()
            .map(|(k, p)| (k, scale * p))
            .collect();
        if let ContaminationPoint::At(x0) = self.point {
            if self.epsilon > 0.0 {
                *out.entry(x0).or_insert(0.0) += self.epsilon;
            }
        }
        out.into_iter().filter(|&(_, p)| p > 0.0).collect()
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Uniform on `[0, 1)` from the top 53 bits of one generator word.
pub fn unit_uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws by cdf inversion. The result depends only on the generator stream,
/// so a fixed seed reproduces the same draws on every platform.
pub fn draw<D: IntegerDistribution + ?Sized, R: RngCore + ?Sized>(dist: &D, rng: &mut R) -> u64 {
    dist.inverse_cdf(unit_uniform(rng))
}

/// Fill `out` with i.i.d. draws from `dist`.
pub fn sample_into<D: IntegerDistribution + ?Sized, R: RngCore + ?Sized>(
    dist: &D,
    rng: &mut R,
    out: &mut Vec<u64>,
    n: usize,
) {
    out.clear();
    out.extend((0..n).map(|_| draw(dist, rng)));
}

/// `n` i.i.d. Poisson(lambda) draws from a ChaCha8 stream seeded with `seed`.
pub fn sample_poisson(lambda: f64, n: usize, seed: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    let dist = PoissonDistribution::new(lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    sample_into(&dist, &mut rng, &mut out, n);
    Ok(out)
}
