//! Monte Carlo check of the bias and variance of SMOTE-style and LoRAS-style
//! estimators under a local shifted-t neighborhood model.
//!
//! Each neighborhood point is `mu + sigma * T` with independent Student-t
//! coordinates. A SMOTE estimate is a Dirichlet(1, 1) combination of two such
//! points. A LoRAS estimate combines `f_count` points, each perturbed by
//! Gaussian noise of standard deviation `sigma_b`, with Dirichlet(1, ..., 1)
//! weights. Both are unbiased for `mu`; their per-coordinate variances are
//! `2 s2 / 3` and `2 (s2 + sigma_b^2) / (f_count + 1)`, where
//! `s2 = sigma^2 dof / (dof - 2)`.

use ndarray::Array1;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{substream, StreamRng};
use crate::samplers::draw_simplex_weights;

/// Fewest trials accepted by [`validate_theorem`].
pub const MIN_TRIALS: usize = 10_000;
const BLOCK: usize = 10_000;
const Z_LIMIT: f64 = 4.0;
const VAR_BAND: (f64, f64) = (0.95, 1.05);
const EQUALITY_SE: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalDistribution {
    pub mu: Vec<f64>,
    pub sigma: f64,
    pub dof: f64,
    pub sigma_b: f64,
}

impl LocalDistribution {
    pub fn new(mu: Vec<f64>, sigma: f64, dof: f64, sigma_b: f64) -> Result<Self> {
        let dist = Self { mu, sigma, dof, sigma_b };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dof > 2.0) {
            return Err(Error::DofTooSmall(self.dof));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::invalid(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.sigma_b >= 0.0) || !self.sigma_b.is_finite() {
            return Err(Error::invalid(format!("sigma_b must be nonnegative, got {}", self.sigma_b)));
        }
        if self.mu.is_empty() || self.mu.iter().any(|m| !m.is_finite()) {
            return Err(Error::invalid("mu must be a nonempty finite vector"));
        }
        Ok(())
    }

    /// Per-coordinate variance of one neighborhood point.
    pub fn point_variance(&self) -> f64 {
        self.sigma * self.sigma * self.dof / (self.dof - 2.0)
    }

    pub fn dims(&self) -> usize {
        self.mu.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Smote,
    Loras,
}

impl Estimator {
    fn stream_id(self) -> u64 {
        match self {
            Estimator::Smote => 0,
            Estimator::Loras => 1,
        }
    }
}

/// Draws neighborhood points for a distribution. Holds the t sampler so its
/// chi-square component is built once.
pub struct LocalSampler<'a> {
    dist: &'a LocalDistribution,
    t: StudentT<f64>,
}

impl<'a> LocalSampler<'a> {
    pub fn new(dist: &'a LocalDistribution) -> Result<Self> {
        dist.validate()?;
        let t = StudentT::new(dist.dof).map_err(|e| Error::invalid(format!("student t: {e}")))?;
        Ok(Self { dist, t })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Array1<f64> {
        self.dist
            .mu
            .iter()
            .map(|&m| m + self.dist.sigma * self.t.sample(rng))
            .collect()
    }

    /// `count` neighborhood points, each with N(0, noise^2) added per coordinate.
    fn shadows(&self, count: usize, noise: f64, rng: &mut StreamRng) -> Vec<Array1<f64>> {
        (0..count)
            .map(|_| {
                let mut x = self.sample(rng);
                if noise > 0.0 {
                    x.mapv_inplace(|v| {
                        let z: f64 = StandardNormal.sample(rng);
                        v + noise * z
                    });
                }
                x
            })
            .collect()
    }

    fn estimate(&self, estimator: Estimator, f_count: usize, rng: &mut StreamRng, forced: Option<&[f64]>) -> Array1<f64> {
        let (count, noise) = match estimator {
            Estimator::Smote => (2, 0.0),
            Estimator::Loras => (f_count, self.dist.sigma_b),
        };
        let points = self.shadows(count, noise, rng);
        let weights = match forced {
            Some(w) => w.to_vec(),
            None => draw_simplex_weights(count, rng).alphas,
        };
        let mut out = Array1::zeros(self.dist.dims());
        for (p, w) in points.iter().zip(weights) {
            out.scaled_add(w, p);
        }
        out
    }
}

/// One point of the local model: `mu_j + sigma * T_j` per coordinate.
pub fn sample_local_t(dist: &LocalDistribution, rng: &mut impl Rng) -> Result<Array1<f64>> {
    Ok(LocalSampler::new(dist)?.sample(rng))
}

/// One draw of an estimator.
pub fn estimate_once(
    dist: &LocalDistribution,
    estimator: Estimator,
    f_count: usize,
    rng: &mut StreamRng,
) -> Result<Array1<f64>> {
    check_f_count(estimator, f_count)?;
    Ok(LocalSampler::new(dist)?.estimate(estimator, f_count, rng, None))
}

fn check_f_count(estimator: Estimator, f_count: usize) -> Result<()> {
    if estimator == Estimator::Loras && f_count < 2 {
        return Err(Error::invalid(format!("f_count must be at least 2, got {f_count}")));
    }
    Ok(())
}

/// Closed-form per-coordinate variance of an estimator.
pub fn theoretical_variance(dist: &LocalDistribution, estimator: Estimator, f_count: usize) -> Result<Vec<f64>> {
    if !(dist.dof > 2.0) {
        return Err(Error::DofTooSmall(dist.dof));
    }
    check_f_count(estimator, f_count)?;
    let s2 = dist.point_variance();
    let v = match estimator {
        Estimator::Smote => 2.0 * s2 / 3.0,
        Estimator::Loras => 2.0 * (s2 + dist.sigma_b * dist.sigma_b) / (f_count as f64 + 1.0),
    };
    Ok(vec![v; dist.dims()])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub estimator: Estimator,
    pub trials: usize,
    pub empirical_mean: Vec<f64>,
    pub empirical_var: Vec<f64>,
    /// Standard error of each empirical variance.
    pub var_se: Vec<f64>,
    pub theoretical_mean: Vec<f64>,
    pub theoretical_var: Vec<f64>,
    pub mean_z_scores: Vec<f64>,
    /// Empirical over theoretical variance.
    pub var_ratio: Vec<f64>,
    /// Every |z| is at most 4.
    pub unbiased_pass: bool,
    /// Every variance ratio lies in [0.95, 1.05].
    pub variance_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub distribution: LocalDistribution,
    pub f_count: usize,
    pub trials: usize,
    pub seed: u64,
    pub smote: EstimatorReport,
    pub loras: EstimatorReport,
    /// Mean LoRAS variance over mean SMOTE variance.
    pub variance_ratio: f64,
    /// For f_count > 2: LoRAS variance below SMOTE in every coordinate.
    pub ordering_pass: Option<bool>,
    /// For f_count = 2 and sigma_b = 0: pooled variances agree within 3 SE.
    pub equality_pass: Option<bool>,
    pub passed: bool,
}

/// Power sums of `x - mu`, orders 1 to 4, per coordinate.
#[derive(Debug, Clone)]
struct Moments {
    n: usize,
    sums: Vec<[f64; 4]>,
}

impl Moments {
    fn new(dims: usize) -> Self {
        Self { n: 0, sums: vec![[0.0; 4]; dims] }
    }

    fn push(&mut self, x: &Array1<f64>, mu: &[f64]) {
        self.n += 1;
        for ((s, &v), &m) in self.sums.iter_mut().zip(x.iter()).zip(mu) {
            let d = v - m;
            let d2 = d * d;
            s[0] += d;
            s[1] += d2;
            s[2] += d2 * d;
            s[3] += d2 * d2;
        }
    }

    fn merge(mut self, other: Moments) -> Moments {
        self.n += other.n;
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            for p in 0..4 {
                a[p] += b[p];
            }
        }
        self
    }
}

/// Merges in a fixed binary tree so the result does not depend on scheduling.
fn pairwise_merge(mut parts: Vec<Moments>) -> Moments {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.merge(b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop().expect("at least one block")
}

fn simulate(sampler: &LocalSampler<'_>, estimator: Estimator, f_count: usize, trials: usize, seed: u64) -> Moments {
    let mu = &sampler.dist.mu;
    let blocks = trials.div_ceil(BLOCK);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, &[estimator.stream_id(), b as u64]);
            let len = BLOCK.min(trials - b * BLOCK);
            let mut m = Moments::new(mu.len());
            for _ in 0..len {
                m.push(&sampler.estimate(estimator, f_count, &mut rng, None), mu);
            }
            m
        })
        .collect();
    pairwise_merge(parts)
}

fn report(dist: &LocalDistribution, estimator: Estimator, f_count: usize, m: &Moments) -> Result<EstimatorReport> {
    let n = m.n as f64;
    let theoretical_var = theoretical_variance(dist, estimator, f_count)?;
    let mut report = EstimatorReport {
        estimator,
        trials: m.n,
        empirical_mean: Vec::new(),
        empirical_var: Vec::new(),
        var_se: Vec::new(),
        theoretical_mean: dist.mu.clone(),
        theoretical_var: theoretical_var.clone(),
        mean_z_scores: Vec::new(),
        var_ratio: Vec::new(),
        unbiased_pass: true,
        variance_pass: true,
    };
    for (j, s) in m.sums.iter().enumerate() {
        let shift = s[0] / n;
        let var = ((s[1] - s[0] * shift) / (n - 1.0)).max(0.0);
        // central fourth moment from raw moments about mu
        let m4 = s[3] / n - 4.0 * shift * s[2] / n + 6.0 * shift * shift * s[1] / n - 3.0 * shift.powi(4);
        let var_se = ((m4 - var * var).max(0.0) / n).sqrt();
        let z = if var > 0.0 { shift / (var / n).sqrt() } else { 0.0 };
        let ratio = var / theoretical_var[j];
        report.unbiased_pass &= z.abs() <= Z_LIMIT;
        report.variance_pass &= (VAR_BAND.0..=VAR_BAND.1).contains(&ratio);
        report.empirical_mean.push(dist.mu[j] + shift);
        report.empirical_var.push(var);
        report.var_se.push(var_se);
        report.mean_z_scores.push(z);
        report.var_ratio.push(ratio);
    }
    Ok(report)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Runs both estimators for `trials` draws each and checks bias, variance,
/// and the variance ordering between them.
pub fn validate_theorem(dist: &LocalDistribution, f_count: usize, trials: usize, seed: u64) -> Result<TheoremReport> {
    if trials < MIN_TRIALS {
        return Err(Error::invalid(format!("trials must be at least {MIN_TRIALS}, got {trials}")));
    }
    check_f_count(Estimator::Loras, f_count)?;
    let sampler = LocalSampler::new(dist)?;
    let smote_m = simulate(&sampler, Estimator::Smote, f_count, trials, seed);
    let loras_m = simulate(&sampler, Estimator::Loras, f_count, trials, seed);
    let smote = report(dist, Estimator::Smote, f_count, &smote_m)?;
    let loras = report(dist, Estimator::Loras, f_count, &loras_m)?;

    let ordering_pass = (f_count > 2).then(|| {
        loras
            .empirical_var
            .iter()
            .zip(&smote.empirical_var)
            .all(|(l, s)| l < s)
    });
    let equality_pass = (f_count == 2 && dist.sigma_b == 0.0).then(|| {
        let dims = dist.dims() as f64;
        let se_l = loras.var_se.iter().map(|s| s * s).sum::<f64>().sqrt() / dims;
        let se_s = smote.var_se.iter().map(|s| s * s).sum::<f64>().sqrt() / dims;
        let gap = (mean(&loras.empirical_var) - mean(&smote.empirical_var)).abs();
        gap <= EQUALITY_SE * (se_l * se_l + se_s * se_s).sqrt()
    });
    let passed = smote.unbiased_pass
        && loras.unbiased_pass
        && smote.variance_pass
        && loras.variance_pass
        && ordering_pass.unwrap_or(true)
        && equality_pass.unwrap_or(true);
    Ok(TheoremReport {
        distribution: dist.clone(),
        f_count,
        trials,
        seed,
        variance_ratio: mean(&loras.empirical_var) / mean(&smote.empirical_var),
        smote,
        loras,
        ordering_pass,
        equality_pass,
        passed,
    })
}
