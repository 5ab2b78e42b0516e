//! Exact t-SNE (no Barnes-Hut approximation).
//!
//! Input affinities are Gaussian conditionals whose bandwidths are calibrated
//! per point to a target perplexity, symmetrized into a joint distribution P.
//! Output similarities follow a Student-t kernel with one degree of freedom.
//! The embedding minimizes KL(P || Q) by gradient descent with momentum,
//! per-coordinate adaptive gains and early exaggeration.

use ndarray::{Array2, ArrayView2};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;

const PERPLEXITY_TOL: f64 = 1e-5;
const MAX_BISECTION_STEPS: usize = 50;
/// Bracket on ln(beta * scale) for the bandwidth search.
const LOG_BETA_RANGE: f64 = 50.0;
const AFFINITY_FLOOR: f64 = 1e-12;
const INIT_STD: f64 = 1e-4;
const MIN_GAIN: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub initial_momentum: f64,
    pub final_momentum: f64,
    /// Iteration at which momentum switches to `final_momentum`.
    pub momentum_switch: usize,
    pub early_exaggeration: f64,
    pub exaggeration_iterations: usize,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            initial_momentum: 0.5,
            final_momentum: 0.8,
            momentum_switch: 250,
            early_exaggeration: 12.0,
            exaggeration_iterations: 250,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding2D {
    /// m x 2 coordinates.
    pub coords: Array2<f64>,
    /// KL(P || Q) before each update step.
    pub kl_trace: Vec<f64>,
    /// All input points coincided; coordinates are zero.
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

pub fn squared_distances(points: ArrayView2<'_, f64>) -> Array2<f64> {
    let m = points.nrows();
    let mut out = Array2::zeros((m, m));
    for i in 0..m {
        for j in (i + 1)..m {
            let d: f64 = points
                .row(i)
                .iter()
                .zip(points.row(j).iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            out[[i, j]] = d;
            out[[j, i]] = d;
        }
    }
    out
}

/// Entropy (nats) of the conditional row `exp(-beta * shifted)` normalized.
fn row_distribution(shifted: &[f64], beta: f64, out: &mut [f64]) -> f64 {
    let mut z = 0.0;
    for (o, &d) in out.iter_mut().zip(shifted) {
        *o = (-beta * d).exp();
        z += *o;
    }
    let mut weighted = 0.0;
    for (o, &d) in out.iter_mut().zip(shifted) {
        *o /= z;
        weighted += *o * d;
    }
    z.ln() + beta * weighted
}

/// Row-conditional Gaussian affinities `p_{j|i}` with each row's bandwidth
/// bisected (in log space) until its perplexity matches the target.
/// Returns the matrix and the perplexity achieved per row.
///
/// Perplexities outside the attainable range for a row (below the number of
/// nearest ties, above m - 1) end at the nearest bracket edge.
pub fn conditional_affinities(sq_dist: &Array2<f64>, perplexity: f64) -> (Array2<f64>, Vec<f64>) {
    let m = sq_dist.nrows();
    let target = perplexity.ln();
    let mut p = Array2::zeros((m, m));
    let mut achieved = Vec::with_capacity(m);
    let mut row = vec![0.0; m - 1];
    for i in 0..m {
        let others: Vec<f64> = (0..m).filter(|&j| j != i).map(|j| sq_dist[[i, j]]).collect();
        // shifting a row by a constant leaves the normalized distribution unchanged
        let min = others.iter().copied().fold(f64::INFINITY, f64::min);
        let shifted: Vec<f64> = others.iter().map(|d| d - min).collect();
        let mean = shifted.iter().sum::<f64>() / shifted.len() as f64;
        let scale = if mean > 0.0 { mean } else { 1.0 };

        let (mut lo, mut hi) = (-LOG_BETA_RANGE, LOG_BETA_RANGE);
        let mut t = 0.0f64;
        let mut entropy = row_distribution(&shifted, t.exp() / scale, &mut row);
        for _ in 0..MAX_BISECTION_STEPS {
            if (entropy.exp() - perplexity).abs() < PERPLEXITY_TOL {
                break;
            }
            // entropy decreases as beta grows
            if entropy > target {
                lo = t;
            } else {
                hi = t;
            }
            t = 0.5 * (lo + hi);
            entropy = row_distribution(&shifted, t.exp() / scale, &mut row);
        }
        achieved.push(entropy.exp());
        for (slot, j) in (0..m).filter(|&j| j != i).enumerate() {
            p[[i, j]] = row[slot];
        }
    }
    (p, achieved)
}

/// Symmetrized joint affinities `(p_{j|i} + p_{i|j}) / 2m`, floored and
/// renormalized to sum to one. The diagonal is zero.
pub fn joint_affinities(points: ArrayView2<'_, f64>, perplexity: f64) -> Array2<f64> {
    let m = points.nrows();
    let (cond, _) = conditional_affinities(&squared_distances(points), perplexity);
    let mut p = Array2::zeros((m, m));
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let v = ((cond[[i, j]] + cond[[j, i]]) / (2.0 * m as f64)).max(AFFINITY_FLOOR);
                p[[i, j]] = v;
                total += v;
            }
        }
    }
    p.mapv_inplace(|v| v / total);
    p
}

/// Student-t kernel values for the current layout and their sum over i != j.
fn student_kernel(y: &[[f64; 2]], num: &mut [f64]) -> f64 {
    let m = y.len();
    let mut sum = 0.0;
    for i in 0..m {
        num[i * m + i] = 0.0;
        for j in (i + 1)..m {
            let dx = y[i][0] - y[j][0];
            let dy = y[i][1] - y[j][1];
            let v = 1.0 / (1.0 + dx * dx + dy * dy);
            num[i * m + j] = v;
            num[j * m + i] = v;
            sum += 2.0 * v;
        }
    }
    sum
}

/// KL(P || Q) for a layout, with Q from the Student-t kernel.
pub fn kl_divergence(p: &Array2<f64>, coords: ArrayView2<'_, f64>) -> f64 {
    let m = p.nrows();
    let y: Vec<[f64; 2]> = coords.rows().into_iter().map(|r| [r[0], r[1]]).collect();
    let mut num = vec![0.0; m * m];
    let sum = student_kernel(&y, &mut num);
    kl_from_kernel(p, &num, sum)
}

fn kl_from_kernel(p: &Array2<f64>, num: &[f64], sum: f64) -> f64 {
    let m = p.nrows();
    let mut kl = 0.0;
    for i in 0..m {
        for j in 0..m {
            let pij = p[[i, j]];
            if i != j && pij > 0.0 {
                kl += pij * (pij / (num[i * m + j] / sum)).ln();
            }
        }
    }
    kl
}

/// Embeds the rows of `points` into the plane.
pub fn tsne_embed(points: ArrayView2<'_, f64>, cfg: &TsneConfig) -> Result<Embedding2D> {
    let m = points.nrows();
    if m < 3 {
        return Err(Error::invalid(format!("t-SNE needs at least 3 points, got {m}")));
    }
    if !(cfg.perplexity > 0.0) || !cfg.perplexity.is_finite() {
        return Err(Error::invalid(format!("perplexity must be positive, got {}", cfg.perplexity)));
    }
    if cfg.perplexity >= m as f64 {
        return Err(Error::PerplexityTooLarge {
            perplexity: cfg.perplexity,
            points: m,
        });
    }
    if cfg.iterations == 0 {
        return Err(Error::invalid("t-SNE iterations must be at least 1"));
    }
    let mut warnings = Vec::new();
    if cfg.perplexity < 1.0 {
        let msg = format!(
            "perplexity {} is below 1; bandwidths saturate at the search bracket",
            cfg.perplexity
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let sq = squared_distances(points);
    if sq.iter().all(|&d| d == 0.0) {
        let msg = "all input points are identical; returning zero coordinates".to_string();
        log::warn!("{msg}");
        warnings.push(msg);
        return Ok(Embedding2D {
            coords: Array2::zeros((m, 2)),
            kl_trace: Vec::new(),
            degenerate: true,
            warnings,
        });
    }
    let p = joint_affinities(points, cfg.perplexity);

    let mut rng = substream(cfg.seed, &[]);
    let mut y: Vec<[f64; 2]> = (0..m)
        .map(|_| {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            [INIT_STD * a, INIT_STD * b]
        })
        .collect();
    let mut update = vec![[0.0f64; 2]; m];
    let mut gains = vec![[1.0f64; 2]; m];
    let mut num = vec![0.0; m * m];
    let mut grad = vec![[0.0f64; 2]; m];
    let mut kl_trace = Vec::with_capacity(cfg.iterations);

    for it in 0..cfg.iterations {
        let exaggeration = if it < cfg.exaggeration_iterations {
            cfg.early_exaggeration
        } else {
            1.0
        };
        let momentum = if it < cfg.momentum_switch {
            cfg.initial_momentum
        } else {
            cfg.final_momentum
        };
        let sum = student_kernel(&y, &mut num);
        kl_trace.push(kl_from_kernel(&p, &num, sum));

        for i in 0..m {
            let mut g = [0.0, 0.0];
            for j in 0..m {
                if i == j {
                    continue;
                }
                let n = num[i * m + j];
                let coeff = (exaggeration * p[[i, j]] - n / sum) * n;
                g[0] += coeff * (y[i][0] - y[j][0]);
                g[1] += coeff * (y[i][1] - y[j][1]);
            }
            grad[i] = [4.0 * g[0], 4.0 * g[1]];
        }
        for i in 0..m {
            for c in 0..2 {
                let same_sign = (grad[i][c] > 0.0) == (update[i][c] > 0.0);
                gains[i][c] = if same_sign { gains[i][c] * 0.8 } else { gains[i][c] + 0.2 }.max(MIN_GAIN);
                update[i][c] = momentum * update[i][c] - cfg.learning_rate * gains[i][c] * grad[i][c];
                y[i][c] += update[i][c];
            }
        }
        let cx = y.iter().map(|v| v[0]).sum::<f64>() / m as f64;
        let cy = y.iter().map(|v| v[1]).sum::<f64>() / m as f64;
        for v in &mut y {
            v[0] -= cx;
            v[1] -= cy;
        }
        if y.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(Error::invalid(format!("t-SNE diverged at iteration {it}")));
        }
    }

    let coords = Array2::from_shape_fn((m, 2), |(i, c)| y[i][c]);
    Ok(Embedding2D {
        coords,
        kl_trace,
        degenerate: false,
        warnings,
    })
}
