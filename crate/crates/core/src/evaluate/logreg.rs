use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogRegConfig {
    pub epochs: usize,
    pub step: f64,
    pub l2: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            step: 0.1,
            l2: 1e-4,
        }
    }
}

/// L2-regularized logistic regression on z-scored features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    /// Intercept first, then one weight per standardized feature.
    pub weights: Vec<f64>,
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    /// Loss after each accepted epoch, starting with the initial loss.
    pub loss_trace: Vec<f64>,
}

impl LogRegModel {
    pub fn final_loss(&self) -> f64 {
        *self.loss_trace.last().expect("initial loss recorded")
    }

    pub fn probabilities(&self, x: ArrayView2<'_, f64>) -> Vec<f64> {
        let z = standardize(x, &self.mean, &self.scale);
        let w = Array1::from(self.weights[1..].to_vec());
        z.dot(&w).iter().map(|s| sigmoid(self.weights[0] + s)).collect()
    }

    /// Label 1 when the probability exceeds one half.
    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Vec<u8> {
        self.probabilities(x).into_iter().map(|p| u8::from(p > 0.5)).collect()
    }
}

fn sigmoid(s: f64) -> f64 {
    1.0 / (1.0 + (-s).exp())
}

/// log(1 + exp(s)) without overflow.
fn softplus(s: f64) -> f64 {
    if s > 0.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

fn standardize(x: ArrayView2<'_, f64>, mean: &[f64], scale: &[f64]) -> Array2<f64> {
    let mut z = x.to_owned();
    for (mut col, (m, s)) in z.columns_mut().into_iter().zip(mean.iter().zip(scale)) {
        col.mapv_inplace(|v| (v - m) / s);
    }
    z
}

fn loss(z: &Array2<f64>, y: &[f64], b: f64, w: &Array1<f64>, l2: f64) -> f64 {
    let scores = z.dot(w);
    let data: f64 = scores
        .iter()
        .zip(y)
        .map(|(s, &t)| {
            let s = s + b;
            // -[t log sigmoid(s) + (1 - t) log(1 - sigmoid(s))]
            softplus(s) - t * s
        })
        .sum();
    data / y.len() as f64 + 0.5 * l2 * w.dot(w)
}

/// Full-batch gradient descent on the mean cross-entropy plus `l2/2 |w|^2`
/// (intercept unpenalized). A step that would raise the loss is halved until
/// it does not, so the loss trace never increases.
pub fn logreg_fit(x: ArrayView2<'_, f64>, y: &[u8], cfg: &LogRegConfig) -> Result<LogRegModel> {
    let (n, f) = x.dim();
    if n == 0 || y.len() != n {
        return Err(Error::invalid("logistic regression needs a nonempty training set with one label per row"));
    }
    if !(cfg.step > 0.0) || !(cfg.l2 >= 0.0) {
        return Err(Error::invalid("step must be positive and l2 nonnegative"));
    }
    if y.iter().all(|&l| l == y[0]) {
        return Err(Error::DegenerateLabels);
    }
    let mean: Vec<f64> = x.mean_axis(Axis(0)).expect("n > 0").to_vec();
    let scale: Vec<f64> = x
        .columns()
        .into_iter()
        .zip(&mean)
        .map(|(col, m)| {
            let sd = (col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n as f64).sqrt();
            if sd > 0.0 {
                sd
            } else {
                1.0
            }
        })
        .collect();
    let z = standardize(x, &mean, &scale);
    let t: Vec<f64> = y.iter().map(|&l| f64::from(l)).collect();

    let mut b = 0.0;
    let mut w = Array1::<f64>::zeros(f);
    let mut current = loss(&z, &t, b, &w, cfg.l2);
    let mut loss_trace = vec![current];
    let mut step = cfg.step;
    for epoch in 0..cfg.epochs {
        let residual: Array1<f64> = (z.dot(&w) + b)
            .iter()
            .zip(&t)
            .map(|(s, &ti)| sigmoid(*s) - ti)
            .collect();
        let grad_b = residual.sum() / n as f64;
        let grad_w = z.t().dot(&residual) / n as f64 + cfg.l2 * &w;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let nb = b - step * grad_b;
            let nw = &w - &(step * &grad_w);
            let next = loss(&z, &t, nb, &nw, cfg.l2);
            if !next.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            if next <= current {
                b = nb;
                w = nw;
                current = next;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        loss_trace.push(current);
    }
    let mut weights = Vec::with_capacity(f + 1);
    weights.push(b);
    weights.extend(w.iter());
    Ok(LogRegModel {
        weights,
        mean,
        scale,
        loss_trace,
    })
}
