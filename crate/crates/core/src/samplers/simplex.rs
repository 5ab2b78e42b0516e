use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

/// Convex-combination weights: nonnegative, summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexWeights {
    pub alphas: Vec<f64>,
}

impl SimplexWeights {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

/// Draws Dirichlet(1, ..., 1) weights by normalizing `m` unit-rate
/// exponential variates.
pub fn draw_simplex_weights<R: Rng + ?Sized>(m: usize, rng: &mut R) -> SimplexWeights {
    assert!(m >= 1, "simplex dimension must be at least 1");
    let mut alphas: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = alphas.iter().sum();
    if total > 0.0 {
        alphas.iter_mut().for_each(|a| *a /= total);
    } else {
        // every draw underflowed to zero; fall back to the barycenter
        alphas.iter_mut().for_each(|a| *a = 1.0 / m as f64);
    }
    SimplexWeights { alphas }
}
