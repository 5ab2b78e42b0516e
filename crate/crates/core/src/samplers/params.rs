use serde::{Deserialize, Serialize};

use crate::dataset::{ClassSplit, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::EmbeddingChoice;

pub const DEFAULT_SIGMA: f64 = 0.005;
pub const DEFAULT_PERPLEXITY: f64 = 30.0;
const MIN_SHADOW: usize = 40;

/// Parameters of the LoRAS generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorasParams {
    /// Nearest minority neighbors per parent.
    pub k: usize,
    /// Shadowsamples drawn per neighborhood member.
    pub num_shadow: usize,
    /// Per-feature noise standard deviation.
    pub sigma_list: Vec<f64>,
    /// Shadowsamples combined into one output point.
    pub n_aff: usize,
    /// Output points per neighborhood.
    pub n_gen: usize,
    pub embedding: EmbeddingChoice,
    pub perplexity: f64,
    /// Top up to exactly |C_maj| - |C_min| outputs by drawing extra points
    /// from uniformly chosen neighborhoods.
    #[serde(default)]
    pub exact_balance: bool,
}

impl LorasParams {
    pub fn validate(&self, f_count: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.num_shadow == 0 {
            return Err(Error::invalid("num_shadow must be at least 1"));
        }
        if self.n_aff < 2 {
            return Err(Error::invalid(format!("n_aff must be at least 2, got {}", self.n_aff)));
        }
        if self.n_aff >= self.k * self.num_shadow {
            return Err(Error::ConstraintViolated {
                n_aff: self.n_aff,
                k: self.k,
                num_shadow: self.num_shadow,
            });
        }
        if self.n_gen == 0 {
            return Err(Error::invalid("n_gen must be at least 1"));
        }
        if self.sigma_list.len() != f_count {
            return Err(Error::invalid(format!(
                "sigma_list has {} entries for {f_count} features",
                self.sigma_list.len()
            )));
        }
        if let Some(bad) = self.sigma_list.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return Err(Error::invalid(format!("noise standard deviations must be positive, got {bad}")));
        }
        if !(self.perplexity > 0.0) {
            return Err(Error::invalid(format!("perplexity must be positive, got {}", self.perplexity)));
        }
        Ok(())
    }
}

/// Neighborhood size shared by all samplers: 30 for minorities of at least
/// 100 points, 5 otherwise.
pub fn default_neighborhood_size(minority_count: usize) -> usize {
    if minority_count >= 100 {
        30
    } else {
        5
    }
}

/// Default parameters for a dataset.
pub fn resolve_defaults(d: &Dataset, s: &ClassSplit) -> Result<LorasParams> {
    let min = s.minority_count();
    if min == 0 {
        return Err(Error::EmptyMinority { needed: 1, found: 0 });
    }
    let f = d.f_count();
    let k = default_neighborhood_size(min);
    let num_shadow = (2 * f).div_ceil(k).max(MIN_SHADOW);
    let n_aff = f.min(k * num_shadow - 1).max(2);
    let n_gen = (s.majority_count().saturating_sub(min) / min).max(1);
    Ok(LorasParams {
        k,
        num_shadow,
        sigma_list: vec![DEFAULT_SIGMA; f],
        n_aff,
        n_gen,
        embedding: EmbeddingChoice::Regular,
        perplexity: DEFAULT_PERPLEXITY,
        exact_balance: false,
    })
}

/// Per-feature noise equal to `scale` times the minority sample standard
/// deviation of that feature. Constant features fall back to `scale`.
pub fn relative_sigma_list(d: &Dataset, s: &ClassSplit, scale: f64) -> Vec<f64> {
    let rows = d.select_features(&s.minority_idx);
    let m = rows.nrows() as f64;
    rows.columns()
        .into_iter()
        .map(|col| {
            let mean = col.sum() / m;
            let var = if m > 1.0 {
                col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)
            } else {
                0.0
            };
            let sd = var.sqrt();
            if sd > 0.0 {
                scale * sd
            } else {
                scale
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn shaped(n: usize, minority: usize, f: usize) -> (Dataset, ClassSplit) {
        let features = Array2::from_shape_fn((n, f), |(i, j)| (i * f + j) as f64);
        let labels = (0..n).map(|i| u8::from(i < minority)).collect();
        let d = Dataset::new(features, labels, Dataset::default_feature_names(f)).unwrap();
        let s = crate::dataset::class_split(&d);
        (d, s)
    }

    #[test]
    fn abalone_defaults() {
        let (d, s) = shaped(4177, 32, 10);
        let p = resolve_defaults(&d, &s).unwrap();
        assert_eq!(p.k, 5);
        assert_eq!(p.num_shadow, 40);
        assert_eq!(p.n_aff, 10);
        assert_eq!(p.n_gen, 128);
        assert_eq!(p.sigma_list, vec![0.005; 10]);
        assert_eq!(p.embedding, EmbeddingChoice::Regular);
        assert_eq!(p.perplexity, 30.0);
        p.validate(10).unwrap();
    }

    #[test]
    fn arrhythmia_shadow_count() {
        let (d, s) = shaped(452, 25, 278);
        let p = resolve_defaults(&d, &s).unwrap();
        assert_eq!(p.k, 5);
        assert_eq!(p.num_shadow, 112);
        assert_eq!(p.n_aff, 278);
        assert_eq!(p.n_gen, 16);
    }

    #[test]
    fn large_minority_uses_thirty_neighbors() {
        let (d, s) = shaped(1000, 100, 3);
        assert_eq!(resolve_defaults(&d, &s).unwrap().k, 30);
        // one feature still combines two shadowsamples
        let (d, s) = shaped(50, 10, 1);
        assert_eq!(resolve_defaults(&d, &s).unwrap().n_aff, 2);
    }

    #[test]
    fn n_aff_capped_below_pool_constraint() {
        // k * num_shadow >= 2|F| under the defaults, so n_aff = |F| always fits
        let (d, s) = shaped(40, 8, 300);
        let p = resolve_defaults(&d, &s).unwrap();
        assert!(p.n_aff < p.k * p.num_shadow);
        p.validate(300).unwrap();
    }

    #[test]
    fn validation_errors() {
        let (d, s) = shaped(60, 10, 4);
        let base = resolve_defaults(&d, &s).unwrap();
        let bad = LorasParams { n_aff: 200, ..base.clone() };
        assert!(matches!(bad.validate(4), Err(Error::ConstraintViolated { .. })));
        let bad = LorasParams { n_aff: 1, ..base.clone() };
        assert!(bad.validate(4).is_err());
        let bad = LorasParams { sigma_list: vec![0.0; 4], ..base.clone() };
        assert!(bad.validate(4).is_err());
        let bad = LorasParams { sigma_list: vec![0.1; 3], ..base.clone() };
        assert!(bad.validate(4).is_err());
    }

    #[test]
    fn relative_sigma_scales_minority_spread() {
        let (d, s) = shaped(20, 4, 2);
        // minority rows 0..4: column 0 = 0,2,4,6 -> sd = sqrt(20/3)
        let sig = relative_sigma_list(&d, &s, 0.1);
        assert!((sig[0] - 0.1 * (20.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}
