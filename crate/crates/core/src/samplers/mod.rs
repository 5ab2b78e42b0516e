//! Synthetic minority sample generators.
//!
//! Every sampler is a pure function of its inputs and a seed: the same call
//! produces a bit-identical [`SyntheticSet`].

mod adasyn;
mod borderline;
mod loras;
mod params;
mod shadow;
mod simplex;
mod smote;

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassSplit, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::EmbeddingChoice;

pub use adasyn::{adasyn, adasyn_allocation};
pub use borderline::{borderline_smote, classify_borderline, BorderlineVariant, PointKind};
pub use loras::{loras_oversample, loras_oversample_traced, LorasTrace, Selection};
pub use params::{default_neighborhood_size, relative_sigma_list, resolve_defaults, LorasParams};
pub use shadow::{make_shadowsamples, Shadowsample};
pub use simplex::{draw_simplex_weights, SimplexWeights};
pub use smote::smote_oversample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Loras,
    Smote,
    Borderline1,
    Borderline2,
    Adasyn,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 5] = [
        SamplerKind::Loras,
        SamplerKind::Smote,
        SamplerKind::Borderline1,
        SamplerKind::Borderline2,
        SamplerKind::Adasyn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Loras => "loras",
            SamplerKind::Smote => "smote",
            SamplerKind::Borderline1 => "borderline1",
            SamplerKind::Borderline2 => "borderline2",
            SamplerKind::Adasyn => "adasyn",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown sampler {s:?}")))
    }
}

/// Where a synthetic sample came from. `parent` is a dataset row index; for
/// LoRAS it identifies the neighborhood, for segment samplers the segment start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub origin: SamplerKind,
    pub parent: usize,
    /// Segment end row for SMOTE-family samples.
    pub partner: Option<usize>,
    /// Interpolation step along `parent -> partner`.
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSet {
    /// g x |F| generated points.
    pub samples: Array2<f64>,
    pub provenance: Vec<Provenance>,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl SyntheticSet {
    pub fn empty(f_count: usize, seed: u64) -> Self {
        Self {
            samples: Array2::zeros((0, f_count)),
            provenance: Vec::new(),
            seed,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn from_rows(rows: Vec<Vec<f64>>, provenance: Vec<Provenance>, f_count: usize, seed: u64) -> Self {
        let g = rows.len();
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        Self {
            samples: Array2::from_shape_vec((g, f_count), flat).expect("rows have |F| entries"),
            provenance,
            seed,
            warnings: Vec::new(),
        }
    }
}

/// Optional overrides on top of the resolved LoRAS defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LorasOverrides {
    pub k: Option<usize>,
    pub num_shadow: Option<usize>,
    /// Constant noise standard deviation for every feature.
    pub sigma: Option<f64>,
    /// Noise as this multiple of each feature's minority standard deviation.
    pub sigma_relative: Option<f64>,
    pub n_aff: Option<usize>,
    pub n_gen: Option<usize>,
    pub embedding: Option<EmbeddingChoice>,
    pub perplexity: Option<f64>,
    pub exact_balance: bool,
}

impl LorasOverrides {
    pub fn resolve(&self, d: &Dataset, s: &ClassSplit) -> Result<LorasParams> {
        let mut p = resolve_defaults(d, s)?;
        if let Some(k) = self.k {
            p.k = k;
        }
        if let Some(v) = self.num_shadow {
            p.num_shadow = v;
        }
        if let Some(sigma) = self.sigma {
            p.sigma_list = vec![sigma; d.f_count()];
        }
        if let Some(scale) = self.sigma_relative {
            p.sigma_list = relative_sigma_list(d, s, scale);
        }
        if let Some(v) = self.n_aff {
            p.n_aff = v;
        } else {
            // keep the default cap consistent with an overridden k or num_shadow
            p.n_aff = p.n_aff.min((p.k * p.num_shadow).saturating_sub(1)).max(2);
        }
        if let Some(v) = self.n_gen {
            p.n_gen = v;
        }
        if let Some(e) = self.embedding {
            p.embedding = e;
        }
        if let Some(v) = self.perplexity {
            p.perplexity = v;
        }
        p.exact_balance = self.exact_balance;
        Ok(p)
    }
}

/// A sampler choice with its parameters. SMOTE-family samplers generate
/// `total` points, defaulting to |C_maj| - |C_min|; the neighborhood size
/// defaults to the same rule LoRAS uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum Sampler {
    Loras(LorasOverrides),
    Smote {
        #[serde(default)]
        k: Option<usize>,
        #[serde(default)]
        total: Option<usize>,
    },
    Borderline1 {
        #[serde(default)]
        k: Option<usize>,
        #[serde(default)]
        total: Option<usize>,
    },
    Borderline2 {
        #[serde(default)]
        k: Option<usize>,
        #[serde(default)]
        total: Option<usize>,
    },
    Adasyn {
        #[serde(default)]
        k: Option<usize>,
        #[serde(default)]
        total: Option<usize>,
    },
}

impl Sampler {
    /// Default configuration for a sampler kind.
    pub fn from_kind(kind: SamplerKind) -> Self {
        match kind {
            SamplerKind::Loras => Sampler::Loras(LorasOverrides::default()),
            SamplerKind::Smote => Sampler::Smote { k: None, total: None },
            SamplerKind::Borderline1 => Sampler::Borderline1 { k: None, total: None },
            SamplerKind::Borderline2 => Sampler::Borderline2 { k: None, total: None },
            SamplerKind::Adasyn => Sampler::Adasyn { k: None, total: None },
        }
    }

    pub fn kind(&self) -> SamplerKind {
        match self {
            Sampler::Loras(_) => SamplerKind::Loras,
            Sampler::Smote { .. } => SamplerKind::Smote,
            Sampler::Borderline1 { .. } => SamplerKind::Borderline1,
            Sampler::Borderline2 { .. } => SamplerKind::Borderline2,
            Sampler::Adasyn { .. } => SamplerKind::Adasyn,
        }
    }

    pub fn oversample(&self, d: &Dataset, s: &ClassSplit, seed: u64) -> Result<SyntheticSet> {
        let balance = s.majority_count().saturating_sub(s.minority_count());
        let k_default = default_neighborhood_size(s.minority_count());
        match self {
            Sampler::Loras(overrides) => loras_oversample(d, s, &overrides.resolve(d, s)?, seed),
            Sampler::Smote { k, total } => {
                smote_oversample(d, s, k.unwrap_or(k_default), total.unwrap_or(balance), seed)
            }
            Sampler::Borderline1 { k, total } => borderline_smote(
                d,
                s,
                k.unwrap_or(k_default),
                BorderlineVariant::One,
                total.unwrap_or(balance),
                seed,
            ),
            Sampler::Borderline2 { k, total } => borderline_smote(
                d,
                s,
                k.unwrap_or(k_default),
                BorderlineVariant::Two,
                total.unwrap_or(balance),
                seed,
            ),
            Sampler::Adasyn { k, total } => adasyn(d, s, k.unwrap_or(k_default), total.unwrap_or(balance), seed),
        }
    }
}

/// Clamps `k` to |C_min| - 1, recording a warning when it does.
pub(crate) fn clamp_k(k: usize, minority: usize, warnings: &mut Vec<String>) -> usize {
    if k + 1 > minority {
        let clamped = minority.saturating_sub(1);
        let msg = format!("k = {k} exceeds minority size - 1; clamped to {clamped}");
        log::warn!("{msg}");
        warnings.push(msg);
        clamped
    } else {
        k
    }
}

pub(crate) fn require_minority(s: &ClassSplit, needed: usize) -> Result<()> {
    if s.minority_count() < needed {
        return Err(Error::EmptyMinority {
            needed,
            found: s.minority_count(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trips_through_name() {
        for kind in SamplerKind::ALL {
            assert_eq!(kind.name().parse::<SamplerKind>().unwrap(), kind);
        }
        assert!("svm-smote".parse::<SamplerKind>().is_err());
    }

    #[test]
    fn sampler_config_json() {
        let s: Sampler = serde_json::from_str(r#"{"name":"loras","n_aff":4,"exact_balance":true}"#).unwrap();
        assert_eq!(s.kind(), SamplerKind::Loras);
        let s: Sampler = serde_json::from_str(r#"{"name":"smote","k":3}"#).unwrap();
        assert_eq!(s, Sampler::Smote { k: Some(3), total: None });
        assert!(serde_json::from_str::<Sampler>(r#"{"name":"loras","bogus":1}"#).is_err());
    }
}
