//! Borderline SMOTE: oversampling restricted to minority points near the
//! class boundary.
//!
//! A minority point is classified by its k nearest neighbors in the full
//! dataset: NOISE if all of them are majority, DANGER if more than half but
//! not all are, SAFE otherwise. Only DANGER points seed new samples. Variant 1
//! interpolates toward minority neighbors with a step in [0, 1). Variant 2
//! flips a fair coin per sample between that and a step in [0, 0.5) toward
//! one of the point's majority neighbors.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::smote::{minority_knn, smote_with, SegmentSamples};
use super::{clamp_k, require_minority, SamplerKind, SyntheticSet};
use crate::dataset::{ClassSplit, Dataset};
use crate::error::Result;
use crate::neighbors::{nearest_k, Metric};
use crate::rng::substream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BorderlineVariant {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Safe,
    Danger,
    Noise,
}

/// Full-dataset neighbors of each minority row and their classification.
pub fn classify_borderline(d: &Dataset, s: &ClassSplit, k: usize) -> Vec<(PointKind, Vec<usize>)> {
    let k = k.min(d.n() - 1);
    s.minority_idx
        .iter()
        .map(|&i| {
            let nbrs = nearest_k(d.features(), d.row(i), k, Metric::Euclidean, Some(i));
            let majority = nbrs.iter().filter(|&&j| d.labels()[j] != s.minority_label).count();
            let kind = if majority == k {
                PointKind::Noise
            } else if 2 * majority > k {
                PointKind::Danger
            } else {
                PointKind::Safe
            };
            (kind, nbrs)
        })
        .collect()
}

pub fn borderline_smote(
    d: &Dataset,
    s: &ClassSplit,
    k: usize,
    variant: BorderlineVariant,
    total: usize,
    seed: u64,
) -> Result<SyntheticSet> {
    require_minority(s, 2)?;
    let origin = match variant {
        BorderlineVariant::One => SamplerKind::Borderline1,
        BorderlineVariant::Two => SamplerKind::Borderline2,
    };
    let k = k.max(1);
    let kinds = classify_borderline(d, s, k);
    let danger: Vec<usize> = (0..kinds.len()).filter(|&p| kinds[p].0 == PointKind::Danger).collect();
    if danger.is_empty() {
        let msg = "no DANGER minority points; falling back to plain SMOTE".to_string();
        log::warn!("{msg}");
        let mut set = smote_with(d, s, k, total, seed, origin, &mut |rng| rng.random::<f64>())?;
        set.warnings.insert(0, msg);
        return Ok(set);
    }

    let mut warnings = Vec::new();
    let k_min = clamp_k(k, s.minority_count(), &mut warnings);
    let minority_nbrs = minority_knn(d, s, k_min)?;
    let mut rng = substream(seed, &[]);
    let mut out = SegmentSamples::new(origin, total);
    for _ in 0..total {
        let p = danger[rng.random_range(0..danger.len())];
        let parent = s.minority_idx[p];
        let toward_majority = variant == BorderlineVariant::Two && rng.random_bool(0.5);
        if toward_majority {
            let majority: Vec<usize> = kinds[p]
                .1
                .iter()
                .copied()
                .filter(|&j| d.labels()[j] != s.minority_label)
                .collect();
            let partner = majority[rng.random_range(0..majority.len())];
            out.push(d, parent, partner, 0.5 * rng.random::<f64>());
        } else {
            let partner = minority_nbrs[p][rng.random_range(0..k_min)];
            out.push(d, parent, partner, rng.random::<f64>());
        }
    }
    Ok(out.finish(d.f_count(), seed, warnings))
}
