use rand::Rng;

use super::{clamp_k, require_minority, Provenance, SamplerKind, SyntheticSet};
use crate::dataset::{ClassSplit, Dataset};
use crate::error::Result;
use crate::neighbors::{knn_indices, Metric};
use crate::rng::{substream, StreamRng};

/// `parent + lambda * (partner - parent)`.
pub(crate) fn interpolate(d: &Dataset, parent: usize, partner: usize, lambda: f64) -> Vec<f64> {
    d.row(parent)
        .iter()
        .zip(d.row(partner).iter())
        .map(|(&x, &y)| x + lambda * (y - x))
        .collect()
}

/// k nearest minority neighbors of every minority row, as dataset row indices
/// keyed by position in `s.minority_idx`.
pub(crate) fn minority_knn(d: &Dataset, s: &ClassSplit, k: usize) -> Result<Vec<Vec<usize>>> {
    let rows = d.select_features(&s.minority_idx);
    Ok(knn_indices(rows.view(), k, Metric::Euclidean)?
        .into_iter()
        .map(|nbrs| nbrs.into_iter().map(|j| s.minority_idx[j]).collect())
        .collect())
}

/// Collects segment samples into a set.
pub(crate) struct SegmentSamples {
    rows: Vec<Vec<f64>>,
    provenance: Vec<Provenance>,
    origin: SamplerKind,
}

impl SegmentSamples {
    pub(crate) fn new(origin: SamplerKind, capacity: usize) -> Self {
        Self {
            rows: Vec::with_capacity(capacity),
            provenance: Vec::with_capacity(capacity),
            origin,
        }
    }

    pub(crate) fn push(&mut self, d: &Dataset, parent: usize, partner: usize, lambda: f64) {
        self.rows.push(interpolate(d, parent, partner, lambda));
        self.provenance.push(Provenance {
            origin: self.origin,
            parent,
            partner: Some(partner),
            lambda: Some(lambda),
        });
    }

    pub(crate) fn finish(self, f_count: usize, seed: u64, warnings: Vec<String>) -> SyntheticSet {
        let mut set = SyntheticSet::from_rows(self.rows, self.provenance, f_count, seed);
        set.warnings = warnings;
        set
    }
}

/// Plain SMOTE: `total` points, each on the segment from a uniformly chosen
/// minority row to one of its k nearest minority neighbors, step uniform in
/// [0, 1).
pub fn smote_oversample(d: &Dataset, s: &ClassSplit, k: usize, total: usize, seed: u64) -> Result<SyntheticSet> {
    smote_with(d, s, k, total, seed, SamplerKind::Smote, &mut |rng| rng.random::<f64>())
}

pub(crate) fn smote_with(
    d: &Dataset,
    s: &ClassSplit,
    k: usize,
    total: usize,
    seed: u64,
    origin: SamplerKind,
    lambda: &mut dyn FnMut(&mut StreamRng) -> f64,
) -> Result<SyntheticSet> {
    require_minority(s, 2)?;
    let mut warnings = Vec::new();
    let k = clamp_k(k.max(1), s.minority_count(), &mut warnings);
    let nbrs = minority_knn(d, s, k)?;
    let mut rng = substream(seed, &[]);
    let mut out = SegmentSamples::new(origin, total);
    for _ in 0..total {
        let p = rng.random_range(0..s.minority_count());
        let partner = nbrs[p][rng.random_range(0..k)];
        let step = lambda(&mut rng);
        out.push(d, s.minority_idx[p], partner, step);
    }
    Ok(out.finish(d.f_count(), seed, warnings))
}
