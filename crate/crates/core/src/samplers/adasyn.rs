//! Adaptive synthetic sampling: minority points with more majority neighbors
//! receive proportionally more synthetic samples.

use rand::Rng;

use super::borderline::classify_borderline;
use super::smote::{minority_knn, smote_with, SegmentSamples};
use super::{clamp_k, require_minority, SamplerKind, SyntheticSet};
use crate::dataset::{ClassSplit, Dataset};
use crate::error::Result;
use crate::rng::substream;

/// Splits `total` in proportion to `ratios`, rounding each share to the
/// nearest integer. The rounding residue goes to the highest ratios first (or
/// is taken from the lowest nonzero allocations) so the result sums to `total`.
/// Ties are broken by index.
pub fn adasyn_allocation(ratios: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = ratios.iter().sum();
    if sum <= 0.0 {
        return vec![0; ratios.len()];
    }
    let mut alloc: Vec<usize> = ratios
        .iter()
        .map(|r| (total as f64 * r / sum).round() as usize)
        .collect();
    let mut by_ratio: Vec<usize> = (0..ratios.len()).collect();
    by_ratio.sort_by(|&a, &b| ratios[b].total_cmp(&ratios[a]).then(a.cmp(&b)));
    let assigned: usize = alloc.iter().sum();
    if assigned < total {
        let eligible: Vec<usize> = by_ratio.iter().copied().filter(|&i| ratios[i] > 0.0).collect();
        for step in 0..(total - assigned) {
            alloc[eligible[step % eligible.len()]] += 1;
        }
    } else {
        let mut excess = assigned - total;
        while excess > 0 {
            for &i in by_ratio.iter().rev() {
                if excess > 0 && alloc[i] > 0 {
                    alloc[i] -= 1;
                    excess -= 1;
                }
            }
        }
    }
    alloc
}

pub fn adasyn(d: &Dataset, s: &ClassSplit, k: usize, total: usize, seed: u64) -> Result<SyntheticSet> {
    require_minority(s, 2)?;
    let k = k.max(1);
    let kinds = classify_borderline(d, s, k);
    let ratios: Vec<f64> = kinds
        .iter()
        .map(|(_, nbrs)| {
            let majority = nbrs.iter().filter(|&&j| d.labels()[j] != s.minority_label).count();
            majority as f64 / nbrs.len() as f64
        })
        .collect();
    if ratios.iter().sum::<f64>() == 0.0 {
        let msg = "no minority point has majority neighbors; falling back to plain SMOTE".to_string();
        log::warn!("{msg}");
        let mut set = smote_with(d, s, k, total, seed, SamplerKind::Adasyn, &mut |rng| rng.random::<f64>())?;
        set.warnings.insert(0, msg);
        return Ok(set);
    }

    let alloc = adasyn_allocation(&ratios, total);
    let mut warnings = Vec::new();
    let k_min = clamp_k(k, s.minority_count(), &mut warnings);
    let nbrs = minority_knn(d, s, k_min)?;
    let mut rng = substream(seed, &[]);
    let mut out = SegmentSamples::new(SamplerKind::Adasyn, total);
    for (p, &count) in alloc.iter().enumerate() {
        for _ in 0..count {
            let partner = nbrs[p][rng.random_range(0..k_min)];
            out.push(d, s.minority_idx[p], partner, rng.random::<f64>());
        }
    }
    Ok(out.finish(d.f_count(), seed, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::class_split;
    use ndarray::{array, Array2};

    #[test]
    fn allocation_examples() {
        assert_eq!(adasyn_allocation(&[0.2, 0.8], 10), vec![2, 8]);
        assert_eq!(adasyn_allocation(&[0.0, 1.0], 7), vec![0, 7]);
        // thirds of 10 round to 3 each; the residue goes to the highest ratio (index order on ties)
        assert_eq!(adasyn_allocation(&[1.0, 1.0, 1.0], 10), vec![4, 3, 3]);
        // halves of 5 round up to 3 each; the excess leaves the lowest ratio
        assert_eq!(adasyn_allocation(&[0.5, 0.5], 5), vec![3, 2]);
        assert_eq!(adasyn_allocation(&[0.0, 0.0], 5), vec![0, 0]);
    }

    #[test]
    fn counts_and_zero_ratio_points() {
        // rows 0, 1 are minority deep inside their own cluster; row 2 borders the majority
        let d = Dataset::new(
            array![[0.0], [0.1], [0.2], [5.0], [5.1], [5.2], [5.3], [0.25], [0.3]],
            vec![1, 1, 1, 0, 0, 0, 0, 0, 0],
            vec!["x".into()],
        )
        .unwrap();
        let s = class_split(&d);
        let set = adasyn(&d, &s, 2, 12, 3).unwrap();
        assert_eq!(set.len(), 12);
        // row 0's two nearest neighbors are both minority, so it gets nothing
        assert!(set.provenance.iter().all(|p| p.parent != 0));
    }

    #[test]
    fn pure_minority_region_falls_back() {
        let d = Dataset::new(
            Array2::from_shape_fn((12, 1), |(i, _)| if i < 4 { i as f64 } else { 100.0 + i as f64 }),
            (0..12).map(|i| u8::from(i < 4)).collect(),
            vec!["x".into()],
        )
        .unwrap();
        let s = class_split(&d);
        let set = adasyn(&d, &s, 2, 9, 0).unwrap();
        assert_eq!(set.len(), 9);
        assert!(set.warnings[0].contains("falling back"));
    }
}
