//! Distance metrics, exact k-nearest-neighbor search, and minority-class
//! neighborhoods.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassSplit, Dataset};
use crate::embedding::{tsne_embed, TsneConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
    Minkowski(f64),
}

impl Metric {
    pub fn minkowski(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::invalid(format!("minkowski p must be finite and >= 1, got {p}")));
        }
        Ok(Metric::Minkowski(p))
    }

    pub fn distance(&self, a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
        let diffs = a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs());
        match *self {
            Metric::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::Manhattan => diffs.sum(),
            Metric::Minkowski(p) => diffs.map(|d| d.powf(p)).sum::<f64>().powf(p.recip()),
        }
    }
}

/// Full distance matrix. Rows are computed in parallel; each entry depends only
/// on its pair of points.
pub fn pairwise_distances(points: ArrayView2<'_, f64>, metric: Metric) -> Array2<f64> {
    let m = points.nrows();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| if i == j { 0.0 } else { metric.distance(points.row(i), points.row(j)) })
                .collect()
        })
        .collect();
    Array2::from_shape_fn((m, m), |(i, j)| rows[i][j])
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// The `k` smallest `(distance, index)` pairs, ascending; ties by index.
fn smallest_k(mut candidates: Vec<(f64, usize)>, k: usize) -> Vec<usize> {
    if k == 0 {
        return Vec::new();
    }
    if k < candidates.len() {
        candidates.select_nth_unstable_by(k - 1, by_distance_then_index);
        candidates.truncate(k);
    }
    candidates.sort_unstable_by(by_distance_then_index);
    candidates.into_iter().map(|(_, i)| i).collect()
}

/// Indices of the `k` rows of `reference` nearest to `query`, optionally
/// skipping one reference row (the query itself).
pub fn nearest_k(
    reference: ArrayView2<'_, f64>,
    query: ArrayView1<'_, f64>,
    k: usize,
    metric: Metric,
    skip: Option<usize>,
) -> Vec<usize> {
    let candidates = (0..reference.nrows())
        .filter(|&j| Some(j) != skip)
        .map(|j| (metric.distance(query, reference.row(j)), j))
        .collect();
    smallest_k(candidates, k)
}

/// Per row, the `k` nearest other rows sorted by ascending distance.
pub fn knn_indices(points: ArrayView2<'_, f64>, k: usize, metric: Metric) -> Result<Vec<Vec<usize>>> {
    let m = points.nrows();
    if k + 1 > m {
        return Err(Error::KTooLarge {
            k,
            available: m.saturating_sub(1),
        });
    }
    Ok((0..m)
        .into_par_iter()
        .map(|i| nearest_k(points, points.row(i), k, metric, Some(i)))
        .collect())
}

/// Space in which minority neighborhoods are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingChoice {
    /// Original feature space.
    #[default]
    Regular,
    /// 2-D t-SNE embedding of the minority class.
    TEmbedding,
}

impl fmt::Display for EmbeddingChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            EmbeddingChoice::Regular => "regular",
            EmbeddingChoice::TEmbedding => "t-embedding",
        })
    }
}

impl FromStr for EmbeddingChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular" => Ok(EmbeddingChoice::Regular),
            "t-embedding" | "tsne" => Ok(EmbeddingChoice::TEmbedding),
            other => Err(Error::invalid(format!("unknown embedding {other:?}"))),
        }
    }
}

/// A minority parent and its nearest minority neighbors, parent last.
/// All indices refer to rows of the original dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub parent: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhoods {
    /// One entry per minority row, in `ClassSplit::minority_idx` order.
    pub items: Vec<Neighborhood>,
    /// Neighbor count actually used after clamping.
    pub k: usize,
    pub warnings: Vec<String>,
}

/// Neighborhood of every minority point. With `TEmbedding`, the minority rows
/// are embedded in 2-D first and neighbors are found by euclidean distance in
/// the plane.
pub fn minority_neighborhoods(
    d: &Dataset,
    s: &ClassSplit,
    k: usize,
    embedding: EmbeddingChoice,
    perplexity: f64,
    seed: u64,
) -> Result<Neighborhoods> {
    let m = s.minority_count();
    if m < 2 {
        return Err(Error::EmptyMinority { needed: 2, found: m });
    }
    let mut warnings = Vec::new();
    let k_eff = if k > m - 1 {
        let msg = format!("k = {k} exceeds minority size - 1; clamped to {}", m - 1);
        log::warn!("{msg}");
        warnings.push(msg);
        m - 1
    } else {
        k
    };
    let minority = d.select_features(&s.minority_idx);
    let search_space = match embedding {
        EmbeddingChoice::Regular => minority,
        EmbeddingChoice::TEmbedding => {
            if perplexity >= m as f64 {
                return Err(Error::PerplexityTooLarge { perplexity, points: m });
            }
            let cfg = TsneConfig {
                perplexity,
                seed,
                ..TsneConfig::default()
            };
            let emb = tsne_embed(minority.view(), &cfg)?;
            warnings.extend(emb.warnings);
            emb.coords
        }
    };
    let metric = Metric::Euclidean;
    let local = knn_indices(search_space.view(), k_eff, metric)?;
    let items = local
        .into_iter()
        .enumerate()
        .map(|(p, nbrs)| {
            let mut members: Vec<usize> = nbrs.into_iter().map(|j| s.minority_idx[j]).collect();
            members.push(s.minority_idx[p]);
            Neighborhood {
                parent: s.minority_idx[p],
                members,
            }
        })
        .collect();
    Ok(Neighborhoods {
        items,
        k: k_eff,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    /// Full sort over a precomputed distance matrix.
    fn naive_knn(points: ArrayView2<'_, f64>, k: usize, metric: Metric) -> Vec<Vec<usize>> {
        let dist = pairwise_distances(points, metric);
        (0..points.nrows())
            .map(|i| {
                let mut order: Vec<usize> = (0..points.nrows()).filter(|&j| j != i).collect();
                order.sort_by(|&a, &b| dist[[i, a]].partial_cmp(&dist[[i, b]]).unwrap().then(a.cmp(&b)));
                order.truncate(k);
                order
            })
            .collect()
    }

    #[test]
    fn distance_examples() {
        let pts = array![[0.0, 0.0], [3.0, 4.0]];
        assert_eq!(pairwise_distances(pts.view(), Metric::Euclidean), array![[0.0, 5.0], [5.0, 0.0]]);
        assert_eq!(pairwise_distances(pts.view(), Metric::Manhattan), array![[0.0, 7.0], [7.0, 0.0]]);
    }

    #[test]
    fn minkowski_two_matches_euclidean() {
        let pts = array![
            [0.3, -1.2, 4.0],
            [2.5, 0.1, -0.7],
            [-3.3, 2.2, 1.1],
            [0.0, 0.0, 0.0],
            [9.1, -4.4, 2.8]
        ];
        let a = pairwise_distances(pts.view(), Metric::minkowski(2.0).unwrap());
        let b = pairwise_distances(pts.view(), Metric::Euclidean);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() <= 1e-12);
        }
        for i in 0..5 {
            for j in 0..5 {
                assert!((a[[i, j]] - a[[j, i]]).abs() <= 1e-12);
            }
        }
        assert!(Metric::minkowski(0.5).is_err());
        assert!(Metric::minkowski(f64::INFINITY).is_err());
    }

    #[test]
    fn knn_examples() {
        let pts = array![[0.0], [1.0], [10.0]];
        assert_eq!(knn_indices(pts.view(), 1, Metric::Euclidean).unwrap(), vec![vec![1], vec![0], vec![1]]);
        let all = knn_indices(pts.view(), 2, Metric::Euclidean).unwrap();
        for (i, row) in all.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort();
            let expect: Vec<usize> = (0..3).filter(|&j| j != i).collect();
            assert_eq!(sorted, expect);
        }
        assert!(matches!(knn_indices(pts.view(), 3, Metric::Euclidean), Err(Error::KTooLarge { .. })));
    }

    #[test]
    fn knn_ties_prefer_lower_index() {
        let pts = array![[5.0], [0.0], [0.0], [0.0], [1.0]];
        let nn = knn_indices(pts.view(), 3, Metric::Euclidean).unwrap();
        assert_eq!(nn[1], vec![2, 3, 4]);
        assert_eq!(nn[3], vec![1, 2, 4]);
    }

    fn split_all_minority(n: usize) -> (Dataset, ClassSplit) {
        let features = Array2::from_shape_fn((n + 1, 1), |(i, _)| i as f64);
        let mut labels = vec![1u8; n];
        labels.push(0);
        let d = Dataset::new(features, labels, vec!["x".into()]).unwrap();
        let s = ClassSplit::with_minority_label(d.labels(), 1);
        (d, s)
    }

    #[test]
    fn neighborhoods_clamp_k() {
        let (d, s) = split_all_minority(3);
        let nb = minority_neighborhoods(&d, &s, 5, EmbeddingChoice::Regular, 30.0, 0).unwrap();
        assert_eq!(nb.k, 2);
        assert_eq!(nb.warnings.len(), 1);
        assert!(nb.items.iter().all(|n| n.members.len() == 3));
    }

    #[test]
    fn neighborhoods_pair_close_points() {
        let d = Dataset::new(
            array![[0.0], [50.0], [1.0], [10.0], [11.0]],
            vec![1, 0, 1, 1, 1],
            vec!["x".into()],
        )
        .unwrap();
        let s = ClassSplit::with_minority_label(d.labels(), 1);
        let nb = minority_neighborhoods(&d, &s, 1, EmbeddingChoice::Regular, 30.0, 0).unwrap();
        let members: Vec<Vec<usize>> = nb.items.iter().map(|n| n.members.clone()).collect();
        assert_eq!(members, vec![vec![2, 0], vec![0, 2], vec![4, 3], vec![3, 4]]);
    }

    #[test]
    fn t_embedding_neighborhoods_keep_invariants() {
        let mut rows = Vec::new();
        for c in 0..2 {
            for i in 0..8 {
                rows.push([c as f64 * 100.0 + (i as f64 * 0.37).sin(), (i as f64 * 0.91).cos()]);
            }
        }
        rows.push([500.0, 500.0]);
        let features = Array2::from_shape_fn((17, 2), |(i, j)| rows[i][j]);
        let mut labels = vec![1u8; 16];
        labels.push(0);
        let d = Dataset::new(features, labels, Dataset::default_feature_names(2)).unwrap();
        let s = ClassSplit::with_minority_label(d.labels(), 1);
        let nb = minority_neighborhoods(&d, &s, 3, EmbeddingChoice::TEmbedding, 5.0, 3).unwrap();
        assert_eq!(nb.items.len(), 16);
        for n in &nb.items {
            assert_eq!(n.members.len(), 4);
            assert_eq!(n.members.last(), Some(&n.parent));
            let mut sorted = n.members.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 4);
            // neighbors stay within the parent's cluster
            assert!(n.members.iter().all(|&m| (m < 8) == (n.parent < 8)));
        }
        let again = minority_neighborhoods(&d, &s, 3, EmbeddingChoice::TEmbedding, 5.0, 3).unwrap();
        assert_eq!(nb, again);
        assert!(matches!(
            minority_neighborhoods(&d, &s, 3, EmbeddingChoice::TEmbedding, 16.0, 3),
            Err(Error::PerplexityTooLarge { .. })
        ));
    }

    proptest! {
        #[test]
        fn knn_matches_full_sort(
            m in 2usize..200,
            dims in 1usize..4,
            seed in any::<u64>(),
            kind in 0u8..3,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // coarse grid values make exact ties common
            let pts = Array2::from_shape_fn((m, dims), |_| rng.random_range(0..5) as f64);
            let metric = match kind { 0 => Metric::Euclidean, 1 => Metric::Manhattan, _ => Metric::Minkowski(3.0) };
            let k = rng.random_range(1..m);
            prop_assert_eq!(knn_indices(pts.view(), k, metric).unwrap(), naive_knn(pts.view(), k, metric));
        }
    }
}
