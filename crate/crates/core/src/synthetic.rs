//! Generated datasets for examples and tests.

use ndarray::Array2;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::Dataset;
use crate::rng::substream;

/// `n` rows with `minority` of them labeled 1. Both classes are unit-variance
/// Gaussians in `f` dimensions; the minority mean sits at euclidean distance
/// `separation` from the majority mean at the origin, along the diagonal.
/// Minority rows come first.
pub fn two_gaussians(n: usize, minority: usize, f: usize, separation: f64, seed: u64) -> Dataset {
    assert!(minority >= 1 && minority < n, "need 1 <= minority < n");
    let mut rng = substream(seed, &[]);
    let shift = separation / (f as f64).sqrt();
    let features = Array2::from_shape_fn((n, f), |(i, _)| {
        let z: f64 = StandardNormal.sample(&mut rng);
        if i < minority {
            z + shift
        } else {
            z
        }
    });
    let labels = (0..n).map(|i| u8::from(i < minority)).collect();
    Dataset::new(features, labels, Dataset::default_feature_names(f)).expect("generated data is valid")
}

/// Same class sizes and width as the abalone age-19 task: 4177 rows, 32
/// minority, 10 features.
pub fn abalone_shaped(seed: u64) -> Dataset {
    two_gaussians(4177, 32, 10, 2.0, seed)
}
