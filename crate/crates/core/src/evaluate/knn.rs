use ndarray::ArrayView2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::neighbors::{nearest_k, Metric};

/// Neighbor count for classification: 10 below 100 minority rows, 30 otherwise.
pub fn default_knn_k(minority_count: usize) -> usize {
    if minority_count < 100 {
        10
    } else {
        30
    }
}

/// Majority vote among the `k` nearest training rows. A tied vote goes to label 0.
pub fn knn_classify(
    train_x: ArrayView2<'_, f64>,
    train_y: &[u8],
    test_x: ArrayView2<'_, f64>,
    k: usize,
    metric: Metric,
) -> Result<Vec<u8>> {
    if k == 0 || k > train_x.nrows() {
        return Err(Error::KTooLarge {
            k,
            available: train_x.nrows(),
        });
    }
    if train_y.len() != train_x.nrows() {
        return Err(Error::invalid("training labels and rows differ in length"));
    }
    Ok((0..test_x.nrows())
        .into_par_iter()
        .map(|i| {
            let ones = nearest_k(train_x, test_x.row(i), k, metric, None)
                .into_iter()
                .filter(|&j| train_y[j] == 1)
                .count();
            u8::from(2 * ones > k)
        })
        .collect())
}
