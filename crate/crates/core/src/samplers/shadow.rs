use ndarray::ArrayView1;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// A minority point perturbed by independent per-feature Gaussian noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shadowsample {
    pub vector: Vec<f64>,
    /// Dataset row the sample was drawn around.
    pub parent: usize,
}

/// `count` shadowsamples around `parent_vec`; feature `f` receives noise with
/// standard deviation `sigma_list[f]`. Zero deviations are allowed and copy
/// the parent value.
pub fn make_shadowsamples<R: Rng + ?Sized>(
    parent_vec: ArrayView1<'_, f64>,
    parent_idx: usize,
    count: usize,
    sigma_list: &[f64],
    rng: &mut R,
) -> Vec<Shadowsample> {
    assert_eq!(parent_vec.len(), sigma_list.len(), "one sigma per feature");
    (0..count)
        .map(|_| {
            let vector = parent_vec
                .iter()
                .zip(sigma_list)
                .map(|(&x, &sigma)| {
                    let z: f64 = StandardNormal.sample(rng);
                    x + sigma * z
                })
                .collect();
            Shadowsample {
                vector,
                parent: parent_idx,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use ndarray::array;

    #[test]
    fn zero_noise_copies_parent() {
        let parent = array![1.5, -2.0, 7.25];
        let mut rng = substream(0, &[]);
        let shadows = make_shadowsamples(parent.view(), 4, 10, &[0.0; 3], &mut rng);
        assert_eq!(shadows.len(), 10);
        for s in shadows {
            assert_eq!(s.vector, vec![1.5, -2.0, 7.25]);
            assert_eq!(s.parent, 4);
        }
    }

    #[test]
    fn spread_matches_sigma() {
        // sample sd of 40 normal draws with sigma = 0.005: 39 s^2 / sigma^2 ~ chi2(39);
        // [0.003, 0.007] covers chi2 in [14.0, 76.4], probability > 0.9999
        let parent = array![0.0, 10.0, -3.0];
        let mut rng = substream(11, &[]);
        for _ in 0..50 {
            let shadows = make_shadowsamples(parent.view(), 0, 40, &[0.005; 3], &mut rng);
            for f in 0..3 {
                let vals: Vec<f64> = shadows.iter().map(|s| s.vector[f]).collect();
                let mean = vals.iter().sum::<f64>() / 40.0;
                let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 39.0).sqrt();
                assert!((0.003..=0.007).contains(&sd), "sd {sd}");
            }
        }
    }
}
