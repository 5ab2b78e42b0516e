use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

const CONVERGENCE_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 1000;
/// Eigenvalues below this fraction of the total variance count as zero.
const RANK_TOL: f64 = 1e-12;

/// Principal components fitted by power iteration with deflation.
#[derive(Debug, Clone, PartialEq)]
pub struct Pca {
    pub mean: Array1<f64>,
    /// dims x d, one unit-norm component per row (zero rows for a
    /// rank-deficient tail).
    pub components: Array2<f64>,
    pub explained_variance: Vec<f64>,
}

impl Pca {
    pub fn fit(points: ArrayView2<'_, f64>, dims: usize) -> Result<Pca> {
        let (m, d) = points.dim();
        if m < 2 {
            return Err(Error::invalid(format!("PCA needs at least 2 rows, got {m}")));
        }
        if dims == 0 || dims > m.min(d) {
            return Err(Error::invalid(format!(
                "cannot extract {dims} components from {m} x {d} data"
            )));
        }
        let mean = points.mean_axis(Axis(0)).expect("m >= 2");
        let centered = &points - &mean;
        let cov = centered.t().dot(&centered) / (m as f64 - 1.0);
        let trace: f64 = cov.diag().sum();

        let mut components = Array2::zeros((dims, d));
        let mut explained_variance = Vec::with_capacity(dims);
        let mut found: Vec<Array1<f64>> = Vec::new();
        for c in 0..dims {
            let (vector, value) = dominant_orthogonal(&cov, &found);
            match vector {
                Some(v) if value > RANK_TOL * trace.max(f64::MIN_POSITIVE) => {
                    components.row_mut(c).assign(&v);
                    explained_variance.push(value);
                    found.push(v);
                }
                _ => explained_variance.push(0.0),
            }
        }
        Ok(Pca {
            mean,
            components,
            explained_variance,
        })
    }

    pub fn transform(&self, points: ArrayView2<'_, f64>) -> Array2<f64> {
        (&points - &self.mean).dot(&self.components.t())
    }

    /// Maps projected coordinates back to the original (uncentered) space.
    pub fn inverse_transform(&self, projected: ArrayView2<'_, f64>) -> Array2<f64> {
        projected.dot(&self.components) + &self.mean
    }
}

/// Two passes of Gram-Schmidt against `basis`.
fn orthogonalize(v: &mut Array1<f64>, basis: &[Array1<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let proj = v.dot(b);
            v.scaled_add(-proj, b);
        }
    }
}

/// Dominant eigenpair of `cov` restricted to the complement of `basis`.
fn dominant_orthogonal(cov: &Array2<f64>, basis: &[Array1<f64>]) -> (Option<Array1<f64>>, f64) {
    let d = cov.nrows();
    // residuals below this are rounding noise, not a direction
    let floor = RANK_TOL * cov.diag().sum().max(f64::MIN_POSITIVE);
    // start from the largest deflated column, which cannot be orthogonal to
    // the dominant remaining direction unless that direction carries no variance
    let mut start: Option<Array1<f64>> = None;
    let mut best = 0.0;
    for j in 0..d {
        let mut col = cov.column(j).to_owned();
        orthogonalize(&mut col, basis);
        let norm = col.dot(&col).sqrt();
        if norm > best && norm > floor {
            best = norm;
            start = Some(col / norm);
        }
    }
    let Some(mut v) = start else {
        return (None, 0.0);
    };
    for _ in 0..MAX_ITERATIONS {
        let mut w = cov.dot(&v);
        orthogonalize(&mut w, basis);
        let norm = w.dot(&w).sqrt();
        if norm <= floor {
            return (None, 0.0);
        }
        w /= norm;
        let delta = (&w - &v).mapv(f64::abs).fold(0.0f64, |a, &b| a.max(b));
        v = w;
        if delta < CONVERGENCE_TOL {
            break;
        }
    }
    orthogonalize(&mut v, basis);
    let norm = v.dot(&v).sqrt();
    v /= norm;
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.mapv_inplace(|x| -x);
    }
    let rayleigh = v.dot(&cov.dot(&v));
    (Some(v), rayleigh)
}

/// Projects onto the top `dims` principal components of the centered data.
pub fn pca_project(points: ArrayView2<'_, f64>, dims: usize) -> Result<Array2<f64>> {
    Ok(Pca::fit(points, dims)?.transform(points))
}
