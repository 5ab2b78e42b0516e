//! Localized random affine shadowsample oversampling.
//!
//! For every minority parent the generator pools `num_shadow` Gaussian
//! shadowsamples around each member of the parent's neighborhood, then emits
//! `n_gen` points, each a Dirichlet(1, ..., 1) convex combination of `n_aff`
//! shadowsamples drawn without replacement from that pool.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use super::shadow::{make_shadowsamples, Shadowsample};
use super::simplex::draw_simplex_weights;
use super::{require_minority, LorasParams, Provenance, SamplerKind, SyntheticSet};
use crate::dataset::{ClassSplit, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::minority_neighborhoods;
use crate::rng::{derive_seed, substream, StreamRng};

const EMBEDDING_STREAM: u64 = u64::MAX;
const TOP_UP_STREAM: u64 = u64::MAX - 1;

/// Which shadowsamples formed one output point, and with which weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Index into `LorasTrace::pools`.
    pub neighborhood: usize,
    /// Indices into that neighborhood's pool.
    pub pool_indices: Vec<usize>,
    pub weights: Vec<f64>,
}

/// Full record of a LoRAS run: every shadow pool and, per output row, the
/// selection that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LorasTrace {
    pub pools: Vec<Vec<Shadowsample>>,
    pub selections: Vec<Selection>,
}

impl LorasTrace {
    /// Recomputes output row `i` from its recorded selection.
    pub fn reconstruct(&self, i: usize) -> Vec<f64> {
        let sel = &self.selections[i];
        let pool = &self.pools[sel.neighborhood];
        let f = pool[0].vector.len();
        let mut out = vec![0.0; f];
        for (&idx, &w) in sel.pool_indices.iter().zip(&sel.weights) {
            for (o, v) in out.iter_mut().zip(&pool[idx].vector) {
                *o += w * v;
            }
        }
        out
    }

    /// The `n_aff` shadowsamples combined into output row `i`.
    pub fn selected_points(&self, i: usize) -> Vec<&Shadowsample> {
        let sel = &self.selections[i];
        sel.pool_indices.iter().map(|&j| &self.pools[sel.neighborhood][j]).collect()
    }
}

struct NeighborhoodOutput {
    rows: Vec<Vec<f64>>,
    selections: Vec<Selection>,
    pool: Vec<Shadowsample>,
}

pub fn loras_oversample(d: &Dataset, s: &ClassSplit, p: &LorasParams, seed: u64) -> Result<SyntheticSet> {
    Ok(run(d, s, p, seed, false)?.0)
}

/// As [`loras_oversample`], also returning the pools and selections.
pub fn loras_oversample_traced(
    d: &Dataset,
    s: &ClassSplit,
    p: &LorasParams,
    seed: u64,
) -> Result<(SyntheticSet, LorasTrace)> {
    let (set, trace) = run(d, s, p, seed, true)?;
    Ok((set, trace.expect("trace requested")))
}

fn run(
    d: &Dataset,
    s: &ClassSplit,
    p: &LorasParams,
    seed: u64,
    keep_trace: bool,
) -> Result<(SyntheticSet, Option<LorasTrace>)> {
    require_minority(s, 2)?;
    p.validate(d.f_count())?;
    let hoods = minority_neighborhoods(
        d,
        s,
        p.k,
        p.embedding,
        p.perplexity,
        derive_seed(seed, &[EMBEDDING_STREAM]),
    )?;
    if p.n_aff >= hoods.k * p.num_shadow {
        return Err(Error::ConstraintViolated {
            n_aff: p.n_aff,
            k: hoods.k,
            num_shadow: p.num_shadow,
        });
    }

    let groups = hoods.items.len();
    let mut per_group = vec![p.n_gen; groups];
    if p.exact_balance {
        let target = s.majority_count().saturating_sub(s.minority_count());
        let shortfall = target.saturating_sub(groups * p.n_gen);
        let mut rng = substream(seed, &[TOP_UP_STREAM]);
        if shortfall <= groups {
            for g in index::sample(&mut rng, groups, shortfall) {
                per_group[g] += 1;
            }
        } else {
            for _ in 0..shortfall {
                per_group[rng.random_range(0..groups)] += 1;
            }
        }
    }

    let outputs: Vec<NeighborhoodOutput> = hoods
        .items
        .par_iter()
        .enumerate()
        .map(|(g, hood)| {
            let mut rng = substream(seed, &[g as u64]);
            generate_group(d, &hood.members, per_group[g], g, p, &mut rng, keep_trace)
        })
        .collect();

    let mut rows = Vec::new();
    let mut provenance = Vec::new();
    let mut pools = Vec::new();
    let mut selections = Vec::new();
    for (g, out) in outputs.into_iter().enumerate() {
        provenance.extend(std::iter::repeat_n(
            Provenance {
                origin: SamplerKind::Loras,
                parent: hoods.items[g].parent,
                partner: None,
                lambda: None,
            },
            out.rows.len(),
        ));
        rows.extend(out.rows);
        if keep_trace {
            pools.push(out.pool);
            selections.extend(out.selections);
        }
    }
    let mut set = SyntheticSet::from_rows(rows, provenance, d.f_count(), seed);
    set.warnings = hoods.warnings;
    let trace = keep_trace.then_some(LorasTrace { pools, selections });
    Ok((set, trace))
}

fn generate_group(
    d: &Dataset,
    members: &[usize],
    count: usize,
    group: usize,
    p: &LorasParams,
    rng: &mut StreamRng,
    keep_trace: bool,
) -> NeighborhoodOutput {
    let mut pool = Vec::with_capacity(members.len() * p.num_shadow);
    for &q in members {
        pool.extend(make_shadowsamples(d.row(q), q, p.num_shadow, &p.sigma_list, rng));
    }
    let f = d.f_count();
    let mut rows = Vec::with_capacity(count);
    let mut selections = Vec::new();
    for _ in 0..count {
        let chosen = index::sample(rng, pool.len(), p.n_aff).into_vec();
        let weights = draw_simplex_weights(p.n_aff, rng).alphas;
        let mut point = vec![0.0; f];
        for (&idx, &w) in chosen.iter().zip(&weights) {
            for (o, v) in point.iter_mut().zip(&pool[idx].vector) {
                *o += w * v;
            }
        }
        rows.push(point);
        if keep_trace {
            selections.push(Selection {
                neighborhood: group,
                pool_indices: chosen,
                weights,
            });
        }
    }
    if !keep_trace {
        pool.clear();
    }
    NeighborhoodOutput { rows, selections, pool }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::class_split;
    use crate::neighbors::EmbeddingChoice;
    use crate::samplers::resolve_defaults;
    use ndarray::{array, Array2};
    use rand::SeedableRng;

    fn blob(minority: usize, majority: usize, f: usize, seed: u64) -> Dataset {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = minority + majority;
        let features = Array2::from_shape_fn((n, f), |(i, _)| {
            let center = if i < minority { 2.0 } else { 0.0 };
            center + rng.random_range(-1.0..1.0)
        });
        let labels = (0..n).map(|i| u8::from(i < minority)).collect();
        Dataset::new(features, labels, Dataset::default_feature_names(f)).unwrap()
    }

    #[test]
    fn cloned_minority_collapses_to_parent() {
        let d = Dataset::new(
            array![[1.0, 2.0], [1.0, 2.0], [1.0, 2.0], [5.0, 5.0], [6.0, 6.0], [7.0, 7.0], [8.0, 8.0]],
            vec![1, 1, 1, 0, 0, 0, 0],
            Dataset::default_feature_names(2),
        )
        .unwrap();
        let s = class_split(&d);
        let p = LorasParams {
            k: 2,
            num_shadow: 5,
            sigma_list: vec![1e-15; 2],
            n_aff: 2,
            n_gen: 1,
            embedding: EmbeddingChoice::Regular,
            perplexity: 30.0,
            exact_balance: false,
        };
        let set = loras_oversample(&d, &s, &p, 1).unwrap();
        assert_eq!(set.len(), 3);
        for row in set.samples.rows() {
            assert!((row[0] - 1.0).abs() < 1e-9 && (row[1] - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn outputs_are_recorded_convex_combinations() {
        let d = blob(12, 60, 3, 5);
        let s = class_split(&d);
        let p = LorasParams {
            sigma_list: vec![0.05; 3],
            ..resolve_defaults(&d, &s).unwrap()
        };
        let (set, trace) = loras_oversample_traced(&d, &s, &p, 9).unwrap();
        assert_eq!(set.len(), 12 * p.n_gen);
        assert_eq!(trace.selections.len(), set.len());
        for i in 0..set.len() {
            let sel = &trace.selections[i];
            assert_eq!(sel.pool_indices.len(), p.n_aff);
            let mut uniq = sel.pool_indices.clone();
            uniq.sort();
            uniq.dedup();
            assert_eq!(uniq.len(), p.n_aff);
            assert!(sel.weights.iter().all(|&w| w >= 0.0));
            assert!((sel.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let back = trace.reconstruct(i);
            for (a, b) in back.iter().zip(set.samples.row(i)) {
                assert!((a - b).abs() <= 1e-9);
            }
            // shadow pool drawn only from the parent's neighborhood
            let parent = set.provenance[i].parent;
            assert!(trace.selected_points(i).iter().all(|sp| d.labels()[sp.parent] == 1));
            assert_eq!(trace.pools[sel.neighborhood].last().unwrap().parent, parent);
        }
    }

    #[test]
    fn constraint_checked_against_clamped_k() {
        let d = blob(3, 10, 2, 1);
        let s = class_split(&d);
        let p = LorasParams {
            k: 5,
            num_shadow: 2,
            n_aff: 4,
            ..resolve_defaults(&d, &s).unwrap()
        };
        // k clamps to 2, so the pool constraint becomes 4 < 2 * 2
        assert!(matches!(loras_oversample(&d, &s, &p, 0), Err(Error::ConstraintViolated { k: 2, .. })));
    }

    #[test]
    fn exact_balance_tops_up() {
        let d = blob(7, 60, 2, 2);
        let s = class_split(&d);
        let mut p = resolve_defaults(&d, &s).unwrap();
        assert_eq!(p.n_gen, 7);
        assert_eq!(loras_oversample(&d, &s, &p, 3).unwrap().len(), 49);
        p.exact_balance = true;
        assert_eq!(loras_oversample(&d, &s, &p, 3).unwrap().len(), 53);
    }

    #[test]
    fn deterministic_under_seed() {
        let d = blob(15, 50, 4, 4);
        let s = class_split(&d);
        let p = resolve_defaults(&d, &s).unwrap();
        let a = loras_oversample(&d, &s, &p, 21).unwrap();
        let b = loras_oversample(&d, &s, &p, 21).unwrap();
        assert_eq!(a, b);
        let c = loras_oversample(&d, &s, &p, 22).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn needs_two_minority_points() {
        let d = blob(1, 10, 2, 0);
        let s = class_split(&d);
        let p = resolve_defaults(&d, &s).unwrap();
        assert!(matches!(loras_oversample(&d, &s, &p, 0), Err(Error::EmptyMinority { .. })));
    }
}
