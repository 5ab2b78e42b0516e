use std::fmt::Write as _;
use std::path::Path;

use ndarray::{concatenate, Array2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::knn::{default_knn_k, knn_classify};
use super::logreg::{logreg_fit, LogRegConfig};
use super::metrics::{metrics_from_confusion, ConfusionMatrix, MetricSet};
use crate::dataset::{class_split, ClassSplit, Dataset, FoldPlan};
use crate::error::{Error, Result};
use crate::neighbors::Metric;
use crate::rng::derive_seed;
use crate::samplers::Sampler;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum Classifier {
    /// k defaults to 10 below 100 minority rows, 30 otherwise.
    Knn {
        #[serde(default)]
        k: Option<usize>,
    },
    Logreg(LogRegConfig),
}

impl Classifier {
    pub fn knn() -> Self {
        Classifier::Knn { k: None }
    }

    pub fn logreg() -> Self {
        Classifier::Logreg(LogRegConfig::default())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classifier::Knn { .. } => "knn",
            Classifier::Logreg(_) => "logreg",
        }
    }

    /// Fits on `(train_x, train_y)` and labels `test_x`. Label 1 is the minority.
    pub fn fit_predict(
        &self,
        train_x: &Array2<f64>,
        train_y: &[u8],
        test_x: &Array2<f64>,
        minority_count: usize,
    ) -> Result<Vec<u8>> {
        match self {
            Classifier::Knn { k } => {
                let k = k.unwrap_or(default_knn_k(minority_count)).min(train_x.nrows());
                knn_classify(train_x.view(), train_y, test_x.view(), k, Metric::Euclidean)
            }
            Classifier::Logreg(config) => Ok(logreg_fit(train_x.view(), train_y, config)?.predict(test_x.view())),
        }
    }
}

/// Outcome of one train/test split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldRecord {
    pub repeat: usize,
    pub fold: usize,
    pub train_rows: usize,
    pub synthetic_rows: usize,
    pub test_minority: usize,
    pub confusion: ConfusionMatrix,
    /// Row ids scored in this fold. Original rows keep their dataset index;
    /// synthetic training rows are numbered from `n` upward and never appear here.
    #[serde(skip)]
    pub scored_ids: Vec<usize>,
    /// Row ids the classifier was trained on, same numbering.
    #[serde(skip)]
    pub train_ids: Vec<usize>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatSummary {
    /// Confusion counts summed over the repeat's folds.
    pub pooled_confusion: ConfusionMatrix,
    /// Metrics of the pooled confusion.
    pub pooled: MetricSet,
    /// Mean of the per-fold metrics.
    pub fold_averaged: MetricSet,
}

/// Per-repeat values of one metric with their mean and population sd.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: String,
    pub runs: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
}

impl MetricSummary {
    fn new(metric: &str, runs: Vec<f64>) -> Self {
        let mean = runs.iter().sum::<f64>() / runs.len() as f64;
        let var = runs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / runs.len() as f64;
        Self {
            metric: metric.to_string(),
            runs,
            mean,
            sd: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    /// Sampler name, or `"none"` for the baseline.
    pub sampler: String,
    pub classifier: String,
    pub repeats: Vec<RepeatSummary>,
    /// Pooled per-repeat metrics.
    pub pooled: Vec<MetricSummary>,
    pub fold_averaged: Vec<MetricSummary>,
    pub folds: Vec<FoldRecord>,
}

impl CvResult {
    pub fn pooled_metric(&self, name: &str) -> &MetricSummary {
        self.pooled.iter().find(|m| m.metric == name).expect("known metric name")
    }
}

/// Checks from a completed run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakageAudit {
    /// Scored ids at or above `n` (synthetic rows).
    pub synthetic_scored: usize,
    /// Folds whose scored ids overlap their training ids.
    pub overlapping_folds: usize,
    /// Repeats whose scored ids are not exactly `0..n` once each.
    pub incomplete_repeats: usize,
}

impl LeakageAudit {
    pub fn clean(&self) -> bool {
        self.synthetic_scored == 0 && self.overlapping_folds == 0 && self.incomplete_repeats == 0
    }
}

pub fn audit_leakage(result: &CvResult, n: usize) -> LeakageAudit {
    let mut audit = LeakageAudit {
        synthetic_scored: 0,
        overlapping_folds: 0,
        incomplete_repeats: 0,
    };
    let repeats = result.repeats.len();
    let mut seen = vec![vec![0usize; n]; repeats];
    for f in &result.folds {
        let mut train = f.train_ids.clone();
        train.sort_unstable();
        let mut overlap = false;
        for &id in &f.scored_ids {
            if id >= n {
                audit.synthetic_scored += 1;
            } else {
                seen[f.repeat][id] += 1;
            }
            overlap |= train.binary_search(&id).is_ok();
        }
        audit.overlapping_folds += usize::from(overlap);
    }
    audit.incomplete_repeats = seen.iter().filter(|counts| counts.iter().any(|&c| c != 1)).count();
    audit
}

/// Repeated stratified cross validation. Oversampling, when requested, is
/// applied to the training rows of each fold only; the test rows are scored
/// untouched. Each fold's sampler seed is derived from `(seed, repeat, fold)`.
pub fn cross_validate(
    d: &Dataset,
    sampler: Option<&Sampler>,
    classifier: &Classifier,
    plan: &FoldPlan,
    seed: u64,
) -> Result<CvResult> {
    if plan.assignments.iter().any(|a| a.len() != d.n()) {
        return Err(Error::invalid("fold plan does not match the dataset"));
    }
    let split = class_split(d);
    let jobs: Vec<(usize, usize)> = (0..plan.repeats)
        .flat_map(|r| (0..plan.folds_per_repeat).map(move |f| (r, f)))
        .collect();
    let folds = jobs
        .par_iter()
        .map(|&(r, f)| {
            run_fold(d, &split, sampler, classifier, plan, r, f, seed).map_err(|e| Error::Fold {
                repeat: r,
                fold: f,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut repeats = Vec::with_capacity(plan.repeats);
    for r in 0..plan.repeats {
        let records: Vec<&FoldRecord> = folds.iter().filter(|f| f.repeat == r).collect();
        let mut pooled_confusion = ConfusionMatrix::default();
        let mut sums = [0.0; 4];
        for rec in &records {
            pooled_confusion.add(&rec.confusion);
            for (s, v) in sums.iter_mut().zip(metrics_from_confusion(&rec.confusion).values()) {
                *s += v;
            }
        }
        let k = records.len() as f64;
        repeats.push(RepeatSummary {
            pooled_confusion,
            pooled: metrics_from_confusion(&pooled_confusion),
            fold_averaged: MetricSet {
                precision: sums[0] / k,
                recall: sums[1] / k,
                f1: sums[2] / k,
                balanced_accuracy: sums[3] / k,
            },
        });
    }
    let summarize = |pick: fn(&RepeatSummary) -> [f64; 4]| {
        MetricSet::NAMES
            .iter()
            .enumerate()
            .map(|(m, name)| MetricSummary::new(name, repeats.iter().map(|r| pick(r)[m]).collect()))
            .collect::<Vec<_>>()
    };
    let pooled = summarize(|r| r.pooled.values());
    let fold_averaged = summarize(|r| r.fold_averaged.values());
    Ok(CvResult {
        sampler: sampler.map_or("none".to_string(), |s| s.kind().to_string()),
        classifier: classifier.name().to_string(),
        repeats,
        pooled,
        fold_averaged,
        folds,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_fold(
    d: &Dataset,
    split: &ClassSplit,
    sampler: Option<&Sampler>,
    classifier: &Classifier,
    plan: &FoldPlan,
    r: usize,
    f: usize,
    seed: u64,
) -> Result<FoldRecord> {
    let train_idx = plan.train_indices(r, f);
    let test_idx = plan.test_indices(r, f);
    let minority = split.minority_label;
    let to_binary = |labels: Vec<u8>| labels.into_iter().map(|l| u8::from(l == minority)).collect::<Vec<u8>>();

    let train = d.subset(&train_idx)?;
    let train_split = ClassSplit::with_minority_label(train.labels(), minority);
    let mut train_x = train.features().to_owned();
    let mut train_y = to_binary(train.labels().to_vec());
    let mut train_ids = train_idx.clone();
    let mut warnings = Vec::new();
    let mut synthetic_rows = 0;
    if let Some(sampler) = sampler {
        let set = sampler.oversample(&train, &train_split, derive_seed(seed, &[r as u64, f as u64]))?;
        synthetic_rows = set.len();
        warnings = set.warnings;
        train_x = concatenate(Axis(0), &[train_x.view(), set.samples.view()]).expect("matching widths");
        train_y.extend(std::iter::repeat_n(1, synthetic_rows));
        train_ids.extend(d.n()..d.n() + synthetic_rows);
    }

    let test_x = d.select_features(&test_idx);
    let test_y = to_binary(d.select_labels(&test_idx));
    let predicted = classifier.fit_predict(&train_x, &train_y, &test_x, split.minority_count())?;
    Ok(FoldRecord {
        repeat: r,
        fold: f,
        train_rows: train_x.nrows(),
        synthetic_rows,
        test_minority: test_y.iter().filter(|&&l| l == 1).count(),
        confusion: ConfusionMatrix::from_predictions(&test_y, &predicted),
        scored_ids: test_idx,
        train_ids,
        warnings,
    })
}

/// Results for every sampler and classifier pair of a benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub seed: u64,
    pub repeats: usize,
    pub folds: usize,
    pub warnings: Vec<String>,
    pub results: Vec<CvResult>,
}

impl BenchmarkReport {
    /// One row per (sampler, classifier, metric) with pooled per-repeat values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sampler,classifier,metric");
        for r in 1..=self.repeats {
            write!(out, ",run{r}").unwrap();
        }
        out.push_str(",mean,sd\n");
        for res in &self.results {
            for m in &res.pooled {
                write!(out, "{},{},{}", res.sampler, res.classifier, m.metric).unwrap();
                for v in &m.runs {
                    write!(out, ",{v:.6}").unwrap();
                }
                writeln!(out, ",{:.6},{:.6}", m.mean, m.sd).unwrap();
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `<stem>.json` and `<stem>.csv`.
    pub fn write(&self, stem: &Path) -> Result<()> {
        let write = |ext: &str, body: String| {
            let path = stem.with_extension(ext);
            std::fs::write(&path, body).map_err(|source| Error::Io { path, source })
        };
        write("json", self.to_json()?)?;
        write("csv", self.to_csv())
    }
}

/// Runs `cross_validate` for every sampler (with `None` as the baseline) and
/// every classifier, in that order.
pub fn run_benchmark(
    d: &Dataset,
    samplers: &[Option<Sampler>],
    classifiers: &[Classifier],
    plan: &FoldPlan,
    seed: u64,
) -> Result<BenchmarkReport> {
    let mut results = Vec::new();
    for sampler in samplers {
        for classifier in classifiers {
            results.push(cross_validate(d, sampler.as_ref(), classifier, plan, seed)?);
        }
    }
    Ok(BenchmarkReport {
        seed,
        repeats: plan.repeats,
        folds: plan.folds_per_repeat,
        warnings: Vec::new(),
        results,
    })
}
