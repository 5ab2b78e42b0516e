//! Classifiers, metrics, and the repeated stratified cross-validation harness.

mod cv;
mod knn;
mod logreg;
mod metrics;

pub use cv::{
    audit_leakage, cross_validate, run_benchmark, BenchmarkReport, Classifier, CvResult, FoldRecord, LeakageAudit,
    MetricSummary, RepeatSummary,
};
pub use knn::{default_knn_k, knn_classify};
pub use logreg::{logreg_fit, LogRegConfig, LogRegModel};
pub use metrics::{metrics_from_confusion, ConfusionMatrix, MetricSet};
