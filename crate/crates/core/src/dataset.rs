//! Binary-labeled numeric datasets: loading, class split, and stratified folds.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;

/// Numeric feature matrix with binary labels (1 = minority / positive).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    /// Original label strings for label 0 and label 1.
    class_names: [String; 2],
}

impl Dataset {
    pub fn new(features: Array2<f64>, labels: Vec<u8>, feature_names: Vec<String>) -> Result<Self> {
        Self::with_class_names(features, labels, feature_names, ["0".into(), "1".into()])
    }

    pub fn with_class_names(
        features: Array2<f64>,
        labels: Vec<u8>,
        feature_names: Vec<String>,
        class_names: [String; 2],
    ) -> Result<Self> {
        let (n, f) = features.dim();
        if n < 2 {
            return Err(Error::InvalidDataset(format!("need at least 2 rows, got {n}")));
        }
        if f < 1 {
            return Err(Error::InvalidDataset("need at least one feature".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {n} rows",
                labels.len()
            )));
        }
        if feature_names.len() != f {
            return Err(Error::InvalidDataset(format!(
                "{} feature names for {f} features",
                feature_names.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidDataset(format!("label {bad} is not 0 or 1")));
        }
        if !labels.contains(&0) || !labels.contains(&1) {
            return Err(Error::InvalidDataset("labels must contain both 0 and 1".into()));
        }
        if let Some(((r, c), _)) = features.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {r}, feature {c}"
            )));
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            class_names,
        })
    }

    /// Feature names `f0..f{count-1}`.
    pub fn default_feature_names(count: usize) -> Vec<String> {
        (0..count).map(|i| format!("f{i}")).collect()
    }

    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn f_count(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String; 2] {
        &self.class_names
    }

    /// Copies the selected rows into a new feature matrix.
    pub fn select_features(&self, rows: &[usize]) -> Array2<f64> {
        self.features.select(Axis(0), rows)
    }

    pub fn select_labels(&self, rows: &[usize]) -> Vec<u8> {
        rows.iter().map(|&i| self.labels[i]).collect()
    }

    /// Subset of rows as a dataset. Fails if the subset holds a single class.
    pub fn subset(&self, rows: &[usize]) -> Result<Dataset> {
        Dataset::with_class_names(
            self.select_features(rows),
            self.select_labels(rows),
            self.feature_names.clone(),
            self.class_names.clone(),
        )
    }

    /// Rescales every feature to [0, 1]. Constant features map to 0.
    pub fn min_max_scaled(&self) -> Dataset {
        let mut features = self.features.clone();
        for mut col in features.columns_mut() {
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = hi - lo;
            col.mapv_inplace(|v| if span > 0.0 { (v - lo) / span } else { 0.0 });
        }
        Dataset {
            features,
            labels: self.labels.clone(),
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
        }
    }
}

/// Reads a headed CSV file. `positive_label` is mapped to label 1.
pub fn load_csv(path: impl AsRef<Path>, label_column: &str, positive_label: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let header = reader.headers()?.clone();
    let label_idx = header
        .iter()
        .position(|h| h.trim() == label_column)
        .ok_or_else(|| Error::MissingColumn(label_column.to_string()))?;
    let feature_cols: Vec<usize> = (0..header.len()).filter(|&c| c != label_idx).collect();
    let feature_names: Vec<String> = feature_cols.iter().map(|&c| header[c].trim().to_string()).collect();

    let mut values = Vec::new();
    let mut raw_labels = Vec::new();
    let mut distinct: Vec<String> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let row = r + 1;
        let label = record
            .get(label_idx)
            .ok_or_else(|| Error::MissingColumn(label_column.to_string()))?
            .trim()
            .to_string();
        if !distinct.contains(&label) {
            if distinct.len() == 2 {
                return Err(Error::MoreThanTwoLabels { row, value: label });
            }
            distinct.push(label.clone());
        }
        for &c in &feature_cols {
            let cell = record.get(c).unwrap_or("").trim();
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::NonNumericCell {
                        row,
                        column: header[c].trim().to_string(),
                        value: cell.to_string(),
                    })
                }
            }
        }
        raw_labels.push(label);
    }
    if raw_labels.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    if !distinct.iter().any(|l| l == positive_label) {
        return Err(Error::InvalidDataset(format!(
            "positive label {positive_label:?} not present (found {distinct:?})"
        )));
    }
    let negative = distinct
        .iter()
        .find(|l| *l != positive_label)
        .cloned()
        .ok_or_else(|| Error::InvalidDataset("label column holds a single class".into()))?;
    let labels = raw_labels.iter().map(|l| u8::from(l == positive_label)).collect();
    let features = Array2::from_shape_vec((raw_labels.len(), feature_cols.len()), values)
        .map_err(|e| Error::InvalidDataset(e.to_string()))?;
    Dataset::with_class_names(features, labels, feature_names, [negative, positive_label.to_string()])
}

/// Writes the dataset as CSV with the label column last. Values use the
/// shortest representation that parses back to the identical `f64`.
pub fn save_csv(d: &Dataset, path: impl AsRef<Path>, label_column: &str) -> Result<()> {
    let path = path.as_ref();
    let mut file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::new();
    out.push_str(&d.feature_names.join(","));
    out.push(',');
    out.push_str(label_column);
    out.push('\n');
    for (i, row) in d.features.rows().into_iter().enumerate() {
        for v in row {
            out.push_str(&format!("{v:?},"));
        }
        out.push_str(&d.class_names[d.labels[i] as usize]);
        out.push('\n');
    }
    file.write_all(out.as_bytes()).map_err(io_err)
}

/// Row indices of the minority and majority classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSplit {
    pub minority_idx: Vec<usize>,
    pub majority_idx: Vec<usize>,
    /// Label value (0 or 1) carried by the minority rows.
    pub minority_label: u8,
    /// True when label 1 outnumbered label 0 and roles were swapped.
    pub swapped: bool,
}

impl ClassSplit {
    /// Split with a fixed minority label, no count check. Used for training folds
    /// whose class roles are inherited from the full dataset.
    pub fn with_minority_label(labels: &[u8], minority_label: u8) -> Self {
        let (minority_idx, majority_idx) = (0..labels.len()).partition(|&i| labels[i] == minority_label);
        Self {
            minority_idx,
            majority_idx,
            minority_label,
            swapped: false,
        }
    }

    pub fn minority_count(&self) -> usize {
        self.minority_idx.len()
    }

    pub fn majority_count(&self) -> usize {
        self.majority_idx.len()
    }

    pub fn majority_label(&self) -> u8 {
        1 - self.minority_label
    }

    /// Imbalance ratio rounded to the nearest integer, as `"R:1"`.
    pub fn ratio_display(&self) -> String {
        format!("{}:1", imbalance_ratio(self).round() as u64)
    }
}

/// Label 1 is the minority unless it strictly outnumbers label 0.
pub fn class_split(d: &Dataset) -> ClassSplit {
    let ones = d.labels.iter().filter(|&&l| l == 1).count();
    let zeros = d.n() - ones;
    if ones > zeros {
        log::warn!("label 1 has {ones} rows vs {zeros} for label 0; treating label 0 as minority");
        ClassSplit {
            swapped: true,
            ..ClassSplit::with_minority_label(&d.labels, 0)
        }
    } else {
        ClassSplit::with_minority_label(&d.labels, 1)
    }
}

/// |C_maj| / |C_min|.
pub fn imbalance_ratio(s: &ClassSplit) -> f64 {
    s.majority_count() as f64 / s.minority_count() as f64
}

/// True iff log10(sample_count / feature_count) < 1, i.e. fewer than ten
/// samples per feature.
pub fn is_small_dataset(sample_count: usize, feature_count: usize) -> bool {
    // integer form of the log10 test; exact at the boundary
    (sample_count as u128) < 10 * feature_count as u128
}

/// Fold assignment for repeated stratified k-fold cross validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub repeats: usize,
    pub folds_per_repeat: usize,
    /// `assignments[r][i]` is the fold holding row `i` in repeat `r`.
    pub assignments: Vec<Vec<usize>>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn test_indices(&self, repeat: usize, fold: usize) -> Vec<usize> {
        self.assignments[repeat]
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| (f == fold).then_some(i))
            .collect()
    }

    pub fn train_indices(&self, repeat: usize, fold: usize) -> Vec<usize> {
        self.assignments[repeat]
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| (f != fold).then_some(i))
            .collect()
    }
}

/// Stratified folds, reshuffled independently for every repeat. Each class is
/// shuffled and dealt round-robin, so remainders land in the lowest folds.
pub fn stratified_folds(d: &Dataset, repeats: usize, folds: usize, seed: u64) -> Result<FoldPlan> {
    if folds == 0 || folds > d.n() {
        return Err(Error::TooManyFolds { folds, n: d.n() });
    }
    if repeats == 0 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    let split = class_split(d);
    let assignments = (0..repeats)
        .map(|r| {
            let mut rng = substream(seed, &[r as u64]);
            let mut assignment = vec![0usize; d.n()];
            for class in [&split.minority_idx, &split.majority_idx] {
                let mut rows = class.clone();
                rows.shuffle(&mut rng);
                for (pos, &row) in rows.iter().enumerate() {
                    assignment[row] = pos % folds;
                }
            }
            assignment
        })
        .collect();
    Ok(FoldPlan {
        repeats,
        folds_per_repeat: folds,
        assignments,
        seed,
    })
}

/// Distinct values of the label column, in first-seen order. Used by callers
/// that need to pick a positive label before loading.
pub fn distinct_labels(path: impl AsRef<Path>, label_column: &str) -> Result<Vec<String>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::Reader::from_reader(file);
    let label_idx = reader
        .headers()?
        .iter()
        .position(|h| h.trim() == label_column)
        .ok_or_else(|| Error::MissingColumn(label_column.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut ordered = Vec::new();
    for record in reader.records() {
        let record = record?;
        let v = record.get(label_idx).unwrap_or("").trim().to_string();
        if seen.insert(v.clone()) {
            ordered.push(v);
        }
    }
    Ok(ordered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn labeled(labels: Vec<u8>) -> Dataset {
        let n = labels.len();
        let features = Array2::from_shape_fn((n, 2), |(i, j)| (i * 2 + j) as f64);
        Dataset::new(features, labels, Dataset::default_feature_names(2)).unwrap()
    }

    #[test]
    fn load_maps_positive_label() {
        let f = write_tmp("x,y,cls\n1.0,2.0,a\n3.0,4.0,b\n5.0,6.0,a\n");
        let d = load_csv(f.path(), "cls", "b").unwrap();
        assert_eq!(d.labels(), &[0, 1, 0]);
        assert_eq!(d.feature_names(), &["x".to_string(), "y".to_string()]);
        assert_eq!(d.features(), array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
        assert_eq!(d.class_names(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn load_reports_offending_cell() {
        let f = write_tmp("x,y,cls\n1.0,2.0,a\n3.0,abc,b\n");
        match load_csv(f.path(), "cls", "b") {
            Err(Error::NonNumericCell { row, column, value }) => {
                assert_eq!((row, column.as_str(), value.as_str()), (2, "y", "abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_error_paths() {
        let f = write_tmp("x,cls\n1,a\n2,b\n3,c\n");
        assert!(matches!(
            load_csv(f.path(), "cls", "a"),
            Err(Error::MoreThanTwoLabels { row: 3, .. })
        ));
        let f = write_tmp("x,cls\n1,a\n2,b\n");
        assert!(matches!(load_csv(f.path(), "label", "a"), Err(Error::MissingColumn(_))));
        let f = write_tmp("x,cls\n");
        assert!(matches!(load_csv(f.path(), "cls", "a"), Err(Error::EmptyFile(_))));
        let f = write_tmp("x,cls\nNaN,a\n2,b\n");
        assert!(matches!(load_csv(f.path(), "cls", "a"), Err(Error::NonNumericCell { .. })));
    }

    #[test]
    fn mammography_shaped_load() {
        let mut text = String::from("f1,f2,f3,f4,f5,f6,class\n");
        for i in 0..11183 {
            let label = if i % 43 == 0 { "1" } else { "-1" };
            text.push_str(&format!("{i},0.5,1e-3,-2,3.25,{},{label}\n", i % 7));
        }
        let f = write_tmp(&text);
        let d = load_csv(f.path(), "class", "1").unwrap();
        assert_eq!((d.n(), d.f_count()), (11183, 6));
    }

    #[test]
    fn class_split_examples() {
        let s = class_split(&labeled(vec![0, 1, 0, 0]));
        assert_eq!(s.minority_idx, vec![1]);
        assert_eq!(s.majority_idx, vec![0, 2, 3]);
        assert!(!s.swapped);

        let s = class_split(&labeled(vec![1, 1, 1, 0]));
        assert_eq!(s.minority_idx, vec![3]);
        assert_eq!(s.minority_label, 0);
        assert!(s.swapped);

        // ties resolve to label 1 as minority
        let s = class_split(&labeled(vec![1, 0]));
        assert_eq!((s.minority_label, s.swapped), (1, false));
    }

    #[test]
    fn letter_img_minority_count() {
        let labels = (0..20000).map(|i| u8::from(i < 734)).collect();
        let s = class_split(&labeled(labels));
        assert_eq!(s.minority_count(), 734);
    }

    #[test]
    fn imbalance_ratio_display() {
        let split = |maj: usize, min: usize| ClassSplit {
            minority_idx: (0..min).collect(),
            majority_idx: (min..min + maj).collect(),
            minority_label: 1,
            swapped: false,
        };
        let s = split(10923, 260);
        assert!((imbalance_ratio(&s) - 42.0115).abs() < 1e-3);
        assert_eq!(s.ratio_display(), "42:1");
        let s = split(19266, 734);
        assert!((imbalance_ratio(&s) - 26.248).abs() < 1e-3);
        assert_eq!(s.ratio_display(), "26:1");
        assert_eq!(split(50, 50).ratio_display(), "1:1");
        assert_eq!(split(284315, 492).ratio_display(), "578:1");
        assert_eq!(split(4145, 32).ratio_display(), "130:1");
    }

    #[test]
    fn small_dataset_rule() {
        assert!(is_small_dataset(452, 278));
        assert!(!is_small_dataset(20000, 16));
        for f in 1..50 {
            assert!(!is_small_dataset(10 * f, f));
            assert!(is_small_dataset(10 * f - 1, f));
        }
    }

    #[test]
    fn folds_one_minority_each() {
        let labels: Vec<u8> = (0..100).map(|i| u8::from(i % 10 == 3)).collect();
        let d = labeled(labels);
        let plan = stratified_folds(&d, 1, 10, 5).unwrap();
        let mut minority = [0usize; 10];
        let mut majority = [0usize; 10];
        for (i, &f) in plan.assignments[0].iter().enumerate() {
            if d.labels()[i] == 1 {
                minority[f] += 1;
            } else {
                majority[f] += 1;
            }
        }
        assert_eq!(minority, [1; 10]);
        assert_eq!(majority, [9; 10]);
    }

    #[test]
    fn single_fold_and_errors() {
        let d = labeled(vec![0, 1, 0, 1, 0]);
        let plan = stratified_folds(&d, 2, 1, 0).unwrap();
        assert!(plan.assignments.iter().all(|a| a.iter().all(|&f| f == 0)));
        assert_eq!(plan.test_indices(0, 0).len(), 5);
        assert!(plan.train_indices(0, 0).is_empty());
        assert!(matches!(stratified_folds(&d, 1, 6, 0), Err(Error::TooManyFolds { .. })));
    }

    #[test]
    fn min_max_scaling() {
        let d = Dataset::new(
            array![[1.0, 5.0], [3.0, 5.0], [2.0, 5.0]],
            vec![0, 1, 0],
            Dataset::default_feature_names(2),
        )
        .unwrap();
        let s = d.min_max_scaled();
        assert_eq!(s.features(), array![[0.0, 0.0], [1.0, 0.0], [0.5, 0.0]]);
    }
}
