use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0} contains no data rows")]
    EmptyFile(PathBuf),

    #[error("column '{0}' not found in header")]
    MissingColumn(String),

    #[error("row {row}, column '{column}': cannot parse {value:?} as a finite number")]
    NonNumericCell {
        /// 1-based data row (header excluded).
        row: usize,
        column: String,
        value: String,
    },

    #[error("label column has more than two distinct values (row {row} introduces {value:?})")]
    MoreThanTwoLabels { row: usize, value: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("cannot split {n} rows into {folds} folds")]
    TooManyFolds { folds: usize, n: usize },

    #[error("k = {k} neighbors requested but only {available} candidates exist")]
    KTooLarge { k: usize, available: usize },

    #[error("perplexity {perplexity} must be smaller than the number of points ({points})")]
    PerplexityTooLarge { perplexity: f64, points: usize },

    #[error("minority class is empty or too small (need at least {needed}, found {found})")]
    EmptyMinority { needed: usize, found: usize },

    #[error("constraint n_aff < k * num_shadow violated: n_aff = {n_aff}, k = {k}, num_shadow = {num_shadow}")]
    ConstraintViolated {
        n_aff: usize,
        k: usize,
        num_shadow: usize,
    },

    #[error("degrees of freedom must exceed 2 for a finite variance, got {0}")]
    DofTooSmall(f64),

    #[error("training labels contain a single class")]
    DegenerateLabels,

    #[error("loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("repeat {repeat}, fold {fold}: {source}")]
    Fold {
        repeat: usize,
        fold: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
