//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 sampler error, 4 failed
//! statistical validation, 64 usage error.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ndarray::{Array2, Axis};
use serde::Serialize;
use serde_json::json;

pub use config::{parse_sampler_name, read_config, RunConfig, SamplerSpec, TheoryConfig};

use crate::dataset::{class_split, distinct_labels, is_small_dataset, load_csv, stratified_folds, ClassSplit, Dataset};
use crate::embedding::Pca;
use crate::error::Error;
use crate::evaluate::{run_benchmark, Classifier};
use crate::neighbors::EmbeddingChoice;
use crate::samplers::{default_neighborhood_size, LorasOverrides, LorasParams, Sampler, SamplerKind};
use crate::theory::{validate_theorem, LocalDistribution, MIN_TRIALS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SAMPLER: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "loras", version, about = "Oversampling for imbalanced binary classification")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Input CSV with a header row.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Name of the label column [default: label].
    #[arg(long, global = true)]
    pub label_column: Option<String>,
    /// Label value mapped to class 1 [default: "1" if present, else the last label in sorted order].
    #[arg(long, global = true)]
    pub positive_label: Option<String>,
    /// Master seed [default: 42].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; does not affect results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output path.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a dataset and its resolved LoRAS defaults.
    Stats,
    /// Append synthetic minority rows and write the result as CSV.
    Oversample(OversampleArgs),
    /// Repeated stratified cross validation for samplers and classifiers.
    Benchmark(BenchmarkArgs),
    /// Monte Carlo check of the SMOTE and LoRAS estimator variances.
    ValidateTheory(TheoryArgs),
    /// Two-dimensional PCA coordinates of the data and an optional overlay.
    Project(ProjectArgs),
}

#[derive(Debug, Args, Default)]
pub struct OversampleArgs {
    /// loras, smote, borderline1, borderline2 or adasyn [default: loras].
    #[arg(long)]
    pub sampler: Option<SamplerKind>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Synthetic rows for the SMOTE family [default: majority - minority].
    #[arg(long)]
    pub total: Option<usize>,
    #[arg(long)]
    pub num_shadow: Option<usize>,
    /// Constant shadow noise standard deviation.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Shadow noise as a multiple of each feature's minority standard deviation.
    #[arg(long)]
    pub sigma_relative: Option<f64>,
    #[arg(long)]
    pub n_aff: Option<usize>,
    #[arg(long)]
    pub n_gen: Option<usize>,
    /// regular or t-embedding.
    #[arg(long)]
    pub embedding: Option<EmbeddingChoice>,
    #[arg(long)]
    pub perplexity: Option<f64>,
    /// Top LoRAS output up to exactly majority - minority rows.
    #[arg(long)]
    pub exact_balance: bool,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Comma-separated samplers; "none" is the baseline
    /// [default: none,smote,borderline1,borderline2,adasyn,loras].
    #[arg(long, value_delimiter = ',')]
    pub samplers: Option<Vec<String>>,
    /// Comma-separated classifiers: knn, logreg [default: knn,logreg].
    #[arg(long, value_delimiter = ',')]
    pub classifiers: Option<Vec<String>>,
    /// [default: 5]
    #[arg(long)]
    pub repeats: Option<usize>,
    /// [default: 10]
    #[arg(long)]
    pub folds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    /// Points combined per LoRAS estimate [default: 10].
    #[arg(long)]
    pub f_count: Option<usize>,
    /// Coordinates per point [default: f_count].
    #[arg(long)]
    pub dims: Option<usize>,
    /// Degrees of freedom of the t model [default: 30].
    #[arg(long)]
    pub dof: Option<f64>,
    /// Scale of the t model [default: 1].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Shadow noise standard deviation [default: 0.005].
    #[arg(long)]
    pub sigma_b: Option<f64>,
    /// Draws per estimator [default: 1000000].
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// CSV written by `oversample`; rows whose origin is not "original" are overlaid.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
}

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }

    fn sampler(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_SAMPLER,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Global settings after merging the config file and flags.
struct Settings {
    config: RunConfig,
    input: Option<PathBuf>,
    label_column: String,
    positive_label: Option<String>,
    seed: u64,
    output: Option<PathBuf>,
}

impl Settings {
    fn load(&self) -> CliResult<Dataset> {
        let input = self.input.as_ref().ok_or_else(|| CliError::usage("--input is required"))?;
        let positive = match &self.positive_label {
            Some(p) => p.clone(),
            None => {
                let mut labels = distinct_labels(input, &self.label_column).map_err(CliError::input)?;
                labels.sort();
                if labels.iter().any(|l| l == "1") {
                    "1".to_string()
                } else {
                    labels.pop().ok_or_else(|| CliError::input(Error::EmptyFile(input.clone())))?
                }
            }
        };
        load_csv(input, &self.label_column, &positive).map_err(CliError::input)
    }

    fn require_output(&self) -> CliResult<&Path> {
        self.output.as_deref().ok_or_else(|| CliError::usage("--output is required"))
    }
}

pub fn run(cli: Cli) -> CliResult<i32> {
    let config = match &cli.global.config {
        Some(path) => read_config(path).map_err(CliError::usage)?,
        None => RunConfig::default(),
    };
    let g = cli.global;
    let settings = Settings {
        input: g.input.or_else(|| config.input.clone()),
        label_column: g.label_column.or_else(|| config.label_column.clone()).unwrap_or_else(|| "label".into()),
        positive_label: g.positive_label.or_else(|| config.positive_label.clone()),
        seed: g.seed.or(config.seed).unwrap_or(42),
        output: g.output.or_else(|| config.output.clone()),
        config,
    };
    let threads = g.threads.or(settings.config.threads);
    if threads == Some(0) {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Stats => cmd_stats(&settings),
        Command::Oversample(args) => cmd_oversample(&settings, &args),
        Command::Benchmark(args) => cmd_benchmark(&settings, &args),
        Command::ValidateTheory(args) => cmd_validate_theory(&settings, &args),
        Command::Project(args) => cmd_project(&settings, &args),
    })
}

fn write_file(path: &Path, body: &str) -> CliResult<()> {
    std::fs::write(path, body).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct StatsReport {
    rows: usize,
    features: usize,
    minority_label: String,
    minority: usize,
    majority: usize,
    imbalance_ratio: String,
    small_dataset: bool,
    loras_defaults: Option<LorasParams>,
}

fn cmd_stats(settings: &Settings) -> CliResult<i32> {
    let d = settings.load()?;
    let s = class_split(&d);
    let defaults = crate::samplers::resolve_defaults(&d, &s).ok();
    let report = StatsReport {
        rows: d.n(),
        features: d.f_count(),
        minority_label: d.class_names()[s.minority_label as usize].clone(),
        minority: s.minority_count(),
        majority: s.majority_count(),
        imbalance_ratio: s.ratio_display(),
        small_dataset: is_small_dataset(d.n(), d.f_count()),
        loras_defaults: defaults,
    };
    let mut text = String::new();
    writeln!(text, "rows: {}", report.rows).unwrap();
    writeln!(text, "features: {}", report.features).unwrap();
    writeln!(text, "minority: {} (label {:?})", report.minority, report.minority_label).unwrap();
    writeln!(text, "majority: {}", report.majority).unwrap();
    writeln!(text, "imbalance ratio: {}", report.imbalance_ratio).unwrap();
    writeln!(text, "small dataset: {}", report.small_dataset).unwrap();
    if let Some(p) = &report.loras_defaults {
        let sigma = if p.sigma_list.windows(2).all(|w| w[0] == w[1]) {
            format!("{}", p.sigma_list[0])
        } else {
            format!("{:?}", p.sigma_list)
        };
        writeln!(
            text,
            "loras defaults: k={} num_shadow={} sigma={} n_aff={} n_gen={} embedding={} perplexity={}",
            p.k, p.num_shadow, sigma, p.n_aff, p.n_gen, p.embedding, p.perplexity
        )
        .unwrap();
    }
    print!("{text}");
    if let Some(out) = &settings.output {
        write_file(out, &to_json(&report))?;
    }
    Ok(EXIT_OK)
}

/// Applies oversample flags on top of a configured sampler.
fn oversample_sampler(config: Option<&Sampler>, args: &OversampleArgs) -> CliResult<Sampler> {
    let kind = args
        .sampler
        .or(config.map(Sampler::kind))
        .unwrap_or(SamplerKind::Loras);
    let mut sampler = match config {
        Some(s) if s.kind() == kind => s.clone(),
        _ => Sampler::from_kind(kind),
    };
    let loras_only = args.num_shadow.is_some()
        || args.sigma.is_some()
        || args.sigma_relative.is_some()
        || args.n_aff.is_some()
        || args.n_gen.is_some()
        || args.embedding.is_some()
        || args.perplexity.is_some()
        || args.exact_balance;
    match &mut sampler {
        Sampler::Loras(o) => {
            if args.total.is_some() {
                return Err(CliError::usage("--total does not apply to loras; use --n-gen or --exact-balance"));
            }
            if args.sigma.is_some() && args.sigma_relative.is_some() {
                return Err(CliError::usage("--sigma and --sigma-relative are mutually exclusive"));
            }
            let LorasOverrides {
                k,
                num_shadow,
                sigma,
                sigma_relative,
                n_aff,
                n_gen,
                embedding,
                perplexity,
                exact_balance,
            } = o;
            *k = args.k.or(*k);
            *num_shadow = args.num_shadow.or(*num_shadow);
            if args.sigma.is_some() {
                *sigma = args.sigma;
                *sigma_relative = None;
            }
            if args.sigma_relative.is_some() {
                *sigma_relative = args.sigma_relative;
                *sigma = None;
            }
            *n_aff = args.n_aff.or(*n_aff);
            *n_gen = args.n_gen.or(*n_gen);
            *embedding = args.embedding.or(*embedding);
            *perplexity = args.perplexity.or(*perplexity);
            *exact_balance |= args.exact_balance;
        }
        Sampler::Smote { k, total }
        | Sampler::Borderline1 { k, total }
        | Sampler::Borderline2 { k, total }
        | Sampler::Adasyn { k, total } => {
            if loras_only {
                return Err(CliError::usage(format!("LoRAS options do not apply to {kind}")));
            }
            *k = args.k.or(*k);
            *total = args.total.or(*total);
        }
    }
    Ok(sampler)
}

fn resolved_parameters(sampler: &Sampler, d: &Dataset, s: &ClassSplit) -> CliResult<serde_json::Value> {
    let balance = s.majority_count().saturating_sub(s.minority_count());
    let k_default = default_neighborhood_size(s.minority_count());
    Ok(match sampler {
        Sampler::Loras(o) => serde_json::to_value(o.resolve(d, s).map_err(CliError::sampler)?).expect("serializable"),
        Sampler::Smote { k, total }
        | Sampler::Borderline1 { k, total }
        | Sampler::Borderline2 { k, total }
        | Sampler::Adasyn { k, total } => json!({
            "k": k.unwrap_or(k_default),
            "total": total.unwrap_or(balance),
        }),
    })
}

fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_oversample(settings: &Settings, args: &OversampleArgs) -> CliResult<i32> {
    let output = settings.require_output()?;
    let sampler = oversample_sampler(settings.config.sampler.as_ref(), args)?;
    let d = settings.load()?;
    let s = class_split(&d);
    let params = resolved_parameters(&sampler, &d, &s)?;
    let set = sampler.oversample(&d, &s, settings.seed).map_err(CliError::sampler)?;

    let mut out = String::new();
    for name in d.feature_names() {
        out.push_str(&csv_field(name));
        out.push(',');
    }
    writeln!(out, "{},origin", csv_field(&settings.label_column)).unwrap();
    let write_row = |out: &mut String, row: ndarray::ArrayView1<'_, f64>, label: &str, origin: &str| {
        for v in row {
            out.push_str(&fmt_float(*v));
            out.push(',');
        }
        writeln!(out, "{},{origin}", csv_field(label)).unwrap();
    };
    for i in 0..d.n() {
        write_row(&mut out, d.row(i), &d.class_names()[d.labels()[i] as usize], "original");
    }
    let minority_name = &d.class_names()[s.minority_label as usize];
    for row in set.samples.rows() {
        write_row(&mut out, row, minority_name, sampler.kind().name());
    }
    write_file(output, &out)?;

    let summary = json!({
        "sampler": sampler.kind().name(),
        "seed": settings.seed,
        "input_rows": d.n(),
        "minority": s.minority_count(),
        "majority": s.majority_count(),
        "minority_label": minority_name,
        "synthetic_rows": set.len(),
        "output_rows": d.n() + set.len(),
        "parameters": params,
        "warnings": set.warnings,
    });
    write_file(&summary_path(output), &to_json(&summary))?;
    Ok(EXIT_OK)
}

/// `out.csv` -> `out.summary.json`.
fn summary_path(output: &Path) -> PathBuf {
    output.with_extension("summary.json")
}

fn parse_classifier(name: &str) -> CliResult<Classifier> {
    match name {
        "knn" => Ok(Classifier::knn()),
        "logreg" => Ok(Classifier::logreg()),
        other => Err(CliError::usage(format!("unknown classifier {other:?}"))),
    }
}

/// Folds usable for a minority class of `minority` rows.
pub fn effective_folds(requested: usize, minority: usize) -> usize {
    if minority >= requested {
        requested
    } else if minority >= 5 {
        5.min(requested)
    } else {
        minority.max(2).min(requested)
    }
}

fn cmd_benchmark(settings: &Settings, args: &BenchmarkArgs) -> CliResult<i32> {
    let output = settings.require_output()?;
    let cfg = &settings.config;
    let samplers: Vec<Option<Sampler>> = match (&args.samplers, &cfg.samplers) {
        (Some(names), _) => names
            .iter()
            .map(|n| parse_sampler_name(n.trim()))
            .collect::<Result<_, _>>()
            .map_err(CliError::usage)?,
        (None, Some(specs)) => specs
            .iter()
            .map(SamplerSpec::resolve)
            .collect::<Result<_, _>>()
            .map_err(CliError::usage)?,
        (None, None) => std::iter::once(None)
            .chain(
                [
                    SamplerKind::Smote,
                    SamplerKind::Borderline1,
                    SamplerKind::Borderline2,
                    SamplerKind::Adasyn,
                    SamplerKind::Loras,
                ]
                .map(|k| Some(Sampler::from_kind(k))),
            )
            .collect(),
    };
    let classifiers: Vec<Classifier> = match (&args.classifiers, &cfg.classifiers) {
        (Some(names), _) => names.iter().map(|n| parse_classifier(n.trim())).collect::<CliResult<_>>()?,
        (None, Some(c)) => c.clone(),
        (None, None) => vec![Classifier::knn(), Classifier::logreg()],
    };
    if samplers.is_empty() || classifiers.is_empty() {
        return Err(CliError::usage("need at least one sampler and one classifier"));
    }
    let repeats = args.repeats.or(cfg.repeats).unwrap_or(5);
    let requested = args.folds.or(cfg.folds).unwrap_or(10);
    if repeats == 0 || requested < 2 {
        return Err(CliError::usage("need at least 1 repeat and 2 folds"));
    }

    let d = settings.load()?;
    let s = class_split(&d);
    let folds = effective_folds(requested, s.minority_count());
    let mut warnings = Vec::new();
    if folds != requested {
        let msg = format!(
            "minority class has {} rows; folds reduced from {requested} to {folds}",
            s.minority_count()
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let plan = stratified_folds(&d, repeats, folds, settings.seed).map_err(CliError::input)?;
    let mut report = run_benchmark(&d, &samplers, &classifiers, &plan, settings.seed).map_err(CliError::sampler)?;
    report.warnings = warnings;
    write_file(&output.with_extension("json"), &to_json(&report))?;
    write_file(&output.with_extension("csv"), &report.to_csv())?;
    Ok(EXIT_OK)
}

fn cmd_validate_theory(settings: &Settings, args: &TheoryArgs) -> CliResult<i32> {
    let t = &settings.config.theory;
    let f_count = args.f_count.or(t.f_count).unwrap_or(10);
    let dims = args.dims.or(t.dims).unwrap_or(f_count);
    let trials = args.trials.or(t.trials).unwrap_or(1_000_000);
    if trials < MIN_TRIALS {
        return Err(CliError::usage(format!("--trials must be at least {MIN_TRIALS}, got {trials}")));
    }
    if f_count < 2 || dims == 0 {
        return Err(CliError::usage("--f-count must be at least 2 and --dims at least 1"));
    }
    let dist = LocalDistribution::new(
        vec![0.0; dims],
        args.sigma.or(t.sigma).unwrap_or(1.0),
        args.dof.or(t.dof).unwrap_or(30.0),
        args.sigma_b.or(t.sigma_b).unwrap_or(0.005),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    let report = validate_theorem(&dist, f_count, trials, settings.seed).map_err(|e| CliError::usage(e.to_string()))?;
    let body = to_json(&report);
    match &settings.output {
        Some(out) => write_file(out, &body)?,
        None => print!("{body}"),
    }
    if report.passed {
        Ok(EXIT_OK)
    } else {
        eprintln!("statistical validation failed");
        Ok(EXIT_VALIDATION)
    }
}

/// Overlay rows: features in `names` order, the label string and the origin.
fn read_overlay(path: &Path, names: &[String], label_column: &str) -> CliResult<(Array2<f64>, Vec<String>, Vec<String>)> {
    let file = File::open(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut reader = csv::Reader::from_reader(file);
    let header = reader.headers().map_err(CliError::input)?.clone();
    let find = |name: &str| header.iter().position(|h| h.trim() == name);
    let cols: Vec<usize> = names
        .iter()
        .map(|n| find(n).ok_or_else(|| CliError::input(Error::MissingColumn(n.clone()))))
        .collect::<CliResult<_>>()?;
    let label_col = find(label_column).ok_or_else(|| CliError::input(Error::MissingColumn(label_column.into())))?;
    let origin_col = find("origin");
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut origins = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(CliError::input)?;
        let origin = origin_col.map_or("synthetic", |c| record.get(c).unwrap_or("").trim());
        if origin == "original" {
            continue;
        }
        for (&c, name) in cols.iter().zip(names) {
            let cell = record.get(c).unwrap_or("").trim();
            let v: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                CliError::input(Error::NonNumericCell {
                    row: r + 1,
                    column: name.clone(),
                    value: cell.to_string(),
                })
            })?;
            values.push(v);
        }
        labels.push(record.get(label_col).unwrap_or("").trim().to_string());
        origins.push(origin.to_string());
    }
    let m = labels.len();
    let x = Array2::from_shape_vec((m, names.len()), values).expect("one value per feature");
    Ok((x, labels, origins))
}

fn cmd_project(settings: &Settings, args: &ProjectArgs) -> CliResult<i32> {
    let output = settings.require_output()?;
    let d = settings.load()?;
    let pca = Pca::fit(d.features(), 2).map_err(CliError::input)?;
    let mut out = String::from("x,y,class,origin\n");
    let proj = pca.transform(d.features());
    for (i, p) in proj.axis_iter(Axis(0)).enumerate() {
        let class = &d.class_names()[d.labels()[i] as usize];
        writeln!(out, "{},{},{},original", fmt_float(p[0]), fmt_float(p[1]), csv_field(class)).unwrap();
    }
    let overlay = args.overlay.clone().or_else(|| settings.config.overlay.clone());
    if let Some(path) = overlay {
        let (x, labels, origins) = read_overlay(&path, d.feature_names(), &settings.label_column)?;
        let proj = pca.transform(x.view());
        for ((p, class), origin) in proj.axis_iter(Axis(0)).zip(&labels).zip(&origins) {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_float(p[0]),
                fmt_float(p[1]),
                csv_field(class),
                csv_field(origin)
            )
            .unwrap();
        }
    }
    write_file(output, &out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_shrink_for_small_minorities() {
        assert_eq!(effective_folds(10, 40), 10);
        assert_eq!(effective_folds(10, 7), 5);
        assert_eq!(effective_folds(10, 3), 3);
        assert_eq!(effective_folds(10, 1), 2);
        assert_eq!(effective_folds(3, 2), 2);
    }

    #[test]
    fn flags_override_configured_sampler() {
        let cfg = Sampler::Loras(LorasOverrides {
            n_gen: Some(3),
            k: Some(4),
            ..Default::default()
        });
        let args = OversampleArgs {
            n_gen: Some(7),
            ..Default::default()
        };
        match oversample_sampler(Some(&cfg), &args).unwrap() {
            Sampler::Loras(o) => assert_eq!((o.k, o.n_gen), (Some(4), Some(7))),
            other => panic!("unexpected {other:?}"),
        }
        let args = OversampleArgs {
            sampler: Some(SamplerKind::Smote),
            n_aff: Some(3),
            ..Default::default()
        };
        assert_eq!(oversample_sampler(Some(&cfg), &args).unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(main_with_args(["loras", "oversample", "--sampler", "svm"]), EXIT_USAGE);
        assert_eq!(main_with_args(["loras", "frobnicate"]), EXIT_USAGE);
        assert_eq!(main_with_args(["loras", "validate-theory", "--trials", "100"]), EXIT_USAGE);
    }
}
