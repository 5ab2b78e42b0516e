use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use loras::dataset::Dataset;
use loras::synthetic::{abalone_shaped, two_gaussians};

fn loras_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loras")).args(args).output().expect("binary runs")
}

fn write_csv(dir: &Path, name: &str, d: &Dataset) -> PathBuf {
    let path = dir.join(name);
    let mut out = d.feature_names().join(",");
    out.push_str(",label\n");
    for i in 0..d.n() {
        for v in d.row(i) {
            out.push_str(&format!("{v},"));
        }
        out.push_str(if d.labels()[i] == 1 { "yes\n" } else { "no\n" });
    }
    std::fs::write(&path, out).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn stats_reports_shape_ratio_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let mammography = write_csv(dir.path(), "m.csv", &two_gaussians(11183, 260, 6, 2.0, 1));
    let o = loras_cli(&["stats", "--input", s(&mammography), "--positive-label", "yes"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("imbalance ratio: 42:1"), "{text}");
    assert!(text.contains("k=30"));

    let arrhythmia = write_csv(dir.path(), "a.csv", &two_gaussians(452, 25, 278, 2.0, 2));
    let json = dir.path().join("a.json");
    let o = loras_cli(&["stats", "--input", s(&arrhythmia), "--output", s(&json)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("small dataset: true"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["loras_defaults"]["num_shadow"], 112);
    assert_eq!(report["minority_label"], "yes");

    let balanced = write_csv(dir.path(), "b.csv", &two_gaussians(40, 20, 2, 1.0, 3));
    assert!(stdout(&loras_cli(&["stats", "--input", s(&balanced)])).contains("imbalance ratio: 1:1"));
}

#[test]
fn oversample_counts_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "abalone.csv", &abalone_shaped(3));
    let out = dir.path().join("loras.csv");
    let o = loras_cli(&["oversample", "--input", s(&input), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(",yes,loras")).count(), 4096);
    assert_eq!(text.lines().filter(|l| l.ends_with(",original")).count(), 4177);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("loras.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["synthetic_rows"], 4096);
    assert_eq!(summary["parameters"]["n_gen"], 128);
    assert_eq!(summary["seed"], 42);

    let out = dir.path().join("smote.csv");
    let o = loras_cli(&["oversample", "--sampler", "smote", "--input", s(&input), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let yes = text.lines().filter(|l| l.contains(",yes,")).count();
    let no = text.lines().filter(|l| l.contains(",no,")).count();
    assert_eq!(yes, no);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "d.csv", &two_gaussians(200, 20, 3, 2.0, 4));
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        format!(r#"{{"input": {:?}, "seed": 5, "sampler": {{"name": "loras", "n_gen": 2}}}}"#, s(&input)),
    )
    .unwrap();
    let out = dir.path().join("o.csv");
    let o = loras_cli(&["oversample", "--config", s(&config), "--n-gen", "3", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["synthetic_rows"], 60);
    assert_eq!(summary["seed"], 5);

    std::fs::write(&config, r#"{"sede": 5}"#).unwrap();
    let o = loras_cli(&["stats", "--config", s(&config), "--input", s(&input)]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "d.csv", &two_gaussians(120, 12, 3, 2.0, 5));
    let out = dir.path().join("o.csv");
    let missing = dir.path().join("missing.csv");
    assert_eq!(loras_cli(&["stats", "--input", s(&missing)]).status.code(), Some(2));
    assert_eq!(loras_cli(&["stats", "--input", s(&input), "--label-column", "nope"]).status.code(), Some(2));
    let o = loras_cli(&["oversample", "--input", s(&input), "--n-aff", "5000", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        loras_cli(&["oversample", "--sampler", "svm-smote", "--input", s(&input), "--output", s(&out)]).status.code(),
        Some(64)
    );
    assert_eq!(loras_cli(&["validate-theory", "--trials", "100"]).status.code(), Some(64));
    assert_eq!(loras_cli(&["validate-theory", "--dof", "2"]).status.code(), Some(64));
    assert_eq!(loras_cli(&["bogus"]).status.code(), Some(64));

    // heavy tails make the 5% variance band fail; the report is still written
    let report = dir.path().join("theory.json");
    let o = loras_cli(&["validate-theory", "--dof", "2.05", "--f-count", "3", "--trials", "10000", "--output", s(&report)]);
    assert_eq!(o.status.code(), Some(4));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["passed"], false);
}

#[test]
fn validate_theory_boundary_case() {
    let o = loras_cli(&["validate-theory", "--f-count", "2", "--sigma-b", "0", "--trials", "200000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["equality_pass"], true);
    assert!(report["ordering_pass"].is_null());
}

#[test]
fn benchmark_reduces_folds_and_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "d.csv", &two_gaussians(180, 7, 3, 2.5, 6));
    let out = dir.path().join("bench.csv");
    let o = loras_cli(&[
        "benchmark",
        "--input",
        s(&input),
        "--samplers",
        "none,smote,loras",
        "--classifiers",
        "knn",
        "--output",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "sampler,classifier,metric,run1,run2,run3,run4,run5,mean,sd");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    for sampler in ["none", "smote", "loras"] {
        assert_eq!(rows.iter().filter(|r| r.starts_with(&format!("{sampler},knn,"))).count(), 4);
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bench.json")).unwrap()).unwrap();
    assert_eq!(report["folds"], 5);
    assert!(report["warnings"][0].as_str().unwrap().contains("reduced from 10 to 5"));
}

#[test]
fn project_with_and_without_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_csv(dir.path(), "d.csv", &two_gaussians(150, 15, 4, 2.0, 7));
    let plain = dir.path().join("plain.csv");
    assert_eq!(loras_cli(&["project", "--input", s(&input), "--output", s(&plain)]).status.code(), Some(0));
    let plain_text = std::fs::read_to_string(&plain).unwrap();
    assert_eq!(plain_text.lines().count(), 1 + 150);
    assert_eq!(plain_text.lines().next().unwrap(), "x,y,class,origin");

    let over = dir.path().join("over.csv");
    assert_eq!(loras_cli(&["oversample", "--input", s(&input), "--output", s(&over)]).status.code(), Some(0));
    let g = std::fs::read_to_string(&over).unwrap().lines().filter(|l| l.ends_with(",loras")).count();
    let with = dir.path().join("with.csv");
    let o = loras_cli(&["project", "--input", s(&input), "--overlay", s(&over), "--output", s(&with)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let with_text = std::fs::read_to_string(&with).unwrap();
    assert_eq!(with_text.lines().count(), 1 + 150 + g);
    assert_eq!(with_text.lines().filter(|l| l.ends_with(",loras")).count(), g);
    // the original rows project identically with or without the overlay
    assert!(with_text.starts_with(&plain_text));
}
