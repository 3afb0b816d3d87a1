use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_graded-lab");

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const Z1: &str = r#"
schema_version = 1
d = 2
seed = 3

[[experiments]]
kind = "essnorm"
id = "z1"
p = [{ exp = [1, 0], re = 1.0 }]
schedule = [[10, 40], [20, 60]]
optimizer = { starts = 16 }

[[experiments]]
kind = "commutator"
id = "c"
i = 0
j = 1
degrees = [1, 20]
"#;

#[test]
fn run_writes_report_with_match() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "z1.toml", Z1);
    let out = dir.path().join("out");
    let status = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--workers", "2", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let e = &report["experiments"][0];
    assert_eq!(e["status"], "ok");
    let estimate = e["headline"]["estimate"].as_f64().unwrap();
    let sup = e["headline"]["boundary_sup"].as_f64().unwrap();
    assert!((estimate - 1.0).abs() < 1e-12);
    assert!((sup - 1.0).abs() < 1e-12);
    assert!(e["verdict"]["abs_gap"].as_f64().unwrap() <= 1e-10);
    assert_eq!(e["verdict"]["verdict"], "match");

    // headline numbers are traceable to the stored series
    let grid = std::fs::read_to_string(out.join("z1_grid.csv")).unwrap();
    let last = grid.lines().last().unwrap();
    assert_eq!(last.rsplit(',').next().unwrap().parse::<f64>().unwrap(), estimate);
    assert!(std::fs::read_to_string(out.join("summary.txt")).unwrap().contains("verdict: match"));
}

#[test]
fn outputs_are_byte_identical_across_runs_and_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "z1.toml", Z1);
    let run = |out: &str, workers: &str| {
        let out = dir.path().join(out);
        let s = Command::new(BIN)
            .args(["run", cfg.to_str().unwrap(), "--workers", workers, "--out", out.to_str().unwrap()])
            .output()
            .unwrap()
            .status;
        assert!(s.success());
        out
    };
    let a = run("a", "1");
    let b = run("b", "4");
    let mut names: Vec<_> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_string_lossy().ends_with(".csv") || n == "summary.txt")
        .collect();
    names.sort();
    assert!(names.len() >= 6);
    for n in names {
        assert_eq!(std::fs::read(a.join(&n)).unwrap(), std::fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn seed_override_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "z1.toml", Z1);
    let out = dir.path().join("o");
    let s = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--seed-override", "99", "--out", out.to_str().unwrap()])
        .output()
        .unwrap()
        .status;
    assert!(s.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 99);
}

#[test]
fn validate_rejects_non_homogeneous_generator() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        r#"
schema_version = 1
d = 2
[ideal]
generators = [[{ exp = [1, 0], re = 1.0 }, { exp = [2, 0], re = 1.0 }]]
"#,
    );
    let out = Command::new(BIN).args(["validate", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("homogeneous"));
}

#[test]
fn empty_experiment_list_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.toml", "schema_version = 1\nd = 3\n");
    let out = dir.path().join("o");
    let s = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap()
        .status;
    assert!(s.success());
    assert!(out.join("report.json").exists());
}

#[test]
fn failed_experiment_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "fin.toml",
        r#"
schema_version = 1
d = 2
[ideal]
generators = [[{ exp = [1, 0], re = 1.0 }], [{ exp = [0, 1], re = 1.0 }]]
[[experiments]]
kind = "essnorm"
id = "e"
p = [{ exp = [1, 0], re = 1.0 }]
schedule = [[2, 6]]
optimizer = { starts = 2, seed_attempts = 2 }
"#,
    );
    let out = dir.path().join("o");
    let s = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap()
        .status;
    assert_eq!(s.code(), Some(2));
}

#[test]
fn dims_prints_hilbert_function() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.toml",
        r#"
schema_version = 1
d = 2
n_max = 5
[ideal]
generators = [[{ exp = [2, 0], re = 1.0 }, { exp = [0, 2], re = -1.0 }]]
"#,
    );
    let out = Command::new(BIN).args(["dims", cfg.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let quotient: Vec<usize> = text
        .lines()
        .skip(1)
        .filter_map(|l| l.split_whitespace().nth(3)?.parse().ok())
        .collect();
    assert_eq!(quotient, vec![1, 2, 2, 2, 2, 2]);
}
