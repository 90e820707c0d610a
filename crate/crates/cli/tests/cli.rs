//! End-to-end checks of the `prodline` binary: subcommands, file output,
//! exit codes, and the environment override.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_prodline")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .current_dir(dir)
        .env_remove("PRODLINE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn simulate_matched_fixture_reports_zero_wait() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", fixture("matched.toml").to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("avg_wait_s: 0.000000"), "{text}");
    assert!(text.contains("extra_space_pct: 0.000000"), "{text}");
    assert!(text.contains("conflicts: 0"), "{text}");

    let report = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    let mut lines = report.lines();
    assert_eq!(
        lines.next().unwrap(),
        "vehicle_id,lane,arrival_s,slot_s,wait_s,right_turn,exit_s"
    );
    assert_eq!(report.lines().count(), 121);
}

#[test]
fn simulate_worst_fixture_reports_full_spill() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", fixture("worst.toml").to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("extra_space_pct: 100.000000"));
}

#[test]
fn invalid_band_exits_one_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.toml");
    std::fs::write(
        &spec,
        r#"
[intersection]
speed_range_mph = [65.0, 60.0]
container_length_ft = 26.2467
containers_per_lane = 60
run_duration_s = 60.0

[lanes.A1]
pattern = "matched"
"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["simulate", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("intersection.speed_range_mph"));
}

#[test]
fn even_k_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("evenk.toml");
    std::fs::write(
        &spec,
        r#"
[intersection]
speed_range_mph = [60.0, 65.0]
container_length_ft = 26.2467
containers_per_lane = 60
run_duration_s = 60.0

[predictor]
k = 2

[lanes.A1]
pattern = "matched"
"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["simulate", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("predictor.k"));
}

#[test]
fn predict_answers_queries_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture("knn/seed_table.tsv");
    let out = run_in(
        dir.path(),
        &[
            "predict",
            table.to_str().unwrap(),
            "--k",
            "3",
            "--query",
            "3,9,0",
            "--query",
            "2,20,1",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "+\n-\n");
}

#[test]
fn predict_with_k1_echoes_a_training_row() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture("knn/seed_table.tsv");
    let out = run_in(
        dir.path(),
        &[
            "predict",
            table.to_str().unwrap(),
            "--k",
            "1",
            "--query",
            "1,9,0",
        ],
    );
    assert_eq!(stdout(&out), "+\n");
}

#[test]
fn predict_without_queries_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture("knn/seed_table.tsv");
    let out = run_in(
        dir.path(),
        &["predict", table.to_str().unwrap(), "--k", "3"],
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "");
}

#[test]
fn predict_rejects_malformed_table_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("broken.tsv");
    std::fs::write(&table, "1 9 0 +\n2 20 1\n").unwrap();
    let out = run_in(
        dir.path(),
        &["predict", table.to_str().unwrap(), "--k", "1"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains(":2:"), "{}", stderr(&out));
}

#[test]
fn patterns_subcommand_prints_bits_and_arrivals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["patterns", "matched", "--len", "6"]);
    assert_eq!(stdout(&out), "1 0 1 0 1 0\n0 2 4\n");

    let out = run_in(dir.path(), &["patterns", "worst", "--len", "3"]);
    assert_eq!(stdout(&out), "1 1 1\n0 1 2\n");

    let out = run_in(dir.path(), &["patterns", "recorded-random"]);
    assert!(stdout(&out).starts_with("1 1 0 1 1 1 0 0 0 1"));

    let a = run_in(
        dir.path(),
        &[
            "patterns", "random", "--len", "60", "--p", "0.5", "--seed", "9",
        ],
    );
    let b = run_in(
        dir.path(),
        &[
            "patterns", "random", "--len", "60", "--p", "0.5", "--seed", "9",
        ],
    );
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn baseline_fixture_prints_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["baseline", fixture("baseline.toml").to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("model: baseline"), "{text}");
    assert!(text.contains("expected_collisions_per_vehicle:"), "{text}");
}

#[test]
fn compare_identical_specs_yields_identical_columns() {
    let dir = tempfile::tempdir().unwrap();
    let spec = fixture("recorded.toml");
    let out = run_in(
        dir.path(),
        &["compare", spec.to_str().unwrap(), spec.to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    for line in stdout(&out).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 3, "{line}");
        assert_eq!(cols[1], cols[2], "{line}");
    }
}

#[test]
fn compare_production_beats_baseline_on_recorded_flow() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "compare",
            fixture("recorded.toml").to_str().unwrap(),
            fixture("baseline.toml").to_str().unwrap(),
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let wait_line = text
        .lines()
        .find(|l| l.starts_with("avg_wait_s"))
        .expect("avg_wait_s row");
    let cols: Vec<f64> = wait_line
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(cols[0] < cols[1], "{wait_line}");
}

#[test]
fn compare_with_empty_arrivals_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("empty.toml");
    std::fs::write(
        &spec,
        r#"
[intersection]
speed_range_mph = [60.0, 65.0]
container_length_ft = 26.2467
containers_per_lane = 60
run_duration_s = 60.0

[lanes.A1]
pattern = { arrivals = [] }
"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["compare", spec.to_str().unwrap(), spec.to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    for line in stdout(&out).lines().skip(2) {
        for cell in line.split(',').skip(1) {
            assert_eq!(cell.parse::<f64>().unwrap(), 0.0, "{line}");
        }
    }
}

#[test]
fn model_and_subcommand_must_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", fixture("baseline.toml").to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("baseline"), "{}", stderr(&out));

    let out = run_in(
        dir.path(),
        &["baseline", fixture("matched.toml").to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("simulate"), "{}", stderr(&out));
}

#[test]
fn compare_rejects_mismatched_durations() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("short.toml");
    std::fs::write(
        &spec,
        r#"
[intersection]
speed_range_mph = [60.0, 65.0]
container_length_ft = 26.2467
containers_per_lane = 60
run_duration_s = 30.0

[lanes.A1]
pattern = "matched"
"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "compare",
            fixture("matched.toml").to_str().unwrap(),
            spec.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("duration"), "{}", stderr(&out));
}

#[test]
fn env_var_overrides_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let override_dir = dir.path().join("elsewhere");
    let out = Command::new(binary())
        .args(["simulate", fixture("matched.toml").to_str().unwrap()])
        .current_dir(dir.path())
        .env("PRODLINE_OUT_DIR", &override_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(override_dir.join("report.csv").exists());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unwritable_output_dir_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // a plain file where the output directory should go
    std::fs::write(dir.path().join("out"), "occupied").unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", fixture("matched.toml").to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn corridor_fixture_writes_downstream_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", fixture("corridor.toml").to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("downstream_avg_wait_s:"));
    assert!(dir.path().join("out/report_downstream.csv").exists());
}

#[test]
fn unknown_subcommand_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}
