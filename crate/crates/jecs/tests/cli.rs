//! Integration tests driving the installed binary: artifact layout,
//! golden score output, exit codes, config precedence, and idempotence.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn jecs(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jecs"))
        .arg("--output-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn scores_match_checked_in_golden_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = jecs(
        tmp.path(),
        &[
            "scores",
            "--test",
            fixture("golden_test.jsonl").to_str().unwrap(),
            "--cal",
            fixture("golden_cal.jsonl").to_str().unwrap(),
        ],
    );
    assert!(out.status.success(), "{}", stderr_of(&out));
    for role in ["test", "cal"] {
        for kind in ["perplexity", "mink", "minkpp", "mentropy"] {
            let name = format!("scores_{role}_{kind}.csv");
            let got = std::fs::read(tmp.path().join(&name)).unwrap();
            let want = std::fs::read(fixture("golden_expected").join(&name)).unwrap();
            assert_eq!(got, want, "{name} diverged from the golden copy");
        }
    }
    assert!(tmp.path().join("manifest.json").exists());
}

#[test]
fn malformed_jsonl_reports_line_and_leaves_no_output() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("bad.jsonl");
    std::fs::write(
        &input,
        r#"{"item_id":"a","model_id":"m","token_logprobs":[-1.0]}
{"item_id":"b","model_id":"m","token_logprobs":"oops"}
"#,
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = jecs(
        &out_dir,
        &[
            "scores",
            "--test",
            input.to_str().unwrap(),
            "--cal",
            input.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 2"), "stderr was: {err}");
    // Nothing may be written on failure, not even a partial CSV.
    assert!(!out_dir.exists() || std::fs::read_dir(&out_dir).unwrap().next().is_none());
}

#[test]
fn empty_scores_input_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("empty.jsonl");
    std::fs::write(&input, "").unwrap();
    let out_dir = tmp.path().join("out");
    let out = jecs(
        &out_dir,
        &[
            "scores",
            "--test",
            input.to_str().unwrap(),
            "--cal",
            input.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists() || std::fs::read_dir(&out_dir).unwrap().next().is_none());
}

fn write_simple_csv(path: &Path, models: &[&str], rows: &[(&str, &[f64])]) {
    let mut text = format!("item_id,{}\n", models.join(","));
    for (item, vals) in rows {
        let cells: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        text.push_str(&format!("{item},{}\n", cells.join(",")));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn select_exit_codes_and_union_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let test_csv = tmp.path().join("test.csv");
    let cal_csv = tmp.path().join("cal.csv");
    write_simple_csv(
        &test_csv,
        &["m1", "m2"],
        &[
            ("t0", &[-9.0, -8.5]),
            ("t1", &[-0.5, -0.25]),
            ("t2", &[-7.5, -9.5]),
        ],
    );
    write_simple_csv(
        &cal_csv,
        &["m1", "m2"],
        &[
            ("c0", &[-0.5, -0.75]),
            ("c1", &[-1.0, -0.5]),
            ("c2", &[-0.25, -1.25]),
            ("c3", &[-0.75, -1.0]),
        ],
    );
    let base = [
        "select",
        "--test",
        test_csv.to_str().unwrap(),
        "--cal",
        cal_csv.to_str().unwrap(),
    ];

    // Union output carries one object per model plus the composition.
    let dir = tmp.path().join("union");
    let mut args = base.to_vec();
    args.extend(["--procedure", "union", "--alpha", "0.4"]);
    let out = jecs(&dir, &args);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.join("selection.json")).unwrap()).unwrap();
    let arr = json.as_array().expect("array of results");
    assert_eq!(arr.len(), 3);
    assert_eq!(arr[0]["model_id"], "m1");
    assert_eq!(arr[1]["model_id"], "m2");
    assert_eq!(arr[2]["procedure"], "union");
    assert!(arr[2].get("model_id").is_none());

    // Bad alpha and unknown procedure are usage errors.
    let mut args = base.to_vec();
    args.extend(["--procedure", "jecs", "--alpha", "1.2"]);
    assert_eq!(jecs(&dir, &args).status.code(), Some(2));
    let mut args = base.to_vec();
    args.extend(["--procedure", "mystery", "--alpha", "0.2"]);
    assert_eq!(jecs(&dir, &args).status.code(), Some(2));

    // Model columns that do not line up are a runtime failure.
    let cal_bad = tmp.path().join("cal_bad.csv");
    write_simple_csv(&cal_bad, &["m1", "mz"], &[("c0", &[-0.5, -0.75])]);
    let out = jecs(
        &dir,
        &[
            "select",
            "--test",
            test_csv.to_str().unwrap(),
            "--cal",
            cal_bad.to_str().unwrap(),
            "--procedure",
            "jmcs",
            "--alpha",
            "0.2",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("alignment"));
}

#[test]
fn simulate_smoke_run_is_fast_and_complete() {
    let tmp = tempfile::tempdir().unwrap();
    let started = Instant::now();
    let out = jecs(
        tmp.path(),
        &["simulate", "--reps", "1", "--n-pool", "600", "--seed", "4"],
    );
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(
        started.elapsed().as_secs_f64() < 5.0,
        "single-rep smoke run exceeded 5s"
    );
    for f in ["results.csv", "summary.csv", "labels.csv", "manifest.json"] {
        assert!(tmp.path().join(f).exists(), "{f} missing");
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seed"], 4);
}

#[test]
fn identical_simulate_invocations_agree_byte_for_byte() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["simulate", "--reps", "3", "--n-pool", "400", "--seed", "11"];
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(jecs(&a, &args).status.success());
    assert!(jecs(&b, &args).status.success());
    for f in ["results.csv", "summary.csv", "labels.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f} differs between identical runs"
        );
    }
}

#[test]
fn single_value_alpha_sweep_reduces_to_simulate() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    let swp = tmp.path().join("swp");
    let common = ["--reps", "3", "--n-pool", "400", "--seed", "6", "--alpha", "0.2"];
    let mut args = vec!["simulate"];
    args.extend(common);
    assert!(jecs(&sim, &args).status.success());
    let mut args = vec!["sweep", "--axis", "alpha", "--values", "0.2"];
    args.extend(common);
    assert!(jecs(&swp, &args).status.success());
    assert_eq!(
        std::fs::read(sim.join("results.csv")).unwrap(),
        std::fs::read(swp.join("results.csv")).unwrap()
    );
    assert_eq!(
        std::fs::read(sim.join("summary.csv")).unwrap(),
        std::fs::read(swp.join("summary.csv")).unwrap()
    );
}

#[test]
fn lambda_sweep_appends_adaptive_overlay() {
    let tmp = tempfile::tempdir().unwrap();
    let out = jecs(
        tmp.path(),
        &[
            "sweep", "--axis", "lambda", "--values", "0.5,0.7", "--reps", "2", "--n-pool",
            "400", "--alpha", "0.1", "--procedures", "jecs",
        ],
    );
    assert!(out.status.success(), "{}", stderr_of(&out));
    let summary = std::fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    let values: Vec<&str> = summary
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap())
        .collect();
    assert_eq!(values, ["0.5", "0.7", "adaptive"]);
    assert!(tmp.path().join("sweep.svg").exists());
}

#[test]
fn k_sweep_emits_one_summary_row_per_config() {
    let tmp = tempfile::tempdir().unwrap();
    let out = jecs(
        tmp.path(),
        &[
            "sweep", "--axis", "k", "--values", "2,4,8,16", "--reps", "2", "--n-pool", "400",
            "--alpha", "0.1,0.3", "--procedures", "jecs",
        ],
    );
    assert!(out.status.success(), "{}", stderr_of(&out));
    let summary = std::fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    // 4 values of k, 2 alphas, one procedure.
    assert_eq!(summary.lines().count(), 1 + 4 * 2);
}

#[test]
fn check_assumptions_and_null_curves_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let chk = tmp.path().join("chk");
    let out = jecs(
        &chk,
        &["check-assumptions", "--mu", "1.0", "--n-pool", "2000", "--lambda", "0.6"],
    );
    assert!(out.status.success(), "{}", stderr_of(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(chk.join("assumptions.json")).unwrap()).unwrap();
    assert_eq!(report["lambda"], 0.6);
    assert!(report["n_pure"].as_u64().unwrap() > 0);
    assert!(chk.join("manifest.json").exists());

    let nc = tmp.path().join("nc");
    let out = jecs(&nc, &["null-curves", "--k", "4", "--points", "101"]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let csv = std::fs::read_to_string(nc.join("null_curves.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,cdf,density"));
    assert_eq!(lines.count(), 101);
    assert!(csv.lines().last().unwrap().starts_with("1,1,4"));
}

#[test]
fn config_file_provides_defaults_and_flags_win() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.toml");
    std::fs::write(
        &config,
        r#"
[protocol]
reps = 2
alpha_grid = [0.25]
seed = 13

[world]
n_pool = 400
"#,
    )
    .unwrap();
    let dir = tmp.path().join("out");
    let out = Command::new(env!("CARGO_BIN_EXE_jecs"))
        .arg("--config")
        .arg(&config)
        .arg("--output-dir")
        .arg(&dir)
        .args(["simulate", "--procedures", "jmcs", "--alpha", "0.45"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    let summary = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    let mut lines = summary.lines().skip(1);
    let row = lines.next().unwrap();
    // The flag alpha beats the config's 0.25; the config reps survive.
    assert!(row.starts_with("jmcs,0.45,"), "row was: {row}");
    assert!(row.ends_with(",2"), "row was: {row}");
    assert_eq!(lines.next(), None);

    // Unknown config keys are rejected loudly.
    std::fs::write(&config, "[protocol]\nrepz = 2\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_jecs"))
        .arg("--config")
        .arg(&config)
        .arg("--output-dir")
        .arg(&dir)
        .args(["simulate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_var_sets_default_output_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("from_env");
    let out = Command::new(env!("CARGO_BIN_EXE_jecs"))
        .env("JECS_OUTPUT_DIR", &dir)
        .args(["null-curves", "--k", "2", "--points", "5"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(dir.join("null_curves.csv").exists());
    assert!(dir.join("manifest.json").exists());
}
