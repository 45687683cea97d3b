use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hnm::cli::{self, ExperimentConfig};
use hnm::coupling::{validate_coupling, CouplingSpec};

fn hnm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn sinusoidal_config(dt: f64, t_max: f64) -> String {
    format!(
        r#"{{"model": {{"coupling": {{"kind": "sinusoidal", "gamma0": 1.0, "period_T": 1.0, "alpha": 1.0}}, "eps0": 0.3}},
            "grid": {{"dt": {dt}, "t_max": {t_max}}}}}"#
    )
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let line = text.lines().last().expect("an error line");
    serde_json::from_str(line).expect("error line is JSON")
}

#[test]
fn amplitude_for_flat_coupling_is_exponential() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("flat.csv");
    let out = hnm(&[
        "amplitude",
        "--config",
        config_path("flat.json").to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re_a,im_a,abs2_a,gamma,eps"));
    assert!(lines.next().unwrap().starts_with("0,1,0,1,"));
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let t = v[0];
        let expected = num_complex::Complex64::new(-0.5 * t, -2.0 * t).exp();
        assert!((v[1] - expected.re).abs() < 1e-14 && (v[2] - expected.im).abs() < 1e-14);
        assert!((v[3] - v[1] * v[1] - v[2] * v[2]).abs() < 1e-12);
    }
}

#[test]
fn output_is_byte_for_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sin.json", &sinusoidal_config(0.01, 3.0));
    let mut files = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let out = hnm(&[
            "rates",
            "--config",
            config.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        files.push(std::fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn csv_to_stdout_without_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sin.json", &sinusoidal_config(0.5, 1.0));
    let out = hnm(&["amplitude", "--config", config.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,re_a,im_a,abs2_a\n0,1,0,1\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn crosscheck_passes_and_fails_by_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sin.json", &sinusoidal_config(0.001, 3.0));
    let c = config.to_str().unwrap();
    let out = hnm(&[
        "crosscheck",
        "--config",
        c,
        "--backends",
        "series,volterra",
        "--tol",
        "1e-5",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("series vs volterra"));

    // Volterra is exact through the second delay but not the third.
    let config = write_config(dir.path(), "long.json", &sinusoidal_config(0.01, 5.0));
    let out = hnm(&[
        "crosscheck",
        "--config",
        config.to_str().unwrap(),
        "--tol",
        "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "BackendMismatch");
    assert_eq!(stderr_json(&out)["category"], "numerical");
}

#[test]
fn witness_reports_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sin.json", &sinusoidal_config(0.01, 3.0));
    let defect = dir.path().join("nested/w.csv");
    let out = hnm(&[
        "witness",
        "--config",
        config.to_str().unwrap(),
        "--out",
        defect.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("hidden horizon 1 "));
    let text = std::fs::read_to_string(dir.path().join("nested/w_defect.csv")).unwrap();
    assert!(text.starts_with("tau,t,s,defect\n"));
}

#[test]
fn figures_write_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = hnm(&[
        "figures",
        "--which",
        "fig2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    assert!(names
        .iter()
        .all(|n| n.starts_with("fig2_g") && n.ends_with(".csv")));

    let out = hnm(&[
        "figures",
        "--which",
        "fig3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(dir.path().join("fig3_comb_g4.csv").exists());
}

#[test]
fn exit_codes() {
    assert_eq!(hnm(&["bogus"]).status.code(), Some(64));
    assert_eq!(hnm(&[]).status.code(), Some(64));
    assert_eq!(hnm(&["amplitude"]).status.code(), Some(64));
    assert_eq!(hnm(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let broken = write_config(dir.path(), "broken.json", "{\"model\": ");
    let out = hnm(&["validate", "--config", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert_eq!(stderr_json(&out)["error"], "ConfigParse");

    let unknown_field = write_config(
        dir.path(),
        "extra.json",
        &sinusoidal_config(0.1, 1.0).replacen('{', "{\"colour\": 1,", 1),
    );
    assert_eq!(
        hnm(&["validate", "--config", unknown_field.to_str().unwrap()])
            .status
            .code(),
        Some(65)
    );

    let missing = dir.path().join("missing.json");
    let out = hnm(&["validate", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "IoError");

    let grid = write_config(dir.path(), "grid.json", &sinusoidal_config(2.0, 1.0));
    assert_eq!(
        stderr_json(&hnm(&["validate", "--config", grid.to_str().unwrap()]))["error"],
        "BadGrid"
    );

    // The step must divide T for the time-stepping backend.
    let mismatch = write_config(dir.path(), "mismatch.json", &sinusoidal_config(0.3, 2.0));
    let out = hnm(&[
        "amplitude",
        "--config",
        mismatch.to_str().unwrap(),
        "--backend",
        "volterra",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "GridMismatch");
}

#[test]
fn thread_cap_is_honoured_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sin.json", &sinusoidal_config(0.1, 2.0));
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hnm"))
            .args(["amplitude", "--config", config.to_str().unwrap()])
            .env("HM_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("3").stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}

/// The runner rejects every coupling the coupling module rejects, with the
/// same error kind.
#[test]
fn validate_matches_coupling_taxonomy() {
    let invalid = [
        r#"{"kind": "flat", "gamma0": -1.0}"#,
        r#"{"kind": "flat", "gamma0": 0.0}"#,
        r#"{"kind": "sinusoidal", "gamma0": 1.0, "period_T": 1.0, "alpha": 1.2}"#,
        r#"{"kind": "sinusoidal", "gamma0": 1.0, "period_T": -1.0, "alpha": 0.5}"#,
        r#"{"kind": "exp_comb", "gamma0": 1.0, "period_T": 1.0, "beta": -0.1}"#,
        r#"{"kind": "custom", "gamma0": 1.0, "period_T": 1.0, "coeffs": [0.9, 0.5]}"#,
    ];
    for coupling in invalid {
        let spec: CouplingSpec = serde_json::from_str(coupling).unwrap();
        let expected = validate_coupling(spec, 4096).unwrap_err();
        let text = format!(
            r#"{{"model": {{"coupling": {coupling}, "eps0": 0.0}}, "grid": {{"dt": 0.1, "t_max": 1.0}}}}"#
        );
        let err = ExperimentConfig::from_json(&text).unwrap_err();
        assert_eq!(err.kind(), expected.kind(), "{coupling}");
        assert_eq!(cli::exit_code(&err), 1);
    }
}

#[test]
fn shipped_configs_validate_and_round_trip() {
    for name in [
        "flat.json",
        "sinusoidal.json",
        "exp_comb.json",
        "custom.json",
    ] {
        let c = ExperimentConfig::load(&config_path(name)).unwrap();
        let again = ExperimentConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(c, again, "{name}");
        assert_eq!(
            cli::run([
                "hnm",
                "validate",
                "--config",
                config_path(name).to_str().unwrap()
            ]),
            0
        );
    }
}
