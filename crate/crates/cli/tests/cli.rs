use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn lwig(args: &[&str]) -> Output {
    lwig_env(args, &[])
}

fn lwig_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lwig"));
    cmd.args(args).env_remove("LW_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name].iter().collect();
    p.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

/// `(m, k, W)` triples of a CSV grid.
fn csv_rows(text: &str) -> Vec<(i64, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,k,W"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn delta_grid_is_a_single_flat_row() {
    let rows = csv_rows(&stdout(&lwig(&["wigner", "--spec", &spec("delta.json"), "--nk", "16"])));
    assert_eq!(rows.len(), 16);
    for (j, &(m, k, w)) in rows.iter().enumerate() {
        assert_eq!(m, 0);
        assert_eq!(k, -PI + 2.0 * PI * j as f64 / 16.0);
        assert!((w - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }
}

#[test]
fn gaussian_peak_value() {
    let rows = csv_rows(&stdout(&lwig(&["wigner", "--spec", &spec("gaussian.json"), "--nk", "256"])));
    let &(_, _, w) = rows.iter().find(|r| r.0 == 0 && r.1 == 0.0).unwrap();
    assert!((w - 1.0 / (2.0 * PI)).abs() < 1e-12);
}

#[test]
fn two_delta_grid_has_three_strips() {
    let v = json(&lwig(&["wigner", "--spec", &spec("two_deltas.json"), "--nk", "64", "--format", "json"]));
    let ms: Vec<i64> = v["m_values"].as_array().unwrap().iter().map(|m| m.as_i64().unwrap()).collect();
    let nonzero: Vec<i64> = ms
        .iter()
        .zip(v["values"].as_array().unwrap())
        .filter(|(_, row)| row.as_array().unwrap().iter().any(|w| w.as_f64().unwrap().abs() > 1e-15))
        .map(|(m, _)| *m)
        .collect();
    assert_eq!(nonzero, vec![-8, 0, 8]);
    assert_eq!(v["meta"]["n_k"], 64);
    assert_eq!(v["meta"]["tails_truncated"], false);
}

#[test]
fn eta_reports() {
    let keys = [
        "eta", "raw_negativity", "quad_error_estimate", "min_value", "min_point", "n_k", "tail_eps", "tol",
        "output_format",
    ];
    let v = json(&lwig(&["eta", "--spec", &spec("two_deltas.json")]));
    let mut got: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    got.sort_unstable();
    let mut want = keys.to_vec();
    want.sort_unstable();
    assert_eq!(got, want);
    assert!((v["eta"].as_f64().unwrap() - 2.0 / PI).abs() < 1e-5);

    let g = json(&lwig(&["eta", "--spec", &spec("gaussian.json")]));
    assert!(g["eta"].as_f64().unwrap() <= 1e-9);
    assert!(g["raw_negativity"].as_f64().unwrap() > 0.0);

    let d = json(&lwig(&["eta", "--spec", &spec("delta.json")]));
    assert_eq!(d["eta"].as_f64(), Some(0.0));
    assert_eq!(d["raw_negativity"].as_f64(), Some(0.0));

    let csv = stdout(&lwig(&["eta", "--spec", &spec("delta.json"), "--format", "csv"]));
    assert!(csv.starts_with("eta,raw_negativity,quad_error_estimate,min_value,min_m,min_k\n0.0,0.0,"));
}

#[test]
fn output_is_deterministic_across_runs_and_thread_counts() {
    let args = ["wigner", "--spec", &spec("two_gaussians.json"), "--nk", "512"];
    let a = stdout(&lwig(&args));
    let b = stdout(&lwig(&args));
    let c = stdout(&lwig_env(&args, &[("LW_THREADS", "1")]));
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn grid_files_round_trip_through_check_and_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let out = dir.path().join(format!("grid.{format}"));
        let out = out.to_str().unwrap();
        stdout(&lwig(&["wigner", "--spec", &spec("mixed.json"), "--nk", "32", "--format", format, "--out", out]));
        let report = json(&lwig(&["check", "--grid", out]));
        assert_eq!(report["passed"], true, "{report}");

        let rec = json(&lwig(&["reconstruct", "--grid", out]));
        let m = &rec["density"]["matrix"];
        assert!((m[0][1][0].as_f64().unwrap() - 0.2).abs() < 1e-14);
        assert!((m[0][1][1].as_f64().unwrap() - 0.1).abs() < 1e-14);
        // the reconstruction is itself a valid spec
        let again = write(dir.path(), &format!("rec_{format}.json"), &rec.to_string());
        assert_eq!(json(&lwig(&["check", "--spec", &again]))["passed"], true);
    }
}

#[test]
fn corrupted_grid_fails_the_phase_relation() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&lwig(&["wigner", "--spec", &spec("two_deltas.json"), "--nk", "32"]));
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let target = lines.iter().position(|l| l.starts_with("0,0.0,")).unwrap();
    lines[target] = "0,0.0,0.5".to_owned();
    let path = write(dir.path(), "bad.csv", &(lines.join("\n") + "\n"));
    let o = lwig(&["check", "--grid", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("phase_relation"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let phase = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "phase_relation").unwrap();
    assert_eq!(phase["passed"], false);
}

#[test]
fn check_passes_for_every_shipped_spec() {
    for name in ["delta.json", "gaussian.json", "gaussian_boosted.json", "two_deltas.json", "two_gaussians.json", "mixed.json"] {
        let v = json(&lwig(&["check", "--spec", &spec(name), "--nk", "512"]));
        assert_eq!(v["passed"], true, "{name}: {v}");
        assert_eq!(v["checks"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn marginals_match_their_direct_values() {
    let text = stdout(&lwig(&["marginals", "--spec", &spec("mixed.json"), "--nk", "16"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("axis,coordinate,marginal,expected"));
    let mut count = 0;
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        let (a, b): (f64, f64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!((a - b).abs() < 1e-12, "{l}");
        count += 1;
    }
    assert_eq!(count, 5 + 16);
}

#[test]
fn sweep_table() {
    let text = stdout(&lwig(&[
        "sweep", "--spec", &spec("sweep_template.json"), "--n0", "0:6:3", "--q0a", "0:pi:3", "--nk", "512",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n0,q0a,sigma_tilde,eta,raw_negativity,quad_error_estimate"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(&rows[0][..3], &[0.0, 0.0, 1.2]);
    assert!(rows[0][3] < 1e-8);
    assert_eq!(rows[8][1], PI);

    let v = json(&lwig(&[
        "sweep", "--spec", &spec("sweep_template.json"), "--sigma", "0.1:0.2:2", "--n0", "6:6", "--format", "json",
    ]));
    let first = &v["points"][0];
    assert_eq!(first["sigma_tilde"], 0.1);
    assert!((first["eta"].as_f64().unwrap() - 2.0 / PI).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"terms": [{"type": "gaussian", "n0": 0, "coeff": [1, 0]}]}"#);
    assert_eq!(lwig(&["wigner", "--spec", &bad]).status.code(), Some(2));
    let non_hermitian = write(
        dir.path(),
        "nh.json",
        r#"{"density": {"n_min": 0, "matrix": [[[0.5, 0], [0.1, 0]], [[0.2, 0], [0.5, 0]]]}}"#,
    );
    assert_eq!(lwig(&["check", "--spec", &non_hermitian]).status.code(), Some(2));
    assert_eq!(lwig(&["wigner", "--spec", &spec("two_deltas.json"), "--nk", "7"]).status.code(), Some(2));
    assert_eq!(lwig(&["wigner", "--spec", &spec("two_deltas.json"), "--nk", "8"]).status.code(), Some(3));
    let missing = dir.path().join("none.json");
    assert_eq!(lwig(&["eta", "--spec", missing.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(lwig_env(&["eta", "--spec", &spec("delta.json")], &[("LW_THREADS", "zero")]).status.code(), Some(2));
}

#[test]
fn failed_writes_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("grid.csv");
    let o = lwig(&["wigner", "--spec", &spec("delta.json"), "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!target.exists());

    // a Nyquist failure must not clobber an existing output
    let existing = write(dir.path(), "keep.csv", "old\n");
    let o = lwig(&["wigner", "--spec", &spec("two_deltas.json"), "--nk", "8", "--out", &existing]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(std::fs::read_to_string(&existing).unwrap(), "old\n");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
