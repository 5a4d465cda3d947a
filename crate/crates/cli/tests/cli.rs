use std::path::Path;
use std::process::{Command, Output};

use zonofit::approx::{approximation_report, ApproximationMode};
use zonofit::process::{forward_zonotope_moments, CentralFaceMoments};
use zonofit::Body64;
use zonofit_cli::{cmd_approximate, ApproximateArgs, Format, Mode};

fn zonofit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonofit")).args(args).output().expect("run zonofit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn approximate_square_is_exact() {
    let v = json(&zonofit(&["approximate", "--shape", "square", "--n", "2", "--mode", "c0"]));
    assert_eq!(v["alpha"], serde_json::json!([1.0, 1.0]));
    assert_eq!(v["d_hausdorff"], 0.0);
}

#[test]
fn approximate_ellipse_face_order() {
    // the first face lies along the x-axis, which carries the 3-semiaxis
    let v = json(&zonofit(&["approximate", "--shape", "ellipse:3,1,0", "--n", "2"]));
    assert_eq!(v["alpha"], serde_json::json!([6.0, 2.0]));
    assert!(v["d_hausdorff"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
}

#[test]
fn approximate_disk_cinf() {
    let v = json(&zonofit(&["approximate", "--shape", "disk:1", "--n", "3", "--mode", "cinf"]));
    assert!((v["d_hausdorff"].as_f64().unwrap() - (2.0 / 3f64.sqrt() - 1.0)).abs() < 1e-6);
}

#[test]
fn command_output_equals_library_output() {
    let args = ApproximateArgs { shape: "ellipse:2,1,0.3".into(), n: 5, mode: Mode::Cinf };
    let out = cmd_approximate(&args, Format::Json).unwrap();
    let body = Body64::ellipse(2.0, 1.0, 0.3).unwrap();
    let report = approximation_report(&body, 5, ApproximationMode::Cinf).unwrap();
    let expected = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(out.files[0].1, expected);
    let bin = zonofit(&["approximate", "--shape", "ellipse:2,1,0.3", "--n", "5", "--mode", "cinf"]);
    assert_eq!(stdout(&bin), expected);
}

#[test]
fn exit_codes() {
    assert_eq!(zonofit(&["approximate", "--shape", "blob:1", "--n", "3"]).status.code(), Some(2));
    assert_eq!(zonofit(&["approximate", "--shape", "disk:1", "--n", "1"]).status.code(), Some(2));
    assert_eq!(zonofit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_csv() {
    let o = zonofit(&["sweep", "--n-range", "2..4", "--k", "1", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# zonofit v1"));
    assert_eq!(lines.next(), Some("n,k,d_hausdorff,bound,mode"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    // disk rows: R(sec(π/2n) − 1) with R = 1/(2π)
    let r = 1.0 / (2.0 * std::f64::consts::PI);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let n: f64 = f[0].parse().unwrap();
        let d: f64 = f[2].parse().unwrap();
        let exact = r * (1.0 / (std::f64::consts::PI / (2.0 * n)).cos() - 1.0);
        assert!((d - exact).abs() < 1e-8, "{row}");
    }
    let empty = stdout(&zonofit(&["sweep", "--n-range", "5..4", "--format", "csv"]));
    assert_eq!(empty, "# zonofit v1\nn,k,d_hausdorff,bound,mode\n");
}

#[test]
fn sweep_is_nonincreasing_for_k3() {
    let o = zonofit(&["sweep", "--n-range", "2..20", "--k", "3", "--orientations", "8"]);
    let rows = json(&o);
    let cinf: Vec<f64> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["mode"] == "cinf")
        .map(|r| r["d_hausdorff"].as_f64().unwrap())
        .collect();
    assert_eq!(cinf.len(), 19);
    assert!(cinf.windows(2).all(|w| w[1] <= w[0] + 1e-6));
}

fn simulate(dir: &Path, model: &str, n: &str, samples: &str) -> (String, serde_json::Value) {
    let prefix = dir.join("run");
    let o = Command::new(env!("CARGO_BIN_EXE_zonofit"))
        .args(["simulate", "--model", model, "--n", n, "--samples", samples, "--seed", "4", "--out"])
        .arg(&prefix)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.join("run.csv")).unwrap();
    let report = serde_json::from_str(&std::fs::read_to_string(dir.join("run.json")).unwrap()).unwrap();
    (csv, report)
}

#[test]
fn simulate_deterministic_square() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, _) = simulate(dir.path(), r#"{"kind":"deterministic_body","body":{"kind":"square"}}"#, "4", "10");
    let rows: Vec<&str> = csv.lines().skip(2).collect();
    assert_eq!(rows.len(), 40);
    let h: Vec<&str> = rows.iter().map(|r| r.rsplit(',').next().unwrap()).collect();
    for s in 0..10 {
        assert_eq!(h[4 * s..4 * s + 4], h[0..4]);
    }
}

#[test]
fn simulate_then_estimate_square() {
    let dir = tempfile::tempdir().unwrap();
    let model = r#"{"kind":"isotropic_rectangle","sides":{"dist":"fixed","value":[1,1]}}"#;
    let (_, report) = simulate(dir.path(), model, "2", "100000");
    assert_eq!(report["stationarity"]["passed"], true);
    assert_eq!(report["existence"]["passed"], true);
    let o = zonofit(&["estimate", "--input", dir.path().join("run.csv").to_str().unwrap()]);
    let c = json(&o);
    for k in 0..2 {
        let v = c["v_alpha"][k].as_f64().unwrap();
        let se = c["stderr_v_alpha"][k].as_f64().unwrap();
        assert!((v - 1.0).abs() <= 3.0 * se, "v[{k}] = {v} ± {se}");
    }
    let under = zonofit(&[
        "estimate",
        "--input",
        dir.path().join("run.csv").to_str().unwrap(),
        "--solver",
        "nnls",
        "--n",
        "8",
    ]);
    assert_eq!(under.status.code(), Some(4));
}

#[test]
fn estimate_noiseless_moments() {
    let dir = tempfile::tempdir().unwrap();
    let truth = CentralFaceMoments::new(0.8, vec![1.0, 0.3, 0.1, 0.1, 0.3]).unwrap();
    let m = forward_zonotope_moments(&truth).unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, serde_json::to_string(&m).unwrap()).unwrap();
    for solver in ["linear", "nnls"] {
        let c = json(&zonofit(&["estimate", "--input", path.to_str().unwrap(), "--solver", solver]));
        assert!((c["mean_alpha"].as_f64().unwrap() - 0.8).abs() < 1e-10);
        for k in 0..5 {
            let v = c["v_alpha"][k].as_f64().unwrap();
            assert!((v - truth.v_alpha[k]).abs() < 1e-10, "{solver}: {v}");
        }
    }
}

#[test]
fn estimate_rejects_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "sample_id,theta,h\n0,0,abc\n").unwrap();
    assert_eq!(zonofit(&["estimate", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "a,b\n1,2\n").unwrap();
    assert_eq!(zonofit(&["estimate", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(zonofit(&["estimate", "--input", "/nonexistent/file.csv"]).status.code(), Some(2));
}
