use std::path::PathBuf;
use std::process::{Command, Output};

use bundle_lab::cli::main_with_args;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bundle-lab")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("bundle-lab").chain(args.iter().copied()))
}

#[test]
fn detlog_half_twisted_triangle() {
    let v = json(&["detlog", "--a", "3", "--lambda", "0.5"]);
    assert!((v["eigen_logdet"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
    assert!((v["lu_logdet"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    for args in [
        &["detlog", "--a", "4,3", "--lambda", "0.2,0.7"][..],
        &["zeta", "cd", "--d", "2"],
        &["asymptotics", "thm11", "--d", "2", "--lambda", "0.3,0.7", "--ns", "8,16"],
        &["theta", "--alpha", "1,2", "--lambda", "0.5,0.1", "--ts", "0.1,1,3"],
    ] {
        let out = run(args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{args:?}");
    }
}

#[test]
fn crsf_check_on_bundled_samples() {
    for (file, count) in [("cycle5.json", 1), ("torus22.json", 66)] {
        let v = json(&["crsf-check", &data(file)]);
        assert_eq!(v["crsf_count"], count);
        assert!(v["abs_err"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn zeta_commands() {
    let v = json(&["zeta", "eh-deriv0", "--d", "1", "--lambda", "0.5"]);
    assert!((v["value"].as_f64().unwrap() + 2.0 * 2f64.ln()).abs() < 1e-10);
    assert_eq!(v["method"], "poisson_dual");
    let v = json(&["zeta", "kronecker", "--alpha", "1,1", "--lambda", "0,0.5"]);
    let w = json(&["zeta", "eh-deriv0", "--alpha", "1,1", "--lambda", "0,0.5"]);
    assert!((v["value"].as_f64().unwrap() - w["value"].as_f64().unwrap()).abs() < 1e-10);
    let v = json(&["zeta", "eh", "--d", "1", "--lambda", "0.5", "--s", "1"]);
    assert!((v["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let v = json(&["zeta", "zd", "--d", "2", "--s", "0"]);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = json(&["zeta", "gn", "--a", "3", "--lambda", "0.5", "--s", "0"]);
    assert!((v["value"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((v["deriv0"].as_f64().unwrap() + 4f64.ln()).abs() < 1e-12);
}

#[test]
fn asymptotics_commands() {
    let v = json(&["asymptotics", "thm13", "--d", "1", "--s", "0.25", "--ns", "16,32,64"]);
    assert_eq!(v["strictly_decreasing"], true);
    assert_eq!(v["lambda"][0], 0.5);
    let v = json(&["asymptotics", "product-formula", "--m", "3,2", "--n", "2", "--z", "i,-1"]);
    assert!(v["relative_error"].as_f64().unwrap() < 1e-9);
    let v = json(&["asymptotics", "theta-gap", "--d", "2", "--ns", "4,8,16", "--t", "0.5"]);
    let gaps: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["gap"].as_f64().unwrap()).collect();
    assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0]);
}

#[test]
fn csv_output() {
    let out = run(&["--format", "csv", "theta", "--a", "3,2", "--lambda", "0.5,0", "--ts", "0,1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,theta,bessel_form");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.0000000000000000e0,6.0000000000000000e0,"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["asymptotics", "thm11", "--d", "2", "--lambda", "0.3,0.7", "--ns", "8,16,32,64"];
    let one = run(&[&["--threads", "1"][..], &args].concat()).stdout;
    let four = run(&[&["--threads", "4"][..], &args].concat()).stdout;
    assert_eq!(one, four);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.display().to_string();
    assert_eq!(code(&["--out", &p, "zeta", "cd", "--d", "1"]), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["value"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn exit_codes() {
    // trivial bundle has a zero mode
    assert_eq!(code(&["detlog", "--a", "3"]), 2);
    // pole of the lattice zeta function
    assert_eq!(code(&["zeta", "zd", "--d", "2", "--s", "1"]), 2);
    assert_eq!(code(&["zeta", "cd"]), 2);
    assert_eq!(code(&["--tol", "0", "zeta", "cd", "--d", "1"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["crsf-check", "/nonexistent/graph.json"]), 1);
    assert_eq!(code(&["--help"]), 0);
    let out = run(&["detlog", "--a", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero"));
}

#[test]
fn non_convergence_maps_to_three() {
    let e = bundle_lab::Error::NonConvergence { context: "x".into(), value: 0.0, error: 1.0 };
    assert_eq!(e.exit_code(), 3);
}
