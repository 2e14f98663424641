use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use radial_disperse::evolution::kernel_pi2_closed;
use radial_disperse::spectral::ProblemParams;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radial-disperse"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let s = schema(name);
    let compiled = jsonschema::JSONSchema::compile(&s).unwrap();
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| e.to_string()).collect(),
    };
    panic!("{name} output violates its schema: {msgs:?}");
}

/// Data rows of a CSV output, skipping `#` lines and the header.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn meta(text: &str, key: &str) -> String {
    let prefix = format!("# {key}: ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no {key}")).to_string()
}

#[test]
fn csv_starts_with_the_version_line() {
    let o = run(&["spectrum", "--lambda-count", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("# radial-disperse v1"));
}

#[test]
fn friedrichs_density_at_l_zero_is_sqrt_lambda_over_pi() {
    let o = run(&["spectrum", "--l", "0", "--alpha", "0", "--lambda-count", "7"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["lambda", "rho_prime"]);
    assert_eq!(rows.len(), 7);
    for r in rows {
        let lam: f64 = r[0].parse().unwrap();
        let rho: f64 = r[1].parse().unwrap();
        assert!((rho - lam.sqrt() / std::f64::consts::PI).abs() <= 1e-14 * rho, "{lam} {rho}");
    }
}

#[test]
fn eigenvalue_record_at_three_quarters_pi() {
    let alpha = (3.0 * std::f64::consts::FRAC_PI_4).to_string();
    let o = run(&["spectrum", "--l", "0", "--alpha", &alpha, "--lambda-count", "2"]);
    let e: f64 = meta(&stdout(&o), "eigenvalue").parse().unwrap();
    assert!((e + 1.0).abs() < 1e-12, "{e}");
}

#[test]
fn invalid_alpha_exits_2_naming_the_constraint() {
    let o = run(&["spectrum", "--alpha", "-0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0 <= alpha < pi"));
    let o = run(&["kernel", "--l", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["kernel", "--bogus-flag"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let o = run(&["spectrum", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["spectrum", "--config", "/nonexistent-dir/cfg.toml"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn pi_half_rows_are_closed_form() {
    let o = run(&["kernel", "--l", "0.2", "--t-min", "1.5", "--t-count", "1", "--x-count", "2"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["t", "x", "y", "re", "im", "est_error", "method"]);
    let p = ProblemParams::new(0.2, std::f64::consts::FRAC_PI_2).unwrap();
    for r in rows {
        let v: Vec<f64> = r[..5].iter().map(|s| s.parse().unwrap()).collect();
        let k = kernel_pi2_closed(&p, v[0], v[1], v[2]).unwrap().value;
        assert_eq!((v[3], v[4]), (k.re, k.im), "17 digits round-trip");
        assert_eq!(r[6], "closed_form");
    }
}

#[test]
fn general_alpha_rows_use_quadrature() {
    let o = run(&["kernel", "--alpha", "1.0", "--t-count", "1", "--x-count", "1"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows[0][6], "quadrature");
    let o = run(&["kernel", "--alpha", "0", "--t-count", "1", "--x-count", "1"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows[0][6], "closed_form");
}

fn run_to_file(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--out", &p]);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn reruns_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["kernel", "--l", "-0.3", "--alpha", "2.2", "--t-count", "2", "--x-count", "3"];
    let a = run_to_file(dir.path(), "a.csv", &args);
    let b = run_to_file(dir.path(), "b.csv", &args);
    assert_eq!(a, b);
    let serial = bin().args(args).env("RADIAL_DISPERSE_THREADS", "1").output().unwrap();
    assert_eq!(serial.stdout, a);
}

#[test]
fn thread_cap_must_be_positive() {
    let o = bin().args(["spectrum"]).env("RADIAL_DISPERSE_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_outputs_match_the_schemas() {
    let cases: [(&str, &[&str]); 4] = [
        ("spectrum", &["spectrum", "--alpha", "2.5", "--lambda-count", "4"]),
        ("kernel", &["kernel", "--alpha", "0.7", "--t-count", "2", "--x-count", "2"]),
        ("decay", &["decay", "--l", "-0.25", "--t-count", "4", "--x-count", "4", "--x-max", "20"]),
        ("spectrum", &["spectrum", "--alpha", "0.5", "--lambda-count", "3"]),
    ];
    for (name, args) in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let o = run(&a);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_valid(name, &doc);
    }
    let dir = tempfile::tempdir().unwrap();
    let bytes = run_to_file(dir.path(), "v.json", &["validate", "--format", "json", "--seed", "11"]);
    assert_valid("validate", &serde_json::from_slice(&bytes).unwrap());
}

#[test]
fn decay_reports_the_fit() {
    let o = run(&["decay", "--l", "-0.25", "--t-count", "5", "--x-count", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let slope: f64 = meta(&text, "fitted_exponent").parse().unwrap();
    assert!((slope + 0.5).abs() < 0.05, "{slope}");
    assert_eq!(meta(&text, "weight"), "unweighted");
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["t", "norm"]);
    assert_eq!(rows.len(), 5);
}

#[test]
fn short_time_span_is_rejected() {
    let o = run(&["decay", "--t-min", "10", "--t-max", "20", "--t-count", "4", "--x-count", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("decades"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "l = 0.25\nalpha = 0.0\nlambda_count = 3\n").unwrap();
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--l", "0.1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(meta(&text, "l").parse::<f64>().unwrap(), 0.1);
    assert_eq!(meta(&text, "alpha").parse::<f64>().unwrap(), 0.0);
    assert_eq!(csv_rows(&text).1.len(), 3);
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_passes_clean_and_catches_faults() {
    let o = run(&["validate", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = run(&["validate", "--seed", "5", "--inject-fault", "scale-cl"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL wronskian_boundary")));

    let o = run(&["validate", "--seed", "5", "--inject-fault", "branch-phase"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL image_method")));
}
