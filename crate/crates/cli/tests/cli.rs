use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use gapcert_core::applications::{dirac2d_envelope, DiracSpec};
use gapcert_core::enclosures::{perturbed_strip, resolvent_bound_strip, resolvent_bound_strip_refined};
use gapcert_core::region::{sample_region, ClipBox, RegionSpec};
use gapcert_core::{ComplexPoint, Gap, QuadBound};
use gapcert_lab::{gen_instance, verify_instance, InstanceSpec, MatrixInstance, Structure, VerifyOptions};
use serde_json::Value;

fn gapcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapcert")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = gapcert(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> Option<i32> {
    gapcert(args).status.code()
}

fn csv_rows(path: &std::path::Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

#[test]
fn strip_example() {
    let v = json_ok(&["strip", "--a", "1", "--b", "0", "--alpha", "0", "--beta", "3"]);
    assert_eq!(v["lo"], 1.0);
    assert_eq!(v["hi"], 2.0);
    assert_eq!(v["open"], true);
    assert_eq!(v["status"], "open");
}

#[test]
fn closed_strip_is_reported_not_failed() {
    let v = json_ok(&["strip", "--a", "2", "--b", "0", "--alpha", "0", "--beta", "3"]);
    assert_eq!(v["open"], false);
    assert_eq!(v["status"], "closed");
}

#[test]
fn b_at_least_one_is_not_applicable() {
    for b in ["1", "1.2"] {
        let v = json_ok(&["strip", "--a", "1", "--b", b, "--alpha", "0", "--beta", "3"]);
        assert_eq!(v["status"], "not-applicable");
        assert!(v["reason"].is_string());
    }
}

#[test]
fn parameter_errors_exit_2() {
    assert_eq!(code(&["strip", "--a", "-1", "--alpha", "0", "--beta", "3"]), Some(2));
    assert_eq!(code(&["strip", "--a", "1", "--alpha", "3", "--beta", "0"]), Some(2));
    assert_eq!(code(&["strip", "--a", "1", "--alpha", "0"]), Some(2));
    assert_eq!(code(&["strip", "--a", "1", "--alpha", "0", "--beta", "3", "--gamma", "1"]), Some(2));
    assert_eq!(code(&["strip", "stray"]), Some(2));
    assert_eq!(code(&["powerlaw", "--p1", "2", "--q1", "1", "--extra", "0"]), Some(2));
    assert_eq!(code(&["strip", "--json", "/nonexistent/params.json"]), Some(2));
    assert_eq!(code(&["verify", "--suite", "nope"]), Some(2));
    assert_eq!(code(&["verify", "--dim", "6", "--inset", "0"]), Some(2));
}

#[test]
fn unknown_command_prints_usage() {
    let out = gapcert(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn numerical_failure_exits_3() {
    let mut inst = gen_instance(&InstanceSpec::new(5, Structure::None, 0.7), 3).unwrap();
    inst.a[(0, 0)] = ComplexPoint::new(1e308, 1e308);
    inst.a[(1, 1)] = ComplexPoint::new(1e308, -1e308);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    fs::write(&path, serde_json::json!({ "instance": inst }).to_string()).unwrap();
    let out = gapcert(&["verify", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn dirac_envelope_csv_has_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let v = json_ok(&["dirac-envelope", "--p", "5", "--vnorm", "1", "--samples", "200", "--csv", path.to_str().unwrap()]);
    let (header, rows) = csv_rows(&path);
    assert_eq!(header, "segment,re,im");
    assert_eq!(rows.len(), 200);
    assert_eq!(v["points"].as_array().unwrap().len(), 200);
}

#[test]
fn dirac_envelope_matches_library_bit_for_bit() {
    let v = json_ok(&["dirac-envelope", "--p", "7", "--v-norm", "2", "--samples", "50"]);
    let env = dirac2d_envelope(DiracSpec::new(2.0, 7.0).unwrap(), 50, None).unwrap();
    for (pt, got) in env.points.iter().zip(v["points"].as_array().unwrap()) {
        assert_eq!(got["re"].as_f64().unwrap().to_bits(), pt.re.to_bits());
        assert_eq!(got["im"].as_f64().unwrap().to_bits(), pt.im.to_bits());
    }
}

#[test]
fn strip_and_resolvent_match_library_bit_for_bit() {
    let (a, b, alpha, beta) = (0.3125, 0.21, -0.7, 2.3);
    let q = QuadBound::new(a, b).unwrap();
    let g = Gap::new(alpha, beta).unwrap();
    let s = perturbed_strip(q, g).unwrap();
    let args = ["--a", "0.3125", "--b", "0.21", "--alpha", "-0.7", "--beta", "2.3"];
    let v = json_ok(&[&["strip"][..], &args].concat());
    assert_eq!(v["lo"].as_f64().unwrap().to_bits(), s.lo.to_bits());
    assert_eq!(v["hi"].as_f64().unwrap().to_bits(), s.hi.to_bits());

    let z = ComplexPoint::new(0.8, 0.05);
    let v = json_ok(&[&["resolvent"][..], &args, &["--re", "0.8", "--im", "0.05"]].concat());
    assert_eq!(v["bound"].as_f64().unwrap().to_bits(), resolvent_bound_strip(q, g, z).unwrap().to_bits());
    assert_eq!(v["refined"].as_f64().unwrap().to_bits(), resolvent_bound_strip_refined(q, g, z).unwrap().to_bits());
}

#[test]
fn json_document_and_stdin_agree_with_flags() {
    let flags = json_ok(&["strip", "--a", "0.5", "--b", "0.25", "--alpha", "1", "--beta", "4"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(&path, r#"{"a": 0.5, "b": 0.25, "alpha": 1, "beta": 4}"#).unwrap();
    assert_eq!(json_ok(&["strip", "--json", path.to_str().unwrap()]), flags);

    let mut child = Command::new(env!("CARGO_BIN_EXE_gapcert"))
        .args(["strip", "--json", "-", "--b", "0.25"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"a": 0.5, "b": 0.9, "alpha": 1, "beta": 4}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap(), flags);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = gapcert(&["strip", "--a", "1", "--alpha", "0", "--beta", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["lo"], 1.0);
}

#[test]
fn hyperbola_with_zero_b_is_two_lines() {
    let v = json_ok(&["sample-region", "--region", "hyperbola", "--a", "1.5", "--b", "0", "--resolution", "9"]);
    let segs = v["segments"].as_array().unwrap();
    assert_eq!(segs.len(), 2);
    let mut levels: Vec<f64> = Vec::new();
    for seg in segs {
        let pts = seg["points"].as_array().unwrap();
        assert_eq!(pts.len(), 9);
        let im0 = pts[0][1].as_f64().unwrap();
        assert!(pts.iter().all(|p| p[1].as_f64().unwrap() == im0));
        levels.push(im0);
    }
    levels.sort_by(f64::total_cmp);
    assert_eq!(levels, [-1.5, 1.5]);
    // default clip: ten times the largest input
    assert_eq!(v["clip"]["re"], 15.0);
}

#[test]
fn clipped_strip_is_a_rectangle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let args = [
        "sample-region", "--region", "strip", "--lo", "1", "--hi", "2", "--clip.re", "5", "--clip.im", "5",
        "--resolution", "4", "--csv", path.to_str().unwrap(),
    ];
    json_ok(&args);
    let (header, rows) = csv_rows(&path);
    assert_eq!(header, "segment,re,im");
    assert_eq!(rows.len(), 4 * 4);
    for row in &rows {
        let (re, im): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
        assert!((1.0..=2.0).contains(&re) && (-5.0..=5.0).contains(&im));
        assert!(re == 1.0 || re == 2.0 || im.abs() == 5.0);
    }
    let spec = RegionSpec::Strip { lo: 1.0, hi: 2.0 };
    let segs = sample_region(&spec, 4, Some(ClipBox { re: 5.0, im: 5.0 })).unwrap();
    let lib: Vec<[f64; 2]> = segs.iter().flat_map(|s| s.points.iter().copied()).collect();
    for (row, p) in rows.iter().zip(&lib) {
        assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), p[0].to_bits());
        assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), p[1].to_bits());
    }
}

#[test]
fn region_resolution_below_two_is_rejected() {
    assert_eq!(code(&["sample-region", "--region", "strip", "--lo", "1", "--hi", "2", "--resolution", "1"]), Some(2));
}

#[test]
fn verify_single_instance_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let v = json_ok(&[
        "verify", "--dim", "6", "--structure", "none", "--ratio", "0.5", "--seed", "9", "--full", "--csv",
        path.to_str().unwrap(),
    ]);
    let inst: MatrixInstance = serde_json::from_value(v["instance"].clone()).unwrap();
    let spec = InstanceSpec::new(6, Structure::None, 0.5);
    assert_eq!(inst, gen_instance(&spec, 9).unwrap());
    let report = verify_instance(&inst, &VerifyOptions::default()).unwrap();
    assert_eq!(v["pass"], report.pass);
    assert_eq!(serde_json::from_value::<gapcert_lab::VerificationReport>(v.clone()).ok().map(|r| r.checks), Some(report.checks.clone()));
    let (header, rows) = csv_rows(&path);
    assert_eq!(header, "instance,check,margin,pass");
    assert_eq!(rows.len(), report.checks.len());
}

#[test]
fn verify_suite_is_deterministic() {
    let args = ["verify", "--suite", "standard", "--instances", "4", "--seed", "11"];
    let a = json_ok(&args);
    assert_eq!(a, json_ok(&args));
    assert_eq!(a["instances"], 4);
    assert_eq!(a["pass"], true);
    assert_eq!(a["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn mutated_suite_reports_failures_with_exit_0() {
    let v = json_ok(&["verify", "--suite", "standard", "--instances", "4", "--seed", "11", "--mutation", "1.5"]);
    assert_eq!(v["pass"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn every_command_answers() {
    let cases: [&[&str]; 15] = [
        &["enclose", "--a", "0.5", "--b", "0.3", "--re", "1", "--im", "2", "--beta", "-1"],
        &["enclose", "--a-lin", "0.5", "--b-lin", "0.3", "--x", "2"],
        &["symmetric-gap", "--a", "0.5", "--b", "0.2", "--beta", "2"],
        &["gk-cover", "--eps", "0.5", "--a-eps", "1", "--b-eps", "0.3"],
        &["gk-cover", "--eps", "0.5", "--c", "1", "--p", "0.5"],
        &["eig-strip", "--a", "0.1", "--b", "0.1", "--lambda", "1", "--alpha", "0", "--beta", "2", "--mult", "2"],
        &["gaps", "--delta", "0.3", "--model.kind", "geometric", "--model.ratio", "3", "--model.gap-fractions", "[0.5]"],
        &["kappa", "--lengths", "1,2,3,4", "--widths", "1,1,1,1", "--a-n", "0.1,0.1,0.1,0.1", "--b-n", "0,0,0,0"],
        &["growth-check", "--delta", "0.3", "--model.kind", "power-growth", "--model.exponent", "2", "--model.theta", "0.5"],
        &["powerlaw", "--p1", "2", "--q1", "1", "--a.coef", "0.1", "--b.coef", "0.1", "--b.exponent", "-1"],
        &["structured", "--kind", "even", "--a12", "0.5", "--a21", "0.5", "--beta1", "1", "--beta2", "2"],
        &["structured", "--kind", "odd", "--a11", "0.1", "--a22", "0.1", "--beta", "2"],
        &["coulomb", "--c1", "0.2", "--c2", "0.1", "--m", "1"],
        &["manifold", "--c", "1", "--p", "4", "--case", "1", "--eps-geom", "0.1"],
        &["two-channel", "--d", "1", "--p", "2", "--v12", "0.5", "--p0", "1"],
    ];
    for args in cases {
        let v = json_ok(args);
        let status = v["status"].as_str().unwrap_or_else(|| panic!("{args:?}: no status"));
        assert!(["ok", "open", "closed", "not-applicable"].contains(&status), "{args:?}: {status}");
        assert_ne!(status, "not-applicable", "{args:?}: {v}");
    }
}

#[test]
fn gap_outside_zero_is_not_applicable_for_offdiag() {
    let v = json_ok(&["structured", "--kind", "offdiag", "--a12", "0.5", "--a21", "0.5", "--alpha", "1", "--beta", "3"]);
    assert_eq!(v["status"], "not-applicable");
}
