use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confocal")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn generate_planar_net_with_both_parities() {
    let d = TempDir::new().unwrap();
    let out = p(&d, "net.json");
    let o = run(&["generate", "--alphas", "5", "1", "--window", "-5:-1,-1:6", "--both-parities", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(Path::new(&out));
    // 5·8 integer points and 4·7 half-integer points
    assert_eq!(v["points"].as_array().unwrap().len(), 68);
    assert_eq!(v["alpha"], serde_json::json!([5, 1]));
}

#[test]
fn generate_rejects_misordered_spectrum() {
    let o = run(&["generate", "--alphas", "1", "5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn generate_continuous_samples() {
    let d = TempDir::new().unwrap();
    let out = p(&d, "cont.json");
    let o = run(&["generate", "--continuous", "--a", "2", "1", "--grid", "32x32", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_file(Path::new(&out))["samples"].as_array().unwrap().len(), 1024);
}

#[test]
fn verify_planar_and_spatial_spectra_pass() {
    let d = TempDir::new().unwrap();
    let rep = p(&d, "r2.json");
    let o = run(&["verify", "--alphas", "5", "1", "--window", "-5:-1,-1:6", "-o", &rep]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(Path::new(&rep));
    assert!(v["suites"]["planar.tau_commutator"]["pass"].as_bool().unwrap());
    assert_eq!(v["config_echo"]["window"], "-5:-1,-1:6");

    let rep = p(&d, "r3.json");
    let o = run(&["verify", "--alphas", "8", "4", "1", "-o", &rep]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json_file(Path::new(&rep))["suites"]["mesh.planarity"]["count"].as_u64().unwrap() > 0);
}

#[test]
fn verify_continuous() {
    let o = run(&["verify", "--continuous", "--a", "3", "2", "1", "--samples", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["suites"]["continuous.inversion"]["pass"].as_bool().unwrap());
}

#[test]
fn verify_perturbed_net_fails_with_named_suites() {
    let d = TempDir::new().unwrap();
    let net = p(&d, "net.json");
    assert_eq!(code(&run(&["generate", "--alphas", "5", "1", "--both-parities", "-o", &net])), 0);
    let o = run(&["verify", "--net", &net]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", "--net", &net, "--perturb", "1e-3", "--seed", "7"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("FAIL discrete.depd"), "{err}");
    assert!(err.contains("FAIL discrete.closed_form"), "{err}");
}

#[test]
fn verify_error_codes() {
    let d = TempDir::new().unwrap();
    let bad = p(&d, "bad.json");
    std::fs::write(&bad, "{\"N\": 2").unwrap();
    assert_eq!(code(&run(&["verify", "--net", &bad])), 2);
    assert_eq!(code(&run(&["verify", "--net", &p(&d, "missing.json")])), 3);
    assert_eq!(code(&run(&["verify", "--alphas", "5", "1", "--tolerance", "nope=1"])), 2);
    assert_eq!(code(&run(&["verify", "--bogus-flag"])), 2);
}

#[test]
fn tolerance_override_can_fail_a_suite() {
    let o = run(&["verify", "--alphas", "5", "1", "--tolerance", "depd=0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn export_ellipsoid_with_duals_focal_and_reflection() {
    let d = TempDir::new().unwrap();
    let out = p(&d, "mesh");
    let o = run(&["export", "--alphas", "8", "4", "1", "--window", "-8:-4,-4:-1,-1:8", "--layer", "3:2", "--duals", "--focal", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["n3_2.obj", "n3_1.5.obj", "n3_2.5.obj", "focal_hyperbola.obj", "focal_ellipse.obj"] {
        assert!(Path::new(&out).join(name).exists(), "{name}");
    }
    let obj = std::fs::read_to_string(Path::new(&out).join("n3_2.obj")).unwrap();
    let parsed = confocal_core::mesh::parse_obj(&obj).unwrap();
    // n1 ∈ [-8,-4], n2 ∈ [-4,-1]
    assert_eq!(parsed.vertices.len(), 20);
    assert_eq!(parsed.faces.len(), 12);

    let o = run(&["export", "--alphas", "8", "4", "1", "--layer", "3:2", "--reflect", "--format", "json", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(Path::new(&out).join("n3_2_reflected.json")).unwrap();
    let mesh = confocal_core::mesh::QuadSurfaceMesh::from_json(&text).unwrap();
    assert!(mesh.layer.reflected);
    assert_eq!(mesh.faces.len(), 8 * 12);
}

#[test]
fn export_planar_conic() {
    let d = TempDir::new().unwrap();
    let out = p(&d, "conics");
    let o = run(&["export", "--alphas", "5", "1", "--layer", "2:1", "-o", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let obj = std::fs::read_to_string(Path::new(&out).join("n2_1.obj")).unwrap();
    assert!(obj.lines().any(|l| l.starts_with("l ")));
}

#[test]
fn export_errors() {
    let d = TempDir::new().unwrap();
    let file = p(&d, "plain");
    std::fs::write(&file, "x").unwrap();
    assert_eq!(code(&run(&["export", "--alphas", "8", "4", "1", "--layer", "3:2", "-o", &file])), 3);
    assert_eq!(code(&run(&["export", "--alphas", "8", "4", "1", "--layer", "3:x", "-o", &p(&d, "o")])), 2);
    // outside the window, and outside the domain
    assert_eq!(code(&run(&["export", "--alphas", "8", "4", "1", "--layer", "3:40", "-o", &p(&d, "o")])), 2);
    assert_eq!(code(&run(&["export", "--alphas", "8", "4", "1", "--layer", "3:-5", "-o", &p(&d, "o")])), 2);
}

#[test]
fn icnet_builtin_rhombic_verifies() {
    let o = run(&["icnet", "--builtin", "rhombic", "--verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["suites"]["icnet.v_koenigs_eta"]["pass"].as_bool().unwrap());
}

#[test]
fn icnet_solve_then_verify_file() {
    let d = TempDir::new().unwrap();
    let seed = p(&d, "seed.json");
    let solved = p(&d, "solved.json");
    let rep = p(&d, "report.json");
    let offsets: Vec<f64> = (0..36).map(|k| 1e-3 * (((k * 7) % 5) as f64 - 2.0) / 2.0).collect();
    std::fs::write(&seed, confocal_core::icnet::LineGrid::rhombic(9).perturbed(&offsets).unwrap().to_json().unwrap()).unwrap();
    assert_eq!(code(&run(&["icnet", "--verify", &seed])), 1);
    let o = run(&["icnet", "--solve", &seed, "--tol", "1e-10", "-o", &solved, "--report", &rep]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(Path::new(&rep));
    assert!(v["suites"]["icnet.solver"]["max_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(code(&run(&["icnet", "--verify", &solved])), 0);
}

#[test]
fn icnet_bad_inputs() {
    let d = TempDir::new().unwrap();
    let bad = p(&d, "bad.json");
    std::fs::write(&bad, "{\"rows\": [[2, 0, 1]], \"cols\": []}").unwrap();
    assert_eq!(code(&run(&["icnet", "--verify", &bad])), 2);
    assert_eq!(code(&run(&["icnet", "--builtin", "hexagonal"])), 2);
    assert_eq!(code(&run(&["icnet"])), 2);
}
