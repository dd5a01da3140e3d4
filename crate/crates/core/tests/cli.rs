use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const HOLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hole_scattering.toml");

const POINT: &str = r#"
case = "I"
k = 1.0
boundary = [[0, 0]]

[data]
constant = [1.0, 0.0]

[window]
x1 = [-2, 2]
x2 = [-2, 2]

[radiation]
rays = [[1, 0], [0, 1]]
radii = [1.0, 12.0]
"#;

fn trihelm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trihelm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn solve(config: &Path, out: &Path) -> Output {
    trihelm(&["solve", "--config", config.to_str().unwrap(), "--out-dir", out.to_str().unwrap()])
}

fn value(stdout: &[u8], key: &str) -> f64 {
    let text = String::from_utf8_lossy(stdout);
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{text}"))
        .parse()
        .unwrap()
}

#[test]
fn hole_run_is_deterministic_and_complete() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = solve(Path::new(HOLE), a.path());
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    assert!(solve(Path::new(HOLE), b.path()).status.success());

    for name in ["field.csv", "field_embedded.csv", "report.txt"] {
        let fa = fs::read(a.path().join(name)).unwrap();
        let fb = fs::read(b.path().join(name)).unwrap();
        assert!(fa == fb, "{name} differs between runs");
    }

    // 36 × 36 window minus the three hole points, plus the header
    let csv = fs::read_to_string(a.path().join("field.csv")).unwrap();
    assert_eq!(csv.lines().count(), 36 * 36 - 3 + 1);
    let embedded = fs::read_to_string(a.path().join("field_embedded.csv")).unwrap();
    assert_eq!(embedded.lines().count(), csv.lines().count());
    assert!(!csv.lines().any(|l| l.starts_with("2,2,") || l.starts_with("3,2,") || l.starts_with("3,3,")));

    let report = fs::read_to_string(a.path().join("report.txt")).unwrap();
    assert!(report.ends_with("status = pass\n"));
}

#[test]
fn threshold_failure_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("damped.toml");
    fs::write(&config, POINT.replace("k = 1.0", "k = 1.0\neps = 0.5")).unwrap();
    let out = solve(&config, &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("decay_exponent"));
}

#[test]
fn point_scatterer_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("point.toml");
    fs::write(&config, POINT).unwrap();
    let out = solve(&config, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert_eq!(csv.lines().count(), 25 + 1);
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, POINT.replace("k = 1.0", "k = 3.5")).unwrap();
    let out = solve(&config, dir.path());
    assert_eq!(out.status.code(), Some(2));

    let missing = trihelm(&["solve", "--config", "/nonexistent/config.toml"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn green_subcommand() {
    let out = trihelm(&["green", "--k", "1.4142135623730951", "--x1", "2", "--x2", "-1"]);
    assert!(out.status.success());
    assert!(value(&out.stdout, "stencil_residual") < 1e-10);
    let re = value(&out.stdout, "re");
    let again = trihelm(&["green", "--k", "1.4142135623730951", "--x1", "-1", "--x2", "2"]);
    assert_eq!(value(&again.stdout, "re"), re);
}

#[test]
fn dispersion_subcommand() {
    let out = trihelm(&["dispersion", "--alpha", "0.7853981633974483", "--k", "1.4142135623730951"]);
    assert!(out.status.success());
    assert!(value(&out.stdout, "residual") < 1e-12);
    assert!(value(&out.stdout, "mu") > 0.0);
}
