use std::process::Command;

fn bvcalc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bvcalc")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("bvcalc-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp dir is writable");
    path
}

#[test]
fn euler_of_a_cubic_lagrangian() {
    let (code, out, _) = bvcalc(&["euler", "q*q_x^2", "q"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-2*q*q_xx - q_x^2");
}

#[test]
fn laplacian_of_an_antifield_monomial() {
    let (code, out, _) = bvcalc(&["laplacian", "dag(q)*q^2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "2*int(q)");
}

#[test]
fn bracket_of_field_only_functionals_vanishes() {
    let (code, out, _) = bvcalc(&["schouten", "q^3", "q_x^2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "0");
}

#[test]
fn parse_errors_point_at_the_column() {
    let (code, _, err) = bvcalc(&["schouten", "q^3", "q+"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 3"), "{err}");
    assert!(err.lines().last().is_some_and(|l| l.trim_end().ends_with('^')), "{err}");
}

#[test]
fn scalar_example_passes_and_naive_mode_fails() {
    let (code, out, _) = bvcalc(&["example", "scalar"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("LHS = RHS (structural) ; LHS ~ RHS (cohomological)"), "{out}");
    let (code, _, _) = bvcalc(&["example", "scalar", "--mode", "naive"]);
    assert_eq!(code, 1);
}

#[test]
fn example_report_is_json() {
    let (code, out, _) = bvcalc(&["example", "scalar", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
    assert!(v["steps"].as_array().is_some_and(|s| !s.is_empty()));
}

#[test]
fn suite_report_is_json() {
    let (code, out, _) = bvcalc(&["check", "skew", "--cases", "5", "--seed", "3", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "skew");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["cases"].as_array().map(Vec::len), Some(5));
}

#[test]
fn suites_are_reproducible_from_the_seed() {
    let a = bvcalc(&["check", "jacobi", "--cases", "4", "--seed", "11", "--json"]);
    let b = bvcalc(&["check", "jacobi", "--cases", "4", "--seed", "11", "--json"]);
    assert_eq!(a, b);
}

#[test]
fn evaluate_with_a_section_file() {
    let section = temp_file("section.txt", "q = sin(1)\n");
    let (code, out, _) = bvcalc(&["evaluate", "q^2", section.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    let value: f64 = v["value"].as_str().unwrap().parse().unwrap();
    assert!((value - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn evaluate_with_a_model_file() {
    let model = temp_file("model.toml", "[base] dim = 1\n[fields]\nq ghost = 0\nc ghost = 1\n[sections]\nq = cos(1)\n");
    let (code, out, _) = bvcalc(&["evaluate", "-m", model.to_str().unwrap(), "q^2"]);
    assert_eq!(code, 0);
    assert!(out.contains("value = 3.14159265358979"), "{out}");
}

#[test]
fn too_few_points_is_a_usage_error() {
    let section = temp_file("coarse.txt", "q = sin(3)\n");
    let (code, _, err) = bvcalc(&["evaluate", "q^2", section.to_str().unwrap(), "--points", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("12"), "{err}");
}

#[test]
fn malformed_model_file_reports_the_line() {
    let model = temp_file("bad.toml", "[base]\ndim = 1\n[fields]\nq spin = 0\n");
    let (code, _, err) = bvcalc(&["euler", "-m", model.to_str().unwrap(), "q", "q"]);
    assert_eq!(code, 2);
    assert!(err.contains('4'), "{err}");
}
