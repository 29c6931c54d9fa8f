use std::f64::consts::PI;

use super::*;
use crate::cohomology::parse_functional;
use crate::jetcalc::BvModel;

fn scalar() -> BvModel {
    BvModel::new(1, vec![("q", 0)]).unwrap()
}

fn section(model: &BvModel, text: &str) -> SectionSpec {
    SectionSpec::parse(model, text).unwrap()
}

fn eval(model: &BvModel, f: &str, s: &SectionSpec) -> GrassmannNumber {
    let f = parse_functional(model, f).unwrap();
    let n = required_points_functional(&f, s).unwrap();
    evaluate(model, &f, s, n).unwrap()
}

#[test]
fn total_derivative_integrates_to_zero() {
    let m = scalar();
    let s = section(&m, "q = sin(1)");
    assert!(eval(&m, "q*q_x", &s).max_abs() < 1e-12);
}

#[test]
fn square_of_sine() {
    let m = scalar();
    let s = section(&m, "q = sin(1)");
    assert!((eval(&m, "q^2", &s).body() - PI).abs() < 1e-12);
}

#[test]
fn odd_antifield_pairing() {
    let m = scalar();
    let s = section(&m, "q = cos(1)\nq† = t1*sin(1)");
    let v = eval(&m, "dag(q)*q_x", &s);
    let expected = GrassmannNumber::generator(1).scale(-PI);
    assert!(v.distance(&expected) < 1e-12, "{v}");
}

#[test]
fn products_of_blocks_multiply() {
    let m = scalar();
    let s = section(&m, "q = 1 + sin(1)");
    let v = eval(&m, "int(q)*int(q^2)", &s);
    assert!((v.body() - 2.0 * PI * 3.0 * PI).abs() < 1e-9);
}

#[test]
fn transcendental_factor_converges() {
    let m = scalar();
    let s = section(&m, "q = cos(1)");
    // ∫ cos(cos x) dx = 2π J0(1)
    let j0_1 = 0.765_197_686_557_966_6;
    assert!((eval(&m, "cos(q)", &s).body() - 2.0 * PI * j0_1).abs() < 1e-12);
}

#[test]
fn too_few_points_is_an_error() {
    let m = scalar();
    let s = section(&m, "q = sin(3)");
    let f = parse_functional(&m, "q^2").unwrap();
    assert_eq!(evaluate(&m, &f, &s, 4), Err(OracleError::InsufficientPoints { needed: 12, given: 4 }));
}

#[test]
fn restriction_matches_quadrature() {
    let m = scalar();
    let s = random_section(&m, 3, 2);
    let e = crate::text::parse_expr(&m, "q^2*q_xx + 3*q_x").unwrap();
    let exact = restrict(&m, &e, &s).unwrap().exact_integral();
    let n = required_points(&e, &s).unwrap();
    assert!(exact.distance(&evaluate_density(&m, &e, &s, n).unwrap()) < 1e-9);
}

#[test]
fn bracket_matches_finite_difference() {
    let m = scalar();
    let s = section(&m, "q = sin(1) + 1/2*cos(2)");
    let f = parse_functional(&m, "q^3 + q_x^2").unwrap();
    let g = parse_functional(&m, "dag(q)*q^2 + dag(q)*q_x*q").unwrap();
    let fd = finite_difference_bracket(&m, &f, &g, &s, 1e-4).unwrap();
    assert!(fd.relative_error() < 1e-4, "{fd:?}");
    assert!(fd.symbolic.abs() > 1e-3);
}
