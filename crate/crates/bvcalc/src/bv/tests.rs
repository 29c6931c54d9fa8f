use super::*;
use crate::algebra::Parity;
use crate::cohomology::{functional_is_zero, parse_functional, print_functional, Equality};

fn scalar() -> BvModel {
    BvModel::new(1, vec![("q", 0)]).unwrap()
}

fn f(m: &BvModel, s: &str) -> Functional {
    parse_functional(m, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

#[test]
fn scalar_example_laplacians() {
    let m = scalar();
    let big_f = f(&m, "int(q†*q*q_xx)");
    let big_g = f(&m, "int(q†_xx*cos(q))");
    let df = laplacian(&m, &big_f, Mode::Geometric).unwrap();
    let dg = laplacian(&m, &big_g, Mode::Geometric).unwrap();
    assert_eq!(df, f(&m, "int(q_xx) + int(fd[0:xx](q))"), "{}", print_functional(&m, &df));
    assert_eq!(dg, f(&m, "int(fd[0:xx](-sin(q)))"), "{}", print_functional(&m, &dg));
    assert!(schouten(&m, &df, &big_g, Mode::Geometric).unwrap().is_zero());
}

#[test]
fn scalar_example_derivation_holds_structurally() {
    let m = scalar();
    let big_f = f(&m, "int(q†*q*q_xx)");
    let big_g = f(&m, "int(q†_xx*cos(q))");
    let r = check_derivation(&m, &big_f, &big_g, Mode::Geometric).unwrap();
    assert!(r.structural, "{}", r.render(&m));
    assert!(r.collapsed);
    assert!(!functional_is_zero(&m, &r.lhs, Equality::Collapsed));
    let expected = f(&m, "int(q*q_xx*D[1](D[1](cos(q))))");
    let matches = |x: &Functional| {
        functional_is_zero(&m, &r.lhs.sub(x), Equality::Collapsed)
            || functional_is_zero(&m, &r.lhs.add(x), Equality::Collapsed)
    };
    assert!(matches(&expected), "{}", r.render(&m));
}

#[test]
fn scalar_example_fails_in_naive_mode() {
    let m = scalar();
    let big_f = f(&m, "int(q†*q*q_xx)");
    let big_g = f(&m, "int(q†_xx*cos(q))");
    let dg = laplacian(&m, &big_g, Mode::Naive).unwrap();
    assert!(schouten(&m, &big_f, &dg, Mode::Naive).unwrap().is_zero());
    let r = check_derivation(&m, &big_f, &big_g, Mode::Naive).unwrap();
    assert!(!r.collapsed, "{}", r.render(&m));
}

#[test]
fn bracket_examples() {
    let m = scalar();
    let s = f(&m, "int(q†*q)");
    assert!(schouten(&m, &s, &s, Mode::Geometric).unwrap().is_zero());
    assert_eq!(laplacian(&m, &s, Mode::Geometric).unwrap(), f(&m, "int(1)"));
    let e = f(&m, "int(q†*q†_x*q_x^2)");
    let ee = schouten(&m, &e, &e, Mode::Naive).unwrap();
    assert!(!ee.is_zero());
    assert_eq!(ee.parity().unwrap(), Parity::Odd);
    assert!(schouten(&m, &s, &f(&m, "5"), Mode::Geometric).unwrap().is_zero());
    assert!(laplacian(&m, &f(&m, "int(q*q_x)"), Mode::Geometric).unwrap().is_zero());
    let b = schouten(&m, &f(&m, "int(q†*q_x)"), &f(&m, "int(q^2)"), Mode::Naive).unwrap();
    assert_eq!(b, f(&m, "-2*int(q*q_x)"));
}

#[test]
fn omega_of_constants_and_zero_action() {
    let m = scalar();
    let s = f(&m, "int(q†*q†_x*q)");
    assert!(omega(&m, &Functional::one(), &s, Mode::Geometric).unwrap().is_zero());
    let o = f(&m, "int(q†*q^2)");
    let lap = laplacian(&m, &o, Mode::Geometric).unwrap();
    assert_eq!(omega(&m, &o, &Functional::zero(), Mode::Geometric).unwrap(), lap.scale(&minus_i_hbar()));
    assert!(omega(&m, &o, &f(&m, "int(q†*q)"), Mode::Geometric).is_err());
}

#[test]
fn heterogeneous_argument_is_rejected() {
    let m = scalar();
    let mixed = f(&m, "int(q†) + int(q)");
    assert!(matches!(schouten(&m, &mixed, &mixed, Mode::Geometric), Err(BvError::Parity(_))));
    assert!(laplacian(&m, &mixed, Mode::Geometric).is_err());
}

#[test]
fn master_equation_examples() {
    let m = BvModel::new(1, vec![("q", 0), ("c", 1)]).unwrap();
    let brst = f(&m, "int(q†*c)");
    let r = check_master_equation(&m, &brst, Mode::Geometric).unwrap();
    assert!(r.laplacian_zero && r.bracket_trivial && r.holds());
    let s = f(&m, "int(q†*c) + 1/2*int(q_x^2)");
    let r = check_master_equation(&m, &s, Mode::Geometric).unwrap();
    assert!(r.laplacian_zero);
    assert!(!r.bracket_trivial);
    assert!(!r.holds(), "{}", r.render(&m));
    assert!(check_master_equation(&m, &f(&m, "int(q†*q)"), Mode::Geometric).is_err());
    let r0 = check_master_equation(&m, &Functional::zero(), Mode::Geometric).unwrap();
    assert!(r0.laplacian_zero && r0.bracket_trivial && r0.holds());
}

#[test]
fn power_lemmas_small() {
    let m = scalar();
    let big_f = f(&m, "int(q†*q†_x*q)");
    let g = f(&m, "int(q†*q_x^2)");
    for n in 1..=4 {
        assert!(check_schouten_power(&m, &g, &big_f, n, Mode::Geometric).unwrap().passed());
    }
    for n in 2..=4 {
        let r = check_laplacian_power(&m, &big_f, n, Mode::Geometric).unwrap();
        assert!(r.passed(), "{}", r.render(&m));
    }
}

