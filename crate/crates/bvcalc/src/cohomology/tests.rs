use super::*;
use crate::text::parse_expr;

fn scalar() -> BvModel {
    BvModel::new(1, vec![("q", 0)]).unwrap()
}

fn d<'m>(m: &'m BvModel, s: &str) -> Density<'m> {
    Density::new(m, parse_expr(m, s).unwrap()).unwrap()
}

fn f(m: &BvModel, s: &str) -> Functional {
    parse_functional(m, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

#[test]
fn triviality_examples() {
    let m = scalar();
    assert!(is_trivial(&d(&m, "D[1](q^2)")));
    assert!(is_trivial(&Density::collapsed(&m, &parse_expr(&m, "-fd[0:xx](sin(q))").unwrap()).unwrap()));
    assert!(!is_trivial(&d(&m, "q*q_xx")));
    assert!(!is_trivial(&d(&m, "1")));
    assert!(!is_trivial(&d(&m, "x")));
}

#[test]
fn equivalence_examples() {
    let m = scalar();
    assert!(densities_equivalent(&d(&m, "2*q_xx"), &d(&m, "0")).unwrap());
    assert!(densities_equivalent(&d(&m, "q*q_x"), &d(&m, "0")).unwrap());
    assert!(densities_equivalent(&d(&m, "q_x^2"), &d(&m, "-q*q_xx")).unwrap());
    assert!(!densities_equivalent(&d(&m, "q_x^2"), &d(&m, "q*q_xx")).unwrap());
    let other = BvModel::new(1, vec![("q", 0)]).unwrap();
    let two = BvModel::new(2, vec![("q", 0)]).unwrap();
    assert!(densities_equivalent(&d(&m, "q"), &d(&other, "q")).unwrap());
    assert_eq!(densities_equivalent(&d(&m, "q"), &d(&two, "q")), Err(CohomologyError::ModelMismatch));
}

#[test]
fn frozen_density_is_rejected() {
    let m = scalar();
    let e = parse_expr(&m, "fd[0:xx](q)").unwrap();
    assert_eq!(Density::new(&m, e), Err(CohomologyError::NotWrapperFree));
}

#[test]
fn graded_commutativity_of_products() {
    let m = scalar();
    let a = f(&m, "int(q†*q_x)");
    let b = f(&m, "int(q†_x*q^2)");
    assert_eq!(a.mul(&b), b.mul(&a).neg());
    assert!(a.mul(&a).is_zero());
    let e = f(&m, "int(q^2)");
    assert_eq!(a.mul(&e), e.mul(&a));
}

#[test]
fn trivial_block_is_zero_functional() {
    let m = scalar();
    let z = f(&m, "int(q*q_x)");
    assert!(!z.is_zero());
    assert!(functional_is_zero(&m, &z, Equality::Structural));
    assert!(!functional_is_zero(&m, &z, Equality::Exact));
    let prod = f(&m, "int(q*q_x)*int(q†)");
    assert!(functional_is_zero(&m, &prod, Equality::Structural));
}

#[test]
fn products_respect_integration_by_parts() {
    let m = scalar();
    let a = f(&m, "int(q_x^2)*int(q†*q)");
    let b = f(&m, "-int(q*q_xx)*int(q†*q)");
    assert!(functional_equal(&m, &a, &b, Equality::Structural).unwrap());
    let c = f(&m, "int(q*q_xx)*int(q†*q)");
    assert!(!functional_equal(&m, &a, &c, Equality::Structural).unwrap());
}

#[test]
fn volume_block_is_not_a_scalar() {
    let m = scalar();
    assert!(!functional_equal(&m, &f(&m, "int(1)"), &f(&m, "1"), Equality::Structural).unwrap());
    assert!(!functional_is_zero(&m, &f(&m, "int(1)"), Equality::Collapsed));
    assert_eq!(f(&m, "3"), Functional::constant(Coefficient::from_int(3)));
    assert_eq!(f(&m, "q"), f(&m, "int(q)"));
}

#[test]
fn structured_blocks_compare_by_mode() {
    let m = scalar();
    let a = f(&m, "int(fd[0:xx](cos(q)))");
    let b = f(&m, "int(fd[5:xx](cos(q)))");
    assert_eq!(a, b);
    assert!(!functional_is_zero(&m, &a, Equality::Structural));
    assert!(functional_is_zero(&m, &a, Equality::Collapsed));
}

#[test]
fn functional_printing_round_trips() {
    let m = scalar();
    for s in ["2*int(q*q_x^2) - i*hbar*int(q†)*int(q)", "int(1) + 3", "int(q†*q@1*fd[0:x](q_x)@1)"] {
        let a = f(&m, s);
        let printed = print_functional(&m, &a);
        assert_eq!(f(&m, &printed), a, "{s} -> {printed}");
    }
}

#[test]
fn fields_outside_integral_are_rejected() {
    let m = scalar();
    assert!(parse_functional(&m, "q*int(q)").is_err());
}

