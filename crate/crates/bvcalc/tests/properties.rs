use proptest::prelude::*;

use bvcalc::algebra::{Coefficient, Expr, Parity};
use bvcalc::bv::{check_skew, Mode};
use bvcalc::cohomology::{functional_equal, is_trivial, Density, Equality, Functional};
use bvcalc::jetcalc::{collapse, euler_channelled, euler_left, euler_right, total_derivative, BvModel, Side};
use bvcalc::models::{random_functional, RandomSpec};
use bvcalc::oracle::{evaluate_density, random_section, required_points};
use bvcalc::text::{parse_expr, print_expr};

fn mixed(dim: usize) -> BvModel {
    BvModel::new(dim, vec![("q", 0), ("c", 1)]).unwrap()
}

fn density(m: &BvModel, seed: u64, parity: Parity, transcendental: bool) -> Expr {
    let spec = RandomSpec::new(2, 3, parity).with_transcendental(transcendental);
    random_functional(m, &spec, seed).as_density().expect("single block")
}

fn parity(odd: bool) -> Parity {
    Parity::from_odd(odd)
}

fn symbols(m: &BvModel) -> Vec<(u16, bool)> {
    (0..m.field_count() as u16).flat_map(|f| [(f, false), (f, true)]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printer_round_trips(seed in any::<u64>(), odd in any::<bool>(), trans in any::<bool>(), dim in 1usize..=2) {
        let m = mixed(dim);
        let e = density(&m, seed, parity(odd), trans);
        let text = print_expr(&m, &e);
        prop_assert_eq!(parse_expr(&m, &text).unwrap(), e, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>(), odd in any::<bool>()) {
        let m = mixed(1);
        let e = density(&m, seed, parity(odd), true);
        let once = parse_expr(&m, &print_expr(&m, &e)).unwrap();
        let twice = parse_expr(&m, &print_expr(&m, &once)).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn product_is_graded_commutative(seed in any::<u64>(), a_odd in any::<bool>(), b_odd in any::<bool>()) {
        let m = mixed(1);
        let a = density(&m, seed, parity(a_odd), false);
        let b = density(&m, seed ^ 0x9e37, parity(b_odd), false);
        let sign = if a_odd && b_odd { -1 } else { 1 };
        prop_assert_eq!(&a * &b, (&b * &a).scale_int(sign));
    }

    #[test]
    fn product_is_associative(seed in any::<u64>(), odd in prop::array::uniform3(any::<bool>())) {
        let m = mixed(1);
        let a = density(&m, seed, parity(odd[0]), true);
        let b = density(&m, seed.wrapping_add(1), parity(odd[1]), false);
        let c = density(&m, seed.wrapping_add(2), parity(odd[2]), false);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn euler_operators_kill_total_derivatives(seed in any::<u64>(), odd in any::<bool>(), dim in 1usize..=2, dir in 0usize..2) {
        let m = mixed(dim);
        let h = density(&m, seed, parity(odd), true);
        let dh = total_derivative(&h, dir % dim);
        for (f, dagger) in symbols(&m) {
            prop_assert!(euler_left(&dh, f, dagger).is_zero());
            prop_assert!(euler_right(&dh, f, dagger).is_zero());
        }
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>(), odd in any::<bool>()) {
        let m = mixed(2);
        let h = density(&m, seed, parity(odd), true);
        prop_assert_eq!(total_derivative(&total_derivative(&h, 0), 1), total_derivative(&total_derivative(&h, 1), 0));
    }

    #[test]
    fn collapsed_channelled_euler_is_euler(seed in any::<u64>(), odd in any::<bool>(), right in any::<bool>()) {
        let m = mixed(1);
        let h = density(&m, seed, parity(odd), true);
        let side = if right { Side::Right } else { Side::Left };
        for (f, dagger) in symbols(&m) {
            let plain = if right { euler_right(&h, f, dagger) } else { euler_left(&h, f, dagger) };
            let channelled = euler_channelled(&h, f, dagger, 0, side).unwrap();
            prop_assert_eq!(collapse(&channelled), plain);
        }
    }

    #[test]
    fn total_derivatives_are_trivial(seed in any::<u64>(), odd in any::<bool>(), dim in 1usize..=2) {
        let m = mixed(dim);
        let h = density(&m, seed, parity(odd), true);
        let d = Density::new(&m, total_derivative(&h, dim - 1)).unwrap();
        prop_assert!(is_trivial(&d));
    }

    #[test]
    fn functional_equivalence_is_an_equivalence(seed in any::<u64>(), odd in any::<bool>()) {
        let m = mixed(1);
        let h = density(&m, seed, parity(odd), true);
        let r1 = density(&m, seed.wrapping_add(1), parity(odd), false);
        let r2 = density(&m, seed.wrapping_add(2), parity(odd), true);
        let a = Functional::integral(&h);
        let b = Functional::integral(&(&h + &total_derivative(&r1, 0)));
        let c = Functional::integral(&(&(&h + &total_derivative(&r1, 0)) - &total_derivative(&r2, 0)));
        for mode in [Equality::Structural, Equality::Collapsed] {
            prop_assert!(functional_equal(&m, &a, &a, mode).unwrap());
            prop_assert!(functional_equal(&m, &a, &b, mode).unwrap());
            prop_assert!(functional_equal(&m, &b, &a, mode).unwrap());
            prop_assert!(functional_equal(&m, &b, &c, mode).unwrap());
            prop_assert!(functional_equal(&m, &a, &c, mode).unwrap());
        }
    }

    #[test]
    fn block_order_only_costs_a_koszul_sign(seed in any::<u64>(), a_odd in any::<bool>(), b_odd in any::<bool>()) {
        let m = mixed(1);
        let a = Functional::integral(&density(&m, seed, parity(a_odd), false));
        let b = Functional::integral(&density(&m, seed ^ 0x51ed, parity(b_odd), false));
        let sign = Coefficient::from_int(if a_odd && b_odd { -1 } else { 1 });
        prop_assert_eq!(a.mul(&b), b.mul(&a).scale(&sign));
    }

    #[test]
    fn bracket_is_graded_skew(seed in any::<u64>(), a_odd in any::<bool>(), b_odd in any::<bool>()) {
        let m = mixed(1);
        let spec = |odd| RandomSpec::new(2, 3, parity(odd)).with_min_degree(2);
        let f = random_functional(&m, &spec(a_odd), seed);
        let g = random_functional(&m, &spec(b_odd), seed ^ 0xabcd);
        prop_assert!(check_skew(&m, &f, &g, Mode::Geometric).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn total_derivatives_integrate_to_zero(seed in any::<u64>(), section in any::<u64>()) {
        let m = BvModel::new(1, vec![("q", 0)]).unwrap();
        let h = density(&m, seed, Parity::Even, true);
        let r = density(&m, seed.wrapping_add(7), Parity::Even, false);
        let s = random_section(&m, section, 2);
        let shifted = &h + &total_derivative(&r, 0);
        let n = required_points(&h, &s).unwrap().max(required_points(&shifted, &s).unwrap());
        let a = evaluate_density(&m, &h, &s, n).unwrap();
        let b = evaluate_density(&m, &shifted, &s, n).unwrap();
        prop_assert!(a.distance(&b) <= 1e-9 * (1.0 + a.max_abs()), "{} vs {}", a, b);
    }

    #[test]
    fn integration_by_parts_holds_numerically(seed in any::<u64>(), section in any::<u64>()) {
        let m = BvModel::new(1, vec![("q", 0)]).unwrap();
        let a = density(&m, seed, Parity::Even, true);
        let b = density(&m, seed.wrapping_add(3), Parity::Even, false);
        let s = random_section(&m, section, 2);
        let lhs = &total_derivative(&a, 0) * &b;
        let rhs = (&a * &total_derivative(&b, 0)).scale_int(-1);
        let n = required_points(&lhs, &s).unwrap().max(required_points(&rhs, &s).unwrap());
        let x = evaluate_density(&m, &lhs, &s, n).unwrap();
        let y = evaluate_density(&m, &rhs, &s, n).unwrap();
        prop_assert!(x.distance(&y) <= 1e-9 * (1.0 + x.max_abs()), "{} vs {}", x, y);
    }
}
