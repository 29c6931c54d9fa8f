use bvcalc::algebra::Parity;
use bvcalc::bv::*;
use bvcalc::jetcalc::BvModel;
use bvcalc::cohomology::Functional;
use bvcalc::models::{random_functional, RandomSpec};

fn model() -> BvModel {
    BvModel::new(1, vec![("q", 0), ("c", 1)]).unwrap()
}

fn triple(m: &BvModel, seed: u64) -> (Functional, Functional, Functional) {
    let p = |k: u64| Parity::from_odd((seed >> k) & 1 == 1);
    let spec = |par| RandomSpec::new(2, 3, par).with_min_degree(2);
    (
        random_functional(m, &spec(p(0)), 3 * seed),
        random_functional(m, &spec(p(1)), 3 * seed + 1),
        random_functional(m, &spec(p(2)), 3 * seed + 2),
    )
}

#[test]
fn geometric_identities_hold_with_an_odd_field() {
    let m = model();
    for seed in 0..40u64 {
        let (f, g, h) = triple(&m, seed);
        assert!(check_leibniz(&m, &f, &g, &h, Mode::Geometric).unwrap().passed(), "leibniz, seed {seed}");
        assert!(check_laplacian_product(&m, &f, &g, Mode::Geometric).unwrap().passed(), "product, seed {seed}");
        assert!(check_derivation(&m, &f, &g, Mode::Geometric).unwrap().passed(), "derivation, seed {seed}");
        assert!(check_delta_squared(&m, &f.mul(&g), Mode::Geometric).unwrap().passed(), "delta squared, seed {seed}");
        assert!(check_jacobi(&m, &f, &g, &h, Mode::Geometric).unwrap().passed(), "jacobi, seed {seed}");
        assert!(check_skew(&m, &f, &g, Mode::Geometric).unwrap().passed(), "skew, seed {seed}");
    }
}
