//! Seeded random densities and functionals for the identity suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Atom, Coefficient, Expr, Func, JetVar, MultiIndex, Parity};
use crate::cohomology::Functional;
use crate::jetcalc::BvModel;

/// Bounds for random densities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_order: u32,
    pub max_degree: u32,
    pub min_degree: u32,
    pub parity: Parity,
    /// Multiply some monomials by `sin` or `cos` of an even undifferentiated field.
    pub transcendental: bool,
    pub max_terms: usize,
}

impl RandomSpec {
    pub fn new(max_order: u32, max_degree: u32, parity: Parity) -> Self {
        RandomSpec { max_order, max_degree, min_degree: 1, parity, transcendental: false, max_terms: 3 }
    }

    pub fn with_transcendental(mut self, yes: bool) -> Self {
        self.transcendental = yes;
        self
    }

    /// Raises the lower degree bound (clamped to the upper one).
    pub fn with_min_degree(mut self, d: u32) -> Self {
        self.min_degree = d.clamp(1, self.max_degree.max(1));
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n.max(1);
        self
    }
}

fn random_index(rng: &mut ChaCha8Rng, dim: usize, max_order: u32) -> MultiIndex {
    let order = rng.gen_range(0..=max_order);
    let mut m = MultiIndex::zero(dim);
    for _ in 0..order {
        m = m.bump(rng.gen_range(0..dim));
    }
    m
}

fn random_var(rng: &mut ChaCha8Rng, model: &BvModel, max_order: u32) -> JetVar {
    let field = rng.gen_range(0..model.field_count()) as u16;
    let dagger = rng.gen_bool(0.5);
    model.var(field, dagger, random_index(rng, model.dim(), max_order))
}

fn random_monomial(rng: &mut ChaCha8Rng, model: &BvModel, spec: &RandomSpec) -> Option<Expr> {
    let degree = rng.gen_range(spec.min_degree.max(1)..=spec.max_degree.max(1));
    let vars: Vec<JetVar> = (0..degree).map(|_| random_var(rng, model, spec.max_order)).collect();
    let odd = vars.iter().filter(|v| v.odd).count() % 2 == 1;
    if Parity::from_odd(odd) != spec.parity {
        return None;
    }
    let c = Coefficient::from_int(*[-3, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).expect("in range"));
    let mut e = Expr::constant(c);
    for v in vars {
        e = &e * &Expr::jet(v);
    }
    if spec.transcendental && rng.gen_bool(0.4) {
        let even: Vec<u16> = (0..model.field_count() as u16).filter(|&f| !model.parity(f, false).is_odd()).collect();
        if !even.is_empty() {
            let f = even[rng.gen_range(0..even.len())];
            let func = if rng.gen_bool(0.5) { Func::Cos } else { Func::Sin };
            e = &e * &Expr::atom(Atom::Trans(func, model.var0(f, false)));
        }
    }
    (!e.is_zero()).then_some(e)
}

/// A nonzero parity-homogeneous polynomial density within the bounds.
pub fn random_density(model: &BvModel, spec: &RandomSpec, rng: &mut ChaCha8Rng) -> Expr {
    loop {
        let n = rng.gen_range(1..=spec.max_terms.max(1));
        let mut e = Expr::zero();
        let mut made = 0;
        let mut attempts = 0;
        while made < n && attempts < 1000 {
            attempts += 1;
            if let Some(m) = random_monomial(rng, model, spec) {
                e = e + m;
                made += 1;
            }
        }
        if !Functional::integral(&e).is_zero() {
            return e;
        }
    }
}

/// `∫ e` for a random density `e`; the same seed always gives the same functional.
pub fn random_functional(model: &BvModel, spec: &RandomSpec, seed: u64) -> Functional {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Functional::integral(&random_density(model, spec, &mut rng))
}
