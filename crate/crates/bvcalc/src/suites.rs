//! Randomized identity suites: seeded cases run in parallel, reported in case order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Parity;
use crate::bv::{
    check_cocycle_preservation, check_coboundary_preservation, check_delta_squared, check_derivation, check_gauge_closure,
    check_jacobi, check_laplacian_power, check_laplacian_product, check_leibniz, check_omega_squared,
    check_schouten_power, check_skew, BvError, IdentityReport, Mode,
};
use crate::cohomology::{print_functional, Functional};
use crate::jetcalc::BvModel;
use crate::models::{build_scalar_example, random_density, RandomSpec};

/// The available suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    #[serde(rename = "leibniz-1a")]
    Leibniz,
    #[serde(rename = "laplacian-1b")]
    LaplacianProduct,
    #[serde(rename = "derivation-1c")]
    Derivation,
    #[serde(rename = "delta-squared-1d")]
    DeltaSquared,
    #[serde(rename = "jacobi")]
    Jacobi,
    #[serde(rename = "skew")]
    Skew,
    #[serde(rename = "powers")]
    Powers,
    #[serde(rename = "omega")]
    Omega,
    #[serde(rename = "gauge-closure")]
    GaugeClosure,
    #[serde(rename = "cocycles")]
    Cocycles,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Leibniz,
        Suite::LaplacianProduct,
        Suite::Derivation,
        Suite::DeltaSquared,
        Suite::Jacobi,
        Suite::Skew,
        Suite::Powers,
        Suite::Omega,
        Suite::GaugeClosure,
        Suite::Cocycles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Leibniz => "leibniz-1a",
            Suite::LaplacianProduct => "laplacian-1b",
            Suite::Derivation => "derivation-1c",
            Suite::DeltaSquared => "delta-squared-1d",
            Suite::Jacobi => "jacobi",
            Suite::Skew => "skew",
            Suite::Powers => "powers",
            Suite::Omega => "omega",
            Suite::GaugeClosure => "gauge-closure",
            Suite::Cocycles => "cocycles",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`; expected one of {}", Suite::ALL.map(Suite::name).join(", ")))
    }
}

/// Fixed inputs instead of random ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pair {
    /// `F = ∫q†q q_xx`, `G = ∫q†_xx cos q`.
    #[serde(rename = "scalar")]
    Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    pub max_order: u32,
    pub max_degree: u32,
    /// Lower degree bound; raising it makes vanishing sides rarer.
    pub min_degree: u32,
    /// Allow `sin`/`cos` factors in random densities.
    pub transcendental: bool,
    pub mode: Mode,
    pub pair: Option<Pair>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cases: 100,
            seed: 7,
            max_order: 2,
            max_degree: 3,
            min_degree: 2,
            transcendental: false,
            mode: Mode::Geometric,
            pair: None,
        }
    }
}

/// Outcome of one case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub index: usize,
    pub seed: u64,
    pub passed: bool,
    /// Whether every identity also held structurally.
    pub structural: bool,
    /// Whether some side of some identity was nonzero.
    pub nontrivial: bool,
    /// Inputs as grammar strings.
    pub inputs: Vec<(String, String)>,
    /// Failed identities with the reduced discrepancy.
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub discrepancy: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: Suite,
    pub mode: &'static str,
    pub seed: u64,
    pub max_order: u32,
    pub max_degree: u32,
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub structural: usize,
    pub nontrivial: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {}/{} passed ({} structural, {} nontrivial) [mode {}, seed {}]",
            self.suite,
            self.passed,
            self.cases.len(),
            self.structural,
            self.nontrivial,
            self.mode,
            self.seed
        )
    }
}

/// Seed of the `index`-th case.
pub fn case_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64).rotate_left(17)
}

/// One field `q` of ghost number 0 over a line.
pub fn scalar_model() -> BvModel {
    BvModel::new(1, vec![("q", 0)]).expect("valid model")
}

struct Gen<'a> {
    model: &'a BvModel,
    rng: ChaCha8Rng,
    max_order: u32,
    max_degree: u32,
    min_degree: u32,
    transcendental: bool,
}

impl Gen<'_> {
    fn functional(&mut self, parity: Parity) -> Functional {
        let spec = RandomSpec::new(self.max_order, self.max_degree, parity)
            .with_min_degree(self.min_degree)
            .with_transcendental(self.transcendental);
        Functional::integral(&random_density(self.model, &spec, &mut self.rng))
    }

    fn any(&mut self) -> Functional {
        let p = Parity::from_odd(self.rng.gen_bool(0.5));
        self.functional(p)
    }

    fn capped(&mut self, parity: Parity, order: u32) -> Functional {
        let saved = self.max_order;
        self.max_order = self.max_order.min(order);
        let f = self.functional(parity);
        self.max_order = saved;
        f
    }
}

fn run_case(suite: Suite, cfg: &SuiteConfig, model: &BvModel, index: usize) -> Result<CaseResult, BvError> {
    let seed = case_seed(cfg.seed, index);
    let mut g = Gen {
        model,
        rng: ChaCha8Rng::seed_from_u64(seed),
        max_order: cfg.max_order,
        max_degree: cfg.max_degree,
        min_degree: cfg.min_degree,
        transcendental: cfg.transcendental,
    };
    let mut nontrivial = false;
    let mode = cfg.mode;
    let fixed = cfg.pair.map(|Pair::Scalar| {
        let (_, f, gg) = build_scalar_example();
        (f, gg)
    });
    let two = |g: &mut Gen| fixed.clone().unwrap_or_else(|| (g.any(), g.any()));
    let inputs: Vec<(&str, Functional)>;
    let mut reports: Vec<IdentityReport> = Vec::new();
    match suite {
        Suite::Leibniz => {
            let (f, gg) = two(&mut g);
            let h = g.any();
            reports.push(check_leibniz(model, &f, &gg, &h, mode)?);
            inputs = vec![("F", f), ("G", gg), ("H", h)];
        }
        Suite::LaplacianProduct => {
            let (f, gg) = two(&mut g);
            reports.push(check_laplacian_product(model, &f, &gg, mode)?);
            inputs = vec![("F", f), ("G", gg)];
        }
        Suite::Derivation => {
            let (f, gg) = two(&mut g);
            reports.push(check_derivation(model, &f, &gg, mode)?);
            inputs = vec![("F", f), ("G", gg)];
        }
        Suite::DeltaSquared => {
            let (f, gg) = two(&mut g);
            let target = if index.is_multiple_of(2) { f.clone() } else { f.mul(&gg) };
            nontrivial = !crate::bv::laplacian(model, &target, mode)?.is_zero();
            reports.push(check_delta_squared(model, &target, mode)?);
            inputs = vec![("F", target)];
        }
        Suite::Jacobi => {
            let (f, gg) = two(&mut g);
            let h = g.any();
            reports.push(check_jacobi(model, &f, &gg, &h, mode)?);
            inputs = vec![("F", f), ("G", gg), ("H", h)];
        }
        Suite::Skew => {
            let (f, gg) = two(&mut g);
            reports.push(check_skew(model, &f, &gg, mode)?);
            inputs = vec![("F", f), ("G", gg)];
        }
        Suite::Powers => {
            let f = g.functional(Parity::Even);
            let gg = g.any();
            for n in 1..=4 {
                reports.push(check_schouten_power(model, &gg, &f, n, mode)?);
            }
            for n in 2..=4 {
                reports.push(check_laplacian_power(model, &f, n, mode)?);
            }
            inputs = vec![("F", f), ("G", gg)];
        }
        Suite::Omega => {
            let o = g.capped(Parity::Even, 1);
            let s = g.capped(Parity::Even, 1);
            reports.push(check_omega_squared(model, &o, &s, mode)?.identity);
            inputs = vec![("O", o), ("S", s)];
        }
        Suite::GaugeClosure => {
            let f1 = g.capped(Parity::Odd, 1);
            let f2 = g.capped(Parity::Odd, 1);
            let s = g.capped(Parity::Even, 1);
            reports.push(check_gauge_closure(model, &f1, &f2, &s, mode)?);
            inputs = vec![("F1", f1), ("F2", f2), ("S", s)];
        }
        Suite::Cocycles => {
            let o = g.capped(Parity::Even, 1);
            let xi = g.capped(Parity::Odd, 1);
            let f = g.capped(Parity::Odd, 1);
            let s = g.capped(Parity::Even, 1);
            reports.push(check_cocycle_preservation(model, &o, &f, &s, mode)?);
            reports.push(check_coboundary_preservation(model, &xi, &f, &s, mode)?);
            inputs = vec![("O", o), ("xi", xi), ("F", f), ("S", s)];
        }
    }
    let failures = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| Failure {
            identity: r.identity.clone(),
            lhs: print_functional(model, &r.lhs),
            rhs: print_functional(model, &r.rhs),
            discrepancy: print_functional(model, &r.discrepancy(model)),
        })
        .collect::<Vec<_>>();
    Ok(CaseResult {
        index,
        seed,
        passed: failures.is_empty(),
        structural: reports.iter().all(|r| r.structural),
        nontrivial: nontrivial || reports.iter().any(|r| !r.lhs.is_zero() || !r.rhs.is_zero()),
        inputs: inputs.into_iter().map(|(k, f)| (k.to_string(), print_functional(model, &f))).collect(),
        failures,
    })
}

/// Runs a suite over the one-field scalar model.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport, BvError> {
    let model = scalar_model();
    let cases = if cfg.pair.is_some() { 1 } else { cfg.cases };
    let results: Result<Vec<CaseResult>, BvError> =
        (0..cases).into_par_iter().map(|i| run_case(suite, cfg, &model, i)).collect();
    let cases = results?;
    let passed = cases.iter().filter(|c| c.passed).count();
    let structural = cases.iter().filter(|c| c.structural).count();
    let nontrivial = cases.iter().filter(|c| c.nontrivial).count();
    Ok(SuiteReport {
        schema: 1,
        suite,
        mode: match cfg.mode {
            Mode::Geometric => "geometric",
            Mode::Naive => "naive",
        },
        seed: cfg.seed,
        max_order: cfg.max_order,
        max_degree: cfg.max_degree,
        failed: cases.len() - passed,
        cases,
        passed,
        structural,
        nontrivial,
    })
}
