//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the verdict lines are always printed.
//! The process fails if a criterion fails, except criterion 5, whose stated
//! outcome does not hold for its own example; there the computed values are
//! asserted instead and the line reads FAIL.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bvcalc::algebra::{Coefficient, Expr, Parity};
use bvcalc::bv::{check_omega_squared, laplacian, schouten, Mode};
use bvcalc::cohomology::{densities_equivalent, functional_is_zero, Density, Equality, Functional};
use bvcalc::examples::{scalar_example, yang_mills_example};
use bvcalc::jetcalc::{
    canonicalize_channels, collapse, iterated_variation_geometric, iterated_variation_naive, total_derivative, BvModel,
};
use bvcalc::models::{build_scalar_example, build_yang_mills, random_functional, LieAlgebraData, RandomSpec};
use bvcalc::oracle::{
    evaluate, evaluate_density, finite_difference_bracket, random_section, required_points, required_points_functional,
    GrassmannNumber, SectionSpec,
};
use bvcalc::suites::{run_suite, scalar_model, Pair, Suite, SuiteConfig, SuiteReport};
use bvcalc::text::{parse_expr, print_expr};

/// Componentwise agreement of oracle evaluations of equivalent densities.
const SYNONYM_TOLERANCE: f64 = 1e-9;
/// Step and relative tolerance of the finite-difference bracket check.
const FD_EPSILON: f64 = 1e-4;
const FD_TOLERANCE: f64 = 1e-4;

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, note: impl Into<String>) {
        let note = note.into();
        self.passed &= ok;
        self.notes.push(if ok { note } else { format!("NOT MET: {note}") });
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

fn bvcalc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bvcalc")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn timed(o: &mut Outcome, limit: Duration, start: Instant) {
    let t = start.elapsed();
    o.require(t < limit, format!("runtime {:.2?} (limit {:?})", t, limit));
}

fn suite(s: Suite, cfg: &SuiteConfig) -> SuiteReport {
    run_suite(s, cfg).expect("suite inputs are well-typed")
}

fn suite_line(o: &mut Outcome, r: &SuiteReport) {
    o.require(r.all_passed(), r.summary());
}

fn scalar_example_criterion() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let r = scalar_example(Mode::Geometric).expect("example runs");
    let elapsed = start.elapsed();
    for label in [
        "dF/dq = q†*q_xx + D[1](D[1](q†*q))",
        "dG/dq = -q†_xx*sin(q)",
        "DF = int(q_xx) + int(fd[0:xx](q))",
        "DG = int(fd[0:xx](-sin(q)))",
        "[[DF,G]] = 0 (exact)",
    ] {
        let ok = r.step(label).and_then(|s| s.ok) == Some(true);
        o.require(ok, label);
    }
    o.require(r.verdict == "LHS = RHS (structural) ; LHS ~ RHS (cohomological)", format!("verdict: {}", r.verdict));
    let (code, out) = bvcalc(&["example", "scalar"]);
    o.require(
        code == 0 && out.trim_end().ends_with("LHS = RHS (structural) ; LHS ~ RHS (cohomological)"),
        format!("`bvcalc example scalar` exit {code}, last line `{}`", out.trim_end().lines().last().unwrap_or("")),
    );
    o.require(elapsed < Duration::from_secs(1), format!("runtime {elapsed:.2?} (limit 1s)"));
    o
}

fn yang_mills_criterion() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let r = yang_mills_example("ym-su2", &LieAlgebraData::su2(), 4, Mode::Geometric).expect("example runs");
    for st in r.steps.iter().filter(|s| s.ok.is_some()) {
        o.require(st.ok == Some(true), format!("{}: {}", st.label, st.value.lines().next().unwrap_or("")));
    }
    o.note(format!(
        "S has {} terms, [[S,S]] has {} terms",
        r.step("S terms").map_or("?", |s| &s.value),
        r.step("[[S,S]] terms").map_or("?", |s| &s.value)
    ));
    timed(&mut o, Duration::from_secs(60), start);
    o
}

fn identity_suites_criterion() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let base = SuiteConfig::default();
    o.note(format!(
        "default bounds: {} cases, seed {}, order <= {}, degree {}..={}",
        base.cases, base.seed, base.max_order, base.min_degree, base.max_degree
    ));
    for s in [Suite::Leibniz, Suite::LaplacianProduct, Suite::Derivation, Suite::DeltaSquared, Suite::Jacobi, Suite::Skew] {
        let r = suite(s, &base);
        suite_line(&mut o, &r);
        if s == Suite::Derivation {
            o.note(format!("derivation structural pass rate {}/{}", r.structural, r.cases.len()));
        }
    }
    let deeper = SuiteConfig { max_degree: 4, ..base.clone() };
    let transcendental = SuiteConfig { transcendental: true, ..base.clone() };
    for (what, cfg) in [("degree <= 4", &deeper), ("with sin/cos factors", &transcendental)] {
        for s in [Suite::Derivation, Suite::DeltaSquared, Suite::Jacobi] {
            let r = suite(s, cfg);
            o.require(r.all_passed(), format!("{what}: {}", r.summary()));
        }
    }
    let m = scalar_model();
    let (mut agree, mut nonzero) = (0, 0);
    for seed in 0..100u64 {
        let spec = RandomSpec::new(2, 4, Parity::Odd).with_min_degree(2).with_transcendental(seed % 2 == 1);
        let f = random_functional(&m, &spec, seed);
        let geometric = laplacian(&m, &f, Mode::Geometric).expect("odd block").collapse();
        let naive = laplacian(&m, &f, Mode::Naive).expect("odd block");
        agree += functional_is_zero(&m, &geometric.sub(&naive), Equality::Collapsed) as usize;
        nonzero += !functional_is_zero(&m, &naive, Equality::Collapsed) as usize;
    }
    o.require(agree == 100, format!("collapsed geometric D ~ naive D on {agree}/100 random densities ({nonzero} nontrivial)"));
    timed(&mut o, Duration::from_secs(300), start);
    o
}

fn naive_regression_criterion() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let (m, f, g) = build_scalar_example();
    let dg = laplacian(&m, &g, Mode::Naive).expect("G is even");
    o.require(schouten(&m, &f, &dg, Mode::Naive).expect("typed").is_zero(), "naive [[F,DG]] = 0");
    let cfg = SuiteConfig { mode: Mode::Naive, pair: Some(Pair::Scalar), ..SuiteConfig::default() };
    let r = suite(Suite::Derivation, &cfg);
    let discrepancy = r.cases.first().and_then(|c| c.failures.first()).map(|f| f.discrepancy.clone());
    o.require(!r.all_passed(), format!("naive suite on the scalar pair fails: {}", r.summary()));
    o.require(
        discrepancy.as_deref().is_some_and(|d| d != "0"),
        format!("discrepancy density = {}", discrepancy.as_deref().unwrap_or("<none>")),
    );
    let elapsed = start.elapsed();
    let (code, out) = bvcalc(&["check", "derivation-1c", "--pair", "scalar", "--mode", "naive"]);
    o.require(code == 1 && out.contains("discrepancy = "), format!("`bvcalc check derivation-1c --pair scalar --mode naive` exit {code}"));
    o.require(elapsed < Duration::from_secs(1), format!("runtime {elapsed:.2?} (limit 1s)"));
    o
}

/// Returns the outcome as stated plus whether the computed values match the
/// analysis: for `∫q_x²` both second variations are zero, for `∫q_x³` they
/// differ, and geometric variations graded-commute exactly.
fn two_ways_criterion() -> (Outcome, bool) {
    let mut o = Outcome::new();
    let m = scalar_model();
    let q = (0u16, false);
    let second = |src: &str| {
        let l = parse_expr(&m, src).expect("literal parses");
        let naive = iterated_variation_naive(&l, &[q, q]).expect("shifts given");
        let structured = iterated_variation_geometric(&l, &[q, q]).expect("shifts given");
        (naive, structured.clone(), collapse(&structured))
    };
    let (naive2, structured2, geometric2) = second("q_x^2");
    o.require(
        naive2 != geometric2,
        format!(
            "int(q_x^2): naive = {}, structured geometric = {}, collapsed geometric = {}",
            print_expr(&m, &naive2),
            print_expr(&m, &structured2),
            print_expr(&m, &geometric2)
        ),
    );
    o.note("both operators act on the constant second partial 2 through D_x^2, so both vanish for a quadratic Lagrangian");
    let (naive3, _, geometric3) = second("q_x^3");
    o.note(format!(
        "int(q_x^3): naive is zero: {}, collapsed geometric is 6*q_xxx: {}",
        naive3.is_zero(),
        geometric3 == parse_expr(&m, "6*q_xxx").expect("literal parses")
    ));
    let analysed_two_ways = naive2.is_zero()
        && geometric2.is_zero()
        && naive3.is_zero()
        && geometric3 == parse_expr(&m, "6*q_xxx").expect("literal parses");

    let mixed = BvModel::new(1, vec![("q", 0), ("c", 1)]).expect("valid model");
    let symbols = [(0u16, false), (0, true), (1, false), (1, true)];
    let (mut commute, mut naive_commute, mut nonzero) = (0, 0, 0);
    for seed in 0..50u64 {
        let parity = Parity::from_odd(seed % 2 == 1);
        let spec = RandomSpec::new(2, 4, parity).with_min_degree(2);
        let f = random_functional(&mixed, &spec, seed).as_density().expect("single block");
        let a = symbols[(seed % 4) as usize];
        let b = symbols[((seed / 4) % 4) as usize];
        let odd = |x: (u16, bool)| mixed.parity(x.0, x.1).is_odd();
        let sign = Coefficient::from_int(if odd(a) && odd(b) { -1 } else { 1 });
        let ab = iterated_variation_geometric(&f, &[a, b]).expect("shifts given");
        let ba = iterated_variation_geometric(&f, &[b, a]).expect("shifts given");
        commute += canonicalize_channels(&(&ab - &ba.scale(&sign))).is_zero() as usize;
        nonzero += !ab.is_zero() as usize;
        let nab = iterated_variation_naive(&f, &[a, b]).expect("shifts given");
        let nba = iterated_variation_naive(&f, &[b, a]).expect("shifts given");
        naive_commute += (&nab - &nba.scale(&sign)).is_zero() as usize;
    }
    o.require(
        commute == 50,
        format!("geometric variations graded-commute exactly on {commute}/50 ({nonzero} nonzero); naive on {naive_commute}/50"),
    );
    (o, analysed_two_ways && commute == 50)
}

fn appendix_lemmas_criterion() -> Outcome {
    let mut o = Outcome::new();
    let r = suite(Suite::Powers, &SuiteConfig { cases: 20, ..SuiteConfig::default() });
    suite_line(&mut o, &r);
    o
}

fn quantum_criterion() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let (m, s) = build_yang_mills(&LieAlgebraData::su2(), 4).expect("su(2) model");
    let results: Vec<(bool, bool)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..10u64)
            .map(|seed| {
                let (m, s) = (&m, &s);
                scope.spawn(move || {
                    let spec = RandomSpec::new(1, 2, Parity::Even).with_max_terms(2);
                    let obs = random_functional(m, &spec, 1000 + seed);
                    let r = check_omega_squared(m, &obs, s, Mode::Geometric).expect("even O and S");
                    (r.passed(), r.vanishes)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker finished")).collect()
    });
    let passed = results.iter().filter(|r| r.0).count();
    let direct = results.iter().filter(|r| r.1).count();
    o.require(passed == 10, format!("Yang-Mills su(2): Omega^2(O) = [[Phi,O]] with inert Phi on {passed}/10 random even O"));
    o.note(format!("Omega^2(O) ~ 0 without using the master equation on {direct}/10"));
    let cfg = SuiteConfig { cases: 50, max_order: 1, ..SuiteConfig::default() };
    for s in [Suite::GaugeClosure, Suite::Cocycles] {
        suite_line(&mut o, &suite(s, &cfg));
    }
    timed(&mut o, Duration::from_secs(300), start);
    o
}

fn restricted(m: &BvModel, e: &Expr, fields_only: bool) -> Expr {
    let mut out = Expr::zero();
    for (t, c) in e.iter() {
        if t.jet_occurrences().iter().all(|(_, v)| !v.dagger) == fields_only {
            out.add_term(t.clone(), c.clone());
        }
    }
    debug_assert!(out.iter().all(|(t, _)| m.owns_term(t)));
    out
}

fn oracle_criterion() -> Outcome {
    let mut o = Outcome::new();
    let m = scalar_model();
    let (mut equivalent, mut worst, mut pairs) = (0, 0.0f64, 0);
    for seed in 0..20u64 {
        let spec = RandomSpec::new(2, 3, Parity::from_odd(seed % 2 == 1)).with_transcendental(seed % 4 < 2);
        let h = random_functional(&m, &spec, seed).as_density().expect("single block");
        let r = random_functional(&m, &spec, 500 + seed).as_density().expect("single block");
        let h2 = &h + &total_derivative(&r, 0);
        pairs += 1;
        let (a, b) = (Density::new(&m, h.clone()).expect("plain"), Density::new(&m, h2.clone()).expect("plain"));
        equivalent += densities_equivalent(&a, &b).expect("same model") as usize;
        for k in 0..5u64 {
            let s = random_section(&m, 100 * seed + k, 3);
            let n = required_points(&h, &s).expect("periodic").max(required_points(&h2, &s).expect("periodic"));
            let va = evaluate_density(&m, &h, &s, n).expect("enough points");
            let vb = evaluate_density(&m, &h2, &s, n).expect("enough points");
            worst = worst.max(va.distance(&vb));
        }
    }
    o.require(equivalent == pairs, format!("h ~ h + D_x(r) recognised on {equivalent}/{pairs} pairs"));
    o.require(worst < SYNONYM_TOLERANCE, format!("max componentwise difference over 5 sections each: {worst:.3e} (tolerance {SYNONYM_TOLERANCE:e})"));

    let point = |f: &str, sec: &str| {
        let s = SectionSpec::parse(&m, sec).expect("section parses");
        let f: Functional = bvcalc::cohomology::parse_functional(&m, f).expect("literal parses");
        evaluate(&m, &f, &s, required_points_functional(&f, &s).expect("periodic")).expect("enough points")
    };
    let pi = std::f64::consts::PI;
    let v1 = point("q*q_x", "q = sin(1)");
    let v2 = point("q^2", "q = sin(1)");
    let v3 = point("dag(q)*q_x", "q = cos(1)\nq† = t1*sin(1)");
    o.require(v1.max_abs() < 1e-12, format!("int(q*q_x) at sin x = {v1}"));
    o.require((v2.body() - pi).abs() < 1e-12, format!("int(q^2) at sin x = {v2}"));
    o.require(v3.distance(&GrassmannNumber::generator(1).scale(-pi)) < 1e-12, format!("int(q†*q_x) at q = cos x, q† = t1 sin x = {v3}"));

    let mut worst_fd = 0.0f64;
    let q_dag = Expr::jet(m.var0(0, true));
    for seed in 0..10u64 {
        let spec = RandomSpec::new(2, 3, Parity::Even).with_transcendental(seed % 2 == 1).with_max_terms(4);
        let f = restricted(&m, &random_functional(&m, &spec, 2000 + seed).as_density().expect("single block"), true);
        let phi = restricted(&m, &random_functional(&m, &RandomSpec::new(1, 2, Parity::Even), 3000 + seed).as_density().expect("single block"), true);
        if f.is_zero() || phi.is_zero() {
            continue;
        }
        let s = random_section(&m, 4000 + seed, 2);
        let fd = finite_difference_bracket(&m, &Functional::integral(&f), &Functional::integral(&(&q_dag * &phi)), &s, FD_EPSILON)
            .expect("even fields, G linear in antifields");
        if fd.symbolic.abs() > 1e-8 {
            worst_fd = worst_fd.max(fd.relative_error());
        }
    }
    o.require(worst_fd < FD_TOLERANCE, format!("finite-difference bracket: max relative error {worst_fd:.3e} (tolerance {FD_TOLERANCE:e})"));
    o
}

fn main() -> ExitCode {
    let mut failed = false;
    // `analysed` replaces the verdict for a criterion that cannot hold as stated.
    let mut report = |n: u32, title: &str, o: Outcome, analysed: Option<bool>| {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {n}: {title}");
        for note in &o.notes {
            println!("    {note}");
        }
        failed |= !analysed.unwrap_or(o.passed);
    };
    report(1, "scalar example", scalar_example_criterion(), None);
    report(2, "Yang-Mills su(2), n = 4", yang_mills_criterion(), None);
    report(3, "identity suites", identity_suites_criterion(), None);
    report(4, "naive-mode regression", naive_regression_criterion(), None);
    let (two_ways, analysed) = two_ways_criterion();
    let mut two_ways = two_ways;
    two_ways.note(if analysed {
        "computed values match the analysis (criterion cannot hold as stated for int(q_x^2))"
    } else {
        "NOT MET: computed values differ from the analysis"
    });
    report(5, "naive vs geometric second variation", two_ways, Some(analysed));
    report(6, "appendix power lemmas", appendix_lemmas_criterion(), None);
    report(7, "quantum layer", quantum_criterion(), None);
    report(8, "numeric oracle", oracle_criterion(), None);
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
