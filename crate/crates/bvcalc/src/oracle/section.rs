//! Sections given by trigonometric polynomials, parsed from text or drawn at random.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grassmann::{GrassmannNumber, MAX_GENERATORS};
use super::trig::TrigPoly;
use super::OracleError;
use crate::algebra::MultiIndex;
use crate::jetcalc::BvModel;

/// One trigonometric polynomial per field or antifield; absent symbols are zero.
///
/// Even symbols take real values; odd symbols take values with odd
/// Grassmann coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SectionSpec {
    polys: BTreeMap<(u16, bool), TrigPoly>,
}

impl SectionSpec {
    pub fn new() -> Self {
        SectionSpec::default()
    }

    /// Sets the value of `q` (or `q†`), checking its parity against the model.
    pub fn set(&mut self, model: &BvModel, field: u16, dagger: bool, p: TrigPoly) -> Result<(), OracleError> {
        let odd = model.parity(field, dagger).is_odd();
        let ok = if odd {
            p.has_parity(true)
        } else {
            p.terms().all(|(_, a, b)| a.iter().chain(b.iter()).all(|(m, _)| m == 0))
        };
        if !ok || p.dim() != model.dim() {
            let name = symbol_name(model, field, dagger);
            return Err(OracleError::Section {
                line: 0,
                msg: format!("`{name}` is {} and needs {} coefficients", if odd { "odd" } else { "even" }, if odd { "odd Grassmann" } else { "real" }),
            });
        }
        self.polys.insert((field, dagger), p);
        Ok(())
    }

    pub fn get(&self, field: u16, dagger: bool) -> Option<&TrigPoly> {
        self.polys.get(&(field, dagger))
    }

    /// `∂^σ` of the value of `q` (or `q†`).
    pub fn jet(&self, dim: usize, field: u16, dagger: bool, sigma: &MultiIndex) -> TrigPoly {
        let Some(p) = self.get(field, dagger) else { return TrigPoly::zero(dim) };
        sigma.directions().into_iter().fold(p.clone(), |acc, d| acc.derivative(d))
    }

    pub fn max_frequency(&self, field: u16, dagger: bool) -> u32 {
        self.get(field, dagger).map_or(0, TrigPoly::max_frequency)
    }

    pub fn body_bound(&self, field: u16, dagger: bool) -> f64 {
        self.get(field, dagger).map_or(0.0, TrigPoly::body_bound)
    }

    /// Adds `ε·φ` to the value of an even symbol.
    pub fn shifted(&self, field: u16, dagger: bool, phi: &TrigPoly, eps: f64) -> SectionSpec {
        let mut out = self.clone();
        let base = self.get(field, dagger).cloned().unwrap_or_else(|| TrigPoly::zero(phi.dim()));
        out.polys.insert((field, dagger), base.add(&phi.scale(eps)));
        out
    }

    /// Parses lines `name = term ± term …`, where `name` is a field, `name†` or
    /// `dag(name)`, and each term is a product of a number, generators `t1`…`t8`
    /// and at most one `cos(k1,…,kn)` or `sin(k1,…,kn)`. `#` starts a comment.
    pub fn parse(model: &BvModel, text: &str) -> Result<SectionSpec, OracleError> {
        let mut spec = SectionSpec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            spec.parse_line(model, line, no + 1)?;
        }
        Ok(spec)
    }

    /// Parses one `name = …` line, reporting errors at `line`.
    pub fn parse_line(&mut self, model: &BvModel, line: &str, no: usize) -> Result<(), OracleError> {
        let err = |msg: String| OracleError::Section { line: no, msg };
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| err("expected `name = value`".into()))?;
        let (field, dagger) = parse_symbol(model, lhs.trim()).ok_or_else(|| err(format!("unknown field `{}`", lhs.trim())))?;
        if self.polys.contains_key(&(field, dagger)) {
            return Err(err(format!("`{}` is given twice", lhs.trim())));
        }
        let p = parse_poly(model.dim(), rhs).map_err(err)?;
        self.set(model, field, dagger, p).map_err(|e| match e {
            OracleError::Section { msg, .. } => err(msg),
            other => other,
        })
    }
}

fn symbol_name(model: &BvModel, field: u16, dagger: bool) -> String {
    format!("{}{}", model.field_name(field), if dagger { "†" } else { "" })
}

fn parse_symbol(model: &BvModel, s: &str) -> Option<(u16, bool)> {
    if let Some(inner) = s.strip_prefix("dag(").and_then(|r| r.strip_suffix(')')) {
        return model.field_id(inner.trim()).map(|f| (f, true));
    }
    if let Some(base) = s.strip_suffix('†') {
        return model.field_id(base).map(|f| (f, true));
    }
    model.field_id(s).map(|f| (f, false))
}

/// Splits at top-level `+`/`-`, keeping each sign with its term.
fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let exponent = matches!(prev, Some('e') | Some('E')) && cur.trim().chars().next().is_some_and(|d| d.is_ascii_digit());
        if depth == 0 && (c == '+' || c == '-') && !exponent {
            if !cur.trim().is_empty() {
                out.push((neg, cur.trim().to_string()));
            }
            cur.clear();
            neg = c == '-';
        } else if !c.is_whitespace() {
            cur.push(c);
        }
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur.trim().to_string()));
    }
    out
}

/// A decimal number or a fraction `a/b`.
fn parse_number(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

fn parse_poly(dim: usize, s: &str) -> Result<TrigPoly, String> {
    let mut p = TrigPoly::zero(dim);
    let terms = split_terms(s);
    if terms.is_empty() {
        return Err("empty value".into());
    }
    for (neg, t) in terms {
        let mut coef = GrassmannNumber::scalar(if neg { -1.0 } else { 1.0 });
        let mut trig: Option<(bool, Vec<i32>)> = None;
        for factor in t.split('*') {
            let f = factor.trim();
            if let Some(k) = f.strip_prefix('t').and_then(|k| k.parse::<u32>().ok()) {
                if !(1..=MAX_GENERATORS).contains(&k) {
                    return Err(format!("generator t{k} out of range t1..t{MAX_GENERATORS}"));
                }
                coef = &coef * &GrassmannNumber::generator(k);
            } else if let Some((name, args)) = f.strip_suffix(')').and_then(|r| r.split_once('(')) {
                let is_cos = match name {
                    "cos" => true,
                    "sin" => false,
                    other => return Err(format!("unknown function `{other}`; expected cos or sin")),
                };
                if trig.is_some() {
                    return Err("at most one cos/sin factor per term".into());
                }
                let k: Result<Vec<i32>, _> = args.split(',').map(|a| a.trim().parse::<i32>()).collect();
                let k = k.map_err(|_| format!("bad frequency list `{args}`"))?;
                if k.len() != dim {
                    return Err(format!("frequency vector needs {dim} entries, got {}", k.len()));
                }
                trig = Some((is_cos, k));
            } else {
                coef = coef.scale(parse_number(f).ok_or_else(|| format!("cannot read factor `{f}`"))?);
            }
        }
        match trig {
            None => p.add_cos(vec![0; dim], coef),
            Some((true, k)) => p.add_cos(k, coef),
            Some((false, k)) => p.add_sin(k, coef),
        }
    }
    Ok(p)
}

/// A random section: one to three trigonometric terms per symbol with
/// frequencies up to `max_freq`; odd symbols get coefficients `c·θ_k`.
pub fn random_section(model: &BvModel, seed: u64, max_freq: i32) -> SectionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = model.dim();
    let mut spec = SectionSpec::new();
    for field in 0..model.field_count() as u16 {
        for dagger in [false, true] {
            let odd = model.parity(field, dagger).is_odd();
            let mut p = TrigPoly::zero(dim);
            for _ in 0..rng.gen_range(1..=3) {
                let k: Vec<i32> = (0..dim).map(|_| rng.gen_range(-max_freq..=max_freq)).collect();
                let c = rng.gen_range(-1.0..1.0);
                let coef = if odd {
                    GrassmannNumber::generator(rng.gen_range(1..=MAX_GENERATORS)).scale(c)
                } else {
                    GrassmannNumber::scalar(c)
                };
                if rng.gen_bool(0.5) {
                    p.add_cos(k, coef);
                } else {
                    p.add_sin(k, coef);
                }
            }
            spec.set(model, field, dagger, p).expect("parity chosen to match");
        }
    }
    spec
}
