//! Numeric oracle: functionals evaluated at explicit periodic sections by
//! restriction to the jet of the section and trapezoidal quadrature.

mod grassmann;
mod section;
mod trig;

pub use grassmann::{GrassmannNumber, MAX_GENERATORS};
pub use section::{random_section, SectionSpec};
pub use trig::TrigPoly;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::{Atom, Coefficient, Expr, Func, JetVar, Term};
use crate::bv::{schouten, Mode};
use crate::cohomology::Functional;
use crate::jetcalc::{collapse, euler_left, BvModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{needed} quadrature points per direction are needed, {given} were given")]
    InsufficientPoints { needed: usize, given: usize },
    #[error("base coordinates are not periodic; the oracle needs densities without explicit x")]
    NonPeriodic,
    #[error("coefficient {0} is not a real number (hbar and i are formal)")]
    NonNumeric(String),
    #[error("transcendental of a field with nilpotent part is not supported")]
    NilpotentArgument,
    #[error("section line {line}: {msg}")]
    Section { line: usize, msg: String },
    #[error("{0}")]
    Unsupported(String),
}

fn real(c: &Coefficient) -> Result<f64, OracleError> {
    c.as_rational()
        .and_then(|r| r.to_f64())
        .ok_or_else(|| OracleError::NonNumeric(c.to_string()))
}

/// Bandwidth used for `sin`/`cos`/`exp` of a field with frequency `f` and
/// amplitude bound `m`: the Bessel coefficients beyond `e·m/2` decay faster
/// than geometrically, and 16 extra harmonics push them below rounding.
fn transcendental_bandwidth(f: u32, m: f64) -> u32 {
    if f == 0 {
        return 0;
    }
    f * ((std::f64::consts::E * m / 2.0).ceil() as u32 + 16)
}

fn term_frequency(t: &Term, s: &SectionSpec) -> Result<u32, OracleError> {
    let mut total = 0;
    for (f, k) in t.raw() {
        let one = match &f.atom {
            Atom::Jet(v) => s.max_frequency(v.field, v.dagger),
            Atom::Trans(_, v) => transcendental_bandwidth(s.max_frequency(v.field, v.dagger), s.body_bound(v.field, v.dagger)),
            Atom::Base(_) => return Err(OracleError::NonPeriodic),
            Atom::Frozen(_) => return Err(OracleError::Unsupported("frozen derivative survived collapse".into())),
        };
        total += one * k;
    }
    Ok(total)
}

/// Quadrature points needed per direction for a wrapper-free density.
pub fn required_points(e: &Expr, s: &SectionSpec) -> Result<usize, OracleError> {
    let mut f = 0;
    for (t, _) in e.iter() {
        f = f.max(term_frequency(t, s)?);
    }
    Ok((2 * f as usize).max(1))
}

/// Values of jet variables on the quadrature grid.
struct Grid<'a> {
    model: &'a BvModel,
    section: &'a SectionSpec,
    points: Vec<Vec<f64>>,
    cache: HashMap<JetVar, Vec<GrassmannNumber>>,
}

impl<'a> Grid<'a> {
    fn new(model: &'a BvModel, section: &'a SectionSpec, n: usize) -> Self {
        let dim = model.dim();
        let total = n.pow(dim as u32);
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let points = (0..total)
            .map(|mut j| {
                (0..dim)
                    .map(|_| {
                        let x = (j % n) as f64 * h;
                        j /= n;
                        x
                    })
                    .collect()
            })
            .collect();
        Grid { model, section, points, cache: HashMap::new() }
    }

    fn values(&mut self, v: &JetVar) -> &[GrassmannNumber] {
        if !self.cache.contains_key(v) {
            let p = self.section.jet(self.model.dim(), v.field, v.dagger, &v.index);
            let vals = self.points.iter().map(|x| p.eval(x)).collect();
            self.cache.insert(v.clone(), vals);
        }
        &self.cache[v]
    }

    fn atom_value(&mut self, a: &Atom, j: usize) -> Result<GrassmannNumber, OracleError> {
        match a {
            Atom::Jet(v) => Ok(self.values(v)[j].clone()),
            Atom::Trans(func, v) => {
                let u = &self.values(v)[j];
                if u.iter().any(|(m, _)| m != 0) {
                    return Err(OracleError::NilpotentArgument);
                }
                let b = u.body();
                Ok(GrassmannNumber::scalar(match func {
                    Func::Sin => b.sin(),
                    Func::Cos => b.cos(),
                    Func::Exp => b.exp(),
                }))
            }
            Atom::Base(_) => Err(OracleError::NonPeriodic),
            Atom::Frozen(_) => Err(OracleError::Unsupported("frozen derivative survived collapse".into())),
        }
    }

    fn term_value(&mut self, t: &Term, j: usize) -> Result<GrassmannNumber, OracleError> {
        let mut out = GrassmannNumber::scalar(1.0);
        for (f, k) in t.even() {
            let v = self.atom_value(&f.atom, j)?;
            for _ in 0..*k {
                out = &out * &v;
            }
        }
        for f in t.odd() {
            out = &out * &self.atom_value(&f.atom, j)?;
        }
        Ok(out)
    }
}

/// `∫ e dx` over the torus, collapsing frozen derivatives first.
pub fn evaluate_density(model: &BvModel, e: &Expr, s: &SectionSpec, points: usize) -> Result<GrassmannNumber, OracleError> {
    let e = collapse(e);
    let needed = required_points(&e, s)?;
    if points < needed {
        return Err(OracleError::InsufficientPoints { needed, given: points });
    }
    let mut grid = Grid::new(model, s, points);
    let weight = (2.0 * std::f64::consts::PI / points as f64).powi(model.dim() as i32);
    let mut out = GrassmannNumber::zero();
    for (t, c) in e.iter() {
        let c = real(c)?;
        let mut acc = GrassmannNumber::zero();
        for j in 0..grid.points.len() {
            acc = &acc + &grid.term_value(t, j)?;
        }
        out = &out + &acc.scale(c * weight);
    }
    Ok(out)
}

/// Value of a functional at a section: each product of blocks is the
/// product of the block integrals, in order.
pub fn evaluate(model: &BvModel, f: &Functional, s: &SectionSpec, points: usize) -> Result<GrassmannNumber, OracleError> {
    let mut out = GrassmannNumber::zero();
    for (bs, c) in f.collapse().iter() {
        let mut prod = GrassmannNumber::scalar(real(c)?);
        for b in bs {
            prod = &prod * &evaluate_density(model, &b.expr(), s, points)?;
        }
        out = &out + &prod;
    }
    Ok(out)
}

/// The smallest point count that suffices for every block of `f`.
pub fn required_points_functional(f: &Functional, s: &SectionSpec) -> Result<usize, OracleError> {
    let mut n = 1;
    for (bs, _) in f.collapse().iter() {
        for b in bs {
            n = n.max(required_points(&b.expr(), s)?);
        }
    }
    Ok(n)
}

/// Restricts a polynomial density to the jet of a section, exactly.
pub fn restrict(model: &BvModel, e: &Expr, s: &SectionSpec) -> Result<TrigPoly, OracleError> {
    let dim = model.dim();
    let mut out = TrigPoly::zero(dim);
    for (t, c) in e.iter() {
        let mut p = TrigPoly::constant(dim, GrassmannNumber::scalar(real(c)?));
        let factor = |a: &Atom| -> Result<TrigPoly, OracleError> {
            match a {
                Atom::Jet(v) => Ok(s.jet(dim, v.field, v.dagger, &v.index)),
                Atom::Base(_) => Err(OracleError::NonPeriodic),
                _ => Err(OracleError::Unsupported("only polynomial densities can be restricted exactly".into())),
            }
        };
        for (f, k) in t.even() {
            let v = factor(&f.atom)?;
            for _ in 0..*k {
                p = p.mul(&v);
            }
        }
        for f in t.odd() {
            p = p.mul(&factor(&f.atom)?);
        }
        out = out.add(&p);
    }
    Ok(out)
}

/// Symbolic and finite-difference values of `⟦F, G⟧` at a section.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDifference {
    pub symbolic: f64,
    pub numeric: f64,
}

impl FiniteDifference {
    pub fn relative_error(&self) -> f64 {
        (self.symbolic - self.numeric).abs() / self.symbolic.abs().max(self.numeric.abs()).max(1e-12)
    }
}

/// For `F` built from fields only and `G` linear in antifields on a model
/// whose fields are all even, `⟦F,G⟧(s) = d/dε F(s + εφ)` with
/// `φ_α = δG/δq†_α` restricted to `s`; the derivative is a central difference.
pub fn finite_difference_bracket(
    model: &BvModel,
    f: &Functional,
    g: &Functional,
    s: &SectionSpec,
    eps: f64,
) -> Result<FiniteDifference, OracleError> {
    if (0..model.field_count() as u16).any(|a| model.parity(a, false).is_odd()) {
        return Err(OracleError::Unsupported("finite differences need a model whose fields are all even".into()));
    }
    let antifields = |t: &Term| t.jet_occurrences().iter().filter(|(_, v)| v.dagger).count();
    if f.iter().any(|(bs, _)| bs.iter().any(|b| antifields(b.term()) > 0)) {
        return Err(OracleError::Unsupported("F must not contain antifields".into()));
    }
    let g_density = g.as_density().ok_or_else(|| OracleError::Unsupported("G must be a sum of single blocks".into()))?;
    if g_density.iter().any(|(t, _)| antifields(t) != 1) {
        return Err(OracleError::Unsupported("G must be linear in antifields".into()));
    }
    let bracket = schouten(model, f, g, Mode::Geometric).map_err(|e| OracleError::Unsupported(e.to_string()))?;
    let mut plus = s.clone();
    let mut minus = s.clone();
    for a in 0..model.field_count() as u16 {
        let phi = restrict(model, &euler_left(&g_density, a, true), s)?;
        if !phi.is_zero() {
            plus = plus.shifted(a, false, &phi, eps);
            minus = minus.shifted(a, false, &phi, -eps);
        }
    }
    let n = required_points_functional(f, &plus)?
        .max(required_points_functional(f, &minus)?)
        .max(required_points_functional(&bracket, s)?);
    let symbolic = evaluate(model, &bracket, s, n)?.body();
    let numeric = (evaluate(model, f, &plus, n)?.body() - evaluate(model, f, &minus, n)?.body()) / (2.0 * eps);
    Ok(FiniteDifference { symbolic, numeric })
}

#[cfg(test)]
mod tests;
