//! Canonical graded expressions: finite sums of coefficient × term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::coefficient::Coefficient;
use super::term::{Atom, Factor, Func, JetVar, MultiIndex, Scaled, Term};
use super::AlgebraError;
use crate::jetcalc::{self, BvModel};

/// Ghost parity, the ℤ₂ grading that controls every commutation sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Sum in ℤ₂.
    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != other.is_odd())
    }

    pub fn flip(self) -> Parity {
        Parity::from_odd(!self.is_odd())
    }

    /// As 0 or 1.
    pub fn bit(self) -> i64 {
        self.is_odd() as i64
    }
}

/// `(−1)^k` for a small integer exponent.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A graded expression in canonical form.
///
/// Distinct terms carry nonzero coefficients; the zero expression is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Expr {
    terms: BTreeMap<Term, Coefficient>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        Expr::term(c, Term::one())
    }

    pub fn term(c: Coefficient, t: Term) -> Self {
        let mut e = Expr::zero();
        e.add_term(t, c);
        e
    }

    /// A single atom at site 0.
    pub fn atom(a: Atom) -> Self {
        Expr::atom_at(0, a)
    }

    pub fn atom_at(site: u32, a: Atom) -> Self {
        Expr::from_scaled(Coefficient::one(), Term::from_raw([(Factor::new(site, a), 1)]))
    }

    pub fn jet(v: JetVar) -> Self {
        Expr::atom(Atom::Jet(v))
    }

    /// Collects integer multiples of terms, all scaled by `c`.
    pub fn from_scaled<I: IntoIterator<Item = Scaled>>(c: Coefficient, terms: I) -> Self {
        let mut e = Expr::zero();
        for (k, t) in terms {
            e.add_term(t, c.scale_int(k));
        }
        e
    }

    pub fn add_term(&mut self, t: Term, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Coefficient, terms: impl IntoIterator<Item = Scaled>) {
        for (k, t) in terms {
            self.add_term(t, c.scale_int(k));
        }
    }

    pub fn add_expr(&mut self, other: &Expr, scale: &Coefficient) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * scale);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Coefficient)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Term, Coefficient)> {
        self.terms.into_iter()
    }

    /// The coefficient of a term (zero if absent).
    pub fn coefficient(&self, t: &Term) -> Coefficient {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Coefficient) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Expr {
        self.scale(&Coefficient::from_int(k))
    }

    /// Applies a term-level linear operation and sums the results.
    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Expr) -> Expr {
        let mut out = Expr::zero();
        for (t, c) in &self.terms {
            out.add_expr(&f(t), c);
        }
        out
    }

    /// Graded product `a·b`.
    pub fn graded_mul(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                out.add_scaled(&(ca * cb), ta.mul(tb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..n {
            acc = acc.graded_mul(self);
        }
        acc
    }

    /// The common ghost parity of all terms (zero is even).
    pub fn parity(&self) -> Result<Parity, AlgebraError> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Ok(Parity::Even);
        };
        for t in it {
            if t.is_odd() != first.is_odd() {
                return Err(AlgebraError::HeterogeneousParity {
                    first: first.to_string(),
                    second: t.to_string(),
                });
            }
        }
        Ok(Parity::from_odd(first.is_odd()))
    }

    /// The common ghost number of all terms (zero has ghost number 0).
    pub fn ghost_number(&self, model: &BvModel) -> Result<i32, AlgebraError> {
        let mut seen: Option<(i32, &Term)> = None;
        for t in self.terms.keys() {
            let g = model.term_ghost_number(t);
            match seen {
                None => seen = Some((g, t)),
                Some((g0, t0)) if g0 != g => {
                    return Err(AlgebraError::HeterogeneousGhost {
                        first: model.display_term(t0),
                        second: model.display_term(t),
                    })
                }
                _ => {}
            }
        }
        Ok(seen.map(|(g, _)| g).unwrap_or(0))
    }

    /// True when some term contains a frozen derivative.
    pub fn has_frozen(&self) -> bool {
        self.terms.keys().any(|t| t.has_frozen())
    }

    /// True when every term lives at one site and contains no frozen derivative.
    pub fn is_plain(&self) -> bool {
        self.terms.keys().all(|t| !t.has_frozen() && t.sites().len() <= 1 && t.sites().first().is_none_or(|&s| s == 0))
    }

    /// The part of the expression with no jet variables.
    pub fn jet_free_part(&self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.is_jet_free())
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest site label in use, if any.
    pub fn max_site(&self) -> Option<u32> {
        self.terms.keys().flat_map(|t| t.sites()).max()
    }

    /// Largest channel label in use, if any.
    pub fn max_channel(&self) -> Option<u32> {
        self.terms.keys().flat_map(|t| t.channels()).max()
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out.add_expr(rhs, &Coefficient::one());
        out
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        for (t, c) in rhs.terms {
            self.add_term(t, c);
        }
        self
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out.add_expr(rhs, &Coefficient::from_int(-1));
        out
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale_int(-1)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale_int(-1)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        self.graded_mul(rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        self.graded_mul(&rhs)
    }
}

impl fmt::Display for Expr {
    /// Model-free rendering for diagnostics; see `text::print_expr` for the grammar form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (t, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{t}")?;
        }
        Ok(())
    }
}

/// An unnormalized expression tree, as produced by the parser or by hand.
#[derive(Clone, Debug, PartialEq)]
pub enum RawExpr {
    Scalar(Coefficient),
    Base { site: u32, coord: u8 },
    Jet { site: u32, var: JetVar },
    Trans { site: u32, func: Func, arg: Box<RawExpr> },
    /// `fd[ℓ:σ, …](inner)` placed at a site.
    Frozen { site: u32, channels: Vec<(u32, MultiIndex)>, inner: Box<RawExpr> },
    /// Total derivative along a base direction.
    Deriv { dir: usize, inner: Box<RawExpr> },
    Sum(Vec<RawExpr>),
    Product(Vec<RawExpr>),
    Power(Box<RawExpr>, u32),
}

/// Brings an expression tree to canonical form.
pub fn normalize(raw: &RawExpr) -> Result<Expr, AlgebraError> {
    Ok(match raw {
        RawExpr::Scalar(c) => Expr::constant(c.clone()),
        RawExpr::Base { site, coord } => Expr::atom_at(*site, Atom::Base(*coord)),
        RawExpr::Jet { site, var } => Expr::atom_at(*site, Atom::Jet(var.clone())),
        RawExpr::Trans { site, func, arg } => {
            let a = normalize(arg)?;
            let var = single_jet_var(&a).ok_or_else(|| AlgebraError::CompositeArgument {
                func: func.name().to_string(),
                arg: a.to_string(),
            })?;
            if var.odd {
                return Err(AlgebraError::OddArgument { func: func.name().to_string(), arg: a.to_string() });
            }
            Expr::atom_at(*site, Atom::Trans(*func, var))
        }
        RawExpr::Frozen { site, channels, inner } => {
            let inner = normalize(inner)?;
            let mut out = Expr::zero();
            for (t, c) in inner.iter() {
                if t.sites().iter().any(|&s| s != 0) {
                    return Err(AlgebraError::SiteInsideFrozen);
                }
                for (k, atoms) in super::term::Frozen::make(channels.clone(), t.clone()) {
                    let raw = atoms.into_iter().map(|(a, e)| (Factor::new(*site, a), e));
                    out.add_scaled(&c.scale_int(k), Term::from_raw(raw));
                }
            }
            out
        }
        RawExpr::Deriv { dir, inner } => jetcalc::total_derivative(&normalize(inner)?, *dir),
        RawExpr::Sum(items) => {
            let mut out = Expr::zero();
            for it in items {
                out = out + normalize(it)?;
            }
            out
        }
        RawExpr::Product(items) => {
            let mut out = Expr::one();
            for it in items {
                out = out.graded_mul(&normalize(it)?);
            }
            out
        }
        RawExpr::Power(b, n) => normalize(b)?.pow(*n),
    })
}

/// The jet variable `v` if `e` is exactly `1·v` at site 0.
fn single_jet_var(e: &Expr) -> Option<JetVar> {
    if e.len() != 1 {
        return None;
    }
    let (t, c) = e.iter().next()?;
    if !c.is_one() {
        return None;
    }
    let mut raw = t.raw();
    let (f, k) = raw.next()?;
    if raw.next().is_some() || k != 1 || f.site != 0 {
        return None;
    }
    match f.atom {
        Atom::Jet(v) => Some(v),
        _ => None,
    }
}
