//! Total derivatives, graded partial derivatives, Euler operators and collapse.

use smallvec::{smallvec, SmallVec};

use crate::algebra::{sign, Atom, AtomProduct, Coefficient, Expr, Factor, Frozen, Func, JetVar, MultiIndex, Term, Terms};

use super::JetError;

/// Which side an odd derivative acts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Result of differentiating one atom: a sum of integer multiples of atom products.
type AtomDeriv = SmallVec<[(i64, AtomProduct); 2]>;

/// Applies a derivation atom by atom.
///
/// `odd_op` marks an odd derivation acting from the left: passing an odd
/// factor contributes a sign. Even factors sit in front of all odd ones in the
/// canonical product, so the derivative of an even factor is placed first.
fn apply_derivation(t: &Term, site: Option<u32>, odd_op: bool, d: &dyn Fn(&Atom) -> AtomDeriv) -> Terms {
    let raw: Vec<(Factor, u32)> = t.raw().collect();
    let n_even = t.even().len();
    let mut out: Terms = SmallVec::new();
    for (i, (f, k)) in raw.iter().enumerate() {
        if site.is_some_and(|p| p != f.site) {
            continue;
        }
        let parts = d(&f.atom);
        if parts.is_empty() {
            continue;
        }
        for (c, atoms) in parts {
            let placed = atoms.into_iter().map(|(a, e)| (Factor::new(f.site, a), e));
            let (mult, new_raw): (i64, Vec<(Factor, u32)>) = if i < n_even {
                let mut v: Vec<(Factor, u32)> = placed.collect();
                for (j, (g, e)) in raw.iter().enumerate() {
                    let e = if j == i { e - 1 } else { *e };
                    if e > 0 {
                        v.push((g.clone(), e));
                    }
                }
                (*k as i64, v)
            } else {
                let s = if odd_op { sign((i - n_even) as i64) } else { 1 };
                let mut v: Vec<(Factor, u32)> = raw[..i].to_vec();
                v.extend(placed);
                v.extend(raw[i + 1..].iter().cloned());
                (s, v)
            };
            for (c2, t2) in Term::from_raw(new_raw) {
                out.push((c * mult * c2, t2));
            }
        }
    }
    out
}

fn wrap_frozen(channels: &[(u32, MultiIndex)], inner: Terms) -> AtomDeriv {
    let mut out = AtomDeriv::new();
    for (c, t) in inner {
        for (c2, atoms) in Frozen::make(channels.to_vec(), t) {
            out.push((c * c2, atoms));
        }
    }
    out
}

fn atom_total_derivative(a: &Atom, dir: usize) -> AtomDeriv {
    match a {
        Atom::Base(j) => {
            if *j as usize == dir {
                smallvec![(1, AtomProduct::new())]
            } else {
                AtomDeriv::new()
            }
        }
        Atom::Jet(v) => smallvec![(1, smallvec![(Atom::Jet(v.with_index(v.index.bump(dir))), 1)])],
        Atom::Trans(func, u) => {
            let du = (Atom::Jet(u.with_index(u.index.bump(dir))), 1);
            match func {
                Func::Sin => smallvec![(1, smallvec![(Atom::Trans(Func::Cos, u.clone()), 1), du])],
                Func::Cos => smallvec![(-1, smallvec![(Atom::Trans(Func::Sin, u.clone()), 1), du])],
                Func::Exp => smallvec![(1, smallvec![(a.clone(), 1), du])],
            }
        }
        Atom::Frozen(fr) => wrap_frozen(&fr.channels, term_total_derivative(&fr.inner, dir)),
    }
}

/// `D_dir` of a term; on several sites it acts on the diagonal (all sites).
pub fn term_total_derivative(t: &Term, dir: usize) -> Terms {
    apply_derivation(t, None, false, &|a| atom_total_derivative(a, dir))
}

/// The total derivative `D_dir`: linear, Leibniz, commuting with frozen wrappers.
pub fn total_derivative(e: &Expr, dir: usize) -> Expr {
    e.map_terms(|t| Expr::from_scaled(Coefficient::one(), term_total_derivative(t, dir)))
}

/// `D^σ`.
pub fn total_derivative_multi(e: &Expr, sigma: &MultiIndex) -> Expr {
    let mut out = e.clone();
    for d in sigma.directions() {
        out = total_derivative(&out, d);
    }
    out
}

fn atom_partial(a: &Atom, v: &JetVar) -> AtomDeriv {
    match a {
        Atom::Base(_) => AtomDeriv::new(),
        Atom::Jet(w) => {
            if w == v {
                smallvec![(1, AtomProduct::new())]
            } else {
                AtomDeriv::new()
            }
        }
        Atom::Trans(func, u) => {
            if u != v {
                return AtomDeriv::new();
            }
            match func {
                Func::Sin => smallvec![(1, smallvec![(Atom::Trans(Func::Cos, u.clone()), 1)])],
                Func::Cos => smallvec![(-1, smallvec![(Atom::Trans(Func::Sin, u.clone()), 1)])],
                Func::Exp => smallvec![(1, smallvec![(a.clone(), 1)])],
            }
        }
        Atom::Frozen(fr) => wrap_frozen(&fr.channels, term_partial_left(&fr.inner, None, v)),
    }
}

/// Left partial derivative of a term, restricted to one site if given.
pub fn term_partial_left(t: &Term, site: Option<u32>, v: &JetVar) -> Terms {
    apply_derivation(t, site, v.odd, &|a| atom_partial(a, v))
}

/// Right partial derivative of a term: `(−1)^{|v|(|t|+1)}` times the left one.
pub fn term_partial(t: &Term, site: Option<u32>, v: &JetVar, side: Side) -> Terms {
    let mut out = term_partial_left(t, site, v);
    if side == Side::Right && v.odd && !t.is_odd() {
        for (c, _) in out.iter_mut() {
            *c = -*c;
        }
    }
    out
}

/// Graded left partial derivative `∂→e/∂v`.
pub fn partial_left(e: &Expr, v: &JetVar) -> Expr {
    e.map_terms(|t| Expr::from_scaled(Coefficient::one(), term_partial(t, None, v, Side::Left)))
}

/// Graded right partial derivative `e ∂←/∂v`.
pub fn partial_right(e: &Expr, v: &JetVar) -> Expr {
    e.map_terms(|t| Expr::from_scaled(Coefficient::one(), term_partial(t, None, v, Side::Right)))
}

/// Distinct `(site, σ)` at which the symbol `q` (or `q†`) occurs in a term.
fn occurrences(t: &Term, field: u16, dagger: bool) -> Vec<(u32, JetVar)> {
    let mut occ: Vec<(u32, JetVar)> =
        t.jet_occurrences().into_iter().filter(|(_, v)| v.same_symbol(field, dagger)).collect();
    occ.dedup();
    occ
}

/// Plain Euler operator `Σ_σ (−D)^σ ∂/∂q_σ` from the chosen side.
pub fn euler(e: &Expr, field: u16, dagger: bool, side: Side) -> Expr {
    let mut vars: Vec<JetVar> = Vec::new();
    for (t, _) in e.iter() {
        for (_, v) in occurrences(t, field, dagger) {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    let mut out = Expr::zero();
    for v in vars {
        let p = e.map_terms(|t| Expr::from_scaled(Coefficient::one(), term_partial(t, None, &v, side)));
        let d = total_derivative_multi(&p, &v.index);
        out.add_expr(&d, &Coefficient::from_int(sign(v.index.order() as i64)));
    }
    out
}

pub fn euler_left(e: &Expr, field: u16, dagger: bool) -> Expr {
    euler(e, field, dagger, Side::Left)
}

pub fn euler_right(e: &Expr, field: u16, dagger: bool) -> Expr {
    euler(e, field, dagger, Side::Right)
}

/// Wraps the factor living at site `p` into `(d/dℓ)^σ`.
pub fn wrap_site(t: &Term, p: u32, label: u32, sigma: &MultiIndex) -> Terms {
    if sigma.is_zero() {
        return smallvec![(1, t.clone())];
    }
    let mut inner_raw = Vec::new();
    let mut rest = Vec::new();
    let mut sgn = 1;
    let mut other_odd_seen = 0i64;
    for (f, k) in t.even() {
        if f.site == p {
            inner_raw.push((Factor::new(0, f.atom.clone()), *k));
        } else {
            rest.push((f.clone(), *k));
        }
    }
    for f in t.odd() {
        if f.site == p {
            sgn *= sign(other_odd_seen);
            inner_raw.push((Factor::new(0, f.atom.clone()), 1));
        } else {
            other_odd_seen += 1;
            rest.push((f.clone(), 1));
        }
    }
    let mut out = Terms::new();
    for (c0, inner) in Term::from_raw(inner_raw) {
        for (c1, atoms) in Frozen::make(vec![(label, sigma.clone())], inner) {
            let raw = atoms.into_iter().map(|(a, e)| (Factor::new(p, a), e)).chain(rest.iter().cloned());
            for (c2, t2) in Term::from_raw(raw) {
                out.push((sgn * c0 * c1 * c2, t2));
            }
        }
    }
    out
}

/// Channelled Euler operator on one term: `Σ_p Σ_σ (−1)^{|σ|} (d/dℓ)^σ_p ∂q_σ|_p`.
pub fn term_euler_channelled(t: &Term, field: u16, dagger: bool, label: u32, side: Side) -> Terms {
    let mut out = Terms::new();
    for (p, v) in occurrences(t, field, dagger) {
        let s = sign(v.index.order() as i64);
        for (c, t1) in term_partial(t, Some(p), &v, side) {
            for (c2, t2) in wrap_site(&t1, p, label, &v.index) {
                out.push((s * c * c2, t2));
            }
        }
    }
    out
}

/// Channelled Euler operator with a fresh label `ℓ` that must not occur in `e`.
pub fn euler_channelled(e: &Expr, field: u16, dagger: bool, label: u32, side: Side) -> Result<Expr, JetError> {
    if e.iter().any(|(t, _)| t.channels().contains(&label)) {
        return Err(JetError::ChannelReused(label));
    }
    Ok(euler_channelled_unchecked(e, field, dagger, label, side))
}

pub(crate) fn euler_channelled_unchecked(e: &Expr, field: u16, dagger: bool, label: u32, side: Side) -> Expr {
    e.map_terms(|t| Expr::from_scaled(Coefficient::one(), term_euler_channelled(t, field, dagger, label, side)))
}

/// A label larger than every channel in use.
pub fn fresh_label(exprs: &[&Expr]) -> u32 {
    exprs.iter().filter_map(|e| e.max_channel()).max().map_or(0, |m| m + 1)
}

fn collapse_atom(a: &Atom) -> Expr {
    match a {
        Atom::Frozen(fr) => total_derivative_multi(&collapse_term(&fr.inner), &fr.total_index()),
        other => Expr::atom(other.clone()),
    }
}

/// Replaces every frozen wrapper by the genuine total derivative and merges all sites.
pub fn collapse_term(t: &Term) -> Expr {
    if !t.has_frozen() {
        return Expr::from_scaled(Coefficient::one(), t.flatten_sites());
    }
    let mut out = Expr::one();
    for (f, k) in t.raw() {
        let c = collapse_atom(&f.atom);
        for _ in 0..k {
            out = out.graded_mul(&c);
        }
    }
    out
}

/// Collapse: wrapper-free single-site expression with the same value as a map.
pub fn collapse(e: &Expr) -> Expr {
    e.map_terms(collapse_term)
}

/// Naive iterated variation: plain left Euler operators with immediate expansion.
pub fn iterated_variation_naive(f: &Expr, shifts: &[(u16, bool)]) -> Result<Expr, JetError> {
    if shifts.is_empty() {
        return Err(JetError::NoShifts);
    }
    Ok(shifts.iter().fold(f.clone(), |acc, &(fld, dag)| euler_left(&acc, fld, dag)))
}

/// Geometric iterated variation: one fresh channel per shift, nothing expanded.
pub fn iterated_variation_geometric(f: &Expr, shifts: &[(u16, bool)]) -> Result<Expr, JetError> {
    if shifts.is_empty() {
        return Err(JetError::NoShifts);
    }
    let mut acc = f.clone();
    for &(fld, dag) in shifts {
        let label = fresh_label(&[&acc]);
        acc = euler_channelled_unchecked(&acc, fld, dag, label, Side::Left);
    }
    Ok(acc)
}
