//! The variational Schouten bracket, the BV-Laplacian and the quantum
//! differential `Ω = −iℏΔ + ⟦S,·⟧`, in geometric and naive modes.

mod checks;

pub use checks::*;

use thiserror::Error;

use crate::algebra::{sign, AlgebraError, Coefficient, Expr, JetVar, Parity};
use crate::cohomology::{koszul, product_parity, Block, Functional};
use crate::jetcalc::{
    collapse_term, euler, euler_channelled_unchecked, partial_left, shift_channels, shift_sites, total_derivative_multi,
    BvModel, Side,
};

/// How variations are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Channelled Euler operators; frozen derivatives stay pending.
    #[default]
    Geometric,
    /// Plain Euler operators on collapsed densities, expanded immediately.
    Naive,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BvError {
    #[error("{0}")]
    Parity(#[from] AlgebraError),
    #[error("{what} must be {expected}")]
    WrongParity { what: &'static str, expected: &'static str },
    #[error("power must be at least {0}")]
    PowerTooSmall(u32),
    #[error("{0} must be a single integral block")]
    NotABlock(&'static str),
}

fn product(blocks: &[Block]) -> Functional {
    let mut f = Functional::zero();
    f.add_product(Coefficient::one(), blocks.to_vec());
    f
}

/// Symbols `(field, dagger)` of the model.
fn symbols(model: &BvModel) -> impl Iterator<Item = u16> {
    0..model.field_count() as u16
}

fn block_bracket_geometric(model: &BvModel, f: &Block, g: &Block) -> Functional {
    let fe = f.expr();
    let site_shift = fe.max_site().map_or(0, |s| s + 1);
    let chan_shift = fe.max_channel().map_or(0, |c| c + 1);
    let ge = shift_channels(&shift_sites(&g.expr(), site_shift), chan_shift);
    let l1 = ge.max_channel().map_or(chan_shift, |c| c + 1).max(chan_shift);
    let l2 = l1 + 1;
    let mut density = Expr::zero();
    for a in symbols(model) {
        let t1 = euler_channelled_unchecked(&fe, a, false, l1, Side::Right)
            .graded_mul(&euler_channelled_unchecked(&ge, a, true, l2, Side::Left));
        let t2 = euler_channelled_unchecked(&fe, a, true, l1, Side::Right)
            .graded_mul(&euler_channelled_unchecked(&ge, a, false, l2, Side::Left));
        let sg = sign(model.parity(a, false).bit());
        density.add_expr(&t1, &Coefficient::from_int(sg));
        density.add_expr(&t2, &Coefficient::from_int(-sg));
    }
    Functional::integral(&density)
}

fn block_bracket_naive(model: &BvModel, f: &Block, g: &Block) -> Functional {
    let fe = collapse_term(f.term());
    let ge = collapse_term(g.term());
    let mut density = Expr::zero();
    for a in symbols(model) {
        let t1 = euler(&fe, a, false, Side::Right).graded_mul(&euler(&ge, a, true, Side::Left));
        let t2 = euler(&fe, a, true, Side::Right).graded_mul(&euler(&ge, a, false, Side::Left));
        let sg = sign(model.parity(a, false).bit());
        density.add_expr(&t1, &Coefficient::from_int(sg));
        density.add_expr(&t2, &Coefficient::from_int(-sg));
    }
    Functional::integral(&density)
}

fn block_bracket(model: &BvModel, f: &Block, g: &Block, mode: Mode) -> Functional {
    match mode {
        Mode::Geometric => block_bracket_geometric(model, f, g),
        Mode::Naive => block_bracket_naive(model, f, g),
    }
}

/// Jet variables of one symbol occurring anywhere in `e`.
fn variables(e: &Expr, field: u16, dagger: bool) -> Vec<JetVar> {
    let mut vars: Vec<JetVar> = e
        .iter()
        .flat_map(|(t, _)| t.jet_occurrences())
        .map(|(_, v)| v)
        .filter(|v| v.same_symbol(field, dagger))
        .collect();
    vars.sort();
    vars.dedup();
    vars
}

fn block_laplacian_geometric(model: &BvModel, b: &Block) -> Functional {
    let e = b.expr();
    let z1 = e.max_channel().map_or(0, |c| c + 1);
    let z2 = z1 + 1;
    let mut density = Expr::zero();
    for a in symbols(model) {
        let inner = euler_channelled_unchecked(&e, a, true, z2, Side::Left);
        density.add_expr(&euler_channelled_unchecked(&inner, a, false, z1, Side::Left), &Coefficient::one());
    }
    Functional::integral(&density)
}

fn block_laplacian_naive(model: &BvModel, b: &Block) -> Functional {
    let e = collapse_term(b.term());
    let mut density = Expr::zero();
    for a in symbols(model) {
        for v2 in variables(&e, a, true) {
            let p2 = partial_left(&e, &v2);
            for v1 in variables(&p2, a, false) {
                let p = partial_left(&p2, &v1);
                let sigma = v1.index.union(&v2.index);
                let s = sign(sigma.order() as i64);
                density.add_expr(&total_derivative_multi(&p, &sigma), &Coefficient::from_int(s));
            }
        }
    }
    Functional::integral(&density)
}

fn block_laplacian(model: &BvModel, b: &Block, mode: Mode) -> Functional {
    match mode {
        Mode::Geometric => block_laplacian_geometric(model, b),
        Mode::Naive => block_laplacian_naive(model, b),
    }
}

/// Bracket of two block products, by the Leibniz rule in the second slot and
/// its skew-symmetric counterpart in the first.
fn bracket_products(model: &BvModel, a: &[Block], b: &[Block], mode: Mode) -> Functional {
    if a.is_empty() || b.is_empty() {
        return Functional::zero();
    }
    if a.len() == 1 {
        if b.len() == 1 {
            return block_bracket(model, &a[0], &b[0], mode);
        }
        let (b1, rest) = b.split_first().expect("nonempty");
        let first = bracket_products(model, a, std::slice::from_ref(b1), mode).mul(&product(rest));
        let s = koszul(a[0].parity().flip(), b1.parity());
        let second = product(std::slice::from_ref(b1)).mul(&bracket_products(model, a, rest, mode));
        return first.add(&second.scale(&Coefficient::from_int(s)));
    }
    let (x, y) = a.split_first().expect("nonempty");
    let pb = product_parity(b);
    let first = product(std::slice::from_ref(x)).mul(&bracket_products(model, y, b, mode));
    let s = koszul(product_parity(y), pb.flip());
    let second = bracket_products(model, std::slice::from_ref(x), b, mode).mul(&product(y));
    first.add(&second.scale(&Coefficient::from_int(s)))
}

fn laplacian_products(model: &BvModel, a: &[Block], mode: Mode) -> Functional {
    match a {
        [] => Functional::zero(),
        [b] => block_laplacian(model, b, mode),
        [b, rest @ ..] => {
            let s = Coefficient::from_int(sign(b.parity().bit()));
            let one = std::slice::from_ref(b);
            let mut out = block_laplacian(model, b, mode).mul(&product(rest));
            out.add_scaled(&bracket_products(model, one, rest, mode), &s);
            out.add_scaled(&product(one).mul(&laplacian_products(model, rest, mode)), &s);
            out
        }
    }
}

/// The variational Schouten bracket `⟦F, G⟧`.
pub fn schouten(model: &BvModel, f: &Functional, g: &Functional, mode: Mode) -> Result<Functional, BvError> {
    f.parity()?;
    g.parity()?;
    let mut out = Functional::zero();
    for (a, ca) in f.iter() {
        for (b, cb) in g.iter() {
            out.add_scaled(&bracket_products(model, a, b, mode), &(ca * cb));
        }
    }
    Ok(out)
}

/// The BV-Laplacian `ΔF`.
pub fn laplacian(model: &BvModel, f: &Functional, mode: Mode) -> Result<Functional, BvError> {
    f.parity()?;
    let mut out = Functional::zero();
    for (a, c) in f.iter() {
        out.add_scaled(&laplacian_products(model, a, mode), c);
    }
    Ok(out)
}

/// `−iℏ` as a coefficient.
pub fn minus_i_hbar() -> Coefficient {
    Coefficient::i() * Coefficient::hbar(1) * Coefficient::from_int(-1)
}

/// `Ω(O) = −iℏΔO + ⟦S, O⟧` for an even `S`.
pub fn omega(model: &BvModel, o: &Functional, s: &Functional, mode: Mode) -> Result<Functional, BvError> {
    if s.parity()? != Parity::Even {
        return Err(BvError::WrongParity { what: "S", expected: "even" });
    }
    let mut out = laplacian(model, o, mode)?.scale(&minus_i_hbar());
    out.add_scaled(&schouten(model, s, o, mode)?, &Coefficient::one());
    Ok(out)
}

#[cfg(test)]
mod tests;
