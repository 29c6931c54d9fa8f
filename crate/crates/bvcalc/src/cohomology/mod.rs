//! Horizontal cohomology: densities modulo total divergences, and equality
//! of functionals built from products of integral blocks.

mod functional;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::algebra::{Coefficient, Expr, Gauss, Parity, Term};
use crate::jetcalc::{collapse, euler_left, BvModel};

pub use functional::{koszul, parse_functional, print_functional, print_product, product_parity, sort_blocks, Block, Functional, Shown};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("expression does not belong to the model")]
    ModelMismatch,
    #[error("density contains frozen derivatives; collapse it first")]
    NotWrapperFree,
}

/// A wrapper-free density over a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density<'m> {
    expr: Expr,
    model: &'m BvModel,
}

impl<'m> Density<'m> {
    pub fn new(model: &'m BvModel, expr: Expr) -> Result<Self, CohomologyError> {
        if expr.has_frozen() {
            return Err(CohomologyError::NotWrapperFree);
        }
        if !expr.iter().all(|(t, _)| model.owns_term(t)) {
            return Err(CohomologyError::ModelMismatch);
        }
        Ok(Density { expr, model })
    }

    /// Collapses frozen derivatives before wrapping.
    pub fn collapsed(model: &'m BvModel, expr: &Expr) -> Result<Self, CohomologyError> {
        Density::new(model, collapse(expr))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn model(&self) -> &'m BvModel {
        self.model
    }
}

/// How structured blocks are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Equality {
    /// Block-for-block identity; no integration by parts at all.
    Exact,
    /// Integral blocks up to total divergences, structured blocks by their
    /// channel-canonical form.
    #[default]
    Structural,
    /// Everything is collapsed first, then compared up to total divergences.
    Collapsed,
}

/// Key of one coordinate of the Euler embedding: the symbol whose Euler
/// operator produced it (`None` for the field-free part), a term and an ℏ-degree.
type EmbedKey = (Option<(u16, bool)>, Term, i32);

fn embed(model: &BvModel, e: &Expr) -> BTreeMap<EmbedKey, Gauss> {
    let mut out = BTreeMap::new();
    let mut push = |sym: Option<(u16, bool)>, x: &Expr| {
        for (t, c) in x.iter() {
            for (d, g) in c.terms() {
                out.insert((sym, t.clone(), d), g.clone());
            }
        }
    };
    for f in 0..model.field_count() as u16 {
        for dagger in [false, true] {
            push(Some((f, dagger)), &euler_left(e, f, dagger));
        }
    }
    push(None, &e.jet_free_part());
    out
}

/// A density is a total divergence iff every Euler operator vanishes and it
/// has no field-free part.
pub fn is_trivial(d: &Density<'_>) -> bool {
    let e = d.expr();
    if !e.jet_free_part().is_zero() {
        return false;
    }
    (0..d.model().field_count() as u16)
        .all(|f| [false, true].iter().all(|&dg| euler_left(e, f, dg).is_zero()))
}

/// `a ~ b` modulo total divergences.
pub fn densities_equivalent(a: &Density<'_>, b: &Density<'_>) -> Result<bool, CohomologyError> {
    if a.model() != b.model() {
        return Err(CohomologyError::ModelMismatch);
    }
    let diff = a.expr() - b.expr();
    Ok(is_trivial(&Density { expr: diff, model: a.model() }))
}

/// An echelon row: a reduced embedding and the block combination it came from.
type Row = (BTreeMap<EmbedKey, Gauss>, BTreeMap<Block, Gauss>);

/// Echelon basis for the Euler embedding of integral blocks, recording how
/// each dependent block decomposes over independent ones.
struct Reducer {
    rows: HashMap<EmbedKey, Row>,
}

impl Reducer {
    fn new() -> Self {
        Reducer { rows: HashMap::new() }
    }

    /// Returns the decomposition of `b` over basis blocks; `b` becomes a new
    /// basis block if it is independent.
    fn insert(&mut self, model: &BvModel, b: &Block) -> BTreeMap<Block, Gauss> {
        let mut vec = embed(model, &b.expr());
        let mut combo: BTreeMap<Block, Gauss> = BTreeMap::new();
        combo.insert(b.clone(), Gauss::one());
        loop {
            let Some(k) = vec.keys().next().cloned() else {
                combo.remove(b);
                return combo.into_iter().map(|(blk, g)| (blk, g.neg())).collect();
            };
            let Some((row, rcombo)) = self.rows.get(&k) else {
                self.rows.insert(k, (vec, combo));
                let mut me = BTreeMap::new();
                me.insert(b.clone(), Gauss::one());
                return me;
            };
            let factor = vec[&k].mul(&row[&k].inv().expect("pivot is nonzero")).neg();
            axpy(&mut vec, row, &factor);
            axpy(&mut combo, rcombo, &factor);
        }
    }
}

fn axpy<K: Ord + Clone>(into: &mut BTreeMap<K, Gauss>, from: &BTreeMap<K, Gauss>, factor: &Gauss) {
    for (k, v) in from {
        let add = v.mul(factor);
        let entry = into.entry(k.clone()).or_insert_with(Gauss::zero);
        *entry = entry.add(&add);
        if entry.is_zero() {
            into.remove(k);
        }
    }
}

/// Rewrites a functional over a basis of blocks that are independent modulo
/// total divergences; the result is zero iff the input is cohomologically zero.
pub fn reduce(model: &BvModel, f: &Functional, mode: Equality) -> Functional {
    let f = match mode {
        Equality::Exact => return f.clone(),
        Equality::Structural => f.clone(),
        Equality::Collapsed => f.collapse(),
    };
    let mut integral: Vec<&Block> = f.iter().flat_map(|(bs, _)| bs.iter()).filter(|b| b.is_integral()).collect();
    integral.sort();
    integral.dedup();
    let mut reducers = [Reducer::new(), Reducer::new()];
    let mut decomposition: HashMap<&Block, Vec<(Block, Coefficient)>> = HashMap::new();
    for b in integral {
        let r = &mut reducers[(b.parity() == Parity::Odd) as usize];
        let combo = r.insert(model, b);
        let v = combo.into_iter().map(|(blk, g)| (blk, Coefficient::from_gauss(g))).collect();
        decomposition.insert(b, v);
    }
    let mut out = Functional::zero();
    for (bs, c) in f.iter() {
        let mut partial: Vec<(Coefficient, Vec<Block>)> = vec![(c.clone(), Vec::new())];
        for b in bs {
            let choices: Vec<(Block, Coefficient)> = match decomposition.get(b) {
                Some(v) => v.clone(),
                None => vec![(b.clone(), Coefficient::one())],
            };
            let mut next = Vec::with_capacity(partial.len() * choices.len());
            for (c0, v0) in &partial {
                for (blk, c1) in &choices {
                    let mut v = v0.clone();
                    v.push(blk.clone());
                    next.push((c0 * c1, v));
                }
            }
            partial = next;
        }
        for (c, v) in partial {
            out.add_product(c, v);
        }
    }
    out
}

/// `F = G` as functionals under the chosen equality.
pub fn functional_equal(model: &BvModel, a: &Functional, b: &Functional, mode: Equality) -> Result<bool, CohomologyError> {
    if !a.owned_by(model) || !b.owned_by(model) {
        return Err(CohomologyError::ModelMismatch);
    }
    Ok(reduce(model, &a.sub(b), mode).is_zero())
}

/// `F = 0` as a functional under the chosen equality.
pub fn functional_is_zero(model: &BvModel, f: &Functional, mode: Equality) -> bool {
    reduce(model, f, mode).is_zero()
}

#[cfg(test)]
mod tests;
