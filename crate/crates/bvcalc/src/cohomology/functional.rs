//! Local functionals: formal combinations of products of integral blocks.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{normalize, sign, AlgebraError, Coefficient, Expr, Parity, Term};
use crate::jetcalc::{canonicalize_term, collapse_term, BvModel};
use crate::text::{join_signed, print_term, scaled, to_raw, Node, ParseError, Parser};

/// One integral `∫ m` of a monic term, with sites and channels renamed canonically.
///
/// A block whose term lives at a single site and has no frozen derivative is
/// an ordinary integral block (a density up to total divergences); any other
/// block is structured.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Term);

impl Block {
    /// Canonical block for a term, with the sign relating them; `None` if the
    /// term vanishes under its own relabeling symmetry.
    pub fn canonical(t: &Term) -> Option<(i64, Block)> {
        canonicalize_term(t).map(|(s, t)| (s, Block(t)))
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.0.is_odd())
    }

    /// Single site and no frozen derivatives.
    pub fn is_integral(&self) -> bool {
        !self.0.has_frozen() && self.0.sites().len() <= 1
    }

    /// The block's density as an expression.
    pub fn expr(&self) -> Expr {
        Expr::term(Coefficient::one(), self.0.clone())
    }
}

/// Sorts blocks into canonical order, returning the sign from swapping odd
/// blocks, or `None` if an odd block repeats.
pub fn sort_blocks(blocks: &mut [Block]) -> Option<i64> {
    let mut s = 1;
    for i in 1..blocks.len() {
        let mut j = i;
        while j > 0 && blocks[j - 1] > blocks[j] {
            if blocks[j - 1].parity().is_odd() && blocks[j].parity().is_odd() {
                s = -s;
            }
            blocks.swap(j - 1, j);
            j -= 1;
        }
        if j > 0 && blocks[j - 1] == blocks[j] && blocks[j].parity().is_odd() {
            return None;
        }
    }
    Some(s)
}

/// A formal linear combination of products of blocks.
///
/// Keys are block lists in canonical order; the empty list is the unit
/// (constant functionals); no coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Functional {
    terms: BTreeMap<Vec<Block>, Coefficient>,
}

impl Functional {
    pub fn zero() -> Self {
        Functional::default()
    }

    pub fn constant(c: Coefficient) -> Self {
        let mut f = Functional::zero();
        f.add_product(c, Vec::new());
        f
    }

    pub fn one() -> Self {
        Functional::constant(Coefficient::one())
    }

    /// `∫ e`, split into one block per term of `e`.
    pub fn integral(e: &Expr) -> Self {
        let mut f = Functional::zero();
        for (t, c) in e.iter() {
            if let Some((s, b)) = Block::canonical(t) {
                f.add_product(c.scale_int(s), vec![b]);
            }
        }
        f
    }

    /// Adds `c·∏ blocks`, bringing the product into canonical order.
    pub fn add_product(&mut self, c: Coefficient, mut blocks: Vec<Block>) {
        if c.is_zero() {
            return;
        }
        let Some(s) = sort_blocks(&mut blocks) else { return };
        let c = c.scale_int(s);
        match self.terms.entry(blocks) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c·∏ ∫e_k`, expanding every factor into its blocks.
    pub fn add_product_of_integrals(&mut self, c: &Coefficient, factors: &[Expr]) {
        let mut partial: Vec<(Coefficient, Vec<Block>)> = vec![(c.clone(), Vec::new())];
        for e in factors {
            let f = Functional::integral(e);
            let mut next = Vec::new();
            for (c0, bs) in &partial {
                for (bs2, c2) in &f.terms {
                    let mut v = bs.clone();
                    v.extend(bs2.iter().cloned());
                    next.push((c0 * c2, v));
                }
            }
            partial = next;
        }
        for (c, bs) in partial {
            self.add_product(c, bs);
        }
    }

    pub fn add(&self, other: &Functional) -> Functional {
        let mut out = self.clone();
        out.add_scaled(other, &Coefficient::one());
        out
    }

    pub fn sub(&self, other: &Functional) -> Functional {
        let mut out = self.clone();
        out.add_scaled(other, &Coefficient::from_int(-1));
        out
    }

    pub fn add_scaled(&mut self, other: &Functional, c: &Coefficient) {
        for (bs, x) in &other.terms {
            self.add_product(x * c, bs.clone());
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Functional {
        let mut out = Functional::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Functional {
        self.scale(&Coefficient::from_int(-1))
    }

    /// The graded product `F·G`.
    pub fn mul(&self, other: &Functional) -> Functional {
        let mut out = Functional::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut v = a.clone();
                v.extend(b.iter().cloned());
                out.add_product(ca * cb, v);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Functional {
        (0..n).fold(Functional::one(), |acc, _| acc.mul(self))
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

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Block>, &Coefficient)> {
        self.terms.iter()
    }

    /// Every block of every product is an ordinary integral block.
    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|bs| bs.iter().all(Block::is_integral))
    }

    /// The parity of each product term, checked to agree.
    pub fn parity(&self) -> Result<Parity, AlgebraError> {
        let mut seen: Option<(Parity, &Vec<Block>)> = None;
        for bs in self.terms.keys() {
            let p = product_parity(bs);
            match seen {
                None => seen = Some((p, bs)),
                Some((p0, b0)) if p0 != p => {
                    return Err(AlgebraError::HeterogeneousParity { first: debug_product(b0), second: debug_product(bs) })
                }
                _ => {}
            }
        }
        Ok(seen.map_or(Parity::Even, |(p, _)| p))
    }

    /// Common ghost number of all product terms.
    pub fn ghost_number(&self, model: &BvModel) -> Result<i32, AlgebraError> {
        let mut seen: Option<(i32, &Vec<Block>)> = None;
        for bs in self.terms.keys() {
            let g: i32 = bs.iter().map(|b| model.term_ghost_number(b.term())).sum();
            match seen {
                None => seen = Some((g, bs)),
                Some((g0, b0)) if g0 != g => {
                    return Err(AlgebraError::HeterogeneousGhost {
                        first: print_product(model, b0),
                        second: print_product(model, bs),
                    })
                }
                _ => {}
            }
        }
        Ok(seen.map_or(0, |(g, _)| g))
    }

    /// Replaces every block by its collapsed density.
    pub fn collapse(&self) -> Functional {
        let mut out = Functional::zero();
        for (bs, c) in &self.terms {
            let factors: Vec<Expr> = bs.iter().map(|b| collapse_term(b.term())).collect();
            out.add_product_of_integrals(c, &factors);
        }
        out
    }

    /// For a single-block functional (or zero), its density.
    pub fn as_density(&self) -> Option<Expr> {
        let mut e = Expr::zero();
        for (bs, c) in &self.terms {
            if bs.len() != 1 {
                return None;
            }
            e.add_term(bs[0].term().clone(), c.clone());
        }
        Some(e)
    }

    /// The sum of all single-block terms as one density, ignoring products.
    pub fn single_block_part(&self) -> Expr {
        let mut e = Expr::zero();
        for (bs, c) in &self.terms {
            if bs.len() == 1 {
                e.add_term(bs[0].term().clone(), c.clone());
            }
        }
        e
    }

    /// True when every block belongs to the model.
    pub fn owned_by(&self, model: &BvModel) -> bool {
        self.terms.keys().all(|bs| bs.iter().all(|b| model.owns_term(b.term())))
    }

    /// Largest number of blocks in a product.
    pub fn max_blocks(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn product_parity(bs: &[Block]) -> Parity {
    bs.iter().fold(Parity::Even, |p, b| p.plus(b.parity()))
}

/// `(−1)^{a·b}` for parities.
pub fn koszul(a: Parity, b: Parity) -> i64 {
    sign(a.bit() * b.bit())
}

fn debug_product(bs: &[Block]) -> String {
    let parts: Vec<String> = bs.iter().map(|b| format!("int({})", b.term())).collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn print_product(model: &BvModel, bs: &[Block]) -> String {
    let parts: Vec<String> = bs.iter().map(|b| format!("int({})", print_term(model, b.term()))).collect();
    parts.join("*")
}

/// Grammar rendering, e.g. `2*int(q*q_x) - i*hbar*int(q†)*int(q)`.
pub fn print_functional(model: &BvModel, f: &Functional) -> String {
    join_signed(f.iter().map(|(bs, c)| scaled(c, &print_product(model, bs), bs.is_empty())))
}

/// Display adapter binding a functional to its model.
pub struct Shown<'a>(pub &'a BvModel, pub &'a Functional);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_functional(self.0, self.1))
    }
}

fn contains_int(n: &Node) -> bool {
    match n {
        Node::Int(..) => true,
        Node::Leaf(_) => false,
        Node::Sum(v) => v.iter().any(|(_, n)| contains_int(n)),
        Node::Product(v) => v.iter().any(contains_int),
        Node::Div(a, b, _) => contains_int(a) || contains_int(b),
        Node::Pow(a, _, _) => contains_int(a),
        Node::Deriv(_, a) => contains_int(a),
    }
}

fn eval_functional(n: Node) -> Result<Functional, ParseError> {
    let normal = |n: Node, pos: usize| -> Result<Expr, ParseError> {
        normalize(&to_raw(n)?).map_err(|e| ParseError::new(pos, e.to_string()))
    };
    Ok(match n {
        Node::Int(inner, pos) => Functional::integral(&normal(*inner, pos)?),
        Node::Sum(items) => {
            let mut out = Functional::zero();
            for (neg, it) in items {
                let f = eval_functional(it)?;
                out.add_scaled(&f, &Coefficient::from_int(if neg { -1 } else { 1 }));
            }
            out
        }
        Node::Product(items) => {
            let mut out = Functional::one();
            for it in items {
                out = out.mul(&eval_functional(it)?);
            }
            out
        }
        Node::Div(a, b, pos) => {
            let inv = crate::text::scalar_inverse_node(*b, pos)?;
            eval_functional(*a)?.scale(&inv)
        }
        Node::Pow(b, k, pos) => {
            if k < 0 {
                let inv = crate::text::scalar_inverse_node(*b, pos)?;
                let mut c = Coefficient::one();
                for _ in 0..(-k) {
                    c = &c * &inv;
                }
                Functional::constant(c)
            } else {
                eval_functional(*b)?.pow(k as u32)
            }
        }
        Node::Deriv(..) => return Err(ParseError::new(1, "D[j] cannot be applied to a functional")),
        Node::Leaf(r) => {
            let e = normalize(&r).map_err(|e| ParseError::new(1, e.to_string()))?;
            if e.iter().any(|(t, _)| !t.is_one()) {
                return Err(ParseError::new(1, "fields must appear inside int(…) in a functional"));
            }
            Functional::constant(e.coefficient(&Term::one()))
        }
    })
}

/// Parses a functional. Input without `int(…)` is read as one density `∫e`,
/// except that a bare scalar stays a constant functional.
pub fn parse_functional(model: &BvModel, src: &str) -> Result<Functional, ParseError> {
    let node = Parser::new(model, src)?.parse_all()?;
    if contains_int(&node) {
        eval_functional(node)
    } else {
        let e = normalize(&to_raw(node)?).map_err(|e| ParseError::new(1, e.to_string()))?;
        if e.iter().all(|(t, _)| t.is_one()) {
            return Ok(Functional::constant(e.coefficient(&Term::one())));
        }
        Ok(Functional::integral(&e))
    }
}
