//! Atoms and monic monomials ("terms") in canonical form.
//!
//! A term is a product of factors. Each factor is an atom placed at a *site*,
//! a dummy label for one copy of the base manifold. Ordinary densities live
//! entirely at site 0; brackets of structured objects keep the factors coming
//! from different integrals at different sites so that frozen derivatives
//! wrap exactly the factor they were born from.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::{smallvec, SmallVec};

/// Derivative multi-index: one exponent per base coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub SmallVec<[u8; 4]>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(smallvec![0; dim])
    }

    pub fn from_slice(v: &[u8]) -> Self {
        MultiIndex(SmallVec::from_slice(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|σ|`, the total order.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `σ + 1_i`.
    pub fn bump(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    /// Componentwise sum `σ₁ ∪ σ₂`.
    pub fn union(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// The sequence of coordinate directions realizing `D^σ`.
    pub fn directions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, e as usize));
        }
        out
    }

    /// All multi-indices of the given dimension with total order at most `max`.
    pub fn all_up_to(dim: usize, max: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(dim)];
        let mut frontier = out.clone();
        for _ in 0..max {
            let mut next = Vec::new();
            for m in &frontier {
                let last = m.0.iter().rposition(|&e| e > 0).unwrap_or(0);
                for i in last..dim {
                    next.push(m.bump(i));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// A jet coordinate `q^α_σ` or `q†_{α,σ}`.
///
/// The parity bit is fixed by the model when the variable is created, so the
/// algebra never needs the model to order or sign a product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub field: u16,
    pub dagger: bool,
    pub odd: bool,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn with_index(&self, index: MultiIndex) -> JetVar {
        JetVar { index, ..self.clone() }
    }

    /// True when `other` is the same field/antifield at any jet order.
    pub fn same_symbol(&self, field: u16, dagger: bool) -> bool {
        self.field == field && self.dagger == dagger
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }
}

/// A pending total derivative `∏ (d/dℓ)^σ_ℓ` applied to a monic inner term.
///
/// Channels are kept sorted by label, labels are distinct, no multi-index is
/// zero, and the inner term carries jet variables (constants and pure base
/// polynomials are evaluated on construction).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frozen {
    pub channels: Vec<(u32, MultiIndex)>,
    pub inner: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// Base coordinate `x^j` (0-based).
    Base(u8),
    Jet(JetVar),
    /// `sin`, `cos` or `exp` of an even jet variable.
    Trans(Func, JetVar),
    Frozen(Box<Frozen>),
}

impl Atom {
    pub fn is_odd(&self) -> bool {
        match self {
            Atom::Jet(v) => v.odd,
            Atom::Frozen(fr) => fr.inner.is_odd(),
            Atom::Base(_) | Atom::Trans(..) => false,
        }
    }

    pub fn has_jets(&self) -> bool {
        !matches!(self, Atom::Base(_))
    }
}

/// An atom placed at a site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub site: u32,
    pub atom: Atom,
}

impl Factor {
    pub fn new(site: u32, atom: Atom) -> Self {
        Factor { site, atom }
    }
}

/// A product of atoms with unit coefficient, in canonical form.
///
/// Even factors form a multiset with positive exponents. Odd factors form a
/// strictly increasing sequence; the sign of sorting them has been moved into
/// whatever coefficient multiplies the term. In the product order all even
/// factors come first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Term {
    even: Vec<(Factor, u32)>,
    odd: Vec<Factor>,
}

/// An integer multiple of a term.
pub type Scaled = (i64, Term);

/// Result list of a term-level operation.
pub type Terms = SmallVec<[Scaled; 2]>;

/// A product of atoms (with exponents) not yet placed at a site.
pub type AtomProduct = SmallVec<[(Atom, u32); 2]>;

fn binomial(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for j in 0..k {
        r = r * (n - j) as i64 / (j + 1) as i64;
    }
    r
}

/// Sorts a sequence of odd factors, returning the permutation sign, or `None`
/// if two factors coincide (the product then vanishes).
fn sort_odd(v: &mut [Factor]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some(sign)
}

impl Term {
    pub fn one() -> Term {
        Term::default()
    }

    /// Builds the normal form of an ordered product of factors.
    ///
    /// Odd factors are sorted with sign, repeated odd factors give zero and
    /// `sin(u)²` is rewritten to `1 − cos(u)²`, which may produce several terms.
    pub fn from_raw<I>(raw: I) -> Terms
    where
        I: IntoIterator<Item = (Factor, u32)>,
    {
        let mut even: BTreeMap<Factor, u32> = BTreeMap::new();
        let mut odd: Vec<Factor> = Vec::new();
        for (f, k) in raw {
            if k == 0 {
                continue;
            }
            if f.atom.is_odd() {
                if k > 1 {
                    return SmallVec::new();
                }
                odd.push(f);
            } else {
                *even.entry(f).or_insert(0) += k;
            }
        }
        let sign = match sort_odd(&mut odd) {
            Some(s) => s,
            None => return SmallVec::new(),
        };
        let sines: Vec<(Factor, u32)> = even
            .iter()
            .filter(|(f, &k)| k >= 2 && matches!(f.atom, Atom::Trans(Func::Sin, _)))
            .map(|(f, &k)| (f.clone(), k))
            .collect();
        let mut out: Terms = smallvec![(sign, Term { even: Vec::new(), odd: Vec::new() })];
        let mut base_even = even;
        for (f, k) in &sines {
            if k % 2 == 1 {
                base_even.insert(f.clone(), 1);
            } else {
                base_even.remove(f);
            }
        }
        if sines.is_empty() {
            out[0].1 = Term { even: base_even.into_iter().collect(), odd };
            return out;
        }
        // Expand ∏ (1 − cos²)^{k/2} over the rewritten sines.
        let mut partial: Vec<(i64, BTreeMap<Factor, u32>)> = vec![(sign, base_even)];
        for (f, k) in &sines {
            let m = k / 2;
            let cos = match &f.atom {
                Atom::Trans(_, u) => Factor::new(f.site, Atom::Trans(Func::Cos, u.clone())),
                _ => unreachable!(),
            };
            let mut next = Vec::new();
            for (c, map) in &partial {
                for j in 0..=m {
                    let mut map = map.clone();
                    if j > 0 {
                        *map.entry(cos.clone()).or_insert(0) += 2 * j;
                    }
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    next.push((c * s * binomial(m, j), map));
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|(c, map)| (c, Term { even: map.into_iter().collect(), odd: odd.clone() }))
            .collect()
    }

    /// Term consisting of a single atom at a site.
    pub fn atom(site: u32, atom: Atom) -> Terms {
        Term::from_raw([(Factor::new(site, atom), 1)])
    }

    /// Product of two terms (first times second).
    pub fn mul(&self, other: &Term) -> Terms {
        if self.is_one() {
            return smallvec![(1, other.clone())];
        }
        if other.is_one() {
            return smallvec![(1, self.clone())];
        }
        Term::from_raw(self.raw().chain(other.raw()))
    }

    /// Factors in product order: even factors (with exponents) then the odd ones.
    pub fn raw(&self) -> impl Iterator<Item = (Factor, u32)> + '_ {
        self.even.iter().cloned().chain(self.odd.iter().map(|f| (f.clone(), 1)))
    }

    pub fn even(&self) -> &[(Factor, u32)] {
        &self.even
    }

    pub fn odd(&self) -> &[Factor] {
        &self.odd
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.odd.len() % 2 == 1
    }

    /// True when no factor depends on jet variables.
    pub fn is_jet_free(&self) -> bool {
        self.raw().all(|(f, _)| !f.atom.has_jets())
    }

    pub fn has_frozen(&self) -> bool {
        self.raw().any(|(f, _)| matches!(f.atom, Atom::Frozen(_)))
    }

    /// Distinct sites, ascending.
    pub fn sites(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.raw().map(|(f, _)| f.site).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Visits every atom, descending into frozen inner terms.
    pub fn visit_atoms(&self, visit: &mut dyn FnMut(&Atom)) {
        for (f, _) in self.raw() {
            visit(&f.atom);
            if let Atom::Frozen(fr) = &f.atom {
                fr.inner.visit_atoms(visit);
            }
        }
    }

    /// Every channel label used anywhere in the term.
    pub fn channels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Frozen(fr) = a {
                out.extend(fr.channels.iter().map(|(l, _)| *l));
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Every jet variable occurring anywhere (including transcendental
    /// arguments and frozen inners), each with the site of its top-level factor.
    pub fn jet_occurrences(&self) -> Vec<(u32, JetVar)> {
        let mut out = Vec::new();
        for (f, _) in self.raw() {
            let site = f.site;
            let mut push = |a: &Atom| match a {
                Atom::Jet(v) | Atom::Trans(_, v) => out.push((site, v.clone())),
                _ => {}
            };
            push(&f.atom);
            if let Atom::Frozen(fr) = &f.atom {
                fr.inner.visit_atoms(&mut push);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Total number of odd factors and factor count, used for size heuristics.
    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, k)| *k).sum::<u32>() + self.odd.len() as u32
    }

    /// Applies `f` to every top-level factor's site.
    pub fn map_sites(&self, f: &dyn Fn(u32) -> u32) -> Terms {
        Term::from_raw(self.raw().map(|(fac, k)| (Factor::new(f(fac.site), fac.atom), k)))
    }

    /// Renames channel labels everywhere (the map must be injective).
    pub fn map_channels(&self, f: &dyn Fn(u32) -> u32) -> Terms {
        let mut sign = 1;
        let raw: Vec<(Factor, u32)> = self
            .raw()
            .map(|(fac, k)| {
                let (s, atom) = fac.atom.map_channels(f);
                if k % 2 == 1 {
                    sign *= s;
                }
                (Factor::new(fac.site, atom), k)
            })
            .collect();
        let mut out = Term::from_raw(raw);
        for (c, _) in out.iter_mut() {
            *c *= sign;
        }
        out
    }

    /// Sets every site to 0.
    pub fn flatten_sites(&self) -> Terms {
        self.map_sites(&|_| 0)
    }
}

impl Atom {
    /// Renames channel labels; the sign comes from reordering odd factors
    /// inside frozen inners.
    pub fn map_channels(&self, f: &dyn Fn(u32) -> u32) -> (i64, Atom) {
        match self {
            Atom::Frozen(fr) => {
                let (sign, inner) = fr
                    .inner
                    .map_channels(f)
                    .into_iter()
                    .next()
                    .expect("an injective relabeling keeps a nonzero term");
                let mut channels: Vec<(u32, MultiIndex)> =
                    fr.channels.iter().map(|(l, m)| (f(*l), m.clone())).collect();
                channels.sort();
                (sign, Atom::Frozen(Box::new(Frozen { channels, inner })))
            }
            a => (1, a.clone()),
        }
    }
}

impl Frozen {
    /// Normal form of `∏ (d/dℓ)^σ_ℓ` applied to `inner`.
    ///
    /// Zero multi-indices are dropped, nested single wrappers merge their
    /// channels, a constant inner vanishes under a nonzero derivative and a
    /// pure base polynomial is differentiated at once.
    pub fn make(channels: Vec<(u32, MultiIndex)>, inner: Term) -> SmallVec<[(i64, AtomProduct); 1]> {
        let mut channels: Vec<(u32, MultiIndex)> =
            channels.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        if channels.is_empty() {
            let atoms = inner.raw().map(|(f, k)| (f.atom, k)).collect();
            return smallvec![(1, atoms)];
        }
        if inner.odd.is_empty() && inner.even.len() == 1 && inner.even[0].1 == 1 {
            if let Atom::Frozen(fr) = &inner.even[0].0.atom {
                return Frozen::make(merge_channels(channels, &fr.channels), fr.inner.clone());
            }
        }
        if inner.even.is_empty() && inner.odd.len() == 1 {
            if let Atom::Frozen(fr) = &inner.odd[0].atom {
                return Frozen::make(merge_channels(channels, &fr.channels), fr.inner.clone());
            }
        }
        if inner.is_one() {
            return SmallVec::new();
        }
        if inner.is_jet_free() {
            return differentiate_base_monomial(&inner, &channels);
        }
        channels.sort();
        smallvec![(1, smallvec![(Atom::Frozen(Box::new(Frozen { channels, inner })), 1)])]
    }

    /// Sum of the channel multi-indices.
    pub fn total_index(&self) -> MultiIndex {
        let dim = self.channels[0].1.dim();
        self.channels.iter().fold(MultiIndex::zero(dim), |acc, (_, m)| acc.union(m))
    }
}

fn merge_channels(mut a: Vec<(u32, MultiIndex)>, b: &[(u32, MultiIndex)]) -> Vec<(u32, MultiIndex)> {
    for (l, m) in b {
        if let Some(slot) = a.iter_mut().find(|(x, _)| x == l) {
            slot.1 = slot.1.union(m);
        } else {
            a.push((*l, m.clone()));
        }
    }
    a
}

fn differentiate_base_monomial(
    inner: &Term,
    channels: &[(u32, MultiIndex)],
) -> SmallVec<[(i64, AtomProduct); 1]> {
    let dim = channels[0].1.dim();
    let total = channels.iter().fold(MultiIndex::zero(dim), |acc, (_, m)| acc.union(m));
    let mut coeff: i64 = 1;
    let mut atoms: AtomProduct = SmallVec::new();
    let mut exps = vec![0u32; dim];
    for (f, k) in inner.raw() {
        if let Atom::Base(j) = f.atom {
            exps[j as usize] += k;
        }
    }
    for (j, &e) in exps.iter().enumerate() {
        let s = total.0[j] as u32;
        if s > e {
            return SmallVec::new();
        }
        for t in 0..s {
            coeff *= (e - t) as i64;
        }
        if e > s {
            atoms.push((Atom::Base(j as u8), e - s));
        }
    }
    smallvec![(coeff, atoms)]
}

impl fmt::Display for Term {
    /// Model-free rendering used in diagnostics: field `k` prints as `fk`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (fac, k) in self.raw() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", DebugAtom(&fac.atom))?;
            if fac.site != 0 {
                write!(f, "@{}", fac.site)?;
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

struct DebugAtom<'a>(&'a Atom);

impl fmt::Display for DebugAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let jet = |v: &JetVar| {
            let d = if v.dagger { "†" } else { "" };
            let idx: Vec<String> = v.index.0.iter().map(|e| e.to_string()).collect();
            format!("f{}{}[{}]", v.field, d, idx.join(","))
        };
        match self.0 {
            Atom::Base(j) => write!(f, "x{}", j + 1),
            Atom::Jet(v) => write!(f, "{}", jet(v)),
            Atom::Trans(func, v) => write!(f, "{}({})", func.name(), jet(v)),
            Atom::Frozen(fr) => {
                let ch: Vec<String> = fr
                    .channels
                    .iter()
                    .map(|(l, m)| format!("{}:{:?}", l, m.0.as_slice()))
                    .collect();
                write!(f, "fd[{}]({})", ch.join(","), fr.inner)
            }
        }
    }
}
