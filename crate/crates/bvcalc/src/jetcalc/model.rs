//! Declaration of the BV bundle: base dimension and paired fields/antifields.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Atom, JetVar, MultiIndex, Parity, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("base dimension must be positive")]
    ZeroDimension,
    #[error("base dimension {0} is larger than supported (at most 9)")]
    DimensionTooLarge(usize),
    #[error("field `{0}` is declared twice")]
    DuplicateField(String),
    #[error("`{0}` is not a valid field name")]
    InvalidName(String),
    #[error("too many fields (at most 65535)")]
    TooManyFields,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldDecl {
    pub name: String,
    pub ghost: i32,
}

/// Base dimension plus an ordered table of fields with ghost numbers.
///
/// Each field `q` has exactly one antifield partner `q†` with
/// `gh(q†) = −gh(q) − 1`; parity is the ghost number mod 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BvModel {
    dim: usize,
    fields: Vec<FieldDecl>,
}

/// Words the expression grammar reserves.
pub const RESERVED: &[&str] = &["i", "hbar", "sin", "cos", "exp", "dag", "D", "fd", "int", "x"];

fn valid_name(name: &str, dim: usize) -> bool {
    let mut chars = name.chars();
    let Some(c0) = chars.next() else { return false };
    if !c0.is_ascii_alphabetic() || !name.chars().all(|c| c.is_ascii_alphanumeric()) {
        return false;
    }
    if RESERVED.contains(&name) {
        return false;
    }
    if let Some(rest) = name.strip_prefix('x') {
        if let Ok(k) = rest.parse::<usize>() {
            if k >= 1 && k <= dim {
                return false;
            }
        }
    }
    true
}

impl BvModel {
    pub fn new<S: Into<String>>(dim: usize, fields: Vec<(S, i32)>) -> Result<Self, ModelError> {
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        if dim > 9 {
            return Err(ModelError::DimensionTooLarge(dim));
        }
        if fields.len() > u16::MAX as usize {
            return Err(ModelError::TooManyFields);
        }
        let mut out: Vec<FieldDecl> = Vec::new();
        for (name, ghost) in fields {
            let name = name.into();
            if !valid_name(&name, dim) {
                return Err(ModelError::InvalidName(name));
            }
            if out.iter().any(|f| f.name == name) {
                return Err(ModelError::DuplicateField(name));
            }
            out.push(FieldDecl { name, ghost });
        }
        Ok(BvModel { dim, fields: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fields(&self) -> &[FieldDecl] {
        &self.fields
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn field_id(&self, name: &str) -> Option<u16> {
        self.fields.iter().position(|f| f.name == name).map(|p| p as u16)
    }

    pub fn field_name(&self, id: u16) -> &str {
        &self.fields[id as usize].name
    }

    /// Ghost number of `q` or `q†`.
    pub fn ghost(&self, field: u16, dagger: bool) -> i32 {
        let g = self.fields[field as usize].ghost;
        if dagger {
            -g - 1
        } else {
            g
        }
    }

    pub fn parity(&self, field: u16, dagger: bool) -> Parity {
        Parity::from_odd(self.ghost(field, dagger).rem_euclid(2) == 1)
    }

    /// The jet variable `q_σ` or `q†_σ`.
    pub fn var(&self, field: u16, dagger: bool, index: MultiIndex) -> JetVar {
        assert_eq!(index.dim(), self.dim, "multi-index dimension must match the base");
        JetVar { field, dagger, odd: self.parity(field, dagger).is_odd(), index }
    }

    /// The undifferentiated variable `q` or `q†`.
    pub fn var0(&self, field: u16, dagger: bool) -> JetVar {
        self.var(field, dagger, MultiIndex::zero(self.dim))
    }

    /// `q` differentiated along the listed directions.
    pub fn var_d(&self, field: u16, dagger: bool, dirs: &[usize]) -> JetVar {
        let mut m = MultiIndex::zero(self.dim);
        for &d in dirs {
            m = m.bump(d);
        }
        self.var(field, dagger, m)
    }

    /// Ghost number of a term (transcendental atoms count as 0).
    pub fn term_ghost_number(&self, t: &Term) -> i32 {
        let mut g = 0;
        for (f, k) in t.raw() {
            g += k as i32 * self.atom_ghost_number(&f.atom);
        }
        g
    }

    fn atom_ghost_number(&self, a: &Atom) -> i32 {
        match a {
            Atom::Jet(v) => self.ghost(v.field, v.dagger),
            Atom::Frozen(fr) => self.term_ghost_number(&fr.inner),
            Atom::Base(_) | Atom::Trans(..) => 0,
        }
    }

    /// Checks that every jet variable refers to a declared field with the
    /// right parity and base dimension.
    pub fn owns_term(&self, t: &Term) -> bool {
        let mut ok = true;
        t.visit_atoms(&mut |a| match a {
            Atom::Jet(v) | Atom::Trans(_, v) => {
                ok &= (v.field as usize) < self.fields.len()
                    && v.index.dim() == self.dim
                    && v.odd == self.parity(v.field, v.dagger).is_odd();
            }
            Atom::Base(j) => ok &= (*j as usize) < self.dim,
            Atom::Frozen(fr) => ok &= fr.channels.iter().all(|(_, m)| m.dim() == self.dim),
        });
        ok
    }

    /// Grammar rendering of a term.
    pub fn display_term(&self, t: &Term) -> String {
        crate::text::print_term(self, t)
    }
}
