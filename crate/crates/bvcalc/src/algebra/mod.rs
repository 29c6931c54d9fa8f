//! Exact coefficient arithmetic and the canonical normal form for graded expressions.

mod coefficient;
mod expr;
mod term;

pub use coefficient::{Coefficient, Gauss};
pub use expr::{normalize, sign, Expr, Parity, RawExpr};
pub use term::{Atom, AtomProduct, Factor, Frozen, Func, JetVar, MultiIndex, Scaled, Term, Terms};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{func} needs a single even jet variable as argument, got `{arg}`")]
    CompositeArgument { func: String, arg: String },
    #[error("{func} cannot be applied to the odd variable `{arg}`")]
    OddArgument { func: String, arg: String },
    #[error("expression is not parity-homogeneous: `{first}` and `{second}` have different parity")]
    HeterogeneousParity { first: String, second: String },
    #[error("expression is not ghost-number-homogeneous: `{first}` and `{second}` differ")]
    HeterogeneousGhost { first: String, second: String },
    #[error("site markers are not allowed inside a frozen derivative")]
    SiteInsideFrozen,
}

/// Zero test on canonical forms.
pub fn is_zero(e: &Expr) -> bool {
    e.is_zero()
}
