//! Text grammar for expressions and functionals: parser and printer.
//!
//! Fields are model identifiers; `q†` or `dag(q)` is the antifield;
//! derivatives are written `q_x`, `q_xx`, `q''` (one-dimensional base) or
//! `q_{x1 x2}`; `D[j](e)` is a total derivative; `fd[0:xx,1:x](e)` is a
//! frozen derivative with channels 0 and 1; `@k` places an atom at site `k`;
//! `int(e)` is an integral block of a functional.

mod lexer;
mod parser;
mod printer;

pub use printer::{join_signed, print_expr, print_jet, print_term, scaled, signed_coefficient};

use thiserror::Error;

use crate::algebra::{normalize, Expr};
use crate::jetcalc::BvModel;

pub(crate) use parser::{scalar_inverse, to_raw, Node, Parser};

/// Inverse of a scalar parse tree (a single ℏ-monomial).
pub(crate) fn scalar_inverse_node(n: Node, pos: usize) -> Result<crate::algebra::Coefficient, ParseError> {
    scalar_inverse(to_raw(n)?, pos)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

/// Parses and normalizes an expression.
pub fn parse_expr(model: &BvModel, src: &str) -> Result<Expr, ParseError> {
    let node = Parser::new(model, src)?.parse_all()?;
    let raw = to_raw(node)?;
    normalize(&raw).map_err(|e| ParseError::new(1, e.to_string()))
}
