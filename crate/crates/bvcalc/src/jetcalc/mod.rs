//! Jet-space calculus: bundle declaration, total derivatives, graded partial
//! derivatives, plain and channelled Euler operators, and frozen-channel collapse.

mod calculus;
mod canon;
mod model;

pub use calculus::{
    collapse, collapse_term, euler, euler_channelled, euler_left, euler_right, fresh_label, iterated_variation_geometric,
    iterated_variation_naive, partial_left, partial_right, term_euler_channelled, term_partial, term_total_derivative,
    total_derivative, total_derivative_multi, wrap_site, Side,
};
pub(crate) use calculus::euler_channelled_unchecked;
pub use canon::{canonicalize_channels, canonicalize_term, shift_channels, shift_sites};
pub use model::{BvModel, FieldDecl, ModelError, RESERVED};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("channel label {0} already occurs in the expression")]
    ChannelReused(u32),
    #[error("an iterated variation needs at least one shift")]
    NoShifts,
}
