//! Symbolic Batalin–Vilkovisky calculus on jet spaces.
//!
//! Graded jet-variable expressions with exact coefficients, Euler operators,
//! the variational Schouten bracket and BV-Laplacian in a naive single-base
//! mode and a geometric mode where every variation keeps its own frozen
//! derivative channel, plus cohomological comparison of local functionals and
//! a numeric oracle.

pub mod algebra;
pub mod jetcalc;
pub mod text;
pub mod cohomology;
pub mod bv;
pub mod models;
pub mod suites;
pub mod oracle;
pub mod modelfile;
pub mod examples;
