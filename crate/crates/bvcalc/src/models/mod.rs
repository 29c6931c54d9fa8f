//! Built-in models: Yang–Mills in BV form, the scalar example with
//! `F = ∫q†q q_xx` and `G = ∫q†_xx cos q`, and seeded random functionals.

mod lie;
mod random;

pub use lie::{LieAlgebraData, LieError};
pub use random::{random_density, random_functional, RandomSpec};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{Coefficient, Expr};
use crate::cohomology::Functional;
use crate::jetcalc::{BvModel, ModelError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("Yang–Mills needs base dimension at least 2, got {0}")]
    BaseTooSmall(usize),
    #[error("Lie algebra dimension {0} is too large for single-digit field names (at most 9)")]
    AlgebraTooLarge(usize),
}

/// Field names used by the Yang–Mills model: `A{a}{i}` for the connection
/// and `c{a}` for the ghosts, both 1-based.
pub fn ym_connection_name(a: usize, i: usize) -> String {
    format!("A{}{}", a + 1, i + 1)
}

pub fn ym_ghost_name(a: usize) -> String {
    format!("c{}", a + 1)
}

fn rat(c: &BigRational) -> Coefficient {
    Coefficient::from_rational(c.clone())
}

/// The Yang–Mills BV action with flat Euclidean contraction,
/// `S = ¼∫F^a_{ij}F^a_{ij} + ∫A†^i_a(∂_i c^a + f^a_{bc}A^b_i c^c) − ½∫f^c_{ab} c^a c^b c†_c`,
/// where `F^a_{ij} = ∂_iA^a_j − ∂_jA^a_i + f^a_{bc}A^b_iA^c_j`.
pub fn build_yang_mills(g: &LieAlgebraData, n: usize) -> Result<(BvModel, Functional), BuildError> {
    if n < 2 {
        return Err(BuildError::BaseTooSmall(n));
    }
    let d = g.dim();
    if d > 9 {
        return Err(BuildError::AlgebraTooLarge(d));
    }
    let mut fields: Vec<(String, i32)> = Vec::new();
    for a in 0..d {
        for i in 0..n {
            fields.push((ym_connection_name(a, i), 0));
        }
    }
    for a in 0..d {
        fields.push((ym_ghost_name(a), 1));
    }
    let model = BvModel::new(n, fields)?;
    let conn = |a: usize, i: usize| (a * n + i) as u16;
    let ghost = |a: usize| (d * n + a) as u16;
    let jet = |f: u16, dagger: bool, dirs: &[usize]| Expr::jet(model.var_d(f, dagger, dirs));

    let strength = |a: usize, i: usize, j: usize| {
        let mut e = jet(conn(a, j), false, &[i]) - jet(conn(a, i), false, &[j]);
        for b in 0..d {
            for c in 0..d {
                let k = g.f(a, b, c);
                if !k.is_zero() {
                    e.add_expr(&(&jet(conn(b, i), false, &[]) * &jet(conn(c, j), false, &[])), &rat(k));
                }
            }
        }
        e
    };

    let mut density = Expr::zero();
    let quarter = Coefficient::from_ratio(1, 4);
    for a in 0..d {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let fa = strength(a, i, j);
                    density.add_expr(&(&fa * &fa), &quarter);
                }
            }
        }
    }
    for a in 0..d {
        for i in 0..n {
            let mut cov = jet(ghost(a), false, &[i]);
            for b in 0..d {
                for c in 0..d {
                    let k = g.f(a, b, c);
                    if !k.is_zero() {
                        cov.add_expr(&(&jet(conn(b, i), false, &[]) * &jet(ghost(c), false, &[])), &rat(k));
                    }
                }
            }
            density.add_expr(&(&jet(conn(a, i), true, &[]) * &cov), &Coefficient::one());
        }
    }
    let half = Coefficient::from_ratio(-1, 2);
    for c in 0..d {
        for a in 0..d {
            for b in 0..d {
                let k = g.f(c, a, b);
                if !k.is_zero() {
                    let t = &(&jet(ghost(a), false, &[]) * &jet(ghost(b), false, &[])) * &jet(ghost(c), true, &[]);
                    density.add_expr(&t, &(&half * &rat(k)));
                }
            }
        }
    }
    Ok((model, Functional::integral(&density)))
}

/// One field `q` of ghost number 0 over a line, with `F = ∫q†q q_xx` and
/// `G = ∫q†_xx cos q`.
pub fn build_scalar_example() -> (BvModel, Functional, Functional) {
    let model = BvModel::new(1, vec![("q", 0)]).expect("valid model");
    let q = |dirs: &[usize]| Expr::jet(model.var_d(0, false, dirs));
    let qd = |dirs: &[usize]| Expr::jet(model.var_d(0, true, dirs));
    let cos_q = Expr::atom(crate::algebra::Atom::Trans(crate::algebra::Func::Cos, model.var0(0, false)));
    let f = &(&qd(&[]) * &q(&[])) * &q(&[0, 0]);
    let g = &qd(&[0, 0]) * &cos_q;
    let (ff, gg) = (Functional::integral(&f), Functional::integral(&g));
    (model, ff, gg)
}
