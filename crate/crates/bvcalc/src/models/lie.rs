//! Structure constants of a finite-dimensional Lie algebra.

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("expected {expected} structure constants for dimension {dim}, got {got}")]
    WrongSize { dim: usize, expected: usize, got: usize },
    #[error("structure constants are not antisymmetric: f^{a}_{{{b}{c}}} != -f^{a}_{{{c}{b}}}")]
    NotAntisymmetric { a: usize, b: usize, c: usize },
    #[error("Jacobi identity fails for upper index {a} and lower indices ({b}, {c}, {d})")]
    JacobiViolated { a: usize, b: usize, c: usize, d: usize },
    #[error("Lie algebra dimension must be positive")]
    Empty,
}

/// Rational structure constants `f^a_{bc}`, stored as `f[a][b][c]` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    dim: usize,
    f: Vec<BigRational>,
}

impl LieAlgebraData {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(dim: usize, f: Vec<BigRational>) -> Result<Self, LieError> {
        if dim == 0 {
            return Err(LieError::Empty);
        }
        if f.len() != dim * dim * dim {
            return Err(LieError::WrongSize { dim, expected: dim * dim * dim, got: f.len() });
        }
        let g = LieAlgebraData { dim, f };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    if g.f(a, b, c) != &-g.f(a, c, b) {
                        return Err(LieError::NotAntisymmetric { a, b, c });
                    }
                }
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        let mut s = BigRational::zero();
                        for e in 0..dim {
                            s += g.f(a, b, e) * g.f(e, c, d);
                            s += g.f(a, c, e) * g.f(e, d, b);
                            s += g.f(a, d, e) * g.f(e, b, c);
                        }
                        if !s.is_zero() {
                            return Err(LieError::JacobiViolated { a, b, c, d });
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// `su(2)` with `f^a_{bc} = ε_{abc}`.
    pub fn su2() -> Self {
        let mut f = vec![BigRational::zero(); 27];
        for (a, b, c, s) in [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)] {
            f[a * 9 + b * 3 + c] = BigRational::from_integer(s.into());
        }
        LieAlgebraData::new(3, f).expect("ε satisfies Jacobi")
    }

    /// The abelian algebra of dimension `dim`.
    pub fn abelian(dim: usize) -> Self {
        LieAlgebraData::new(dim, vec![BigRational::zero(); dim * dim * dim]).expect("zero bracket is a Lie algebra")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self, a: usize, b: usize, c: usize) -> &BigRational {
        &self.f[(a * self.dim + b) * self.dim + c]
    }

    /// Raw constants in `[a][b][c]` order.
    pub fn constants(&self) -> &[BigRational] {
        &self.f
    }

    /// `f^d_{dc}` summed over `d`, for every `c`; zero for unimodular algebras.
    pub fn trace(&self, c: usize) -> BigRational {
        (0..self.dim).map(|d| self.f(d, d, c).clone()).sum()
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|c| self.trace(c).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn su2_is_valid_and_unimodular() {
        let g = LieAlgebraData::su2();
        assert_eq!(g.f(0, 1, 2), &BigRational::one());
        assert_eq!(g.f(0, 2, 1), &-BigRational::one());
        assert!(g.is_unimodular());
    }

    #[test]
    fn perturbed_epsilon_is_rejected() {
        let mut f = LieAlgebraData::su2().constants().to_vec();
        f[1] = BigRational::one();
        f[3] = -BigRational::one();
        assert!(matches!(LieAlgebraData::new(3, f), Err(LieError::JacobiViolated { .. })));
    }

    #[test]
    fn asymmetric_constants_are_rejected() {
        let mut f = LieAlgebraData::su2().constants().to_vec();
        f[5] = BigRational::zero();
        assert!(matches!(LieAlgebraData::new(3, f), Err(LieError::NotAntisymmetric { .. })));
    }
}
