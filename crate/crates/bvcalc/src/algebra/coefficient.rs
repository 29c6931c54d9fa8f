//! Exact coefficients: Laurent polynomials in ℏ over the Gaussian rationals ℚ(i).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gauss {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gauss {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gauss { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Gauss::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Gauss::real(BigRational::one())
    }

    pub fn i() -> Self {
        Gauss { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn mul(&self, other: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn add(&self, other: &Gauss) -> Gauss {
        Gauss { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn neg(&self) -> Gauss {
        Gauss { re: -&self.re, im: -&self.im }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Gauss> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Gauss { re: &self.re / &norm, im: -&self.im / &norm })
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-&self.im).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", self.im)
                }
            }
            (false, false) => {
                let im_abs = self.im.abs();
                let sign = if self.im.is_negative() { "-" } else { "+" };
                if im_abs.is_one() {
                    write!(f, "({} {} i)", self.re, sign)
                } else {
                    write!(f, "({} {} {}*i)", self.re, sign, im_abs)
                }
            }
        }
    }
}

/// A Laurent polynomial in ℏ with Gaussian-rational coefficients.
///
/// Terms are kept sorted by ℏ-degree with no zero entries, so the zero
/// coefficient is the empty list and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coefficient {
    terms: SmallVec<[(i32, Gauss); 1]>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { terms: SmallVec::new() }
    }

    pub fn one() -> Self {
        Coefficient::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coefficient::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coefficient::monomial(0, Gauss::real(r))
    }

    pub fn from_gauss(g: Gauss) -> Self {
        Coefficient::monomial(0, g)
    }

    /// The imaginary unit `i`.
    pub fn i() -> Self {
        Coefficient::monomial(0, Gauss::i())
    }

    /// `ℏ^degree`.
    pub fn hbar(degree: i32) -> Self {
        Coefficient::monomial(degree, Gauss::one())
    }

    pub fn monomial(degree: i32, g: Gauss) -> Self {
        let mut terms = SmallVec::new();
        if !g.is_zero() {
            terms.push((degree, g));
        }
        Coefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1 == Gauss::one()
    }

    /// `(degree, coefficient)` pairs in increasing ℏ-degree.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Gauss)> {
        self.terms.iter().map(|(d, g)| (*d, g))
    }

    /// The value as a plain rational when the coefficient has no ℏ and no `i`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, g)] if g.is_real() => Some(g.re.clone()),
            _ => None,
        }
    }

    pub fn scale_int(&self, n: i64) -> Coefficient {
        if n == 0 {
            return Coefficient::zero();
        }
        if n == 1 {
            return self.clone();
        }
        let r = BigRational::from_integer(BigInt::from(n));
        self.scale_rational(&r)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Coefficient {
        if r.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            terms: self
                .terms
                .iter()
                .map(|(d, g)| (*d, Gauss { re: &g.re * r, im: &g.im * r }))
                .collect(),
        }
    }

    /// Multiplicative inverse when the coefficient is a single ℏ-monomial.
    pub fn inv(&self) -> Option<Coefficient> {
        match self.terms.as_slice() {
            [(d, g)] => Some(Coefficient::monomial(-d, g.inv()?)),
            _ => None,
        }
    }

    fn add_ref(&self, other: &Coefficient) -> Coefficient {
        let mut out: SmallVec<[(i32, Gauss); 1]> = SmallVec::new();
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => out.push(b.next().unwrap().clone()),
                    Ordering::Equal => {
                        let s = x.1.add(&y.1);
                        if !s.is_zero() {
                            out.push((x.0, s));
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
        Coefficient { terms: out }
    }

    fn mul_ref(&self, other: &Coefficient) -> Coefficient {
        if self.is_zero() || other.is_zero() {
            return Coefficient::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut acc = Coefficient::zero();
        for (da, ga) in &self.terms {
            for (db, gb) in &other.terms {
                acc = acc.add_ref(&Coefficient::monomial(da + db, ga.mul(gb)));
            }
        }
        acc
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Coefficient) -> Coefficient {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        self.add_ref(rhs)
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        *self = self.add_ref(rhs);
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Coefficient) -> Coefficient {
        self.add_ref(&-rhs)
    }
}

impl<'a> Sub<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self.add_ref(&-rhs)
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { terms: self.terms.iter().map(|(d, g)| (*d, g.neg())).collect() }
    }
}

impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Coefficient) -> Coefficient {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        self.mul_ref(rhs)
    }
}

impl fmt::Display for Coefficient {
    /// Prints in the expression grammar, e.g. `3/2`, `-i`, `(1 + 2*i)*hbar^-1 + hbar`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (d, g)) in self.terms.iter().enumerate() {
            let (neg, g) = if g.is_real() && g.re.is_negative() || g.re.is_zero() && g.im.is_negative() {
                (true, g.neg())
            } else {
                (false, g.clone())
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let hbar = match d {
                0 => String::new(),
                1 => "hbar".to_string(),
                _ => format!("hbar^{d}"),
            };
            if *d != 0 && g == Gauss::one() {
                write!(f, "{hbar}")?;
            } else if *d == 0 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}*{hbar}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_is_invertible() {
        let h = Coefficient::hbar(1);
        let hinv = Coefficient::hbar(-1);
        assert!((&h * &hinv).is_one());
        assert_eq!(h.inv().unwrap(), hinv);
    }

    #[test]
    fn zero_is_empty() {
        let a = Coefficient::from_ratio(3, 2);
        assert!((&a - &a).is_zero());
        assert_eq!(Coefficient::from_int(0), Coefficient::zero());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = Coefficient::i();
        assert_eq!(&i * &i, Coefficient::from_int(-1));
    }

    #[test]
    fn display_forms() {
        let c = Coefficient::from_int(2) + Coefficient::hbar(-1);
        assert_eq!(c.to_string(), "hbar^-1 + 2");
        assert_eq!((-Coefficient::i()).to_string(), "-i");
        let g = Coefficient::from_gauss(Gauss::new(
            BigRational::from_integer(1.into()),
            BigRational::new((-3).into(), 2.into()),
        ));
        assert_eq!(g.to_string(), "(1 - 3/2*i)");
    }
}
