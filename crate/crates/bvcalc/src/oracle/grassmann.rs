//! Elements of a finite exterior algebra with float coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

/// Largest supported number of generators.
pub const MAX_GENERATORS: u32 = 8;

/// `Σ c_S θ_S` over subsets `S` of at most eight generators; bit `k` of the
/// key stands for `θ_{k+1}`, and `θ_S` is the product in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GrassmannNumber {
    terms: BTreeMap<u8, f64>,
}

/// Sign of moving the generators of `b` past those of `a` into increasing order.
fn merge_sign(a: u8, b: u8) -> f64 {
    let mut swaps = 0;
    for j in 0..MAX_GENERATORS {
        if b & (1 << j) != 0 {
            swaps += a.checked_shr(j + 1).unwrap_or(0).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl GrassmannNumber {
    pub fn zero() -> Self {
        GrassmannNumber::default()
    }

    pub fn scalar(x: f64) -> Self {
        let mut g = GrassmannNumber::zero();
        g.add_term(0, x);
        g
    }

    /// The generator `θ_k` for `k` in `1..=8`.
    pub fn generator(k: u32) -> Self {
        assert!((1..=MAX_GENERATORS).contains(&k), "generator index out of range");
        let mut g = GrassmannNumber::zero();
        g.add_term(1 << (k - 1), 1.0);
        g
    }

    /// `c·θ_S` for a generator mask.
    pub fn monomial(mask: u8, c: f64) -> Self {
        let mut g = GrassmannNumber::zero();
        g.add_term(mask, c);
        g
    }

    fn add_term(&mut self, mask: u8, c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(mask).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `θ_S`.
    pub fn coefficient(&self, mask: u8) -> f64 {
        self.terms.get(&mask).copied().unwrap_or(0.0)
    }

    /// The scalar part.
    pub fn body(&self) -> f64 {
        self.coefficient(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u8, f64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    /// True when only even-degree (resp. odd-degree) components occur.
    pub fn has_parity(&self, odd: bool) -> bool {
        self.terms.keys().all(|m| (m.count_ones() % 2 == 1) == odd)
    }

    pub fn scale(&self, x: f64) -> Self {
        GrassmannNumber { terms: self.terms.iter().map(|(m, c)| (*m, c * x)).filter(|(_, c)| *c != 0.0).collect() }
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &GrassmannNumber) -> f64 {
        (self - other).max_abs()
    }
}

impl Add for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn add(self, rhs: &GrassmannNumber) -> GrassmannNumber {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl Sub for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn sub(self, rhs: &GrassmannNumber) -> GrassmannNumber {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -*c);
        }
        out
    }
}

impl Neg for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn neg(self) -> GrassmannNumber {
        self.scale(-1.0)
    }
}

impl Mul for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, rhs: &GrassmannNumber) -> GrassmannNumber {
        let mut out = GrassmannNumber::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                if a & b == 0 {
                    out.add_term(a | b, merge_sign(*a, *b) * x * y);
                }
            }
        }
        out
    }
}

impl fmt::Display for GrassmannNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for j in 0..MAX_GENERATORS {
                if m & (1 << j) != 0 {
                    write!(f, "*t{}", j + 1)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_anticommute_and_square_to_zero() {
        let (a, b) = (GrassmannNumber::generator(1), GrassmannNumber::generator(2));
        assert!((&a * &a).is_zero());
        assert_eq!(&a * &b, -&(&b * &a));
        assert_eq!((&a * &b).coefficient(0b11), 1.0);
        assert_eq!((&b * &a).coefficient(0b11), -1.0);
    }

    #[test]
    fn multiplication_is_associative() {
        let x = &GrassmannNumber::scalar(2.0) + &GrassmannNumber::generator(1);
        let y = &GrassmannNumber::generator(2) + &GrassmannNumber::monomial(0b101, 3.0);
        let z = &GrassmannNumber::generator(3) + &GrassmannNumber::generator(4);
        assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }
}
