//! Trigonometric polynomials on the torus `[0, 2π)ⁿ` with Grassmann coefficients.

use std::collections::BTreeMap;

use super::grassmann::GrassmannNumber;

/// Frequency vectors are stored with their first nonzero entry positive.
type Freq = Vec<i32>;

fn canonical(k: Freq) -> (Freq, f64) {
    match k.iter().find(|&&c| c != 0) {
        Some(&c) if c < 0 => (k.iter().map(|c| -c).collect(), -1.0),
        _ => (k, 1.0),
    }
}

/// `Σ_k a_k cos(k·x) + b_k sin(k·x)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<Freq, (GrassmannNumber, GrassmannNumber)>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: GrassmannNumber) -> Self {
        let mut p = TrigPoly::zero(dim);
        p.add_cos(vec![0; dim], c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `c·cos(k·x)`.
    pub fn add_cos(&mut self, k: Freq, c: GrassmannNumber) {
        assert_eq!(k.len(), self.dim);
        let (k, _) = canonical(k);
        let e = self.terms.entry(k.clone()).or_default();
        e.0 = &e.0 + &c;
        self.prune(&k);
    }

    /// Adds `c·sin(k·x)`.
    pub fn add_sin(&mut self, k: Freq, c: GrassmannNumber) {
        assert_eq!(k.len(), self.dim);
        let (k, s) = canonical(k);
        if k.iter().all(|&c| c == 0) {
            return;
        }
        let e = self.terms.entry(k.clone()).or_default();
        e.1 = &e.1 + &c.scale(s);
        self.prune(&k);
    }

    fn prune(&mut self, k: &Freq) {
        if let Some((a, b)) = self.terms.get(k) {
            if a.is_zero() && b.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Freq, &GrassmannNumber, &GrassmannNumber)> {
        self.terms.iter().map(|(k, (a, b))| (k, a, b))
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (k, (a, b)) in &other.terms {
            out.add_cos(k.clone(), a.clone());
            out.add_sin(k.clone(), b.clone());
        }
        out
    }

    pub fn scale(&self, x: f64) -> TrigPoly {
        let mut out = TrigPoly::zero(self.dim);
        for (k, (a, b)) in &self.terms {
            out.add_cos(k.clone(), a.scale(x));
            out.add_sin(k.clone(), b.scale(x));
        }
        out
    }

    /// Product, with coefficients multiplied in the order `self · other`.
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = TrigPoly::zero(self.dim);
        for (k, (a, b)) in &self.terms {
            for (l, (c, d)) in &other.terms {
                let plus: Freq = k.iter().zip(l).map(|(x, y)| x + y).collect();
                let minus: Freq = k.iter().zip(l).map(|(x, y)| x - y).collect();
                let ac = (a * c).scale(0.5);
                let bd = (b * d).scale(0.5);
                let bc = (b * c).scale(0.5);
                let ad = (a * d).scale(0.5);
                out.add_cos(minus.clone(), &ac + &bd);
                out.add_cos(plus.clone(), &ac - &bd);
                out.add_sin(plus.clone(), &bc + &ad);
                out.add_sin(minus, &bc - &ad);
            }
        }
        out
    }

    /// `∂/∂x_d`.
    pub fn derivative(&self, d: usize) -> TrigPoly {
        let mut out = TrigPoly::zero(self.dim);
        for (k, (a, b)) in &self.terms {
            let kd = k[d] as f64;
            out.add_sin(k.clone(), a.scale(-kd));
            out.add_cos(k.clone(), b.scale(kd));
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> GrassmannNumber {
        let mut out = GrassmannNumber::zero();
        for (k, (a, b)) in &self.terms {
            let phase: f64 = k.iter().zip(x).map(|(k, x)| *k as f64 * x).sum();
            out = &(&out + &a.scale(phase.cos())) + &b.scale(phase.sin());
        }
        out
    }

    /// Largest `|k_d|` over all terms and directions.
    pub fn max_frequency(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.iter().map(|c| c.unsigned_abs())).max().unwrap_or(0)
    }

    /// A bound on `sup |body|`.
    pub fn body_bound(&self) -> f64 {
        self.terms.values().map(|(a, b)| a.body().abs() + b.body().abs()).sum()
    }

    /// All coefficients have only even (resp. odd) Grassmann components.
    pub fn has_parity(&self, odd: bool) -> bool {
        self.terms.values().all(|(a, b)| a.has_parity(odd) && b.has_parity(odd))
    }

    /// `∫_{[0,2π)ⁿ}` computed exactly from the constant term.
    pub fn exact_integral(&self) -> GrassmannNumber {
        let vol = (2.0 * std::f64::consts::PI).powi(self.dim as i32);
        self.terms.get(&vec![0; self.dim]).map_or_else(GrassmannNumber::zero, |(a, _)| a.scale(vol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> GrassmannNumber {
        GrassmannNumber::scalar(x)
    }

    #[test]
    fn product_matches_pointwise() {
        let mut p = TrigPoly::zero(1);
        p.add_sin(vec![1], real(1.0));
        p.add_cos(vec![2], real(0.5));
        let mut q = TrigPoly::zero(1);
        q.add_cos(vec![-1], real(2.0));
        q.add_sin(vec![3], real(-1.0));
        let pq = p.mul(&q);
        for x in [0.1, 0.7, 2.3, 5.9] {
            let direct = &p.eval(&[x]) * &q.eval(&[x]);
            assert!(pq.eval(&[x]).distance(&direct) < 1e-12);
        }
        assert_eq!(pq.max_frequency(), 5);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let mut p = TrigPoly::zero(2);
        p.add_sin(vec![1, -2], real(1.5));
        p.add_cos(vec![0, 3], real(-0.5));
        let h = 1e-6;
        let x = [0.4, 1.1];
        let fd = (&p.eval(&[x[0], x[1] + h]) - &p.eval(&[x[0], x[1] - h])).scale(0.5 / h);
        assert!(p.derivative(1).eval(&x).distance(&fd) < 1e-6);
    }

    #[test]
    fn sine_squared_integrates_to_pi() {
        let mut s = TrigPoly::zero(1);
        s.add_sin(vec![1], real(1.0));
        let i = s.mul(&s).exact_integral();
        assert!((i.body() - std::f64::consts::PI).abs() < 1e-12);
    }
}
