//! Identity checks: each computes both sides of an identity and compares them
//! exactly, structurally and after collapse modulo total divergences.

use std::fmt::Write as _;

use crate::algebra::{sign, Coefficient, Parity};
use crate::cohomology::{functional_equal, print_functional, reduce, Equality, Functional};
use crate::jetcalc::BvModel;

use super::{laplacian, minus_i_hbar, omega, schouten, BvError, Mode};

/// Both sides of an identity and how well they agree.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity: String,
    pub lhs: Functional,
    pub rhs: Functional,
    /// Identical as formal sums of block products.
    pub exact: bool,
    /// Equal with integral blocks taken modulo total divergences.
    pub structural: bool,
    /// Equal after collapsing every block, modulo total divergences.
    pub collapsed: bool,
    /// The level of agreement the identity is required to reach.
    pub required: Equality,
}

impl IdentityReport {
    pub fn new(model: &BvModel, identity: impl Into<String>, lhs: Functional, rhs: Functional, required: Equality) -> Self {
        let diff = lhs.sub(&rhs);
        let exact = diff.is_zero();
        let structural = exact || reduce(model, &diff, Equality::Structural).is_zero();
        let collapsed = structural || reduce(model, &diff, Equality::Collapsed).is_zero();
        IdentityReport { identity: identity.into(), lhs, rhs, exact, structural, collapsed, required }
    }

    pub fn passed(&self) -> bool {
        match self.required {
            Equality::Exact => self.exact,
            Equality::Structural => self.structural,
            Equality::Collapsed => self.collapsed,
        }
    }

    /// `lhs − rhs` after collapse, reduced modulo total divergences.
    pub fn discrepancy(&self, model: &BvModel) -> Functional {
        reduce(model, &self.lhs.sub(&self.rhs), Equality::Collapsed)
    }

    pub fn render(&self, model: &BvModel) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.identity);
        let _ = writeln!(s, "  LHS = {}", print_functional(model, &self.lhs));
        let _ = writeln!(s, "  RHS = {}", print_functional(model, &self.rhs));
        let rel = |b: bool, yes: &str, no: &str| if b { yes.to_string() } else { no.to_string() };
        let _ = writeln!(
            s,
            "  {} ; {} ; {}",
            rel(self.exact, "LHS = RHS (exact)", "LHS != RHS (exact)"),
            rel(self.structural, "LHS = RHS (structural)", "LHS != RHS (structural)"),
            rel(self.collapsed, "LHS ~ RHS (cohomological)", "LHS !~ RHS (cohomological)"),
        );
        if !self.collapsed {
            let _ = writeln!(s, "  discrepancy = {}", print_functional(model, &self.discrepancy(model)));
        }
        s
    }
}

fn int(k: i64) -> Coefficient {
    Coefficient::from_int(k)
}

fn require(f: &Functional, what: &'static str, expected: Parity) -> Result<(), BvError> {
    if f.parity()? != expected {
        let expected = if expected == Parity::Even { "even" } else { "odd" };
        return Err(BvError::WrongParity { what, expected });
    }
    Ok(())
}

/// `⟦F, G·H⟧ = ⟦F,G⟧·H + (−1)^{(|F|−1)|G|} G·⟦F,H⟧`.
pub fn check_leibniz(model: &BvModel, f: &Functional, g: &Functional, h: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    let (pf, pg) = (f.parity()?, g.parity()?);
    h.parity()?;
    let lhs = schouten(model, f, &g.mul(h), mode)?;
    let mut rhs = schouten(model, f, g, mode)?.mul(h);
    rhs.add_scaled(&g.mul(&schouten(model, f, h, mode)?), &int(sign(pf.flip().bit() * pg.bit())));
    Ok(IdentityReport::new(model, "[[F, G*H]] = [[F,G]]*H + (-1)^((|F|-1)|G|) G*[[F,H]]", lhs, rhs, Equality::Exact))
}

/// `Δ(F·G) = ΔF·G + (−1)^{|F|}⟦F,G⟧ + (−1)^{|F|} F·ΔG`.
pub fn check_laplacian_product(model: &BvModel, f: &Functional, g: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    let pf = f.parity()?;
    g.parity()?;
    let lhs = laplacian(model, &f.mul(g), mode)?;
    let s = int(sign(pf.bit()));
    let mut rhs = laplacian(model, f, mode)?.mul(g);
    rhs.add_scaled(&schouten(model, f, g, mode)?, &s);
    rhs.add_scaled(&f.mul(&laplacian(model, g, mode)?), &s);
    Ok(IdentityReport::new(model, "D(F*G) = DF*G + (-1)^|F| [[F,G]] + (-1)^|F| F*DG", lhs, rhs, Equality::Exact))
}

/// `Δ⟦F,G⟧ = ⟦ΔF,G⟧ + (−1)^{|F|−1}⟦F,ΔG⟧`, required modulo collapse.
pub fn check_derivation(model: &BvModel, f: &Functional, g: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    let pf = f.parity()?;
    let lhs = laplacian(model, &schouten(model, f, g, mode)?, mode)?;
    let mut rhs = schouten(model, &laplacian(model, f, mode)?, g, mode)?;
    rhs.add_scaled(&schouten(model, f, &laplacian(model, g, mode)?, mode)?, &int(sign(pf.flip().bit())));
    Ok(IdentityReport::new(model, "D[[F,G]] = [[DF,G]] + (-1)^(|F|-1) [[F,DG]]", lhs, rhs, Equality::Collapsed))
}

/// `Δ(ΔF) = 0`, required modulo collapse.
pub fn check_delta_squared(model: &BvModel, f: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    let lhs = laplacian(model, &laplacian(model, f, mode)?, mode)?;
    Ok(IdentityReport::new(model, "D(D F) = 0", lhs, Functional::zero(), Equality::Collapsed))
}

/// `⟦F,⟦G,H⟧⟧ = ⟦⟦F,G⟧,H⟧ + (−1)^{(|F|−1)(|G|−1)}⟦G,⟦F,H⟧⟧`, required modulo collapse.
pub fn check_jacobi(model: &BvModel, f: &Functional, g: &Functional, h: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    let (pf, pg) = (f.parity()?, g.parity()?);
    let lhs = schouten(model, f, &schouten(model, g, h, mode)?, mode)?;
    let mut rhs = schouten(model, &schouten(model, f, g, mode)?, h, mode)?;
    let s = int(sign(pf.flip().bit() * pg.flip().bit()));
    rhs.add_scaled(&schouten(model, g, &schouten(model, f, h, mode)?, mode)?, &s);
    Ok(IdentityReport::new(
        model,
        "[[F,[[G,H]]]] = [[[[F,G]],H]] + (-1)^((|F|-1)(|G|-1)) [[G,[[F,H]]]]",
        lhs,
        rhs,
        Equality::Collapsed,
    ))
}

/// `⟦F,G⟧ = −(−1)^{(|F|−1)(|G|−1)}⟦G,F⟧`, required exactly.
pub fn check_skew(model: &BvModel, f: &Functional, g: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    let (pf, pg) = (f.parity()?, g.parity()?);
    let lhs = schouten(model, f, g, mode)?;
    let rhs = schouten(model, g, f, mode)?.scale(&int(-sign(pf.flip().bit() * pg.flip().bit())));
    Ok(IdentityReport::new(model, "[[F,G]] = -(-1)^((|F|-1)(|G|-1)) [[G,F]]", lhs, rhs, Equality::Exact))
}

/// `⟦G, Fⁿ⟧ = n⟦G,F⟧·Fⁿ⁻¹` for even `F`.
pub fn check_schouten_power(model: &BvModel, g: &Functional, f: &Functional, n: u32, mode: Mode) -> Result<IdentityReport, BvError> {
    require(f, "F", Parity::Even)?;
    g.parity()?;
    if n < 1 {
        return Err(BvError::PowerTooSmall(1));
    }
    let lhs = schouten(model, g, &f.pow(n), mode)?;
    let rhs = schouten(model, g, f, mode)?.mul(&f.pow(n - 1)).scale(&int(n as i64));
    Ok(IdentityReport::new(model, format!("[[G, F^{n}]] = {n} [[G,F]] F^{}", n - 1), lhs, rhs, Equality::Exact))
}

/// `Δ(Fⁿ) = n·ΔF·Fⁿ⁻¹ + ½n(n−1)⟦F,F⟧·Fⁿ⁻²` for even `F`.
pub fn check_laplacian_power(model: &BvModel, f: &Functional, n: u32, mode: Mode) -> Result<IdentityReport, BvError> {
    require(f, "F", Parity::Even)?;
    if n < 2 {
        return Err(BvError::PowerTooSmall(2));
    }
    let lhs = laplacian(model, &f.pow(n), mode)?;
    let mut rhs = laplacian(model, f, mode)?.mul(&f.pow(n - 1)).scale(&int(n as i64));
    let pairs = (n * (n - 1) / 2) as i64;
    rhs.add_scaled(&schouten(model, f, f, mode)?.mul(&f.pow(n - 2)), &int(pairs));
    Ok(IdentityReport::new(
        model,
        format!("D(F^{n}) = {n} DF F^{} + {pairs} [[F,F]] F^{}", n - 1, n - 2),
        lhs,
        rhs,
        Equality::Exact,
    ))
}

/// The two sides of the quantum master equation `iℏΔS = ½⟦S,S⟧`.
#[derive(Clone, Debug)]
pub struct MasterEquationReport {
    pub laplacian: Functional,
    pub bracket: Functional,
    /// `ΔS` is zero as an expression.
    pub laplacian_zero: bool,
    /// `⟦S,S⟧` is zero after collapse modulo total divergences.
    pub bracket_trivial: bool,
    pub equation: IdentityReport,
}

impl MasterEquationReport {
    pub fn holds(&self) -> bool {
        self.equation.collapsed
    }

    pub fn render(&self, model: &BvModel) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "DS = {}", print_functional(model, &self.laplacian));
        let _ = writeln!(s, "[[S,S]] = {}", print_functional(model, &self.bracket));
        let _ = writeln!(s, "DS = 0 (exact): {}", self.laplacian_zero);
        let _ = writeln!(s, "[[S,S]] ~ 0 (cohomological): {}", self.bracket_trivial);
        s.push_str(&self.equation.render(model));
        s
    }
}

pub fn check_master_equation(model: &BvModel, s: &Functional, mode: Mode) -> Result<MasterEquationReport, BvError> {
    require(s, "S", Parity::Even)?;
    let lap = laplacian(model, s, mode)?;
    let br = schouten(model, s, s, mode)?;
    let i_hbar = minus_i_hbar().scale_int(-1);
    let half = Coefficient::from_ratio(1, 2);
    let equation =
        IdentityReport::new(model, "i hbar DS = 1/2 [[S,S]]", lap.scale(&i_hbar), br.scale(&half), Equality::Collapsed);
    Ok(MasterEquationReport {
        laplacian_zero: lap.is_zero(),
        bracket_trivial: reduce(model, &br, Equality::Collapsed).is_zero(),
        laplacian: lap,
        bracket: br,
        equation,
    })
}

/// `Ω²(O)` against `⟦Φ, O⟧` with the master-equation obstruction `Φ = −iℏΔS + ½⟦S,S⟧`.
#[derive(Clone, Debug)]
pub struct OmegaSquaredReport {
    pub obstruction: Functional,
    /// After collapse, `Φ` is a constant plus single blocks with vanishing
    /// Euler operators, so it brackets to zero with everything.
    pub obstruction_inert: bool,
    /// `Ω²(O) = ⟦Φ, O⟧` modulo collapse.
    pub identity: IdentityReport,
    /// `Ω²(O)` itself is zero modulo collapse.
    pub vanishes: bool,
}

impl OmegaSquaredReport {
    pub fn passed(&self) -> bool {
        self.identity.collapsed && self.obstruction_inert
    }

    pub fn render(&self, model: &BvModel) -> String {
        let mut s = self.identity.render(model);
        let _ = writeln!(s, "  obstruction = {}", print_functional(model, &self.obstruction));
        let _ = writeln!(s, "  obstruction has vanishing Euler operators: {}", self.obstruction_inert);
        let _ = writeln!(s, "  Omega^2(O) ~ 0 directly: {}", self.vanishes);
        s
    }
}

/// After collapse and reduction, only constants and single field-free blocks remain.
fn is_inert(model: &BvModel, f: &Functional) -> bool {
    reduce(model, f, Equality::Collapsed)
        .iter()
        .all(|(bs, _)| bs.is_empty() || (bs.len() == 1 && bs[0].term().is_jet_free()))
}

pub fn check_omega_squared(model: &BvModel, o: &Functional, s: &Functional, mode: Mode) -> Result<OmegaSquaredReport, BvError> {
    let lhs = omega(model, &omega(model, o, s, mode)?, s, mode)?;
    let mut phi = laplacian(model, s, mode)?.scale(&minus_i_hbar());
    phi.add_scaled(&schouten(model, s, s, mode)?, &Coefficient::from_ratio(1, 2));
    let rhs = schouten(model, &phi, o, mode)?;
    let vanishes = reduce(model, &lhs, Equality::Collapsed).is_zero();
    let identity = IdentityReport::new(model, "Omega(Omega(O)) = [[-i hbar DS + 1/2 [[S,S]], O]]", lhs, rhs, Equality::Collapsed);
    Ok(OmegaSquaredReport { obstruction_inert: is_inert(model, &phi), obstruction: phi, identity, vanishes })
}

/// `−iℏ(⟦ΔF₁,F₂⟧ + ⟦F₁,ΔF₂⟧) + ⟦⟦S,F₁⟧,F₂⟧ − ⟦⟦S,F₂⟧,F₁⟧ = Ω(⟦F₁,F₂⟧)` for odd `F₁, F₂`.
pub fn check_gauge_closure(model: &BvModel, f1: &Functional, f2: &Functional, s: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    require(f1, "F1", Parity::Odd)?;
    require(f2, "F2", Parity::Odd)?;
    require(s, "S", Parity::Even)?;
    let mut quantum = schouten(model, &laplacian(model, f1, mode)?, f2, mode)?;
    quantum.add_scaled(&schouten(model, f1, &laplacian(model, f2, mode)?, mode)?, &Coefficient::one());
    let mut lhs = quantum.scale(&minus_i_hbar());
    lhs.add_scaled(&schouten(model, &schouten(model, s, f1, mode)?, f2, mode)?, &int(1));
    lhs.add_scaled(&schouten(model, &schouten(model, s, f2, mode)?, f1, mode)?, &int(-1));
    let rhs = omega(model, &schouten(model, f1, f2, mode)?, s, mode)?;
    Ok(IdentityReport::new(
        model,
        "-i hbar ([[DF1,F2]] + [[F1,DF2]]) + [[[[S,F1]],F2]] - [[[[S,F2]],F1]] = Omega([[F1,F2]])",
        lhs,
        rhs,
        Equality::Collapsed,
    ))
}

fn automorphism(model: &BvModel, x: &Functional, f: &Functional, s: &Functional, mode: Mode, name: &str) -> Result<IdentityReport, BvError> {
    let mut lhs = omega(model, &schouten(model, x, f, mode)?, s, mode)?;
    lhs.add_scaled(&schouten(model, &omega(model, f, s, mode)?, x, mode)?, &int(1));
    let rhs = schouten(model, &omega(model, x, s, mode)?, f, mode)?;
    Ok(IdentityReport::new(
        model,
        format!("Omega([[{name},F]]) + [[Omega(F),{name}]] = [[Omega({name}),F]]"),
        lhs,
        rhs,
        Equality::Collapsed,
    ))
}

/// Gauge flows preserve cocycles: even `O`, odd `F`, even `S`.
pub fn check_cocycle_preservation(model: &BvModel, o: &Functional, f: &Functional, s: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    require(o, "O", Parity::Even)?;
    require(f, "F", Parity::Odd)?;
    require(s, "S", Parity::Even)?;
    automorphism(model, o, f, s, mode, "O")
}

/// Gauge flows preserve coboundaries: odd `ξ`, odd `F`, even `S`.
pub fn check_coboundary_preservation(model: &BvModel, xi: &Functional, f: &Functional, s: &Functional, mode: Mode) -> Result<IdentityReport, BvError> {
    require(xi, "xi", Parity::Odd)?;
    require(f, "F", Parity::Odd)?;
    require(s, "S", Parity::Even)?;
    automorphism(model, xi, f, s, mode, "xi")
}

/// Convenience: equality of two functionals under a mode of comparison.
pub fn agree(model: &BvModel, a: &Functional, b: &Functional, how: Equality) -> bool {
    functional_equal(model, a, b, how).unwrap_or(false)
}
