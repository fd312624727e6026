//! Asymptotic constants from principal-symbol integrals, for `A = -Δ`.
//!
//! On the half-space model the Poisson symbol-kernel is `e^{-|ξ'| x_n}`, so
//! `||k̃⁰||² = 1/(2|ξ'|)`, and the Neumann-to-Dirichlet symbol is
//! `-|ξ'|^{-1}`. On the unit cosphere both are constant and every constant
//! reduces to a boundary integral of a power of `|b|`.
//!
//! The circle (`dimension 1`) is integrated over the full turn. Higher
//! dimensional spheres `S^d` are supported for zonal data only: a
//! coefficient is read as a function of the polar angle `φ = 2π t`,
//! `t ∈ [0, 1/2]`, and integrated against `|S^{d-1}| sin^{d-1} φ dφ`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::circle_ops::{Arc, PiecewiseCoefficient};
use crate::error::{Error, Result};
use crate::special_fn::integrate_adaptive;

/// Certified relative quadrature accuracy of every constant.
pub const CONSTANT_TOLERANCE: f64 = 1e-8;

/// Absolute accuracy accepted when the constant vanishes.
pub const ZERO_TOLERANCE: f64 = 1e-12;

const PANEL_REL_TOL: f64 = 1e-11;
const PANEL_ABS_TOL: f64 = 1e-15;

/// Which constant a report holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    /// `C₀`: Neumann minus Dirichlet resolvent.
    NeumannDirichlet,
    /// `C(g⁰)`: difference of two Robin resolvents.
    RobinPair,
    /// `C^±(p⁰)`: positive or negative eigenvalues of a selfadjoint ψdo.
    SelfadjointPart,
    /// `c(P₍₊₎)`: cut of a nonnegative ψdo to an arc.
    PositiveCut,
    /// `c(P)`: product of ψdo's with interspersed coefficients.
    PsidoProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolConstantReport {
    pub value: f64,
    pub formula_id: FormulaId,
    /// Node-doubling error estimate of `value`.
    pub quadrature_error: f64,
}

impl SymbolConstantReport {
    /// `value^power`, the predicted limit of `s_j j^p` when `p = power`
    /// times the spectral dimension.
    pub fn predicted_limit(&self, power: f64) -> f64 {
        self.value.powf(power)
    }
}

/// Which sign of eigenvalue `C^±` counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

/// Surface area of the unit sphere `S^k ⊂ R^{k+1}`.
pub fn sphere_area(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => TAU,
        _ => TAU / (k as f64 - 1.0) * sphere_area(k - 2),
    }
}

/// `(1/(d (2π)^d)) |S^{d-1}|`: the normalization times the cosphere integral
/// of a `ξ`-independent integrand.
fn prefactor(d: usize) -> f64 {
    sphere_area(d - 1) / (d as f64 * TAU.powi(d as i32))
}

/// `∫ f dx` over the part of `S^d` lying in `[lo, hi]` (turns).
fn boundary_integral(d: usize, edges: &[f64], lo: f64, hi: f64, f: &dyn Fn(f64) -> f64) -> Result<(f64, f64)> {
    let (lo, hi, weight): (f64, f64, Box<dyn Fn(f64) -> f64>) = if d == 1 {
        (lo, hi, Box::new(|_| TAU))
    } else {
        let area = sphere_area(d - 1);
        (
            lo.min(0.5),
            hi.min(0.5),
            Box::new(move |t: f64| TAU * area * (TAU * t).sin().powi(d as i32 - 1)),
        )
    };
    let mut cuts: Vec<f64> = edges
        .iter()
        .copied()
        .filter(|&e| e > lo && e < hi)
        .chain([lo, hi])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let (mut value, mut error) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let c = integrate_adaptive(&|t: f64| weight(t) * f(t), w[0], w[1], PANEL_REL_TOL, PANEL_ABS_TOL)?;
        value += c.value;
        error += c.error;
    }
    Ok((value, error))
}

fn dimension(d: usize, what: &str) -> Result<usize> {
    if d == 0 {
        return Err(Error::Domain(format!("{what} must be at least 1")));
    }
    Ok(d)
}

fn certify(value: f64, error: f64, formula_id: FormulaId) -> Result<SymbolConstantReport> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::Quadrature(format!("{formula_id:?} evaluated to {value}")));
    }
    if error > (CONSTANT_TOLERANCE * value).max(ZERO_TOLERANCE) {
        return Err(Error::Quadrature(format!(
            "{formula_id:?}: error estimate {error:e} exceeds tolerance for value {value}"
        )));
    }
    Ok(SymbolConstantReport {
        value,
        formula_id,
        quadrature_error: error,
    })
}

fn power_integral(
    b: &PiecewiseCoefficient,
    d: usize,
    arc: Arc,
    g: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    let f = |t: f64| g(b.value_at_turns(t).norm());
    boundary_integral(d, &b.breakpoints(), arc.start(), arc.end(), &f)
}

/// `C₀` for the unit ball in `R^n`, `n >= 2`.
pub fn c_neumann_dirichlet(n: usize) -> Result<SymbolConstantReport> {
    c_neumann_dirichlet_scaled(n, 1.0)
}

/// `C₀` with the boundary measure multiplied by `measure_scale`.
pub fn c_neumann_dirichlet_scaled(n: usize, measure_scale: f64) -> Result<SymbolConstantReport> {
    let d = dimension(n.saturating_sub(1), "boundary dimension n - 1")?;
    if !(measure_scale > 0.0) {
        return Err(Error::Domain(format!("measure scale {measure_scale} must be positive")));
    }
    // (||k̃⁰|| |p⁰|^{1/2})^{n-1} = 2^{-(n-1)/2} on the cosphere.
    let integrand = 0.5f64.powf(d as f64 / 2.0);
    let (area, error) = boundary_integral(d, &[], 0.0, 1.0, &|_| 1.0)?;
    let scale = prefactor(d) * integrand * measure_scale;
    certify(scale * area, scale * error, FormulaId::NeumannDirichlet)
}

/// `C(g⁰)` for `b = b₂ - b₁`; the predicted limit of `s_j j^{3/(n-1)}` is
/// `C^{3/(n-1)}`.
pub fn c_robin_pair(b: &PiecewiseCoefficient, n: usize) -> Result<SymbolConstantReport> {
    let d = dimension(n.saturating_sub(1), "boundary dimension n - 1")?;
    let exponent = d as f64 / 3.0;
    // ||k̃⁰||² |p⁰|² |b| = |b| / 2.
    let (v, e) = power_integral(b, d, Arc::full(), |x| (0.5 * x).powf(exponent))?;
    certify(prefactor(d) * v, prefactor(d) * e, FormulaId::RobinPair)
}

fn total_order(orders: &[f64]) -> Result<f64> {
    if orders.is_empty() || orders.iter().any(|&o| !(o < 0.0) || !o.is_finite()) {
        return Err(Error::Domain("orders must be a nonempty list of negative reals".into()));
    }
    Ok(-orders.iter().sum::<f64>())
}

/// `c(P)` for `P = b₁ P₁ b₂ ... P_l b_{l+1}` with multipliers of principal
/// symbol `|ξ|^{orders[k]}`.
pub fn c_psido_product(
    coeffs: &[PiecewiseCoefficient],
    orders: &[f64],
    nprime: usize,
) -> Result<SymbolConstantReport> {
    let d = dimension(nprime, "n'")?;
    let t = total_order(orders)?;
    if coeffs.len() != orders.len() + 1 {
        return Err(Error::Domain(format!(
            "{} operators need {} coefficients, got {}",
            orders.len(),
            orders.len() + 1,
            coeffs.len()
        )));
    }
    let product = coeffs[1..].iter().fold(coeffs[0].clone(), |acc, b| acc.mul(b));
    let exponent = d as f64 / t;
    let (v, e) = power_integral(&product, d, Arc::full(), |x| x.powf(exponent))?;
    certify(prefactor(d) * v, prefactor(d) * e, FormulaId::PsidoProduct)
}

fn real_values_on(b: &PiecewiseCoefficient, arc: Arc) -> impl Iterator<Item = (f64, f64)> + '_ {
    b.pieces().iter().flat_map(move |(a, p)| {
        let lo = a.start().max(arc.start());
        let hi = a.end().min(arc.end());
        let samples = if hi > lo { 64 * (p.degree() + 1) + 1 } else { 0 };
        (0..samples).map(move |i| {
            let z = p.eval_turns(lo + (hi - lo) * (i as f64 + 0.5) / samples as f64);
            (z.re, z.im)
        })
    })
}

/// `c(P₍₊₎)` for `p⁰ = b(x) |ξ|^{-t}` cut to `arc`; `b` must be
/// nonnegative there.
pub fn c_cut_positive(
    b: &PiecewiseCoefficient,
    t: f64,
    nprime: usize,
    arc: Arc,
) -> Result<SymbolConstantReport> {
    let d = dimension(nprime, "n'")?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("order -t needs t > 0, got {t}")));
    }
    let scale = b.sup_norm().max(f64::MIN_POSITIVE);
    for (re, im) in real_values_on(b, arc) {
        if re < -1e-12 * scale || im.abs() > 1e-12 * scale {
            return Err(Error::NegativeSymbol(re));
        }
    }
    let exponent = d as f64 / t;
    let (v, e) = power_integral(b, d, arc, |x| x.powf(exponent))?;
    certify(prefactor(d) * v, prefactor(d) * e, FormulaId::PositiveCut)
}

/// `C^±(p⁰)` for the selfadjoint symbol `p⁰ = b(x) |ξ|^{-t}`, real `b`.
pub fn c_selfadjoint_part(
    b: &PiecewiseCoefficient,
    t: f64,
    nprime: usize,
    sign: Sign,
) -> Result<SymbolConstantReport> {
    let d = dimension(nprime, "n'")?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("order -t needs t > 0, got {t}")));
    }
    if !b.is_real() {
        return Err(Error::InvalidCoefficient("selfadjoint symbol needs a real coefficient".into()));
    }
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    let exponent = d as f64 / t;
    let f = |x: f64| (s * b.value_at_turns(x).re).max(0.0).powf(exponent);
    let (v, e) = boundary_integral(d, &b.breakpoints(), 0.0, 1.0, &f)?;
    certify(prefactor(d) * v, prefactor(d) * e, FormulaId::SelfadjointPart)
}
