//! Cut operators and products of circle multipliers with piecewise
//! continuous coefficients.

use serde::{Deserialize, Serialize};

use crate::circle_ops::{
    Arc, CutSide, PiecewiseCoefficient, TrigPoly, TruncatedOperator, fourier_coefficients,
    indicator_cut, multiplication_operator, real_multiplier,
};
use crate::error::{Error, Result};
use crate::spectral::{
    AsymptoticFit, DecayFit, FitWindow, MIN_J_LO, SingularSpectrum, decay_exponent_fit,
    singular_values, tail_fit,
};
use crate::symbol_constants::{SymbolConstantReport, c_cut_positive, c_psido_product};

/// Largest order `t` accepted for a multiplier or a product.
pub const MAX_ORDER: f64 = 4.0;

/// Fitted limit next to its predicted value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitComparison {
    pub fit: AsymptoticFit,
    pub constant: SymbolConstantReport,
    /// `constant^t`, the predicted limit of `s_j j^t`.
    pub predicted: f64,
}

impl LimitComparison {
    fn new(fit: AsymptoticFit, constant: SymbolConstantReport, t: f64) -> Self {
        Self {
            fit,
            constant,
            predicted: constant.predicted_limit(t),
        }
    }

    /// `|fit - predicted| / predicted`.
    pub fn rel_gap(&self) -> f64 {
        (self.fit.limit - self.predicted).abs() / self.predicted
    }
}

fn check_order(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= MAX_ORDER) {
        return Err(Error::Domain(format!("order t = {t} outside (0, {MAX_ORDER}]")));
    }
    Ok(())
}

fn window_or_default(window: Option<FitWindow>, cutoff: usize) -> Result<FitWindow> {
    match window {
        Some(w) => {
            w.validate(cutoff)?;
            Ok(w)
        }
        None => FitWindow::default_for(cutoff),
    }
}

/// `(1 + m²)^{-t/2}`, principal symbol `|ξ|^{-t}`.
pub fn classical_multiplier(t: f64, cutoff: usize) -> Result<TruncatedOperator> {
    check_order(t)?;
    Ok(real_multiplier(|m| (1.0 + (m * m) as f64).powf(-0.5 * t), cutoff).with_order(-t))
}

/// s-numbers of `1_A P 1_{A^c}`.
pub fn cross_cut_spectrum(t: f64, cutoff: usize, arc: Arc) -> Result<SingularSpectrum> {
    let p = classical_multiplier(t, cutoff)?;
    singular_values(&indicator_cut(&p, arc, CutSide::Cross)?)
}

/// Decay exponent `q` of `s_j(1_A P 1_{A^c}) ~ j^{-q}`, fitted from
/// `j = 16` up to `N/4` or the rounding floor, whichever comes first.
pub fn cut_decay_experiment(t: f64, cutoff: usize, arc: Arc) -> Result<DecayFit> {
    let s = cross_cut_spectrum(t, cutoff, arc)?;
    decay_exponent_fit(&s, MIN_J_LO, cutoff / 4)
}

/// `s_j(1_A P 1_A) j^t` against `c(P₍₊₎)^t`.
pub fn positive_cut_experiment(
    t: f64,
    cutoff: usize,
    arc: Arc,
    window: Option<FitWindow>,
) -> Result<LimitComparison> {
    let window = window_or_default(window, cutoff)?;
    let p = classical_multiplier(t, cutoff)?;
    let cut = indicator_cut(&p, arc, CutSide::Plus)?;
    let fit = tail_fit(&singular_values(&cut)?, t, window)?;
    let constant = c_cut_positive(&PiecewiseCoefficient::real_constant(1.0), t, 1, arc)?;
    Ok(LimitComparison::new(fit, constant, t))
}

/// `b₁ P₁ b₂ ... P_l b_{l+1}` with `P_k` the classical multiplier of order
/// `orders[k] < 0`.
pub fn product_operator(
    coeffs: &[PiecewiseCoefficient],
    orders: &[f64],
    cutoff: usize,
) -> Result<TruncatedOperator> {
    if orders.is_empty() || coeffs.len() != orders.len() + 1 {
        return Err(Error::Domain(format!(
            "{} orders need {} coefficients, got {}",
            orders.len(),
            orders.len() + 1,
            coeffs.len()
        )));
    }
    let t: f64 = -orders.iter().sum::<f64>();
    check_order(t)?;
    let mut op = multiplication_operator(&coeffs[0], cutoff);
    for (b, &o) in coeffs[1..].iter().zip(orders) {
        op = op.compose(&classical_multiplier(-o, cutoff)?)?;
        if b.as_constant() != Some(1.0.into()) {
            op = op.compose(&multiplication_operator(b, cutoff))?;
        }
    }
    Ok(op.with_order(-t))
}

/// `s_j(P) j^t` against `c(P)^t`.
pub fn product_experiment(
    coeffs: &[PiecewiseCoefficient],
    orders: &[f64],
    cutoff: usize,
    window: Option<FitWindow>,
) -> Result<LimitComparison> {
    let window = window_or_default(window, cutoff)?;
    let t: f64 = -orders.iter().sum::<f64>();
    let op = product_operator(coeffs, orders, cutoff)?;
    let fit = tail_fit(&singular_values(&op)?, t, window)?;
    let constant = c_psido_product(coeffs, orders, 1)?;
    Ok(LimitComparison::new(fit, constant, t))
}

/// Fejér mean of order `M`: `Σ_{|k|<=M} (1 - |k|/(M+1)) b_k e^{ikθ}`.
pub fn smooth_approximation(b: &PiecewiseCoefficient, order: usize) -> Result<PiecewiseCoefficient> {
    if order == 0 {
        return Err(Error::Domain("Fejér order must be at least 1".into()));
    }
    if let Some(c) = b.as_constant() {
        return Ok(PiecewiseCoefficient::constant(c));
    }
    let m = order as i64;
    let coeffs = fourier_coefficients(b, order);
    let poly = TrigPoly::from_coefficients(coeffs)?.damp(|k| 1.0 - k.abs() as f64 / (m + 1) as f64);
    Ok(PiecewiseCoefficient::smooth(poly))
}
