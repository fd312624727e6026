//! Boundary operators of `-Δ` on the unit disk at `λ = -κ²`.
//!
//! Separation of variables makes every operator diagonal in the Fourier
//! basis. With the interior normal, `ν u = -∂_r u` at `r = 1`, and the
//! mode-`m` solution `I_|m|(κr) e^{imθ}`:
//!
//! * Dirichlet-to-Neumann: `d_m = -κ I'_m(κ)/I_m(κ) = -(|m| + κ I_{m+1}(κ)/I_m(κ))`;
//! * Neumann-to-Dirichlet: `1/d_m`;
//! * Poisson Gram `K*K`: `g_m = ∫_0^1 (I_m(κr)/I_m(κ))² r dr`.

use rayon::prelude::*;

use crate::circle_ops::{TruncatedOperator, real_multiplier};
use crate::error::{Error, Result};
use crate::special_fn::{BesselI, QuadratureRule, gauss_legendre};

/// Relative tolerance certified for every Gram integral.
pub const GRAM_TOLERANCE: f64 = 1e-9;

/// `λ = -κ²` and the mode cutoff `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskParameters {
    kappa: f64,
    cutoff: usize,
}

impl DiskParameters {
    pub fn new(kappa: f64, cutoff: usize) -> Result<Self> {
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::Domain(format!("kappa must be finite and > 0, got {kappa}")));
        }
        if cutoff < 8 {
            return Err(Error::Domain(format!("mode cutoff must be >= 8, got {cutoff}")));
        }
        Ok(Self { kappa, cutoff })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Spectral parameter `λ = -κ²`.
    pub fn lambda(&self) -> f64 {
        -self.kappa * self.kappa
    }

    fn check_mode(&self, m: i64) -> Result<u32> {
        if m.unsigned_abs() as usize > self.cutoff {
            return Err(Error::Domain(format!("mode {m} outside |m| <= {}", self.cutoff)));
        }
        Ok(m.unsigned_abs() as u32)
    }
}

/// Dirichlet-to-Neumann eigenvalue `d_m < 0`.
pub fn dtn_eigenvalue(m: i64, p: &DiskParameters) -> Result<f64> {
    let order = p.check_mode(m)?;
    dtn_raw(order, p.kappa)
}

fn dtn_raw(order: u32, kappa: f64) -> Result<f64> {
    let rho = BesselI::default().ratio(order, kappa)?;
    Ok(-(order as f64 + kappa * rho))
}

/// Neumann-to-Dirichlet eigenvalue `1/d_m`.
pub fn ntd_eigenvalue(m: i64, p: &DiskParameters) -> Result<f64> {
    Ok(1.0 / dtn_eigenvalue(m, p)?)
}

/// Gram eigenvalue `g_m` with its certified error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramValue {
    pub value: f64,
    pub error: f64,
}

/// `g_m = ∫_0^1 (I_m(κr)/I_m(κ))² r dr`, certified to relative `1e-9`.
pub fn poisson_gram(m: i64, p: &DiskParameters) -> Result<f64> {
    let order = p.check_mode(m)?;
    Ok(gram_certified(order, p.kappa)?.value)
}

fn panel_rules() -> &'static (QuadratureRule, QuadratureRule) {
    static RULES: std::sync::OnceLock<(QuadratureRule, QuadratureRule)> = std::sync::OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(20).unwrap(), gauss_legendre(40).unwrap()))
}

/// The substitution `r = exp(-v / (2m + 2))` turns the integral into
/// `(1/(2m+2)) ∫_0^∞ exp(2[ln I_m(κr) - ln I_m(κ)] - v/(m+1)) dv`, whose
/// integrand is bounded by `e^{-v}` and varies on the scale `min(1, (m+1)/κ)`.
/// Geometric panels resolve both scales; the tail past `v = 45` is below
/// `e^{-45}` relative.
pub fn gram_certified(order: u32, kappa: f64) -> Result<GramValue> {
    let bessel = BesselI::default();
    let ln_top = bessel.ln(order, kappa)?;
    let m1 = order as f64 + 1.0;
    let integrand = |v: f64| -> f64 {
        let r = (-v / (2.0 * m1)).exp();
        let ln = bessel.ln(order, kappa * r).unwrap_or(f64::NEG_INFINITY);
        (2.0 * (ln - ln_top) - v / m1).exp()
    };
    let (coarse, fine) = panel_rules();
    let mut lo = 0.0;
    let mut width = 0.25 * (m1 / (kappa + m1)).min(1.0);
    let (mut c_sum, mut f_sum) = (0.0, 0.0);
    while lo < 45.0 {
        let hi = (lo + width).min(45.0);
        c_sum += coarse.integrate(lo, hi, integrand);
        f_sum += fine.integrate(lo, hi, integrand);
        lo = hi;
        width *= 2.0;
    }
    let value = f_sum / (2.0 * m1);
    let error = (f_sum - c_sum).abs() / (2.0 * m1);
    if !(value > 0.0) || error > GRAM_TOLERANCE * value {
        return Err(Error::Quadrature(format!(
            "Gram integral for m = {order}, kappa = {kappa} not certified (value {value:e}, error {error:e})"
        )));
    }
    Ok(GramValue { value, error })
}

/// Per-mode arrays for `|m| = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskModes {
    params: DiskParameters,
    dtn: Vec<f64>,
    gram: Vec<f64>,
    gram_error: Vec<f64>,
}

impl DiskModes {
    pub fn new(params: DiskParameters) -> Result<Self> {
        let kappa = params.kappa;
        let rows = (0..=params.cutoff as u32)
            .into_par_iter()
            .map(|m| Ok((dtn_raw(m, kappa)?, gram_certified(m, kappa)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            dtn: rows.iter().map(|r| r.0).collect(),
            gram: rows.iter().map(|r| r.1.value).collect(),
            gram_error: rows.iter().map(|r| r.1.error).collect(),
        })
    }

    pub fn params(&self) -> &DiskParameters {
        &self.params
    }

    /// `d_|m|` for `|m| = 0..=N`.
    pub fn dtn(&self) -> &[f64] {
        &self.dtn
    }

    /// `g_|m|` for `|m| = 0..=N`.
    pub fn gram(&self) -> &[f64] {
        &self.gram
    }

    pub fn gram_error(&self) -> &[f64] {
        &self.gram_error
    }

    pub fn dtn_at(&self, m: i64) -> f64 {
        self.dtn[m.unsigned_abs() as usize]
    }

    pub fn gram_at(&self, m: i64) -> f64 {
        self.gram[m.unsigned_abs() as usize]
    }

    /// Diagonal operators `(P_ntd, P1, P2)`.
    pub fn operators(&self) -> BoundaryOperators {
        let n = self.params.cutoff;
        BoundaryOperators {
            ntd: real_multiplier(|m| 1.0 / self.dtn_at(m), n).with_order(-1.0),
            p1: real_multiplier(|m| self.gram_at(m), n).with_order(-1.0),
            p2: real_multiplier(|m| self.gram_at(m).sqrt(), n).with_order(-0.5),
        }
    }
}

/// Neumann-to-Dirichlet map, Poisson Gram operator and its square root.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOperators {
    pub ntd: TruncatedOperator,
    pub p1: TruncatedOperator,
    pub p2: TruncatedOperator,
}

pub fn build_boundary_operators(p: &DiskParameters) -> Result<BoundaryOperators> {
    Ok(DiskModes::new(*p)?.operators())
}
