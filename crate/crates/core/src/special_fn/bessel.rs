//! Modified Bessel functions of the first kind, integer order.
//!
//! Two evaluation paths share one logarithmic core:
//!
//! * small argument relative to the order: the power series
//!   `I_m(x) = (x/2)^m / m! * sum_k (x^2/4)^k / (k! (m+1)_k)`, whose terms are
//!   all positive;
//! * otherwise: Miller's backward recurrence on the ratios
//!   `I_{k+1}/I_k`, normalized by `e^x = I_0 + 2 sum_{k>=1} I_k`.
//!
//! Everything is carried as `ln I_m(x)` so that orders in the thousands, where
//! `I_m` underflows binary64, still yield usable quotients.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: u32 = 8192;

/// Largest `ln` value whose exponential is finite in binary64.
const LN_MAX: f64 = 709.782_712_893_384;

/// Evaluator for `I_m(x)` with a configurable order ceiling.
#[derive(Debug, Clone, Copy)]
pub struct BesselI {
    max_order: u32,
}

impl Default for BesselI {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl BesselI {
    pub fn with_max_order(max_order: u32) -> Self {
        Self { max_order }
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    fn check(&self, order: u32, x: f64) -> Result<()> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
        }
        if order > self.max_order {
            return Err(Error::Domain(format!(
                "Bessel order {order} exceeds configured maximum {}",
                self.max_order
            )));
        }
        Ok(())
    }

    /// `ln I_m(x)`; `-inf` at `x = 0` for `m >= 1`.
    pub fn ln(&self, order: u32, x: f64) -> Result<f64> {
        self.check(order, x)?;
        Ok(eval(order, x).ln_value)
    }

    /// `I_m(x)`. Signals [`Error::BesselRange`] when the value overflows.
    pub fn value(&self, order: u32, x: f64) -> Result<f64> {
        self.check(order, x)?;
        let ln = eval(order, x).ln_value;
        if ln > LN_MAX {
            return Err(Error::BesselRange { order, x });
        }
        Ok(ln.exp())
    }

    /// `e^{-x} I_m(x)`, always in `[0, 1]`.
    pub fn scaled(&self, order: u32, x: f64) -> Result<f64> {
        self.check(order, x)?;
        let ln = eval(order, x).ln_value;
        Ok((ln - x).exp().min(1.0))
    }

    /// `I'_m(x)` via `(I_{m-1} + I_{m+1}) / 2` (`I_1` for `m = 0`).
    pub fn derivative(&self, order: u32, x: f64) -> Result<f64> {
        if order == 0 {
            return self.value(1, x);
        }
        self.check(order + 1, x)?;
        let lo = self.value(order - 1, x)?;
        let hi = self.value(order + 1, x)?;
        Ok(0.5 * (lo + hi))
    }

    /// The ratio `I_{m+1}(x) / I_m(x)`, finite for every order.
    pub fn ratio(&self, order: u32, x: f64) -> Result<f64> {
        self.check(order, x)?;
        Ok(eval(order, x).ratio)
    }

    /// `I_m(y) / I_m(x)` computed in the logarithmic domain.
    pub fn quotient(&self, order: u32, y: f64, x: f64) -> Result<f64> {
        self.check(order, x)?;
        self.check(order, y)?;
        let num = eval(order, y).ln_value;
        let den = eval(order, x).ln_value;
        Ok((num - den).exp())
    }
}

pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    BesselI::default().value(order, x)
}

pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    BesselI::default().scaled(order, x)
}

pub fn bessel_i_prime(order: u32, x: f64) -> Result<f64> {
    BesselI::default().derivative(order, x)
}

pub fn ln_bessel_i(order: u32, x: f64) -> Result<f64> {
    BesselI::default().ln(order, x)
}

pub fn bessel_i_ratio(order: u32, x: f64) -> Result<f64> {
    BesselI::default().ratio(order, x)
}

#[derive(Debug, Clone, Copy)]
struct Evaluation {
    ln_value: f64,
    ratio: f64,
}

fn eval(order: u32, x: f64) -> Evaluation {
    if x == 0.0 {
        return Evaluation {
            ln_value: if order == 0 { 0.0 } else { f64::NEG_INFINITY },
            ratio: 0.0,
        };
    }
    let m = order as f64;
    if x * x <= 40.0 * (m + 1.0) + 64.0 {
        eval_series(order, x)
    } else {
        eval_miller(order, x)
    }
}

/// `sum_k (x^2/4)^k / (k! (m+1)_k)`; positive terms, so no cancellation.
fn reduced_series(m: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (m + k));
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum && q / ((k + 1.0) * (m + k + 1.0)) < 0.5 {
            break;
        }
    }
    sum
}

fn eval_series(order: u32, x: f64) -> Evaluation {
    let m = order as f64;
    let s0 = reduced_series(m, x);
    let s1 = reduced_series(m + 1.0, x);
    Evaluation {
        ln_value: m * (0.5 * x).ln() - ln_factorial(order) + s0.ln(),
        ratio: 0.5 * x / (m + 1.0) * s1 / s0,
    }
}

fn eval_miller(order: u32, x: f64) -> Evaluation {
    let top = order as usize + 32 + (12.0 * x.sqrt()).ceil() as usize;
    let mut ratios = vec![0.0; top + 1];
    let start = (top + 1) as f64;
    ratios[top] = x / (start + (start * start + x * x).sqrt());
    for k in (1..=top).rev() {
        ratios[k - 1] = 1.0 / (2.0 * k as f64 / x + ratios[k]);
    }

    // e^x / I_0 = 1 + 2 sum_{k>=1} I_k / I_0
    let mut sum = 1.0;
    let mut p = 1.0;
    for r in &ratios[..top] {
        p *= r;
        sum += 2.0 * p;
        if p < 1e-18 * sum {
            break;
        }
    }
    let mut ln_value = x - sum.ln();

    let mut prod = 1.0;
    for r in &ratios[..order as usize] {
        prod *= r;
        if prod < 1e-150 {
            ln_value += prod.ln();
            prod = 1.0;
        }
    }
    ln_value += prod.ln();

    Evaluation {
        ln_value,
        ratio: ratios[order as usize],
    }
}

/// `ln(m!)`: exact products for small `m`, Stirling series above.
fn ln_factorial(m: u32) -> f64 {
    if m < 24 {
        let mut f = 1.0_f64;
        for k in 2..=m {
            f *= k as f64;
        }
        return f.ln();
    }
    let z = m as f64 + 1.0;
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
        - 1.0 / (1680.0 * z * z2 * z2 * z2);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(7, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i_scaled(0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn ln_factorial_matches_products() {
        let mut f = 0.0_f64;
        for m in 1..=60u32 {
            f += (m as f64).ln();
            assert!((ln_factorial(m) - f).abs() < 1e-12 * f.max(1.0), "m = {m}");
        }
    }

    #[test]
    fn series_and_miller_agree_on_the_switch() {
        // x^2 = 40(m+1) + 64 is the branch boundary; probe both sides.
        for order in [0u32, 3, 17, 120] {
            let x = (40.0 * (order as f64 + 1.0) + 64.0).sqrt();
            let a = eval_series(order, x);
            let b = eval_miller(order, x);
            assert!((a.ln_value - b.ln_value).abs() < 1e-13 * a.ln_value.abs().max(1.0));
            assert!(rel(a.ratio, b.ratio) < 1e-13);
        }
    }

    #[test]
    fn overflow_regime_signals_range_error() {
        assert!(matches!(bessel_i(0, 800.0), Err(Error::BesselRange { .. })));
        let s = bessel_i_scaled(0, 800.0).unwrap();
        assert!(s > 0.0 && s < 1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_i(0, -1.0).is_err());
        assert!(bessel_i(0, f64::NAN).is_err());
        assert!(bessel_i(DEFAULT_MAX_ORDER + 1, 1.0).is_err());
        assert!(BesselI::with_max_order(16).value(17, 1.0).is_err());
    }

    #[test]
    fn derivative_small_argument_limit() {
        let d = bessel_i_prime(1, 1e-9).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        assert!((bessel_i_prime(1, 0.0).unwrap() - 0.5).abs() < 1e-15);
    }
}
