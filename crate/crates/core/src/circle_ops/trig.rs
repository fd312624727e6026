use num_complex::Complex64 as C64;

use super::arc::mode_phase;
use crate::error::{Error, Result};

/// Trigonometric polynomial `sum_{|k| <= D} c_k e^{i k theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    // c_{-D}, ..., c_D
    coeffs: Vec<C64>,
}

impl TrigPoly {
    /// Coefficients ordered `c_{-D}, ..., c_D`; the length must be odd.
    pub fn from_coefficients(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidCoefficient(format!(
                "trigonometric polynomial needs 2D+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidCoefficient("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: C64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn real_constant(c: f64) -> Self {
        Self::constant(C64::new(c, 0.0))
    }

    /// `a0 + sum_k (cos_k cos(k theta) + sin_k sin(k theta))`, `k = 1, 2, ...`.
    pub fn from_real_series(a0: f64, cos: &[f64], sin: &[f64]) -> Result<Self> {
        let d = cos.len().max(sin.len());
        let mut coeffs = vec![C64::new(0.0, 0.0); 2 * d + 1];
        coeffs[d] = C64::new(a0, 0.0);
        for k in 1..=d {
            let a = cos.get(k - 1).copied().unwrap_or(0.0);
            let b = sin.get(k - 1).copied().unwrap_or(0.0);
            coeffs[d + k] = C64::new(0.5 * a, -0.5 * b);
            coeffs[d - k] = C64::new(0.5 * a, 0.5 * b);
        }
        Self::from_coefficients(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// `c_k`, zero outside the stored range.
    pub fn coefficient(&self, k: i64) -> C64 {
        let d = self.degree() as i64;
        if k.abs() > d {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + d) as usize]
        }
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    /// Value at `theta = 2 pi t`.
    pub fn eval_turns(&self, t: f64) -> C64 {
        let d = self.degree() as i64;
        let mut acc = self.coeffs[d as usize];
        for k in 1..=d {
            acc += self.coefficient(k) * mode_phase(k, t) + self.coefficient(-k) * mode_phase(-k, t);
        }
        acc
    }

    pub fn eval(&self, theta: f64) -> C64 {
        self.eval_turns(theta / std::f64::consts::TAU)
    }

    /// True when `c_{-k} = conj(c_k)` holds exactly.
    pub fn is_real(&self) -> bool {
        let d = self.degree() as i64;
        (0..=d).all(|k| self.coefficient(-k) == self.coefficient(k).conj())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        let d = self.degree().max(other.degree()) as i64;
        let coeffs = (-d..=d)
            .map(|k| f(self.coefficient(k), other.coefficient(k)))
            .collect();
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Pointwise product (coefficient convolution).
    pub fn mul(&self, other: &Self) -> Self {
        let (da, db) = (self.degree() as i64, other.degree() as i64);
        let d = da + db;
        let mut coeffs = vec![C64::new(0.0, 0.0); (2 * d + 1) as usize];
        for j in -da..=da {
            for k in -db..=db {
                coeffs[(j + k + d) as usize] += self.coefficient(j) * other.coefficient(k);
            }
        }
        Self { coeffs }
    }

    /// Multiply coefficient `c_k` by `w(k)`.
    pub fn damp(&self, w: impl Fn(i64) -> f64) -> Self {
        let d = self.degree() as i64;
        Self {
            coeffs: (-d..=d).map(|k| self.coefficient(k) * w(k)).collect(),
        }
    }

    /// Crude sup-norm bound `sum |c_k|`.
    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}
