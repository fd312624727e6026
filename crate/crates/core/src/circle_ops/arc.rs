use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// `e^{2 pi i x}` with exact values at quarter turns.
///
/// The argument is reduced to the nearest quarter turn first, so that
/// `x = k/4` lands on `1, i, -1, -i` without rounding.
pub fn turn_phase(x: f64) -> C64 {
    let q = (4.0 * x).round();
    let r = x - 0.25 * q;
    let (s, c) = (TAU * r).sin_cos();
    match (q as i64).rem_euclid(4) {
        0 => C64::new(c, s),
        1 => C64::new(-s, c),
        2 => C64::new(-c, -s),
        _ => C64::new(s, -c),
    }
}

/// `e^{2 pi i k t}` with the fractional part of `k t` formed without
/// cancellation, which keeps high-order phases accurate.
pub fn mode_phase(k: i64, t: f64) -> C64 {
    let kf = k as f64;
    let p = kf * t;
    let err = kf.mul_add(t, -p);
    turn_phase((p - p.round()) + err)
}

/// Half-open arc `[start, end)` of the circle, measured in turns
/// (`theta = 2 pi t`), with `0 <= start < end <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: f64,
    end: f64,
}

impl Arc {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || start < 0.0 || end > 1.0 || start >= end {
            return Err(Error::InvalidCoefficient(format!(
                "arc [{start}, {end}) must satisfy 0 <= start < end <= 1 (turns)"
            )));
        }
        Ok(Self { start, end })
    }

    /// Arc given in radians, `0 <= a < b <= 2 pi`.
    pub fn from_radians(a: f64, b: f64) -> Result<Self> {
        Self::new(a / TAU, b / TAU)
    }

    pub fn full() -> Self {
        Self { start: 0.0, end: 1.0 }
    }

    /// `[0, pi)`.
    pub fn upper_half() -> Self {
        Self { start: 0.0, end: 0.5 }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Length in turns, i.e. the fraction of the circle covered.
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_full(&self) -> bool {
        self.start == 0.0 && self.end == 1.0
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t < self.end
    }

    /// `(1/2 pi) int_arc e^{-i n theta} d theta`, exact at rational quarter points.
    pub fn exponential_mean(&self, n: i64) -> C64 {
        if n == 0 {
            return C64::new(self.length(), 0.0);
        }
        let diff = mode_phase(-n, self.end) - mode_phase(-n, self.start);
        // divide by -2 pi i n
        diff / C64::new(0.0, -TAU * n as f64)
    }
}

/// Reduce a turn coordinate into `[0, 1)`.
pub fn wrap_turn(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    if r >= 1.0 { 0.0 } else { r }
}
