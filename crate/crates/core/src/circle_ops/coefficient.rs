use num_complex::Complex64 as C64;

use super::arc::{Arc, wrap_turn};
use super::trig::TrigPoly;
use crate::error::{Error, Result};

/// Complex function on the circle that is a trigonometric polynomial on
/// each of finitely many half-open arcs partitioning `[0, 1)` (turns).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCoefficient {
    pieces: Vec<(Arc, TrigPoly)>,
}

impl PiecewiseCoefficient {
    /// Validates that the arcs are ordered, contiguous and cover the circle.
    pub fn from_pieces(pieces: Vec<(Arc, TrigPoly)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidCoefficient("at least one piece is required".into()));
        }
        if pieces[0].0.start() != 0.0 {
            return Err(Error::InvalidCoefficient("first piece must start at 0".into()));
        }
        for w in pieces.windows(2) {
            if w[0].0.end() != w[1].0.start() {
                return Err(Error::InvalidCoefficient(format!(
                    "pieces are not contiguous at {} / {}",
                    w[0].0.end(),
                    w[1].0.start()
                )));
            }
        }
        if pieces[pieces.len() - 1].0.end() != 1.0 {
            return Err(Error::InvalidCoefficient("last piece must end at 1 turn".into()));
        }
        Ok(Self { pieces })
    }

    pub fn constant(c: C64) -> Self {
        Self::smooth(TrigPoly::constant(c))
    }

    pub fn real_constant(c: f64) -> Self {
        Self::constant(C64::new(c, 0.0))
    }

    pub fn zero() -> Self {
        Self::real_constant(0.0)
    }

    /// Globally smooth coefficient: a single full-circle piece.
    pub fn smooth(p: TrigPoly) -> Self {
        Self {
            pieces: vec![(Arc::full(), p)],
        }
    }

    /// Piecewise constant: `values[i]` on `[breaks[i], breaks[i+1])` with
    /// `breaks` implicitly starting at 0 and ending at 1.
    ///
    /// `interior_breaks` lists the jump points strictly inside `(0, 1)`.
    pub fn step(interior_breaks: &[f64], values: &[C64]) -> Result<Self> {
        if values.len() != interior_breaks.len() + 1 {
            return Err(Error::InvalidCoefficient(format!(
                "{} breakpoints need {} values, got {}",
                interior_breaks.len(),
                interior_breaks.len() + 1,
                values.len()
            )));
        }
        let mut edges = Vec::with_capacity(values.len() + 1);
        edges.push(0.0);
        edges.extend_from_slice(interior_breaks);
        edges.push(1.0);
        let pieces = edges
            .windows(2)
            .zip(values)
            .map(|(e, v)| Ok((Arc::new(e[0], e[1])?, TrigPoly::constant(*v))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_pieces(pieces)
    }

    /// Real piecewise constant; see [`Self::step`].
    pub fn real_step(interior_breaks: &[f64], values: &[f64]) -> Result<Self> {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::step(interior_breaks, &v)
    }

    /// `lo` on `[0, 1/2)` turns and `hi` on `[1/2, 1)`.
    pub fn half_step(lo: f64, hi: f64) -> Self {
        Self::real_step(&[0.5], &[lo, hi]).expect("valid half step")
    }

    /// Indicator function of `arc`.
    pub fn indicator(arc: Arc) -> Self {
        Self::indicator_with(arc, 1.0, 0.0)
    }

    /// Indicator function of the complement of `arc`.
    pub fn complement_indicator(arc: Arc) -> Self {
        Self::indicator_with(arc, 0.0, 1.0)
    }

    fn indicator_with(arc: Arc, inside: f64, outside: f64) -> Self {
        if arc.is_full() {
            return Self::real_constant(inside);
        }
        let mut breaks = Vec::new();
        let mut values = Vec::new();
        if arc.start() > 0.0 {
            breaks.push(arc.start());
            values.push(outside);
        }
        values.push(inside);
        if arc.end() < 1.0 {
            breaks.push(arc.end());
            values.push(outside);
        }
        Self::real_step(&breaks, &values).expect("indicator arcs are valid")
    }

    pub fn pieces(&self) -> &[(Arc, TrigPoly)] {
        &self.pieces
    }

    /// Jump candidates: piece boundaries in `[0, 1)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().map(|(a, _)| a.start()).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(|(_, p)| p.degree()).max().unwrap_or(0)
    }

    pub fn is_smooth(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn is_real(&self) -> bool {
        self.pieces.iter().all(|(_, p)| p.is_real())
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|(_, p)| p.is_zero())
    }

    /// Constant value if the coefficient is a single constant piece.
    pub fn as_constant(&self) -> Option<C64> {
        match self.pieces.as_slice() {
            [(_, p)] if p.degree() == 0 => Some(p.coefficient(0)),
            _ => None,
        }
    }

    fn piece_at(&self, t: f64) -> &TrigPoly {
        let t = wrap_turn(t);
        let idx = self.pieces.partition_point(|(a, _)| a.start() <= t);
        &self.pieces[idx.saturating_sub(1)].1
    }

    /// Value at `theta = 2 pi t` (right-continuous at jumps).
    pub fn value_at_turns(&self, t: f64) -> C64 {
        self.piece_at(t).eval_turns(wrap_turn(t))
    }

    pub fn value_at(&self, theta: f64) -> C64 {
        self.value_at_turns(theta / std::f64::consts::TAU)
    }

    /// Common refinement with `other`, combining piece polynomials with `f`.
    pub fn combine(&self, other: &Self, f: impl Fn(&TrigPoly, &TrigPoly) -> TrigPoly) -> Self {
        let mut edges: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .chain(other.breakpoints())
            .chain([1.0])
            .collect();
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let pieces = edges
            .windows(2)
            .map(|e| {
                let arc = Arc::new(e[0], e[1]).expect("refinement edges are increasing");
                (arc, f(self.piece_at(e[0]), other.piece_at(e[0])))
            })
            .collect();
        Self { pieces }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.mul(b))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            pieces: self.pieces.iter().map(|(a, p)| (*a, p.scale(s))).collect(),
        }
    }

    /// Same function with each piece split at `t` if `t` is interior to it.
    pub fn split_at(&self, t: f64) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len() + 1);
        for (a, p) in &self.pieces {
            if t > a.start() && t < a.end() {
                pieces.push((Arc::new(a.start(), t).unwrap(), p.clone()));
                pieces.push((Arc::new(t, a.end()).unwrap(), p.clone()));
            } else {
                pieces.push((*a, p.clone()));
            }
        }
        Self { pieces }
    }

    /// Sup-norm estimated by dense sampling of every piece.
    pub fn sup_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (a, p) in &self.pieces {
            let samples = 64 * (p.degree() + 1) + 1;
            for i in 0..samples {
                let t = a.start() + a.length() * i as f64 / samples as f64;
                best = best.max(p.eval_turns(t).norm());
            }
        }
        best
    }
}

/// `b_k = (1/2 pi) int b(theta) e^{-ik theta} d theta`, exact per piece.
///
/// For real `b` the negative modes are returned as conjugates, so the
/// reality symmetry holds bit for bit.
pub fn fourier_coefficient(b: &PiecewiseCoefficient, k: i64) -> C64 {
    if b.is_real() {
        return if k < 0 {
            raw_coefficient(b, -k).conj()
        } else if k == 0 {
            C64::new(raw_coefficient(b, 0).re, 0.0)
        } else {
            raw_coefficient(b, k)
        };
    }
    raw_coefficient(b, k)
}

fn raw_coefficient(b: &PiecewiseCoefficient, k: i64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (arc, p) in b.pieces() {
        if arc.is_full() {
            acc += p.coefficient(k);
            continue;
        }
        let d = p.degree() as i64;
        for j in -d..=d {
            let c = p.coefficient(j);
            if c != C64::new(0.0, 0.0) {
                acc += c * arc.exponential_mean(k - j);
            }
        }
    }
    acc
}

/// `b_k` for `k = -K..=K`, indexed by `k + K`; exactly conjugate-symmetric
/// when `b` is real.
pub fn fourier_coefficients(b: &PiecewiseCoefficient, max_k: usize) -> Vec<C64> {
    let kk = max_k as i64;
    (-kk..=kk).map(|k| fourier_coefficient(b, k)).collect()
}
