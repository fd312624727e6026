use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use super::arc::Arc;
use super::coefficient::{PiecewiseCoefficient, fourier_coefficients};
use super::real_basis::{
    complex_entry, complex_form, j_symmetry_defect_fn, real_form_fn, real_index_mode,
};
use crate::error::{Error, Result};

/// Relative asymmetry below which a matrix is accepted as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Relative `J`-symmetry defect accepted when switching to the real basis.
const J_TOLERANCE: f64 = 64.0 * f64::EPSILON;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Diagonal(Vec<C64>),
    Dense(Mat<C64>),
    /// Real matrix in the cosine/sine basis (see `real_basis`).
    Real(Mat<f64>),
}

/// Operator on the span of `e^{i m theta} / sqrt(2 pi)`, `|m| <= N`.
///
/// Row and column `m + N` belong to mode `m`. Diagonal operators are stored
/// compactly. Dense operators commuting with `(Jx)_m = conj(x_{-m})` may be
/// held as a real matrix in the cosine/sine basis, which is how real
/// coefficients are assembled; every accessor still speaks the exponential
/// basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    cutoff: usize,
    repr: Repr,
    order: Option<f64>,
    hermitian: bool,
}

/// Which block of `P` an indicator cut keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    /// `1_A P 1_A`
    Plus,
    /// `1_{A^c} P 1_{A^c}`
    Minus,
    /// `1_A P 1_{A^c}`
    Cross,
}

/// Real diagonal in the cosine/sine basis when `d` is real and even in `m`.
fn even_real(d: &[C64]) -> Option<Vec<f64>> {
    let n = d.len();
    let cutoff = n / 2;
    for k in 0..=cutoff {
        let (a, b) = (d[cutoff + k], d[cutoff - k]);
        if a.im != 0.0 || b != a {
            return None;
        }
    }
    Some((0..n).map(|p| d[cutoff + real_index_mode(p)].re).collect())
}

fn max_col_sum(n: usize, abs: impl Fn(usize, usize) -> f64) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| abs(i, j)).sum::<f64>())
        .fold(0.0, f64::max)
}

fn mirror_upper(r: &mut Mat<f64>) {
    let n = r.nrows();
    for j in 0..n {
        for i in j + 1..n {
            let v = 0.5 * (r[(i, j)] + r[(j, i)]);
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
}

impl TruncatedOperator {
    pub fn zeros(cutoff: usize) -> Self {
        Self::from_real_diagonal(cutoff, &vec![0.0; 2 * cutoff + 1]).unwrap()
    }

    pub fn identity(cutoff: usize) -> Self {
        Self::from_real_diagonal(cutoff, &vec![1.0; 2 * cutoff + 1]).unwrap()
    }

    pub fn from_diagonal(cutoff: usize, diag: Vec<C64>) -> Result<Self> {
        check_len(cutoff, diag.len())?;
        let hermitian = diag.iter().all(|d| d.im == 0.0);
        Ok(Self {
            cutoff,
            repr: Repr::Diagonal(diag),
            order: None,
            hermitian,
        })
    }

    pub fn from_real_diagonal(cutoff: usize, diag: &[f64]) -> Result<Self> {
        Self::from_diagonal(cutoff, diag.iter().map(|&d| C64::new(d, 0.0)).collect())
    }

    pub fn from_dense(cutoff: usize, mat: Mat<C64>) -> Result<Self> {
        check_len(cutoff, mat.nrows())?;
        check_len(cutoff, mat.ncols())?;
        Ok(Self {
            cutoff,
            repr: Repr::Dense(mat),
            order: None,
            hermitian: false,
        })
    }

    /// Operator `U R U*` given its real matrix `R` in the cosine/sine basis.
    pub fn from_real_form(cutoff: usize, r: Mat<f64>) -> Result<Self> {
        check_len(cutoff, r.nrows())?;
        check_len(cutoff, r.ncols())?;
        Ok(Self {
            cutoff,
            repr: Repr::Real(r),
            order: None,
            hermitian: false,
        })
    }

    /// Dense operator with entry `f(m, m')` for modes `m, m'`.
    pub fn from_fn(cutoff: usize, f: impl Fn(i64, i64) -> C64) -> Self {
        let n = 2 * cutoff + 1;
        let c = cutoff as i64;
        let mat = Mat::from_fn(n, n, |i, j| f(i as i64 - c, j as i64 - c));
        Self::from_dense(cutoff, mat).unwrap()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        2 * self.cutoff + 1
    }

    pub fn order(&self) -> Option<f64> {
        self.order
    }

    pub fn with_order(mut self, order: f64) -> Self {
        self.order = Some(order);
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.repr, Repr::Diagonal(_))
    }

    pub fn diagonal(&self) -> Option<&[C64]> {
        match &self.repr {
            Repr::Diagonal(d) => Some(d),
            _ => None,
        }
    }

    /// Stored complex matrix, if the operator is held in that form.
    pub fn dense(&self) -> Option<&Mat<C64>> {
        match &self.repr {
            Repr::Dense(m) => Some(m),
            _ => None,
        }
    }

    /// Stored real cosine/sine-basis matrix, if held in that form.
    pub fn real_form(&self) -> Option<&Mat<f64>> {
        match &self.repr {
            Repr::Real(r) => Some(r),
            _ => None,
        }
    }

    /// Real cosine/sine-basis matrix when the operator commutes with `J`.
    pub fn to_real_form(&self) -> Option<Mat<f64>> {
        match &self.repr {
            Repr::Real(r) => Some(r.clone()),
            Repr::Diagonal(d) => match even_real(d) {
                Some(e) => {
                    let n = e.len();
                    Some(Mat::from_fn(n, n, |i, j| if i == j { e[i] } else { 0.0 }))
                }
                None => self.j_reduce(),
            },
            Repr::Dense(_) => self.j_reduce(),
        }
    }

    fn j_reduce(&self) -> Option<Mat<f64>> {
        let n = self.dim();
        let defect = j_symmetry_defect_fn(n, |i, j| self.entry_at(i, j));
        if defect > J_TOLERANCE * self.frobenius_norm() {
            return None;
        }
        let mut r = real_form_fn(self.cutoff, |i, j| self.entry_at(i, j));
        if self.hermitian {
            mirror_upper(&mut r);
        }
        Some(r)
    }

    /// Same operator re-stored in the real basis when possible.
    pub fn into_real_if_possible(self) -> Self {
        if matches!(self.repr, Repr::Dense(_))
            && let Some(r) = self.j_reduce() {
                return Self {
                    repr: Repr::Real(r),
                    ..self
                };
            }
        self
    }

    /// Materialized matrix in the exponential basis.
    pub fn to_dense(&self) -> Mat<C64> {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Diagonal(d) => {
                let n = d.len();
                Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO })
            }
            Repr::Real(r) => complex_form(self.cutoff, r),
        }
    }

    pub fn into_dense(self) -> Mat<C64> {
        match self.repr {
            Repr::Dense(m) => m,
            _ => self.to_dense(),
        }
    }

    #[inline]
    fn entry_at(&self, i: usize, j: usize) -> C64 {
        match &self.repr {
            Repr::Dense(a) => a[(i, j)],
            Repr::Diagonal(d) if i == j => d[i],
            Repr::Diagonal(_) => ZERO,
            Repr::Real(r) => complex_entry(self.cutoff, r, i, j),
        }
    }

    /// Entry in row `m`, column `m_prime` (mode labels).
    pub fn entry(&self, m: i64, m_prime: i64) -> C64 {
        let i = (m + self.cutoff as i64) as usize;
        let j = (m_prime + self.cutoff as i64) as usize;
        self.entry_at(i, j)
    }

    /// `max |A - A*|` over entries (over the real matrix when held in real form).
    pub fn hermitian_defect(&self) -> f64 {
        match &self.repr {
            Repr::Diagonal(d) => d.iter().map(|z| 2.0 * z.im.abs()).fold(0.0, f64::max),
            Repr::Dense(a) => {
                let n = a.nrows();
                let mut worst: f64 = 0.0;
                for j in 0..n {
                    for i in j..n {
                        worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
                    }
                }
                worst
            }
            Repr::Real(r) => {
                let n = r.nrows();
                let mut worst: f64 = 0.0;
                for j in 0..n {
                    for i in j + 1..n {
                        worst = worst.max((r[(i, j)] - r[(j, i)]).abs());
                    }
                }
                worst
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match &self.repr {
            Repr::Diagonal(d) => d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            Repr::Dense(a) => a.norm_l2(),
            Repr::Real(r) => r.norm_l2(),
        }
    }

    /// Checks `max |A - A*| <= 1e-12 ||A||_F`, then symmetrizes and sets the flag.
    pub fn certify_hermitian(mut self) -> Result<Self> {
        if self.hermitian {
            return Ok(self);
        }
        let defect = self.hermitian_defect();
        let allowed = HERMITIAN_TOLERANCE * self.frobenius_norm();
        if defect > allowed {
            return Err(Error::NotHermitian {
                asymmetry: defect,
                allowed,
            });
        }
        match &mut self.repr {
            Repr::Diagonal(d) => d.iter_mut().for_each(|z| z.im = 0.0),
            Repr::Dense(a) => {
                let n = a.nrows();
                for j in 0..n {
                    a[(j, j)].im = 0.0;
                    for i in j + 1..n {
                        let v = 0.5 * (a[(i, j)] + a[(j, i)].conj());
                        a[(i, j)] = v;
                        a[(j, i)] = v.conj();
                    }
                }
            }
            Repr::Real(r) => mirror_upper(r),
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            Repr::Diagonal(d) => Repr::Diagonal(d.iter().map(|z| z.conj()).collect()),
            Repr::Dense(a) => Repr::Dense(a.adjoint().to_owned()),
            Repr::Real(r) => Repr::Real(r.transpose().to_owned()),
        };
        Self {
            cutoff: self.cutoff,
            repr,
            order: self.order,
            hermitian: self.hermitian,
        }
    }

    fn same_cutoff(&self, other: &Self) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch {
                left: self.cutoff,
                right: other.cutoff,
            });
        }
        Ok(())
    }

    fn with_repr(&self, repr: Repr, order: Option<f64>, hermitian: bool) -> Self {
        Self {
            cutoff: self.cutoff,
            repr,
            order,
            hermitian,
        }
    }

    /// Matrix product `self * other`; order tags add.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_cutoff(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => {
                Repr::Diagonal(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (Repr::Real(a), Repr::Real(b)) => Repr::Real(a * b),
            (Repr::Diagonal(d), Repr::Real(r)) => match even_real(d) {
                Some(e) => Repr::Real(Mat::from_fn(r.nrows(), r.ncols(), |i, j| e[i] * r[(i, j)])),
                None => scale_rows(d, &complex_form(self.cutoff, r)),
            },
            (Repr::Real(r), Repr::Diagonal(d)) => match even_real(d) {
                Some(e) => Repr::Real(Mat::from_fn(r.nrows(), r.ncols(), |i, j| r[(i, j)] * e[j])),
                None => scale_cols(&complex_form(self.cutoff, r), d),
            },
            (Repr::Diagonal(d), Repr::Dense(b)) => scale_rows(d, b),
            (Repr::Dense(a), Repr::Diagonal(d)) => scale_cols(a, d),
            (Repr::Dense(a), Repr::Dense(b)) => Repr::Dense(a * b),
            _ => Repr::Dense(&self.to_dense() * &other.to_dense()),
        };
        let hermitian = match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => a.iter().chain(b).all(|z| z.im == 0.0),
            _ => false,
        };
        let order = match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(self.with_repr(repr, order, hermitian))
    }

    /// Composition of a chain of operators, left to right.
    pub fn compose_all(ops: &[&Self]) -> Result<Self> {
        let (first, rest) = ops
            .split_first()
            .ok_or_else(|| Error::Domain("empty composition".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, op| acc.compose(op))
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        self.same_cutoff(other)?;
        let real_diag = |r: &Mat<f64>, e: &[f64], flip: bool| {
            let mut out = if flip {
                Mat::from_fn(r.nrows(), r.ncols(), |i, j| r[(i, j)] * sign)
            } else {
                r.clone()
            };
            let s = if flip { 1.0 } else { sign };
            for (i, v) in e.iter().enumerate() {
                out[(i, i)] += s * v;
            }
            out
        };
        let repr = match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => {
                Repr::Diagonal(a.iter().zip(b).map(|(x, y)| x + y * sign).collect())
            }
            (Repr::Real(a), Repr::Real(b)) => {
                Repr::Real(Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + b[(i, j)] * sign))
            }
            (Repr::Real(r), Repr::Diagonal(d)) if even_real(d).is_some() => {
                Repr::Real(real_diag(r, &even_real(d).unwrap(), false))
            }
            (Repr::Diagonal(d), Repr::Real(r)) if even_real(d).is_some() => {
                Repr::Real(real_diag(r, &even_real(d).unwrap(), true))
            }
            _ => {
                let a = self.to_dense();
                let b = other.to_dense();
                Repr::Dense(Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
                    a[(i, j)] + b[(i, j)] * sign
                }))
            }
        };
        let order = match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(self.with_repr(repr, order, self.hermitian && other.hermitian))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, s: C64) -> Self {
        let repr = match &self.repr {
            Repr::Diagonal(d) => Repr::Diagonal(d.iter().map(|z| z * s).collect()),
            Repr::Real(r) if s.im == 0.0 => {
                Repr::Real(Mat::from_fn(r.nrows(), r.ncols(), |i, j| r[(i, j)] * s.re))
            }
            _ => {
                let a = self.to_dense();
                Repr::Dense(Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s))
            }
        };
        self.with_repr(repr, self.order, self.hermitian && s.im == 0.0)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> Result<f64> {
        let solver = |e: String| Error::SolverFailure(e);
        match &self.repr {
            Repr::Diagonal(d) => Ok(d.iter().map(|z| z.norm()).fold(0.0, f64::max)),
            Repr::Real(r) if self.hermitian => {
                let ev = r
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|e| solver(format!("{e:?}")))?;
                Ok(ev.iter().map(|x| x.abs()).fold(0.0, f64::max))
            }
            Repr::Real(r) => {
                let sv = r.singular_values().map_err(|e| solver(format!("{e:?}")))?;
                Ok(sv.first().copied().unwrap_or(0.0))
            }
            Repr::Dense(a) if self.hermitian => {
                let ev = a
                    .self_adjoint_eigenvalues(Side::Lower)
                    .map_err(|e| solver(format!("{e:?}")))?;
                Ok(ev.iter().map(|x| x.abs()).fold(0.0, f64::max))
            }
            Repr::Dense(a) => {
                let sv = a.singular_values().map_err(|e| solver(format!("{e:?}")))?;
                Ok(sv.first().copied().unwrap_or(0.0))
            }
        }
    }

    /// Inverse together with the 1-norm condition number `||A||_1 ||A^{-1}||_1`
    /// (measured in the stored basis).
    pub fn inverse_with_condition(&self) -> Result<(Self, f64)> {
        let (repr, cond) = match &self.repr {
            Repr::Diagonal(d) => {
                let max = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let min = d.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
                if min == 0.0 {
                    return Err(Error::IllConditioned(f64::INFINITY));
                }
                let inv = d.iter().map(|z| z.inv()).collect();
                (Repr::Diagonal(inv), max / min)
            }
            Repr::Real(r) => {
                let n = r.nrows();
                let inv = r.partial_piv_lu().solve(Mat::<f64>::identity(n, n));
                let cond = max_col_sum(n, |i, j| r[(i, j)].abs())
                    * max_col_sum(n, |i, j| inv[(i, j)].abs());
                (Repr::Real(inv), cond)
            }
            Repr::Dense(a) => {
                let n = a.nrows();
                let inv = a.partial_piv_lu().solve(Mat::<C64>::identity(n, n));
                let cond = max_col_sum(n, |i, j| a[(i, j)].norm())
                    * max_col_sum(n, |i, j| inv[(i, j)].norm());
                (Repr::Dense(inv), cond)
            }
        };
        if !cond.is_finite() {
            return Err(Error::IllConditioned(cond));
        }
        let order = self.order.map(|o| -o);
        Ok((self.with_repr(repr, order, self.hermitian), cond))
    }
}

fn scale_rows(d: &[C64], b: &Mat<C64>) -> Repr {
    Repr::Dense(Mat::from_fn(b.nrows(), b.ncols(), |i, j| d[i] * b[(i, j)]))
}

fn scale_cols(a: &Mat<C64>, d: &[C64]) -> Repr {
    Repr::Dense(Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * d[j]))
}

fn check_len(cutoff: usize, len: usize) -> Result<()> {
    if len != 2 * cutoff + 1 {
        return Err(Error::DimensionMismatch {
            left: cutoff,
            right: len.saturating_sub(1) / 2,
        });
    }
    Ok(())
}

/// Galerkin matrix of multiplication by `b`: entry `(m, m')` is `b_{m - m'}`.
pub fn multiplication_operator(b: &PiecewiseCoefficient, cutoff: usize) -> TruncatedOperator {
    if let Some(c) = b.as_constant() {
        let op = TruncatedOperator::from_diagonal(cutoff, vec![c; 2 * cutoff + 1]).unwrap();
        return op.with_order(0.0);
    }
    let coeffs = fourier_coefficients(b, 2 * cutoff);
    let n = 2 * cutoff + 1;
    let shift = 2 * cutoff;
    if b.is_real() {
        let mut r = real_form_fn(cutoff, |i, j| coeffs[shift + i - j]);
        mirror_upper(&mut r);
        let mut op = TruncatedOperator::from_real_form(cutoff, r).unwrap().with_order(0.0);
        op.hermitian = true;
        return op;
    }
    let mat = Mat::from_fn(n, n, |i, j| coeffs[shift + i - j]);
    TruncatedOperator::from_dense(cutoff, mat).unwrap().with_order(0.0)
}

/// Fourier multiplier with diagonal entries `symbol(m)`.
pub fn diagonal_multiplier(symbol: impl Fn(i64) -> C64, cutoff: usize) -> TruncatedOperator {
    let c = cutoff as i64;
    let diag = (-c..=c).map(symbol).collect();
    TruncatedOperator::from_diagonal(cutoff, diag).unwrap()
}

/// Real-valued Fourier multiplier.
pub fn real_multiplier(symbol: impl Fn(i64) -> f64, cutoff: usize) -> TruncatedOperator {
    diagonal_multiplier(|m| C64::new(symbol(m), 0.0), cutoff)
}

/// `1_A P 1_A`, `1_{A^c} P 1_{A^c}` or `1_A P 1_{A^c}` for the arc `A`.
pub fn indicator_cut(p: &TruncatedOperator, arc: Arc, side: CutSide) -> Result<TruncatedOperator> {
    let n = p.cutoff();
    let inside = multiplication_operator(&PiecewiseCoefficient::indicator(arc), n);
    let outside = multiplication_operator(&PiecewiseCoefficient::complement_indicator(arc), n);
    let (left, right) = match side {
        CutSide::Plus => (&inside, &inside),
        CutSide::Minus => (&outside, &outside),
        CutSide::Cross => (&inside, &outside),
    };
    let mut out = left.compose(p)?.compose(right)?;
    if side != CutSide::Cross && p.is_hermitian() {
        out = out.certify_hermitian()?;
    }
    Ok(out)
}
