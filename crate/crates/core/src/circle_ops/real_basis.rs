//! Real cosine/sine basis of the truncated span.
//!
//! Column `0` is `e_0`; for `m >= 1`, column `2m-1` is `(e_m + e_{-m})/√2`
//! and column `2m` is `i(e_m - e_{-m})/√2`. An operator `A` commuting with
//! `(Jx)_m = conj(x_{-m})`, i.e. `A_{-m,-m'} = conj(A_{m,m'})`, has a real
//! matrix `R = U* A U` in this basis. Real coefficients and even real
//! multipliers all have this property.

use faer::Mat;
use num_complex::Complex64 as C64;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `(real index, U[a, p])` pairs for the mode at position `i`.
#[inline]
pub(crate) fn row_support(i: usize, cutoff: usize) -> ([(usize, C64); 2], usize) {
    let z = C64::new(0.0, 0.0);
    if i == cutoff {
        return ([(0, C64::new(1.0, 0.0)), (0, z)], 1);
    }
    if i > cutoff {
        let m = i - cutoff;
        ([(2 * m - 1, C64::new(H, 0.0)), (2 * m, C64::new(0.0, H))], 2)
    } else {
        let m = cutoff - i;
        ([(2 * m - 1, C64::new(H, 0.0)), (2 * m, C64::new(0.0, -H))], 2)
    }
}

/// `(mode position, U[a, p])` pairs for real basis column `p`.
#[inline]
pub(crate) fn column_support(p: usize, cutoff: usize) -> ([(usize, C64); 2], usize) {
    let z = C64::new(0.0, 0.0);
    if p == 0 {
        return ([(cutoff, C64::new(1.0, 0.0)), (cutoff, z)], 1);
    }
    let m = p.div_ceil(2);
    if p % 2 == 1 {
        ([(cutoff + m, C64::new(H, 0.0)), (cutoff - m, C64::new(H, 0.0))], 2)
    } else {
        ([(cutoff + m, C64::new(0.0, H)), (cutoff - m, C64::new(0.0, -H))], 2)
    }
}

/// Mode magnitude `|m|` carried by real basis index `p`.
#[inline]
pub fn real_index_mode(p: usize) -> usize {
    p.div_ceil(2)
}

/// `max |A_{-m,-m'} - conj(A_{m,m'})|`.
pub fn j_symmetry_defect_fn(n: usize, entry: impl Fn(usize, usize) -> C64) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            worst = worst.max((entry(n - 1 - i, n - 1 - j) - entry(i, j).conj()).norm());
        }
    }
    worst
}

/// `Re(U* A U)` for a matrix given entrywise by position.
pub fn real_form_fn(cutoff: usize, entry: impl Fn(usize, usize) -> C64) -> Mat<f64> {
    let n = 2 * cutoff + 1;
    Mat::from_fn(n, n, |p, q| {
        let (cp, lp) = column_support(p, cutoff);
        let (cq, lq) = column_support(q, cutoff);
        let mut acc = 0.0;
        for &(a, u) in &cp[..lp] {
            for &(b, v) in &cq[..lq] {
                acc += (u.conj() * entry(a, b) * v).re;
            }
        }
        acc
    })
}

/// `U R U*` as a complex matrix.
pub fn complex_form(cutoff: usize, r: &Mat<f64>) -> Mat<C64> {
    let n = 2 * cutoff + 1;
    Mat::from_fn(n, n, |a, b| complex_entry(cutoff, r, a, b))
}

#[inline]
pub(crate) fn complex_entry(cutoff: usize, r: &Mat<f64>, a: usize, b: usize) -> C64 {
    let (ra, la) = row_support(a, cutoff);
    let (rb, lb) = row_support(b, cutoff);
    let mut acc = C64::new(0.0, 0.0);
    for &(p, u) in &ra[..la] {
        for &(q, v) in &rb[..lb] {
            acc += u * r[(p, q)] * v.conj();
        }
    }
    acc
}
