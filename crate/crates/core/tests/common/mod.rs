//! Random matrices and matrix-identity probes shared by integration tests.
#![allow(dead_code)]

use faer::Mat;
use faer::linalg::solvers::Solve;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robinlab::circle_ops::TruncatedOperator;
use robinlab::spectral::{hermitian_eigenvalues, singular_values};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mat(n: usize, rng: &mut ChaCha8Rng) -> Mat<C64> {
    let mut a = Mat::<C64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            a[(i, j)] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    a
}

pub fn random_hermitian_mat(n: usize, rng: &mut ChaCha8Rng) -> Mat<C64> {
    let a = random_mat(n, rng);
    Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

pub fn random_operator(cutoff: usize, rng: &mut ChaCha8Rng) -> TruncatedOperator {
    TruncatedOperator::from_dense(cutoff, random_mat(2 * cutoff + 1, rng)).unwrap()
}

fn svals(t: &TruncatedOperator) -> Vec<f64> {
    singular_values(t).unwrap().values().to_vec()
}

/// Largest violation (positive means broken) of
/// `s_{j+k-1}(T+T') <= s_j(T) + s_k(T')` and
/// `s_{j+k-1}(TT') <= s_j(T) s_k(T')`, relative to the scale of the data.
pub fn ky_fan_violation(t: &TruncatedOperator, t2: &TruncatedOperator) -> f64 {
    let a = svals(t);
    let b = svals(t2);
    let sum = svals(&t.add(t2).unwrap());
    let prod = svals(&t.compose(t2).unwrap());
    let n = a.len();
    let scale_sum = a[0] + b[0];
    let scale_prod = a[0] * b[0];
    let mut worst = f64::NEG_INFINITY;
    for j in 0..n {
        for k in 0..n - j {
            let i = j + k;
            worst = worst.max((sum[i] - a[j] - b[k]) / scale_sum);
            worst = worst.max((prod[i] - a[j] * b[k]) / scale_prod);
        }
    }
    worst
}

/// Largest relative violation of `s_j(A T B) <= ||A|| s_j(T) ||B||`.
pub fn conjugation_violation(
    a: &TruncatedOperator,
    t: &TruncatedOperator,
    b: &TruncatedOperator,
) -> f64 {
    let bound = a.operator_norm().unwrap() * b.operator_norm().unwrap();
    let st = svals(t);
    let sabt = svals(&TruncatedOperator::compose_all(&[a, t, b]).unwrap());
    st.iter()
        .zip(&sabt)
        .map(|(s, x)| (x - bound * s) / (bound * st[0]))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn inverse(a: &Mat<C64>) -> Mat<C64> {
    a.partial_piv_lu().solve(Mat::<C64>::identity(a.nrows(), a.ncols()))
}

fn shifted_inverse(a: &Mat<C64>, z: C64) -> Mat<C64> {
    let n = a.nrows();
    inverse(&Mat::from_fn(n, n, |i, j| if i == j { a[(i, j)] - z } else { a[(i, j)] }))
}

/// Relative residual of the refined resolvent identity
/// `R_S(λ') - R_T(λ') = (1 + (λ'-λ) R_T(λ')) (R_S(λ) - R_T(λ)) (1 + (λ'-λ) R_S(λ'))`.
pub fn resolvent_identity_residual(s: &Mat<C64>, t: &Mat<C64>, lambda: C64, lambda2: C64) -> f64 {
    let n = s.nrows();
    let id = Mat::<C64>::identity(n, n);
    let rs2 = shifted_inverse(s, lambda2);
    let rt2 = shifted_inverse(t, lambda2);
    let diff = &shifted_inverse(s, lambda) - &shifted_inverse(t, lambda);
    let shift = lambda2 - lambda;
    let left = &id + &rt2 * faer::Scale(shift);
    let right = &id + &rs2 * faer::Scale(shift);
    let lhs = &rs2 - &rt2;
    let rhs = &(&left * &diff) * &right;
    (&lhs - &rhs).norm_l2() / lhs.norm_l2().max(f64::MIN_POSITIVE)
}

/// Largest eigenvalue gap between `P2 M* P1 M P2` and `P1^{1/2} M P1 M* P1^{1/2}`
/// for a positive diagonal `P1`, relative to the top eigenvalue.
pub fn cycling_defect(m: &TruncatedOperator, p1_diag: &[f64]) -> f64 {
    let n = m.cutoff();
    let p1 = TruncatedOperator::from_real_diagonal(n, p1_diag).unwrap();
    let sqrt: Vec<f64> = p1_diag.iter().map(|x| x.sqrt()).collect();
    let p2 = TruncatedOperator::from_real_diagonal(n, &sqrt).unwrap();
    let ma = m.adjoint();
    let q = TruncatedOperator::compose_all(&[&p2, &ma, &p1, m, &p2]).unwrap();
    let q2 = TruncatedOperator::compose_all(&[&p2, m, &p1, &ma, &p2]).unwrap();
    let a = hermitian_eigenvalues(&q.certify_hermitian().unwrap()).unwrap();
    let b = hermitian_eigenvalues(&q2.certify_hermitian().unwrap()).unwrap();
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / a[0])
        .fold(0.0, f64::max)
}
