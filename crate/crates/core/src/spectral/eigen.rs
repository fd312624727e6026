use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use super::spectrum::SingularSpectrum;
use crate::circle_ops::TruncatedOperator;
use crate::error::{Error, Result};

/// Relative trace-consistency tolerance per dimension.
const TRACE_TOLERANCE: f64 = 1e-9;

fn solver_err(e: impl std::fmt::Debug) -> Error {
    Error::SolverFailure(format!("{e:?}"))
}

fn ensure_hermitian(q: &TruncatedOperator) -> Result<std::borrow::Cow<'_, TruncatedOperator>> {
    if q.is_hermitian() {
        Ok(std::borrow::Cow::Borrowed(q))
    } else {
        Ok(std::borrow::Cow::Owned(q.clone().certify_hermitian()?))
    }
}

fn trace(q: &TruncatedOperator) -> f64 {
    if let Some(r) = q.real_form() {
        return (0..r.nrows()).map(|i| r[(i, i)]).sum();
    }
    let c = q.cutoff() as i64;
    (-c..=c).map(|m| q.entry(m, m).re).sum()
}

fn sort_descending(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

/// Eigenvalues of a Hermitian operator, descending.
///
/// Diagonal operators are read off directly; operators commuting with the
/// mode-reflection conjugation are solved as real symmetric matrices; the
/// rest go through the complex Hermitian solver. Every solve is checked for
/// trace consistency.
pub fn hermitian_eigenvalues(q: &TruncatedOperator) -> Result<Vec<f64>> {
    let q = ensure_hermitian(q)?;
    let mut ev = if let Some(d) = q.diagonal() {
        d.iter().map(|z| z.re).collect::<Vec<_>>()
    } else if let Some(r) = q.to_real_form() {
        r.self_adjoint_eigenvalues(Side::Lower).map_err(solver_err)?
    } else {
        q.to_dense()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(solver_err)?
    };
    if ev.iter().any(|x| !x.is_finite()) {
        return Err(Error::SolverFailure("non-finite eigenvalue".into()));
    }
    sort_descending(&mut ev);
    let norm = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let defect = (ev.iter().sum::<f64>() - trace(&q)).abs();
    let allowed = TRACE_TOLERANCE * norm * ev.len() as f64;
    if defect > allowed.max(f64::MIN_POSITIVE) {
        return Err(Error::SolverFailure(format!(
            "trace consistency failed: defect {defect:e} > {allowed:e}"
        )));
    }
    Ok(ev)
}

/// Eigenvalues (descending) with orthonormal eigenvectors as columns, in the
/// exponential basis.
pub fn hermitian_eigenpairs(q: &TruncatedOperator) -> Result<(Vec<f64>, Mat<C64>)> {
    let q = ensure_hermitian(q)?;
    let a = q.to_dense();
    let evd = a.self_adjoint_eigen(Side::Lower).map_err(solver_err)?;
    let n = a.nrows();
    let s = evd.S().column_vector();
    let u = evd.U();
    // faer returns ascending order; flip to descending.
    let values = (0..n).map(|k| s[n - 1 - k].re).collect();
    let vectors = Mat::from_fn(n, n, |i, k| u[(i, n - 1 - k)]);
    Ok((values, vectors))
}

/// Singular values, descending.
///
/// Hermitian operators use `|eigenvalues|`; others a direct SVD, in the real
/// basis when available. Both keep relative accuracy near `eps * s_1` in the
/// tail, which squaring through `T*T` would lose.
pub fn singular_values(t: &TruncatedOperator) -> Result<SingularSpectrum> {
    let n = t.cutoff();
    let values = if let Some(d) = t.diagonal() {
        d.iter().map(|z| z.norm()).collect()
    } else if t.is_hermitian() {
        hermitian_eigenvalues(t)?.iter().map(|x| x.abs()).collect()
    } else if let Some(r) = t.to_real_form() {
        r.singular_values().map_err(solver_err)?
    } else {
        t.to_dense().singular_values().map_err(solver_err)?
    };
    SingularSpectrum::from_unsorted(values, n)
}

/// Singular values as square roots of the eigenvalues of `T*T`, clamped at 0.
pub fn singular_values_via_gram(t: &TruncatedOperator) -> Result<SingularSpectrum> {
    let gram = t.adjoint().compose(t)?.certify_hermitian()?;
    let values = hermitian_eigenvalues(&gram)?
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    SingularSpectrum::from_unsorted(values, t.cutoff())
}
