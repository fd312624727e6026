//! Boundary reduction of resolvent differences on the disk.
//!
//! With `K` the Poisson operator, `P = P_ntd` and `B` multiplication by `b`,
//! the Robin resolvent minus the Dirichlet resolvent is `K P (BP - 1)^{-1} K*`.
//! Any such `K M K*` has the same nonzero s-numbers as `T = P2 M P2`, where
//! `P2 = (K*K)^{1/2}`: both `(KMK*)*(KMK*)` and `T*T = P2 M* P1 M P2` are
//! cyclic rearrangements of `M* P1 M P1`.

use serde::{Deserialize, Serialize};

use crate::circle_ops::{PiecewiseCoefficient, TruncatedOperator, multiplication_operator};
use crate::disk_model::{BoundaryOperators, DiskParameters, build_boundary_operators};
use crate::error::{Error, Result};
use crate::spectral::{SingularSpectrum, singular_values};

/// Default norm guard for the Neumann series.
pub const DEFAULT_SERIES_DELTA: f64 = 0.9;

/// Series partial sums stop once the increment has Frobenius norm below this.
pub const SERIES_TOLERANCE: f64 = 1e-12;

/// Largest 1-norm condition number accepted by the direct solve.
pub const MAX_CONDITION: f64 = 1e12;

const MAX_SERIES_TERMS: usize = 100_000;

/// Relative asymmetry tolerated in a reduced factor before it is
/// symmetrized; solver rounding in `(BP - 1)^{-1}` stays far below this.
const FACTOR_SYMMETRY_TOLERANCE: f64 = 1e-9;

/// How `(BP - 1)^{-1}` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InverseMethod {
    /// LU solve, refused above [`MAX_CONDITION`].
    Direct,
    /// `-(1 + BP + (BP)^2 + ...)`, refused when `||BP|| > delta`.
    NeumannSeries { delta: f64 },
}

impl InverseMethod {
    pub fn series() -> Self {
        Self::NeumannSeries {
            delta: DEFAULT_SERIES_DELTA,
        }
    }
}

/// Which part of the Robin pair difference is reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairVariant {
    /// `M = P[(B1 P - 1)^{-1} - (B2 P - 1)^{-1}]`.
    Full,
    /// `M = P (B2 - B1) P`, the principal term.
    Leading,
}

/// Disk boundary operators at one `(κ, N)`, shared by every reduction.
#[derive(Debug, Clone)]
pub struct KreinModel {
    params: DiskParameters,
    ops: BoundaryOperators,
}

impl KreinModel {
    pub fn new(params: &DiskParameters) -> Result<Self> {
        Ok(Self {
            params: *params,
            ops: build_boundary_operators(params)?,
        })
    }

    pub fn params(&self) -> &DiskParameters {
        &self.params
    }

    pub fn operators(&self) -> &BoundaryOperators {
        &self.ops
    }

    /// `B P_ntd` for the coefficient `b`.
    pub fn coupling(&self, b: &PiecewiseCoefficient) -> Result<TruncatedOperator> {
        multiplication_operator(b, self.params.cutoff()).compose(&self.ops.ntd)
    }

    /// `(B P_ntd - 1)^{-1}`.
    pub fn robin_boundary_inverse(
        &self,
        b: &PiecewiseCoefficient,
        method: InverseMethod,
    ) -> Result<TruncatedOperator> {
        let n = self.params.cutoff();
        let bp = self.coupling(b)?;
        match method {
            InverseMethod::Direct => {
                let a = bp.sub(&TruncatedOperator::identity(n))?;
                let (inv, cond) = a.inverse_with_condition()?;
                if cond >= MAX_CONDITION {
                    return Err(Error::IllConditioned(cond));
                }
                Ok(inv.with_order(0.0))
            }
            InverseMethod::NeumannSeries { delta } => {
                if !(delta > 0.0 && delta < 1.0) {
                    return Err(Error::Domain(format!("series guard {delta} must lie in (0, 1)")));
                }
                let norm = bp.operator_norm()?;
                if norm > delta {
                    return Err(Error::SeriesDivergence { norm, delta });
                }
                let mut term = TruncatedOperator::identity(n);
                let mut sum = term.clone();
                for _ in 0..MAX_SERIES_TERMS {
                    term = term.compose(&bp)?;
                    sum = sum.add(&term)?;
                    if term.frobenius_norm() < SERIES_TOLERANCE {
                        return Ok(sum.scale((-1.0).into()).with_order(0.0));
                    }
                }
                Err(Error::SeriesDivergence { norm, delta })
            }
        }
    }

    /// `T = P2 M P2`, whose singular values are the s-numbers of `K M K*`.
    ///
    /// When `M` is Hermitian up to solver rounding, `T` is returned
    /// symmetrized and flagged Hermitian.
    pub fn reduced_factor(&self, m: &TruncatedOperator) -> Result<TruncatedOperator> {
        let p2 = &self.ops.p2;
        let t = TruncatedOperator::compose_all(&[p2, m, p2])?;
        if t.is_hermitian() {
            return Ok(t);
        }
        let scale = t.frobenius_norm();
        let defect = t.hermitian_defect();
        if defect <= FACTOR_SYMMETRY_TOLERANCE * scale {
            let sym = t.add(&t.adjoint())?.scale(0.5.into());
            return sym.certify_hermitian();
        }
        Ok(t)
    }

    /// `Q = P2 M* P1 M P2`; `λ_j(Q) = s_j(K M K*)^2`.
    pub fn snumber_reduction(&self, m: &TruncatedOperator) -> Result<TruncatedOperator> {
        let t = TruncatedOperator::compose_all(&[&self.ops.p2, m, &self.ops.p2])?;
        t.adjoint().compose(&t)?.certify_hermitian()
    }

    /// s-numbers of `K M K*`, computed from the reduced factor.
    pub fn snumbers(&self, m: &TruncatedOperator) -> Result<SingularSpectrum> {
        singular_values(&self.reduced_factor(m)?)
    }

    /// Kernel `M = -P_ntd` of the Neumann minus Dirichlet resolvent.
    pub fn neumann_dirichlet_kernel(&self) -> TruncatedOperator {
        self.ops.ntd.scale((-1.0).into())
    }

    pub fn neumann_dirichlet_reduced(&self) -> Result<TruncatedOperator> {
        self.snumber_reduction(&self.neumann_dirichlet_kernel())
    }

    /// Kernel `M` of the Robin pair difference `(A1 - λ)^{-1} - (A2 - λ)^{-1}`.
    pub fn robin_pair_kernel(
        &self,
        b1: &PiecewiseCoefficient,
        b2: &PiecewiseCoefficient,
        variant: PairVariant,
        method: InverseMethod,
    ) -> Result<TruncatedOperator> {
        let ntd = &self.ops.ntd;
        match variant {
            PairVariant::Full => {
                let r1 = self.robin_boundary_inverse(b1, method)?;
                let r2 = self.robin_boundary_inverse(b2, method)?;
                ntd.compose(&r1.sub(&r2)?)
            }
            PairVariant::Leading => {
                let db = multiplication_operator(&b2.sub(b1), self.params.cutoff());
                TruncatedOperator::compose_all(&[ntd, &db, ntd])
            }
        }
    }

    pub fn robin_pair_difference_reduced(
        &self,
        b1: &PiecewiseCoefficient,
        b2: &PiecewiseCoefficient,
        variant: PairVariant,
        method: InverseMethod,
    ) -> Result<TruncatedOperator> {
        self.snumber_reduction(&self.robin_pair_kernel(b1, b2, variant, method)?)
    }

    /// s-numbers of the Robin pair difference.
    pub fn robin_pair_snumbers(
        &self,
        b1: &PiecewiseCoefficient,
        b2: &PiecewiseCoefficient,
        variant: PairVariant,
        method: InverseMethod,
    ) -> Result<SingularSpectrum> {
        self.snumbers(&self.robin_pair_kernel(b1, b2, variant, method)?)
    }
}

pub fn robin_boundary_inverse(
    b: &PiecewiseCoefficient,
    p: &DiskParameters,
    method: InverseMethod,
) -> Result<TruncatedOperator> {
    KreinModel::new(p)?.robin_boundary_inverse(b, method)
}

/// `Q = P2 M* P1 M P2` for a boundary kernel `M`.
pub fn snumber_reduction(m: &TruncatedOperator, p: &DiskParameters) -> Result<TruncatedOperator> {
    if m.cutoff() != p.cutoff() {
        return Err(Error::DimensionMismatch {
            left: m.cutoff(),
            right: p.cutoff(),
        });
    }
    KreinModel::new(p)?.snumber_reduction(m)
}

pub fn neumann_dirichlet_reduced(p: &DiskParameters) -> Result<TruncatedOperator> {
    KreinModel::new(p)?.neumann_dirichlet_reduced()
}

pub fn robin_pair_difference_reduced(
    b1: &PiecewiseCoefficient,
    b2: &PiecewiseCoefficient,
    p: &DiskParameters,
    variant: PairVariant,
) -> Result<TruncatedOperator> {
    KreinModel::new(p)?.robin_pair_difference_reduced(b1, b2, variant, InverseMethod::Direct)
}
