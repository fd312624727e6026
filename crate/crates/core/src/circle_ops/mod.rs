//! Operator algebra on the truncated Fourier basis of the unit circle.
//!
//! Angles are carried in turns (`theta = 2 pi t`) so that the common jump
//! points `0, 1/4, 1/2, 3/4` produce exact phases.

mod arc;
mod coefficient;
mod operator;
mod real_basis;
mod trig;

pub use arc::{Arc, mode_phase, turn_phase, wrap_turn};
pub use coefficient::{PiecewiseCoefficient, fourier_coefficient, fourier_coefficients};
pub use operator::{
    CutSide, HERMITIAN_TOLERANCE, TruncatedOperator, diagonal_multiplier, indicator_cut,
    multiplication_operator, real_multiplier,
};
pub use real_basis::{complex_form, real_form_fn, real_index_mode};
pub use trig::TrigPoly;
