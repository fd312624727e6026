//! Eigenvalues, singular values, counting functions and power-law tail fits.

mod eigen;
mod fit;
mod spectrum;

pub use eigen::{hermitian_eigenpairs, hermitian_eigenvalues, singular_values, singular_values_via_gram};
pub use fit::{
    AsymptoticFit, DecayFit, FitWindow, MAX_RESIDUAL, MIN_J_LO, decay_exponent_fit, tail_fit,
    window_sup,
};
pub use spectrum::{SingularSpectrum, counting_function};
