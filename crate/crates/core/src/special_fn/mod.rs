//! Special-function substrate for the disk model: modified Bessel functions
//! of integer order and Gauss–Legendre quadrature.

mod bessel;
mod quadrature;

pub use bessel::{
    BesselI, DEFAULT_MAX_ORDER, bessel_i, bessel_i_prime, bessel_i_ratio, bessel_i_scaled,
    ln_bessel_i,
};
pub use quadrature::{Certified, MAX_NODES, QuadratureRule, gauss_legendre, integrate_adaptive};
