//! Special functions and quadrature kernels for the Green's-tensor integrals.

mod bessel;
mod quadrature;

pub use bessel::{bessel_j, bessel_j012};
pub use quadrature::{
    integrate_evanescent, integrate_evanescent_partitioned, integrate_finite,
    integrate_partitioned, Estimate, QuadResult, QuadValue, QuadratureError, QuadratureSpec,
};
