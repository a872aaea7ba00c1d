//! Collective decay, dipole–dipole coupling and steady-state entanglement of
//! two two-level emitters held at equal height above a planar medium.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`media`]: permittivity models and Fresnel coefficients.
//! 2. [`greens`]: free and scattering dyadic Green's tensors, contracted into
//!    the rates `Γ`, `Γ₁₂` and the coherent coupling `Ω₁₂` (all in units of the
//!    free-space rate `Γ₀`).
//! 3. [`dynamics`]: the two-qubit master equation, its closed-form solution
//!    from `|eg⟩`, a numerical propagator and the Wootters concurrence.
//! 4. [`sweeps`]: grids, time traces and the optimal-height search.
//!
//! Diagonal Casimir–Polder level shifts are equal on both emitters for this
//! geometry and drop out of every quantity computed here, so they are not
//! evaluated.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod greens;
pub mod media;
pub mod numerics;
pub mod sweeps;

pub use error::{Error, Result};
