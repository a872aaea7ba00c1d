//! Two-emitter master-equation dynamics, concurrence and steady states.
//!
//! Equal Casimir–Polder shifts of both emitters commute with every term of
//! the propagated sector and are omitted.

mod concurrence;
mod evolve;
mod linalg;
mod state;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::{CouplingSet, Split, LINDBLAD_TOLERANCE};

pub use concurrence::concurrence;
pub use evolve::{
    base_step, evolve_analytical, evolve_numerical, SECTOR_TOLERANCE, STEP_ERROR_PER_TIME,
};
pub use state::{
    SymmetricAntisymmetricView, TwoQubitState, BASIS, HERMITICITY_TOLERANCE,
    POSITIVITY_TOLERANCE, TRACE_TOLERANCE,
};

/// Default bound on `|D|` (units of `Γ₀`) below which the subradiant
/// population counts as steady.
pub const DEFAULT_STEADY_THRESHOLD: f64 = 1e-6;

/// `Γ`, `Γ₁₂` and `Ω₁₂` in units of `Γ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollectiveRates {
    pub gamma: f64,
    pub gamma_cross: f64,
    pub omega_cross: f64,
}

impl CollectiveRates {
    pub fn new(gamma: f64, gamma_cross: f64, omega_cross: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma_cross.is_finite() && omega_cross.is_finite()) {
            return Err(Error::invalid("rates must be finite"));
        }
        if gamma < 0.0 {
            return Err(Error::invalid(format!("Γ must be non-negative, got {gamma}")));
        }
        if gamma_cross.abs() > gamma + LINDBLAD_TOLERANCE {
            return Err(Error::LindbladViolation {
                gamma_self: gamma,
                gamma_cross,
            });
        }
        Ok(Self {
            gamma,
            gamma_cross,
            omega_cross,
        })
    }

    pub fn relative_decay(&self) -> f64 {
        self.gamma - self.gamma_cross
    }
}

impl From<CouplingSet> for CollectiveRates {
    fn from(c: CouplingSet) -> Self {
        Self {
            gamma: c.gamma(),
            gamma_cross: c.gamma_12(),
            omega_cross: c.omega_12(),
        }
    }
}

impl From<&CouplingSet> for CollectiveRates {
    fn from(c: &CouplingSet) -> Self {
        (*c).into()
    }
}

/// `D = Γ − Γ₁₂` with its free and scattering parts.
pub fn relative_decay(couplings: &CouplingSet) -> Split {
    couplings.relative_decay()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteadyFlag {
    /// `|D|` below threshold: half the population is trapped in the
    /// subradiant state.
    EntangledSteady,
    /// Everything decays to `|gg⟩`.
    TrivialGround,
}

/// Long-time state reached from `|eg⟩`, with the default threshold.
pub fn steady_state(rates: impl Into<CollectiveRates>) -> (TwoQubitState, SteadyFlag) {
    steady_state_with_threshold(rates, DEFAULT_STEADY_THRESHOLD)
}

pub fn steady_state_with_threshold(
    rates: impl Into<CollectiveRates>,
    threshold: f64,
) -> (TwoQubitState, SteadyFlag) {
    let rates = rates.into();
    if rates.relative_decay().abs() <= threshold {
        (TwoQubitState::steady_entangled(), SteadyFlag::EntangledSteady)
    } else {
        (TwoQubitState::ground(), SteadyFlag::TrivialGround)
    }
}
