//! Closed-form and numerical solutions of the master equation restricted to
//! `{ρ₁₁, ρ₂₂, ρ₃₃, ρ₂₃, ρ₃₂, ρ₄₄}`:
//!
//! ```text
//! ρ̇₁₁ = −2Γ ρ₁₁
//! ρ̇₂₂ = −iΩ(ρ₃₂ − ρ₂₃) + Γ(ρ₁₁ − ρ₂₂) − (Γ₁₂/2)(ρ₂₃ + ρ₃₂)
//! ρ̇₃₃ = −iΩ(ρ₂₃ − ρ₃₂) + Γ(ρ₁₁ − ρ₃₃) − (Γ₁₂/2)(ρ₂₃ + ρ₃₂)
//! ρ̇₂₃ = −iΩ(ρ₃₃ − ρ₂₂) − Γ ρ₂₃ + (Γ₁₂/2)(2ρ₁₁ − ρ₂₂ − ρ₃₃)
//! ρ̇₃₂ = −iΩ(ρ₂₂ − ρ₃₃) − Γ ρ₃₂ + (Γ₁₂/2)(2ρ₁₁ − ρ₂₂ − ρ₃₃)
//! ρ̇₄₄ = Γ(ρ₂₂ + ρ₃₃) + Γ₁₂(ρ₂₃ + ρ₃₂)
//! ```
//!
//! with `Ω = Ω₁₂` an angular frequency and time in units of `1/Γ₀`.

use num_complex::Complex64;

use super::state::TwoQubitState;
use super::CollectiveRates;
use crate::error::{Error, Result};

/// Entries outside the sector above this magnitude are rejected.
pub const SECTOR_TOLERANCE: f64 = 1e-12;
/// Richardson bound on the step-halving difference, per unit of `Γ₀t`.
pub const STEP_ERROR_PER_TIME: f64 = 1e-9;
const MAX_STEPS_PER_INTERVAL: usize = 1 << 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `[ρ₁₁, ρ₂₂, ρ₃₃, ρ₂₃, ρ₃₂, ρ₄₄]`
type Sector = [Complex64; 6];

/// State at `Γ₀t` for the initial state `|eg⟩⟨eg|`.
pub fn evolve_analytical(rates: impl Into<CollectiveRates>, t_scaled: f64) -> Result<TwoQubitState> {
    let rates = rates.into();
    if !(t_scaled >= 0.0) || !t_scaled.is_finite() {
        return Err(Error::invalid(format!(
            "time must be finite and non-negative, got {t_scaled}"
        )));
    }
    Ok(analytical_unchecked(&rates, t_scaled))
}

pub(crate) fn analytical_unchecked(rates: &CollectiveRates, t: f64) -> TwoQubitState {
    let g = rates.gamma;
    let g12 = rates.gamma_cross;
    let slow = (-(g - g12) * t).exp();
    let fast = (-(g + g12) * t).exp();
    let envelope = (-g * t).exp();
    let (sin, cos) = (2.0 * rates.omega_cross * t).sin_cos();

    let phi_plus = 0.5 * (slow + fast);
    let phi_minus = cos * envelope;
    let psi_plus = -0.5 * (slow - fast);
    let psi_minus = Complex64::new(0.0, sin * envelope);

    let mut m = [[ZERO; 4]; 4];
    m[1][1] = Complex64::new(0.5 * (phi_plus + phi_minus), 0.0);
    m[2][2] = Complex64::new(0.5 * (phi_plus - phi_minus), 0.0);
    m[1][2] = 0.5 * (psi_plus + psi_minus);
    m[2][1] = 0.5 * (psi_plus - psi_minus);
    m[3][3] = Complex64::new(1.0 - phi_plus, 0.0);
    TwoQubitState::from_unchecked(m)
}

fn derivative(r: &CollectiveRates, y: &Sector) -> Sector {
    let [r11, r22, r33, r23, r32, _] = *y;
    let (g, g12, w) = (r.gamma, r.gamma_cross, r.omega_cross);
    let coh = r23 + r32;
    let feed = 2.0 * r11 - r22 - r33;
    [
        -2.0 * g * r11,
        -I * w * (r32 - r23) + g * (r11 - r22) - 0.5 * g12 * coh,
        -I * w * (r23 - r32) + g * (r11 - r33) - 0.5 * g12 * coh,
        -I * w * (r33 - r22) - g * r23 + 0.5 * g12 * feed,
        -I * w * (r22 - r33) - g * r32 + 0.5 * g12 * feed,
        g * (r22 + r33) + g12 * coh,
    ]
}

fn axpy(y: &Sector, h: f64, k: &Sector) -> Sector {
    std::array::from_fn(|i| y[i] + h * k[i])
}

fn rk4_step(r: &CollectiveRates, y: &Sector, h: f64) -> Sector {
    let k1 = derivative(r, y);
    let k2 = derivative(r, &axpy(y, 0.5 * h, &k1));
    let k3 = derivative(r, &axpy(y, 0.5 * h, &k2));
    let k4 = derivative(r, &axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn integrate(r: &CollectiveRates, y: &Sector, span: f64, steps: usize) -> Sector {
    let h = span / steps as f64;
    let mut out = *y;
    for _ in 0..steps {
        out = rk4_step(r, &out, h);
    }
    out
}

/// Base step `min(0.01, 0.1 / max(Γ + |Γ₁₂|, 2|Ω₁₂|))`.
pub fn base_step(rates: &CollectiveRates) -> f64 {
    let fastest = (rates.gamma + rates.gamma_cross.abs()).max(2.0 * rates.omega_cross.abs());
    if fastest > 0.0 {
        0.01_f64.min(0.1 / fastest)
    } else {
        0.01
    }
}

/// Propagates `initial` with classical fourth-order Runge–Kutta and returns the
/// state at every point of `t_grid` (units of `1/Γ₀`, strictly increasing,
/// starting at or after 0). Each interval is integrated with `n` and `2n`
/// equal steps; `n` doubles until the two agree to
/// [`STEP_ERROR_PER_TIME`] times the interval length, and the finer result is
/// kept.
pub fn evolve_numerical(
    rates: impl Into<CollectiveRates>,
    initial: &TwoQubitState,
    t_grid: &[f64],
) -> Result<Vec<TwoQubitState>> {
    let rates = rates.into();
    TwoQubitState::new(*initial.matrix())?;
    check_sector(initial)?;
    check_grid(t_grid)?;

    let m = initial.matrix();
    let mut y: Sector = [m[0][0], m[1][1], m[2][2], m[1][2], m[2][1], m[3][3]];
    let h = base_step(&rates);
    let mut t = 0.0;
    let mut out = Vec::with_capacity(t_grid.len());
    for &target in t_grid {
        let span = target - t;
        if span > 0.0 {
            let mut n = ((span / h).ceil() as usize).max(1);
            loop {
                if 2 * n > MAX_STEPS_PER_INTERVAL {
                    return Err(Error::StepControl {
                        t_start: t,
                        t_end: target,
                    });
                }
                let coarse = integrate(&rates, &y, span, n);
                let fine = integrate(&rates, &y, span, 2 * n);
                let diff = coarse
                    .iter()
                    .zip(&fine)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                if diff <= STEP_ERROR_PER_TIME * span {
                    y = fine;
                    break;
                }
                n *= 2;
            }
        }
        t = target;
        out.push(TwoQubitState::new(assemble(&y))?);
    }
    Ok(out)
}

fn assemble(y: &Sector) -> [[Complex64; 4]; 4] {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = y[0];
    m[1][1] = y[1];
    m[2][2] = y[2];
    m[1][2] = y[3];
    m[2][1] = y[4];
    m[3][3] = y[5];
    m
}

fn check_sector(state: &TwoQubitState) -> Result<()> {
    let m = state.matrix();
    for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)] {
        let c = m[i][j].norm().max(m[j][i].norm());
        if c > SECTOR_TOLERANCE {
            return Err(Error::OutsideSector(format!(
                "|ρ[{i}][{j}]| = {c:e}; only ρ₁₁, ρ₂₂, ρ₃₃, ρ₂₃, ρ₃₂, ρ₄₄ are propagated"
            )));
        }
    }
    Ok(())
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if let Some(&first) = t_grid.first() {
        if !(first >= 0.0) {
            return Err(Error::invalid(format!("time grid must start at or after 0, got {first}")));
        }
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("time grid contains non-finite values"));
    }
    if let Some(w) = t_grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::invalid(format!(
            "time grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}
