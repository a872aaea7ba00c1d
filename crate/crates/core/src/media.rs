//! Half-space media: permittivity models and Fresnel reflection coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::*;
use crate::error::{Error, Result};

/// The medium filling the lower half-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceModel {
    FreeSpace,
    PerfectConductor,
    /// `ε = 1 − ω_p² / (ω² + iωγ)`; both rates in rad/s.
    Drude { plasma_frequency: f64, loss_rate: f64 },
    /// Two-fluid London superconductor.
    Superconductor {
        /// K
        critical_temperature: f64,
        /// K
        temperature: f64,
        /// London penetration depth at zero temperature, m
        london_length_zero: f64,
        /// Normal-fluid conductivity, S/m
        conductivity: f64,
    },
}

impl SurfaceModel {
    pub fn gold() -> Self {
        SurfaceModel::Drude {
            plasma_frequency: GOLD_PLASMA_FREQUENCY,
            loss_rate: GOLD_LOSS_RATE,
        }
    }

    /// Niobium at `reduced_temperature = T / T_c`.
    pub fn niobium(reduced_temperature: f64) -> Self {
        SurfaceModel::Superconductor {
            critical_temperature: NIOBIUM_CRITICAL_TEMPERATURE,
            temperature: reduced_temperature * NIOBIUM_CRITICAL_TEMPERATURE,
            london_length_zero: NIOBIUM_LONDON_LENGTH,
            conductivity: NIOBIUM_CONDUCTIVITY,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceModel::FreeSpace => "free",
            SurfaceModel::PerfectConductor => "perfect",
            SurfaceModel::Drude { .. } => "drude",
            SurfaceModel::Superconductor { .. } => "superconductor",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SurfaceModel::FreeSpace | SurfaceModel::PerfectConductor => Ok(()),
            SurfaceModel::Drude {
                plasma_frequency,
                loss_rate,
            } => {
                if !(plasma_frequency > 0.0 && plasma_frequency.is_finite()) {
                    return Err(Error::invalid(format!(
                        "Drude plasma frequency must be positive, got {plasma_frequency}"
                    )));
                }
                if !(loss_rate >= 0.0 && loss_rate.is_finite()) {
                    return Err(Error::invalid(format!(
                        "Drude loss rate must be non-negative, got {loss_rate}"
                    )));
                }
                Ok(())
            }
            SurfaceModel::Superconductor {
                critical_temperature,
                temperature,
                london_length_zero,
                conductivity,
            } => {
                if !(temperature > 0.0 && temperature < critical_temperature) {
                    return Err(Error::invalid(format!(
                        "superconductor needs 0 < T < T_c, got T = {temperature}, T_c = {critical_temperature}"
                    )));
                }
                if !(london_length_zero > 0.0) || !london_length_zero.is_finite() {
                    return Err(Error::invalid(format!(
                        "London length must be positive, got {london_length_zero}"
                    )));
                }
                if !(conductivity > 0.0) || !conductivity.is_finite() {
                    return Err(Error::invalid(format!(
                        "conductivity must be positive, got {conductivity}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `λ_L²(T)` and `δ_L²(T)` for the superconductor at angular frequency `omega`.
    fn london_lengths(&self, omega: f64) -> Option<(f64, f64)> {
        match *self {
            SurfaceModel::Superconductor {
                critical_temperature,
                temperature,
                london_length_zero,
                conductivity,
            } => {
                let t4 = (temperature / critical_temperature).powi(4);
                let lambda_sq = london_length_zero * london_length_zero / (1.0 - t4);
                let delta_sq = 2.0 / (omega * VACUUM_PERMEABILITY * conductivity * t4);
                Some((lambda_sq, delta_sq))
            }
            _ => None,
        }
    }
}

/// Which frequency the dispersion models are evaluated at, given the
/// transition's angular frequency `ω₀ = 2πc/λ`.
///
/// `Angular` is the physical choice. `Cyclic` evaluates `ε` at `ω₀ / 2π`
/// (rad/s and Hz interchanged); it exists only to compare against published
/// numbers that were produced that way and is never the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersionFrequency {
    #[default]
    Angular,
    Cyclic,
}

impl DispersionFrequency {
    pub fn evaluate_at(self, angular_frequency: f64) -> f64 {
        match self {
            DispersionFrequency::Angular => angular_frequency,
            DispersionFrequency::Cyclic => angular_frequency / (2.0 * std::f64::consts::PI),
        }
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "frequency must be positive and finite, got {omega}"
        )))
    }
}

/// Relative permittivity `ε(ω)` of a dispersive medium.
pub fn permittivity(model: &SurfaceModel, omega: f64) -> Result<Complex64> {
    check_frequency(omega)?;
    model.validate()?;
    match *model {
        SurfaceModel::Drude {
            plasma_frequency,
            loss_rate,
        } => {
            let denom = Complex64::new(omega * omega, omega * loss_rate);
            Ok(1.0 - plasma_frequency * plasma_frequency / denom)
        }
        SurfaceModel::Superconductor { .. } => {
            let (lambda_sq, delta_sq) = model.london_lengths(omega).expect("superconductor");
            let k_sq = omega * omega / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
            Ok(Complex64::new(
                1.0 - 1.0 / (k_sq * lambda_sq),
                2.0 / (k_sq * delta_sq),
            ))
        }
        SurfaceModel::FreeSpace | SurfaceModel::PerfectConductor => Err(Error::invalid(format!(
            "{} has no finite permittivity",
            model.name()
        ))),
    }
}

/// Amplitude reflection coefficients for s- and p-polarised plane waves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FresnelPair {
    pub r_s: Complex64,
    pub r_p: Complex64,
}

/// Square root on the branch `Im ≥ 0` (outgoing or decaying waves).
pub(crate) fn sqrt_upper(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 {
        -r
    } else {
        r
    }
}

/// Reflection response of a medium resolved at a fixed frequency, in units
/// where the vacuum wavenumber is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Reflector {
    None,
    Perfect,
    Dielectric(Complex64),
}

impl Reflector {
    pub(crate) fn resolve(model: &SurfaceModel, omega: f64) -> Result<Self> {
        Ok(match model {
            SurfaceModel::FreeSpace => Reflector::None,
            SurfaceModel::PerfectConductor => Reflector::Perfect,
            _ => Reflector::Dielectric(permittivity(model, omega)?),
        })
    }

    /// `(r_s, r_p)` for the scaled normal wavenumber `kz = k⊥ / k₀` (branch `Im ≥ 0`).
    #[inline]
    pub(crate) fn coefficients(&self, kz: Complex64) -> (Complex64, Complex64) {
        match *self {
            Reflector::None => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            Reflector::Perfect => (Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)),
            Reflector::Dielectric(eps) => {
                // k⊥¹² = ε − k∥² = ε − 1 + kz²
                let kz1 = sqrt_upper(eps - 1.0 + kz * kz);
                let r_s = (kz - kz1) / (kz + kz1);
                let r_p = (eps * kz - kz1) / (eps * kz + kz1);
                (r_s, r_p)
            }
        }
    }

    /// Scaled evanescent decay constants `κ = Im kz` near the surface-plasmon
    /// pole of `r_p` and its half-width, when the medium supports one.
    pub(crate) fn plasmon_pole(&self) -> Option<(f64, f64)> {
        match *self {
            Reflector::Dielectric(eps) if eps.re < -1.0 => {
                // ε kz + kz1 = 0 with kz = iκ  ⇒  κ² = −1/(ε + 1)
                let kappa = sqrt_upper(-1.0 / (eps + 1.0));
                let centre = kappa.re;
                (centre > 0.0).then_some((centre, kappa.im.abs()))
            }
            _ => None,
        }
    }
}

/// Fresnel coefficients at angular frequency `omega` and in-plane wavenumber
/// `k_par` (rad/m).
pub fn fresnel(model: &SurfaceModel, omega: f64, k_par: f64) -> Result<FresnelPair> {
    check_frequency(omega)?;
    if !(k_par >= 0.0) || !k_par.is_finite() {
        return Err(Error::invalid(format!(
            "in-plane wavenumber must be non-negative, got {k_par}"
        )));
    }
    model.validate()?;
    let k0 = omega / SPEED_OF_LIGHT;
    let q = k_par / k0;
    let kz = sqrt_upper(Complex64::new(1.0 - q * q, 0.0));
    let (r_s, r_p) = Reflector::resolve(model, omega)?.coefficients(kz);
    Ok(FresnelPair { r_s, r_p })
}

/// Non-retarded closed form of the superconductor coefficients,
/// `r_s ≈ 0`, `r_p ≈ (δ² − 2iλ²) / (δ² − 2iλ² − 2ω²δ²λ²/c²)`.
pub fn fresnel_nonretarded_superconductor(model: &SurfaceModel, omega: f64) -> Result<FresnelPair> {
    check_frequency(omega)?;
    model.validate()?;
    let (lambda_sq, delta_sq) = model.london_lengths(omega).ok_or_else(|| {
        Error::invalid(format!(
            "non-retarded superconductor limit needs a superconductor, got {}",
            model.name()
        ))
    })?;
    let num = Complex64::new(delta_sq, -2.0 * lambda_sq);
    let k_sq = omega * omega / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    let r_p = num / (num - 2.0 * k_sq * delta_sq * lambda_sq);
    Ok(FresnelPair {
        r_s: Complex64::new(0.0, 0.0),
        r_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn omega0() -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / DEFAULT_WAVELENGTH
    }

    #[test]
    fn drude_is_transparent_at_high_frequency() {
        let eps = permittivity(&SurfaceModel::gold(), 1e25).unwrap();
        assert!((eps - 1.0).norm() < 1e-15);
    }

    #[test]
    fn gold_at_transition_frequency() {
        // hand evaluation: w = 2.55585e15 rad/s
        let w = omega0();
        let wp2 = 1.37e16_f64 * 1.37e16;
        let d = w * w * w * w + w * w * 5.31e13 * 5.31e13;
        let want = Complex64::new(1.0 - wp2 * w * w / d, wp2 * w * 5.31e13 / d);
        let got = permittivity(&SurfaceModel::gold(), w).unwrap();
        assert!((got - want).norm() < 1e-12 * want.norm());
        assert!((got.re - -27.7202).abs() < 1e-3, "{got}");
        assert!((got.im - 0.59669).abs() < 1e-4, "{got}");
    }

    #[test]
    fn niobium_at_transition_frequency() {
        let w = omega0();
        let got = permittivity(&SurfaceModel::niobium(0.01), w).unwrap();
        let c = SPEED_OF_LIGHT;
        let l2 = 35e-9_f64.powi(2) / (1.0 - 1e-8);
        let d2 = 2.0 / (w * VACUUM_PERMEABILITY * 2e9 * 1e-8);
        let want = Complex64::new(1.0 - c * c / (w * w * l2), 2.0 * c * c / (w * w * d2));
        assert!((got - want).norm() < 1e-12 * want.norm());
        assert!((got.re - -10.2315).abs() < 1e-3, "{got}");
        assert!((got.im - 8.838e-4).abs() < 1e-6, "{got}");
    }

    #[test]
    fn permittivity_rejects_bad_input() {
        assert!(permittivity(&SurfaceModel::gold(), 0.0).is_err());
        assert!(permittivity(&SurfaceModel::gold(), -1.0).is_err());
        assert!(permittivity(&SurfaceModel::PerfectConductor, 1e15).is_err());
        assert!(permittivity(&SurfaceModel::FreeSpace, 1e15).is_err());
        let hot = SurfaceModel::niobium(1.2);
        assert!(permittivity(&hot, 1e15).is_err());
        let bad = SurfaceModel::Drude {
            plasma_frequency: -1.0,
            loss_rate: 0.0,
        };
        assert!(permittivity(&bad, 1e15).is_err());
    }

    #[test]
    fn trivial_reflectors() {
        let w = omega0();
        for k in [0.0, 0.5, 3.0] {
            let p = fresnel(&SurfaceModel::PerfectConductor, w, k * w / SPEED_OF_LIGHT).unwrap();
            assert_eq!(p.r_s, Complex64::new(-1.0, 0.0));
            assert_eq!(p.r_p, Complex64::new(1.0, 0.0));
            let f = fresnel(&SurfaceModel::FreeSpace, w, k * w / SPEED_OF_LIGHT).unwrap();
            assert_eq!(f.r_s, Complex64::new(0.0, 0.0));
            assert_eq!(f.r_p, Complex64::new(0.0, 0.0));
        }
        assert!(fresnel(&SurfaceModel::gold(), w, -1.0).is_err());
    }

    #[test]
    fn drude_nonretarded_limit() {
        let w = omega0();
        let eps = permittivity(&SurfaceModel::gold(), w).unwrap();
        let quasi_static = (eps - 1.0) / (eps + 1.0);
        for (ratio, tol) in [(100.0, 0.01), (50.0, 0.02)] {
            let p = fresnel(&SurfaceModel::gold(), w, ratio * w / SPEED_OF_LIGHT).unwrap();
            assert!(
                (p.r_p - quasi_static).norm() <= tol * quasi_static.norm(),
                "{} vs {quasi_static}",
                p.r_p
            );
        }
    }

    #[test]
    fn lossless_drude_approaches_perfect_conductor() {
        let model = SurfaceModel::Drude {
            plasma_frequency: 1e20,
            loss_rate: 0.0,
        };
        let w = 1e15;
        for k in [0.0, 0.3, 0.99, 1.5, 5.0] {
            let p = fresnel(&model, w, k * w / SPEED_OF_LIGHT).unwrap();
            assert!((p.r_s + 1.0).norm() < 1e-3, "k = {k}: {}", p.r_s);
            assert!((p.r_p - 1.0).norm() < 1e-3, "k = {k}: {}", p.r_p);
        }
    }

    #[test]
    fn propagating_reflection_is_passive() {
        let w = omega0();
        for model in [SurfaceModel::gold(), SurfaceModel::niobium(0.01), SurfaceModel::niobium(0.5)] {
            for i in 0..=100 {
                let k = i as f64 / 100.0 * w / SPEED_OF_LIGHT;
                let p = fresnel(&model, w, k).unwrap();
                assert!(p.r_s.norm() <= 1.0 + 1e-12 && p.r_p.norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn nonretarded_superconductor() {
        let w = omega0();
        let model = SurfaceModel::niobium(0.01);
        let got = fresnel_nonretarded_superconductor(&model, w).unwrap();
        // hand evaluation of the closed form
        let c = SPEED_OF_LIGHT;
        let l2 = 35e-9_f64.powi(2) / (1.0 - 1e-8);
        let d2 = 2.0 / (w * VACUUM_PERMEABILITY * 2e9 * 1e-8);
        let num = Complex64::new(d2, -2.0 * l2);
        let want = num / (num - 2.0 * w * w * d2 * l2 / (c * c));
        assert!((got.r_p - want).norm() < 1e-12);
        assert_eq!(got.r_s, Complex64::new(0.0, 0.0));

        // it is the quasi-static (ε−1)/(ε+1)
        let eps = permittivity(&model, w).unwrap();
        assert!((got.r_p - (eps - 1.0) / (eps + 1.0)).norm() < 1e-12);

        // Im r_p scales as (T/T_c)^4
        let hotter = fresnel_nonretarded_superconductor(&SurfaceModel::niobium(0.02), w).unwrap();
        let ratio = hotter.r_p.im / got.r_p.im;
        assert!((ratio / 16.0 - 1.0).abs() < 0.05, "ratio {ratio}");

        assert!(fresnel_nonretarded_superconductor(&SurfaceModel::gold(), w).is_err());
    }

    #[test]
    fn nonretarded_superconductor_cold_limit() {
        // T → 0: Im r_p → 0 and Re r_p → 1 / (1 − 2ω²λ_L²/c²), which is 1 only
        // when the London length is small against the wavelength.
        let cold = SurfaceModel::niobium(1e-4);
        let w = omega0();
        let r = fresnel_nonretarded_superconductor(&cold, w).unwrap().r_p;
        let k_lambda = w / SPEED_OF_LIGHT * NIOBIUM_LONDON_LENGTH;
        assert!(r.im.abs() < 1e-12);
        assert!((r.re - 1.0 / (1.0 - 2.0 * k_lambda * k_lambda)).abs() < 1e-9);

        let microwave = 2.0 * PI * 10e9;
        let r = fresnel_nonretarded_superconductor(&cold, microwave).unwrap().r_p;
        assert!(r.im.abs() < 1e-9 && (r.re - 1.0).abs() < 1e-9, "{r}");
    }

    #[test]
    fn branch_is_decaying() {
        let r = Reflector::Dielectric(Complex64::new(-27.7, 0.6));
        for kappa in [0.0, 0.1, 1.0, 10.0] {
            let kz = Complex64::new(0.0, kappa);
            let kz1 = sqrt_upper(Complex64::new(-27.7, 0.6) - 1.0 + kz * kz);
            assert!(kz1.im >= 0.0);
            let (rs, rp) = r.coefficients(kz);
            assert!(rs.norm().is_finite() && rp.norm().is_finite());
        }
    }

    #[test]
    fn passivity_of_permittivity() {
        let mut w = 1e10;
        while w < 1e19 {
            for m in [SurfaceModel::gold(), SurfaceModel::niobium(0.01), SurfaceModel::niobium(0.9)] {
                assert!(permittivity(&m, w).unwrap().im >= 0.0);
            }
            w *= 3.7;
        }
    }
}
