//! Physical constants (SI) and the default scenario parameters.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permeability, H/m (CODATA 2018).
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// SiV-centre transition wavelength, m.
pub const DEFAULT_WAVELENGTH: f64 = 737e-9;

/// Gold Drude plasma frequency, rad/s.
pub const GOLD_PLASMA_FREQUENCY: f64 = 1.37e16;

/// Gold Drude loss rate, rad/s.
pub const GOLD_LOSS_RATE: f64 = 5.31e13;

/// Niobium critical temperature, K.
pub const NIOBIUM_CRITICAL_TEMPERATURE: f64 = 8.31;

/// Niobium zero-temperature London penetration depth, m.
pub const NIOBIUM_LONDON_LENGTH: f64 = 35e-9;

/// Niobium normal-state conductivity, S/m.
pub const NIOBIUM_CONDUCTIVITY: f64 = 2e9;

/// Default reduced temperature `T / T_c` for the niobium scenario.
pub const NIOBIUM_REDUCED_TEMPERATURE: f64 = 0.01;

/// Smallest scaled height `k₀ z` accepted near a material surface.
pub const MIN_SCALED_HEIGHT: f64 = 1e-3;
