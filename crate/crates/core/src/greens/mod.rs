//! Dyadic Green's tensors for two emitters at equal height above a planar
//! medium, and the rates and couplings they induce.
//!
//! Internally every tensor is carried in units of the vacuum wavenumber,
//! `G̃ = G / k₀`, so that with `d̂` the unit dipole direction
//!
//! ```text
//! Γ   / Γ₀ = 1 + 6π Im[d̂ · G̃_sc(x̃ = 0) · d̂]
//! Γ₁₂ / Γ₀ = 6π Im[d̂ · (G̃_free(x̃) + G̃_sc(x̃)) · d̂]
//! Ω₁₂ / Γ₀ = −3π Re[d̂ · (G̃_free(x̃) + G̃_sc(x̃)) · d̂]
//! ```
//!
//! The first line uses `Im G̃_free(0) = 1/6π`, the isotropic coincidence
//! value that defines `Γ₀`.

mod free;
mod scattering;

use std::f64::consts::PI;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{DEFAULT_WAVELENGTH, MIN_SCALED_HEIGHT, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::media::{DispersionFrequency, Reflector, SurfaceModel};
use crate::numerics::QuadratureSpec;

/// Tolerance on `|Γ₁₂| ≤ Γ`, in units of `Γ₀`.
pub const LINDBLAD_TOLERANCE: f64 = 1e-6;

/// A 3×3 complex tensor in the Cartesian `(x, y, z)` basis, with the surface
/// normal along `z` and the emitter separation along `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensTensor(pub [[Complex64; 3]; 3]);

impl GreensTensor {
    pub fn zero() -> Self {
        GreensTensor([[Complex64::new(0.0, 0.0); 3]; 3])
    }

    /// `aᵀ · G · b`.
    pub fn contract(&self, a: [f64; 3], b: [f64; 3]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                sum += a[i] * self.0[i][j] * b[j];
            }
        }
        sum
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn scale(&self, factor: f64) -> Self {
        GreensTensor(self.0.map(|row| row.map(|c| c * factor)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for GreensTensor {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

/// Orientation shared by both dipoles, measured from the x axis in the x–z plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DipoleConfig {
    /// Parallel to the surface and to the separation (`θ = 0`).
    Xx,
    /// Normal to the surface (`θ = π/2`).
    Zz,
    /// Tilted by the given angle in radians.
    Angle(f64),
}

impl DipoleConfig {
    pub fn unit_vector(self) -> [f64; 3] {
        match self {
            DipoleConfig::Xx => [1.0, 0.0, 0.0],
            DipoleConfig::Zz => [0.0, 0.0, 1.0],
            DipoleConfig::Angle(theta) => [theta.cos(), 0.0, theta.sin()],
        }
    }

    pub fn label(self) -> String {
        match self {
            DipoleConfig::Xx => "xx".into(),
            DipoleConfig::Zz => "zz".into(),
            DipoleConfig::Angle(theta) => format!("theta={theta}"),
        }
    }
}

/// Emitter placement in units of `1/k₀`, with `k₀ = 2π/λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Lateral separation `x̃ = k₀ x`.
    pub x_scaled: f64,
    /// Common height above the surface `z̃ = k₀ z`.
    pub z_scaled: f64,
    pub dipole: DipoleConfig,
    /// Transition wavelength in metres.
    pub wavelength: f64,
}

impl Geometry {
    /// Geometry at the default 737 nm transition wavelength.
    pub fn new(x_scaled: f64, z_scaled: f64, dipole: DipoleConfig) -> Self {
        Self {
            x_scaled,
            z_scaled,
            dipole,
            wavelength: DEFAULT_WAVELENGTH,
        }
    }

    pub fn with_wavelength(mut self, wavelength: f64) -> Self {
        self.wavelength = wavelength;
        self
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Transition angular frequency `ω₀ = 2πc/λ`.
    pub fn angular_frequency(&self) -> f64 {
        SPEED_OF_LIGHT * self.wavenumber()
    }

    pub fn validate(&self, model: &SurfaceModel) -> Result<()> {
        if !(self.wavelength > 0.0) || !self.wavelength.is_finite() {
            return Err(Error::invalid(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        if !(self.x_scaled >= 0.0) || !self.x_scaled.is_finite() {
            return Err(Error::invalid(format!(
                "lateral separation x̃ must be finite and non-negative, got {}",
                self.x_scaled
            )));
        }
        if let DipoleConfig::Angle(theta) = self.dipole {
            if !theta.is_finite() {
                return Err(Error::invalid(format!("dipole angle must be finite, got {theta}")));
            }
        }
        let is_free = matches!(model, SurfaceModel::FreeSpace);
        if !self.z_scaled.is_finite() || (!is_free && self.z_scaled < MIN_SCALED_HEIGHT) {
            return Err(Error::invalid(format!(
                "height z̃ must be at least {MIN_SCALED_HEIGHT} above a {} surface, got {}",
                model.name(),
                self.z_scaled
            )));
        }
        model.validate()
    }
}

/// Which reflection channels enter the scattering tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    #[default]
    Full,
    /// Drops the s-polarised block. Reproduces the p-only forms that are exact
    /// only in the non-retarded limit; kept for cross-checks.
    POnly,
}

/// A quantity split into its free-space and surface-scattered parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub free: f64,
    pub scattering: f64,
}

impl Split {
    pub fn total(&self) -> f64 {
        self.free + self.scattering
    }

    fn minus(&self, other: &Split) -> Split {
        Split {
            free: self.free - other.free,
            scattering: self.scattering - other.scattering,
        }
    }
}

/// Rates and coherent coupling for one geometry, in units of `Γ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    /// `Γ/Γ₀`; the free part is exactly 1.
    pub gamma_self: Split,
    /// `Γ₁₂/Γ₀`.
    pub gamma_cross: Split,
    /// `Ω₁₂/Γ₀`.
    pub omega_cross: Split,
}

impl CouplingSet {
    /// Bundles the three coefficients, rejecting `|Γ₁₂| > Γ + 1e-6`.
    pub fn new(gamma_self: Split, gamma_cross: Split, omega_cross: Split) -> Result<Self> {
        let (g, g12) = (gamma_self.total(), gamma_cross.total());
        if !(g.is_finite() && g12.is_finite() && omega_cross.total().is_finite()) {
            return Err(Error::invalid(format!(
                "coupling coefficients must be finite (Γ = {g}, Γ₁₂ = {g12}, Ω₁₂ = {})",
                omega_cross.total()
            )));
        }
        if g12.abs() > g + LINDBLAD_TOLERANCE {
            return Err(Error::LindbladViolation {
                gamma_self: g,
                gamma_cross: g12,
            });
        }
        Ok(Self {
            gamma_self,
            gamma_cross,
            omega_cross,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_self.total()
    }

    pub fn gamma_12(&self) -> f64 {
        self.gamma_cross.total()
    }

    pub fn omega_12(&self) -> f64 {
        self.omega_cross.total()
    }

    /// `D = Γ − Γ₁₂` with its free and scattering parts.
    pub fn relative_decay(&self) -> Split {
        self.gamma_self.minus(&self.gamma_cross)
    }
}

/// Evaluates tensors and couplings with a fixed numerical configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CouplingSolver {
    pub quadrature: QuadratureSpec,
    pub dispersion: DispersionFrequency,
    pub polarization: Polarization,
}

impl CouplingSolver {
    fn reflector(&self, geometry: &Geometry, model: &SurfaceModel) -> Result<Reflector> {
        geometry.validate(model)?;
        self.quadrature.validate().map_err(Error::InvalidArgument)?;
        Reflector::resolve(model, self.dispersion.evaluate_at(geometry.angular_frequency()))
    }

    fn scattering_scaled(
        &self,
        reflector: &Reflector,
        x: f64,
        geometry: &Geometry,
    ) -> Result<GreensTensor> {
        scattering::scattering_tensor_scaled(
            reflector,
            self.polarization,
            x,
            geometry.z_scaled,
            &self.quadrature,
        )
    }

    /// Scattering tensor in units of `k₀` between the two emitters (lateral
    /// offset `x̃`).
    pub fn scattering_tensor_scaled(
        &self,
        geometry: &Geometry,
        model: &SurfaceModel,
    ) -> Result<GreensTensor> {
        let reflector = self.reflector(geometry, model)?;
        self.scattering_scaled(&reflector, geometry.x_scaled, geometry)
    }

    /// Scattering tensor in 1/m.
    pub fn greens_scattering(&self, geometry: &Geometry, model: &SurfaceModel) -> Result<GreensTensor> {
        if matches!(model, SurfaceModel::FreeSpace) {
            return Err(Error::invalid("free space has no scattering tensor"));
        }
        Ok(self
            .scattering_tensor_scaled(geometry, model)?
            .scale(geometry.wavenumber()))
    }

    /// `Γ/Γ₀`; the scattering part comes from the tensor at zero lateral offset.
    pub fn gamma_self(&self, geometry: &Geometry, model: &SurfaceModel) -> Result<Split> {
        let reflector = self.reflector(geometry, model)?;
        let scattering = match reflector {
            Reflector::None => 0.0,
            _ => {
                let d = geometry.dipole.unit_vector();
                let g = self.scattering_scaled(&reflector, 0.0, geometry)?;
                6.0 * PI * g.contract(d, d).im
            }
        };
        Ok(Split {
            free: 1.0,
            scattering,
        })
    }

    /// Free and scattering tensors (units of `k₀`) between the emitters.
    pub fn pair_tensors(
        &self,
        geometry: &Geometry,
        model: &SurfaceModel,
    ) -> Result<(GreensTensor, GreensTensor)> {
        let reflector = self.reflector(geometry, model)?;
        pair_precondition(geometry)?;
        let free = free::free_dyadic_scaled([geometry.x_scaled, 0.0, 0.0]);
        let scattering = self.scattering_scaled(&reflector, geometry.x_scaled, geometry)?;
        Ok((free, scattering))
    }

    /// `(Γ₁₂/Γ₀, Ω₁₂/Γ₀)` from one pair of tensor evaluations.
    pub fn pair_coefficients(&self, geometry: &Geometry, model: &SurfaceModel) -> Result<(Split, Split)> {
        let (free, scattering) = self.pair_tensors(geometry, model)?;
        let d = geometry.dipole.unit_vector();
        let gf = free.contract(d, d);
        let gs = scattering.contract(d, d);
        let gamma = Split {
            free: 6.0 * PI * gf.im,
            scattering: 6.0 * PI * gs.im,
        };
        let omega = Split {
            free: -3.0 * PI * gf.re,
            scattering: -3.0 * PI * gs.re,
        };
        Ok((gamma, omega))
    }

    pub fn gamma_pair(&self, geometry: &Geometry, model: &SurfaceModel) -> Result<Split> {
        Ok(self.pair_coefficients(geometry, model)?.0)
    }

    pub fn omega_pair(&self, geometry: &Geometry, model: &SurfaceModel) -> Result<Split> {
        Ok(self.pair_coefficients(geometry, model)?.1)
    }

    pub fn coupling_set(&self, geometry: &Geometry, model: &SurfaceModel) -> Result<CouplingSet> {
        let gamma_self = self.gamma_self(geometry, model)?;
        self.coupling_set_with_self(geometry, model, gamma_self)
    }

    /// As [`coupling_set`](Self::coupling_set) with `Γ/Γ₀` supplied by the
    /// caller, which lets sweeps share it along rows of constant height.
    pub fn coupling_set_with_self(
        &self,
        geometry: &Geometry,
        model: &SurfaceModel,
        gamma_self: Split,
    ) -> Result<CouplingSet> {
        let (gamma_cross, omega_cross) = self.pair_coefficients(geometry, model)?;
        CouplingSet::new(gamma_self, gamma_cross, omega_cross)
    }
}

fn pair_precondition(geometry: &Geometry) -> Result<()> {
    if geometry.x_scaled > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "pair coefficients need a positive separation x̃, got {}",
            geometry.x_scaled
        )))
    }
}

/// Free-space tensor in 1/m for separation `x̃` along x at angular frequency `omega`.
pub fn greens_free(x_scaled: f64, omega: f64) -> Result<GreensTensor> {
    if !(x_scaled > 0.0) || !x_scaled.is_finite() {
        return Err(Error::invalid(format!(
            "free tensor needs a positive finite separation, got {x_scaled}"
        )));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::invalid(format!("frequency must be positive, got {omega}")));
    }
    Ok(free::free_dyadic_scaled([x_scaled, 0.0, 0.0]).scale(omega / SPEED_OF_LIGHT))
}

/// Free tensor in units of `k₀` at an arbitrary non-zero scaled separation.
pub fn free_tensor_scaled(r: [f64; 3]) -> Result<GreensTensor> {
    let rho = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::invalid(format!("separation must be non-zero and finite, got {r:?}")));
    }
    Ok(free::free_dyadic_scaled(r))
}

pub fn greens_scattering(geometry: &Geometry, model: &SurfaceModel) -> Result<GreensTensor> {
    CouplingSolver::default().greens_scattering(geometry, model)
}

pub fn gamma_self(geometry: &Geometry, model: &SurfaceModel) -> Result<Split> {
    CouplingSolver::default().gamma_self(geometry, model)
}

pub fn gamma_pair(geometry: &Geometry, model: &SurfaceModel) -> Result<Split> {
    CouplingSolver::default().gamma_pair(geometry, model)
}

pub fn omega_pair(geometry: &Geometry, model: &SurfaceModel) -> Result<Split> {
    CouplingSolver::default().omega_pair(geometry, model)
}

pub fn coupling_set(geometry: &Geometry, model: &SurfaceModel) -> Result<CouplingSet> {
    CouplingSolver::default().coupling_set(geometry, model)
}
