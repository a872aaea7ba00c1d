//! Run parameters read from a TOML file and overridden by flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cp_entangle::constants::*;
use cp_entangle::greens::{CouplingSolver, DipoleConfig, Geometry, Polarization};
use cp_entangle::media::{DispersionFrequency, SurfaceModel};
use cp_entangle::numerics::QuadratureSpec;
use cp_entangle::sweeps::{AxisRange, Observable, SweepSpec, ZSearch};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Free,
    Perfect,
    #[value(alias = "gold")]
    #[serde(alias = "gold")]
    Drude,
    Superconductor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DipoleChoice {
    Xx,
    Zz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ObservableChoice {
    RelativeDecay,
    GammaSelf,
    GammaPair,
    OmegaPair,
    Concurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Dispersion {
    Angular,
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationChoice {
    Full,
    POnly,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceConfig {
    pub kind: Option<SurfaceKind>,
    /// rad/s
    pub plasma_frequency: Option<f64>,
    /// rad/s
    pub loss_rate: Option<f64>,
    /// K
    pub critical_temperature: Option<f64>,
    /// T / T_c
    pub temperature_ratio: Option<f64>,
    /// m
    pub london_length: Option<f64>,
    /// S/m
    pub conductivity: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub dipole: Option<DipoleChoice>,
    /// Radians from x toward z; takes precedence over `dipole`.
    pub theta: Option<f64>,
    pub x: Option<f64>,
    pub z: Option<f64>,
    /// m
    pub wavelength: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub x_count: Option<usize>,
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub z_count: Option<usize>,
    pub observable: Option<ObservableChoice>,
    /// Γ₀t for the concurrence observable.
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceConfig {
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub relative_tolerance: Option<f64>,
    pub absolute_tolerance: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub evanescent_cutoff_scale: Option<f64>,
    pub dispersion: Option<Dispersion>,
    pub polarization: Option<PolarizationChoice>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Everything a run can be parameterised by. Unset fields fall back to the
/// defaults applied by the accessors below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceConfig,
    pub geometry: GeometryConfig,
    pub sweep: SweepConfig,
    pub trace: TraceConfig,
    pub search: SearchConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    pub fn surface(&self) -> Result<SurfaceModel, CliError> {
        let s = &self.surface;
        let model = match s.kind.unwrap_or(SurfaceKind::Free) {
            SurfaceKind::Free => SurfaceModel::FreeSpace,
            SurfaceKind::Perfect => SurfaceModel::PerfectConductor,
            SurfaceKind::Drude => SurfaceModel::Drude {
                plasma_frequency: s.plasma_frequency.unwrap_or(GOLD_PLASMA_FREQUENCY),
                loss_rate: s.loss_rate.unwrap_or(GOLD_LOSS_RATE),
            },
            SurfaceKind::Superconductor => {
                let tc = s.critical_temperature.unwrap_or(NIOBIUM_CRITICAL_TEMPERATURE);
                SurfaceModel::Superconductor {
                    critical_temperature: tc,
                    temperature: s.temperature_ratio.unwrap_or(NIOBIUM_REDUCED_TEMPERATURE) * tc,
                    london_length_zero: s.london_length.unwrap_or(NIOBIUM_LONDON_LENGTH),
                    conductivity: s.conductivity.unwrap_or(NIOBIUM_CONDUCTIVITY),
                }
            }
        };
        model.validate().map_err(CliError::from)?;
        Ok(model)
    }

    pub fn dipole(&self) -> DipoleConfig {
        match (self.geometry.theta, self.geometry.dipole) {
            (Some(theta), _) => DipoleConfig::Angle(theta),
            (None, Some(DipoleChoice::Zz)) => DipoleConfig::Zz,
            (None, _) => DipoleConfig::Xx,
        }
    }

    pub fn wavelength(&self) -> f64 {
        self.geometry.wavelength.unwrap_or(DEFAULT_WAVELENGTH)
    }

    /// Rejects non-positive heights for every surface, free space included:
    /// the library ignores z̃ there, but a negative height is always a typo.
    pub fn geometry(&self) -> Result<Geometry, CliError> {
        let z = self.geometry.z.unwrap_or(0.2);
        if !(z > 0.0) {
            return Err(CliError::Config(format!("height z̃ must be positive, got {z}")));
        }
        Ok(Geometry::new(self.geometry.x.unwrap_or(1.0), z, self.dipole()).with_wavelength(self.wavelength()))
    }

    pub fn solver(&self) -> Result<CouplingSolver, CliError> {
        let s = &self.solver;
        let base = QuadratureSpec::default();
        let quadrature = QuadratureSpec {
            relative_tolerance: s.relative_tolerance.unwrap_or(base.relative_tolerance),
            absolute_tolerance: s.absolute_tolerance.unwrap_or(base.absolute_tolerance),
            max_subdivisions: s.max_subdivisions.unwrap_or(base.max_subdivisions),
            evanescent_cutoff_scale: s.evanescent_cutoff_scale.unwrap_or(base.evanescent_cutoff_scale),
        };
        quadrature
            .validate()
            .map_err(|e| CliError::Config(format!("invalid quadrature settings: {e}")))?;
        Ok(CouplingSolver {
            quadrature,
            dispersion: match s.dispersion {
                Some(Dispersion::Cyclic) => DispersionFrequency::Cyclic,
                _ => DispersionFrequency::Angular,
            },
            polarization: match s.polarization {
                Some(PolarizationChoice::POnly) => Polarization::POnly,
                _ => Polarization::Full,
            },
        })
    }

    pub fn sweep(&self) -> Result<SweepSpec, CliError> {
        let w = &self.sweep;
        let mut spec = SweepSpec::decay_map(self.surface()?, self.dipole());
        spec.x = AxisRange::new(
            w.x_min.unwrap_or(spec.x.min),
            w.x_max.unwrap_or(spec.x.max),
            w.x_count.unwrap_or(spec.x.count),
        );
        spec.z = AxisRange::new(
            w.z_min.unwrap_or(spec.z.min),
            w.z_max.unwrap_or(spec.z.max),
            w.z_count.unwrap_or(spec.z.count),
        );
        spec.wavelength = self.wavelength();
        spec.observable = match w.observable.unwrap_or(ObservableChoice::RelativeDecay) {
            ObservableChoice::RelativeDecay => Observable::RelativeDecay,
            ObservableChoice::GammaSelf => Observable::GammaSelf,
            ObservableChoice::GammaPair => Observable::GammaPair,
            ObservableChoice::OmegaPair => Observable::OmegaPair,
            ObservableChoice::Concurrence => Observable::ConcurrenceAt {
                t: w.t.unwrap_or(30.0),
            },
        };
        spec.solver = self.solver()?;
        spec.validate().map_err(CliError::from)?;
        Ok(spec)
    }

    pub fn trace_window(&self) -> (f64, usize) {
        (self.trace.t_max.unwrap_or(30.0), self.trace.samples.unwrap_or(301))
    }

    pub fn search(&self) -> Result<ZSearch, CliError> {
        let mut search = ZSearch::new(
            self.surface()?,
            self.dipole(),
            self.geometry.x.unwrap_or(1.0),
            self.search.z_min.unwrap_or(0.1),
            self.search.z_max.unwrap_or(1.5),
        );
        if let Some(tol) = self.search.tolerance {
            search.tolerance = tol;
        }
        search.wavelength = self.wavelength();
        search.solver = self.solver()?;
        Ok(search)
    }
}
