//! Grid sweeps, concurrence traces and the optimal-height search.

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{DEFAULT_WAVELENGTH, MIN_SCALED_HEIGHT};
use crate::dynamics::{concurrence, evolve_analytical, TwoQubitState};
use crate::error::{Error, Result};
use crate::greens::{CouplingSet, CouplingSolver, DipoleConfig, Geometry, Split};
use crate::media::SurfaceModel;

/// Points of the coarse scan that brackets the minimum in [`find_optimal_z`].
pub const BRACKET_SCAN_POINTS: usize = 32;

/// `count` evenly spaced points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    pub fn single(value: f64) -> Self {
        Self::new(value, value, 1)
    }

    /// Point `i` is `min + (i/(n−1))·(max − min)`, so doubling the density
    /// (`n → 2n − 1`) reproduces every existing point bit for bit.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + (i as f64 / last) * (self.max - self.min)
                }
            })
            .collect()
    }

    fn validate(&self, name: &str, lower: f64) -> Result<()> {
        if self.count == 0 {
            return Err(Error::invalid(format!("{name} axis needs at least one point")));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::invalid(format!(
                "{name} axis range [{}, {}] is not a finite increasing interval",
                self.min, self.max
            )));
        }
        if self.count == 1 && self.max != self.min {
            return Err(Error::invalid(format!(
                "{name} axis with one point needs min == max"
            )));
        }
        if self.min < lower {
            return Err(Error::invalid(format!(
                "{name} axis starts at {}, below the lower bound {lower}",
                self.min
            )));
        }
        Ok(())
    }
}

/// Scalar evaluated at each grid point, in units of `Γ₀` where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    RelativeDecay,
    GammaSelf,
    GammaPair,
    OmegaPair,
    /// Concurrence at `Γ₀t = t` starting from `|eg⟩`.
    ConcurrenceAt { t: f64 },
}

impl Observable {
    pub fn name(&self) -> &'static str {
        match self {
            Observable::RelativeDecay => "relative_decay",
            Observable::GammaSelf => "gamma_self",
            Observable::GammaPair => "gamma_pair",
            Observable::OmegaPair => "omega_pair",
            Observable::ConcurrenceAt { .. } => "concurrence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: SurfaceModel,
    pub dipole: DipoleConfig,
    pub x: AxisRange,
    pub z: AxisRange,
    pub wavelength: f64,
    pub observable: Observable,
    #[serde(default)]
    pub solver: CouplingSolver,
}

impl SweepSpec {
    /// Relative-decay map on the default 60×60 grid over
    /// `x̃ ∈ [0.05, 3]`, `z̃ ∈ [0.05, 1.5]`.
    pub fn decay_map(model: SurfaceModel, dipole: DipoleConfig) -> Self {
        Self {
            model,
            dipole,
            x: AxisRange::new(0.05, 3.0, 60),
            z: AxisRange::new(0.05, 1.5, 60),
            wavelength: DEFAULT_WAVELENGTH,
            observable: Observable::RelativeDecay,
            solver: CouplingSolver::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.x.validate("x", 0.0)?;
        let z_floor = if matches!(self.model, SurfaceModel::FreeSpace) {
            f64::NEG_INFINITY
        } else {
            MIN_SCALED_HEIGHT
        };
        self.z.validate("z", z_floor)?;
        if !(self.wavelength > 0.0) || !self.wavelength.is_finite() {
            return Err(Error::invalid(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        if let Observable::ConcurrenceAt { t } = self.observable {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::invalid(format!("concurrence time must be non-negative, got {t}")));
            }
        }
        self.solver.quadrature.validate().map_err(Error::InvalidArgument)
    }

    fn geometry(&self, x: f64, z: f64) -> Geometry {
        Geometry::new(x, z, self.dipole).with_wavelength(self.wavelength)
    }
}

/// Provenance attached to every sweep output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub model: SurfaceModel,
    pub dipole: DipoleConfig,
    pub wavelength: f64,
    pub observable: Observable,
    pub solver: CouplingSolver,
    pub code_version: String,
    /// Seconds since the Unix epoch at completion.
    pub timestamp: u64,
}

impl SweepMetadata {
    pub fn new(
        model: SurfaceModel,
        dipole: DipoleConfig,
        wavelength: f64,
        observable: Observable,
        solver: CouplingSolver,
    ) -> Self {
        Self {
            model,
            dipole,
            wavelength,
            observable,
            solver,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// Observable on a grid; `values[i][j]` belongs to `(x[j], z[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn get(&self, x_index: usize, z_index: usize) -> f64 {
        self.values[z_index][x_index]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Rows of constant `z̃` on the current rayon pool.
    #[default]
    Parallel,
}

fn evaluate_row(spec: &SweepSpec, xs: &[f64], z: f64) -> Result<Vec<f64>> {
    let cell_error = |x: f64| move |e: Error| Error::SweepCell {
        x,
        z,
        source: Box::new(e),
    };
    let solver = &spec.solver;
    let gamma_self = solver
        .gamma_self(&spec.geometry(xs[0], z), &spec.model)
        .map_err(cell_error(xs[0]))?;
    xs.iter()
        .map(|&x| {
            let geometry = spec.geometry(x, z);
            let value = match spec.observable {
                Observable::GammaSelf => Ok(gamma_self.total()),
                Observable::GammaPair => solver.gamma_pair(&geometry, &spec.model).map(|s| s.total()),
                Observable::OmegaPair => solver.omega_pair(&geometry, &spec.model).map(|s| s.total()),
                Observable::RelativeDecay => solver
                    .coupling_set_with_self(&geometry, &spec.model, gamma_self)
                    .map(|c| c.relative_decay().total()),
                Observable::ConcurrenceAt { t } => solver
                    .coupling_set_with_self(&geometry, &spec.model, gamma_self)
                    .and_then(|c| evolve_analytical(c, t))
                    .and_then(|s| concurrence(&s)),
            };
            let value = value.map_err(cell_error(x))?;
            if value.is_finite() {
                Ok(value)
            } else {
                Err(cell_error(x)(Error::invalid("observable is not finite")))
            }
        })
        .collect()
}

/// Evaluates the observable on every grid point. Results do not depend on
/// the execution mode; the first failing cell in row-major order is reported.
pub fn evaluate(spec: &SweepSpec, execution: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let xs = spec.x.values();
    let zs = spec.z.values();
    let rows: Vec<Result<Vec<f64>>> = match execution {
        Execution::Serial => zs.iter().map(|&z| evaluate_row(spec, &xs, z)).collect(),
        Execution::Parallel => zs.par_iter().map(|&z| evaluate_row(spec, &xs, z)).collect(),
    };
    let values = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        x: xs,
        z: zs,
        values,
        metadata: SweepMetadata::new(
            spec.model,
            spec.dipole,
            spec.wavelength,
            spec.observable,
            spec.solver,
        ),
    })
}

/// Relative-decay map `D/Γ₀` over the spec's grid, evaluated in parallel.
pub fn decay_map(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.observable != Observable::RelativeDecay {
        return Err(Error::invalid(format!(
            "decay_map needs the relative_decay observable, got {}",
            spec.observable.name()
        )));
    }
    evaluate(spec, Execution::Parallel)
}

/// Concurrence and populations on a uniform `Γ₀t` grid from `|eg⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceTrace {
    pub couplings: CouplingSet,
    pub t: Vec<f64>,
    pub concurrence: Vec<f64>,
    pub states: Vec<TwoQubitState>,
}

pub fn concurrence_trace(
    geometry: &Geometry,
    model: &SurfaceModel,
    t_max: f64,
    samples: usize,
    solver: &CouplingSolver,
) -> Result<ConcurrenceTrace> {
    if samples < 2 {
        return Err(Error::invalid(format!("a trace needs at least 2 samples, got {samples}")));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::invalid(format!("t_max must be positive, got {t_max}")));
    }
    let couplings = solver.coupling_set(geometry, model)?;
    let last = (samples - 1) as f64;
    let t: Vec<f64> = (0..samples)
        .map(|i| if i + 1 == samples { t_max } else { t_max * (i as f64 / last) })
        .collect();
    let states = t
        .iter()
        .map(|&ti| evolve_analytical(couplings, ti))
        .collect::<Result<Vec<_>>>()?;
    let concurrence = states.iter().map(concurrence).collect::<Result<Vec<_>>>()?;
    Ok(ConcurrenceTrace {
        couplings,
        t,
        concurrence,
        states,
    })
}

/// Search for the height minimising `D` at fixed lateral separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZSearch {
    pub model: SurfaceModel,
    pub dipole: DipoleConfig,
    pub x_scaled: f64,
    pub z_min: f64,
    pub z_max: f64,
    /// Width of the final golden-section bracket.
    pub tolerance: f64,
    pub wavelength: f64,
    #[serde(default)]
    pub solver: CouplingSolver,
}

impl ZSearch {
    pub fn new(model: SurfaceModel, dipole: DipoleConfig, x_scaled: f64, z_min: f64, z_max: f64) -> Self {
        Self {
            model,
            dipole,
            x_scaled,
            z_min,
            z_max,
            tolerance: 1e-3,
            wavelength: DEFAULT_WAVELENGTH,
            solver: CouplingSolver::default(),
        }
    }

    fn relative_decay(&self, z: f64) -> Result<Split> {
        let geometry = Geometry::new(self.x_scaled, z, self.dipole).with_wavelength(self.wavelength);
        Ok(self.solver.coupling_set(&geometry, &self.model)?.relative_decay())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalZ {
    pub z: f64,
    pub relative_decay: f64,
    /// The minimum sits on an end of the search interval.
    pub at_boundary: bool,
    /// The coarse scan `(z̃, D)`.
    pub scan: Vec<(f64, f64)>,
}

/// Coarse scan of [`BRACKET_SCAN_POINTS`] heights, then golden-section
/// refinement around the single interior minimum. A minimum on the boundary
/// is returned as is; more than one interior minimum is a bracket failure.
pub fn find_optimal_z(search: &ZSearch) -> Result<OptimalZ> {
    let lower = if matches!(search.model, SurfaceModel::FreeSpace) {
        0.0
    } else {
        MIN_SCALED_HEIGHT
    };
    if !(search.z_min >= lower) || !(search.z_max > search.z_min) || !search.z_max.is_finite() {
        return Err(Error::invalid(format!(
            "height bounds [{}, {}] must be increasing and start at or above {lower}",
            search.z_min, search.z_max
        )));
    }
    if !(search.tolerance > 0.0) || !search.tolerance.is_finite() {
        return Err(Error::invalid(format!("tolerance must be positive, got {}", search.tolerance)));
    }

    let zs = AxisRange::new(search.z_min, search.z_max, BRACKET_SCAN_POINTS).values();
    let scan = zs
        .iter()
        .map(|&z| Ok((z, search.relative_decay(z)?.total())))
        .collect::<Result<Vec<_>>>()?;
    let d: Vec<f64> = scan.iter().map(|p| p.1).collect();
    let interior: Vec<usize> = (1..d.len() - 1)
        .filter(|&i| d[i] < d[i - 1] && d[i] <= d[i + 1])
        .collect();

    match interior.as_slice() {
        [] => {
            let (k, _) = d
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .expect("scan is non-empty");
            Ok(OptimalZ {
                z: scan[k].0,
                relative_decay: scan[k].1,
                at_boundary: true,
                scan,
            })
        }
        [i] => {
            let (z, value) = golden_section(|z| Ok(search.relative_decay(z)?.total()), zs[i - 1], zs[i + 1], search.tolerance)?;
            // keep the scan point if refinement did not improve on it
            let (z, value) = if value <= d[*i] { (z, value) } else { (zs[*i], d[*i]) };
            Ok(OptimalZ {
                z,
                relative_decay: value,
                at_boundary: false,
                scan,
            })
        }
        _ => Err(Error::Bracket { samples: scan }),
    }
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tolerance: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tolerance {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_refinement_keeps_points() {
        let coarse = AxisRange::new(0.05, 3.0, 31).values();
        let fine = AxisRange::new(0.05, 3.0, 61).values();
        for (i, v) in coarse.iter().enumerate() {
            assert_eq!(fine[2 * i].to_bits(), v.to_bits());
        }
        assert_eq!(AxisRange::single(0.2).values(), vec![0.2]);
    }

    #[test]
    fn spec_validation() {
        let mut spec = SweepSpec::decay_map(SurfaceModel::PerfectConductor, DipoleConfig::Xx);
        assert!(spec.validate().is_ok());
        spec.z = AxisRange::new(1e-4, 1.0, 3);
        assert!(spec.validate().is_err());
        spec.z = AxisRange::new(0.1, 1.0, 0);
        assert!(spec.validate().is_err());
        spec.z = AxisRange::new(1.0, 0.1, 3);
        assert!(spec.validate().is_err());
        spec.z = AxisRange::new(0.1, 1.0, 3);
        spec.observable = Observable::ConcurrenceAt { t: -1.0 };
        assert!(spec.validate().is_err());
        spec.observable = Observable::GammaSelf;
        assert!(decay_map(&spec).is_err());
    }

    #[test]
    fn golden_section_on_parabola() {
        let (z, v) = golden_section(|z| Ok((z - 0.37).powi(2)), 0.0, 1.0, 1e-8).unwrap();
        assert!((z - 0.37).abs() < 1e-8);
        assert!(v < 1e-15);
    }

    #[test]
    fn failing_cell_reports_coordinates() {
        let mut spec = SweepSpec::decay_map(SurfaceModel::PerfectConductor, DipoleConfig::Xx);
        spec.x = AxisRange::new(0.0, 1.0, 2);
        spec.z = AxisRange::single(0.2);
        match evaluate(&spec, Execution::Serial) {
            Err(Error::SweepCell { x, z, .. }) => {
                assert_eq!((x, z), (0.0, 0.2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trace_rejects_bad_sampling() {
        let g = Geometry::new(1.0, 0.2, DipoleConfig::Xx);
        let s = CouplingSolver::default();
        assert!(concurrence_trace(&g, &SurfaceModel::FreeSpace, 30.0, 1, &s).is_err());
        assert!(concurrence_trace(&g, &SurfaceModel::FreeSpace, 0.0, 10, &s).is_err());
    }
}
