//! Figure presets. Each is a fixed function of its id: no flags, config file
//! or environment enter the physics.

use std::path::{Path, PathBuf};

use cp_entangle::greens::DipoleConfig;
use cp_entangle::media::SurfaceModel;
use cp_entangle::sweeps::{
    concurrence_trace, evaluate, AxisRange, Execution, Observable, SweepResult, SweepSpec,
};
use cp_entangle::greens::{CouplingSolver, Geometry};

use crate::config::Format;
use crate::output::{emit, to_json, Cell, Product, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PresetId {
    #[value(name = "fig2a")]
    Fig2a,
    #[value(name = "fig3a")]
    Fig3a,
    #[value(name = "fig3b")]
    Fig3b,
    #[value(name = "fig3c")]
    Fig3c,
    #[value(name = "sm-fig1")]
    SmFig1,
    #[value(name = "sm-fig3")]
    SmFig3,
    #[value(name = "sm-fig4")]
    SmFig4,
    #[value(name = "sm-fig5")]
    SmFig5,
}

impl PresetId {
    pub fn name(self) -> &'static str {
        match self {
            PresetId::Fig2a => "fig2a",
            PresetId::Fig3a => "fig3a",
            PresetId::Fig3b => "fig3b",
            PresetId::Fig3c => "fig3c",
            PresetId::SmFig1 => "sm-fig1",
            PresetId::SmFig3 => "sm-fig3",
            PresetId::SmFig4 => "sm-fig4",
            PresetId::SmFig5 => "sm-fig5",
        }
    }
}

const TRACE_T_MAX: f64 = 30.0;
const TRACE_SAMPLES: usize = 301;
const LINE_POINTS: usize = 400;

/// Long-format table `x, z, <observable>`, x fastest.
pub fn map_table(result: &SweepResult) -> Table {
    let mut table = Table::new(["x", "z", result.metadata.observable.name()]);
    for (iz, &z) in result.z.iter().enumerate() {
        for (ix, &x) in result.x.iter().enumerate() {
            table.push(vec![x.into(), z.into(), result.get(ix, iz).into()]);
        }
    }
    table
}

/// Columns sharing one abscissa.
fn columns(axis: &str, abscissa: &[f64], series: &[(String, Vec<f64>)]) -> Product {
    let mut names = vec![axis.to_string()];
    names.extend(series.iter().map(|(n, _)| n.clone()));
    let mut table = Table::new(names.clone());
    for (i, &a) in abscissa.iter().enumerate() {
        let mut row: Vec<Cell> = vec![a.into()];
        row.extend(series.iter().map(|(_, v)| Cell::from(v[i])));
        table.push(row);
    }
    let mut doc = serde_json::Map::new();
    doc.insert(axis.to_string(), to_json(&abscissa));
    for (n, v) in series {
        doc.insert(n.clone(), to_json(v));
    }
    Product {
        table,
        json: serde_json::json!({ "columns": names, "data": doc }),
    }
}

fn map_product(result: SweepResult) -> Product {
    Product {
        table: map_table(&result),
        json: to_json(&result),
    }
}

fn sweep(
    model: SurfaceModel,
    dipole: DipoleConfig,
    x: AxisRange,
    z: AxisRange,
    observable: Observable,
    solver: CouplingSolver,
) -> Result<SweepResult, CliError> {
    let mut spec = SweepSpec::decay_map(model, dipole);
    spec.x = x;
    spec.z = z;
    spec.observable = observable;
    spec.solver = solver;
    Ok(evaluate(&spec, Execution::Parallel)?)
}

/// `D` along x̃ at fixed z̃.
fn decay_vs_x(model: SurfaceModel, dipole: DipoleConfig, x: AxisRange, z: f64) -> Result<Vec<f64>, CliError> {
    decay_vs_x_with(model, dipole, x, z, CouplingSolver::default())
}

fn decay_vs_x_with(
    model: SurfaceModel,
    dipole: DipoleConfig,
    x: AxisRange,
    z: f64,
    solver: CouplingSolver,
) -> Result<Vec<f64>, CliError> {
    Ok(sweep(model, dipole, x, AxisRange::single(z), Observable::RelativeDecay, solver)?
        .values
        .remove(0))
}

/// An observable along z̃ at fixed x̃.
fn along_z(model: SurfaceModel, dipole: DipoleConfig, x: f64, z: AxisRange, observable: Observable) -> Result<Vec<f64>, CliError> {
    let r = sweep(model, dipole, AxisRange::single(x), z, observable, CouplingSolver::default())?;
    Ok(r.values.into_iter().map(|row| row[0]).collect())
}

fn concurrence(model: &SurfaceModel, dipole: DipoleConfig, x: f64, z: f64) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let geometry = Geometry::new(x, z, dipole);
    let trace = concurrence_trace(&geometry, model, TRACE_T_MAX, TRACE_SAMPLES, &CouplingSolver::default())?;
    Ok((trace.t, trace.concurrence))
}

fn tag(prefix: &str, v: f64) -> String {
    format!("{prefix}{v}")
}

/// Panels of a preset, as `(suffix, data)`. An empty suffix means the
/// preset has a single panel.
pub fn build(id: PresetId) -> Result<Vec<(String, Product)>, CliError> {
    use DipoleConfig::{Xx, Zz};
    let free = SurfaceModel::FreeSpace;
    let perfect = SurfaceModel::PerfectConductor;
    let gold = SurfaceModel::gold();
    let niobium = SurfaceModel::niobium(0.01);

    let panels = match id {
        PresetId::Fig2a => {
            let x = AxisRange::new(0.05, 10.0, LINE_POINTS);
            let series = vec![
                ("free_xx".to_string(), decay_vs_x(free, Xx, x, 0.2)?),
                ("free_zz".to_string(), decay_vs_x(free, Zz, x, 0.2)?),
                ("perfect_xx".to_string(), decay_vs_x(perfect, Xx, x, 0.2)?),
                ("perfect_zz".to_string(), decay_vs_x(perfect, Zz, x, 0.2)?),
            ];
            let (t, c_xx) = concurrence(&perfect, Xx, 1.0, 0.2)?;
            let (_, c_zz) = concurrence(&perfect, Zz, 1.0, 0.2)?;
            vec![
                ("decay".to_string(), columns("x", &x.values(), &series)),
                (
                    "inset".to_string(),
                    columns("t", &t, &[("perfect_xx".into(), c_xx), ("perfect_zz".into(), c_zz)]),
                ),
            ]
        }
        PresetId::Fig3a | PresetId::Fig3b => {
            let model = if id == PresetId::Fig3a { niobium } else { gold };
            let spec = SweepSpec::decay_map(model, Xx);
            vec![(String::new(), map_product(evaluate(&spec, Execution::Parallel)?))]
        }
        PresetId::Fig3c => {
            let mut series = Vec::new();
            let mut time = Vec::new();
            for model in [free, perfect, niobium, gold] {
                let (t, c) = concurrence(&model, Xx, 1.0, 0.2)?;
                time = t;
                series.push((model.name().to_string(), c));
            }
            vec![(String::new(), columns("t", &time, &series))]
        }
        PresetId::SmFig1 => {
            let z = AxisRange::new(0.01, 10.0, LINE_POINTS);
            let gamma = vec![
                ("gamma_xx".to_string(), along_z(perfect, Xx, 1.0, z, Observable::GammaSelf)?),
                ("gamma_zz".to_string(), along_z(perfect, Zz, 1.0, z, Observable::GammaSelf)?),
            ];
            // At z̃ = 0.01 the evanescent integrand reaches ~1e5 while the
            // pair terms are O(0.1) or smaller; the Kronrod roundoff floor
            // (~1e-9 absolute) then sits above the default targets.
            let mut near_field = CouplingSolver::default();
            near_field.quadrature.relative_tolerance = 1e-8;
            near_field.quadrature.absolute_tolerance = 1e-8;
            let x = AxisRange::new(0.05, 3.0, LINE_POINTS);
            let decay = vec![
                ("perfect_xx".to_string(), decay_vs_x_with(perfect, Xx, x, 0.01, near_field)?),
                ("perfect_zz".to_string(), decay_vs_x_with(perfect, Zz, x, 0.01, near_field)?),
            ];
            vec![
                ("a".to_string(), columns("z", &z.values(), &gamma)),
                ("b".to_string(), columns("x", &x.values(), &decay)),
            ]
        }
        PresetId::SmFig3 => {
            let levels = [0.5, 1.0, 1.5];
            let z = AxisRange::new(0.05, 1.5, LINE_POINTS);
            let x = AxisRange::new(0.05, 3.0, LINE_POINTS);
            let mut vs_z = Vec::new();
            let mut vs_x = Vec::new();
            for v in levels {
                vs_z.push((tag("x", v), along_z(gold, Xx, v, z, Observable::RelativeDecay)?));
                vs_x.push((tag("z", v), decay_vs_x(gold, Xx, x, v)?));
            }
            vec![
                ("vs_z".to_string(), columns("z", &z.values(), &vs_z)),
                ("vs_x".to_string(), columns("x", &x.values(), &vs_x)),
            ]
        }
        PresetId::SmFig4 => {
            let mut series = Vec::new();
            let mut time = Vec::new();
            for z in [0.2, 0.4, 1.0] {
                let (t, c) = concurrence(&gold, Xx, 1.0, z)?;
                time = t;
                series.push((tag("z", z), c));
            }
            vec![(String::new(), columns("t", &time, &series))]
        }
        PresetId::SmFig5 => {
            let mut panels = Vec::new();
            for (suffix, ratio) in [("a", 0.1), ("b", 0.01)] {
                let spec = SweepSpec::decay_map(SurfaceModel::niobium(ratio), Xx);
                panels.push((suffix.to_string(), map_product(evaluate(&spec, Execution::Parallel)?)));
            }
            panels
        }
    };
    Ok(panels)
}

pub fn file_name(id: PresetId, suffix: &str, format: Format) -> String {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    if suffix.is_empty() {
        format!("{}.{ext}", id.name())
    } else {
        format!("{}_{suffix}.{ext}", id.name())
    }
}

pub fn write(id: PresetId, dir: &Path, format: Format) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (suffix, product) in build(id)? {
        let path = dir.join(file_name(id, &suffix, format));
        emit(&product.render(format)?, Some(&path))?;
        written.push(path);
    }
    Ok(written)
}
