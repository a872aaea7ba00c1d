//! `cp-entangle`: coupling coefficients, decay maps, concurrence traces and
//! figure presets for two emitters near a planar medium.

mod config;
mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cp_entangle::sweeps::{concurrence_trace, evaluate, find_optimal_z, Execution};
use cp_entangle::Error;

use config::{
    DipoleChoice, Dispersion, Format, ObservableChoice, PolarizationChoice, RunConfig, SurfaceKind,
};
use output::{emit, to_json, Cell, Product, Table};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "output error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            return CliError::Config(e.to_string());
        }
        match &e {
            Error::Bracket { samples } => {
                let scan: Vec<String> = samples.iter().map(|(z, d)| format!("  z = {z:.6}, D = {d:.6e}")).collect();
                CliError::Numerical(format!("{e}\ncoarse scan:\n{}", scan.join("\n")))
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cp-entangle", version, about = "Collective decay and entanglement of two emitters near a surface")]
struct Cli {
    /// TOML file with run parameters; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config_file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Γ/Γ₀, Γ₁₂/Γ₀, Ω₁₂/Γ₀ and D/Γ₀ at one point.
    Coeffs {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// An observable on an (x̃, z̃) grid.
    DecayMap {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Concurrence and density-matrix elements versus Γ₀t from |eg⟩.
    Trace {
        #[command(flatten)]
        physics: PhysicsArgs,
        /// Final Γ₀t.
        #[arg(long, allow_negative_numbers = true)]
        tmax: Option<f64>,
        /// Number of time samples, endpoints included.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Height z̃ minimising D at fixed x̃.
    OptimalZ {
        #[command(flatten)]
        physics: PhysicsArgs,
        #[arg(long, allow_negative_numbers = true)]
        z_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        z_max: Option<f64>,
        /// Width of the final bracket.
        #[arg(long, allow_negative_numbers = true)]
        tolerance: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Data behind one of the figures, one file per panel.
    Reproduce {
        id: presets::PresetId,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug, Args)]
struct PhysicsArgs {
    #[arg(long, value_enum)]
    surface: Option<SurfaceKind>,
    /// Dipole orientation shared by both emitters.
    #[arg(long = "config", value_enum, conflicts_with = "theta")]
    dipole: Option<DipoleChoice>,
    /// Dipole angle from the surface plane, radians.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Scaled separation k₀x.
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Scaled height k₀z.
    #[arg(long, allow_negative_numbers = true)]
    z: Option<f64>,
    /// Transition wavelength, m.
    #[arg(long, allow_negative_numbers = true)]
    wavelength: Option<f64>,
    /// Drude plasma frequency, rad/s.
    #[arg(long)]
    plasma_frequency: Option<f64>,
    /// Drude loss rate, rad/s.
    #[arg(long)]
    loss_rate: Option<f64>,
    /// Superconductor critical temperature, K.
    #[arg(long)]
    critical_temperature: Option<f64>,
    /// T / T_c.
    #[arg(long)]
    temperature_ratio: Option<f64>,
    /// London length at T = 0, m.
    #[arg(long)]
    london_length: Option<f64>,
    /// Normal-state conductivity, S/m.
    #[arg(long)]
    conductivity: Option<f64>,
    /// Frequency at which the permittivity is evaluated.
    #[arg(long, value_enum)]
    dispersion: Option<Dispersion>,
    #[arg(long, value_enum)]
    polarization: Option<PolarizationChoice>,
    #[arg(long)]
    relative_tolerance: Option<f64>,
    #[arg(long)]
    absolute_tolerance: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<usize>,
    #[arg(long)]
    evanescent_cutoff_scale: Option<f64>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long)]
    x_count: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    z_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    z_max: Option<f64>,
    #[arg(long)]
    z_count: Option<usize>,
    #[arg(long, value_enum)]
    observable: Option<ObservableChoice>,
    /// Γ₀t for `--observable concurrence`.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn set<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

impl PhysicsArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let s = &mut cfg.surface;
        set(&mut s.kind, self.surface);
        set(&mut s.plasma_frequency, self.plasma_frequency);
        set(&mut s.loss_rate, self.loss_rate);
        set(&mut s.critical_temperature, self.critical_temperature);
        set(&mut s.temperature_ratio, self.temperature_ratio);
        set(&mut s.london_length, self.london_length);
        set(&mut s.conductivity, self.conductivity);
        let g = &mut cfg.geometry;
        if self.dipole.is_some() {
            g.dipole = self.dipole;
            g.theta = None;
        }
        set(&mut g.theta, self.theta);
        set(&mut g.x, self.x);
        set(&mut g.z, self.z);
        set(&mut g.wavelength, self.wavelength);
        let q = &mut cfg.solver;
        set(&mut q.dispersion, self.dispersion);
        set(&mut q.polarization, self.polarization);
        set(&mut q.relative_tolerance, self.relative_tolerance);
        set(&mut q.absolute_tolerance, self.absolute_tolerance);
        set(&mut q.max_subdivisions, self.max_subdivisions);
        set(&mut q.evanescent_cutoff_scale, self.evanescent_cutoff_scale);
    }
}

impl GridArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let w = &mut cfg.sweep;
        set(&mut w.x_min, self.x_min);
        set(&mut w.x_max, self.x_max);
        set(&mut w.x_count, self.x_count);
        set(&mut w.z_min, self.z_min);
        set(&mut w.z_max, self.z_max);
        set(&mut w.z_count, self.z_count);
        set(&mut w.observable, self.observable);
        set(&mut w.t, self.t);
    }
}

impl OutputArgs {
    fn apply(self, cfg: &mut RunConfig) {
        set(&mut cfg.output.path, self.output);
        set(&mut cfg.output.format, self.format);
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CP_ENTANGLE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("CP_ENTANGLE_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size the worker pool: {e}")))
}

fn split_cells(name: &str, s: cp_entangle::greens::Split) -> [(String, Cell); 3] {
    [
        (name.to_string(), s.total().into()),
        (format!("{name}_free"), s.free.into()),
        (format!("{name}_scattering"), s.scattering.into()),
    ]
}

fn coeffs(cfg: &RunConfig) -> Result<Product, CliError> {
    let model = cfg.surface()?;
    let geometry = cfg.geometry()?;
    let solver = cfg.solver()?;
    let set = solver.coupling_set(&geometry, &model)?;
    let mut fields: Vec<(String, Cell)> = vec![
        ("surface".into(), model.name().into()),
        ("dipole".into(), geometry.dipole.label().into()),
        ("x".into(), geometry.x_scaled.into()),
        ("z".into(), geometry.z_scaled.into()),
    ];
    fields.extend(split_cells("gamma", set.gamma_self));
    fields.extend(split_cells("gamma_12", set.gamma_cross));
    fields.extend(split_cells("omega_12", set.omega_cross));
    fields.extend(split_cells("relative_decay", set.relative_decay()));
    let mut table = Table::new(fields.iter().map(|(k, _)| k.clone()));
    table.push(fields.into_iter().map(|(_, v)| v).collect());
    let json = serde_json::json!({
        "model": model,
        "geometry": geometry,
        "solver": solver,
        "couplings": set,
        "relative_decay": set.relative_decay(),
    });
    Ok(Product { table, json })
}

fn decay_map(cfg: &RunConfig) -> Result<Product, CliError> {
    let spec = cfg.sweep()?;
    let result = evaluate(&spec, Execution::Parallel)?;
    Ok(Product {
        table: presets::map_table(&result),
        json: to_json(&result),
    })
}

fn trace(cfg: &RunConfig) -> Result<Product, CliError> {
    let (t_max, samples) = cfg.trace_window();
    let model = cfg.surface()?;
    let geometry = cfg.geometry()?;
    let solver = cfg.solver()?;
    let trace = concurrence_trace(&geometry, &model, t_max, samples, &solver)?;
    let mut table = Table::new(["t_gamma0", "concurrence", "rho22", "rho33", "rho44", "re_rho23", "im_rho23"]);
    for ((t, c), state) in trace.t.iter().zip(&trace.concurrence).zip(&trace.states) {
        let rho23 = state.element(1, 2);
        table.push(vec![
            (*t).into(),
            (*c).into(),
            state.element(1, 1).re.into(),
            state.element(2, 2).re.into(),
            state.element(3, 3).re.into(),
            rho23.re.into(),
            rho23.im.into(),
        ]);
    }
    let json = serde_json::json!({
        "model": model,
        "geometry": geometry,
        "solver": solver,
        "trace": trace,
    });
    Ok(Product { table, json })
}

fn optimal_z(cfg: &RunConfig) -> Result<Product, CliError> {
    let search = cfg.search()?;
    let best = find_optimal_z(&search)?;
    let mut table = Table::new(["x", "z", "relative_decay", "at_boundary"]);
    table.push(vec![
        search.x_scaled.into(),
        best.z.into(),
        best.relative_decay.into(),
        best.at_boundary.into(),
    ]);
    let json = serde_json::json!({ "search": search, "optimum": best });
    Ok(Product { table, json })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config_file {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    configure_threads()?;
    let (product, out) = match cli.command {
        Command::Coeffs { physics, out } => {
            physics.apply(&mut cfg);
            out.apply(&mut cfg);
            (coeffs(&cfg)?, &cfg.output)
        }
        Command::DecayMap { physics, grid, out } => {
            physics.apply(&mut cfg);
            grid.apply(&mut cfg);
            out.apply(&mut cfg);
            (decay_map(&cfg)?, &cfg.output)
        }
        Command::Trace {
            physics,
            tmax,
            samples,
            out,
        } => {
            physics.apply(&mut cfg);
            set(&mut cfg.trace.t_max, tmax);
            set(&mut cfg.trace.samples, samples);
            out.apply(&mut cfg);
            (trace(&cfg)?, &cfg.output)
        }
        Command::OptimalZ {
            physics,
            z_min,
            z_max,
            tolerance,
            out,
        } => {
            physics.apply(&mut cfg);
            set(&mut cfg.search.z_min, z_min);
            set(&mut cfg.search.z_max, z_max);
            set(&mut cfg.search.tolerance, tolerance);
            out.apply(&mut cfg);
            (optimal_z(&cfg)?, &cfg.output)
        }
        Command::Reproduce { id, output_dir, format } => {
            let format = format.unwrap_or_default();
            for path in presets::write(id, &output_dir, format)? {
                eprintln!("wrote {}", path.display());
            }
            return Ok(());
        }
    };
    let bytes = product.render(out.format.unwrap_or_default())?;
    emit(&bytes, out.path.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cp-entangle: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
