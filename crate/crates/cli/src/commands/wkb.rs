//! `wkb` subcommands: single orbits, phase-space curves and weight
//! profiles of the semiclassical Hamiltonian.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use ghost_core::{
    integrate_orbit, phase_curves, weight_profile, HamiltonianSystem, StopSpec,
};

use crate::config::{FileConfig, GridSpec};
use crate::manifest::{manifest_path_for, ManifestBuilder};
use crate::output;
use crate::CliError;

use super::ModelArgs;

#[derive(Subcommand, Debug)]
pub enum WkbCmd {
    /// Integrate one orbit and write its (t, x, p, S) samples
    Orbit(OrbitArgs),
    /// Sample the curves p_H, p1, p2 of the phase plane
    Curves(CurvesArgs),
    /// Action and weight per starting momentum
    Weights(WeightsArgs),
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Distance eps - eps_c (alternative to --epsilon)
    #[arg(long)]
    pub phi: Option<f64>,
    /// Starting density (default 1.5 x_c)
    #[arg(long)]
    pub x0: Option<f64>,
    /// Starting momentum
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub p0: f64,
    /// Integrator tolerance, in [1e-15, 1e-8]
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Stop mode: decay (run to x_exit) or window (bottleneck transit)
    #[arg(long, default_value = "decay")]
    pub mode: String,
    /// Decay threshold (default 0.05 x_c)
    #[arg(long = "exit-x")]
    pub exit_x: Option<f64>,
    /// Bottleneck half-width for window mode
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Time cap
    #[arg(long = "t-cap", default_value_t = 1e9)]
    pub t_cap: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Decay rate (alternative to --phi)
    #[arg(long)]
    pub eps: Option<f64>,
    /// Distance eps - eps_c
    #[arg(long)]
    pub phi: Option<f64>,
    /// x grid, lo:hi:COUNT[lin|log] (default 0.05x_c : 3x_c : 601)
    #[arg(long = "x-grid")]
    pub x_grid: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Distance eps - eps_c
    #[arg(long)]
    pub phi: f64,
    /// System size entering the weight e^{-Omega S}
    #[arg(long)]
    pub omega: f64,
    /// Starting momenta, lo:hi:COUNT[lin]
    #[arg(long = "p0-grid", allow_hyphen_values = true)]
    pub p0_grid: String,
    /// Starting density (default 1.5 x_c)
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Time cap per orbit
    #[arg(long = "t-cap", default_value_t = 1e6)]
    pub t_cap: f64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cmd: &WkbCmd, file: &FileConfig) -> Result<(), CliError> {
    match cmd {
        WkbCmd::Orbit(args) => run_orbit(args, file),
        WkbCmd::Curves(args) => run_curves(args, file),
        WkbCmd::Weights(args) => run_weights(args, file),
    }
}

fn model_at_phi(
    args_model: &ModelArgs,
    file: &FileConfig,
    phi: Option<f64>,
    eps: Option<f64>,
) -> Result<ghost_core::ModelSpec, CliError> {
    let choice = args_model.choice(file, "hill");
    if let Some(phi) = phi {
        if !(phi > 0.0) {
            return Err(CliError::config("phi must be positive"));
        }
        let base = choice.build(None)?;
        let eps_c = base.critical_params()?.eps_c;
        Ok(base.with_eps(eps_c + phi)?)
    } else {
        choice.build(eps)
    }
}

fn run_orbit(args: &OrbitArgs, file: &FileConfig) -> Result<(), CliError> {
    let model = model_at_phi(&args.model, file, args.phi, None)?;
    let cp = model.critical_params()?;
    let x0 = args.x0.unwrap_or(1.5 * cp.x_c);
    let stop = match args.mode.as_str() {
        "decay" => StopSpec::full_decay(args.exit_x.unwrap_or(0.05 * cp.x_c)),
        "window" => StopSpec::bottleneck(args.delta),
        other => return Err(CliError::config(format!("unknown mode `{other}`"))),
    }
    .with_t_cap(args.t_cap);

    let sys = HamiltonianSystem::new(&model);
    let rec = integrate_orbit(&sys, x0, args.p0, &stop, args.tol)
        .map_err(|e| CliError::config(e.to_string()))?;

    let config = serde_json::json!({
        "model": model.label(),
        "epsilon": model.params().eps,
        "x0": x0,
        "p0": args.p0,
        "tol": args.tol,
        "mode": args.mode,
        "exit_reason": format!("{:?}", rec.exit_reason),
        "flight_time": rec.flight_time,
        "action": rec.action,
        "energy_drift": rec.energy_drift,
    });
    let mut mb = ManifestBuilder::new("wkb orbit", None, config);
    mb.emit(&args.out, &output::orbit_csv(&rec))?;
    mb.stage_done("orbit");
    mb.write(&manifest_path_for(&args.out))?;
    Ok(())
}

fn run_curves(args: &CurvesArgs, file: &FileConfig) -> Result<(), CliError> {
    let model = model_at_phi(&args.model, file, args.phi, args.eps)?;
    let cp = model.critical_params()?;
    let eps = model.params().eps;
    let grid = match &args.x_grid {
        Some(spec) => GridSpec::parse(spec)?.values(),
        None => GridSpec { lo: 0.05 * cp.x_c, hi: 3.0 * cp.x_c, n: 601, log: false }.values(),
    };
    let pc = phase_curves(&model, eps, &grid)?;

    let config = serde_json::json!({
        "model": model.label(),
        "epsilon": eps,
        "phi": eps - cp.eps_c,
        "min_h": {"x": pc.min_h.0, "p": pc.min_h.1},
        "min_p": {"x": pc.min_p.0, "p": pc.min_p.1},
        "p2_zeros": pc.p2_zeros.map(|(a, b)| serde_json::json!({"x_f": a, "x_0": b})),
        "points": grid.len(),
    });
    let mut mb = ManifestBuilder::new("wkb curves", None, config);
    mb.emit(&args.out, &output::curves_csv(&pc))?;
    mb.stage_done("curves");
    mb.write(&manifest_path_for(&args.out))?;
    Ok(())
}

fn run_weights(args: &WeightsArgs, file: &FileConfig) -> Result<(), CliError> {
    if !(args.omega > 0.0) {
        return Err(CliError::config("omega must be positive"));
    }
    let model = model_at_phi(&args.model, file, Some(args.phi), None)?;
    let cp = model.critical_params()?;
    let x0 = args.x0.unwrap_or(1.5 * cp.x_c);
    let p0s = GridSpec::parse(&args.p0_grid)?.values();
    let stop = StopSpec::full_decay(0.05 * cp.x_c).with_t_cap(args.t_cap);
    let sys = HamiltonianSystem::new(&model);
    let samples = weight_profile(&sys, args.omega, &p0s, x0, &stop, args.tol)
        .map_err(|e| CliError::config(e.to_string()))?;

    let config = serde_json::json!({
        "model": model.label(),
        "phi": args.phi,
        "epsilon": model.params().eps,
        "omega": args.omega,
        "x0": x0,
        "p0_grid": args.p0_grid,
        "tol": args.tol,
        "t_cap": args.t_cap,
    });
    let mut mb = ManifestBuilder::new("wkb weights", None, config);
    mb.emit(&args.out, &output::weights_csv(&samples))?;
    mb.stage_done("weights");
    mb.write(&manifest_path_for(&args.out))?;
    Ok(())
}
