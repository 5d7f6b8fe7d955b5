//! `figures` subcommands: plot-ready CSV bundles for the three standard
//! views (extinction/flight scaling, phase-plane curves, weight profiles),
//! each with a manifest tying the data to its full configuration.

use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use ghost_core::{
    conditional_curve, flight_time_sweep, phase_curves, sweep_extinction_times_with,
    weight_profile, EnsembleSpec, HamiltonianSystem, ModelSpec, SsaRunConfig, StopSpec,
};

use crate::config::{FileConfig, GridSpec};
use crate::manifest::ManifestBuilder;
use crate::output;
use crate::pool::pool_runner;
use crate::CliError;

use super::{resolve_seed, ssa::estimate_eps_bar};

#[derive(Subcommand, Debug)]
pub enum FiguresCmd {
    /// Extinction-time and flight-time scaling for both models
    Fig1(Fig1Args),
    /// Phase-plane curves p_H, p1, p2 at three distances from criticality
    Fig2(Fig2Args),
    /// Weight profiles over p0 at four distances from criticality
    Fig3(Fig3Args),
}

#[derive(Args, Debug)]
pub struct Fig1Args {
    /// Output directory
    #[arg(long = "out-dir", default_value = "figures")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Full-size run: Omega = 1000 and 1000 replicates
    #[arg(long = "paper-scale", default_value_t = false)]
    pub paper_scale: bool,
    #[arg(long)]
    pub omega: Option<u64>,
    #[arg(long)]
    pub replicates: Option<u32>,
    /// phi grid shared by both panels
    #[arg(long = "phi-grid", default_value = "1e-5:1e-1:12log")]
    pub phi_grid: String,
}

#[derive(Args, Debug)]
pub struct Fig2Args {
    #[command(flatten)]
    pub model: super::ModelArgs,
    #[arg(long = "out-dir", default_value = "figures")]
    pub out_dir: PathBuf,
    /// Distances eps - eps_c of the panels
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![1.127e-5, 1e-2, 0.114])]
    pub phis: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct Fig3Args {
    #[command(flatten)]
    pub model: super::ModelArgs,
    #[arg(long = "out-dir", default_value = "figures")]
    pub out_dir: PathBuf,
    /// Distances eps - eps_c of the panels
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![1.127e-5, 1.1e-3, 1e-2, 0.114])]
    pub phis: Vec<f64>,
    #[arg(long, default_value_t = 1000.0)]
    pub omega: f64,
    #[arg(long = "p0-grid", default_value = "-0.08:0.08:81", allow_hyphen_values = true)]
    pub p0_grid: String,
}

pub fn run(cmd: &FiguresCmd, file: &FileConfig, threads: usize) -> Result<(), CliError> {
    match cmd {
        FiguresCmd::Fig1(args) => run_fig1(args, file, threads),
        FiguresCmd::Fig2(args) => run_fig2(args, file),
        FiguresCmd::Fig3(args) => run_fig3(args, file),
    }
}

fn run_fig1(args: &Fig1Args, file: &FileConfig, threads: usize) -> Result<(), CliError> {
    let grid = GridSpec::parse(&args.phi_grid)?;
    if !(grid.lo > 0.0) {
        return Err(CliError::config("phi grid must be positive"));
    }
    let (omega_default, reps_default) = if args.paper_scale { (1000, 1000) } else { (500, 100) };
    let omega = args.omega.or(file.omega).unwrap_or(omega_default);
    if omega == 0 {
        return Err(CliError::config("omega must be positive"));
    }
    let replicates = args.replicates.or(file.replicates).unwrap_or(reps_default);
    let seed = resolve_seed(args.seed, file);
    let phis = grid.values();

    let models: Vec<ModelSpec> = vec![
        ModelSpec::hill(1.0, 1.0, 0.51)?,
        ModelSpec::autocatalytic(1.0, 1.0, 0.26)?,
    ];

    let config = serde_json::json!({
        "omega": omega as f64,
        "replicates": replicates,
        "phi_grid": args.phi_grid,
        "paper_scale": args.paper_scale,
        "threads_used": threads,
        "models": ["hill", "autocatalytic"],
    });
    let mut mb = ManifestBuilder::new("figures fig1", Some(seed), config);
    let manifest_path = args.out_dir.join("manifest.json");

    let result = (|| -> Result<(), CliError> {
        // top panel: extinction-time sweeps against phi_s
        let mut top = Vec::new();
        for (mi, model) in models.iter().enumerate() {
            let est = estimate_eps_bar(
                model,
                omega,
                seed ^ (0xb1f0 + mi as u64),
                replicates.min(200),
                11,
                0.05,
                300.0,
                0.75,
                threads,
            )?;
            let mut cfg = SsaRunConfig::new(omega, seed.wrapping_add(mi as u64), replicates);
            cfg.t_max = 1e5;
            let points = sweep_extinction_times_with(
                model,
                est.eps_bar_s,
                &phis,
                &cfg,
                &pool_runner(threads),
            )?;
            // near the threshold the figure shows the extinction-
            // conditioned means; the n column carries the uncensored count
            let curve = conditional_curve(&points, omega)?;
            top.push((curve, model.label()));
            mb.stage_done(&format!("ssa-{}", model.label()));
        }
        let top_refs: Vec<_> = top.iter().map(|(c, l)| (c, *l)).collect();
        mb.emit(&args.out_dir.join("fig1_top.csv"), &output::curve_csv(&top_refs))?;

        // bottom panel: flight-time sweeps against phi
        let mut bottom = Vec::new();
        for model in &models {
            let sweep = flight_time_sweep(model, &phis, &EnsembleSpec::default())?;
            bottom.push((sweep.curve, model.label()));
            mb.stage_done(&format!("flight-{}", model.label()));
        }
        let bottom_refs: Vec<_> = bottom.iter().map(|(c, l)| (c, *l)).collect();
        mb.emit(&args.out_dir.join("fig1_bottom.csv"), &output::curve_csv(&bottom_refs))?;
        Ok(())
    })();

    finish(mb, &manifest_path, result)
}

fn run_fig2(args: &Fig2Args, file: &FileConfig) -> Result<(), CliError> {
    validate_phis(&args.phis)?;
    let choice = args.model.choice(file, "hill");
    let base = choice.build(None)?;
    let cp = base.critical_params()?;

    let config = serde_json::json!({
        "model": base.label(),
        "phis": args.phis,
        "eps_c": cp.eps_c,
    });
    let mut mb = ManifestBuilder::new("figures fig2", None, config);
    let manifest_path = args.out_dir.join("fig2_manifest.json");

    let result = (|| -> Result<(), CliError> {
        let grid = GridSpec { lo: 0.05 * cp.x_c, hi: 3.0 * cp.x_c, n: 601, log: false }.values();
        for &phi in &args.phis {
            let eps = cp.eps_c + phi;
            let pc = phase_curves(&base, eps, &grid)?;
            let name = format!("fig2_phi_{}.csv", output::fmt_value(phi));
            mb.emit(&args.out_dir.join(name), &output::curves_csv(&pc))?;
            mb.stage_done(&format!("curves-{}", output::fmt_value(phi)));
        }
        Ok(())
    })();

    finish(mb, &manifest_path, result)
}

fn run_fig3(args: &Fig3Args, file: &FileConfig) -> Result<(), CliError> {
    validate_phis(&args.phis)?;
    if !(args.omega > 0.0) {
        return Err(CliError::config("omega must be positive"));
    }
    let p0s = GridSpec::parse(&args.p0_grid)?.values();
    let choice = args.model.choice(file, "hill");
    let base = choice.build(None)?;
    let cp = base.critical_params()?;

    let config = serde_json::json!({
        "model": base.label(),
        "phis": args.phis,
        "omega": args.omega,
        "p0_grid": args.p0_grid,
    });
    let mut mb = ManifestBuilder::new("figures fig3", None, config);
    let manifest_path = args.out_dir.join("fig3_manifest.json");

    let result = (|| -> Result<(), CliError> {
        for &phi in &args.phis {
            let model = base.with_eps(cp.eps_c + phi)?;
            let sys = HamiltonianSystem::new(&model);
            let stop = StopSpec::full_decay(0.05 * cp.x_c).with_t_cap(1e6);
            let samples = weight_profile(&sys, args.omega, &p0s, 1.5 * cp.x_c, &stop, 1e-12)
                .map_err(|e| CliError::numerical(e.to_string()))?;
            let name = format!("fig3_phi_{}.csv", output::fmt_value(phi));
            mb.emit(&args.out_dir.join(name), &output::weights_csv(&samples))?;
            mb.stage_done(&format!("weights-{}", output::fmt_value(phi)));
        }
        Ok(())
    })();

    finish(mb, &manifest_path, result)
}

fn validate_phis(phis: &[f64]) -> Result<(), CliError> {
    if phis.is_empty() {
        return Err(CliError::config("phi list must not be empty"));
    }
    if phis.iter().any(|&p| !(p > 0.0)) {
        return Err(CliError::config("phi values must be positive"));
    }
    Ok(())
}

/// Write the manifest whether the stages succeeded or not; a failed stage
/// leaves its partial outputs listed with status "failed: ...".
fn finish(mut mb: ManifestBuilder, path: &Path, result: Result<(), CliError>) -> Result<(), CliError> {
    if let Err(e) = &result {
        mb.fail(&e.to_string());
    }
    mb.write(path)?;
    result
}
