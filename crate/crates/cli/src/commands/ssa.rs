//! `ssa` subcommands: extinction-time sweeps and the stochastic
//! bifurcation estimate.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use ghost_core::{
    estimate_stochastic_bifurcation_with, sweep_extinction_times_with, SsaRunConfig,
    StochasticBifurcation,
};

use crate::config::{FileConfig, GridSpec};
use crate::manifest::{manifest_path_for, ManifestBuilder};
use crate::output;
use crate::pool::pool_runner;
use crate::CliError;

use super::{resolve_seed, ModelArgs};

#[derive(Subcommand, Debug)]
pub enum SsaCmd {
    /// Sweep mean extinction times over phi_s = eps - eps_bar_s
    Sweep(SweepArgs),
    /// Estimate the stochastic bifurcation point eps_bar_s
    Bifurcation(BifurcationArgs),
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// System size Omega
    #[arg(long)]
    pub omega: Option<u64>,
    /// phi_s grid, lo:hi:COUNT[log|lin]
    #[arg(long = "phi-grid")]
    pub phi_grid: String,
    /// Replicates per grid point
    #[arg(long)]
    pub replicates: Option<u32>,
    /// Base seed for the replicate streams
    #[arg(long)]
    pub seed: Option<u64>,
    /// Censoring horizon
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Initial density as a fraction of Omega
    #[arg(long = "x0-fraction")]
    pub x0_fraction: Option<f64>,
    /// Use this eps_bar_s instead of estimating it first
    #[arg(long = "eps-bar")]
    pub eps_bar: Option<f64>,
    /// Replicates per probe point of the bifurcation estimate
    #[arg(long = "probe-replicates", default_value_t = 200)]
    pub probe_replicates: u32,
    /// Probe points bracketing eps_c
    #[arg(long = "probe-points", default_value_t = 11)]
    pub probe_points: usize,
    /// Probe half-width around eps_c
    #[arg(long = "probe-span", default_value_t = 0.05)]
    pub probe_span: f64,
    /// Censoring horizon of the probe runs
    #[arg(long = "probe-t-max", default_value_t = 300.0)]
    pub probe_t_max: f64,
    /// Output CSV (columns phi_s,mean_TE,sem,n,n_censored)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BifurcationArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub omega: Option<u64>,
    /// Probe grid of eps values, lo:hi:COUNT[lin]; default brackets eps_c
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub replicates: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Write the estimate as JSON here as well as to stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cmd: &SsaCmd, file: &FileConfig, threads: usize) -> Result<(), CliError> {
    match cmd {
        SsaCmd::Sweep(args) => run_sweep(args, file, threads),
        SsaCmd::Bifurcation(args) => run_bifurcation(args, file, threads),
    }
}

/// Two-stage estimate of the stochastic bifurcation point: a coarse pass
/// over eps_c +- probe_span brackets the 50% crossing, then a fine pass
/// with triple the replicates pins it to a fraction of a coarse step.
/// The short probe horizon matters: it anchors the crossing at the basin
/// boundary of the start density instead of drifting into the
/// exponentially slow escape regime.
#[allow(clippy::too_many_arguments)]
pub fn estimate_eps_bar(
    model: &ghost_core::ModelSpec,
    omega: u64,
    seed: u64,
    probe_replicates: u32,
    probe_points: usize,
    probe_span: f64,
    probe_t_max: f64,
    x0_fraction: f64,
    threads: usize,
) -> Result<StochasticBifurcation, CliError> {
    let eps_c = model.critical_params()?.eps_c;
    let runner = pool_runner(threads);
    let grid = GridSpec {
        lo: eps_c - probe_span,
        hi: eps_c + probe_span,
        n: probe_points.max(2),
        log: false,
    }
    .values();
    let mut cfg = SsaRunConfig::new(omega, seed, probe_replicates);
    cfg.t_max = probe_t_max;
    cfg.x0_fraction = x0_fraction;
    let coarse = estimate_stochastic_bifurcation_with(model, &grid, &cfg, &runner)?;

    let step = 2.0 * probe_span / (probe_points.max(2) - 1) as f64;
    let fine_grid: Vec<f64> = (0..=8)
        .map(|i| coarse.eps_bar_s - step / 2.0 + i as f64 * step / 8.0)
        .collect();
    let mut fine_cfg = SsaRunConfig::new(omega, seed ^ 0xf1de, probe_replicates * 3);
    fine_cfg.t_max = probe_t_max;
    fine_cfg.x0_fraction = x0_fraction;
    match estimate_stochastic_bifurcation_with(model, &fine_grid, &fine_cfg, &runner) {
        Ok(fine) => Ok(fine),
        // crossing slid off the fine window: the coarse answer stands
        Err(ghost_core::SsaError::BracketError(_)) => Ok(coarse),
        Err(e) => Err(e.into()),
    }
}

fn run_sweep(args: &SweepArgs, file: &FileConfig, threads: usize) -> Result<(), CliError> {
    let grid = GridSpec::parse(&args.phi_grid)?;
    if !(grid.lo > 0.0) {
        return Err(CliError::config("phi_s grid must be positive"));
    }
    let omega = args.omega.or(file.omega).unwrap_or(500);
    if omega == 0 {
        return Err(CliError::config("omega must be positive"));
    }
    let replicates = args.replicates.or(file.replicates).unwrap_or(100);
    let seed = resolve_seed(args.seed, file);
    let t_max = args.t_max.or(file.t_max).unwrap_or(1e5);
    let x0_fraction = args.x0_fraction.or(file.x0_fraction).unwrap_or(0.75);

    let choice = args.model.choice(file, "hill");
    let model = choice.build(None)?;

    let mut mb = ManifestBuilder::new("ssa sweep", Some(seed), serde_json::Value::Null);

    // stage 1: locate the stochastic bifurcation unless it was supplied
    let (eps_bar, eps_bar_source) = match args.eps_bar {
        Some(e) => (e, "flag"),
        None => {
            let est = estimate_eps_bar(
                &model,
                omega,
                seed ^ 0x5eed_b1f0,
                args.probe_replicates,
                args.probe_points,
                args.probe_span,
                args.probe_t_max,
                x0_fraction,
                threads,
            )?;
            (est.eps_bar_s, "estimated")
        }
    };
    mb.stage_done("bifurcation");

    // stage 2: the sweep itself
    let mut cfg = SsaRunConfig::new(omega, seed, replicates);
    cfg.t_max = t_max;
    cfg.x0_fraction = x0_fraction;
    let points =
        sweep_extinction_times_with(&model, eps_bar, &grid.values(), &cfg, &pool_runner(threads))?;
    mb.stage_done("sweep");

    let config = serde_json::json!({
        "model": model.label(),
        "k": model.params().k,
        "C": model.params().c,
        "A": model.params().a,
        "omega": omega as f64,
        "phi_grid": args.phi_grid,
        "replicates": replicates,
        "t_max": t_max,
        "x0_fraction": x0_fraction,
        "eps_bar_s": eps_bar,
        "eps_bar_source": eps_bar_source,
        "threads_used": threads,
    });
    let mut mb = replace_config(mb, config);
    mb.emit(&args.out, &output::ssa_sweep_csv(&points))?;
    mb.write(&manifest_path_for(&args.out))?;
    for p in &points {
        if p.flagged {
            eprintln!(
                "warning: phi_s = {} is {}% censored; its mean is biased",
                output::fmt_value(p.phi_s),
                (p.stats.censoring_fraction() * 100.0).round()
            );
        }
    }
    Ok(())
}

fn run_bifurcation(args: &BifurcationArgs, file: &FileConfig, threads: usize) -> Result<(), CliError> {
    let omega = args.omega.or(file.omega).unwrap_or(500);
    let replicates = args.replicates.or(file.replicates).unwrap_or(64);
    let seed = resolve_seed(args.seed, file);
    let t_max = args.t_max.or(file.t_max).unwrap_or(5e3);
    let x0_fraction = file.x0_fraction.unwrap_or(0.75);

    let choice = args.model.choice(file, "hill");
    let model = choice.build(None)?;
    let eps_c = model.critical_params()?.eps_c;

    let grid = match &args.grid {
        Some(spec) => GridSpec::parse(spec)?.values(),
        None => GridSpec { lo: eps_c - 0.05, hi: eps_c + 0.05, n: 11, log: false }.values(),
    };
    let mut cfg = SsaRunConfig::new(omega, seed, replicates);
    cfg.t_max = t_max;
    cfg.x0_fraction = x0_fraction;
    let est = estimate_stochastic_bifurcation_with(&model, &grid, &cfg, &pool_runner(threads))?;

    let doc = serde_json::json!({
        "model": model.label(),
        "omega": omega as f64,
        "seed": seed,
        "t_max": t_max,
        "replicates": replicates,
        "eps_bar_s": est.eps_bar_s,
        "uncertainty": est.uncertainty,
        "phi_s_of_eps_c": eps_c - est.eps_bar_s,
        "diagnostics": est
            .diagnostics
            .iter()
            .map(|(e, raw, smooth)| serde_json::json!({"eps": e, "extinct_fraction": raw, "smoothed": smooth}))
            .collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("static json");
    println!("{text}");
    if let Some(out) = &args.out {
        output::write_file(out, &text)?;
    }
    Ok(())
}

// ManifestBuilder wants its config at construction; the sweep only knows
// the resolved eps_bar afterwards, so rebuild with timings carried over.
fn replace_config(mb: ManifestBuilder, config: serde_json::Value) -> ManifestBuilder {
    mb.with_config(config)
}
