//! `scaling` subcommands: flight-time sweeps, log-log fits and the
//! finite-size collapse.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use ghost_core::scaling::SearchBox;
use ghost_core::{
    collapse_fit, fit_loglog_slope, flight_time_sweep, EnsembleKind, EnsembleSpec,
    ProvenanceTag, ScalingCurve,
};

use crate::config::{FileConfig, GridSpec};
use crate::manifest::{manifest_path_for, read_omega_from_manifest, ManifestBuilder};
use crate::output;
use crate::pool::run_indexed;
use crate::CliError;

use super::ModelArgs;

#[derive(Subcommand, Debug)]
pub enum ScalingCmd {
    /// Sweep ensemble flight times over phi = eps - eps_c
    Flight(FlightArgs),
    /// Fit a log-log slope to a curve CSV over a phi window
    Fit(FitArgs),
    /// Fit finite-size collapse exponents to several curve CSVs
    Collapse(CollapseArgs),
}

#[derive(Args, Debug)]
pub struct FlightArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// phi grid, lo:hi:COUNT[log|lin]
    #[arg(long = "phi-grid")]
    pub phi_grid: String,
    /// Ensemble: `default`, `p0=V[,V...]`, or `negative:COUNT:SPAN`
    #[arg(long, default_value = "default")]
    pub ensemble: String,
    /// Significance cut: drop orbits with weight below this at --omega-ref
    #[arg(long = "weight-threshold", default_value_t = 1e-2)]
    pub weight_threshold: f64,
    #[arg(long = "omega-ref", default_value_t = 1000.0)]
    pub omega_ref: f64,
    /// Start at this multiple of x_c
    #[arg(long = "x0-factor", default_value_t = 1.5)]
    pub x0_factor: f64,
    /// Stop at this multiple of x_c
    #[arg(long = "exit-factor", default_value_t = 0.05)]
    pub exit_factor: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Curve CSV (sweep or figure schema)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Fit window, phi_lo:phi_hi
    #[arg(long)]
    pub window: String,
}

#[derive(Args, Debug)]
pub struct CollapseArgs {
    /// Curve CSVs, one per system size
    #[arg(long = "in", num_args = 2.., required = true)]
    pub inputs: Vec<PathBuf>,
    /// Omega per input, comma-separated; default reads each CSV's manifest
    #[arg(long)]
    pub omegas: Option<String>,
    /// Search box a_lo:a_hi:b_lo:b_hi
    #[arg(long = "box", default_value = "0:1.5:0:1")]
    pub search_box: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cmd: &ScalingCmd, file: &FileConfig, threads: usize) -> Result<(), CliError> {
    match cmd {
        ScalingCmd::Flight(args) => run_flight(args, file, threads),
        ScalingCmd::Fit(args) => run_fit(args),
        ScalingCmd::Collapse(args) => run_collapse(args),
    }
}

pub fn parse_ensemble(spec: &str, base: EnsembleSpec) -> Result<EnsembleSpec, CliError> {
    let kind = if spec == "default" {
        EnsembleKind::NegativeGrid { count: 100, span_cap: 0.1 }
    } else if let Some(list) = spec.strip_prefix("p0=") {
        let values: Result<Vec<f64>, _> = list.split(',').map(str::parse).collect();
        let values = values.map_err(|_| CliError::config(format!("bad p0 list `{list}`")))?;
        if values.is_empty() {
            return Err(CliError::config("empty p0 list"));
        }
        EnsembleKind::FixedSet(values)
    } else if let Some(rest) = spec.strip_prefix("negative:") {
        let (count, span) = rest
            .split_once(':')
            .ok_or_else(|| CliError::config(format!("bad ensemble `{spec}`")))?;
        EnsembleKind::NegativeGrid {
            count: count.parse().map_err(|_| CliError::config("bad ensemble count"))?,
            span_cap: span.parse().map_err(|_| CliError::config("bad ensemble span"))?,
        }
    } else {
        return Err(CliError::config(format!(
            "unknown ensemble `{spec}` (default | p0=... | negative:COUNT:SPAN)"
        )));
    };
    Ok(EnsembleSpec { kind, ..base })
}

fn run_flight(args: &FlightArgs, file: &FileConfig, threads: usize) -> Result<(), CliError> {
    let grid = GridSpec::parse(&args.phi_grid)?;
    if !(grid.lo > 0.0) {
        return Err(CliError::config("phi grid must be positive"));
    }
    let spec = parse_ensemble(
        &args.ensemble,
        EnsembleSpec {
            weight_threshold: args.weight_threshold,
            omega_ref: args.omega_ref,
            x0_factor: args.x0_factor,
            exit_factor: args.exit_factor,
            tol: args.tol,
            ..EnsembleSpec::default()
        },
    )?;
    let choice = args.model.choice(file, "hill");
    let model = choice.build(None)?;

    // phi points are independent work items; sweep them on the pool and
    // stitch in grid order
    let phis = grid.values();
    let per_point = run_indexed(phis.len(), threads, |i| {
        flight_time_sweep(&model, &phis[i..=i], &spec)
    });
    let mut points = Vec::new();
    let mut empty = Vec::new();
    for res in per_point {
        let sweep = res?;
        for p in &sweep.curve.points {
            points.push((p.phi, p.value, p.spread, p.n));
        }
        empty.extend(sweep.empty_points);
    }
    let curve = ScalingCurve::new(points, ProvenanceTag::HamiltonianEnsemble, None)?;

    let config = serde_json::json!({
        "model": model.label(),
        "phi_grid": args.phi_grid,
        "ensemble": args.ensemble,
        "weight_threshold": args.weight_threshold,
        "omega_ref": args.omega_ref,
        "x0_factor": args.x0_factor,
        "exit_factor": args.exit_factor,
        "tol": args.tol,
        "empty_points": empty,
        "threads_used": threads,
    });
    let mut mb = ManifestBuilder::new("scaling flight", None, config);
    mb.emit(&args.out, &output::curve_csv(&[(&curve, model.label())]))?;
    mb.stage_done("flight");
    mb.write(&manifest_path_for(&args.out))?;
    Ok(())
}

fn run_fit(args: &FitArgs) -> Result<(), CliError> {
    let (lo, hi) = args
        .window
        .split_once(':')
        .ok_or_else(|| CliError::config("window must be phi_lo:phi_hi"))?;
    let lo: f64 = lo.parse().map_err(|_| CliError::config("bad window lower bound"))?;
    let hi: f64 = hi.parse().map_err(|_| CliError::config("bad window upper bound"))?;
    let points = output::read_curve_csv(&args.input)?;
    let curve = ScalingCurve::new(points, ProvenanceTag::Ssa, None)?;
    let fit = fit_loglog_slope(&curve, (lo, hi))?;
    let doc = serde_json::json!({
        "input": args.input.display().to_string(),
        "window": {"phi_lo": lo, "phi_hi": hi},
        "slope": fit.slope,
        "intercept": fit.intercept,
        "stderr": fit.stderr,
        "r_squared": fit.r_squared,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("static json"));
    Ok(())
}

fn run_collapse(args: &CollapseArgs) -> Result<(), CliError> {
    let omegas: Vec<Option<f64>> = match &args.omegas {
        Some(list) => list
            .split(',')
            .map(|s| s.parse().map(Some).map_err(|_| CliError::config("bad omega list")))
            .collect::<Result<_, _>>()?,
        None => args.inputs.iter().map(|p| read_omega_from_manifest(p)).collect(),
    };
    if omegas.len() != args.inputs.len() {
        return Err(CliError::config("need one omega per input"));
    }

    let mut curves = Vec::new();
    for (path, omega) in args.inputs.iter().zip(&omegas) {
        let omega = omega.ok_or_else(|| {
            CliError::config(format!(
                "no omega for {}: pass --omegas or keep its manifest next to it",
                path.display()
            ))
        })?;
        let points = output::read_curve_csv(path)?;
        curves.push(ScalingCurve::new(points, ProvenanceTag::Ssa, Some(omega))?);
    }

    let parts: Vec<&str> = args.search_box.split(':').collect();
    if parts.len() != 4 {
        return Err(CliError::config("box must be a_lo:a_hi:b_lo:b_hi"));
    }
    let nums: Result<Vec<f64>, _> = parts.iter().map(|s| s.parse()).collect();
    let nums = nums.map_err(|_| CliError::config("bad search box bound"))?;
    let search = SearchBox { a: (nums[0], nums[1]), b: (nums[2], nums[3]) };

    let fit = collapse_fit(&curves, &search)?;
    let doc = serde_json::json!({
        "inputs": args.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "omegas": fit.curves_used,
        "a": fit.a,
        "b": fit.b,
        "objective": fit.objective,
        "objective_at_zero": fit.objective_at_zero,
    });
    let text = serde_json::to_string_pretty(&doc).expect("static json");
    println!("{text}");
    if let Some(out) = &args.out {
        output::write_file(out, &text)?;
    }
    Ok(())
}
