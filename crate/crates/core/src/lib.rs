//! Core numerics for quantifying slowing-down ("ghost") transients in
//! stochastic birth-death systems near a saddle-node bifurcation.
//!
//! The crate cross-validates two pictures of the same system:
//!
//! * exact stochastic simulation of the jump process, measuring extinction
//!   times and their scaling with the bifurcation distance ([`ssa`]),
//! * the semiclassical Hamiltonian flow built from the same rate functions,
//!   whose orbit flight times and action weights reproduce that scaling
//!   ([`hamiltonian`], [`orbit`]).
//!
//! [`model`] defines the reaction systems in both extensive (integer count)
//! and intensive (density) form, [`integrator`] provides the adaptive
//! Fehlberg 7(8) pair used for orbits, and [`scaling`] extracts the
//! scaling laws: log-log slopes, plateau/bend location and finite-size
//! data collapse.
//!
//! The crate is `no_std` + `alloc`; all float transcendentals go through
//! `libm` so results are bit-reproducible across platforms and thread
//! counts. File formats, the CLI and parallel sweep drivers live in the
//! companion `ghost-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod hamiltonian;
pub mod integrator;
pub mod math;
pub mod model;
pub mod numeric;
pub mod orbit;
pub mod rng;
pub mod scaling;
pub mod ssa;
pub mod stats;

pub use hamiltonian::{phase_curves, HamiltonianSystem, PhaseCurves};
pub use model::{CriticalParams, ModelError, ModelKind, ModelParams, ModelSpec, ReactionSpec};
pub use orbit::{
    flight_time, integrate_orbit, path_weight, weight_profile, ExitReason, OrbitError,
    PathWeight, PathWeightSample, StopMode, StopSpec, TrajectoryRecord,
};
pub use scaling::{
    appendix_roots, bend_location, collapse_fit, fit_loglog_slope, flight_time_sweep,
    transit_time_quadrature, AppendixRoots, CollapseFit, EnsembleKind, EnsembleSpec,
    ProvenanceTag, ScalingCurve, ScalingError, SlopeFit,
};
pub use ssa::{
    estimate_stochastic_bifurcation, estimate_stochastic_bifurcation_with,
    mean_extinction_time, mean_extinction_time_with, simulate_to_extinction,
    sweep_extinction_times, sweep_extinction_times_with, sweep_to_curve, conditional_curve,
    ExtinctionSample,
    ExtinctionStats, ReplicateRunner, SerialRunner, SsaError, SsaRunConfig, SsaSweepPoint,
    StochasticBifurcation,
};
