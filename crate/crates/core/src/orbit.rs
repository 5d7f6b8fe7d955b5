//! Orbit integration of the Hamiltonian flow: trajectories with
//! accumulated action, event-located flight times, and path weights.
//!
//! The state vector is (x, p, S) with dS/dt = p xdot - H, so the action
//! rides along as an augmented coordinate. Events (decay threshold,
//! bottleneck window edges, guard rails) are localized by bisection on
//! the sign change across an accepted step, using fixed eighth-order
//! sub-steps as the interpolant.

use alloc::vec::Vec;

use crate::hamiltonian::HamiltonianSystem;
use crate::integrator::{OdeSystem, Rkf78};
use crate::math;

/// Why an orbit stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitReason {
    /// x decayed to the exit threshold (or completed the transit window).
    ReachedExitThreshold,
    /// x or p left the configured guard window; the orbit is not decaying.
    LeftWindow,
    /// Time cap hit before any other event.
    TimeCap,
    /// Step size underflowed; partial trajectory returned.
    StepFailure,
}

/// What to measure and where to give up.
#[derive(Clone, Copy, Debug)]
pub enum StopMode {
    /// Run until x <= x_exit.
    FullDecay { x_exit: f64 },
    /// Measure the time between the downward crossings of x_c + delta and
    /// x_c - delta; the run still ends at the far edge.
    BottleneckTransit { delta: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct StopSpec {
    pub mode: StopMode,
    /// Absolute time cap; hitting it is an exit reason, never a panic.
    pub t_cap: f64,
    /// Guard: abort when x exceeds this (runaway growth).
    pub x_cap: f64,
    /// Guard: abort when |p| exceeds this.
    pub p_cap: f64,
}

impl StopSpec {
    pub fn full_decay(x_exit: f64) -> Self {
        Self { mode: StopMode::FullDecay { x_exit }, t_cap: 1e9, x_cap: 100.0, p_cap: 25.0 }
    }

    pub fn bottleneck(delta: f64) -> Self {
        Self { mode: StopMode::BottleneckTransit { delta }, t_cap: 1e9, x_cap: 100.0, p_cap: 25.0 }
    }

    pub fn with_t_cap(mut self, t_cap: f64) -> Self {
        self.t_cap = t_cap;
        self
    }
}

/// One recorded point of an orbit.
#[derive(Clone, Copy, Debug)]
pub struct OrbitSample {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    /// Accumulated action int (p xdot - H) dt up to t.
    pub action: f64,
}

/// A time-ordered orbit record with exit diagnostics.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub samples: Vec<OrbitSample>,
    pub exit_reason: ExitReason,
    /// Duration to the triggering event: for FullDecay the exit time, for
    /// BottleneckTransit the window transit time.
    pub flight_time: f64,
    /// max |H(x(t), p(t)) - H(x0, p0)| over the recorded points.
    pub energy_drift: f64,
    /// Action at the exit point.
    pub action: f64,
    /// (t, x, p) at the exit point.
    pub exit_state: (f64, f64, f64),
}

#[derive(Clone, Debug)]
pub enum OrbitError {
    InvalidInput(&'static str),
    /// The orbit never completed the requested measurement; the partial
    /// record rides along for diagnostics.
    NoTransit(TrajectoryRecord),
}

impl core::fmt::Display for OrbitError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OrbitError::InvalidInput(what) => write!(f, "invalid input: {what}"),
            OrbitError::NoTransit(rec) => write!(
                f,
                "orbit exited with {:?} before completing the measurement",
                rec.exit_reason
            ),
        }
    }
}

impl core::error::Error for OrbitError {}

struct Flow<'a, 'm> {
    sys: &'a HamiltonianSystem<'m>,
}

impl<'a, 'm> OdeSystem<3> for Flow<'a, 'm> {
    fn rhs(&self, _t: f64, y: &[f64; 3], dydt: &mut [f64; 3]) {
        let (dx, dp, h) = self.sys.eval_flow(y[0], y[1]);
        dydt[0] = dx;
        dydt[1] = dp;
        dydt[2] = y[1] * dx - h;
    }
}

const T_TOL_ABS: f64 = 1e-12;

/// Integrate one orbit from (x0, p0) until the stop condition fires.
///
/// `tol` is the local integrator tolerance, accepted in [1e-15, 1e-8].
pub fn integrate_orbit(
    sys: &HamiltonianSystem<'_>,
    x0: f64,
    p0: f64,
    stop: &StopSpec,
    tol: f64,
) -> Result<TrajectoryRecord, OrbitError> {
    run_orbit(sys, x0, p0, stop, tol, true)
}

/// Flight time of an orbit under the given stop mode.
///
/// FullDecay returns the time to reach x_exit; BottleneckTransit the time
/// between the two window-edge crossings. An orbit that ends any other
/// way yields `NoTransit` carrying the partial record.
pub fn flight_time(
    sys: &HamiltonianSystem<'_>,
    x0: f64,
    p0: f64,
    stop: &StopSpec,
    tol: f64,
) -> Result<f64, OrbitError> {
    flight_record(sys, x0, p0, stop, tol).map(|rec| rec.flight_time)
}

/// Like [`flight_time`] but returning the whole (lean, unsampled) record,
/// so callers can read the exit action alongside the duration.
pub fn flight_record(
    sys: &HamiltonianSystem<'_>,
    x0: f64,
    p0: f64,
    stop: &StopSpec,
    tol: f64,
) -> Result<TrajectoryRecord, OrbitError> {
    let rec = run_orbit(sys, x0, p0, stop, tol, false)?;
    if rec.exit_reason == ExitReason::ReachedExitThreshold {
        Ok(rec)
    } else {
        Err(OrbitError::NoTransit(rec))
    }
}

fn run_orbit(
    sys: &HamiltonianSystem<'_>,
    x0: f64,
    p0: f64,
    stop: &StopSpec,
    tol: f64,
    store_samples: bool,
) -> Result<TrajectoryRecord, OrbitError> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(OrbitError::InvalidInput("x0 must be positive"));
    }
    if !p0.is_finite() {
        return Err(OrbitError::InvalidInput("p0 must be finite"));
    }
    if !(1e-15..=1e-8).contains(&tol) {
        return Err(OrbitError::InvalidInput("tol must lie in [1e-15, 1e-8]"));
    }
    let (x_exit, window) = match stop.mode {
        StopMode::FullDecay { x_exit } => {
            if !(0.0 < x_exit && x_exit < x0) {
                return Err(OrbitError::InvalidInput("x_exit must satisfy 0 < x_exit < x0"));
            }
            (x_exit, None)
        }
        StopMode::BottleneckTransit { delta } => {
            if !(delta > 0.0) {
                return Err(OrbitError::InvalidInput("delta must be positive"));
            }
            let x_c = sys
                .model()
                .critical_params()
                .map_err(|_| OrbitError::InvalidInput("model has no critical point"))?
                .x_c;
            (x_c - delta, Some((x_c + delta, x_c - delta)))
        }
    };

    let flow = Flow { sys };
    let mut stepper = Rkf78::<3>::new(tol);
    let mut t = 0.0;
    let mut y = [x0, p0, 0.0];
    let h0 = sys.value(x0, p0);

    let mut samples = Vec::new();
    let push = |samples: &mut Vec<OrbitSample>, t: f64, y: &[f64; 3]| {
        samples.push(OrbitSample { t, x: y[0], p: y[1], action: y[2] });
    };
    push(&mut samples, t, &y);

    let mut drift: f64 = 0.0;
    // time of the first downward crossing of the near window edge
    let mut window_entry: Option<f64> = if let Some((near, _)) = window {
        if x0 <= near {
            Some(0.0)
        } else {
            None
        }
    } else {
        None
    };

    let mut h: f64 = 1e-6;
    let finish = |reason: ExitReason,
                  t: f64,
                  y: [f64; 3],
                  samples: Vec<OrbitSample>,
                  drift: f64,
                  window_entry: Option<f64>| {
        let flight = match (reason, window, window_entry) {
            (ExitReason::ReachedExitThreshold, Some(_), Some(t_in)) => t - t_in,
            _ => t,
        };
        TrajectoryRecord {
            samples,
            exit_reason: reason,
            flight_time: flight,
            energy_drift: drift,
            action: y[2],
            exit_state: (t, y[0], y[1]),
        }
    };

    // immediate exit when the start already satisfies the threshold
    if y[0] <= x_exit {
        return Ok(finish(ExitReason::ReachedExitThreshold, t, y, samples, drift, window_entry));
    }

    loop {
        let h_try = h.min(stop.t_cap - t).max(stepper.h_min);
        let out = stepper.step(&flow, t, &y, h_try);
        if !out.accepted {
            if out.h_next.abs() <= stepper.h_min * 1.0001 {
                return Ok(finish(ExitReason::StepFailure, t, y, samples, drift, window_entry));
            }
            h = out.h_next;
            continue;
        }

        // earliest event inside (t, out.t]
        let mut cut: Option<(f64, [f64; 3], ExitReason)> = None;
        let consider =
            |cand: Option<(f64, [f64; 3])>, reason: ExitReason, cut: &mut Option<(f64, [f64; 3], ExitReason)>| {
                if let Some((tc, yc)) = cand {
                    if cut.as_ref().is_none_or(|(tb, _, _)| tc < *tb) {
                        *cut = Some((tc, yc, reason));
                    }
                }
            };

        let exit_cross = locate(&mut stepper, &flow, t, &y, h_try, &out.y, |s| s[0] - x_exit, false);
        consider(exit_cross, ExitReason::ReachedExitThreshold, &mut cut);
        let xg = stop.x_cap;
        let guard_x = locate(&mut stepper, &flow, t, &y, h_try, &out.y, |s| s[0] - xg, true);
        consider(guard_x, ExitReason::LeftWindow, &mut cut);
        let pg = stop.p_cap;
        let guard_p = locate(&mut stepper, &flow, t, &y, h_try, &out.y, |s| s[1].abs() - pg, true);
        consider(guard_p, ExitReason::LeftWindow, &mut cut);

        // window entry is bookkeeping, not a stop: record and keep going
        if let (Some((near, _)), None) = (window, window_entry) {
            if let Some((tc, _)) =
                locate(&mut stepper, &flow, t, &y, h_try, &out.y, |s| s[0] - near, false)
            {
                let stops_first = cut.as_ref().map(|(tb, _, _)| *tb <= tc).unwrap_or(false);
                if !stops_first {
                    window_entry = Some(tc);
                }
            }
        }

        if let Some((tc, yc, reason)) = cut {
            if store_samples {
                push(&mut samples, tc, &yc);
            } else {
                samples.truncate(1);
                push(&mut samples, tc, &yc);
            }
            drift = drift.max((sys.value(yc[0], yc[1]) - h0).abs());
            return Ok(finish(reason, tc, yc, samples, drift, window_entry));
        }

        t = out.t;
        y = out.y;
        drift = drift.max((sys.value(y[0], y[1]) - h0).abs());
        if store_samples {
            push(&mut samples, t, &y);
        }

        if t >= stop.t_cap - T_TOL_ABS {
            if !store_samples {
                samples.truncate(1);
                push(&mut samples, t, &y);
            }
            return Ok(finish(ExitReason::TimeCap, t, y, samples, drift, window_entry));
        }
        h = out.h_next;
    }
}

/// Localize a sign change of `g` across an accepted step by bisection on
/// eighth-order sub-steps from the step's left endpoint.
///
/// `rising` selects the crossing direction: falling events fire when g
/// drops to <= 0, rising ones when it climbs to >= 0.
fn locate<F: Fn(&[f64; 3]) -> f64>(
    stepper: &mut Rkf78<3>,
    flow: &Flow<'_, '_>,
    t0: f64,
    y0: &[f64; 3],
    h: f64,
    y1: &[f64; 3],
    g: F,
    rising: bool,
) -> Option<(f64, [f64; 3])> {
    let sgn = if rising { -1.0 } else { 1.0 };
    let g0 = sgn * g(y0);
    let g1 = sgn * g(y1);
    if g0 <= 0.0 {
        // already past the threshold at the step start (caller handles t=0)
        return Some((t0, *y0));
    }
    if g1 > 0.0 {
        return None;
    }
    let t_tol = T_TOL_ABS.max(8.0 * f64::EPSILON * t0.abs());
    let mut lo = 0.0;
    let mut hi = h;
    let mut y_hi = *y1;
    while hi - lo > t_tol {
        let mid = 0.5 * (lo + hi);
        let y_mid = stepper.raw_step(flow, t0, y0, mid);
        if sgn * g(&y_mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
            y_hi = y_mid;
        }
    }
    Some((t0 + hi, y_hi))
}

/// Path weight e^{-Omega S}, carried in log space.
#[derive(Clone, Copy, Debug)]
pub struct PathWeight {
    pub log_weight: f64,
    /// None when the weight underflows below ~1e-300; the log channel is
    /// then the only faithful report.
    pub weight: Option<f64>,
}

/// Statistical weight of an action-S path at system size Omega.
pub fn path_weight(action: f64, omega: f64) -> PathWeight {
    debug_assert!(omega > 0.0);
    let log_weight = -omega * action;
    // exp underflows to 0 near -745; cut at the spec'd 1e-300 floor
    let weight = if log_weight >= -690.0 { Some(math::exp(log_weight)) } else { None };
    PathWeight { log_weight, weight }
}

/// One orbit of a weight profile.
#[derive(Clone, Debug)]
pub struct PathWeightSample {
    pub p0: f64,
    pub action: f64,
    pub log_weight: f64,
    pub weight: Option<f64>,
    pub omega: f64,
    pub exit_reason: ExitReason,
}

/// Action and weight for each starting momentum in `p0_grid`, integrating
/// from x0 under the given stop. Per-orbit failures (runaway growth, time
/// cap) are recorded in the sample, not raised.
pub fn weight_profile(
    sys: &HamiltonianSystem<'_>,
    omega: f64,
    p0_grid: &[f64],
    x0: f64,
    stop: &StopSpec,
    tol: f64,
) -> Result<Vec<PathWeightSample>, OrbitError> {
    if !(omega > 0.0) {
        return Err(OrbitError::InvalidInput("omega must be positive"));
    }
    let mut out = Vec::with_capacity(p0_grid.len());
    for &p0 in p0_grid {
        let rec = run_orbit(sys, x0, p0, stop, tol, false)?;
        let w = path_weight(rec.action, omega);
        out.push(PathWeightSample {
            p0,
            action: rec.action,
            log_weight: w.log_weight,
            weight: w.weight,
            omega,
            exit_reason: rec.exit_reason,
        });
    }
    Ok(out)
}
