//! Scaling-law extraction: flight-time sweeps over the bifurcation
//! distance, log-log slope and plateau fits, quadrature oracles for
//! frozen-momentum transit times, bend location and finite-size data
//! collapse.

use alloc::string::String;
use alloc::vec::Vec;

use crate::hamiltonian::{phase_curves, HamiltonianSystem};
use crate::math;
use crate::model::{ModelError, ModelSpec};
use crate::numeric::{self, NumericError};
use crate::orbit::{self, StopSpec};
use crate::stats;

/// Where a curve's values came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProvenanceTag {
    Ssa,
    HamiltonianEnsemble,
    Quadrature,
}

impl ProvenanceTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProvenanceTag::Ssa => "ssa",
            ProvenanceTag::HamiltonianEnsemble => "hamiltonian",
            ProvenanceTag::Quadrature => "quadrature",
        }
    }
}

/// One point of a scaling curve.
#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub phi: f64,
    pub value: f64,
    /// SEM or ensemble standard deviation, depending on provenance.
    pub spread: f64,
    pub n: usize,
}

/// A time statistic against the bifurcation distance phi.
#[derive(Clone, Debug)]
pub struct ScalingCurve {
    pub points: Vec<CurvePoint>,
    pub provenance: ProvenanceTag,
    /// System size the curve was measured at, when it has one.
    pub omega: Option<f64>,
    /// Free-form description of the ensemble behind each value.
    pub ensemble: String,
}

impl ScalingCurve {
    /// Build a curve from (phi, value, spread, n) tuples; phi must be
    /// strictly increasing and positive, values positive.
    pub fn new(
        points: Vec<(f64, f64, f64, usize)>,
        provenance: ProvenanceTag,
        omega: Option<f64>,
    ) -> Result<Self, ScalingError> {
        let mut prev = 0.0;
        for &(phi, value, spread, _) in &points {
            if !(phi > prev) || !phi.is_finite() {
                return Err(ScalingError::NonMonotonicPhi);
            }
            if !(value > 0.0) || !value.is_finite() {
                return Err(ScalingError::InvalidPoint("value must be positive"));
            }
            if spread < 0.0 || !spread.is_finite() {
                return Err(ScalingError::InvalidPoint("spread must be nonnegative"));
            }
            prev = phi;
        }
        Ok(Self {
            points: points
                .into_iter()
                .map(|(phi, value, spread, n)| CurvePoint { phi, value, spread, n })
                .collect(),
            provenance,
            omega,
            ensemble: String::new(),
        })
    }

    pub fn with_ensemble(mut self, ensemble: String) -> Self {
        self.ensemble = ensemble;
        self
    }

    pub fn phis(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.phi).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

/// Ordinary least squares of log(value) on log(phi) over a phi window.
#[derive(Clone, Copy, Debug)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope, from the fit residuals.
    pub stderr: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
}

/// Real roots and expansion constants of 2p^2 + p - phi near the
/// bifurcation, with the leading complex pinch points +/- i sqrt(phi).
#[derive(Clone, Copy, Debug)]
pub struct AppendixRoots {
    pub p_minus: f64,
    pub p_plus: f64,
    /// sqrt(p - p_minus) at p = 0; tends to sqrt(1/2) as phi -> 0.
    pub c1: f64,
    pub y_plus: Complex,
    pub y_minus: Complex,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

/// Finite-size collapse exponents and the achieved objective.
#[derive(Clone, Debug)]
pub struct CollapseFit {
    pub a: f64,
    pub b: f64,
    pub objective: f64,
    pub objective_at_zero: f64,
    pub curves_used: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScalingError {
    EmptyCurve,
    NonMonotonicPhi,
    InvalidPoint(&'static str),
    /// A fit window must contain at least `needed` points.
    WindowTooSmall { needed: usize, got: usize },
    DomainError(&'static str),
    PoleInSegment { x: f64 },
    RegimeNotFound(&'static str),
    NoOverlap,
    Model(ModelError),
    Numeric(NumericError),
}

impl core::fmt::Display for ScalingError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ScalingError::EmptyCurve => write!(f, "curve has no points"),
            ScalingError::NonMonotonicPhi => {
                write!(f, "phi values must be strictly increasing and positive")
            }
            ScalingError::InvalidPoint(what) => write!(f, "invalid curve point: {what}"),
            ScalingError::WindowTooSmall { needed, got } => {
                write!(f, "fit window holds {got} points, needs at least {needed}")
            }
            ScalingError::DomainError(what) => write!(f, "domain error: {what}"),
            ScalingError::PoleInSegment { x } => {
                write!(f, "integrand pole inside the segment near x = {x}")
            }
            ScalingError::RegimeNotFound(what) => write!(f, "regime not found: {what}"),
            ScalingError::NoOverlap => write!(f, "rescaled curves do not overlap"),
            ScalingError::Model(e) => write!(f, "model error: {e}"),
            ScalingError::Numeric(e) => write!(f, "numeric error: {e}"),
        }
    }
}

impl core::error::Error for ScalingError {}

impl From<ModelError> for ScalingError {
    fn from(e: ModelError) -> Self {
        ScalingError::Model(e)
    }
}

impl From<NumericError> for ScalingError {
    fn from(e: NumericError) -> Self {
        ScalingError::Numeric(e)
    }
}

/// Initial conditions for a flight-time ensemble.
#[derive(Clone, Debug)]
pub enum EnsembleKind {
    /// Explicit list of starting momenta.
    FixedSet(Vec<f64>),
    /// `count` momenta uniform in [-p_span, 0), where p_span is the
    /// smaller of `span_cap` and the depth |min p_2| of the decay-side
    /// nullcline lobe at this eps.
    NegativeGrid { count: usize, span_cap: f64 },
}

/// How flight times are measured and which orbits count.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    /// Start at x0_factor * x_c.
    pub x0_factor: f64,
    /// Stop at exit_factor * x_c.
    pub exit_factor: f64,
    /// Orbits with weight below this at omega_ref are statistically
    /// insignificant and excluded from the average.
    pub weight_threshold: f64,
    pub omega_ref: f64,
    pub tol: f64,
    pub t_cap: f64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            kind: EnsembleKind::NegativeGrid { count: 100, span_cap: 0.1 },
            x0_factor: 1.5,
            exit_factor: 0.05,
            weight_threshold: 1e-2,
            omega_ref: 1000.0,
            tol: 1e-12,
            t_cap: 1e7,
        }
    }
}

impl EnsembleSpec {
    pub fn singleton(p0: f64) -> Self {
        Self { kind: EnsembleKind::FixedSet(alloc::vec![p0]), ..Self::default() }
    }

    pub fn fixed(p0s: Vec<f64>) -> Self {
        Self { kind: EnsembleKind::FixedSet(p0s), ..Self::default() }
    }

    fn describe(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        match &self.kind {
            EnsembleKind::FixedSet(v) => {
                let _ = write!(s, "fixed p0 set ({} orbits)", v.len());
            }
            EnsembleKind::NegativeGrid { count, span_cap } => {
                let _ = write!(s, "{count} p0 uniform in [-min({span_cap}, |min p2|), 0)");
            }
        }
        let _ = write!(
            s,
            ", x0 = {} x_c, exit {} x_c, weight >= {} at omega {}",
            self.x0_factor, self.exit_factor, self.weight_threshold, self.omega_ref
        );
        s
    }
}

/// Result of a flight-time sweep: the curve plus the phi values at which
/// every orbit was filtered out.
#[derive(Clone, Debug)]
pub struct FlightSweep {
    pub curve: ScalingCurve,
    pub empty_points: Vec<f64>,
}

/// Average flight time of the ensemble against phi = eps - eps_c.
///
/// Per phi: draw the ensemble, integrate each orbit to full decay, drop
/// orbits that fail to decay or whose path weight at `omega_ref` falls
/// below the threshold, then average. Spread is the ensemble standard
/// deviation of the kept flight times.
pub fn flight_time_sweep(
    model: &ModelSpec,
    phi_grid: &[f64],
    spec: &EnsembleSpec,
) -> Result<FlightSweep, ScalingError> {
    if phi_grid.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
        return Err(ScalingError::DomainError("phi grid must be positive"));
    }
    let mut phis: Vec<f64> = phi_grid.to_vec();
    phis.sort_by(|a, b| a.partial_cmp(b).unwrap());
    phis.dedup();

    let cp = model.critical_params()?;
    let x0 = spec.x0_factor * cp.x_c;
    let stop = StopSpec::full_decay(spec.exit_factor * cp.x_c).with_t_cap(spec.t_cap);
    // significance cut in log space so huge actions cannot underflow
    let max_action = -math::ln(spec.weight_threshold) / spec.omega_ref;

    let mut points = Vec::new();
    let mut empty = Vec::new();
    for &phi in &phis {
        let eps = cp.eps_c + phi;
        let m = model.with_eps(eps)?;
        let p0s: Vec<f64> = match &spec.kind {
            EnsembleKind::FixedSet(v) => v.clone(),
            EnsembleKind::NegativeGrid { count, span_cap } => {
                let pc = phase_curves(&m, eps, &[cp.x_c])?;
                let p_span = span_cap.min(pc.min_p.1.abs());
                (0..*count)
                    .map(|j| -p_span + j as f64 * p_span / *count as f64)
                    .collect()
            }
        };
        let sys = HamiltonianSystem::new(&m);
        let mut acc = stats::RunningStats::new();
        for &p0 in &p0s {
            if let Ok(rec) = orbit::flight_record(&sys, x0, p0, &stop, spec.tol) {
                if rec.action <= max_action {
                    acc.push(rec.flight_time);
                }
            }
        }
        if acc.count() == 0 {
            empty.push(phi);
        } else {
            points.push((phi, acc.mean(), math::sqrt(acc.sample_variance()), acc.count() as usize));
        }
    }

    let curve = ScalingCurve::new(points, ProvenanceTag::HamiltonianEnsemble, None)?
        .with_ensemble(spec.describe());
    Ok(FlightSweep { curve, empty_points: empty })
}

/// OLS fit of log(value) against log(phi) over `window = (phi_lo, phi_hi)`.
pub fn fit_loglog_slope(curve: &ScalingCurve, window: (f64, f64)) -> Result<SlopeFit, ScalingError> {
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.phi >= window.0 && p.phi <= window.1)
        .map(|p| (math::ln(p.phi), math::ln(p.value)))
        .collect();
    if pts.len() < 4 {
        return Err(ScalingError::WindowTooSmall { needed: 4, got: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = if pts.len() > 2 { math::sqrt(ss_res / (n - 2.0) / sxx) } else { 0.0 };
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(SlopeFit { slope, intercept, stderr, window, r_squared })
}

/// Closed-form roots of 2p^2 + p - phi = 0 and the associated expansion
/// constants, valid on the slow interval 0 < phi <= 1/12.
pub fn appendix_roots(phi: f64) -> Result<AppendixRoots, ScalingError> {
    if !(phi > 0.0 && phi <= 1.0 / 12.0) {
        return Err(ScalingError::DomainError("phi must lie in (0, 1/12]"));
    }
    let disc = math::sqrt(1.0 + 8.0 * phi);
    let p_minus = (-1.0 - disc) / 4.0;
    let p_plus = (-1.0 + disc) / 4.0;
    let c1 = math::sqrt(-p_minus);
    let y = math::sqrt(phi);
    Ok(AppendixRoots {
        p_minus,
        p_plus,
        c1,
        y_plus: Complex { re: 0.0, im: y },
        y_minus: Complex { re: 0.0, im: -y },
    })
}

/// Integration segment for the frozen-momentum transit oracle.
#[derive(Clone, Copy, Debug)]
pub enum QuadratureSegment {
    /// Across the bottleneck window [x_c - delta, x_c + delta].
    Window { delta: f64 },
    /// From `from` down to `to` (decay direction, from > to > 0).
    Range { from: f64, to: f64 },
}

/// Transit time of the frozen-p flow xdot = f(x, p_fixed) across a
/// segment, by adaptive quadrature of the reciprocal speed.
///
/// This is the independent oracle for event-detected flight times; it is
/// exact for p = 0, where p is conserved along the true orbit.
pub fn transit_time_quadrature(
    model: &ModelSpec,
    phi: f64,
    p_fixed: f64,
    segment: QuadratureSegment,
) -> Result<f64, ScalingError> {
    if !(phi > 0.0) {
        return Err(ScalingError::DomainError("phi must be positive"));
    }
    let cp = model.critical_params()?;
    let (hi, lo) = match segment {
        QuadratureSegment::Window { delta } => {
            if !(delta > 0.0 && delta < cp.x_c) {
                return Err(ScalingError::DomainError("delta must lie in (0, x_c)"));
            }
            (cp.x_c + delta, cp.x_c - delta)
        }
        QuadratureSegment::Range { from, to } => {
            if !(from > to && to > 0.0) {
                return Err(ScalingError::DomainError("range must satisfy from > to > 0"));
            }
            (from, to)
        }
    };
    let m = model.with_eps(cp.eps_c + phi)?;
    let sys = HamiltonianSystem::new(&m);
    let speed = |x: f64| sys.dx_dt(x, p_fixed);

    // the decaying flow must point left on the whole segment
    const SCAN: usize = 64;
    for i in 0..=SCAN {
        let x = lo + (hi - lo) * i as f64 / SCAN as f64;
        let v = speed(x);
        if !(v < 0.0) {
            return Err(ScalingError::PoleInSegment { x });
        }
    }
    let t = numeric::adaptive_simpson(&|x| -1.0 / speed(x), lo, hi, 1e-11, 1e-300)?;
    Ok(t)
}

/// How the plateau and decay pieces of a curve are identified.
#[derive(Clone, Copy, Debug)]
pub struct BendOptions {
    /// Plateau level = median of this many smallest-phi points.
    pub plateau_points: usize,
    /// Power-law piece fitted on this many largest-phi points.
    pub decay_points: usize,
    /// The plateau piece must be flatter than this in log-log slope.
    pub plateau_slope_max: f64,
    /// The decay piece must be steeper than this.
    pub decay_slope_min: f64,
}

impl Default for BendOptions {
    fn default() -> Self {
        Self { plateau_points: 5, decay_points: 5, plateau_slope_max: 0.1, decay_slope_min: 0.25 }
    }
}

/// Plateau level, decay fit and their crossing.
#[derive(Clone, Debug)]
pub struct BendReport {
    pub phi_bend: f64,
    pub plateau_level: f64,
    pub plateau_slope: f64,
    pub decay: SlopeFit,
}

/// Locate the bend where a curve leaves its small-phi plateau: the
/// crossing of the plateau level with the power law fitted to the
/// large-phi side.
pub fn bend_location(curve: &ScalingCurve, opts: &BendOptions) -> Result<BendReport, ScalingError> {
    let n = curve.points.len();
    let needed = opts.plateau_points + opts.decay_points;
    if n < needed {
        return Err(ScalingError::WindowTooSmall { needed, got: n });
    }
    let head = &curve.points[..opts.plateau_points];
    let tail = &curve.points[n - opts.decay_points..];

    // Monte Carlo noise inflates the fitted plateau slope; only call the
    // regime missing when the slope is steep beyond its own uncertainty.
    let plateau_fit = fit_loglog_slope(curve, (head[0].phi, head[head.len() - 1].phi))?;
    if plateau_fit.slope.abs() > opts.plateau_slope_max + 2.0 * plateau_fit.stderr {
        return Err(ScalingError::RegimeNotFound("no plateau at small phi"));
    }
    let mut values: Vec<f64> = head.iter().map(|p| p.value).collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let plateau_level = if values.len() % 2 == 1 {
        values[values.len() / 2]
    } else {
        0.5 * (values[values.len() / 2 - 1] + values[values.len() / 2])
    };

    let decay = fit_loglog_slope(curve, (tail[0].phi, tail[tail.len() - 1].phi))?;
    if !(decay.slope < 0.0) || decay.slope.abs() < opts.decay_slope_min {
        return Err(ScalingError::RegimeNotFound("no power-law decay at large phi"));
    }

    let phi_bend = math::exp((math::ln(plateau_level) - decay.intercept) / decay.slope);
    if !phi_bend.is_finite() {
        return Err(ScalingError::RegimeNotFound("pieces do not cross"));
    }
    Ok(BendReport { phi_bend, plateau_level, plateau_slope: plateau_fit.slope, decay })
}

/// Search box for the collapse exponents.
#[derive(Clone, Copy, Debug)]
pub struct SearchBox {
    pub a: (f64, f64),
    pub b: (f64, f64),
}

impl Default for SearchBox {
    fn default() -> Self {
        Self { a: (0.0, 1.5), b: (0.0, 1.0) }
    }
}

/// Fit the collapse exponents (a, b) mapping each curve to
/// (omega^a phi, omega^b value): grid search plus refinement, minimizing
/// the summed squared log-distance to the pooled monotone (nonincreasing)
/// fit of the rescaled points.
pub fn collapse_fit(curves: &[ScalingCurve], box_: &SearchBox) -> Result<CollapseFit, ScalingError> {
    if curves.len() < 2 {
        return Err(ScalingError::WindowTooSmall { needed: 2, got: curves.len() });
    }
    let mut omegas = Vec::with_capacity(curves.len());
    for c in curves {
        let omega = c.omega.ok_or(ScalingError::InvalidPoint("curve has no omega tag"))?;
        if c.points.len() < 2 {
            return Err(ScalingError::EmptyCurve);
        }
        omegas.push(omega);
    }
    if omegas.windows(2).all(|w| w[0] == w[1]) {
        return Err(ScalingError::InvalidPoint("curves must span distinct omega"));
    }

    let log_curves: Vec<(f64, Vec<(f64, f64)>)> = curves
        .iter()
        .zip(&omegas)
        .map(|(c, &omega)| {
            let ln_omega = math::ln(omega);
            let pts = c
                .points
                .iter()
                .map(|p| (math::ln(p.phi), math::ln(p.value)))
                .collect();
            (ln_omega, pts)
        })
        .collect();

    let objective = |a: f64, b: f64| -> Option<f64> {
        // rescale; curves stay x-sorted because the shift is per-curve
        let rescaled: Vec<Vec<(f64, f64)>> = log_curves
            .iter()
            .map(|(ln_omega, pts)| {
                pts.iter()
                    .map(|&(lphi, lval)| (a * ln_omega + lphi, b * ln_omega + lval))
                    .collect()
            })
            .collect();
        // every curve must share an interval with the pooled support
        let lo_common = rescaled.iter().map(|c| c[0].0).fold(f64::NEG_INFINITY, f64::max);
        let hi_common =
            rescaled.iter().map(|c| c[c.len() - 1].0).fold(f64::INFINITY, f64::min);
        if lo_common >= hi_common {
            return None;
        }
        // mean squared vertical distance of each curve's points to the
        // linear interpolant of every other curve
        let mut sum = 0.0;
        let mut count = 0usize;
        for (i, ci) in rescaled.iter().enumerate() {
            for (j, cj) in rescaled.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (xlo, xhi) = (cj[0].0, cj[cj.len() - 1].0);
                for &(x, y) in ci {
                    if x < xlo || x > xhi {
                        continue;
                    }
                    let pos = cj.partition_point(|&(xj, _)| xj <= x);
                    let yj = if pos == 0 {
                        cj[0].1
                    } else if pos == cj.len() {
                        cj[cj.len() - 1].1
                    } else {
                        let (x0, y0) = cj[pos - 1];
                        let (x1, y1) = cj[pos];
                        if x1 == x0 { y0 } else { y0 + (y1 - y0) * (x - x0) / (x1 - x0) }
                    };
                    let r = y - yj;
                    sum += r * r;
                    count += 1;
                }
            }
        }
        if count == 0 {
            None
        } else {
            Some(sum / count as f64)
        }
    };

    let eval_box = |alo: f64, ahi: f64, blo: f64, bhi: f64, n: usize| -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for i in 0..=n {
            let a = alo + (ahi - alo) * i as f64 / n as f64;
            for j in 0..=n {
                let b = blo + (bhi - blo) * j as f64 / n as f64;
                if let Some(obj) = objective(a, b) {
                    if best.is_none() || obj < best.unwrap().2 {
                        best = Some((a, b, obj));
                    }
                }
            }
        }
        best
    };

    let (mut alo, mut ahi) = box_.a;
    let (mut blo, mut bhi) = box_.b;
    let mut best = eval_box(alo, ahi, blo, bhi, 20).ok_or(ScalingError::NoOverlap)?;
    for _ in 0..3 {
        let da = (ahi - alo) / 20.0;
        let db = (bhi - blo) / 20.0;
        alo = (best.0 - 1.5 * da).max(box_.a.0);
        ahi = (best.0 + 1.5 * da).min(box_.a.1);
        blo = (best.1 - 1.5 * db).max(box_.b.0);
        bhi = (best.1 + 1.5 * db).min(box_.b.1);
        if let Some(b) = eval_box(alo, ahi, blo, bhi, 20) {
            if b.2 < best.2 {
                best = b;
            }
        }
    }
    // keep the degenerate no-rescaling candidate honest when it is in play
    let at_zero = objective(0.0, 0.0).unwrap_or(f64::INFINITY);
    let zero_in_box =
        box_.a.0 <= 0.0 && 0.0 <= box_.a.1 && box_.b.0 <= 0.0 && 0.0 <= box_.b.1;
    if zero_in_box && at_zero < best.2 {
        best = (0.0, 0.0, at_zero);
    }

    Ok(CollapseFit {
        a: best.0,
        b: best.1,
        objective: best.2,
        objective_at_zero: at_zero,
        curves_used: omegas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpec;

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let (llo, lhi) = (math::ln(lo), math::ln(hi));
        (0..n)
            .map(|i| math::exp(llo + (lhi - llo) * i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn curve_validation() {
        assert!(ScalingCurve::new(
            alloc::vec![(1e-3, 5.0, 0.1, 10), (1e-2, 4.0, 0.1, 10)],
            ProvenanceTag::Ssa,
            None
        )
        .is_ok());
        assert!(matches!(
            ScalingCurve::new(
                alloc::vec![(1e-2, 5.0, 0.1, 10), (1e-3, 4.0, 0.1, 10)],
                ProvenanceTag::Ssa,
                None
            ),
            Err(ScalingError::NonMonotonicPhi)
        ));
        assert!(ScalingCurve::new(alloc::vec![], ProvenanceTag::Ssa, None).is_ok());
    }

    #[test]
    fn slope_fit_recovers_synthetic_power_law() {
        let phis = log_grid(1e-5, 1e-2, 12);
        let pts: Vec<(f64, f64, f64, usize)> =
            phis.iter().map(|&p| (p, 1.0 / math::sqrt(p), 0.0, 1)).collect();
        let curve = ScalingCurve::new(pts, ProvenanceTag::Quadrature, None).unwrap();
        let fit = fit_loglog_slope(&curve, (1e-5, 1e-2)).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!(fit.stderr < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_fit_needs_four_points() {
        let phis = log_grid(1e-5, 1e-2, 12);
        let pts: Vec<(f64, f64, f64, usize)> = phis.iter().map(|&p| (p, 1.0, 0.0, 1)).collect();
        let curve = ScalingCurve::new(pts, ProvenanceTag::Quadrature, None).unwrap();
        assert!(matches!(
            fit_loglog_slope(&curve, (1e-5, 2e-5)),
            Err(ScalingError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn appendix_roots_limits_and_expansion() {
        // phi -> 0: roots approach (-1/2, 0)
        let r = appendix_roots(1e-12).unwrap();
        assert!((r.p_minus + 0.5).abs() < 1e-11);
        assert!(r.p_plus.abs() < 1e-11);
        assert!((r.c1 - math::sqrt(0.5)).abs() < 1e-11);

        // p_plus = phi + O(phi^2)
        for i in 0..20 {
            let phi = 1e-3 * math::powf(10.0, -3.0 * i as f64 / 19.0);
            let r = appendix_roots(phi).unwrap();
            assert!(
                (r.p_plus - phi).abs() <= 10.0 * phi * phi,
                "phi {phi}: p_plus {} vs bound",
                r.p_plus
            );
        }

        // upper end of the interval
        let r = appendix_roots(1.0 / 12.0).unwrap();
        assert!((r.p_plus - 0.0727486121839514).abs() < 1e-15);

        // y roots pinch at +/- i sqrt(phi)
        let r = appendix_roots(1e-4).unwrap();
        assert_eq!(r.y_plus, Complex { re: 0.0, im: 0.01 });
        assert_eq!(r.y_minus, Complex { re: 0.0, im: -0.01 });

        assert!(appendix_roots(0.0).is_err());
        assert!(appendix_roots(0.09).is_err());
    }

    #[test]
    fn appendix_roots_match_independent_newton() {
        // Newton on 2p^2 + p - phi from both sides, no closed form involved
        let newton = |phi: f64, mut p: f64| {
            for _ in 0..60 {
                let f = 2.0 * p * p + p - phi;
                let fp = 4.0 * p + 1.0;
                let step = f / fp;
                p -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            p
        };
        for i in 0..50 {
            let phi = math::exp(
                math::ln(1e-8) + (math::ln(1.0 / 12.0) - math::ln(1e-8)) * i as f64 / 49.0,
            )
            .min(1.0 / 12.0);
            let r = appendix_roots(phi).unwrap();
            assert!((r.p_plus - newton(phi, phi)).abs() < 1e-12);
            assert!((r.p_minus - newton(phi, -0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_normal_form_asymptotics() {
        let auto = ModelSpec::autocatalytic(1.0, 1.0, 0.25).unwrap();
        let t1 = transit_time_quadrature(&auto, 1e-4, 0.0, QuadratureSegment::Window { delta: 0.1 })
            .unwrap();
        // bottleneck asymptotic 2 pi / sqrt(phi), modulo the finite-window
        // truncation (2/pi) atan(delta/sqrt(phi)) ~ 0.94 at this phi
        let asym = 2.0 * core::f64::consts::PI / math::sqrt(1e-4);
        assert!((t1 - asym).abs() / asym < 0.10, "t1 {t1} vs {asym}");

        // quadrupling phi halves the transit, up to the same window effect
        let t4 = transit_time_quadrature(&auto, 4e-4, 0.0, QuadratureSegment::Window { delta: 0.1 })
            .unwrap();
        assert!((t1 / t4 - 2.0).abs() < 0.25, "ratio {}", t1 / t4);

        // window transit is a sub-segment of the full decay
        let hill = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let tw = transit_time_quadrature(&hill, 1e-2, 0.0, QuadratureSegment::Window { delta: 0.1 })
            .unwrap();
        let tf = transit_time_quadrature(
            &hill,
            1e-2,
            0.0,
            QuadratureSegment::Range { from: 1.5, to: 0.05 },
        )
        .unwrap();
        assert!(tw <= tf);
    }

    #[test]
    fn quadrature_rejects_wrong_regime() {
        // frozen positive momentum lifts the flow above zero inside the
        // bottleneck: the leftward transit has a pole
        let hill = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let res =
            transit_time_quadrature(&hill, 1e-5, 0.05, QuadratureSegment::Window { delta: 0.1 });
        assert!(matches!(res, Err(ScalingError::PoleInSegment { .. })));
    }

    #[test]
    fn bend_location_synthetic_crossing() {
        // plateau C into a phi^{-1/2} tail, crossing exactly at (K/C)^2
        let c: f64 = 100.0;
        let phis = log_grid(1e-6, 1e-1, 16);
        let pts: Vec<(f64, f64, f64, usize)> = phis
            .iter()
            .map(|&p| (p, c.min(1.0 / math::sqrt(p)), 0.0, 1))
            .collect();
        let curve = ScalingCurve::new(pts, ProvenanceTag::Quadrature, None).unwrap();
        let report = bend_location(&curve, &BendOptions::default()).unwrap();
        assert!(
            ((report.phi_bend - 1e-4) / 1e-4).abs() < 1e-9,
            "bend at {}",
            report.phi_bend
        );
        assert_eq!(report.plateau_level, c);
        assert!((report.decay.slope + 0.5).abs() < 1e-12);
    }

    #[test]
    fn bend_location_requires_both_regimes() {
        let phis = log_grid(1e-6, 1e-1, 12);
        // pure power law: no plateau anywhere
        let pts: Vec<(f64, f64, f64, usize)> =
            phis.iter().map(|&p| (p, 1.0 / math::sqrt(p), 0.0, 1)).collect();
        let curve = ScalingCurve::new(pts, ProvenanceTag::Quadrature, None).unwrap();
        assert!(matches!(
            bend_location(&curve, &BendOptions::default()),
            Err(ScalingError::RegimeNotFound(_))
        ));
        // flat curve: no decay
        let pts: Vec<(f64, f64, f64, usize)> = phis.iter().map(|&p| (p, 7.0, 0.0, 1)).collect();
        let curve = ScalingCurve::new(pts, ProvenanceTag::Quadrature, None).unwrap();
        assert!(matches!(
            bend_location(&curve, &BendOptions::default()),
            Err(ScalingError::RegimeNotFound(_))
        ));
    }

    fn synthetic_collapse_curves(a: f64, b: f64) -> Vec<ScalingCurve> {
        let g = |u: f64| 1.0 / math::sqrt(1.0 + u);
        [250.0f64, 500.0, 1000.0]
            .iter()
            .map(|&omega| {
                let pts: Vec<(f64, f64, f64, usize)> = log_grid(1e-4, 1e-1, 15)
                    .into_iter()
                    .map(|phi| {
                        let u = math::powf(omega, a) * phi;
                        (phi, math::powf(omega, -b) * g(u), 0.0, 1)
                    })
                    .collect();
                ScalingCurve::new(pts, ProvenanceTag::Ssa, Some(omega)).unwrap()
            })
            .collect()
    }

    #[test]
    fn collapse_recovers_known_exponents() {
        let curves = synthetic_collapse_curves(0.6, 0.3);
        let fit = collapse_fit(&curves, &SearchBox::default()).unwrap();
        assert!((fit.a - 0.6).abs() <= 0.05, "a {}", fit.a);
        assert!((fit.b - 0.3).abs() <= 0.05, "b {}", fit.b);
        assert!(fit.objective < fit.objective_at_zero);
    }

    #[test]
    fn collapse_of_identical_curves_is_exact_at_zero() {
        let phis = log_grid(1e-4, 1e-1, 10);
        let pts: Vec<(f64, f64, f64, usize)> =
            phis.iter().map(|&p| (p, 1.0 / math::sqrt(p), 0.0, 1)).collect();
        let mk = |omega: f64| {
            ScalingCurve::new(pts.clone(), ProvenanceTag::Ssa, Some(omega)).unwrap()
        };
        let curves = alloc::vec![mk(250.0), mk(500.0)];
        let fit = collapse_fit(&curves, &SearchBox { a: (0.0, 0.5), b: (0.0, 0.5) }).unwrap();
        assert!(fit.objective_at_zero.abs() < 1e-20);
        assert!(fit.objective <= fit.objective_at_zero + 1e-20);
    }

    #[test]
    fn collapse_needs_overlap() {
        let mk = |omega: f64, lo: f64, hi: f64| {
            let pts: Vec<(f64, f64, f64, usize)> = log_grid(lo, hi, 6)
                .into_iter()
                .map(|p| (p, 1.0 / math::sqrt(p), 0.0, 1))
                .collect();
            ScalingCurve::new(pts, ProvenanceTag::Ssa, Some(omega)).unwrap()
        };
        let curves = alloc::vec![mk(250.0, 1e-6, 1e-5), mk(500.0, 1e-2, 1e-1)];
        let tight = SearchBox { a: (0.0, 0.0), b: (0.0, 0.0) };
        assert!(matches!(collapse_fit(&curves, &tight), Err(ScalingError::NoOverlap)));
    }

    #[test]
    fn singleton_sweep_matches_quadrature_oracle() {
        let hill = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let phis = [1e-4, 1e-3, 1e-2];
        let sweep = flight_time_sweep(&hill, &phis, &EnsembleSpec::singleton(0.0)).unwrap();
        assert!(sweep.empty_points.is_empty());
        for pt in &sweep.curve.points {
            let oracle = transit_time_quadrature(
                &hill,
                pt.phi,
                0.0,
                QuadratureSegment::Range { from: 1.5, to: 0.05 },
            )
            .unwrap();
            assert!(
                ((pt.value - oracle) / oracle).abs() < 1e-6,
                "phi {}: ode {} vs quadrature {}",
                pt.phi,
                pt.value,
                oracle
            );
            assert_eq!(pt.spread, 0.0);
            assert_eq!(pt.n, 1);
        }
    }

    #[test]
    fn negative_ensemble_plateaus_at_small_phi() {
        let hill = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let spec = EnsembleSpec {
            kind: EnsembleKind::NegativeGrid { count: 40, span_cap: 0.1 },
            ..EnsembleSpec::default()
        };
        let sweep = flight_time_sweep(&hill, &[1e-5, 1e-4], &spec).unwrap();
        assert_eq!(sweep.curve.points.len(), 2);
        let (a, b) = (sweep.curve.points[0].value, sweep.curve.points[1].value);
        assert!((a / b - 1.0).abs() < 0.10, "plateau values {a} vs {b}");
    }
}
