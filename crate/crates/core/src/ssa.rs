//! Exact stochastic simulation (Gillespie direct method) of a model,
//! extinction-time ensembles, and the operational stochastic bifurcation
//! point.
//!
//! Replicates are pure functions of `(seed, replicate_index)`: any worker
//! can run any index independently and the assembled ensemble is
//! bit-identical regardless of scheduling or thread count. Statistics are
//! computed over samples in index order with a one-pass accumulator.

use alloc::vec::Vec;

use crate::math;
use crate::model::{ModelError, ModelSpec};
use crate::rng::Xoshiro256;
use crate::scaling::{ProvenanceTag, ScalingCurve, ScalingError};
use crate::stats::{isotonic_nondecreasing, RunningStats};

/// Ensemble configuration for extinction-time runs.
#[derive(Clone, Copy, Debug)]
pub struct SsaRunConfig {
    /// System size Omega; the initial count is round(x0_fraction * omega).
    pub omega: u64,
    pub x0_fraction: f64,
    /// Censoring horizon: runs still alive at t_max are flagged censored.
    pub t_max: f64,
    pub seed: u64,
    pub n_replicates: u32,
    /// Runs are aborted with an error when X exceeds x_max_factor * omega;
    /// only malformed custom models can get there.
    pub x_max_factor: f64,
}

impl SsaRunConfig {
    pub fn new(omega: u64, seed: u64, n_replicates: u32) -> Self {
        Self { omega, x0_fraction: 0.75, t_max: 1e5, seed, n_replicates, x_max_factor: 10.0 }
    }

    pub fn validate(&self) -> Result<(), SsaError> {
        if self.omega == 0 {
            return Err(SsaError::InvalidConfig("omega must be positive"));
        }
        if !(self.x0_fraction > 0.0) {
            return Err(SsaError::InvalidConfig("x0_fraction must be positive"));
        }
        if !(self.t_max > 0.0) {
            return Err(SsaError::InvalidConfig("t_max must be positive"));
        }
        if self.n_replicates == 0 {
            return Err(SsaError::InvalidConfig("n_replicates must be at least 1"));
        }
        Ok(())
    }

    pub fn initial_count(&self) -> u64 {
        math::round_half_even_u64(self.x0_fraction * self.omega as f64)
    }
}

/// One extinction-time draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtinctionSample {
    pub time: f64,
    pub censored: bool,
}

/// Extinction-time ensemble summary. Mean and SEM are over uncensored
/// samples only; censored runs are counted, never averaged in.
#[derive(Clone, Debug)]
pub struct ExtinctionStats {
    pub samples: Vec<ExtinctionSample>,
    pub mean: f64,
    pub sem: f64,
    pub n_censored: usize,
    /// Fewer than two uncensored samples: SEM is reported as zero.
    pub degenerate_ensemble: bool,
    /// False when every sample was censored; mean/sem are NaN then.
    pub usable: bool,
}

impl ExtinctionStats {
    /// Assemble statistics from samples ordered by replicate index.
    pub fn from_samples(samples: Vec<ExtinctionSample>) -> Self {
        let mut acc = RunningStats::new();
        let mut n_censored = 0;
        for s in &samples {
            if s.censored {
                n_censored += 1;
            } else {
                acc.push(s.time);
            }
        }
        let usable = acc.count() > 0;
        ExtinctionStats {
            mean: if usable { acc.mean() } else { f64::NAN },
            sem: acc.sem(),
            n_censored,
            degenerate_ensemble: acc.count() < 2,
            usable,
            samples,
        }
    }

    pub fn n_uncensored(&self) -> usize {
        self.samples.len() - self.n_censored
    }

    pub fn censoring_fraction(&self) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            self.n_censored as f64 / self.samples.len() as f64
        }
    }
}

/// Operational stochastic bifurcation point: the decay rate at which half
/// of an ensemble goes extinct within the horizon t_max.
#[derive(Clone, Debug)]
pub struct StochasticBifurcation {
    pub eps_bar_s: f64,
    /// Half of the largest probe-grid spacing.
    pub uncertainty: f64,
    /// (eps, raw extinct fraction, isotonic-smoothed fraction) per probe.
    pub diagnostics: Vec<(f64, f64, f64)>,
}

impl StochasticBifurcation {
    /// Distance phi_s = eps - eps_bar_s of a decay rate from the
    /// stochastic bifurcation point.
    pub fn phi_s(&self, eps: f64) -> f64 {
        eps - self.eps_bar_s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SsaError {
    InvalidConfig(&'static str),
    Model(ModelError),
    /// X exceeded the hard cap; the parameterization is runaway.
    PopulationExplosion { t: f64, count: u64 },
    /// The probe grid does not bracket the 50% extinction crossing.
    BracketError(&'static str),
}

impl core::fmt::Display for SsaError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SsaError::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            SsaError::Model(e) => write!(f, "model error: {e}"),
            SsaError::PopulationExplosion { t, count } => {
                write!(f, "population exploded to {count} at t = {t}")
            }
            SsaError::BracketError(what) => write!(f, "bracket error: {what}"),
        }
    }
}

impl core::error::Error for SsaError {}

impl From<ModelError> for SsaError {
    fn from(e: ModelError) -> Self {
        SsaError::Model(e)
    }
}

/// Run one replicate to extinction or censoring.
///
/// The replicate's random stream is derived from (seed, replicate_index),
/// so calls are independent and reproducible in isolation.
pub fn simulate_to_extinction(
    model: &ModelSpec,
    cfg: &SsaRunConfig,
    replicate_index: u64,
) -> Result<ExtinctionSample, SsaError> {
    cfg.validate()?;
    let mut rng = Xoshiro256::stream(cfg.seed, replicate_index);
    let omega = cfg.omega as f64;
    let x_max = math::ceil(cfg.x_max_factor * omega) as u64;
    let params = model.params();
    let reactions = model.reactions();

    let mut count = cfg.initial_count();
    let mut t = 0.0;

    if count == 0 {
        return Ok(ExtinctionSample { time: 0.0, censored: false });
    }

    loop {
        let mut total = 0.0;
        for r in reactions {
            let w = r.extensive(count, omega, params);
            if !(w >= 0.0) || !w.is_finite() {
                return Err(SsaError::Model(ModelError::NegativeRate {
                    label: r.label,
                    x: count as f64,
                }));
            }
            total += w;
        }
        if total == 0.0 {
            // no transitions can ever fire again; extinction is impossible
            return Ok(ExtinctionSample { time: cfg.t_max, censored: true });
        }

        t += rng.next_exp(total);
        if t >= cfg.t_max {
            return Ok(ExtinctionSample { time: cfg.t_max, censored: true });
        }

        let mut pick = rng.next_f64() * total;
        let mut step = reactions[reactions.len() - 1].step;
        for r in reactions {
            pick -= r.extensive(count, omega, params);
            if pick <= 0.0 {
                step = r.step;
                break;
            }
        }
        count = if step > 0 { count + 1 } else { count.saturating_sub(1) };

        if count == 0 {
            return Ok(ExtinctionSample { time: t, censored: false });
        }
        if count > x_max {
            return Err(SsaError::PopulationExplosion { t, count });
        }
    }
}

/// Batch runner abstraction: produce the ordered samples for replicate
/// indices `offset .. offset + cfg.n_replicates`. The serial runner lives
/// here; parallel drivers can inject their own as long as they preserve
/// index order, which keeps results thread-count invariant.
pub trait ReplicateRunner {
    fn run_batch(
        &self,
        model: &ModelSpec,
        cfg: &SsaRunConfig,
        offset: u64,
    ) -> Result<Vec<ExtinctionSample>, SsaError>;
}

/// In-order, single-threaded batch execution.
pub struct SerialRunner;

impl ReplicateRunner for SerialRunner {
    fn run_batch(
        &self,
        model: &ModelSpec,
        cfg: &SsaRunConfig,
        offset: u64,
    ) -> Result<Vec<ExtinctionSample>, SsaError> {
        let mut samples = Vec::with_capacity(cfg.n_replicates as usize);
        for i in 0..cfg.n_replicates as u64 {
            samples.push(simulate_to_extinction(model, cfg, offset + i)?);
        }
        Ok(samples)
    }
}

impl<F> ReplicateRunner for F
where
    F: Fn(&ModelSpec, &SsaRunConfig, u64) -> Result<Vec<ExtinctionSample>, SsaError>,
{
    fn run_batch(
        &self,
        model: &ModelSpec,
        cfg: &SsaRunConfig,
        offset: u64,
    ) -> Result<Vec<ExtinctionSample>, SsaError> {
        self(model, cfg, offset)
    }
}

/// Full ensemble: n_replicates independent runs, statistics in index order.
pub fn mean_extinction_time(
    model: &ModelSpec,
    cfg: &SsaRunConfig,
) -> Result<ExtinctionStats, SsaError> {
    mean_extinction_time_with(model, cfg, &SerialRunner)
}

/// [`mean_extinction_time`] with an injected batch runner.
pub fn mean_extinction_time_with(
    model: &ModelSpec,
    cfg: &SsaRunConfig,
    runner: &impl ReplicateRunner,
) -> Result<ExtinctionStats, SsaError> {
    cfg.validate()?;
    Ok(ExtinctionStats::from_samples(runner.run_batch(model, cfg, 0)?))
}

/// Estimate the stochastic bifurcation point on a probe grid of decay
/// rates bracketing the deterministic critical value.
///
/// The extinct-within-horizon fraction is isotonically smoothed along the
/// grid and the 50% crossing located by linear interpolation; the result
/// carries a half-grid-spacing uncertainty.
pub fn estimate_stochastic_bifurcation(
    model: &ModelSpec,
    probe_grid: &[f64],
    cfg: &SsaRunConfig,
) -> Result<StochasticBifurcation, SsaError> {
    estimate_stochastic_bifurcation_with(model, probe_grid, cfg, &SerialRunner)
}

/// [`estimate_stochastic_bifurcation`] with an injected batch runner.
pub fn estimate_stochastic_bifurcation_with(
    model: &ModelSpec,
    probe_grid: &[f64],
    cfg: &SsaRunConfig,
    runner: &impl ReplicateRunner,
) -> Result<StochasticBifurcation, SsaError> {
    cfg.validate()?;
    if probe_grid.len() < 2 {
        return Err(SsaError::BracketError("probe grid needs at least two points"));
    }
    if probe_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SsaError::BracketError("probe grid must be strictly increasing"));
    }

    let n = cfg.n_replicates as u64;
    let mut raw = Vec::with_capacity(probe_grid.len());
    for (gi, &eps) in probe_grid.iter().enumerate() {
        let m = model.with_eps(eps)?;
        // grid points fold their index into the replicate counter so no
        // stream is reused across the probe
        let samples = runner.run_batch(&m, cfg, (gi as u64) * n)?;
        let extinct = samples.iter().filter(|s| !s.censored).count();
        raw.push(extinct as f64 / n as f64);
    }

    let weights = alloc::vec![1.0; raw.len()];
    let smooth = isotonic_nondecreasing(&raw, &weights);

    if smooth[0] >= 0.5 {
        return Err(SsaError::BracketError("grid starts above the 50% crossing"));
    }
    if smooth[smooth.len() - 1] < 0.5 {
        return Err(SsaError::BracketError("grid ends below the 50% crossing"));
    }
    let mut eps_bar_s = probe_grid[probe_grid.len() - 1];
    for i in 1..smooth.len() {
        if smooth[i] >= 0.5 {
            let (f0, f1) = (smooth[i - 1], smooth[i]);
            let (e0, e1) = (probe_grid[i - 1], probe_grid[i]);
            eps_bar_s = if f1 > f0 { e0 + (0.5 - f0) / (f1 - f0) * (e1 - e0) } else { 0.5 * (e0 + e1) };
            break;
        }
    }
    let max_gap = probe_grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);

    Ok(StochasticBifurcation {
        eps_bar_s,
        uncertainty: 0.5 * max_gap,
        diagnostics: probe_grid
            .iter()
            .zip(raw.iter().zip(&smooth))
            .map(|(&e, (&r, &s))| (e, r, s))
            .collect(),
    })
}

/// Extinction-time statistics per point of a phi_s grid.
#[derive(Clone, Debug)]
pub struct SsaSweepPoint {
    pub phi_s: f64,
    pub stats: ExtinctionStats,
    /// Censoring above 10%: the point is biased and should not be fitted.
    pub flagged: bool,
}

/// Sweep mean extinction times over distances phi_s above the stochastic
/// bifurcation point. An empty grid yields an empty sweep.
pub fn sweep_extinction_times(
    model: &ModelSpec,
    eps_bar_s: f64,
    phi_s_grid: &[f64],
    cfg: &SsaRunConfig,
) -> Result<Vec<SsaSweepPoint>, SsaError> {
    sweep_extinction_times_with(model, eps_bar_s, phi_s_grid, cfg, &SerialRunner)
}

/// [`sweep_extinction_times`] with an injected batch runner.
pub fn sweep_extinction_times_with(
    model: &ModelSpec,
    eps_bar_s: f64,
    phi_s_grid: &[f64],
    cfg: &SsaRunConfig,
    runner: &impl ReplicateRunner,
) -> Result<Vec<SsaSweepPoint>, SsaError> {
    cfg.validate()?;
    if phi_s_grid.iter().any(|&p| !(p > 0.0)) {
        return Err(SsaError::InvalidConfig("phi_s grid must be positive"));
    }
    let n = cfg.n_replicates as u64;
    let mut out = Vec::with_capacity(phi_s_grid.len());
    for (gi, &phi_s) in phi_s_grid.iter().enumerate() {
        let m = model.with_eps(eps_bar_s + phi_s)?;
        let samples = runner.run_batch(&m, cfg, (gi as u64) * n)?;
        let stats = ExtinctionStats::from_samples(samples);
        let flagged = stats.censoring_fraction() > 0.10;
        out.push(SsaSweepPoint { phi_s, stats, flagged });
    }
    Ok(out)
}

/// Package a sweep as a scaling curve (phi, mean, sem, n). Points flagged
/// for censoring above 10% are dropped: their means are biased estimates
/// of the unconditional extinction time.
pub fn sweep_to_curve(points: &[SsaSweepPoint], omega: u64) -> Result<ScalingCurve, ScalingError> {
    let pts: Vec<(f64, f64, f64, usize)> = points
        .iter()
        .filter(|p| p.stats.usable && !p.flagged)
        .map(|p| (p.phi_s, p.stats.mean, p.stats.sem, p.stats.n_uncensored()))
        .collect();
    ScalingCurve::new(pts, ProvenanceTag::Ssa, Some(omega as f64))
}

/// Extinction-conditioned curve: every point with at least one uncensored
/// replicate, flagged or not. Near the stochastic threshold this is the
/// mean transient of the realizations that actually die within the
/// horizon, the stochastic counterpart of the weight-filtered flight
/// ensemble.
pub fn conditional_curve(
    points: &[SsaSweepPoint],
    omega: u64,
) -> Result<ScalingCurve, ScalingError> {
    let pts: Vec<(f64, f64, f64, usize)> = points
        .iter()
        .filter(|p| p.stats.usable)
        .map(|p| (p.phi_s, p.stats.mean, p.stats.sem, p.stats.n_uncensored()))
        .collect();
    ScalingCurve::new(pts, ProvenanceTag::Ssa, Some(omega as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpec;

    fn harmonic(n: u64) -> f64 {
        (1..=n).map(|k| 1.0 / k as f64).sum()
    }

    #[test]
    fn absorbing_start_is_instant() {
        let m = ModelSpec::pure_death(1.0).unwrap();
        let mut cfg = SsaRunConfig::new(100, 7, 1);
        cfg.x0_fraction = 1e-9; // rounds to zero
        let s = simulate_to_extinction(&m, &cfg, 0).unwrap();
        assert_eq!(s, ExtinctionSample { time: 0.0, censored: false });
    }

    #[test]
    fn pure_death_mean_matches_harmonic_sum() {
        // X0 = 3, eps = 1: mean extinction is 1 + 1/2 + 1/3 = 11/6
        let m = ModelSpec::pure_death(1.0).unwrap();
        let mut cfg = SsaRunConfig::new(4, 20248, 20_000);
        cfg.x0_fraction = 0.75;
        let stats = mean_extinction_time(&m, &cfg).unwrap();
        assert_eq!(cfg.initial_count(), 3);
        assert!(stats.usable);
        assert_eq!(stats.n_censored, 0);
        let expected = 11.0 / 6.0;
        assert!(
            (stats.mean - expected).abs() <= 3.0 * stats.sem,
            "mean {} vs {expected} (sem {})",
            stats.mean,
            stats.sem
        );
    }

    #[test]
    fn pure_death_from_fifty() {
        let m = ModelSpec::pure_death(1.0).unwrap();
        let mut cfg = SsaRunConfig::new(100, 99, 10_000);
        cfg.x0_fraction = 0.5;
        let stats = mean_extinction_time(&m, &cfg).unwrap();
        assert_eq!(cfg.initial_count(), 50);
        let expected = harmonic(50);
        assert!(
            (stats.mean - expected).abs() <= 3.0 * stats.sem,
            "mean {} vs {expected} (sem {})",
            stats.mean,
            stats.sem
        );
    }

    #[test]
    fn identical_config_is_bit_identical() {
        let m = ModelSpec::hill(1.0, 1.0, 0.52).unwrap();
        let cfg = SsaRunConfig::new(200, 4242, 32);
        let a = mean_extinction_time(&m, &cfg).unwrap();
        let b = mean_extinction_time(&m, &cfg).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    }

    #[test]
    fn single_replicate_is_degenerate() {
        let m = ModelSpec::pure_death(1.0).unwrap();
        let cfg = SsaRunConfig::new(10, 5, 1);
        let stats = mean_extinction_time(&m, &cfg).unwrap();
        assert!(stats.degenerate_ensemble);
        assert_eq!(stats.sem, 0.0);
        assert!(stats.usable);
    }

    #[test]
    fn all_censored_is_flagged_unusable() {
        let m = ModelSpec::pure_death(1.0).unwrap();
        let mut cfg = SsaRunConfig::new(1000, 5, 8);
        cfg.t_max = 1e-9; // nothing can die this fast
        let stats = mean_extinction_time(&m, &cfg).unwrap();
        assert!(!stats.usable);
        assert_eq!(stats.n_censored, 8);
        assert!(stats.mean.is_nan());
    }

    #[test]
    fn explosion_is_reported() {
        use crate::model::{ModelParams, ReactionSpec};
        use alloc::sync::Arc;
        // pure birth at constant per-capita rate: guaranteed blow-up
        let m = ModelSpec::custom(
            "runaway",
            ModelParams::scaled(1.0),
            alloc::vec![ReactionSpec::new(
                "birth",
                1,
                Arc::new(|x, _p: &ModelParams| x),
                Arc::new(|n, _omega, _p: &ModelParams| n as f64),
            )],
        )
        .unwrap();
        let cfg = SsaRunConfig::new(50, 11, 1);
        match simulate_to_extinction(&m, &cfg, 0) {
            Err(SsaError::PopulationExplosion { count, .. }) => assert!(count > 500),
            other => panic!("expected explosion, got {other:?}"),
        }
    }

    #[test]
    fn extinction_cdf_matches_phase_type_law() {
        use crate::model::{ModelParams, ReactionSpec};
        use alloc::sync::Arc;
        // two transient states: from X=1 birth to 2 at rate lam, death to 0
        // at rate mu; from X=2 decay back to 1 at rate nu
        let (lam, mu, nu) = (1.3, 0.8, 2.1);
        let m = ModelSpec::custom(
            "two-state-toy",
            ModelParams::scaled(1.0),
            alloc::vec![
                ReactionSpec::new(
                    "up",
                    1,
                    Arc::new(move |x, _p: &ModelParams| if x == 1.0 { lam } else { 0.0 }),
                    Arc::new(move |n, _omega, _p: &ModelParams| if n == 1 { lam } else { 0.0 }),
                ),
                ReactionSpec::new(
                    "down",
                    -1,
                    Arc::new(move |x, _p: &ModelParams| {
                        if x == 1.0 {
                            mu
                        } else if x == 2.0 {
                            nu
                        } else {
                            0.0
                        }
                    }),
                    Arc::new(move |n, _omega, _p: &ModelParams| {
                        if n == 1 {
                            mu
                        } else if n == 2 {
                            nu
                        } else {
                            0.0
                        }
                    }),
                ),
            ],
        )
        .unwrap();

        // analytic absorption-time CDF from state 1 of the 2x2 generator
        let trace = lam + mu + nu;
        let disc = math::sqrt(trace * trace - 4.0 * mu * nu);
        let s_plus = 0.5 * (-trace + disc);
        let s_minus = 0.5 * (-trace - disc);
        let a = (-mu - s_minus) / (s_plus - s_minus);
        let survival = |t: f64| a * math::exp(s_plus * t) + (1.0 - a) * math::exp(s_minus * t);

        let n = 10_000usize;
        let mut cfg = SsaRunConfig::new(1, 777, n as u32);
        cfg.x0_fraction = 1.0;
        cfg.t_max = 1e6;
        let m_ref = &m;
        let mut times: Vec<f64> = (0..n as u64)
            .map(|i| simulate_to_extinction(m_ref, &cfg, i).unwrap().time)
            .collect();
        times.sort_by(|x, y| x.partial_cmp(y).unwrap());

        let mut d: f64 = 0.0;
        for (i, &t) in times.iter().enumerate() {
            let cdf = 1.0 - survival(t);
            d = d.max((cdf - i as f64 / n as f64).abs());
            d = d.max(((i + 1) as f64 / n as f64 - cdf).abs());
        }
        // 1% critical value of the Kolmogorov-Smirnov statistic
        let d_crit = 1.628 / math::sqrt(n as f64);
        assert!(d < d_crit, "KS statistic {d} exceeds {d_crit}");
    }

    #[test]
    fn bifurcation_estimate_brackets_deterministic_limit() {
        // large Omega surrogate. The start density 0.75 = 1.5 x_c lies above
        // both saddle-node branches of the autocatalytic model, so the
        // extinction-within-horizon threshold collapses onto eps_c.
        let m = ModelSpec::autocatalytic(1.0, 1.0, 0.25).unwrap();
        let mut cfg = SsaRunConfig::new(8000, 1001, 24);
        cfg.t_max = 300.0;
        let grid: Vec<f64> = (0..=10).map(|i| 0.22 + 0.006 * i as f64).collect();
        let est = estimate_stochastic_bifurcation(&m, &grid, &cfg).unwrap();
        assert!(
            (est.eps_bar_s - 0.25).abs() <= 2.0 * 0.006,
            "eps_bar_s {} too far from 0.25",
            est.eps_bar_s
        );
        // smoothed fractions are nondecreasing by construction
        for w in est.diagnostics.windows(2) {
            assert!(w[1].2 >= w[0].2);
        }
    }

    #[test]
    fn hill_surrogate_sits_on_the_basin_boundary() {
        // For the Hill model the same start density 0.75 lies below x_c, so
        // the large-Omega threshold is not eps_c but the eps at which the
        // unstable equilibrium (1 - sqrt(1 - 4 eps^2)) / (2 eps) crosses
        // 0.75, i.e. eps = 0.48: above it the start is inside the basin of
        // extinction, below it the population parks at the stable branch.
        let m = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let mut cfg = SsaRunConfig::new(8000, 1009, 24);
        cfg.t_max = 300.0;
        let grid: Vec<f64> = (0..=10).map(|i| 0.45 + 0.006 * i as f64).collect();
        let est = estimate_stochastic_bifurcation(&m, &grid, &cfg).unwrap();
        assert!(
            (est.eps_bar_s - 0.48).abs() <= 2.0 * 0.006,
            "eps_bar_s {} too far from 0.48",
            est.eps_bar_s
        );
    }

    #[test]
    fn bifurcation_estimates_stay_near_critical_for_small_omega() {
        let m = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let grid: Vec<f64> = (0..=10).map(|i| 0.44 + 0.012 * i as f64).collect();
        for (omega, seed) in [(500u64, 21u64), (8000, 22)] {
            let mut cfg = SsaRunConfig::new(omega, seed, 24);
            cfg.t_max = 300.0;
            let est = estimate_stochastic_bifurcation(&m, &grid, &cfg).unwrap();
            assert!(
                (est.eps_bar_s - 0.5).abs() < 0.05,
                "omega {omega}: eps_bar_s {}",
                est.eps_bar_s
            );
        }
    }

    #[test]
    fn degenerate_probe_grid_is_a_bracket_error() {
        let m = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let cfg = SsaRunConfig::new(100, 3, 4);
        assert!(matches!(
            estimate_stochastic_bifurcation(&m, &[0.5], &cfg),
            Err(SsaError::BracketError(_))
        ));
    }

    #[test]
    fn sweep_decays_away_from_bifurcation() {
        let m = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let mut cfg = SsaRunConfig::new(1000, 777, 64);
        cfg.t_max = 1e5;
        let pts = sweep_extinction_times(&m, 0.5, &[1e-2, 1e-1], &cfg).unwrap();
        assert!(pts[0].stats.mean > pts[1].stats.mean);
        assert_eq!(pts[0].stats.n_censored, 0);
    }

    #[test]
    fn empty_sweep_is_empty() {
        let m = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
        let cfg = SsaRunConfig::new(100, 1, 4);
        let pts = sweep_extinction_times(&m, 0.5, &[], &cfg).unwrap();
        assert!(pts.is_empty());
        let curve = sweep_to_curve(&pts, 100).unwrap();
        assert!(curve.points.is_empty());
    }
}
