//! Flight-time oracles: event-detected orbit times against independent
//! quadrature of the reciprocal flow, plus the bottleneck asymptotics and
//! the plateau behaviour of negative starting momenta.

use ghost_core::scaling::QuadratureSegment;
use ghost_core::*;

const PI: f64 = std::f64::consts::PI;

#[test]
fn hill_full_decay_follows_the_bottleneck_asymptotic() {
    // T ~ 2 pi / sqrt(phi) for the decay from 1.5 to 0.05 through the
    // ghost; window truncation and tail corrections sit inside 5% at
    // phi = 1e-4 and shrink with phi
    let model = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
    for (phi, tol) in [(1e-4, 0.05), (1e-6, 0.01)] {
        let m = model.with_eps(0.5 + phi).unwrap();
        let sys = HamiltonianSystem::new(&m);
        let t = flight_time(&sys, 1.5, 0.0, &StopSpec::full_decay(0.05), 1e-12).unwrap();
        let asym = 2.0 * PI / phi.sqrt();
        assert!(
            ((t - asym) / asym).abs() < tol,
            "phi {phi:e}: flight {t} vs asymptotic {asym}"
        );
    }
}

#[test]
fn window_transit_matches_quadrature_not_the_naive_asymptotic() {
    // at phi = 1e-2 the +-0.1 window captures only ~30% of the full-line
    // bottleneck integral: the honest value is the quadrature one, about
    // 2 pi / sqrt(phi) * (2/pi) atan(delta / (2 sqrt(phi)))
    let model = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
    let phi = 1e-2;
    let m = model.with_eps(0.5 + phi).unwrap();
    let sys = HamiltonianSystem::new(&m);
    let ode = flight_time(&sys, 1.5, 0.0, &StopSpec::bottleneck(0.1), 1e-12).unwrap();
    let quad =
        transit_time_quadrature(&model, phi, 0.0, QuadratureSegment::Window { delta: 0.1 })
            .unwrap();
    assert!(((ode - quad) / quad).abs() < 1e-6, "ode {ode} vs quadrature {quad}");
    let truncated = 2.0 * PI / phi.sqrt() * (2.0 / PI) * (0.1 / (2.0 * phi.sqrt())).atan();
    assert!(
        ((ode - truncated) / truncated).abs() < 0.15,
        "ode {ode} vs truncated asymptotic {truncated}"
    );
}

#[test]
fn widening_the_window_barely_changes_deep_bottleneck_transits() {
    // at phi = 1e-6 the transit is dominated by the bottleneck interior:
    // doubling delta moves it by well under 1%
    let model = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
    let t1 = transit_time_quadrature(&model, 1e-6, 0.0, QuadratureSegment::Window { delta: 0.1 })
        .unwrap();
    let t2 = transit_time_quadrature(&model, 1e-6, 0.0, QuadratureSegment::Window { delta: 0.2 })
        .unwrap();
    assert!(((t2 - t1) / t1).abs() < 0.01, "delta doubling moved {t1} -> {t2}");
}

#[test]
fn negative_momentum_transits_plateau() {
    // inside the decay-side lobe the transit time loses its phi
    // dependence entirely
    let model = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
    let mut times = Vec::new();
    for phi in [1e-5, 1e-6] {
        let m = model.with_eps(0.5 + phi).unwrap();
        let sys = HamiltonianSystem::new(&m);
        let stop = StopSpec::bottleneck(0.1).with_t_cap(1e6);
        times.push(flight_time(&sys, 1.5, -0.1, &stop, 1e-12).unwrap());
    }
    assert!(
        (times[0] / times[1] - 1.0).abs() < 0.10,
        "transits {times:?} not within 10%"
    );
}

#[test]
fn autocatalytic_window_quadrature_normal_form() {
    // reciprocal of the normal form 0.5 y^2 + 0.5 phi integrates to
    // 2 pi / sqrt(phi) over the full line; the +-0.1 window at phi = 1e-4
    // keeps ~94% of that
    let model = ModelSpec::autocatalytic(1.0, 1.0, 0.25).unwrap();
    let t = transit_time_quadrature(&model, 1e-4, 0.0, QuadratureSegment::Window { delta: 0.1 })
        .unwrap();
    let asym = 2.0 * PI / (1e-4f64).sqrt();
    assert!(((t - asym) / asym).abs() < 0.10, "window transit {t} vs {asym}");

    // the phi^{-1/2} law shows up as a factor-two drop for 4x phi
    let t4 = transit_time_quadrature(&model, 4e-4, 0.0, QuadratureSegment::Window { delta: 0.1 })
        .unwrap();
    assert!((t / t4 - 2.0).abs() < 0.25, "scaling ratio {}", t / t4);
}

#[test]
fn deterministic_ode_time_predicts_ssa_far_from_criticality() {
    // far from the bifurcation fluctuations are subdominant and the mean
    // extinction time tracks the mean-field first passage. The matching
    // deterministic threshold is the discreteness scale x = 1/(2 Omega):
    // stopping the ODE at x = 0.01 instead misses the last ~ln(X)/eps of
    // the absorbing tail (about 6 time units here).
    let omega = 500u64;
    let model = ModelSpec::autocatalytic(1.0, 1.0, 0.35).unwrap();
    let phi = 0.35 - 0.25;
    let to_discreteness = transit_time_quadrature(
        &model,
        phi,
        0.0,
        QuadratureSegment::Range { from: 0.75, to: 0.5 / omega as f64 },
    )
    .unwrap();
    let to_hundredth = transit_time_quadrature(
        &model,
        phi,
        0.0,
        QuadratureSegment::Range { from: 0.75, to: 0.01 },
    )
    .unwrap();
    let mut cfg = SsaRunConfig::new(omega, 6060, 64);
    cfg.x0_fraction = 0.75;
    let stats = mean_extinction_time(&model, &cfg).unwrap();
    assert_eq!(stats.n_censored, 0);
    assert!(
        ((stats.mean - to_discreteness) / to_discreteness).abs() < 0.25,
        "ssa mean {} vs deterministic {} (to 1/(2 Omega))",
        stats.mean,
        to_discreteness
    );
    assert!(
        ((stats.mean - to_hundredth) / to_hundredth).abs() < 0.40,
        "ssa mean {} vs deterministic {} (to 0.01)",
        stats.mean,
        to_hundredth
    );
}

#[test]
fn bottleneck_transit_errors_when_the_orbit_never_enters() {
    // an orbit parked above the window by construction: x0 beyond x_cap
    // guards is not needed; just use a runaway positive momentum start
    let model = ModelSpec::hill(1.0, 1.0, 0.5 + 1e-4).unwrap();
    let sys = HamiltonianSystem::new(&model);
    let stop = StopSpec::bottleneck(0.05).with_t_cap(1e4);
    // p0 = 0.3 sits above the growth nullcline: x runs away immediately
    let err = flight_time(&sys, 1.5, 0.3, &stop, 1e-12).unwrap_err();
    match err {
        OrbitError::NoTransit(rec) => {
            assert_eq!(rec.exit_reason, ExitReason::LeftWindow);
            assert!(!rec.samples.is_empty());
        }
        other => panic!("expected NoTransit, got {other}"),
    }
}

#[test]
fn flight_sweep_examples() {
    let hill = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();

    // singleton ensembles produce single-orbit points with zero spread
    let sweep = flight_time_sweep(&hill, &[1e-4], &EnsembleSpec::singleton(0.0)).unwrap();
    assert_eq!(sweep.curve.points.len(), 1);
    assert_eq!(sweep.curve.points[0].spread, 0.0);
    assert_eq!(sweep.curve.points[0].n, 1);

    // the default negative ensemble plateaus: the two smallest phi agree
    // within 10%
    let sweep = flight_time_sweep(&hill, &[1e-5, 1e-4], &EnsembleSpec::default()).unwrap();
    let v = sweep.curve.values();
    assert!((v[0] / v[1] - 1.0).abs() < 0.10, "plateau values {v:?}");
}
