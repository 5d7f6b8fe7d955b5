// temporary probe (deleted before finalizing): criterion 8/9 pinning
use ghost_cli::pool::pool_runner;
use ghost_core::*;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

fn eps_bar_two_stage(model: &ModelSpec, omega: u64, seed: u64, runner: &impl ReplicateRunner) -> f64 {
    let mut cfg = SsaRunConfig::new(omega, seed, 200);
    cfg.t_max = 300.0;
    let coarse: Vec<f64> = (0..=10).map(|i| 0.45 + 0.01 * i as f64).collect();
    let c = estimate_stochastic_bifurcation_with(model, &coarse, &cfg, runner).unwrap();
    let mut cfg2 = SsaRunConfig::new(omega, seed ^ 0xf1de, 2400);
    cfg2.t_max = 300.0;
    let fine: Vec<f64> = (0..=8).map(|i| c.eps_bar_s - 0.005 + 0.00125 * i as f64).collect();
    match estimate_stochastic_bifurcation_with(model, &fine, &cfg2, runner) {
        Ok(f) => f.eps_bar_s,
        Err(_) => c.eps_bar_s,
    }
}

#[test]
#[ignore]
fn probe_criteria_8_and_9() {
    let hill = ModelSpec::hill(1.0, 1.0, 0.5).unwrap();
    let runner = pool_runner(2);
    for seed in [880001u64, 11, 12] {
        let t0 = std::time::Instant::now();
        let eps_bar = eps_bar_two_stage(&hill, 500, seed, &runner);
        let est_t = t0.elapsed().as_secs_f64();
        let phi_grid = log_grid(1e-5, 1e-1, 12);
        let mut cfg = SsaRunConfig::new(500, seed ^ 0xabcd, 200);
        cfg.t_max = 3e5;
        let t0 = std::time::Instant::now();
        let pts = sweep_extinction_times_with(&hill, eps_bar, &phi_grid, &cfg, &runner).unwrap();
        let sweep_t = t0.elapsed().as_secs_f64();
        println!("seed {seed}: eps_bar {eps_bar:.5} ({est_t:.0}s), sweep {sweep_t:.0}s");
        for p in &pts {
            println!(
                "  phi_s {:.3e}: mean {:.2} sem {:.2} censored {}",
                p.phi_s, p.stats.mean, p.stats.sem, p.stats.n_censored
            );
        }
        let curve = sweep_to_curve(&pts, 500).unwrap();
        match bend_location(&curve, &Default::default()) {
            Ok(rep) => println!(
                "  bend {:.4e} plateau {:.0} decay slope {:.2}",
                rep.phi_bend, rep.plateau_level, rep.decay.slope
            ),
            Err(e) => println!("  bend FAILED: {e}"),
        }
        let shared: Vec<f64> = phi_grid.iter().copied().filter(|&p| p <= 1e-2).collect();
        let flight = flight_time_sweep(&hill, &shared, &EnsembleSpec::default()).unwrap();
        let ssa_vals: Vec<f64> = pts
            .iter()
            .filter(|p| p.phi_s <= 1e-2)
            .map(|p| p.stats.mean)
            .collect();
        let rho = ghost_core::stats::spearman(&ssa_vals, &flight.curve.values());
        println!("  spearman: {rho:.4}");
    }
}
