use ghost_core::*;
use ghost_core::scaling::QuadratureSegment;
use std::time::Instant;
fn main() {
    for (name, model) in [("hill", ModelSpec::hill(1.0,1.0,0.5).unwrap()), ("auto", ModelSpec::autocatalytic(1.0,1.0,0.25).unwrap())] {
        let cp = model.critical_params().unwrap();
        for phi in [1e-2, 1e-4, 1e-6] {
            let t0 = Instant::now();
            let q = transit_time_quadrature(&model, phi, 0.0, QuadratureSegment::Range { from: 1.5*cp.x_c, to: 0.05*cp.x_c }).unwrap();
            let tq = t0.elapsed().as_secs_f64();
            let m = model.with_eps(cp.eps_c + phi).unwrap();
            let sys = HamiltonianSystem::new(&m);
            let t0 = Instant::now();
            let ode = flight_time(&sys, 1.5*cp.x_c, 0.0, &StopSpec::full_decay(0.05*cp.x_c), 1e-12).unwrap();
            let tode = t0.elapsed().as_secs_f64();
            println!("{name} phi={phi:.0e}: quad {q:.6} ({tq:.2}s) ode {ode:.6} ({tode:.2}s) rel {:.2e}", ((ode-q)/q).abs());
        }
    }
}
