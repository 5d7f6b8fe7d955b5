//! Semiclassical Hamiltonian built from a model's density rates, and the
//! phase-space curves that organize its dynamics.
//!
//! For rates w_i with unit steps r_i = +/-1,
//!
//! ```text
//! H(x, p)  = sum_i (e^{r_i p} - 1) w_i(x)
//! dx/dt    =  dH/dp = sum_i r_i e^{r_i p} w_i(x)
//! dp/dt    = -dH/dx = -sum_i (e^{r_i p} - 1) w_i'(x)
//! ```
//!
//! The line p = 0 is invariant and carries the mean-field flow. With the
//! aggregated birth rate b(x) and death rate d(x), the H = 0 set has the
//! extra branch p_H = ln(d/b), the xdot = 0 nullcline is p_1 = p_H / 2 and
//! the pdot = 0 nullcline is p_2 = ln(d'/b'); those three curves pinch
//! together at the saddle-node and carve out the slow "ghost" corridor.

use alloc::vec::Vec;

use crate::math;
use crate::model::{ModelError, ModelKind, ModelSpec};
use crate::numeric;

/// Hamiltonian view of a model. Immutable and cheap to share.
#[derive(Clone, Copy)]
pub struct HamiltonianSystem<'m> {
    model: &'m ModelSpec,
}

impl<'m> HamiltonianSystem<'m> {
    pub fn new(model: &'m ModelSpec) -> Self {
        Self { model }
    }

    pub fn model(&self) -> &'m ModelSpec {
        self.model
    }

    /// H(x, p). Zero on p = 0 exactly (termwise e^0 - 1 = 0) and on the
    /// p_H branch up to rounding.
    pub fn value(&self, x: f64, p: f64) -> f64 {
        let ep1 = math::expm1(p);
        let em1 = math::expm1(-p);
        let params = self.model.params();
        let mut h = 0.0;
        for r in self.model.reactions() {
            let w = r.intensive(x, params);
            h += if r.step == 1 { ep1 * w } else { em1 * w };
        }
        h
    }

    /// dx/dt at (x, p); restricted to p = 0 it reproduces the mean-field
    /// velocity through the same arithmetic path.
    pub fn dx_dt(&self, x: f64, p: f64) -> f64 {
        let ep = math::exp(p);
        let em = math::exp(-p);
        let params = self.model.params();
        let mut dx = 0.0;
        for r in self.model.reactions() {
            let w = r.intensive(x, params);
            dx += if r.step == 1 { ep * w } else { -(em * w) };
        }
        dx
    }

    /// dp/dt at (x, p); identically zero on p = 0.
    pub fn dp_dt(&self, x: f64, p: f64) -> f64 {
        let ep1 = math::expm1(p);
        let em1 = math::expm1(-p);
        let params = self.model.params();
        let mut dp = 0.0;
        for r in self.model.reactions() {
            let wdx = r.intensive_dx(x, params);
            dp -= if r.step == 1 { ep1 * wdx } else { em1 * wdx };
        }
        dp
    }

    /// One-pass evaluation of (dx/dt, dp/dt, H) sharing the rate calls;
    /// this is the hot path of orbit integration.
    pub(crate) fn eval_flow(&self, x: f64, p: f64) -> (f64, f64, f64) {
        let ep = math::exp(p);
        let em = math::exp(-p);
        let ep1 = math::expm1(p);
        let em1 = math::expm1(-p);
        let params = self.model.params();
        let mut dx = 0.0;
        let mut dp = 0.0;
        let mut h = 0.0;
        for r in self.model.reactions() {
            let w = r.intensive(x, params);
            let wdx = r.intensive_dx(x, params);
            if r.step == 1 {
                dx += ep * w;
                dp -= ep1 * wdx;
                h += ep1 * w;
            } else {
                dx -= em * w;
                dp -= em1 * wdx;
                h += em1 * w;
            }
        }
        (dx, dp, h)
    }
}

/// The organizing curves of the (x, p) phase plane for one (model, eps).
#[derive(Clone, Debug)]
pub struct PhaseCurves {
    pub eps: f64,
    pub x: Vec<f64>,
    /// Nonzero branch of H = 0: p_H(x) = ln(d(x)/b(x)).
    pub p_h: Vec<f64>,
    /// Nonzero branch of xdot = 0; identically p_H / 2.
    pub p1: Vec<f64>,
    /// Nonzero branch of pdot = 0: p_2(x) = ln(d'(x)/b'(x)).
    pub p2: Vec<f64>,
    /// (x, p) at the minimum of p_H; touches p = 0 exactly at eps_c.
    pub min_h: (f64, f64),
    /// (x, p) at the minimum of p_2; touches p = 0 exactly at eps_end.
    pub min_p: (f64, f64),
    /// Crossings x_F <= x_0 of p_2 with p = 0; absent for eps > eps_end.
    pub p2_zeros: Option<(f64, f64)>,
}

/// Sample the phase-space curves of `model` at decay rate `eps` on `x_grid`.
///
/// Minima are closed-form for the bundled models and located numerically
/// for custom ones. The p_2 crossings are reported whenever
/// eps <= eps_end and absent otherwise (not an error).
pub fn phase_curves(
    model: &ModelSpec,
    eps: f64,
    x_grid: &[f64],
) -> Result<PhaseCurves, ModelError> {
    if x_grid.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
        return Err(ModelError::NegativeDensity(0.0));
    }
    let m = model.with_eps(eps)?;

    let p_h_at = |x: f64| math::ln(m.death_rate(x) / m.birth_rate(x));
    let p2_at = |x: f64| math::ln(m.death_rate_dx(x) / m.birth_rate_dx(x));

    let mut p_h = Vec::with_capacity(x_grid.len());
    let mut p1 = Vec::with_capacity(x_grid.len());
    let mut p2 = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let ph = p_h_at(x);
        p_h.push(ph);
        p1.push(0.5 * ph);
        p2.push(p2_at(x));
    }

    let params = m.params();
    let (x_min_h, x_min_p) = match m.kind() {
        ModelKind::Hill => (params.a, params.a / math::sqrt(3.0)),
        ModelKind::Autocatalytic => (
            math::sqrt(params.eps * params.c / params.k),
            math::sqrt(params.eps * params.c / (3.0 * params.k)),
        ),
        ModelKind::Custom => {
            let lo = 1e-4;
            let hi = 20.0;
            let (xh, _) = numeric::scan_golden_min(&p_h_at, lo, hi, 1e-11);
            let (xp, _) = numeric::scan_golden_min(&p2_at, lo, hi, 1e-11);
            (xh, xp)
        }
    };
    let min_h = (x_min_h, p_h_at(x_min_h));
    let min_p = (x_min_p, p2_at(x_min_p));

    let p2_zeros = if min_p.1 > 0.0 {
        None
    } else if min_p.1.abs() <= 1e-12 {
        Some((x_min_p, x_min_p))
    } else {
        // d' - b' is positive on both sides of the dip and negative at it.
        let q = |x: f64| m.death_rate_dx(x) - m.birth_rate_dx(x);
        let mut left_lo = x_min_p * 1e-6;
        while q(left_lo) <= 0.0 {
            left_lo *= 0.5;
            if left_lo < 1e-300 {
                return Err(ModelError::NoSaddleNode);
            }
        }
        let mut right_hi = x_min_p * 2.0;
        while q(right_hi) <= 0.0 {
            right_hi *= 2.0;
            if right_hi > 1e12 {
                return Err(ModelError::NoSaddleNode);
            }
        }
        let x_f = numeric::bisect_root(&q, left_lo, x_min_p, 1e-13 * x_min_p.max(1.0))
            .map_err(|_| ModelError::NoSaddleNode)?;
        let x_0 = numeric::bisect_root(&q, x_min_p, right_hi, 1e-13 * right_hi.max(1.0))
            .map_err(|_| ModelError::NoSaddleNode)?;
        Some((x_f, x_0))
    };

    Ok(PhaseCurves { eps, x: x_grid.to_vec(), p_h, p1, p2, min_h, min_p, p2_zeros })
}
