//! Runge-Kutta-Fehlberg 7(8) embedded pair with adaptive step control.
//!
//! The classic 13-stage tableau (Fehlberg, NASA TR R-287, 1968). The
//! eighth-order solution is propagated; the difference against the
//! embedded seventh-order weights gives the local error estimate, which
//! reduces to (41/840) h (k0 + k10 - k11 - k12).

use crate::math;

pub const STAGES: usize = 13;

pub const C: [f64; STAGES] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    1.0 / 2.0,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

/// Stage coupling coefficients, row i holding a[i][j] for j < i.
pub const A: [[f64; 12]; STAGES] = [
    [0.0; 12],
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        -25.0 / 108.0,
        0.0,
        0.0,
        125.0 / 108.0,
        -65.0 / 27.0,
        125.0 / 54.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        31.0 / 300.0,
        0.0,
        0.0,
        0.0,
        61.0 / 225.0,
        -2.0 / 9.0,
        13.0 / 900.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.0,
        0.0,
        0.0,
        -53.0 / 6.0,
        704.0 / 45.0,
        -107.0 / 9.0,
        67.0 / 90.0,
        3.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        3.0 / 205.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -6.0 / 41.0,
        -3.0 / 205.0,
        -3.0 / 41.0,
        3.0 / 41.0,
        6.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];

/// Eighth-order solution weights.
pub const B8: [f64; STAGES] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

const ERR_COEFF: f64 = 41.0 / 840.0;

/// Right-hand side of an autonomous-friendly ODE system dy/dt = f(t, y).
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N], dydt: &mut [f64; N]);
}

impl<const N: usize, F> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N], &mut [f64; N]),
{
    fn rhs(&self, t: f64, y: &[f64; N], dydt: &mut [f64; N]) {
        self(t, y, dydt)
    }
}

/// Outcome of a single trial step.
#[derive(Clone, Copy, Debug)]
pub struct StepOutcome<const N: usize> {
    pub y: [f64; N],
    pub t: f64,
    /// Scaled error; accepted when <= 1.
    pub err_ratio: f64,
    pub h_next: f64,
    pub accepted: bool,
}

/// Adaptive stepper; owns the stage workspace so sweeps do not reallocate.
pub struct Rkf78<const N: usize> {
    /// Local tolerance; error is scaled by tol * (1 + |y|) with an
    /// absolute floor of 1e-300.
    pub tol: f64,
    pub h_min: f64,
    pub h_max: f64,
    k: [[f64; N]; STAGES],
}

impl<const N: usize> Rkf78<N> {
    pub fn new(tol: f64) -> Self {
        Self { tol, h_min: 1e-14, h_max: f64::INFINITY, k: [[0.0; N]; STAGES] }
    }

    /// One trial step of size `h`; the caller decides what to do with a
    /// rejection.
    pub fn step<S: OdeSystem<N>>(&mut self, sys: &S, t: f64, y: &[f64; N], h: f64) -> StepOutcome<N> {
        let y8 = self.raw_step(sys, t, y, h);

        let mut err_ratio: f64 = 0.0;
        for n in 0..N {
            let e = ERR_COEFF
                * h
                * (self.k[0][n] + self.k[10][n] - self.k[11][n] - self.k[12][n]);
            let scale = (self.tol * (1.0 + y8[n].abs().max(y[n].abs()))).max(1e-300);
            err_ratio = err_ratio.max((e / scale).abs());
        }

        let accepted = err_ratio <= 1.0 && y8.iter().all(|v| v.is_finite());
        let factor = if err_ratio == 0.0 {
            5.0
        } else {
            (0.9 * math::powf(err_ratio, -1.0 / 8.0)).clamp(0.2, 5.0)
        };
        let h_next = (h.abs() * factor).clamp(self.h_min, self.h_max) * h.signum();

        StepOutcome { y: y8, t: t + h, err_ratio, h_next, accepted }
    }

    /// Fixed step of exactly `h`, eighth-order solution, no error control.
    /// Used for event localization inside an already accepted step.
    pub fn raw_step<S: OdeSystem<N>>(&mut self, sys: &S, t: f64, y: &[f64; N], h: f64) -> [f64; N] {
        let mut y_stage = [0.0; N];
        sys.rhs(t, y, &mut self.k[0]);
        for i in 1..STAGES {
            for n in 0..N {
                let mut acc = 0.0;
                for j in 0..i {
                    acc += A[i][j] * self.k[j][n];
                }
                y_stage[n] = y[n] + h * acc;
            }
            sys.rhs(t + C[i] * h, &y_stage, &mut self.k[i]);
        }
        let mut y8 = [0.0; N];
        for n in 0..N {
            let mut acc = 0.0;
            for i in 0..STAGES {
                acc += B8[i] * self.k[i][n];
            }
            y8[n] = y[n] + h * acc;
        }
        y8
    }
}
