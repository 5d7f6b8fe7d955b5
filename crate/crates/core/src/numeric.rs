//! Shared numerical routines: adaptive quadrature, bracketed
//! root-finding, 1-d minimization and finite differences.

/// Error from a quadrature or root-finding routine.
#[derive(Clone, Debug, PartialEq)]
pub enum NumericError {
    NonFiniteIntegrand { x: f64 },
    NoBracket,
    TooManyIterations,
}

impl core::fmt::Display for NumericError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NumericError::NonFiniteIntegrand { x } => {
                write!(f, "integrand not finite at x = {x}")
            }
            NumericError::NoBracket => write!(f, "no sign change in bracket"),
            NumericError::TooManyIterations => write!(f, "iteration limit exceeded"),
        }
    }
}

impl core::error::Error for NumericError {}

/// Adaptive Simpson quadrature with local Richardson error control.
///
/// Handles sharply peaked but smooth integrands by recursive bisection;
/// the tolerance is split between halves so the global error stays below
/// `rel_tol * |I| + abs_tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64, NumericError> {
    let fa = eval(f, a)?;
    let fb = eval(f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(f, m)?;
    let whole = simpson(a, b, fa, fm, fb);
    // First estimate sets the scale for the relative part of the tolerance.
    let scale = whole.abs().max(abs_tol);
    let tol = rel_tol * scale + abs_tol;
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, NumericError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumericError::NonFiniteIntegrand { x })
    }
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, NumericError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Bisection on a bracketed sign change, to absolute x-tolerance.
pub fn bisect_root<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
) -> Result<f64, NumericError> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(NumericError::NoBracket);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= x_tol {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimization on [lo, hi], preceded by a coarse scan so
/// a locally unimodal valley is picked even if the function has structure
/// elsewhere in the interval.
pub fn scan_golden_min<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, x_tol: f64) -> (f64, f64) {
    const SCAN: usize = 96;
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..=SCAN {
        let x = lo + (hi - lo) * i as f64 / SCAN as f64;
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let a = lo + (hi - lo) * best_i.saturating_sub(1) as f64 / SCAN as f64;
    let b = lo + (hi - lo) * (best_i + 1).min(SCAN) as f64 / SCAN as f64;
    golden_min(f, a, b, x_tol)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Five-point centered first derivative.
pub fn derivative_5pt<F: Fn(f64) -> f64>(f: &F, x: f64, scale: f64) -> f64 {
    let h = 1e-3 * scale.max(1e-6);
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}
