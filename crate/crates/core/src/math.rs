//! Float helpers routed through `libm` so the crate stays `no_std`-clean
//! and bit-identical across platforms.

#[inline(always)]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline(always)]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline(always)]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline(always)]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline(always)]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline(always)]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline(always)]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline(always)]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Round half-to-even for nonnegative values, as an integer count.
///
/// Used for initial populations so that `x0_fraction * omega` maps to the
/// same count on every platform.
pub fn round_half_even_u64(v: f64) -> u64 {
    debug_assert!(v >= 0.0 && v.is_finite());
    let base = floor(v);
    let frac = v - base;
    let b = base as u64;
    if frac > 0.5 {
        b + 1
    } else if frac < 0.5 {
        b
    } else if b % 2 == 0 {
        b
    } else {
        b + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_half_even_ties() {
        assert_eq!(round_half_even_u64(0.5), 0);
        assert_eq!(round_half_even_u64(1.5), 2);
        assert_eq!(round_half_even_u64(2.5), 2);
        assert_eq!(round_half_even_u64(3.5), 4);
        assert_eq!(round_half_even_u64(375.0), 375);
        assert_eq!(round_half_even_u64(749.9999), 750);
        assert_eq!(round_half_even_u64(750.0001), 750);
    }
}
