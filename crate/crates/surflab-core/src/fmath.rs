//! Float helpers routed through `libm` so the crate builds without `std`.
//!
//! Using one implementation unconditionally also keeps results bit-identical
//! across `std`/`no_std` builds, which matters for byte-stable reports.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Least-squares slope and intercept of `y` against `x`.
///
/// Returns `(slope, intercept, max_abs_residual)`. Caller guarantees at least
/// two distinct `x` values.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    let slope = num / den;
    let intercept = my - slope * mx;
    let mut worst = 0.0f64;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = abs(y - (slope * x + intercept));
        if r > worst {
            worst = r;
        }
    }
    (slope, intercept, worst)
}
