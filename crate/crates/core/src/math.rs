//! Float helpers routed through `libm` so the crate stays `no_std`.

pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// |x|^{p-2} x for real x; the nonlinearity is odd in u.
pub(crate) fn odd_power(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        powf(abs(x), p - 1.0) * if x < 0.0 { -1.0 } else { 1.0 }
    }
}

/// Γ(x) for x a positive integer or half-integer (enough for sphere areas).
pub(crate) fn gamma_int_or_half(twice_x: u32) -> f64 {
    debug_assert!(twice_x >= 1);
    const SQRT_PI: f64 = 1.772_453_850_905_516;
    let mut val = if twice_x % 2 == 0 { 1.0 } else { SQRT_PI };
    let mut k = if twice_x % 2 == 0 { 2 } else { 1 };
    // Γ(x) = (x-1)·Γ(x-1), starting from Γ(1) = 1 or Γ(1/2) = √π.
    while k + 2 <= twice_x {
        val *= k as f64 / 2.0;
        k += 2;
    }
    val
}

/// Surface area ω_{d−1} of the unit sphere in ℝ^d: 2 π^{d/2} / Γ(d/2).
pub(crate) fn unit_sphere_area(d: u32) -> f64 {
    const PI: f64 = core::f64::consts::PI;
    2.0 * powf(PI, d as f64 / 2.0) / gamma_int_or_half(d)
}

/// Least-squares slope of y against x.
pub(crate) fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    sxy / sxx
}
