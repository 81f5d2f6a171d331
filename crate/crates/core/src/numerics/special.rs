//! Normal distribution and error-function helpers on top of `libm`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `1 / sqrt(pi)`.
pub const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Standard normal CDF, accurate in both tails.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `exp(x²) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        // exp(x²) overflows past ~26.6; the result is +inf there anyway.
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 26.0 {
        // Split x² = hi + lo so exp keeps full relative accuracy.
        let hi = (x * 4096.0).round() / 4096.0;
        let sq_hi = hi * hi;
        let sq_lo = (x - hi) * (x + hi);
        return (sq_hi.exp() * sq_lo.exp()) * libm::erfc(x);
    }
    // Asymptotic series 1/(x sqrt(pi)) * Σ (-1)^k (2k-1)!! / (2x²)^k
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..8 {
        term *= -((2 * k - 1) as f64) * inv;
        sum += term;
    }
    FRAC_1_SQRT_PI * sum / x
}

/// Upper incomplete gamma `Γ(-1/2, c)` for `c > 0`.
pub fn upper_gamma_neg_half(c: f64) -> f64 {
    if c > 50.0 {
        // Γ(a, c) ~ c^(a-1) e^(-c) Σ (a-1)(a-2)...(a-k) / c^k
        let a = -0.5;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..12 {
            term *= (a - k as f64) / c;
            sum += term;
        }
        return c.powf(a - 1.0) * (-c).exp() * sum;
    }
    2.0 * (-c).exp() / c.sqrt() - 2.0 * PI.sqrt() * libm::erfc(c.sqrt())
}
