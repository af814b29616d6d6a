//! Gamma function family on the real line.
//!
//! Positive arguments are shifted up to `x ≥ 15` by the recurrence and finished
//! with the Stirling series; negative non-integers go through the reflection
//! formula with an exactly reduced `sin(πx)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Absolute distance to a nonpositive integer below which `x` counts as a pole.
pub const POLE_TOL: f64 = 1e-12;

const STIRLING_MIN: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMode {
    Value,
    LogAbsAndSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaOutput {
    Value(f64),
    LogAbs { ln_abs: f64, sign: f64 },
}

pub fn gamma_mode(x: f64, mode: GammaMode) -> Result<GammaOutput> {
    match mode {
        GammaMode::Value => gamma(x).map(GammaOutput::Value),
        GammaMode::LogAbsAndSign => {
            ln_gamma(x).map(|(ln_abs, sign)| GammaOutput::LogAbs { ln_abs, sign })
        }
    }
}

fn check_pole(x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::invalid("x", x, "gamma of NaN"));
    }
    if x <= POLE_TOL && (x - x.round()).abs() < POLE_TOL {
        return Err(Error::Pole { x });
    }
    Ok(())
}

/// `Γ(x)` for any real `x` that is not a pole.
pub fn gamma(x: f64) -> Result<f64> {
    check_pole(x)?;
    if x > 0.0 && x == x.trunc() && x <= 171.0 {
        // exact through 22!, correctly rounded products after that
        return Ok((2..x as u32).fold(1.0, |acc, k| acc * k as f64));
    }
    if x > 0.0 {
        return Ok(gamma_positive(x));
    }
    // Γ(x) = π / (sin(πx) Γ(1 - x))
    Ok(PI / (sin_pi(x) * gamma_positive(1.0 - x)))
}

fn gamma_positive(x: f64) -> f64 {
    if x >= STIRLING_MIN {
        return stirling_value(x);
    }
    let (shifted, prod) = shift_up(x);
    stirling_value(shifted) / prod
}

/// `√(2π) x^{x−1/2} e^{−x} e^{S(x)}` with the power split in two halves so
/// that neither factor overflows before `x ≈ 171.6`.
fn stirling_value(x: f64) -> f64 {
    let half = x.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * half * ((-x).exp() * half) * stirling_series(x).exp()
}

fn stirling_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    STIRLING.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv
}

/// `(ln|Γ(x)|, sign Γ(x))`.
pub fn ln_gamma(x: f64) -> Result<(f64, f64)> {
    check_pole(x)?;
    if x > 0.0 {
        return Ok((ln_gamma_positive(x), 1.0));
    }
    let s = sin_pi(x);
    let ln_abs = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    Ok((ln_abs, s.signum()))
}

pub(crate) fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= STIRLING_MIN {
        return stirling_ln(x);
    }
    let (shifted, prod) = shift_up(x);
    stirling_ln(shifted) - prod.ln()
}

fn shift_up(mut x: f64) -> (f64, f64) {
    let mut prod = 1.0;
    while x < STIRLING_MIN {
        prod *= x;
        x += 1.0;
    }
    (x, prod)
}

fn stirling_ln(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_series(x)
}

/// `sin(πx)` with the argument reduced exactly to `[-1/2, 1/2]`.
fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// Rising factorial `x (x+1) … (x+n-1)` by direct product; `n = 0` gives 1.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// `(ln|(x)_n|, sign)` through Gamma ratios. A product that contains an exact
/// zero factor returns `(-inf, 0.0)`.
///
/// Negative factors are collected through the reflected ratio
/// `∏ (−x−k) = Γ(1−x)/Γ(1−x−m)`, so arguments near the poles of `Γ(x)` stay
/// well conditioned as long as no factor itself vanishes.
pub fn ln_pochhammer(x: f64, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    if x > 0.0 {
        return (ln_gamma_positive(x + nf) - ln_gamma_positive(x), 1.0);
    }
    if x == x.trunc() && -x < nf {
        return (f64::NEG_INFINITY, 0.0);
    }
    let negative = ((-x).ceil() as usize).min(n);
    let mut ln_abs = 0.0;
    if negative > 0 {
        let mf = negative as f64;
        ln_abs += ln_gamma_positive(1.0 - x) - ln_gamma_positive(1.0 - x - mf);
    }
    let sign = if negative.is_multiple_of(2) { 1.0 } else { -1.0 };
    if negative < n {
        let y = x + negative as f64;
        ln_abs += ln_gamma_positive(y + (n - negative) as f64) - ln_gamma_positive(y);
    }
    (ln_abs, sign)
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < STIRLING_MIN {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - series
}

/// Trigamma `ψ'(x)` for `x > 0`.
pub fn trigamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < STIRLING_MIN {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * inv
        * (1.0 / 6.0
            - inv2
                * (1.0 / 30.0
                    - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0 - inv2 * 691.0 / 2730.0)))));
    acc + inv + 0.5 * inv2 + series
}

/// `ln Γ(s)` for `Re s > 0`, determined only modulo `2πi`.
pub(crate) fn ln_gamma_complex(mut s: Complex64) -> Complex64 {
    debug_assert!(s.re > 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    while s.norm_sqr() < STIRLING_MIN * STIRLING_MIN {
        prod *= s;
        s += 1.0;
    }
    let inv = s.inv();
    let inv2 = inv * inv;
    let series = STIRLING
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * inv2 + c)
        * inv;
    (s - 0.5) * s.ln() - s + HALF_LN_2PI + series - prod.ln()
}
