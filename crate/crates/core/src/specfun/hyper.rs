//! `0F3(; b1, b2, b3; x) = Σ xⁿ / (n! (b1)ₙ (b2)ₙ (b3)ₙ)` by forward term recurrence.
//!
//! Terms are carried as log-magnitude plus a unit phase, so parameters with a
//! large negative part (the harmonic-limit regime, `b ≈ 2 − 1/λ'` with small
//! `λ'`) can be summed through their oscillating stretch without overflow.
//! Summation stops once every parameter factor is positive, the term ratio is
//! at most 1/2 and the certified geometric tail is below `rel_tol`.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use super::{Estimate, PrecisionConfig, POLE_TOL};
use crate::{Error, Result};

/// Scalars the series can be summed over.
pub(crate) trait SeriesScalar:
    Copy + Add<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self>
{
    fn one() -> Self;
    fn magnitude(&self) -> f64;
}

impl SeriesScalar for f64 {
    fn one() -> Self {
        1.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl SeriesScalar for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

pub fn hyper0f3(b1: f64, b2: f64, b3: f64, x: f64, cfg: &PrecisionConfig) -> Result<Estimate> {
    sum_0f3([b1, b2, b3], x, cfg)
}

pub fn hyper0f3_complex(
    b1: f64,
    b2: f64,
    b3: f64,
    x: Complex64,
    cfg: &PrecisionConfig,
) -> Result<Estimate<Complex64>> {
    sum_0f3([b1, b2, b3], x, cfg)
}

pub(crate) fn sum_0f3<T: SeriesScalar>(
    b: [f64; 3],
    x: T,
    cfg: &PrecisionConfig,
) -> Result<Estimate<T>> {
    cfg.validate()?;
    if let Some(&bad) = b.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid("b", bad, "parameters must be finite"));
    }
    let x_abs = x.magnitude();
    if !x_abs.is_finite() {
        return Err(Error::invalid("x", x_abs, "argument must be finite"));
    }
    if x_abs == 0.0 {
        return Ok(Estimate {
            value: T::one(),
            abs_err: 0.0,
        });
    }
    let x_phase = x * (1.0 / x_abs);
    let ln_x = x_abs.ln();

    let mut sum = T::one();
    let mut abs_sum = 1.0;
    // current term t_k = exp(ln_term) * phase
    let mut ln_term = 0.0_f64;
    let mut phase = T::one();

    for k in 0..cfg.max_terms {
        let kf = k as f64;
        let mut ln_den = (kf + 1.0).ln();
        let mut sign = 1.0;
        let mut at_pole = false;
        let mut all_positive = true;
        for &bi in &b {
            let f = bi + kf;
            if f.abs() < POLE_TOL {
                at_pole = true;
                ln_den += POLE_TOL.ln();
            } else {
                ln_den += f.abs().ln();
                if f < 0.0 {
                    sign = -sign;
                }
            }
            all_positive &= f > 0.0;
        }
        let ln_ratio = ln_x - ln_den;

        // Tail after t_k, valid once every factor grows monotonically.
        if all_positive && ln_ratio <= -std::f64::consts::LN_2 {
            let ratio = ln_ratio.exp();
            let tail = ln_term.exp() * ratio / (1.0 - ratio);
            let scale = sum.magnitude();
            if tail <= cfg.rel_tol * scale {
                let rounding = 4.0 * f64::EPSILON * abs_sum;
                return Ok(Estimate {
                    value: sum,
                    abs_err: tail + rounding,
                });
            }
        }

        ln_term += ln_ratio;
        phase = phase * x_phase * sign;
        let magnitude = ln_term.exp();
        if at_pole {
            // Within POLE_TOL of a pole the series is only meaningful if the
            // pole term is invisible at working precision.
            if magnitude > f64::EPSILON * 1e-3 * sum.magnitude().max(f64::MIN_POSITIVE) {
                return Err(Error::ParamSingular(format!(
                    "0F3 parameter within {POLE_TOL:e} of the nonpositive integer {} \
                     (b = {b:?})",
                    -kf
                )));
            }
        }
        if !magnitude.is_finite() {
            return Err(Error::NoConvergence {
                what: "0F3 series (term overflow)",
                terms: k + 1,
            });
        }
        sum = sum + phase * magnitude;
        abs_sum += magnitude;
    }
    Err(Error::NoConvergence {
        what: "0F3 series",
        terms: cfg.max_terms,
    })
}
