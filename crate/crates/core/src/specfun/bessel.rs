//! Modified Bessel functions `I₀`, `I₁` by their ascending series.

use super::{Estimate, PrecisionConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

/// `I_ν(x) = Σ (x/2)^{2k+ν} / (k! (k+ν)!)` for `ν ∈ {0, 1}` and `x ≥ 0`.
pub fn bessel_i(order: BesselOrder, x: f64, cfg: &PrecisionConfig) -> Result<Estimate> {
    cfg.validate()?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::invalid("x", x, "bessel_i needs a finite x >= 0"));
    }
    let nu = match order {
        BesselOrder::Zero => 0.0,
        BesselOrder::One => 1.0,
    };
    let half = 0.5 * x;
    if half == 0.0 {
        return Ok(Estimate {
            value: if nu == 0.0 { 1.0 } else { 0.0 },
            abs_err: 0.0,
        });
    }
    let q = half * half;
    let mut term = if nu == 0.0 { 1.0 } else { half };
    let mut sum = term;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        let ratio = q / ((kf + 1.0) * (kf + 1.0 + nu));
        // ratios decrease monotonically in k
        if ratio <= 0.5 {
            let tail = term * ratio / (1.0 - ratio);
            if tail <= cfg.rel_tol * sum {
                return Ok(Estimate {
                    value: sum,
                    abs_err: tail + 2.0 * f64::EPSILON * sum,
                });
            }
        }
        term *= ratio;
        if !term.is_finite() {
            break;
        }
        sum += term;
    }
    Err(Error::NoConvergence {
        what: "Bessel I series",
        terms: cfg.max_terms,
    })
}
