//! `G^{4,0}_{0,4}(y | b1..b4)` from its Mellin-Barnes integral
//!
//! ```text
//! G(y) = 1/(2πi) ∫_{c-i∞}^{c+i∞} Γ(b1+s)Γ(b2+s)Γ(b3+s)Γ(b4+s) y^{-s} ds
//!      = 1/π ∫_0^∞ Re f(c+it) dt
//! ```
//!
//! normalised so that `∫_0^∞ G(y) y^{k-1} dy = ∏ Γ(b_i + k)`. The vertical line
//! is sampled with the trapezoidal rule, which converges geometrically for an
//! integrand analytic in a strip. Unless a fixed abscissa is configured, the
//! line is moved to the real saddle point `Σ ψ(b_i + c) = ln y`; this keeps
//! the integrand free of cancellation for both very small and very large `y`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{digamma, ln_gamma_complex, rightmost_pole, trigamma, Estimate, PrecisionConfig};
use crate::{Error, Result};

/// Minimal distance kept between an automatic abscissa and the rightmost pole.
const POLE_CLEARANCE: f64 = 0.1;
/// The truncated contour stops once the envelope is this many e-folds down.
const ENVELOPE_DROP: f64 = 40.0;
const MAX_LEVELS: usize = 8;

pub fn meijer_g_4040(b: [f64; 4], y: f64, cfg: &PrecisionConfig) -> Result<Estimate> {
    cfg.check_contour(&b)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::invalid("y", y, "Meijer G argument must be positive"));
    }
    if let Some(&bad) = b.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid("b", bad, "parameters must be finite"));
    }
    let ln_y = y.ln();
    let groups = group(&b);
    let c = match cfg.contour_abscissa {
        Some(c) => c,
        None => meijer_saddle_abscissa(&b, ln_y),
    };
    let pole = rightmost_pole(&b);

    let ln_f = |t: f64| -> Complex64 {
        let s = Complex64::new(c, t);
        groups
            .iter()
            .map(|&(bi, m)| ln_gamma_complex(s + bi) * m)
            .sum::<Complex64>()
            - s * ln_y
    };
    let f = |t: f64| -> (f64, f64) {
        let e = ln_f(t).exp();
        (e.re, e.norm())
    };

    // Step: resolve the analytic strip (distance to the poles) and the
    // Gaussian width around the saddle.
    let width = 1.0
        / groups
            .iter()
            .map(|&(bi, m)| m * trigamma(bi + c))
            .sum::<f64>()
            .sqrt();
    let strip = c - pole;
    let mut h = cfg.contour_step.min(0.08 * strip).min(0.4 * width);

    // Half-height: walk out until the envelope has dropped far enough.
    let ln_peak = ln_f(0.0).re;
    let probe = (0.5 * width).max(0.25);
    let mut t_max = probe;
    while ln_f(t_max).re > ln_peak - ENVELOPE_DROP {
        t_max += probe;
        if t_max > 1e4 {
            return Err(Error::QuadratureNotConverged {
                what: "Meijer G contour envelope",
                rel_change: f64::NAN,
            });
        }
    }
    let t_max = t_max.max(cfg.contour_halfheight);

    // Level 0, then repeatedly halve h and double T reusing all nodes.
    let (f0, a0) = f(0.0);
    let mut sum = 0.5 * f0;
    let mut abs_sum = 0.5 * a0;
    let mut nodes = (t_max / h).round() as usize;
    for k in 1..=nodes {
        let (re, a) = f(k as f64 * h);
        sum += re;
        abs_sum += a;
    }
    let mut value = sum * h / PI;

    let mut last_change = f64::NAN;
    for _ in 0..MAX_LEVELS {
        let half = 0.5 * h;
        for k in 0..nodes {
            let (re, a) = f((2 * k + 1) as f64 * half);
            sum += re;
            abs_sum += a;
        }
        let fine_nodes = 4 * nodes;
        for k in (2 * nodes + 1)..=fine_nodes {
            let (re, a) = f(k as f64 * half);
            sum += re;
            abs_sum += a;
        }
        h = half;
        nodes = fine_nodes;
        let refined = sum * h / PI;
        let change = (refined - value).abs();
        let rounding = 16.0 * f64::EPSILON * abs_sum * h / PI;
        value = refined;
        last_change = change / value.abs();
        if change <= cfg.rel_tol * value.abs() || change <= rounding {
            return Ok(Estimate {
                value,
                abs_err: change + rounding,
            });
        }
    }
    Err(Error::QuadratureNotConverged {
        what: "Meijer G Mellin-Barnes quadrature",
        rel_change: last_change,
    })
}

/// Real saddle of `∏Γ(b_i+s) y^{-s}`, i.e. the root of `Σ ψ(b_i + c) = ln y`,
/// clamped to stay [`POLE_CLEARANCE`] right of the rightmost pole.
pub fn meijer_saddle_abscissa(b: &[f64], ln_y: f64) -> f64 {
    let lo_bound = rightmost_pole(b) + POLE_CLEARANCE;
    let slope = |c: f64| b.iter().map(|&bi| digamma(bi + c)).sum::<f64>() - ln_y;
    if slope(lo_bound) >= 0.0 {
        return lo_bound;
    }
    let mut lo = lo_bound;
    let mut hi = lo_bound + 1.0;
    while slope(hi) < 0.0 {
        lo = hi;
        hi = lo_bound + 2.0 * (hi - lo_bound);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Distinct parameters with multiplicities, so repeated Γ factors cost one call.
fn group(b: &[f64]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(b.len());
    for &bi in b {
        match out.iter_mut().find(|(v, _)| *v == bi) {
            Some((_, m)) => *m += 1.0,
            None => out.push((bi, 1.0)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn groups_repeated_parameters() {
        assert_eq!(
            group(&[0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0]),
            vec![(0.0, 2.0), (1.0 / 3.0, 2.0)]
        );
    }

    #[test]
    fn saddle_is_right_of_poles_and_solves_the_digamma_equation() {
        let b = [0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0];
        for ln_y in [-3.0, 0.0, 5.0, 14.0] {
            let c = meijer_saddle_abscissa(&b, ln_y);
            assert!(c >= POLE_CLEARANCE);
            let s: f64 = b.iter().map(|&bi| digamma(bi + c)).sum();
            if c > POLE_CLEARANCE {
                assert_relative_eq!(s, ln_y, epsilon = 1e-9);
            }
        }
        assert_eq!(meijer_saddle_abscissa(&b, -200.0), POLE_CLEARANCE);
    }

    #[test]
    fn gauss_multiplication_case_is_exponential() {
        // Γ(s)Γ(s+1/4)Γ(s+1/2)Γ(s+3/4) = (2π)^{3/2} 4^{1/2-4s} Γ(4s), hence
        // G(y | 0, 1/4, 1/2, 3/4) = (2π)^{3/2} e^{-4 y^{1/4}} / 2.
        let b = [0.0, 0.25, 0.5, 0.75];
        let cfg = PrecisionConfig::default();
        for y in [1e-3, 0.1, 1.0, 7.0, 300.0] {
            let g = meijer_g_4040(b, y, &cfg).unwrap();
            let exact = (2.0 * PI).powf(1.5) * 0.5 * (-4.0 * y.powf(0.25)).exp();
            assert_relative_eq!(g.value, exact, max_relative = 1e-12);
            assert!(g.abs_err <= 1e-11 * exact);
        }
    }

    #[test]
    fn fixed_abscissa_left_of_pole_is_a_contour_error() {
        let cfg = PrecisionConfig {
            contour_abscissa: Some(-0.5),
            ..Default::default()
        };
        let r = meijer_g_4040([0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0], 1.0, &cfg);
        assert!(matches!(r, Err(Error::Contour { .. })));
    }

    #[test]
    fn rejects_nonpositive_argument() {
        let cfg = PrecisionConfig::default();
        assert!(meijer_g_4040([0.0; 4], 0.0, &cfg).is_err());
        assert!(meijer_g_4040([0.0; 4], -1.0, &cfg).is_err());
    }
}
