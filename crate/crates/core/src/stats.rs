//! Occupation statistics of `|z⟩`: `P_n`, moments, Mandel `Q` and `g²(0)`.
//!
//! Closed forms with `x = |z|²/λ'²`, `b = 2 − 1/λ'`, `P = |z|²/(2λ'−1)²`:
//!
//! ```text
//! ⟨n⟩  = P · 0F3(; 2, b+1, b+1; x) / N
//! ⟨n²⟩ = P · 0F3(; 1, b+1, b+1; x) / N
//! ```
//!
//! The difference `F₁ − F₂ = x/(2(b+1)²) · 0F3(; 3, b+2, b+2; x)` is summed as
//! its own series so `Q` and `g²` keep full precision at small `|z|`.
//! At `λ' = 0`: `⟨n⟩ = |z| I₁(2|z|)/I₀(2|z|)`, `⟨n²⟩ = |z|²`.
//! Direct sums run over the coefficients of a [`CoherentState`].

use num_complex::Complex64;
use serde::Serialize;

use crate::bgcs::{b_param, make_state, CoherentState, DEFAULT_TRUNCATION};
use crate::specfun::{bessel_i, hyper0f3, BesselOrder, PrecisionConfig};
use crate::{Error, Result};

pub fn distribution(state: &CoherentState) -> Vec<f64> {
    state.coeffs.iter().map(|c| c.norm_sqr()).collect()
}

/// A quantity from the closed form (when defined) and from direct summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dual {
    pub closed: Option<f64>,
    pub direct: f64,
}

impl Dual {
    pub fn rel_diff(&self) -> f64 {
        match self.closed {
            Some(c) if c == self.direct => 0.0,
            Some(c) => ((c - self.direct) / self.direct.abs().max(c.abs())).abs(),
            None => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: Dual,
    pub second_moment: Dual,
    pub variance: Dual,
    /// `⟨n(n−1)⟩`
    pub factorial_moment: Dual,
}

struct Closed {
    mean: f64,
    second: f64,
    factorial: f64,
}

fn closed_moments(z_abs: f64, lambda_prime: f64, cfg: &PrecisionConfig) -> Result<Option<Closed>> {
    if z_abs == 0.0 {
        return Ok(Some(Closed {
            mean: 0.0,
            second: 0.0,
            factorial: 0.0,
        }));
    }
    if lambda_prime == 0.0 {
        let i0 = bessel_i(BesselOrder::Zero, 2.0 * z_abs, cfg)?.value;
        let i1 = bessel_i(BesselOrder::One, 2.0 * z_abs, cfg)?.value;
        let mean = z_abs * i1 / i0;
        let second = z_abs * z_abs;
        return Ok(Some(Closed {
            mean,
            second,
            factorial: second - mean,
        }));
    }
    if (2.0 * lambda_prime - 1.0).abs() < 1e-12 {
        return Ok(None);
    }
    let b = b_param(lambda_prime);
    let x = z_abs * z_abs / (lambda_prime * lambda_prime);
    let p = (z_abs / (2.0 * lambda_prime - 1.0)).powi(2);
    let n = hyper0f3(1.0, b, b, x, cfg)?.value;
    let f1 = hyper0f3(1.0, b + 1.0, b + 1.0, x, cfg)?.value;
    let f2 = hyper0f3(2.0, b + 1.0, b + 1.0, x, cfg)?.value;
    let f3 = hyper0f3(3.0, b + 2.0, b + 2.0, x, cfg)?.value;
    let diff = x / (2.0 * (b + 1.0) * (b + 1.0)) * f3;
    Ok(Some(Closed {
        mean: p * f2 / n,
        second: p * f1 / n,
        factorial: p * diff / n,
    }))
}

fn direct_moments(state: &CoherentState) -> (f64, f64, f64) {
    let p = distribution(state);
    let total: f64 = p.iter().sum();
    let (mut m1, mut fm) = (0.0, 0.0);
    for (n, &pn) in p.iter().enumerate() {
        let nf = n as f64;
        m1 += nf * pn;
        fm += nf * (nf - 1.0) * pn;
    }
    let m1 = m1 / total;
    let fm = fm / total;
    (m1, fm + m1, fm)
}

fn state_for(z: Complex64, lambda_prime: f64, cfg: &PrecisionConfig) -> Result<CoherentState> {
    make_state(z, lambda_prime, DEFAULT_TRUNCATION, cfg)
}

pub fn moments_of(state: &CoherentState, cfg: &PrecisionConfig) -> Result<Moments> {
    let (m1, m2, fm) = direct_moments(state);
    let closed = closed_moments(state.z.norm(), state.lambda_prime, cfg)?;
    let var_direct = fm + m1 - m1 * m1;
    Ok(Moments {
        mean: Dual {
            closed: closed.as_ref().map(|c| c.mean),
            direct: m1,
        },
        second_moment: Dual {
            closed: closed.as_ref().map(|c| c.second),
            direct: m2,
        },
        variance: Dual {
            closed: closed
                .as_ref()
                .map(|c| c.factorial + c.mean - c.mean * c.mean),
            direct: var_direct,
        },
        factorial_moment: Dual {
            closed: closed.as_ref().map(|c| c.factorial),
            direct: fm,
        },
    })
}

/// `(⟨n⟩, ⟨n²⟩, (Δn)²)` by both methods. The closed form is absent at
/// `λ' = 1/2`.
pub fn moments(z: Complex64, lambda_prime: f64, cfg: &PrecisionConfig) -> Result<Moments> {
    moments_of(&state_for(z, lambda_prime, cfg)?, cfg)
}

/// `Q = ((Δn)² − ⟨n⟩)/⟨n⟩ = ⟨n(n−1)⟩/⟨n⟩ − ⟨n⟩`
fn q_of(mean: f64, factorial: f64) -> f64 {
    factorial / mean - mean
}

/// `g² = ⟨n(n−1)⟩/⟨n⟩²`
fn g2_of(mean: f64, factorial: f64) -> f64 {
    factorial / (mean * mean)
}

pub fn mandel_q(z: Complex64, lambda_prime: f64, cfg: &PrecisionConfig) -> Result<Dual> {
    if z.norm() == 0.0 {
        return Err(Error::VacuumUndefined);
    }
    let m = moments(z, lambda_prime, cfg)?;
    Ok(Dual {
        closed: m
            .mean
            .closed
            .zip(m.factorial_moment.closed)
            .map(|(a, f)| q_of(a, f)),
        direct: q_of(m.mean.direct, m.factorial_moment.direct),
    })
}

pub fn g2(z: Complex64, lambda_prime: f64, cfg: &PrecisionConfig) -> Result<Dual> {
    if z.norm() == 0.0 {
        return Err(Error::VacuumUndefined);
    }
    let m = moments(z, lambda_prime, cfg)?;
    Ok(Dual {
        closed: m
            .mean
            .closed
            .zip(m.factorial_moment.closed)
            .map(|(a, f)| g2_of(a, f)),
        direct: g2_of(m.mean.direct, m.factorial_moment.direct),
    })
}

/// `lim_{|z|→0} g² = (1−2λ')² / (2(1−3λ')²)`
pub fn g2_small_z_limit(lambda_prime: f64) -> f64 {
    let a = 1.0 - 2.0 * lambda_prime;
    let c = 1.0 - 3.0 * lambda_prime;
    a * a / (2.0 * c * c)
}

/// `e^{−μ} μⁿ / n!` for `n = 0..=n_max`.
pub fn poisson_reference(mean: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::invalid("mean", mean, "must be positive"));
    }
    let ln_mu = mean.ln();
    let mut ln_p = -mean;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(ln_p.exp());
    for n in 1..=n_max {
        ln_p += ln_mu - (n as f64).ln();
        out.push(ln_p.exp());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatSummary {
    pub lambda_prime: f64,
    pub z: [f64; 2],
    pub p_n: Vec<f64>,
    pub mean: Dual,
    pub second_moment: Dual,
    pub variance: Dual,
    pub mandel_q: Dual,
    pub g2: Dual,
    /// Largest relative disagreement between the two methods.
    pub cross_check_err: f64,
}

pub fn summarize(z: Complex64, lambda_prime: f64, cfg: &PrecisionConfig) -> Result<StatSummary> {
    if z.norm() == 0.0 {
        return Err(Error::VacuumUndefined);
    }
    let state = state_for(z, lambda_prime, cfg)?;
    let m = moments_of(&state, cfg)?;
    let pair = |f: fn(f64, f64) -> f64| Dual {
        closed: m
            .mean
            .closed
            .zip(m.factorial_moment.closed)
            .map(|(a, b)| f(a, b)),
        direct: f(m.mean.direct, m.factorial_moment.direct),
    };
    let q = pair(q_of);
    let g = pair(g2_of);
    let cross_check_err = [m.mean, m.second_moment, m.variance, q, g]
        .iter()
        .map(Dual::rel_diff)
        .fold(0.0, f64::max);
    Ok(StatSummary {
        lambda_prime,
        z: [z.re, z.im],
        p_n: distribution(&state),
        mean: m.mean,
        second_moment: m.second_moment,
        variance: m.variance,
        mandel_q: q,
        g2: g,
        cross_check_err,
    })
}
