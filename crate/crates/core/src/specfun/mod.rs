//! Real special functions with a-posteriori error control.
//!
//! Everything here is a pure function of its arguments. Series and quadratures
//! return an [`Estimate`] carrying an absolute error bound so callers can
//! propagate the worst bound upward.

mod bessel;
mod gamma;
mod hyper;
mod meijer;

pub use bessel::{bessel_i, BesselOrder};
pub use gamma::{
    digamma, gamma, gamma_mode, ln_gamma, ln_pochhammer, pochhammer, trigamma, GammaMode,
    GammaOutput, POLE_TOL,
};
pub use hyper::{hyper0f3, hyper0f3_complex};
pub use meijer::{meijer_g_4040, meijer_saddle_abscissa};

pub(crate) use gamma::ln_gamma_complex;

use crate::{Error, Result};

/// A computed value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T = f64> {
    pub value: T,
    pub abs_err: f64,
}

/// Convergence control shared by the series and contour-quadrature routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    /// Target relative accuracy, in `(0, 1e-3]`.
    pub rel_tol: f64,
    /// Hard cap on series terms, at least 32.
    pub max_terms: usize,
    /// Fixed Mellin-Barnes abscissa `Re s = c`. `None` places the contour at
    /// the real saddle point of the integrand, kept clear of the poles.
    pub contour_abscissa: Option<f64>,
    /// Initial half-height `T` of the truncated contour.
    pub contour_halfheight: f64,
    /// Initial (largest allowed) trapezoid step `h` along the contour.
    pub contour_step: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            rel_tol: 1e-14,
            max_terms: 20_000,
            contour_abscissa: None,
            contour_halfheight: 8.0,
            contour_step: 0.05,
        }
    }
}

impl PrecisionConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::invalid("rel_tol", self.rel_tol, "must lie in (0, 1e-3]"));
        }
        if self.max_terms < 32 {
            return Err(Error::invalid(
                "max_terms",
                self.max_terms as f64,
                "must be at least 32",
            ));
        }
        if !(self.contour_halfheight > 0.0 && self.contour_halfheight.is_finite()) {
            return Err(Error::invalid(
                "contour_halfheight",
                self.contour_halfheight,
                "must be positive",
            ));
        }
        if !(self.contour_step > 0.0 && self.contour_step.is_finite()) {
            return Err(Error::invalid("contour_step", self.contour_step, "must be positive"));
        }
        if let Some(c) = self.contour_abscissa {
            if !c.is_finite() {
                return Err(Error::invalid("contour_abscissa", c, "must be finite"));
            }
        }
        Ok(())
    }

    /// Checks a fixed abscissa against the poles `s = -b_i - k` of `∏ Γ(b_i + s)`.
    pub fn check_contour(&self, b: &[f64]) -> Result<()> {
        self.validate()?;
        if let Some(c) = self.contour_abscissa {
            let pole = rightmost_pole(b);
            if c <= pole {
                return Err(Error::Contour { abscissa: c, pole });
            }
        }
        Ok(())
    }
}

pub(crate) fn rightmost_pole(b: &[f64]) -> f64 {
    b.iter().map(|&bi| -bi).fold(f64::NEG_INFINITY, f64::max)
}
