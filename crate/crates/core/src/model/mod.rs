//! Classical and grid-level quantum oscillator with mass `m(x) = 1/(1 + λx²)`.
//!
//! ```text
//! V(x) = α²x² / (2(1 + λx²))
//! H    = ẋ² / (2(1 + λx²)) + V(x)
//! ẍ    = (λxẋ² − α²x) / (1 + λx²)
//! ```
//!
//! For `λ < 0` the mass is singular at `|x| = 1/√|λ|` and everything is
//! restricted to the open interval inside.

use std::f64::consts::PI;

use serde::Serialize;

use crate::{Error, Result};

/// Energy drift above which an orbit is rejected.
pub const MAX_ENERGY_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorParams {
    pub alpha: f64,
    pub lambda: f64,
    /// `λ̃ = λ/α`
    pub lambda_tilde: f64,
    /// `λ' = λ̃/2`
    pub lambda_prime: f64,
    /// `1/√|λ|` for `λ < 0`, infinite otherwise.
    pub domain_halfwidth: f64,
}

impl OscillatorParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid("alpha", alpha, "must be positive and finite"));
        }
        if !lambda.is_finite() {
            return Err(Error::invalid("lambda", lambda, "must be finite"));
        }
        let domain_halfwidth = if lambda < 0.0 {
            1.0 / (-lambda).sqrt()
        } else {
            f64::INFINITY
        };
        Ok(OscillatorParams {
            alpha,
            lambda,
            lambda_tilde: lambda / alpha,
            lambda_prime: lambda / (2.0 * alpha),
            domain_halfwidth,
        })
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if x.is_nan() || x.abs() >= self.domain_halfwidth {
            return Err(Error::Domain {
                x,
                halfwidth: self.domain_halfwidth,
            });
        }
        Ok(())
    }

    fn inv_mass(&self, x: f64) -> f64 {
        1.0 + self.lambda * x * x
    }

    /// Classical energy `ẋ²/(2(1+λx²)) + V(x)`.
    pub fn energy(&self, x: f64, v: f64) -> f64 {
        let d = self.inv_mass(x);
        0.5 * (v * v + self.alpha * self.alpha * x * x) / d
    }

    /// Quasi-harmonic frequency `α/√(1 + λA²)`.
    pub fn omega(&self, amplitude: f64) -> f64 {
        self.alpha / (1.0 + self.lambda * amplitude * amplitude).sqrt()
    }

    fn acceleration(&self, x: f64, v: f64) -> f64 {
        (self.lambda * x * v * v - self.alpha * self.alpha * x) / self.inv_mass(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPoint {
    pub mass: f64,
    pub potential: f64,
}

pub fn evaluate_model(params: &OscillatorParams, x: f64) -> Result<ModelPoint> {
    params.check_domain(x)?;
    let d = params.inv_mass(x);
    Ok(ModelPoint {
        mass: 1.0 / d,
        potential: 0.5 * params.alpha * params.alpha * x * x / d,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalOrbit {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    /// Turning point `A` from `V(A) = H`.
    pub amplitude: f64,
    /// `φ` in `x(t) = A sin(ωt + φ)`, using the analytic `ω(A)`.
    pub phase: f64,
    /// `2π / ⟨Δt⟩` over successive upward zero crossings; `None` with fewer
    /// than two crossings.
    pub measured_omega: Option<f64>,
    /// `max |H(t) − H(0)| / |H(0)|` (absolute when `H(0) = 0`).
    pub energy_drift: f64,
}

/// Fixed-step RK4 for `ẍ = (λxẋ² − α²x)/(1 + λx²)`.
pub fn integrate_orbit(
    params: &OscillatorParams,
    x0: f64,
    v0: f64,
    dt: f64,
    n_steps: usize,
) -> Result<ClassicalOrbit> {
    params.check_domain(x0)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", dt, "must be positive"));
    }
    if !v0.is_finite() {
        return Err(Error::invalid("v0", v0, "must be finite"));
    }
    let h0 = params.energy(x0, v0);
    let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut positions = Vec::with_capacity(n_steps + 1);
    let mut velocities = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    positions.push(x0);
    velocities.push(v0);

    let f = |x: f64, v: f64| (v, params.acceleration(x, v));
    let (mut x, mut v) = (x0, v0);
    let mut drift = 0.0_f64;
    for step in 1..=n_steps {
        let (k1x, k1v) = f(x, v);
        let (k2x, k2v) = f(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v);
        let (k3x, k3v) = f(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v);
        let (k4x, k4v) = f(x + dt * k3x, v + dt * k3v);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        let t = step as f64 * dt;
        if !(x.abs() < params.domain_halfwidth) || !x.is_finite() || !v.is_finite() {
            return Err(Error::DomainEscape { t, x });
        }
        drift = drift.max((params.energy(x, v) - h0).abs() / scale);
        times.push(t);
        positions.push(x);
        velocities.push(v);
    }
    if drift > MAX_ENERGY_DRIFT {
        return Err(Error::StepTooLarge { drift });
    }

    let crossings: Vec<f64> = positions
        .windows(2)
        .zip(&times)
        .filter(|(w, _)| w[0] < 0.0 && w[1] >= 0.0)
        .map(|(w, &t)| t + dt * (-w[0]) / (w[1] - w[0]))
        .collect();
    let measured_omega = (crossings.len() >= 2).then(|| {
        let mean_period =
            (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
        2.0 * PI / mean_period
    });

    let a2 = 2.0 * h0 / (params.alpha * params.alpha - 2.0 * params.lambda * h0);
    let amplitude = a2.max(0.0).sqrt();
    let phase = (x0).atan2(v0 / params.omega(amplitude));

    Ok(ClassicalOrbit {
        times,
        positions,
        velocities,
        amplitude,
        phase,
        measured_omega,
        energy_drift: drift,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridWavefunction {
    pub zeta_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Trapezoidal `∫ψ² dζ` of the normalized values.
    pub norm: f64,
    /// `α/2` by construction.
    pub ground_energy: f64,
    /// `‖Ĥψ − (α/2)ψ‖ / ‖ψ‖` over interior nodes.
    pub residual: f64,
}

/// `ζ_max = 10` for `λ̃ ≥ 0`, `0.999/√|λ̃|` otherwise.
pub fn default_zeta_max(lambda_tilde: f64) -> f64 {
    if lambda_tilde < 0.0 {
        0.999 / (-lambda_tilde).sqrt()
    } else {
        10.0
    }
}

/// Unnormalized `(1 + λ̃ζ²)^{−1/(2λ̃)}`, continuous through `λ̃ = 0`.
pub fn ground_state_unnormalized(lambda_tilde: f64, zeta: f64) -> f64 {
    let u = lambda_tilde * zeta * zeta;
    if u == 0.0 {
        return (-0.5 * zeta * zeta).exp();
    }
    (-0.5 * zeta * zeta * u.ln_1p() / u).exp()
}

/// Applies `(α/2)[−(1+λ̃ζ²)ψ'' − 2λ̃ζψ' + ζ²ψ/(1+λ̃ζ²)]` by central differences
/// on a uniform grid. The two end nodes are left at zero.
pub fn apply_hamiltonian(params: &OscillatorParams, zeta: &[f64], psi: &[f64]) -> Vec<f64> {
    let n = zeta.len();
    let mut out = vec![0.0; n];
    if n < 3 {
        return out;
    }
    let h = (zeta[n - 1] - zeta[0]) / (n - 1) as f64;
    let lt = params.lambda_tilde;
    for i in 1..n - 1 {
        let z = zeta[i];
        let d = 1.0 + lt * z * z;
        let d2 = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (h * h);
        let d1 = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
        out[i] = 0.5 * params.alpha * (-d * d2 - 2.0 * lt * z * d1 + z * z * psi[i] / d);
    }
    out
}

pub fn ground_state_grid(
    params: &OscillatorParams,
    zeta_max: Option<f64>,
    n_points: usize,
) -> Result<GridWavefunction> {
    let lt = params.lambda_tilde;
    if lt >= 1.0 {
        return Err(Error::NotNormalizable { lambda_tilde: lt });
    }
    if n_points < 1001 {
        return Err(Error::invalid("n_points", n_points as f64, "must be at least 1001"));
    }
    let zeta_max = zeta_max.unwrap_or_else(|| default_zeta_max(lt));
    if !(zeta_max > 0.0 && zeta_max.is_finite()) {
        return Err(Error::invalid("zeta_max", zeta_max, "must be positive"));
    }
    if lt < 0.0 && zeta_max >= 1.0 / (-lt).sqrt() {
        return Err(Error::Domain {
            x: zeta_max,
            halfwidth: 1.0 / (-lt).sqrt(),
        });
    }

    let h = 2.0 * zeta_max / (n_points - 1) as f64;
    // mirror the positive half so the grid and ψ are exactly symmetric
    let zeta_grid: Vec<f64> = (0..n_points)
        .map(|i| {
            let from_top = (n_points - 1 - i.max(n_points - 1 - i)) as f64;
            let z = zeta_max - from_top * h;
            if 2 * i < n_points - 1 {
                -z
            } else if 2 * i == n_points - 1 {
                0.0
            } else {
                z
            }
        })
        .collect();
    let mut values: Vec<f64> = zeta_grid
        .iter()
        .map(|&z| ground_state_unnormalized(lt, z.abs()))
        .collect();

    let norm_sq = trapezoid(&values.iter().map(|v| v * v).collect::<Vec<_>>(), h);
    let c = 1.0 / norm_sq.sqrt();
    values.iter_mut().for_each(|v| *v *= c);
    let norm = trapezoid(&values.iter().map(|v| v * v).collect::<Vec<_>>(), h);

    let h_psi = apply_hamiltonian(params, &zeta_grid, &values);
    let e0 = 0.5 * params.alpha;
    let inner = 1..n_points - 1;
    let num: f64 = inner
        .clone()
        .map(|i| (h_psi[i] - e0 * values[i]).powi(2))
        .sum();
    let den: f64 = inner.map(|i| values[i] * values[i]).sum();

    Ok(GridWavefunction {
        zeta_grid,
        values,
        norm,
        ground_energy: e0,
        residual: (num / den).sqrt(),
    })
}

fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[n - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_point() {
        let p = OscillatorParams::new(1.0, 0.0).unwrap();
        let m = evaluate_model(&p, 2.0).unwrap();
        assert_eq!(m.mass, 1.0);
        assert_eq!(m.potential, 2.0);
    }

    #[test]
    fn derived_parameters() {
        let p = OscillatorParams::new(2.0, 0.6).unwrap();
        assert_eq!(p.lambda_tilde, 0.3);
        assert_eq!(p.lambda_prime, 0.6 / 4.0);
        assert!(p.domain_halfwidth.is_infinite());
        let q = OscillatorParams::new(1.0, -0.25).unwrap();
        assert_eq!(q.domain_halfwidth, 2.0);
        assert!(OscillatorParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn potential_saturates_and_walls() {
        let p = OscillatorParams::new(1.0, 0.25).unwrap();
        let far = evaluate_model(&p, 1e4).unwrap().potential;
        assert_relative_eq!(far, 2.0, max_relative = 1e-7);
        let q = OscillatorParams::new(1.0, -0.25).unwrap();
        assert!(evaluate_model(&q, 2.0 - 1e-9).unwrap().potential > 1e8);
        assert!(matches!(evaluate_model(&q, 2.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn harmonic_orbit_frequency() {
        let p = OscillatorParams::new(1.0, 0.0).unwrap();
        let dt = 1e-4 * 2.0 * PI;
        let o = integrate_orbit(&p, 1.0, 0.0, dt, 40_000).unwrap();
        assert!((o.measured_omega.unwrap() - 1.0).abs() < 1e-6);
        assert!(o.energy_drift < 1e-8);
        assert_relative_eq!(o.amplitude, 1.0, max_relative = 1e-14);
        assert_relative_eq!(o.phase, PI / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let p = OscillatorParams::new(1.0, 0.55).unwrap();
        let r = integrate_orbit(&p, 2.0, 0.0, 0.9, 200);
        assert!(matches!(r, Err(Error::StepTooLarge { .. } | Error::DomainEscape { .. })));
    }

    #[test]
    fn ground_state_is_even_and_nodeless() {
        let p = OscillatorParams::new(1.0, 0.5).unwrap();
        let g = ground_state_grid(&p, None, 4001).unwrap();
        let n = g.values.len();
        for i in 0..n {
            assert_eq!(g.values[i], g.values[n - 1 - i]);
            assert_eq!(g.zeta_grid[i], -g.zeta_grid[n - 1 - i]);
            assert!(g.values[i] > 0.0);
        }
        assert!((g.norm - 1.0).abs() < 1e-10);
        assert_eq!(g.ground_energy, 0.5);
    }

    #[test]
    fn not_normalizable_and_wall() {
        let p = OscillatorParams::new(1.0, 1.0).unwrap();
        assert!(matches!(
            ground_state_grid(&p, None, 2001),
            Err(Error::NotNormalizable { .. })
        ));
        let q = OscillatorParams::new(1.0, -0.25).unwrap();
        assert!(ground_state_grid(&q, Some(2.0), 2001).is_err());
        assert!(ground_state_grid(&q, None, 2001).is_ok());
    }
}
