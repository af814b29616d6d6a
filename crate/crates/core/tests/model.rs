use approx::assert_relative_eq;
use proptest::prelude::*;

use pdm_bgcs::model::{
    evaluate_model, ground_state_grid, ground_state_unnormalized, integrate_orbit,
    OscillatorParams,
};
use pdm_bgcs::Error;

/// RK4 for the first-order condition `Aψ₀ = 0`, i.e. `ψ' = −ζψ/(1+λ̃ζ²)`, `ψ(0) = 1`.
fn first_order_oracle(lt: f64, zeta: f64, steps: usize) -> f64 {
    let f = |z: f64, psi: f64| -z * psi / (1.0 + lt * z * z);
    let h = zeta / steps as f64;
    let mut psi = 1.0;
    for k in 0..steps {
        let z = k as f64 * h;
        let k1 = f(z, psi);
        let k2 = f(z + 0.5 * h, psi + 0.5 * h * k1);
        let k3 = f(z + 0.5 * h, psi + 0.5 * h * k2);
        let k4 = f(z + h, psi + h * k3);
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    psi
}

#[test]
fn ground_state_solves_first_order_equation() {
    for lt in [-0.25, 0.0, 0.25, 0.5, 0.9] {
        for zeta in [0.3, 1.0, 1.9] {
            let oracle = first_order_oracle(lt, zeta, 4000);
            assert_relative_eq!(
                ground_state_unnormalized(lt, zeta),
                oracle,
                max_relative = 1e-9
            );
        }
    }
}

#[test]
fn ground_state_grid_residuals() {
    let harmonic = OscillatorParams::new(1.0, 0.0).unwrap();
    let g = ground_state_grid(&harmonic, None, 20_001).unwrap();
    assert!(g.residual <= 1e-6, "{}", g.residual);
    assert_eq!(g.ground_energy, 0.5);

    let p = OscillatorParams::new(2.0, 1.0).unwrap();
    let g = ground_state_grid(&p, None, 20_001).unwrap();
    assert!(g.residual <= 1e-5, "{}", g.residual);
    assert_eq!(g.ground_energy, 1.0);
    assert_relative_eq!(g.norm, 1.0, max_relative = 1e-12);
}

#[test]
fn ground_state_is_even() {
    let p = OscillatorParams::new(1.0, -0.25).unwrap();
    let g = ground_state_grid(&p, None, 4001).unwrap();
    let n = g.values.len();
    for i in 0..n {
        assert_eq!(g.values[i], g.values[n - 1 - i]);
        assert_eq!(g.zeta_grid[i], -g.zeta_grid[n - 1 - i]);
    }
}

#[test]
fn ground_state_rejects_wide_mass() {
    let p = OscillatorParams::new(1.0, 1.0).unwrap();
    assert_eq!(
        ground_state_grid(&p, None, 2001),
        Err(Error::NotNormalizable { lambda_tilde: 1.0 })
    );
}

#[test]
fn potential_shapes() {
    let p = OscillatorParams::new(1.0, 0.25).unwrap();
    let mut last = 0.0;
    for k in 1..200 {
        let v = evaluate_model(&p, 0.5 * k as f64).unwrap().potential;
        assert!(v > last && v < 2.0);
        last = v;
    }
    assert!(2.0 - last < 1e-3);

    let q = OscillatorParams::new(1.0, -0.25).unwrap();
    let near = evaluate_model(&q, 2.0 - 1e-9).unwrap().potential;
    assert!(near > 1e8);
    assert!(matches!(evaluate_model(&q, 2.0), Err(Error::Domain { .. })));
}

#[test]
fn measured_frequencies() {
    let dt = 1e-4 * 2.0 * std::f64::consts::PI;
    let cases = [(0.0, 1.0, 1e-6), (-0.25, 1.0 / 0.75f64.sqrt(), 1e-4), (0.25, 1.0 / 1.25f64.sqrt(), 1e-4)];
    for (lambda, expected, tol) in cases {
        let p = OscillatorParams::new(1.0, lambda).unwrap();
        let o = integrate_orbit(&p, 1.0, 0.0, dt, 50_000).unwrap();
        let w = o.measured_omega.unwrap();
        assert_relative_eq!(w, expected, max_relative = tol);
    }
    let p = OscillatorParams::new(1.0, -0.25).unwrap();
    let o = integrate_orbit(&p, 1.0, 0.0, dt, 50_000).unwrap();
    assert!((o.measured_omega.unwrap() - 1.154700).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_conserved_and_frequency_follows_amplitude(
        lambda in -0.6f64..0.6,
        amplitude in 0.2f64..1.0,
        alpha in 0.5f64..2.0,
    ) {
        let p = OscillatorParams::new(alpha, lambda).unwrap();
        let dt = 2e-4 * 2.0 * std::f64::consts::PI / alpha;
        let o = integrate_orbit(&p, amplitude, 0.0, dt, 20_000).unwrap();
        prop_assert!(o.energy_drift < 1e-8);
        prop_assert!((o.amplitude - amplitude).abs() < 1e-10);
        let w = o.measured_omega.unwrap();
        let expected = alpha / (1.0 + lambda * amplitude * amplitude).sqrt();
        prop_assert!(((w - expected) / expected).abs() < 1e-4, "w={w} expected={expected}");
    }

    #[test]
    fn mass_and_potential_are_even(lambda in -0.9f64..0.9, x in 0.0f64..1.0) {
        let p = OscillatorParams::new(1.3, lambda).unwrap();
        let a = evaluate_model(&p, x).unwrap();
        let b = evaluate_model(&p, -x).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.mass > 0.0 && a.potential >= 0.0);
    }
}
