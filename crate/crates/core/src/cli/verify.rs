//! Invariant suites behind `verify`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::figures::{sweep_grid, PAPER_LAMBDA_PRIMES};
use super::table::Table;
use super::RunConfig;
use crate::algebra::{build_eigenstate, build_realization, check_algebra, gen_factorial_closed, Mode};
use crate::bgcs::{
    eigen_residual, inner_product, make_state, moment_check, overlap, WeightDensity,
    DEFAULT_TRUNCATION,
};
use crate::model::{default_zeta_max, ground_state_grid, integrate_orbit, OscillatorParams};
use crate::stats::{g2, g2_small_z_limit, summarize};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Classical,
    Algebra,
    Coherent,
    Stats,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub status: Status,
}

impl Check {
    /// Passes when `measured ≤ bound`.
    pub fn le(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        let status = if measured <= bound {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            measured,
            bound,
            status,
        }
    }

    /// Passes when `measured < bound`.
    pub fn lt(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        let status = if measured < bound {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            measured,
            bound,
            status,
        }
    }

    pub fn info(name: impl Into<String>, measured: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound: f64::NAN,
            status: Status::Info,
        }
    }

    fn failed(name: impl Into<String>, err: &crate::Error) -> Self {
        Check {
            name: format!("{} [{err}]", name.into()),
            measured: f64::NAN,
            bound: f64::NAN,
            status: Status::Fail,
        }
    }
}

pub fn to_table(checks: &[Check]) -> Table {
    let mut t = Table::new(vec!["check", "measured", "bound", "status"]);
    for c in checks {
        t.push(vec![
            c.name.clone().into(),
            c.measured.into(),
            c.bound.into(),
            c.status.label().into(),
        ]);
    }
    t
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Vec<Check> {
    match suite {
        Suite::Classical => classical(cfg),
        Suite::Algebra => algebra(cfg),
        Suite::Coherent => coherent(cfg),
        Suite::Stats => stats(cfg),
        Suite::All => {
            let mut v = classical(cfg);
            v.extend(algebra(cfg));
            v.extend(coherent(cfg));
            v.extend(stats(cfg));
            v
        }
    }
}

/// Runs `f`, turning an error into a failing row.
fn guard(out: &mut Vec<Check>, name: &str, f: impl FnOnce(&mut Vec<Check>) -> Result<()>) {
    if let Err(e) = f(out) {
        out.push(Check::failed(name, &e));
    }
}

/// Relative frequency error of an RK4 orbit started at rest at `x = A`.
pub fn orbit_frequency_error(alpha: f64, lambda: f64, amplitude: f64) -> Result<(f64, f64)> {
    let p = OscillatorParams::new(alpha, lambda)?;
    let dt = 1e-4 * 2.0 * PI / alpha;
    let o = integrate_orbit(&p, amplitude, 0.0, dt, 50_000)?;
    let measured = o.measured_omega.unwrap_or(f64::NAN);
    let expected = p.omega(amplitude);
    Ok(((measured - expected).abs() / expected, o.energy_drift))
}

/// Ground-state residual at spacing `h` and the ratio to the residual at `h/2`.
pub fn ground_state_convergence(alpha: f64, lambda_tilde: f64, h: f64) -> Result<(f64, f64, f64)> {
    let p = OscillatorParams::new(alpha, lambda_tilde * alpha)?;
    let zeta_max = default_zeta_max(lambda_tilde);
    let n = (2.0 * zeta_max / h).round() as usize + 1;
    let coarse = ground_state_grid(&p, Some(zeta_max), n)?;
    let fine = ground_state_grid(&p, Some(zeta_max), 2 * n - 1)?;
    Ok((coarse.residual, coarse.residual / fine.residual, coarse.norm))
}

fn classical(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for lambda in [-0.55, -0.25, 0.25, 0.55] {
        for a in [0.5, 1.0] {
            let tag = format!("lambda={lambda} A={a}");
            guard(&mut out, &format!("classical/omega {tag}"), |out| {
                let (err, drift) = orbit_frequency_error(cfg.alpha, lambda, a)?;
                out.push(Check::le(format!("classical/omega_rel_err {tag}"), err, 1e-4));
                out.push(Check::le(format!("classical/energy_drift {tag}"), drift, 1e-8));
                Ok(())
            });
        }
    }
    for lt in [-0.25, 0.0, 0.25] {
        guard(&mut out, &format!("ground/lambda_tilde={lt}"), |out| {
            let (res, ratio, norm) = ground_state_convergence(cfg.alpha, lt, 1e-3)?;
            out.push(Check::le(format!("ground/residual lambda_tilde={lt}"), res, 1e-5));
            out.push(Check::le(
                format!("ground/order2_ratio_dev lambda_tilde={lt}"),
                (ratio / 4.0 - 1.0).abs(),
                0.2,
            ));
            out.push(Check::le(
                format!("ground/norm_dev lambda_tilde={lt}"),
                (norm - 1.0).abs(),
                1e-10,
            ));
            Ok(())
        });
    }
    out
}

const ALGEBRA_DIM: usize = 64;

fn algebra(cfg: &RunConfig) -> Vec<Check> {
    let list = cfg
        .lambda_prime
        .map(|l| vec![l])
        .unwrap_or_else(|| vec![-0.5, 0.0, 0.1, 0.39, 0.9, 1.5, 2.6]);
    let mut out = Vec::new();
    for lp in list {
        guard(&mut out, &format!("algebra lambda'={lp}"), |out| {
            let real = build_realization(lp, ALGEBRA_DIM, Mode::Formal)?;
            let rep = check_algebra(&real)?;
            let tag = format!("lambda'={lp}");
            out.push(Check::le(format!("algebra/casimir_dev {tag}"), rep.casimir_max_dev, 1e-12));
            out.push(Check::info(format!("algebra/casimir_dev_f64 {tag}"), rep.casimir_f64_max_dev));

            let mut fact_err = 0.0_f64;
            for n in 0..30.min(real.dim) {
                let stored = real.gen_factorial[n];
                let closed = gen_factorial_closed(lp, n);
                if stored != 0.0 {
                    fact_err = fact_err.max(((stored - closed) / stored).abs());
                }
            }
            out.push(Check::le(format!("algebra/gen_factorial_rel_err {tag}"), fact_err, 1e-12));

            let phys = build_realization(lp, ALGEBRA_DIM, Mode::Physical)?;
            let mut dev = 0.0_f64;
            for n in 0..phys.dim.min(11) {
                if n > 0 && phys.l_sq[n] <= 0.0 {
                    break;
                }
                dev = dev.max(build_eigenstate(&phys, n)?.deviation);
            }
            out.push(Check::le(format!("algebra/eigenstate_dev {tag}"), dev, 1e-12));

            let closure = rep.k_closure.iter().cloned().fold(0.0, f64::max);
            out.push(Check::info(format!("algebra/k_closure_max {tag}"), closure));
            out.push(Check::info(format!("algebra/k0_ladder_max {tag}"), rep.k0_ladder));
            if lp == 0.1 {
                out.push(Check::le(
                    format!("algebra/k_closure_n0_minus_0.36 {tag}"),
                    (rep.k_closure[0] - 0.36).abs(),
                    1e-12,
                ));
            }
            let opt = |v: Option<f64>| v.unwrap_or(f64::NAN);
            out.push(Check::info(format!("algebra/ladder_vs_rhat {tag}"), opt(rep.ladder_vs_rhat)));
            out.push(Check::info(format!("algebra/ladder_vs_scalar {tag}"), opt(rep.ladder_vs_scalar)));
            out.push(Check::info(format!("algebra/sign_realized {tag}"), opt(rep.sign_realized)));
            out.push(Check::info(format!("algebra/sign_literal {tag}"), opt(rep.sign_literal)));
            out.push(Check::info(format!("algebra/rep_lower_dev {tag}"), rep.rep_lower_dev));
            out.push(Check::info(format!("algebra/rep_upper_dev {tag}"), rep.rep_upper_dev));
            Ok(())
        });
    }
    out
}

/// `ℓ²` distance between normalized coefficient vectors and the relative
/// difference of `⟨n⟩`, `λ' = 1e-4` against the `λ' = 0` branch.
pub fn harmonic_limit_gap(z: Complex64, cfg: &RunConfig) -> Result<(f64, f64)> {
    let a = make_state(z, 1e-4, DEFAULT_TRUNCATION, &cfg.precision)?;
    let b = make_state(z, 0.0, DEFAULT_TRUNCATION, &cfg.precision)?;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut mean_a = 0.0;
    let mut mean_b = 0.0;
    for (n, (x, y)) in a.coeffs.iter().zip(&b.coeffs).enumerate() {
        num += (x - y).norm_sqr();
        den += y.norm_sqr();
        mean_a += n as f64 * x.norm_sqr();
        mean_b += n as f64 * y.norm_sqr();
    }
    Ok(((num / den).sqrt(), ((mean_a - mean_b) / mean_b).abs()))
}

fn coherent(cfg: &RunConfig) -> Vec<Check> {
    let custom = cfg.lambda_prime.is_some() || cfg.z.is_some();
    let lps = cfg
        .lambda_prime
        .map(|l| vec![l])
        .unwrap_or_else(|| vec![-0.5, 0.9, 1.5, 2.6]);
    let zs = cfg.z.map(|z| vec![z]).unwrap_or_else(|| {
        vec![
            Complex64::new(0.25, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(3.0, 1.0),
        ]
    });
    let mut out = Vec::new();
    for &lp in &lps {
        for &z in &zs {
            let tag = format!("lambda'={lp} z={}{:+}i", z.re, z.im);
            guard(&mut out, &format!("coherent {tag}"), |out| {
                let s = make_state(z, lp, cfg.trunc, &cfg.precision)?;
                let real = build_realization(lp, s.truncation, Mode::Formal)?;
                let res = eigen_residual(&s, &real)?;
                out.push(Check::le(
                    format!("coherent/eigen_residual {tag}"),
                    res,
                    (10.0 * s.tail_bound).max(1e-10),
                ));
                out.push(Check::le(
                    format!("coherent/norm_duality {tag}"),
                    ((s.direct_norm - s.norm_factor) / s.norm_factor).abs(),
                    1e-10,
                ));
                out.push(Check::info(format!("coherent/tail_bound {tag}"), s.tail_bound));
                let zp = z + Complex64::new(0.5, -0.25);
                let other = make_state(zp, lp, cfg.trunc, &cfg.precision)?;
                let closed = overlap(z, zp, lp, &cfg.precision)?;
                let direct = inner_product(&s, &other);
                out.push(Check::le(
                    format!("coherent/overlap_vs_inner {tag}"),
                    (closed - direct).norm(),
                    1e-10,
                ));
                Ok(())
            });
        }
    }

    let moment_lps: Vec<f64> = if custom {
        lps.iter().cloned().filter(|&l| l != 0.0 && 2.0 - 1.0 / l > 0.0).collect()
    } else {
        vec![0.9, 1.5, 2.6]
    };
    for lp in moment_lps {
        guard(&mut out, &format!("coherent/moments lambda'={lp}"), |out| {
            let rows = moment_check(lp, 5, &cfg.precision)?;
            let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
            out.push(Check::le(format!("coherent/moment_rel_err n<=5 lambda'={lp}"), worst, 1e-5));
            Ok(())
        });
    }

    if !custom {
        guard(&mut out, "coherent/weight_positive lambda'=1.5", |out| {
            let wd = WeightDensity::new(1.5, cfg.precision)?;
            let mut lowest = f64::INFINITY;
            for xi in [0.1, 1.0, 5.0, 20.0] {
                lowest = lowest.min(wd.w_tilde(xi)?);
            }
            out.push(Check::lt("coherent/weight_min_negated lambda'=1.5", -lowest, 0.0));
            Ok(())
        });
        for r in [0.5, 1.0, 2.0, 3.0] {
            let z = Complex64::from_polar(r, 0.7);
            guard(&mut out, &format!("coherent/harmonic_limit |z|={r}"), |out| {
                let (l2, mean) = harmonic_limit_gap(z, cfg)?;
                out.push(Check::le(format!("coherent/harmonic_limit_coeffs |z|={r}"), l2, 1e-3));
                out.push(Check::le(format!("coherent/harmonic_limit_mean |z|={r}"), mean, 1e-3));
                Ok(())
            });
        }
    }
    out
}

fn stats(cfg: &RunConfig) -> Vec<Check> {
    let lps = cfg
        .lambda_prime
        .map(|l| vec![l])
        .unwrap_or_else(|| vec![-0.5, 0.39, 0.9, 1.5, 2.6]);
    let zs = cfg.z.map(|z| vec![z]).unwrap_or_else(|| {
        [0.25, 1.0, 2.0, 5.0]
            .iter()
            .map(|&r| Complex64::new(r, 0.0))
            .collect()
    });
    let mut out = Vec::new();
    for &lp in &lps {
        for &z in &zs {
            let tag = format!("lambda'={lp} |z|={}", z.norm());
            guard(&mut out, &format!("stats {tag}"), |out| {
                let s = summarize(z, lp, &cfg.precision)?;
                out.push(Check::le(format!("stats/cross_check {tag}"), s.cross_check_err, 1e-9));
                let total: f64 = s.p_n.iter().sum();
                out.push(Check::le(format!("stats/sum_p_dev {tag}"), (total - 1.0).abs(), 1e-12));
                let m = s.mean.direct;
                out.push(Check::le(
                    format!("stats/g2_vs_q {tag}"),
                    (s.g2.direct - (s.mandel_q.direct / m + 1.0)).abs(),
                    1e-10,
                ));
                Ok(())
            });
        }
    }

    for &lp in lps.iter().filter(|l| PAPER_LAMBDA_PRIMES.contains(l)) {
        guard(&mut out, &format!("stats/signs lambda'={lp}"), |out| {
            let (mut q_max, mut g_max, mut fano_max) =
                (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
            for r in sweep_grid() {
                let s = summarize(Complex64::new(r, 0.0), lp, &cfg.precision)?;
                q_max = q_max.max(s.mandel_q.direct);
                g_max = g_max.max(s.g2.direct);
                fano_max = fano_max.max(s.variance.direct / s.mean.direct);
            }
            let tag = format!("lambda'={lp} |z|<=5");
            out.push(Check::lt(format!("stats/q_max {tag}"), q_max, 0.0));
            out.push(Check::lt(format!("stats/g2_max {tag}"), g_max, 1.0));
            out.push(Check::lt(format!("stats/fano_max {tag}"), fano_max, 1.0));
            let small = g2(Complex64::new(1e-3, 0.0), lp, &cfg.precision)?;
            out.push(Check::le(
                format!("stats/g2_small_z_limit_dev lambda'={lp} |z|=1e-3"),
                (small.direct - g2_small_z_limit(lp)).abs(),
                1e-6,
            ));
            Ok(())
        });
    }
    out
}
