//! One test per acceptance criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line (run with `--nocapture` to see them).

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use pdm_bgcs::algebra::{build_realization, check_algebra, Mode};
use pdm_bgcs::bgcs::{eigen_residual, make_state, moment_check, DEFAULT_TRUNCATION};
use pdm_bgcs::cli::figures::{sweep_grid, PAPER_LAMBDA_PRIMES};
use pdm_bgcs::cli::verify::{ground_state_convergence, harmonic_limit_gap, orbit_frequency_error};
use pdm_bgcs::cli::RunConfig;
use pdm_bgcs::specfun::PrecisionConfig;
use pdm_bgcs::stats::{g2, g2_small_z_limit, summarize};

const OMEGA_TOL: f64 = 1e-4;
const CLASSICAL_BUDGET: Duration = Duration::from_secs(5);
const GROUND_RESIDUAL_TOL: f64 = 1e-5;
const GROUND_RATIO_TOL: f64 = 0.2;
const CASIMIR_TOL: f64 = 1e-12;
const CLOSURE_TOL: f64 = 1e-12;
const FORMAL_DEVIATION: f64 = 0.36;
const EIGEN_TOL: f64 = 1e-10;
const STATE_BUDGET: Duration = Duration::from_secs(1);
const NORM_TOL: f64 = 1e-10;
const MOMENT_TOL: f64 = 1e-5;
const MOMENT_BUDGET: Duration = Duration::from_secs(60);
const DUALITY_TOL: f64 = 1e-9;
const SMALL_Z_TOL: f64 = 1e-6;
const HARMONIC_TOL: f64 = 1e-3;

const COHERENT_LAMBDAS: [f64; 4] = [-0.5, 0.9, 1.5, 2.6];

fn coherent_labels() -> [Complex64; 4] {
    [
        Complex64::new(0.25, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(3.0, 1.0),
    ]
}

fn report(k: u32, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {k}: {tag} {detail}");
    assert!(pass, "criterion {k} failed: {detail}");
}

#[test]
fn criterion_01_classical_frequency() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for lambda in [-0.55, -0.25, 0.25, 0.55] {
        for a in [0.5, 1.0] {
            let (err, _) = orbit_frequency_error(1.0, lambda, a).unwrap();
            worst = worst.max(err);
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        worst <= OMEGA_TOL && elapsed < CLASSICAL_BUDGET,
        format!("max rel omega err {worst:.3e} (tol {OMEGA_TOL:e}), {elapsed:.2?} (budget 5s)"),
    );
}

#[test]
fn criterion_02_ground_state() {
    let mut worst_res = 0.0_f64;
    let mut worst_ratio = 0.0_f64;
    for lt in [-0.25, 0.0, 0.25] {
        let (res, ratio, _) = ground_state_convergence(1.0, lt, 1e-3).unwrap();
        worst_res = worst_res.max(res);
        worst_ratio = worst_ratio.max((ratio / 4.0 - 1.0).abs());
    }
    report(
        2,
        worst_res <= GROUND_RESIDUAL_TOL && worst_ratio <= GROUND_RATIO_TOL,
        format!(
            "max residual {worst_res:.3e} (tol {GROUND_RESIDUAL_TOL:e}), max |ratio/4-1| {worst_ratio:.3e} (tol {GROUND_RATIO_TOL})"
        ),
    );
}

#[test]
fn criterion_03_casimir() {
    let mut worst = 0.0_f64;
    for lp in [-0.5, 0.39, 0.9, 1.5, 2.6] {
        let r = build_realization(lp, 200, Mode::Formal).unwrap();
        worst = worst.max(check_algebra(&r).unwrap().casimir_max_dev);
    }
    report(
        3,
        worst <= CASIMIR_TOL,
        format!("max |C - 1/4| {worst:.3e} (tol {CASIMIR_TOL:e})"),
    );
}

#[test]
fn criterion_04_harmonic_algebra() {
    let r = build_realization(0.0, 64, Mode::Formal).unwrap();
    let rep = check_algebra(&r).unwrap();
    let ladder = rep.ladder_vs_scalar.unwrap();
    let closure = rep.k_closure.iter().cloned().fold(0.0, f64::max);
    let r1 = build_realization(0.1, 12, Mode::Formal).unwrap();
    let dev = (check_algebra(&r1).unwrap().k_closure[0] - FORMAL_DEVIATION).abs();
    report(
        4,
        ladder <= CLOSURE_TOL && closure <= CLOSURE_TOL && dev <= CLOSURE_TOL,
        format!(
            "lambda'=0: [L-,L+]-1 {ladder:.3e}, [K-,K+]-2K0 {closure:.3e}; lambda'=0.1 n=0 |res-0.36| {dev:.3e} (tol {CLOSURE_TOL:e})"
        ),
    );
}

#[test]
fn criterion_05_eigenproperty() {
    let cfg = PrecisionConfig::default();
    let mut worst = 0.0_f64;
    let mut slowest = Duration::ZERO;
    for lp in COHERENT_LAMBDAS {
        for z in coherent_labels() {
            let start = Instant::now();
            let s = make_state(z, lp, DEFAULT_TRUNCATION, &cfg).unwrap();
            let real = build_realization(lp, s.truncation, Mode::Formal).unwrap();
            let res = eigen_residual(&s, &real).unwrap();
            slowest = slowest.max(start.elapsed());
            worst = worst.max(res);
        }
    }
    report(
        5,
        worst <= EIGEN_TOL && slowest < STATE_BUDGET,
        format!("max residual {worst:.3e} (tol {EIGEN_TOL:e}), slowest state {slowest:.2?} (budget 1s)"),
    );
}

#[test]
fn criterion_06_normalization_duality() {
    let cfg = PrecisionConfig::default();
    let mut worst = 0.0_f64;
    for lp in COHERENT_LAMBDAS {
        for z in coherent_labels() {
            let s = make_state(z, lp, DEFAULT_TRUNCATION, &cfg).unwrap();
            worst = worst.max(((s.direct_norm - s.norm_factor) / s.norm_factor).abs());
        }
    }
    report(
        6,
        worst <= NORM_TOL,
        format!("max rel |sum - 0F3| {worst:.3e} (tol {NORM_TOL:e})"),
    );
}

#[test]
fn criterion_07_moments() {
    let cfg = PrecisionConfig::default();
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for lp in [0.9, 1.5, 2.6] {
        for row in moment_check(lp, 5, &cfg).unwrap() {
            worst = worst.max(row.rel_err);
        }
    }
    let elapsed = start.elapsed();
    report(
        7,
        worst <= MOMENT_TOL && elapsed < MOMENT_BUDGET,
        format!("max rel err n<=5 {worst:.3e} (tol {MOMENT_TOL:e}), {elapsed:.2?} (budget 60s)"),
    );
}

#[test]
fn criterion_08_statistics_duality() {
    let cfg = PrecisionConfig::default();
    let mut worst = 0.0_f64;
    for lp in [-0.5, 0.39, 0.9, 1.5, 2.6] {
        for r in [0.25, 1.0, 2.0, 5.0] {
            let s = summarize(Complex64::new(r, 0.0), lp, &cfg).unwrap();
            worst = worst.max(s.cross_check_err);
        }
    }
    report(
        8,
        worst <= DUALITY_TOL,
        format!("max closed/direct rel diff {worst:.3e} (tol {DUALITY_TOL:e})"),
    );
}

#[test]
fn criterion_09_signs_and_small_z_limit() {
    let cfg = PrecisionConfig::default();
    let (mut q_max, mut g_max, mut fano_max) = (f64::MIN, f64::MIN, f64::MIN);
    let mut limit_dev = Vec::new();
    for lp in PAPER_LAMBDA_PRIMES {
        for r in sweep_grid() {
            let s = summarize(Complex64::new(r, 0.0), lp, &cfg).unwrap();
            q_max = q_max.max(s.mandel_q.direct);
            g_max = g_max.max(s.g2.direct);
            fano_max = fano_max.max(s.variance.direct / s.mean.direct);
        }
        let g = g2(Complex64::new(1e-3, 0.0), lp, &cfg).unwrap().direct;
        limit_dev.push((lp, (g - g2_small_z_limit(lp)).abs()));
    }
    let worst_limit = limit_dev.iter().map(|d| d.1).fold(0.0, f64::max);
    let per_lambda: Vec<String> = limit_dev
        .iter()
        .map(|(lp, d)| format!("{lp}:{d:.2e}"))
        .collect();
    report(
        9,
        q_max < 0.0 && g_max < 1.0 && fano_max < 1.0 && worst_limit <= SMALL_Z_TOL,
        format!(
            "max Q {q_max:.3e}, max g2 {g_max:.4}, max Fano {fano_max:.4}; small-|z| g2 limit dev [{}] (tol {SMALL_Z_TOL:e})",
            per_lambda.join(" ")
        ),
    );
}

#[test]
fn criterion_10_harmonic_continuity() {
    let cfg = RunConfig::default();
    let mut worst_coeff = 0.0_f64;
    let mut worst_mean = 0.0_f64;
    for r in [0.5, 1.0, 2.0, 3.0] {
        let (l2, mean) = harmonic_limit_gap(Complex64::from_polar(r, 0.7), &cfg).unwrap();
        worst_coeff = worst_coeff.max(l2);
        worst_mean = worst_mean.max(mean);
    }
    report(
        10,
        worst_coeff <= HARMONIC_TOL && worst_mean <= HARMONIC_TOL,
        format!(
            "lambda'=1e-4 vs 0: coeff l2 rel {worst_coeff:.3e}, mean rel {worst_mean:.3e} (tol {HARMONIC_TOL:e})"
        ),
    );
}

#[test]
fn criterion_11_determinism() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        for fig in ["fig1", "fig2", "fig3", "fig4"] {
            let ok = Command::new(env!("CARGO_BIN_EXE_pdm-bgcs"))
                .args(["figures", fig, "--out", d.path().to_str().unwrap()])
                .status()
                .unwrap()
                .success();
            assert!(ok, "{fig} failed");
        }
    }
    let mut identical = 0;
    for fig in ["fig1", "fig2", "fig3", "fig4"] {
        let name = format!("{fig}.csv");
        let a = fs::read(dirs[0].path().join(&name)).unwrap();
        let b = fs::read(dirs[1].path().join(&name)).unwrap();
        if a == b {
            identical += 1;
        }
    }
    report(
        11,
        identical == 4,
        format!("{identical}/4 figure files byte-identical across two runs"),
    );
}
