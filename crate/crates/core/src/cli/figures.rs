//! Data behind the four figures, in long format with a parameter column.

use num_complex::Complex64;

use super::table::Table;
use super::RunConfig;
use crate::bgcs::{make_state, DEFAULT_TRUNCATION};
use crate::model::{evaluate_model, OscillatorParams};
use crate::stats::{distribution, moments_of, poisson_reference, summarize};
use crate::Result;

pub const FIG1_LAMBDAS: [f64; 6] = [-0.85, -0.55, -0.25, 0.25, 0.55, 0.85];
pub const PAPER_LAMBDA_PRIMES: [f64; 4] = [0.39, 0.9, 1.5, 2.6];
/// `|z|` used for the distributions when none is configured.
pub const FIG2_DEFAULT_Z: f64 = 2.0;
const FIG1_X_MAX: f64 = 5.0;
const FIG1_STEPS: usize = 1000;
const SWEEP_STEP: f64 = 0.05;
const SWEEP_POINTS: usize = 100;
/// Distribution rows stop once both curves are below this.
const FIG2_CUTOFF: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }
}

/// `|z| = 0.05, 0.10, …, 5.00`
pub fn sweep_grid() -> Vec<f64> {
    (1..=SWEEP_POINTS).map(|k| k as f64 * SWEEP_STEP).collect()
}

pub fn figure_table(which: Figure, cfg: &RunConfig) -> Result<Table> {
    match which {
        Figure::Fig1 => fig1(cfg.alpha),
        Figure::Fig2 => fig2(cfg),
        Figure::Fig3 => fig3(cfg),
        Figure::Fig4 => fig4(cfg),
    }
}

fn fig1(alpha: f64) -> Result<Table> {
    let mut t = Table::new(vec!["lambda", "x", "V"]);
    for &lambda in &FIG1_LAMBDAS {
        let p = OscillatorParams::new(alpha, lambda)?;
        for k in 0..=FIG1_STEPS {
            let x = -FIG1_X_MAX + 2.0 * FIG1_X_MAX * k as f64 / FIG1_STEPS as f64;
            if x.abs() >= p.domain_halfwidth {
                continue;
            }
            let m = evaluate_model(&p, x)?;
            t.push(vec![lambda.into(), x.into(), m.potential.into()]);
        }
    }
    Ok(t)
}

fn fig2(cfg: &RunConfig) -> Result<Table> {
    let z = cfg.z.unwrap_or(Complex64::new(FIG2_DEFAULT_Z, 0.0));
    let mut t = Table::new(vec!["lambda_prime", "n", "P_n", "P_n_poisson"]);
    for &lp in &PAPER_LAMBDA_PRIMES {
        let state = make_state(z, lp, cfg.trunc, &cfg.precision)?;
        let p = distribution(&state);
        let mean = moments_of(&state, &cfg.precision)?.mean.direct;
        let poisson = poisson_reference(mean, p.len() - 1)?;
        let last = (0..p.len())
            .rev()
            .find(|&n| p[n] >= FIG2_CUTOFF || poisson[n] >= FIG2_CUTOFF)
            .unwrap_or(0)
            .max(10);
        for n in 0..=last {
            t.push(vec![lp.into(), n.into(), p[n].into(), poisson[n].into()]);
        }
    }
    Ok(t)
}

fn fig3(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(vec!["lambda_prime", "z_abs", "mean", "variance"]);
    for &lp in &PAPER_LAMBDA_PRIMES {
        for r in sweep_grid() {
            let state = make_state(Complex64::new(r, 0.0), lp, DEFAULT_TRUNCATION, &cfg.precision)?;
            let m = moments_of(&state, &cfg.precision)?;
            t.push(vec![
                lp.into(),
                r.into(),
                m.mean.direct.into(),
                m.variance.direct.into(),
            ]);
        }
    }
    Ok(t)
}

fn fig4(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(vec!["lambda_prime", "z_abs", "Q", "g2"]);
    for &lp in &PAPER_LAMBDA_PRIMES {
        for r in sweep_grid() {
            let s = summarize(Complex64::new(r, 0.0), lp, &cfg.precision)?;
            t.push(vec![
                lp.into(),
                r.into(),
                s.mandel_q.direct.into(),
                s.g2.direct.into(),
            ]);
        }
    }
    Ok(t)
}
