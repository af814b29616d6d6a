//! Truncated Fock-basis realization of the ladder and su(1,1) operators.
//!
//! With `l[n] = n − λ'n(n+1)`:
//!
//! ```text
//! L₋ e_n = √l[n] e_{n−1}     L₊ e_n = √l[n+1] e_{n+1}
//! K₋ e_n = l[n] e_{n−1}      K₊ e_n = l[n+1] e_{n+1}
//! K₀ e_n = (1/2 + l[n]) e_n  H₁ e_n = l[n] e_n
//! ```
//!
//! For `λ' > 0` the coefficients turn negative past `n_max_physical`; the
//! square-root operators only exist up to there.

mod dd;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::specfun::pochhammer;
use crate::{Error, Result};
use dd::Dd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Clamp the basis to the nonnegative-coefficient prefix.
    Physical,
    /// Keep the full requested dimension; `L±` unavailable past the prefix.
    Formal,
}

/// Operator with a diagonal and at most one off-diagonal band.
///
/// `band[j]` couples `e_j` and `e_{j+1}`: for `band_offset = -1` it is the
/// coefficient of `e_{j+1} → e_j`, for `+1` of `e_j → e_{j+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandOperator {
    pub diag: Vec<f64>,
    pub band_offset: i8,
    pub band: Vec<f64>,
}

impl BandOperator {
    fn diagonal(diag: Vec<f64>) -> Self {
        let n = diag.len();
        BandOperator {
            diag,
            band_offset: 0,
            band: vec![0.0; n.saturating_sub(1)],
        }
    }

    fn off(offset: i8, band: Vec<f64>) -> Self {
        BandOperator {
            diag: vec![0.0; band.len() + 1],
            band_offset: offset,
            band,
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let mut out: Vec<f64> = self.diag.iter().zip(v).map(|(d, x)| d * x).collect();
        for (j, &b) in self.band.iter().enumerate() {
            match self.band_offset {
                -1 => out[j] += b * v[j + 1],
                1 => out[j + 1] += b * v[j],
                _ => {}
            }
        }
        Ok(out)
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag));
        for (j, &b) in self.band.iter().enumerate().take(n.saturating_sub(1)) {
            match self.band_offset {
                -1 => m[(j, j + 1)] = b,
                1 => m[(j + 1, j)] = b,
                _ => {}
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockRealization {
    pub lambda_prime: f64,
    /// `λ̃ = 2λ'`
    pub lambda_tilde: f64,
    pub mode: Mode,
    pub dim: usize,
    pub l_sq: Vec<f64>,
    /// `None` when every coefficient is nonnegative (`λ' ≤ 0`).
    pub n_max_physical: Option<usize>,
    /// `α_n = 1 − (n−1)λ̃`
    pub alpha_seq: Vec<f64>,
    /// `R(α_n) = 1 − nλ̃`
    pub r_seq: Vec<f64>,
    /// `[n]! = ∏_{k≤n} l[k]`
    pub gen_factorial: Vec<f64>,
    /// `E_n/α = n + 1/2 − λ'n(n+1)`
    pub energy: Vec<f64>,
    /// `m_n = n + 1/2 − λ'n(n+1)` in `D⁺(j)`
    pub rep_m: Vec<f64>,
    pub rep_j: f64,
}

/// `n − λ'n(n+1)`
pub fn l_sq(lambda_prime: f64, n: usize) -> f64 {
    let nf = n as f64;
    nf - lambda_prime * nf * (nf + 1.0)
}

/// Largest `n` with `l[k] ≥ 0` for every `k ≤ n`; `None` if unbounded.
pub fn n_max_physical(lambda_prime: f64) -> Option<usize> {
    if lambda_prime <= 0.0 {
        return None;
    }
    let mut n = ((1.0 / lambda_prime - 1.0).floor().max(0.0)) as usize;
    while n > 0 && l_sq(lambda_prime, n) < 0.0 {
        n -= 1;
    }
    while l_sq(lambda_prime, n + 1) >= 0.0 {
        n += 1;
    }
    Some(n)
}

/// `α_{n+1} = α_n − λ̃`
pub fn shift_params(alpha_n: f64, lambda_tilde: f64) -> f64 {
    alpha_n - lambda_tilde
}

/// `[n]! = n! (−λ')ⁿ (2 − 1/λ')_n`, or `n!` at `λ' = 0`.
pub fn gen_factorial_closed(lambda_prime: f64, n: usize) -> f64 {
    let fact = pochhammer(1.0, n);
    if lambda_prime == 0.0 {
        return fact;
    }
    fact * (-lambda_prime).powi(n as i32) * pochhammer(2.0 - 1.0 / lambda_prime, n)
}

pub fn build_realization(lambda_prime: f64, dim: usize, mode: Mode) -> Result<FockRealization> {
    if !lambda_prime.is_finite() {
        return Err(Error::invalid("lambda_prime", lambda_prime, "must be finite"));
    }
    if dim < 2 {
        return Err(Error::invalid("dim", dim as f64, "must be at least 2"));
    }
    let n_max = n_max_physical(lambda_prime);
    let dim = match (mode, n_max) {
        (Mode::Physical, Some(m)) => dim.min(m + 1),
        _ => dim,
    };
    let lt = 2.0 * lambda_prime;
    let l: Vec<f64> = (0..dim).map(|n| l_sq(lambda_prime, n)).collect();
    let alpha_seq = (0..dim).map(|n| 1.0 - (n as f64 - 1.0) * lt).collect();
    let r_seq = (0..dim).map(|n| 1.0 - n as f64 * lt).collect();
    let mut gen_factorial = Vec::with_capacity(dim);
    let mut acc = 1.0;
    gen_factorial.push(acc);
    for &lk in &l[1..] {
        acc *= lk;
        gen_factorial.push(acc);
    }
    let rep_m: Vec<f64> = l.iter().map(|&x| 0.5 + x).collect();
    Ok(FockRealization {
        lambda_prime,
        lambda_tilde: lt,
        mode,
        dim,
        l_sq: l,
        n_max_physical: n_max,
        alpha_seq,
        r_seq,
        gen_factorial,
        energy: rep_m.clone(),
        rep_m,
        rep_j: -0.5,
    })
}

impl FockRealization {
    fn sqrt_band(&self) -> Result<Vec<f64>> {
        self.l_sq[1..]
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                if v < 0.0 {
                    Err(Error::NegativeCoefficient {
                        index: j + 1,
                        value: v,
                    })
                } else {
                    Ok(v.sqrt())
                }
            })
            .collect()
    }

    pub fn l_minus(&self) -> Result<BandOperator> {
        Ok(BandOperator::off(-1, self.sqrt_band()?))
    }

    pub fn l_plus(&self) -> Result<BandOperator> {
        Ok(BandOperator::off(1, self.sqrt_band()?))
    }

    pub fn k_minus(&self) -> BandOperator {
        BandOperator::off(-1, self.l_sq[1..].to_vec())
    }

    pub fn k_plus(&self) -> BandOperator {
        BandOperator::off(1, self.l_sq[1..].to_vec())
    }

    pub fn k0(&self) -> BandOperator {
        BandOperator::diagonal(self.l_sq.iter().map(|&l| 0.5 + l).collect())
    }

    pub fn h1(&self) -> BandOperator {
        BandOperator::diagonal(self.l_sq.clone())
    }

    /// `Ĥ = α(H₁ + 1/2)`
    pub fn hamiltonian(&self, alpha: f64) -> BandOperator {
        BandOperator::diagonal(self.l_sq.iter().map(|&l| alpha * (l + 0.5)).collect())
    }

    /// `R̂ e_n = (1 − λ̃(n+1)) e_n`
    pub fn r_hat(&self) -> BandOperator {
        BandOperator::diagonal(
            (0..self.dim)
                .map(|n| 1.0 - self.lambda_tilde * (n as f64 + 1.0))
                .collect(),
        )
    }

    /// Same coefficients restricted to the first `dim` basis states.
    fn prefix(&self, dim: usize) -> FockRealization {
        let cut = |v: &Vec<f64>| v[..dim].to_vec();
        FockRealization {
            dim,
            l_sq: cut(&self.l_sq),
            alpha_seq: cut(&self.alpha_seq),
            r_seq: cut(&self.r_seq),
            gen_factorial: cut(&self.gen_factorial),
            energy: cut(&self.energy),
            rep_m: cut(&self.rep_m),
            ..self.clone()
        }
    }

    fn physical_dim(&self) -> usize {
        match self.n_max_physical {
            Some(m) => self.dim.min(m + 1),
            None => self.dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub lambda_prime: f64,
    pub dim: usize,
    /// Rows `0..=interior_max` enter every commutator statistic.
    pub interior_max: usize,
    /// Size of the prefix on which `L±` exist and were checked.
    pub ladder_dim: usize,
    /// `max |[L₋,L₊] − R̂|` over the ladder interior.
    pub ladder_vs_rhat: Option<f64>,
    /// `max |[L₋,L₊] − 1|`, the scalar reading.
    pub ladder_vs_scalar: Option<f64>,
    /// `max |[L∓,R̂] ± λ̃L∓|`, the convention the realization obeys.
    pub sign_realized: Option<f64>,
    /// `max |[L∓,R̂] ∓ λ̃L∓|`
    pub sign_literal: Option<f64>,
    /// `‖([K₋,K₊] − 2K₀) e_n‖` per interior row.
    pub k_closure: Vec<f64>,
    /// `max |[K₀,K±] ∓ K±|`
    pub k0_ladder: f64,
    /// Casimir diagonal in double-double arithmetic.
    pub casimir: Vec<f64>,
    pub casimir_max_dev: f64,
    /// Same diagonal with plain `f64` products, for information.
    pub casimir_f64_max_dev: f64,
    /// `max | |l[n]| − l[n] |`: `D⁺(−1/2)` lowering elements vs `K₋`.
    pub rep_lower_dev: f64,
    /// `max | |l[n]+1| − l[n+1] |`: raising elements vs `K₊`.
    pub rep_upper_dev: f64,
}

fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// Max absolute entry over the leading `rows × rows` block.
fn block_max(m: &DMatrix<f64>, rows: usize) -> f64 {
    m.view((0, 0), (rows, rows)).amax()
}

pub fn check_algebra(real: &FockRealization) -> Result<AlgebraReport> {
    if real.dim < 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: real.dim,
        });
    }
    let dim = real.dim;
    let interior = dim - 1;
    let lt = real.lambda_tilde;

    let ladder_dim = real.physical_dim();
    let (mut vs_rhat, mut vs_scalar, mut realized, mut literal) = (None, None, None, None);
    if ladder_dim >= 3 {
        let p = real.prefix(ladder_dim);
        let rows = ladder_dim - 1;
        let lm = p.l_minus()?.to_matrix();
        let lp = p.l_plus()?.to_matrix();
        let r = p.r_hat().to_matrix();
        let c = commutator(&lm, &lp);
        vs_rhat = Some(block_max(&(&c - &r), rows));
        vs_scalar = Some(block_max(
            &(&c - DMatrix::<f64>::identity(ladder_dim, ladder_dim)),
            rows,
        ));
        let cm = commutator(&lm, &r);
        let cp = commutator(&lp, &r);
        realized = Some(
            block_max(&(&cm + &lm * lt), rows).max(block_max(&(&cp - &lp * lt), rows)),
        );
        literal = Some(
            block_max(&(&cm - &lm * lt), rows).max(block_max(&(&cp + &lp * lt), rows)),
        );
    }

    let km = real.k_minus().to_matrix();
    let kp = real.k_plus().to_matrix();
    let k0 = real.k0().to_matrix();
    let closure = commutator(&km, &kp) - &k0 * 2.0;
    let k_closure = (0..interior)
        .map(|n| closure.view((0, n), (interior, 1)).norm())
        .collect();
    let k0_ladder = block_max(&(commutator(&k0, &kp) - &kp), interior)
        .max(block_max(&(commutator(&k0, &km) + &km), interior));

    let mut casimir = Vec::with_capacity(interior);
    let mut casimir_max_dev = 0.0_f64;
    let mut casimir_f64_max_dev = 0.0_f64;
    for n in 0..interior {
        let l = real.l_sq[n];
        // (K₊K₋)_nn = K₊[n−1→n] · K₋[n→n−1]
        let kk = if n == 0 {
            Dd::from_f64(0.0)
        } else {
            Dd::from_f64(l).mul(Dd::from_f64(l))
        };
        let k0 = Dd::from_f64(0.5).add(Dd::from_f64(l));
        let k0m1 = k0.sub(Dd::from_f64(1.0));
        let c = kk.sub(k0.mul(k0m1)).to_f64();
        casimir_max_dev = casimir_max_dev.max((c - 0.25).abs());
        casimir.push(c);

        let kk64 = if n == 0 { 0.0 } else { l * l };
        let k064 = 0.5 + l;
        casimir_f64_max_dev = casimir_f64_max_dev.max((kk64 - k064 * (k064 - 1.0) - 0.25).abs());
    }

    let mut rep_lower_dev = 0.0_f64;
    let mut rep_upper_dev = 0.0_f64;
    for n in 0..interior {
        let m = real.rep_m[n];
        let j = real.rep_j;
        let lower = ((m + j) * (m - j - 1.0)).abs().sqrt();
        let upper = ((m + j + 1.0) * (m - j)).abs().sqrt();
        rep_lower_dev = rep_lower_dev.max((lower - real.l_sq[n]).abs());
        rep_upper_dev = rep_upper_dev.max((upper - real.l_sq[n + 1]).abs());
    }

    Ok(AlgebraReport {
        lambda_prime: real.lambda_prime,
        dim,
        interior_max: interior - 1,
        ladder_dim,
        ladder_vs_rhat: vs_rhat,
        ladder_vs_scalar: vs_scalar,
        sign_realized: realized,
        sign_literal: literal,
        k_closure,
        k0_ladder,
        casimir,
        casimir_max_dev,
        casimir_f64_max_dev,
        rep_lower_dev,
        rep_upper_dev,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenstate {
    pub n: usize,
    pub vector: Vec<f64>,
    /// `max |v − e_n|`
    pub deviation: f64,
}

/// `L₊ⁿ e₀ / √[n]!`
pub fn build_eigenstate(real: &FockRealization, n: usize) -> Result<Eigenstate> {
    if n >= real.dim {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: real.dim,
        });
    }
    if let Some(k) = (1..=n).find(|&k| real.l_sq[k] <= 0.0) {
        return Err(Error::NegativeCoefficient {
            index: k,
            value: real.l_sq[k],
        });
    }
    let lp = real.prefix(n + 1).l_plus()?;
    let mut v = vec![0.0; n + 1];
    v[0] = 1.0;
    for _ in 0..n {
        v = lp.apply(&v)?;
    }
    let scale = 1.0 / real.gen_factorial[n].sqrt();
    v.iter_mut().for_each(|x| *x *= scale);
    v.resize(real.dim, 0.0);
    let deviation = v
        .iter()
        .enumerate()
        .map(|(k, &x)| (x - if k == n { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    Ok(Eigenstate {
        n,
        vector: v,
        deviation,
    })
}
