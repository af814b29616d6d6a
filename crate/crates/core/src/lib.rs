//! Numerics for the nonlinear oscillator with position-dependent effective mass
//! `m(x) = 1/(1 + λx²)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: Gamma, Pochhammer, `0F3`, Meijer `G^{4,0}_{0,4}` and `I₀/I₁`.
//! - [`model`]: mass profile, potential, classical orbits and the grid ground state.
//! - [`algebra`]: truncated Fock-space realization of `L±`, `K±`, `K₀` and the
//!   identity checks of the ladder/su(1,1) algebra.
//! - [`bgcs`]: Barut-Girardello coherent states `K₋|z⟩ = z|z⟩`, overlaps,
//!   continuity and the resolution-of-unity weight.
//! - [`stats`]: occupation distribution, moments, Mandel `Q` and `g²(0)`.
//! - [`cli`]: the `pdm-bgcs` command-line driver.

pub mod algebra;
pub mod bgcs;
pub mod cli;
pub mod error;
pub mod model;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
