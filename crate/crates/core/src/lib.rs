//! Exact and finite-difference solvers for the damped wave (telegraph)
//! equation `mu u_t + u_tt - u_xx = 0` and the heat equation
//! `mu u_t - u_xx = 0`, plus the tooling needed to watch the former relax
//! onto the latter under diffusive rescaling.
//!
//! The crate is organised bottom-up:
//!
//! - [`quadrature`]: adaptive Gauss-Kronrod integration.
//! - [`bessel`]: `J_n`, `I_nu` (series, scaled, integral form) and the explicit
//!   bound on `|sqrt(2 pi x) e^{-x} I_nu(x) - 1|`.
//! - [`compact`]: compactly supported initial data.
//! - [`heat`]: Gaussian profile, heat kernel and convolution solutions.
//! - [`telegraph`]: Bessel-kernel representation of the Cauchy problem.
//! - [`fdm`]: explicit finite-difference oracles and the energy functional.
//! - [`scaling`]: diffusive rescaling, the prefactor `M` and long-time studies.
//! - [`cli`]: config parsing and the CSV experiment runner.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod cli;
pub mod compact;
mod error;
pub mod fdm;
pub mod heat;
pub mod quadrature;
pub mod scaling;
pub mod telegraph;

pub use compact::{CompactFunction, Interval};
pub use error::{Error, Result};
pub use quadrature::{QuadratureResult, QuadratureSpec};
