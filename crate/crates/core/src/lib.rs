//! Excitation-conserving dissipative Jaynes-Cummings model.
//!
//! The Lindblad generator built from the jump pair `a σ₊` / `a† σ₋` commutes
//! with the excitation number, so it splits into independent blocks acting
//! on the 2x2 pieces `ρ_{n,m}` of the density matrix. This crate builds
//! those blocks, diagonalizes them (closed form at zero detuning,
//! numerically otherwise), propagates states, computes atomic observables
//! and checks all of it against a brute-force master-equation integrator.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod liouville;
pub mod model;
pub mod oracle;
pub mod smallmat;
pub mod spectral;

pub use error::{Error, Result};
pub use smallmat::{CMat, C64};
