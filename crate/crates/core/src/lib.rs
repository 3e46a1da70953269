//! Simulation and verification of quantum query algorithms that distinguish
//! two classical probability distributions.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of its inputs plus an explicitly passed RNG, so callers can fan work out
//! across threads without shared state.
//!
//! * [`qcore`] dense complex linear algebra, phase estimation, amplitude
//!   amplification and the effective spectral gap checker.
//! * [`distributions`] finite distributions, Hellinger-type metrics and the
//!   families used by the constructions.
//! * [`oracles`] the four access models as explicit unitaries with query
//!   accounting.
//! * [`adversary`] the upper-bound witness and the lower-bound certificate.
//! * [`discriminators`] the quantum discriminators and the classical baseline.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod adversary;
pub mod discriminators;
pub mod distributions;
mod error;
pub mod oracles;
pub mod qcore;

pub use error::{Error, Result};

/// Tolerance used for numerical assertions (unitarity, feasibility residuals).
pub const TOL: f64 = 1e-9;

/// Tolerance used for identities that should hold to machine precision.
pub const EXACT_TOL: f64 = 1e-12;
