//! Exact logarithmic and Rényi negativity of free-fermion Gaussian states,
//! connected charge cumulants, and the exact-rational coefficients of the
//! charge-cumulant expansion of negativity and entropy.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration,
//! parallel sweeps and the command line live in the companion `chargeneg`
//! crate.
//!
//! Module map:
//!
//! - [`model`]: seeded single-particle Hamiltonian ensembles and region partitions.
//! - [`gaussian`]: thermal and ground-state two-point correlation matrices.
//! - [`cumulants`]: Wick trace formulas for joint charge cumulants and a log-det
//!   generating-function cross-check.
//! - [`negativity`]: covariance pipeline, exact negativities and entropies.
//! - [`expansion`]: Bernoulli/Hurwitz machinery and symbolic expansion coefficients.
//! - [`oracle`]: brute-force Fock-space reference for small systems.
//! - [`harness`]: convergence sweeps and 1D scaling experiments.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cumulants;
pub mod error;
pub mod expansion;
pub mod gaussian;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod negativity;
pub mod oracle;

mod math;
mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;
