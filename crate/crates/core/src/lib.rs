// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian states of one and two optical modes generated in spontaneous and
//! stimulated parametric processes (second-subharmonic generation and
//! down-conversion), their beam-splitter transformations, integrated-intensity
//! moments up to third order and the intensity-moment nonclassicality
//! witnesses `R1`, `R2` and `M`.
//!
//! The crate is organised bottom-up:
//!
//! * [`state`] – normal covariance matrix, coherent vector, noise model.
//! * [`dynamics`] – coupling matrix, propagator, Bogoliubov pairs and
//!   closed-form SHG / twin-beam constructors.
//! * [`transforms`] – beam splitter, phase shifts and displacements.
//! * [`jets`] – truncated bivariate Taylor arithmetic.
//! * [`moments`] – intensity moments from the generating function, plus an
//!   independent Wick-pairing oracle and a Monte Carlo estimator.
//! * [`witnesses`] – `R_k`, `M`, shape factor, entanglement indicator and the
//!   optimal-phase search.
//! * [`sweep`] – scenarios, grid sweeps, zero contours and figure presets.
//! * [`cli`] – scenario files, CSV output and the command-line driver.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod jets;
pub mod moments;
pub mod state;
pub mod sweep;
pub mod transforms;
pub mod witnesses;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex field amplitude (`ξ_j`, `β_j`, displacements).
pub type ComplexAmplitude = Complex64;

/// Version string stamped into dataset metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
