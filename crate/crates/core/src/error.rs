// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mode count {0}: expected 1 or 2")]
    InvalidModeCount(usize),

    #[error("parameter `{name}` must be {constraint}, got {value}")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("matrix exponential overflowed (non-finite propagator)")]
    Overflow,

    #[error("jet constant term is zero; {0} is undefined")]
    ZeroConstantTerm(&'static str),

    #[error("jet orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),

    #[error("singular constant-term matrix in jet elimination")]
    SingularMatrix,

    #[error("moment order {requested} exceeds the limit {limit}")]
    OrderGuard { requested: usize, limit: usize },

    #[error("moment table of order {have} is too short, need order {need}")]
    MomentOrder { have: usize, need: usize },

    #[error("moment <W1^{a} W2^{b}> has imaginary residual {residual:e}")]
    ImaginaryResidual { a: usize, b: usize, residual: f64 },

    #[error("normal covariance is not positive semidefinite (min eigenvalue {0:e}); no classical sampler")]
    NotClassical(f64),

    #[error("shape factor undefined: {0}")]
    ShapeFactor(String),

    #[error("factorization violated: R1/T^4 = {f1:e} but R2/(1-T)^4 = {f2:e}")]
    Factorization { f1: f64, f2: f64 },

    #[error("witness is constant in the phase; optimal phase is undefined")]
    DegeneratePhase,

    #[error("no sign change of the witness in [{lo}, {hi}] ({f_lo:e}, {f_hi:e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("grid has {points} points, above the cap of {cap}")]
    GridCap { points: u128, cap: u64 },

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("witness {0} is not defined for this scenario")]
    WitnessUndefined(&'static str),

    #[error("non-finite value: {0}")]
    NonFinite(String),
}
