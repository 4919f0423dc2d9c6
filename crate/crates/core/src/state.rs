// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian-state data model.
//!
//! A state is described by its normal covariance matrix `A_N` in the doubled
//! basis `(a1†, a1, a2†, a2)` and by its coherent vector
//! `Ξ = (ξ1, ξ1*, ξ2, ξ2*)`. Entry `[A_N]_{jk} = <:ΔA_j† ΔA_k:>`, which gives
//! the block layout
//!
//! ```text
//!        | B1    C1    D̄12*  D12  |
//! A_N =  | C1*   B1    D12*  D̄12  |
//!        | D̄12   D12   B2    C2   |
//!        | D12*  D̄12*  C2*   B2   |
//! ```
//!
//! with `B_j = <Δa_j† Δa_j>`, `C_j = <Δa_j²>`, `D12 = <Δa1 Δa2>` and
//! `D̄12 = <Δa1† Δa2>`. Equivalently `A_N = E[ΔV ΔV†]` for the phase-space
//! vector `V = (α1, α1*, α2, α2*)`, i.e. `A_N` and `Ξ` share one ordering.

use std::fmt;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::{ComplexAmplitude, Error, Result};

/// Absolute tolerance on structural residuals in [`GaussianState::validate`].
pub const STRUCTURE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normal covariance matrix in the `(a1†, a1, a2†, a2)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalCovariance(Matrix4<Complex64>);

impl NormalCovariance {
    pub fn zero() -> Self {
        Self(Matrix4::zeros())
    }

    /// Assembles the block form from its six independent quantities.
    pub fn from_parts(
        b1: f64,
        b2: f64,
        c1: Complex64,
        c2: Complex64,
        d12: Complex64,
        d12_bar: Complex64,
    ) -> Self {
        let b1 = Complex64::from(b1);
        let b2 = Complex64::from(b2);
        #[rustfmt::skip]
        let m = Matrix4::new(
            b1,           c1,           d12_bar.conj(), d12,
            c1.conj(),    b1,           d12.conj(),     d12_bar,
            d12_bar,      d12,          b2,             c2,
            d12.conj(),   d12_bar.conj(), c2.conj(),    b2,
        );
        Self(m)
    }

    /// Wraps a raw matrix without checking the block structure.
    pub fn from_matrix(m: Matrix4<Complex64>) -> Self {
        Self(m)
    }

    /// Rebuilds an exactly structured matrix from a nearly structured one by
    /// averaging each quantity over the entries that carry it.
    pub(crate) fn symmetrized(m: &Matrix4<Complex64>) -> Self {
        let b1 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        let b2 = 0.5 * (m[(2, 2)].re + m[(3, 3)].re);
        let c1 = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
        let c2 = 0.5 * (m[(2, 3)] + m[(3, 2)].conj());
        let d12 = 0.25 * (m[(0, 3)] + m[(1, 2)].conj() + m[(2, 1)] + m[(3, 0)].conj());
        let d12_bar = 0.25 * (m[(1, 3)] + m[(0, 2)].conj() + m[(2, 0)] + m[(3, 1)].conj());
        Self::from_parts(b1, b2, c1, c2, d12, d12_bar)
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn b1(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn b2(&self) -> f64 {
        self.0[(2, 2)].re
    }

    pub fn c1(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    pub fn c2(&self) -> Complex64 {
        self.0[(2, 3)]
    }

    pub fn d12(&self) -> Complex64 {
        self.0[(0, 3)]
    }

    pub fn d12_bar(&self) -> Complex64 {
        self.0[(1, 3)]
    }
}

/// Coherent amplitudes `ξ1`, `ξ2`; the doubled vector is derived on demand so
/// the conjugate pairing is exact.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoherentVector {
    pub xi1: ComplexAmplitude,
    pub xi2: ComplexAmplitude,
}

impl CoherentVector {
    pub fn new(xi1: ComplexAmplitude, xi2: ComplexAmplitude) -> Self {
        Self { xi1, xi2 }
    }

    /// `Ξ = (ξ1, ξ1*, ξ2, ξ2*)`.
    pub fn doubled(&self) -> Vector4<Complex64> {
        Vector4::new(self.xi1, self.xi1.conj(), self.xi2, self.xi2.conj())
    }
}

/// One- or two-mode Gaussian state. Single-mode states live in the two-mode
/// representation with mode 2 in vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    cov: NormalCovariance,
    coh: CoherentVector,
    modes: usize,
}

/// A violated structural invariant and the matrix entries involved (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub what: String,
    pub entries: Vec<(usize, usize)>,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (residual {:e}) at", self.what, self.residual)?;
        for (i, j) in &self.entries {
            write!(f, " ({i},{j})")?;
        }
        Ok(())
    }
}

impl GaussianState {
    pub fn vacuum(modes: usize) -> Result<Self> {
        check_modes(modes)?;
        Ok(Self {
            cov: NormalCovariance::zero(),
            coh: CoherentVector::default(),
            modes,
        })
    }

    /// Builds a state without validation; see [`GaussianState::validate`].
    pub fn from_parts(cov: NormalCovariance, coh: CoherentVector, modes: usize) -> Result<Self> {
        check_modes(modes)?;
        Ok(Self { cov, coh, modes })
    }

    pub fn cov(&self) -> &NormalCovariance {
        &self.cov
    }

    pub fn coh(&self) -> &CoherentVector {
        &self.coh
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub(crate) fn with_cov(mut self, cov: NormalCovariance) -> Self {
        self.cov = cov;
        self
    }

    pub(crate) fn with_coh(mut self, coh: CoherentVector) -> Self {
        self.coh = coh;
        self
    }

    pub(crate) fn with_modes(mut self, modes: usize) -> Self {
        self.modes = modes;
        self
    }

    /// Lists every violated structural invariant; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let m = self.cov.matrix();
        let mut out = Vec::new();
        let mut pair = |what: &str, a: (usize, usize), b: (usize, usize), conj: bool| {
            let rhs = if conj { m[b].conj() } else { m[b] };
            let r = (m[a] - rhs).norm();
            if r.is_nan() || r > STRUCTURE_TOL {
                out.push(Violation {
                    what: what.to_string(),
                    entries: vec![a, b],
                    residual: r,
                });
            }
        };

        pair("B1 diagonal entries differ", (0, 0), (1, 1), false);
        pair("B2 diagonal entries differ", (2, 2), (3, 3), false);
        pair("C1 entries are not conjugate", (0, 1), (1, 0), true);
        pair("C2 entries are not conjugate", (2, 3), (3, 2), true);
        pair("D12 entries are not conjugate", (0, 3), (1, 2), true);
        pair("D12-bar entries are not conjugate", (1, 3), (0, 2), true);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            pair(
                "lower-left block is not the conjugate transpose of the upper-right block",
                (j, i),
                (i, j),
                true,
            );
        }

        for (k, name) in [(0usize, "B1"), (2, "B2")] {
            let im = m[(k, k)].im.abs();
            if im.is_nan() || im > STRUCTURE_TOL {
                out.push(Violation {
                    what: format!("{name} is not real"),
                    entries: vec![(k, k)],
                    residual: im,
                });
            }
            let re = m[(k, k)].re;
            if re.is_nan() || re < -STRUCTURE_TOL {
                out.push(Violation {
                    what: format!("{name} is negative"),
                    entries: vec![(k, k)],
                    residual: -re,
                });
            }
        }

        if self.modes == 1 {
            let mut entries = Vec::new();
            let mut residual: f64 = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    if (i >= 2 || j >= 2) && m[(i, j)] != ZERO {
                        entries.push((i, j));
                        residual = residual.max(m[(i, j)].norm());
                    }
                }
            }
            if self.coh.xi2 != ZERO {
                residual = residual.max(self.coh.xi2.norm());
            }
            if residual > 0.0 {
                out.push(Violation {
                    what: "single-mode state has a non-vacuum second mode".to_string(),
                    entries,
                    residual,
                });
            }
        }
        out
    }

    /// Superposition of signal and thermal noise: `B_j → B_j + bn_j`, all
    /// other quantities unchanged.
    pub fn add_noise(&self, bn1: f64, bn2: f64) -> Result<Self> {
        nonneg("bn1", bn1)?;
        nonneg("bn2", bn2)?;
        let c = &self.cov;
        let cov = NormalCovariance::from_parts(
            c.b1() + bn1,
            c.b2() + bn2,
            c.c1(),
            c.c2(),
            c.d12(),
            c.d12_bar(),
        );
        let modes = if bn2 > 0.0 { 2 } else { self.modes };
        Ok(Self {
            cov,
            coh: self.coh,
            modes,
        })
    }

    /// Mean photon numbers `(B1 + |ξ1|², B2 + |ξ2|²)`.
    pub fn mean_photons(&self) -> (f64, f64) {
        (
            self.cov.b1() + self.coh.xi1.norm_sqr(),
            self.cov.b2() + self.coh.xi2.norm_sqr(),
        )
    }

    /// Normal characteristic function
    /// `exp(-½ β† Ω A_N Ωᵀ β + β† Ω Ξ)` with `β = (β1, β1*, β2, β2*)` and
    /// `Ω = ω ⊕ ω`, `ω = [[0, 1], [-1, 0]]`. With this ordering it equals
    /// `<exp(β1* a1† + β2* a2†) exp(-β1 a1 - β2 a2)>`.
    pub fn characteristic_fn(&self, beta1: ComplexAmplitude, beta2: ComplexAmplitude) -> Complex64 {
        let beta = Vector4::new(beta1, beta1.conj(), beta2, beta2.conj());
        let one = Complex64::from(1.0);
        #[rustfmt::skip]
        let omega = Matrix4::new(
            ZERO, one,  ZERO, ZERO,
            -one, ZERO, ZERO, ZERO,
            ZERO, ZERO, ZERO, one,
            ZERO, ZERO, -one, ZERO,
        );
        let bd = beta.adjoint();
        let quad = (bd * omega * self.cov.matrix() * omega.transpose() * beta)[(0, 0)];
        let lin = (bd * omega * self.coh.doubled())[(0, 0)];
        (-0.5 * quad + lin).exp()
    }
}

fn check_modes(modes: usize) -> Result<()> {
    if modes == 1 || modes == 2 {
        Ok(())
    } else {
        Err(Error::InvalidModeCount(modes))
    }
}

pub(crate) fn nonneg(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            constraint: "finite and nonnegative",
            value,
        })
    }
}
