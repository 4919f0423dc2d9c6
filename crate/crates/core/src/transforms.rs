// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Photon-number preserving linear optics and coherent displacements.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::state::{CoherentVector, GaussianState, NormalCovariance};
use crate::{ComplexAmplitude, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    /// Intensity transmissivity `T`; reflectivity is `1 - T`.
    pub transmissivity: f64,
    /// Phase `θ` in radians.
    pub theta: f64,
}

impl BeamSplitterParams {
    pub fn new(transmissivity: f64, theta: f64) -> Self {
        Self { transmissivity, theta }
    }
}

impl Default for BeamSplitterParams {
    fn default() -> Self {
        Self::new(1.0, 0.0)
    }
}

/// Unitary 4×4 matrix `S` acting in the doubled basis as
/// `A_N → S† A_N S`, `Ξ → S† Ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMatrix(Matrix4<Complex64>);

impl SymplecticMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Largest entry of `S† S − 1`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.0.adjoint() * self.0 - Matrix4::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn beam_splitter(p: BeamSplitterParams) -> Result<SymplecticMatrix> {
    let t = p.transmissivity;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter {
            name: "T",
            constraint: "in [0, 1]",
            value: t,
        });
    }
    if !p.theta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "theta",
            constraint: "finite",
            value: p.theta,
        });
    }
    let st = Complex64::from(t.sqrt());
    let sr = (1.0 - t).sqrt();
    let rp = Complex64::from_polar(sr, p.theta);
    let rm = Complex64::from_polar(sr, -p.theta);
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let s = Matrix4::new(
        st, z,  -rp, z,
        z,  st, z,   -rm,
        rm, z,  st,  z,
        z,  rp, z,   st,
    );
    Ok(SymplecticMatrix(s))
}

/// Mode phase shifts `a_j → e^{iφ_j} a_j`.
pub fn phase_shift(phi1: f64, phi2: f64) -> SymplecticMatrix {
    let e = |p: f64| Complex64::from_polar(1.0, p);
    SymplecticMatrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(
        e(-phi1),
        e(phi1),
        e(-phi2),
        e(phi2),
    )))
}

pub fn apply(state: &GaussianState, s: &SymplecticMatrix) -> GaussianState {
    let sd = s.0.adjoint();
    let a = sd * state.cov().matrix() * s.0;
    let xi = sd * state.coh().doubled();
    let cov = NormalCovariance::symmetrized(&a);
    let coh = CoherentVector::new(0.5 * (xi[0] + xi[1].conj()), 0.5 * (xi[2] + xi[3].conj()));
    let second_mode_vacuum = cov.b2() == 0.0
        && cov.c2() == Complex64::new(0.0, 0.0)
        && cov.d12() == Complex64::new(0.0, 0.0)
        && cov.d12_bar() == Complex64::new(0.0, 0.0)
        && coh.xi2 == Complex64::new(0.0, 0.0);
    let modes = if state.modes() == 1 && second_mode_vacuum { 1 } else { 2 };
    state.with_cov(cov).with_coh(coh).with_modes(modes)
}

pub fn displace(state: &GaussianState, d1: ComplexAmplitude, d2: ComplexAmplitude) -> GaussianState {
    let coh = CoherentVector::new(state.coh().xi1 + d1, state.coh().xi2 + d2);
    let modes = if d2 != Complex64::new(0.0, 0.0) { 2 } else { state.modes() };
    state.with_coh(coh).with_modes(modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{shg_state, twin_state};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &GaussianState, b: &GaussianState) -> f64 {
        let m = (a.cov().matrix() - b.cov().matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        m.max((a.coh().xi1 - b.coh().xi1).norm()).max((a.coh().xi2 - b.coh().xi2).norm())
    }

    #[test]
    fn beam_splitter_limits() {
        assert_eq!(*beam_splitter(BeamSplitterParams::new(1.0, 0.0)).unwrap().matrix(), Matrix4::identity());

        let s = beam_splitter(BeamSplitterParams::new(0.5, 0.0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = s.matrix();
        for (i, j, v) in [(0, 0, h), (0, 2, -h), (1, 1, h), (1, 3, -h), (2, 0, h), (2, 2, h), (3, 1, h), (3, 3, h)] {
            assert!((m[(i, j)] - c(v, 0.0)).norm() < 1e-15, "({i},{j})");
        }

        let s = beam_splitter(BeamSplitterParams::new(0.0, 0.0)).unwrap();
        let m = s.matrix();
        assert_eq!(m[(0, 2)], c(-1.0, 0.0));
        assert_eq!(m[(2, 0)], c(1.0, 0.0));
        assert_eq!(m[(0, 0)], c(0.0, 0.0));

        assert!(beam_splitter(BeamSplitterParams::new(1.2, 0.0)).is_err());
        assert!(beam_splitter(BeamSplitterParams::new(-0.1, 0.0)).is_err());
    }

    #[test]
    fn beam_splitter_unitary_on_grid() {
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let s = beam_splitter(BeamSplitterParams::new(t, 0.37 * k as f64)).unwrap();
            assert!(s.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn identity_leaves_state() {
        let s = twin_state(0.7, 0.1, 0.2, c(1.0, 2.0), c(-0.5, 0.1)).unwrap();
        assert_eq!(apply(&s, &SymplecticMatrix::identity()), s);
    }

    #[test]
    fn twin_photon_number_conserved() {
        let s = twin_state(1.0, 0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let out = apply(&s, &beam_splitter(BeamSplitterParams::new(0.3, 0.0)).unwrap());
        let (a, b) = s.mean_photons();
        let (x, y) = out.mean_photons();
        assert!((a + b - 2.0).abs() < 1e-15);
        assert!((x + y - 2.0).abs() < 1e-12);
        assert!(out.validate().is_empty());
    }

    #[test]
    fn squeezed_vacuum_split_equally() {
        let s = shg_state(1.0, 0.0, c(0.0, 0.0)).unwrap();
        let out = apply(&s, &beam_splitter(BeamSplitterParams::new(0.5, 0.0)).unwrap());
        let cin = s.cov().c1();
        assert!((out.cov().c1() - cin / 2.0).norm() < 1e-14);
        assert!((out.cov().c2() - cin / 2.0).norm() < 1e-14);
        assert!(out.cov().d12().norm() > 0.1);
        assert_eq!(out.modes(), 2);
    }

    #[test]
    fn round_trip_through_inverse() {
        let s = twin_state(0.9, 0.3, 0.0, c(1.5, -2.0), c(0.2, 0.4)).unwrap();
        let bs = beam_splitter(BeamSplitterParams::new(0.37, 0.6)).unwrap();
        let back = apply(&apply(&s, &bs), &bs.inverse());
        assert!(max_diff(&back, &s) < 1e-12);
    }

    #[test]
    fn phase_shift_rotates_moments() {
        let s = twin_state(0.5, 0.0, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let s = apply(&s, &beam_splitter(BeamSplitterParams::new(0.6, 0.0)).unwrap());
        let (p1, p2) = (0.4, -1.1);
        let r = apply(&s, &phase_shift(p1, p2));
        let e = |x: f64| Complex64::from_polar(1.0, x);
        assert!((r.coh().xi1 - s.coh().xi1 * e(p1)).norm() < 1e-14);
        assert!((r.cov().c1() - s.cov().c1() * e(2.0 * p1)).norm() < 1e-14);
        assert!((r.cov().d12() - s.cov().d12() * e(p1 + p2)).norm() < 1e-14);
        assert!((r.cov().d12_bar() - s.cov().d12_bar() * e(p2 - p1)).norm() < 1e-14);
    }

    #[test]
    fn displacement() {
        let s = twin_state(0.5, 0.0, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(displace(&s, c(0.0, 0.0), c(0.0, 0.0)), s);
        let v = GaussianState::vacuum(2).unwrap();
        assert_eq!(displace(&v, c(2.0, 0.0), c(0.0, 0.0)).mean_photons(), (4.0, 0.0));
        let (d1, d2) = (c(0.3, -0.2), c(-1.0, 4.0));
        assert!(max_diff(&displace(&displace(&s, d1, d2), -d1, -d2), &s) < 1e-15);
    }
}
