// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parametric dynamics: drift matrix, propagator and Bogoliubov pairs.
//!
//! The operator vector is ordered `(a1, a1†, a2, a2†)` and obeys
//! `d/dt a = M a` for the interaction Hamiltonian
//! `H = -ħ g1* a1² - ħ g2* a2² - ħ g3* a1 a2 + h.c.`. The solution
//! `a(t) = exp(M t) a(0)` is read out as
//! `a_j(t) = Σ_l U_jl a_l(0) + V_jl a_l†(0)`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::state::{nonneg, CoherentVector, GaussianState, NormalCovariance};
use crate::{ComplexAmplitude, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Couplings, pump phase, interaction time, noise and stimulating fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessParams {
    /// SHG coupling of mode 1 (1/time).
    pub g1: Complex64,
    /// SHG coupling of mode 2.
    pub g2: Complex64,
    /// Down-conversion coupling.
    pub g3: Complex64,
    /// Pump phase in radians, folded into the couplings as `g → g e^{iα}`.
    pub alpha: f64,
    pub t: f64,
    pub bn1: f64,
    pub bn2: f64,
    pub xi1_0: ComplexAmplitude,
    pub xi2_0: ComplexAmplitude,
}

impl Default for ProcessParams {
    fn default() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            g1: z,
            g2: z,
            g3: z,
            alpha: 0.0,
            t: 0.0,
            bn1: 0.0,
            bn2: 0.0,
            xi1_0: z,
            xi2_0: z,
        }
    }
}

/// Input–output matrices of a lossless quadratic evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair {
    pub u: Matrix2<Complex64>,
    pub v: Matrix2<Complex64>,
}

impl BogoliubovPair {
    pub fn identity() -> Self {
        Self {
            u: Matrix2::identity(),
            v: Matrix2::zeros(),
        }
    }

    /// Pair of the evolution "`self` first, then `next`".
    pub fn then(&self, next: &BogoliubovPair) -> BogoliubovPair {
        BogoliubovPair {
            u: next.u * self.u + next.v * self.v.conjugate(),
            v: next.u * self.v + next.v * self.u.conjugate(),
        }
    }

    /// Largest entry of `U U† − V V† − 1` and of `U Vᵀ − (U Vᵀ)ᵀ`.
    pub fn commutator_residual(&self) -> f64 {
        let a = self.u * self.u.adjoint() - self.v * self.v.adjoint() - Matrix2::identity();
        let uvt = self.u * self.v.transpose();
        let b = uvt - uvt.transpose();
        a.iter().chain(b.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Drift matrix `M`, rows and columns ordered `(a1, a1†, a2, a2†)`.
///
/// The last row uses the conjugated couplings `-i g3*`, `-2i g2*` required by
/// `a2† = (a2)†`; for real couplings this is the textbook form.
pub fn coupling_matrix(params: &ProcessParams) -> Matrix4<Complex64> {
    let phase = Complex64::from_polar(1.0, params.alpha);
    let g1 = params.g1 * phase;
    let g2 = params.g2 * phase;
    let g3 = params.g3 * phase;
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        z,                  2.0 * I * g1, z,                  I * g3,
        -2.0 * I * g1.conj(), z,          -I * g3.conj(),     z,
        z,                  I * g3,       z,                  2.0 * I * g2,
        -I * g3.conj(),     z,            -2.0 * I * g2.conj(), z,
    );
    m
}

/// `exp(A)` by scaling and squaring with a Taylor kernel.
pub fn expm(a: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let norm = one_norm(a);
    // Scale until the kernel argument has 1-norm at most 1/2.
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * Complex64::from(scale);

    // Taylor series to convergence; 1/2^k/k! < 1e-18 by k = 18.
    let mut term = Matrix4::<Complex64>::identity();
    let mut sum = term;
    for k in 1..=30 {
        term = term * x / Complex64::from(k as f64);
        sum += term;
        if one_norm(&term) <= f64::EPSILON * 1e-3 * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

fn one_norm(a: &Matrix4<Complex64>) -> f64 {
    (0..4)
        .map(|j| (0..4).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Propagator `exp(M t)` split into its Bogoliubov pair.
pub fn propagate(params: &ProcessParams) -> Result<BogoliubovPair> {
    if !params.t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            constraint: "finite",
            value: params.t,
        });
    }
    let p = expm(&(coupling_matrix(params) * Complex64::from(params.t)));
    if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow);
    }
    let u = Matrix2::new(p[(0, 0)], p[(0, 2)], p[(2, 0)], p[(2, 2)]);
    let v = Matrix2::new(p[(0, 1)], p[(0, 3)], p[(2, 1)], p[(2, 3)]);
    Ok(BogoliubovPair { u, v })
}

/// `ξ_j(t) = Σ_l U_jl ξ_l(0) + V_jl ξ_l*(0)`.
pub fn evolve_coherent(bg: &BogoliubovPair, xi0: &CoherentVector) -> CoherentVector {
    let x = [xi0.xi1, xi0.xi2];
    let out = |j: usize| (0..2).map(|l| bg.u[(j, l)] * x[l] + bg.v[(j, l)] * x[l].conj()).sum();
    CoherentVector::new(out(0), out(1))
}

/// Normal covariance of vacuum evolved by `bg`.
pub fn covariance_from_bogoliubov(bg: &BogoliubovPair) -> NormalCovariance {
    let (u, v) = (&bg.u, &bg.v);
    let sum = |f: &dyn Fn(usize) -> Complex64| (0..2).map(f).sum::<Complex64>();
    let b1 = sum(&|l| v[(0, l)].norm_sqr().into()).re;
    let b2 = sum(&|l| v[(1, l)].norm_sqr().into()).re;
    let c1 = sum(&|l| u[(0, l)] * v[(0, l)]);
    let c2 = sum(&|l| u[(1, l)] * v[(1, l)]);
    let d12 = sum(&|l| u[(0, l)] * v[(1, l)]);
    let d12_bar = sum(&|l| v[(0, l)].conj() * v[(1, l)]);
    NormalCovariance::from_parts(b1, b2, c1, c2, d12, d12_bar)
}

/// Full state from the propagator: vacuum fluctuations, additive noise and
/// the evolved stimulating fields.
pub fn evolve_state(params: &ProcessParams) -> Result<GaussianState> {
    let bg = propagate(params)?;
    state_from_pair(&bg, params.bn1, params.bn2, CoherentVector::new(params.xi1_0, params.xi2_0), 2)
}

fn state_from_pair(
    bg: &BogoliubovPair,
    bn1: f64,
    bn2: f64,
    xi0: CoherentVector,
    modes: usize,
) -> Result<GaussianState> {
    let cov = covariance_from_bogoliubov(bg);
    let coh = evolve_coherent(bg, &xi0);
    GaussianState::from_parts(cov, coh, modes)?.add_noise(bn1, bn2)
}

/// Closed-form SHG pair at `α = 0`: `U11 = cosh r`, `V11 = i sinh r`, with
/// `sinh² r = b_sq`.
pub fn shg_pair(b_sq: f64) -> Result<BogoliubovPair> {
    nonneg("b_sq", b_sq)?;
    let mut bg = BogoliubovPair::identity();
    bg.u[(0, 0)] = Complex64::from((1.0 + b_sq).sqrt());
    bg.v[(0, 0)] = I * b_sq.sqrt();
    Ok(bg)
}

/// Closed-form twin-beam pair at `α = 0` with `sinh² r = b_p`.
pub fn twin_pair(b_p: f64) -> Result<BogoliubovPair> {
    nonneg("b_p", b_p)?;
    let c = Complex64::from((1.0 + b_p).sqrt());
    let s = I * b_p.sqrt();
    Ok(BogoliubovPair {
        u: Matrix2::new(c, 0.0.into(), 0.0.into(), c),
        v: Matrix2::new(0.0.into(), s, s, 0.0.into()),
    })
}

/// Squeezed (optionally stimulated and noisy) single-mode state of the
/// second-subharmonic process.
pub fn shg_state(b_sq: f64, bn: f64, xi1_0: ComplexAmplitude) -> Result<GaussianState> {
    nonneg("bn", bn)?;
    finite_amp("xi1_0", xi1_0)?;
    let bg = shg_pair(b_sq)?;
    let modes = 1;
    state_from_pair(&bg, bn, 0.0, CoherentVector::new(xi1_0, 0.0.into()), modes)
}

/// Twin beam of the down-conversion process with signal/idler noise and
/// stimulating fields.
pub fn twin_state(
    b_p: f64,
    bs: f64,
    bi: f64,
    xi1_0: ComplexAmplitude,
    xi2_0: ComplexAmplitude,
) -> Result<GaussianState> {
    nonneg("bs", bs)?;
    nonneg("bi", bi)?;
    finite_amp("xi1_0", xi1_0)?;
    finite_amp("xi2_0", xi2_0)?;
    let bg = twin_pair(b_p)?;
    state_from_pair(&bg, bs, bi, CoherentVector::new(xi1_0, xi2_0), 2)
}

fn finite_amp(name: &'static str, z: ComplexAmplitude) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            constraint: "finite",
            value: f64::NAN,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn coupling_matrix_entries() {
        let p = ProcessParams { g1: c(1.0, 0.0), ..Default::default() };
        let m = coupling_matrix(&p);
        let mut want = Matrix4::zeros();
        want[(0, 1)] = c(0.0, 2.0);
        want[(1, 0)] = c(0.0, -2.0);
        assert_eq!(m, want);

        assert_eq!(coupling_matrix(&ProcessParams::default()), Matrix4::zeros());

        let p = ProcessParams { g3: c(1.0, 0.0), ..Default::default() };
        let m = coupling_matrix(&p);
        let mut want = Matrix4::zeros();
        want[(0, 3)] = c(0.0, 1.0);
        want[(1, 2)] = c(0.0, -1.0);
        want[(2, 1)] = c(0.0, 1.0);
        want[(3, 0)] = c(0.0, -1.0);
        assert_eq!(m, want);
    }

    #[test]
    fn coupling_rows_are_conjugate_pairs() {
        // Row of a† must be the conjugate of the row of a with the column
        // pairs swapped, for complex couplings too.
        let p = ProcessParams { g1: c(0.3, 0.4), g2: c(-0.2, 0.1), g3: c(0.5, -0.7), alpha: 0.3, ..Default::default() };
        let m = coupling_matrix(&p);
        let swap = [1usize, 0, 3, 2];
        for r in [0usize, 2] {
            for col in 0..4 {
                assert!(close(m[(r + 1, col)], m[(r, swap[col])].conj(), 1e-15));
            }
        }
    }

    #[test]
    fn propagate_shg_closed_form() {
        let p = ProcessParams { g1: c(1.0, 0.0), t: 0.25, ..Default::default() };
        let bg = propagate(&p).unwrap();
        assert!(close(bg.u[(0, 0)], c(0.5f64.cosh(), 0.0), 1e-14));
        assert!(close(bg.v[(0, 0)], c(0.0, 0.5f64.sinh()), 1e-14));
        assert!((0.5f64.cosh() - 1.1276260).abs() < 1e-7);
        assert!((0.5f64.sinh() - 0.5210953).abs() < 1e-7);
        assert!(bg.commutator_residual() < 1e-12);
    }

    #[test]
    fn propagate_identity_at_zero_time() {
        let p = ProcessParams { g1: c(1.0, 0.0), g3: c(0.3, 0.0), t: 0.0, ..Default::default() };
        assert_eq!(propagate(&p).unwrap(), BogoliubovPair::identity());
    }

    #[test]
    fn propagate_twin_closed_form() {
        let p = ProcessParams { g3: c(1.0, 0.0), t: 0.5, ..Default::default() };
        let bg = propagate(&p).unwrap();
        let ch = c(0.5f64.cosh(), 0.0);
        let sh = c(0.0, 0.5f64.sinh());
        assert!(close(bg.u[(0, 0)], ch, 1e-14) && close(bg.u[(1, 1)], ch, 1e-14));
        assert!(close(bg.v[(0, 1)], sh, 1e-14) && close(bg.v[(1, 0)], sh, 1e-14));
        assert!(bg.u[(0, 1)].norm() < 1e-15 && bg.v[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn pump_phase_enters_v() {
        let alpha = 0.7;
        let p = ProcessParams { g1: c(1.0, 0.0), alpha, t: 0.25, ..Default::default() };
        let bg = propagate(&p).unwrap();
        let want = c(0.0, 1.0) * Complex64::from_polar(0.5f64.sinh(), alpha);
        assert!(close(bg.v[(0, 0)], want, 1e-14));
    }

    #[test]
    fn overflow_is_reported() {
        let p = ProcessParams { g1: c(1.0, 0.0), t: 1e6, ..Default::default() };
        assert_eq!(propagate(&p), Err(Error::Overflow));
        let p = ProcessParams { t: f64::NAN, ..Default::default() };
        assert!(propagate(&p).is_err());
    }

    #[test]
    fn evolve_coherent_examples() {
        let xi = CoherentVector::new(c(0.3, -1.0), c(2.0, 0.5));
        assert_eq!(evolve_coherent(&BogoliubovPair::identity(), &xi), xi);

        let bg = twin_pair(0.5f64.sinh().powi(2)).unwrap();
        let out = evolve_coherent(&bg, &CoherentVector::new(c(1.0, 0.0), c(0.0, 0.0)));
        assert!(close(out.xi1, c(1.1276260, 0.0), 1e-7));
        assert!(close(out.xi2, c(0.0, 0.5210953), 1e-7));

        let bg = shg_pair(0.5f64.sinh().powi(2)).unwrap();
        let x0 = Complex64::from_polar(1.0, -PI / 4.0);
        let out = evolve_coherent(&bg, &CoherentVector::new(x0, c(0.0, 0.0)));
        let want = 0.5f64.cosh() * x0 + c(0.0, 0.5f64.sinh()) * Complex64::from_polar(1.0, PI / 4.0);
        assert!(close(out.xi1, want, 1e-14));
    }

    #[test]
    fn covariance_examples() {
        assert_eq!(covariance_from_bogoliubov(&BogoliubovPair::identity()), NormalCovariance::zero());

        let p = ProcessParams { g1: c(1.0, 0.0), t: 0.25, ..Default::default() };
        let cov = covariance_from_bogoliubov(&propagate(&p).unwrap());
        let b = cov.b1();
        assert!((b - 0.2715403).abs() < 1e-7);
        assert!(close(cov.c1(), c(0.0, (b * (b + 1.0)).sqrt()), 1e-12));

        let p = ProcessParams { g3: c(1.0, 0.0), t: 0.5, ..Default::default() };
        let cov = covariance_from_bogoliubov(&propagate(&p).unwrap());
        let b = cov.b1();
        assert!((b - 0.5f64.sinh().powi(2)).abs() < 1e-14);
        assert!((cov.b2() - b).abs() < 1e-14);
        assert!(close(cov.d12(), c(0.0, (b * (b + 1.0)).sqrt()), 1e-12));
        assert!(cov.d12_bar().norm() < 1e-15 && cov.c1().norm() < 1e-15 && cov.c2().norm() < 1e-15);
    }

    #[test]
    fn shg_state_examples() {
        let s = shg_state(1.0, 0.0, c(0.0, 0.0)).unwrap();
        assert_eq!(s.cov().b1(), 1.0);
        assert!(close(s.cov().c1(), c(0.0, 2f64.sqrt()), 1e-15));
        assert!(s.validate().is_empty());
        assert_eq!(s.modes(), 1);

        let v = shg_state(0.0, 0.0, c(0.0, 0.0)).unwrap();
        assert_eq!(*v.cov(), NormalCovariance::zero());

        // Stimulation at phase -π/4 is de-amplified along the same direction.
        let x0 = Complex64::from_polar(3.0, -PI / 4.0);
        let s = shg_state(1.0, 0.0, x0).unwrap();
        let direct = evolve_coherent(&shg_pair(1.0).unwrap(), &CoherentVector::new(x0, c(0.0, 0.0)));
        assert_eq!(s.coh().xi1, direct.xi1);
        let r = 1f64.asinh();
        assert!(close(s.coh().xi1, x0 * (r.cosh() - r.sinh()), 1e-14));

        assert!(shg_state(-0.1, 0.0, c(0.0, 0.0)).is_err());
        assert!(shg_state(0.1, -0.1, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn twin_state_examples() {
        let s = twin_state(1.0, 0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!((s.cov().b1(), s.cov().b2()), (1.0, 1.0));
        assert!(close(s.cov().d12(), c(0.0, 2f64.sqrt()), 1e-15));
        assert!(s.validate().is_empty());

        let v = twin_state(0.0, 0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(*v.cov(), NormalCovariance::zero());

        let x0 = Complex64::from_polar(10.0, 3.0 * PI / 4.0);
        let s = twin_state(1.0, 0.0, 0.0, x0, c(0.0, 0.0)).unwrap();
        let r = 1f64.asinh();
        assert!(close(s.coh().xi1, x0 * r.cosh(), 1e-13));
        assert!(close(s.coh().xi2, c(0.0, 10.0 * r.sinh()) * Complex64::from_polar(1.0, -3.0 * PI / 4.0), 1e-13));

        let n = twin_state(1.0, 0.2, 0.3, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((n.cov().b1() - 1.2).abs() < 1e-15 && (n.cov().b2() - 1.3).abs() < 1e-15);
        assert!(twin_state(1.0, -0.2, 0.0, c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn composition_matches_total_time() {
        let base = ProcessParams { g1: c(0.4, 0.1), g2: c(0.2, 0.0), g3: c(0.3, -0.2), alpha: 0.2, ..Default::default() };
        let a = propagate(&ProcessParams { t: 0.7, ..base }).unwrap();
        let b = propagate(&ProcessParams { t: 1.1, ..base }).unwrap();
        let ab = propagate(&ProcessParams { t: 1.8, ..base }).unwrap();
        let comp = a.then(&b);
        let err = (comp.u - ab.u).iter().chain((comp.v - ab.v).iter()).map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }
}
