// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Integrated-intensity moments `<W1^a W2^b>` (normally ordered).
//!
//! The primary route differentiates the normal generating function
//! `G_N(λ1, λ2) = exp(-½ Ξ† Ã⁻¹ Λ Ξ) / sqrt(det Ã)`, `Ã = Λ A_N + 1`,
//! `Λ = diag(λ1, λ1, λ2, λ2)`, in jet arithmetic. [`wick_moment`] is an
//! independent oracle that expands the normally ordered operator product by
//! Wick pairing.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::jets::{jet_solve_det, Jet2, JetMatrix, DEFAULT_ORDER};
use crate::state::GaussianState;
use crate::{Error, Result};

/// Largest `k1 + k2` accepted by [`wick_moment`].
pub const WICK_ORDER_LIMIT: usize = 6;

/// Relative bound on the imaginary part of a moment.
pub const IMAG_RESIDUAL_TOL: f64 = 1e-10;

/// Jet of `G_N` at the origin, truncated at total degree `order`.
pub fn generating_jet(state: &GaussianState, order: usize) -> Result<Jet2> {
    let a = state.cov().matrix();
    let xi = state.coh().doubled();
    let lambda = [0usize, 0, 1, 1].map(|v| Jet2::variable(Complex64::new(0.0, 0.0), v, order));
    let one = Jet2::constant(Complex64::new(1.0, 0.0), order);

    let a_tilde: JetMatrix = (0..4)
        .map(|i| {
            (0..4)
                .map(|k| {
                    let e = lambda[i].scale(a[(i, k)]);
                    if i == k {
                        &e + &one
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Jet2> = (0..4).map(|i| lambda[i].scale(xi[i])).collect();

    let (x, det) = jet_solve_det(&a_tilde, &rhs)?;
    let mut quad = Jet2::zero(order);
    for (i, xi_jet) in x.iter().enumerate() {
        quad = &quad + &xi_jet.scale(xi[i].conj());
    }
    let expo = quad.scale(Complex64::new(-0.5, 0.0)).exp();
    let norm = det.sqrt()?.recip()?;
    Ok(&expo * &norm)
}

/// Real moments `m[a][b] = <W1^a W2^b>` for `a + b ≤ order`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    order: usize,
    values: Vec<Vec<f64>>,
    max_imag_residual: f64,
}

impl MomentTable {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `<W1^a W2^b>`. Panics outside the table.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        assert!(a + b <= self.order, "moment <W1^{a} W2^{b}> outside the table");
        self.values[a][b]
    }

    pub fn require(&self, need: usize) -> Result<()> {
        if self.order >= need {
            Ok(())
        } else {
            Err(Error::MomentOrder { have: self.order, need })
        }
    }

    /// Largest `|Im m| / max(1, |Re m|)` seen while extracting the table.
    pub fn max_imag_residual(&self) -> f64 {
        self.max_imag_residual
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        (0..=self.order).flat_map(move |a| (0..=self.order - a).map(move |b| ((a, b), self.values[a][b])))
    }
}

/// Moments to third order.
pub fn moments_of(state: &GaussianState) -> Result<MomentTable> {
    moments_of_order(state, DEFAULT_ORDER)
}

/// Moments to a configurable total order:
/// `m[a][b] = (-1)^{a+b} a! b! [λ1^a λ2^b] G_N`.
pub fn moments_of_order(state: &GaussianState, order: usize) -> Result<MomentTable> {
    let g = generating_jet(state, order)?;
    let mut values = vec![vec![0.0; order + 1]; order + 1];
    let mut max_res: f64 = 0.0;
    for ((a, b), c) in g.coeffs() {
        let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
        let m = c * (sign * factorial(a) * factorial(b));
        if !m.re.is_finite() || !m.im.is_finite() {
            return Err(Error::NonFinite(format!("moment <W1^{a} W2^{b}>")));
        }
        let residual = m.im.abs() / m.re.abs().max(1.0);
        if residual > IMAG_RESIDUAL_TOL {
            return Err(Error::ImaginaryResidual { a, b, residual });
        }
        max_res = max_res.max(residual);
        values[a][b] = m.re;
    }
    values[0][0] = 1.0;
    Ok(MomentTable {
        order,
        values,
        max_imag_residual: max_res,
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// A boson operator of mode 0 or 1 inside a normally ordered product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn a(mode: usize) -> Self {
        Self { mode, dagger: false }
    }

    pub fn a_dag(mode: usize) -> Self {
        Self { mode, dagger: true }
    }
}

/// `<:x y:>` fluctuation contraction read from the named covariance entries.
fn contraction(state: &GaussianState, x: Ladder, y: Ladder) -> Complex64 {
    let cov = state.cov();
    let (x, y) = if x.mode <= y.mode { (x, y) } else { (y, x) };
    match (x.mode, x.dagger, y.mode, y.dagger) {
        (0, false, 0, true) | (0, true, 0, false) => cov.b1().into(),
        (1, false, 1, true) | (1, true, 1, false) => cov.b2().into(),
        (0, false, 0, false) => cov.c1(),
        (0, true, 0, true) => cov.c1().conj(),
        (1, false, 1, false) => cov.c2(),
        (1, true, 1, true) => cov.c2().conj(),
        // <a1 a2> and <a1† a2†>
        (0, false, 1, false) => cov.d12(),
        (0, true, 1, true) => cov.d12().conj(),
        // <a1† a2> and <a2† a1>
        (0, true, 1, false) => cov.d12_bar(),
        (0, false, 1, true) => cov.d12_bar().conj(),
        _ => unreachable!("modes are 0 or 1"),
    }
}

fn mean(state: &GaussianState, x: Ladder) -> Complex64 {
    let xi = if x.mode == 0 { state.coh().xi1 } else { state.coh().xi2 };
    if x.dagger {
        xi.conj()
    } else {
        xi
    }
}

/// `<: Π ops :>` for a Gaussian state: every factor is either replaced by its
/// mean or paired with a later factor, summed over all such assignments.
pub fn wick_normal_expectation(state: &GaussianState, ops: &[Ladder]) -> Complex64 {
    fn rec(state: &GaussianState, ops: &mut Vec<Ladder>) -> Complex64 {
        let Some(first) = ops.pop() else {
            return Complex64::new(1.0, 0.0);
        };
        let mut total = mean(state, first) * rec(state, ops);
        for k in 0..ops.len() {
            let partner = ops.remove(k);
            total += contraction(state, first, partner) * rec(state, ops);
            ops.insert(k, partner);
        }
        ops.push(first);
        total
    }
    let mut v = ops.to_vec();
    rec(state, &mut v)
}

/// `<:W1^k1 W2^k2:>` by Wick pairing.
pub fn wick_moment(state: &GaussianState, k1: usize, k2: usize) -> Result<f64> {
    if k1 + k2 > WICK_ORDER_LIMIT {
        return Err(Error::OrderGuard {
            requested: k1 + k2,
            limit: WICK_ORDER_LIMIT,
        });
    }
    let mut ops = Vec::with_capacity(2 * (k1 + k2));
    ops.extend(std::iter::repeat_n(Ladder::a_dag(0), k1));
    ops.extend(std::iter::repeat_n(Ladder::a_dag(1), k2));
    ops.extend(std::iter::repeat_n(Ladder::a(0), k1));
    ops.extend(std::iter::repeat_n(Ladder::a(1), k2));
    let v = wick_normal_expectation(state, &ops);
    let residual = v.im.abs() / v.re.abs().max(1.0);
    if residual > IMAG_RESIDUAL_TOL {
        return Err(Error::ImaginaryResidual { a: k1, b: k2, residual });
    }
    Ok(v.re)
}

/// Sample means of `W1^a W2^b` with their standard errors.
#[derive(Debug, Clone)]
pub struct MonteCarloMoments {
    pub order: usize,
    pub samples: usize,
    pub mean: Vec<Vec<f64>>,
    pub std_err: Vec<Vec<f64>>,
}

/// Estimates the moments of a classical state by sampling its Gaussian
/// Glauber–Sudarshan distribution. Deterministic for a given seed.
pub fn monte_carlo_moments(state: &GaussianState, order: usize, samples: usize, seed: u64) -> Result<MonteCarloMoments> {
    // V = J x with x = (Re α1, Im α1, Re α2, Im α2); A_N = J Σ J†.
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, -0.5);
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let j_inv = Matrix4::new(
        h,  h,   z,  z,
        ih, -ih, z,  z,
        z,  z,   h,  h,
        z,  z,   ih, -ih,
    );
    let sigma_c = j_inv * state.cov().matrix() * j_inv.adjoint();
    let sigma = sigma_c.map(|c| c.re);
    let sigma = 0.5 * (sigma + sigma.transpose());
    let eig = SymmetricEigen::new(sigma);
    let min = eig.eigenvalues.min();
    let scale = eig.eigenvalues.amax().max(1.0);
    if min < -1e-12 * scale {
        return Err(Error::NotClassical(min));
    }
    let root = eig.eigenvectors * nalgebra::Matrix4::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    let xi = state.coh();
    let mean_x = Vector4::new(xi.xi1.re, xi.xi1.im, xi.xi2.re, xi.xi2.im);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = order + 1;
    let mut sum = vec![vec![0.0; n]; n];
    let mut sum2 = vec![vec![0.0; n]; n];
    for _ in 0..samples {
        let g = Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
        let x = mean_x + root * g;
        let w1 = x[0] * x[0] + x[1] * x[1];
        let w2 = x[2] * x[2] + x[3] * x[3];
        for a in 0..=order {
            for b in 0..=order - a {
                let v = w1.powi(a as i32) * w2.powi(b as i32);
                sum[a][b] += v;
                sum2[a][b] += v * v;
            }
        }
    }
    let nf = samples as f64;
    let mut mean = vec![vec![0.0; n]; n];
    let mut std_err = vec![vec![0.0; n]; n];
    for a in 0..=order {
        for b in 0..=order - a {
            let m = sum[a][b] / nf;
            let var = (sum2[a][b] / nf - m * m).max(0.0) * nf / (nf - 1.0).max(1.0);
            mean[a][b] = m;
            std_err[a][b] = (var / nf).sqrt();
        }
    }
    Ok(MonteCarloMoments {
        order,
        samples,
        mean,
        std_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{shg_state, twin_state};
    use crate::state::{CoherentVector, NormalCovariance};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn thermal(b: f64) -> GaussianState {
        let cov = NormalCovariance::from_parts(b, 0.0, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        GaussianState::from_parts(cov, CoherentVector::default(), 1).unwrap()
    }

    fn coherent(x: Complex64) -> GaussianState {
        GaussianState::vacuum(1).unwrap().with_coh(CoherentVector::new(x, c(0.0, 0.0)))
    }

    #[test]
    fn vacuum_generating_jet_is_one() {
        let g = generating_jet(&GaussianState::vacuum(2).unwrap(), 3).unwrap();
        assert_eq!(g, Jet2::constant(c(1.0, 0.0), 3));
    }

    #[test]
    fn coherent_generating_jet() {
        // |ξ|² = 2: exp(-2 λ1) = 1 - 2λ1 + 2λ1² - 4/3 λ1³.
        let g = generating_jet(&coherent(c(1.0, 1.0)), 3).unwrap();
        for (k, want) in [1.0, -2.0, 2.0, -4.0 / 3.0].iter().enumerate() {
            assert!((g.coeff(k, 0) - c(*want, 0.0)).norm() < 1e-14, "k={k}");
        }
        assert!(g.coeff(0, 1).norm() < 1e-15);
    }

    #[test]
    fn thermal_generating_jet() {
        let b = 0.7;
        let g = generating_jet(&thermal(b), 3).unwrap();
        for k in 0..=3 {
            assert!((g.coeff(k, 0) - c((-b).powi(k as i32), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn thermal_moments_are_factorial() {
        let m = moments_of(&thermal(1.0)).unwrap();
        assert!((m.get(1, 0) - 1.0).abs() < 1e-14);
        assert!((m.get(2, 0) - 2.0).abs() < 1e-14);
        assert!((m.get(3, 0) - 6.0).abs() < 1e-13);
        assert_eq!(m.get(0, 0), 1.0);
    }

    #[test]
    fn squeezed_vacuum_moments() {
        let s = shg_state(0.1, 0.0, c(0.0, 0.0)).unwrap();
        let m = moments_of(&s).unwrap();
        assert!((m.get(1, 0) - 0.1).abs() < 1e-15);
        assert!((m.get(2, 0) - 0.13).abs() < 1e-15);
        assert!((m.get(3, 0) - 0.105).abs() < 1e-15);
        assert!((wick_moment(&s, 3, 0).unwrap() - 0.105).abs() < 1e-15);
        assert!((wick_moment(&s, 2, 0).unwrap() - 0.13).abs() < 1e-15);
    }

    #[test]
    fn coherent_moments_are_powers() {
        let m = moments_of(&coherent(c(1.0, 1.0))).unwrap();
        for k in 1..=3 {
            assert!((m.get(k, 0) - 2f64.powi(k as i32)).abs() < 1e-13);
        }
    }

    #[test]
    fn twin_cross_moment() {
        let s = twin_state(1.0, 0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((wick_moment(&s, 1, 1).unwrap() - 3.0).abs() < 1e-14);
        assert!((moments_of(&s).unwrap().get(1, 1) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_wick_moments_vanish() {
        let v = GaussianState::vacuum(2).unwrap();
        for (a, b) in [(1, 0), (0, 2), (2, 1), (3, 3)] {
            assert_eq!(wick_moment(&v, a, b).unwrap(), 0.0);
        }
        assert_eq!(wick_moment(&v, 0, 0).unwrap(), 1.0);
    }

    #[test]
    fn wick_order_guard() {
        let v = GaussianState::vacuum(2).unwrap();
        assert_eq!(wick_moment(&v, 4, 3), Err(Error::OrderGuard { requested: 7, limit: 6 }));
    }

    #[test]
    fn higher_order_table() {
        let m = moments_of_order(&thermal(0.5), 5).unwrap();
        assert_eq!(m.order(), 5);
        // n! B^n
        assert!((m.get(5, 0) - 120.0 * 0.5f64.powi(5)).abs() < 1e-12);
        assert!(m.require(6).is_err());
    }

    #[test]
    fn monte_carlo_thermal_coherent() {
        let cov = NormalCovariance::from_parts(0.8, 0.3, c(0.2, 0.1), c(0.0, 0.0), c(0.05, 0.0), c(0.1, -0.05));
        let s = GaussianState::from_parts(cov, CoherentVector::new(c(1.0, 0.5), c(-0.3, 0.2)), 2).unwrap();
        let exact = moments_of(&s).unwrap();
        let mc = monte_carlo_moments(&s, 3, 200_000, 7).unwrap();
        for ((a, b), v) in exact.entries() {
            let err = (mc.mean[a][b] - v).abs();
            assert!(err <= 5.0 * mc.std_err[a][b] + 1e-12, "({a},{b}) {} vs {v}", mc.mean[a][b]);
        }
        // Same seed, same numbers.
        let again = monte_carlo_moments(&s, 3, 1000, 7).unwrap();
        let first = monte_carlo_moments(&s, 3, 1000, 7).unwrap();
        assert_eq!(again.mean, first.mean);
    }

    #[test]
    fn monte_carlo_rejects_squeezed() {
        let s = shg_state(0.5, 0.0, c(0.0, 0.0)).unwrap();
        assert!(matches!(monte_carlo_moments(&s, 3, 10, 1), Err(Error::NotClassical(_))));
    }
}
