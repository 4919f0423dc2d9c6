// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Truncated bivariate Taylor series ("jets") in `λ1`, `λ2`.
//!
//! A [`Jet2`] of order `D` stores the coefficients `c_ij` of `λ1^i λ2^j` for
//! every `i + j ≤ D`. Products are Cauchy products restricted to that simplex;
//! `exp`, `sqrt` and `recip` compose their univariate Taylor series around the
//! constant term with the nilpotent remainder.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Default truncation order; enough for `<W1^a W2^b>` with `a + b ≤ 3`.
pub const DEFAULT_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    coeffs: Vec<Complex64>,
}

fn simplex_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![Complex64::new(0.0, 0.0); simplex_len(order)],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = value;
        j
    }

    /// `value + λ_{var+1}`, `var ∈ {0, 1}`.
    pub fn variable(value: Complex64, var: usize, order: usize) -> Self {
        assert!(var < 2, "Jet2 has two variables");
        let mut j = Self::constant(value, order);
        if order >= 1 {
            let (i, k) = if var == 0 { (1, 0) } else { (0, 1) };
            j.set(i, k, Complex64::new(1.0, 0.0));
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + j <= self.order);
        // Rows of constant i, each of length order + 1 - i.
        i * (self.order + 1) - i * i.saturating_sub(1) / 2 + j
    }

    /// Coefficient of `λ1^i λ2^j`; zero outside the simplex.
    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        if i + j > self.order {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[self.index(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(i + j <= self.order, "monomial outside the truncation simplex");
        let k = self.index(i, j);
        self.coeffs[k] = value;
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        (0..=self.order).flat_map(move |i| (0..=self.order - i).map(move |j| ((i, j), self.coeff(i, j))))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Cauchy product truncated at total degree `D`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.order;
        let mut out = Self::zero(d);
        for i1 in 0..=d {
            for j1 in 0..=d - i1 {
                let a = self.coeffs[self.index(i1, j1)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..=d - i1 - j1 {
                    for j2 in 0..=d - i1 - j1 - i2 {
                        let k = out.index(i1 + i2, j1 + j2);
                        out.coeffs[k] += a * other.coeffs[other.index(i2, j2)];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.try_mul(&other.recip()?)
    }

    /// Evaluates `Σ_k a_k h^k` where `h` is `self` without its constant term.
    fn compose(&self, series: &[Complex64]) -> Self {
        let mut h = self.clone();
        h.coeffs[0] = Complex64::new(0.0, 0.0);
        let mut out = Self::constant(series[0], self.order);
        let mut power = Self::constant(Complex64::new(1.0, 0.0), self.order);
        for a in series.iter().skip(1) {
            power = &power * &h;
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += a * p;
            }
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.coeffs[0].exp();
        let mut series = Vec::with_capacity(self.order + 1);
        let mut fact = 1.0;
        for k in 0..=self.order {
            if k > 0 {
                fact *= k as f64;
            }
            series.push(e / fact);
        }
        self.compose(&series)
    }

    pub fn recip(&self) -> Result<Self> {
        let c = self.coeffs[0];
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroConstantTerm("reciprocal"));
        }
        // 1/(c + h) = Σ (-1)^k h^k / c^{k+1}
        let inv = 1.0 / c;
        let mut series = Vec::with_capacity(self.order + 1);
        let mut term = inv;
        for _ in 0..=self.order {
            series.push(term);
            term *= -inv;
        }
        Ok(self.compose(&series))
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Result<Self> {
        let c = self.coeffs[0];
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroConstantTerm("square root"));
        }
        // sqrt(c + h) = sqrt(c) Σ binom(1/2, k) (h/c)^k
        let root = c.sqrt();
        let inv = 1.0 / c;
        let mut series = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0;
        let mut pw = Complex64::new(1.0, 0.0);
        for k in 0..=self.order {
            if k > 0 {
                binom *= (0.5 - (k as f64 - 1.0)) / k as f64;
                pw *= inv;
            }
            series.push(root * binom * pw);
        }
        Ok(self.compose(&series))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<'a> Add for &'a Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &'a Jet2) -> Jet2 {
        self.try_add(rhs).expect("jet order mismatch")
    }
}

impl<'a> Sub for &'a Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &'a Jet2) -> Jet2 {
        self.try_sub(rhs).expect("jet order mismatch")
    }
}

impl<'a> Mul for &'a Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &'a Jet2) -> Jet2 {
        self.try_mul(rhs).expect("jet order mismatch")
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Square matrix of jets, row-major.
pub type JetMatrix = Vec<Vec<Jet2>>;

const PIVOT_TOL: f64 = 1e-300;

/// LU-style elimination with partial pivoting on the constant terms.
/// Returns the reduced upper-triangular rows, the permutation sign and the
/// transformed right-hand side.
fn eliminate(a: &JetMatrix, mut rhs: Option<&mut Vec<Jet2>>) -> Result<(JetMatrix, f64)> {
    let n = a.len();
    let mut m = a.clone();
    let mut sign = 1.0;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|r| (r, m[r][k].constant_term().norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best.is_nan() || best <= PIVOT_TOL {
            return Err(Error::SingularMatrix);
        }
        if p != k {
            m.swap(p, k);
            if let Some(b) = rhs.as_deref_mut() {
                b.swap(p, k);
            }
            sign = -sign;
        }
        let pivot_inv = m[k][k].recip()?;
        for r in k + 1..n {
            let factor = &m[r][k] * &pivot_inv;
            let (top, bottom) = m.split_at_mut(r);
            for (x, p) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                let t = &factor * p;
                *x = &*x - &t;
            }
            if let Some(b) = rhs.as_deref_mut() {
                let t = &factor * &b[k];
                b[r] = &b[r] - &t;
            }
        }
    }
    Ok((m, sign))
}

/// Solves `A x = b` in jet arithmetic.
pub fn jet_linear_solve(a: &JetMatrix, b: &[Jet2]) -> Result<Vec<Jet2>> {
    jet_solve_det(a, b).map(|(x, _)| x)
}

/// Solution of `A x = b` together with `det A`, from one elimination.
pub fn jet_solve_det(a: &JetMatrix, b: &[Jet2]) -> Result<(Vec<Jet2>, Jet2)> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n) && b.len() == n, "dimension mismatch");
    let mut rhs = b.to_vec();
    let (u, sign) = eliminate(a, Some(&mut rhs))?;
    let order = b[0].order();
    let mut x = vec![Jet2::zero(order); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for c in k + 1..n {
            let t = &u[k][c] * &x[c];
            acc = &acc - &t;
        }
        x[k] = acc.try_div(&u[k][k])?;
    }
    Ok((x, upper_det(&u, sign)))
}

fn upper_det(u: &JetMatrix, sign: f64) -> Jet2 {
    let mut det = Jet2::constant(Complex64::new(sign, 0.0), u[0][0].order());
    for (k, row) in u.iter().enumerate() {
        det = &det * &row[k];
    }
    det
}

/// Determinant in jet arithmetic.
pub fn jet_det(a: &JetMatrix) -> Result<Jet2> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n), "matrix must be square");
    let (u, sign) = eliminate(a, None)?;
    Ok(upper_det(&u, sign))
}

/// `A x` in jet arithmetic.
pub fn jet_mat_vec(a: &JetMatrix, x: &[Jet2]) -> Vec<Jet2> {
    a.iter()
        .map(|row| {
            let mut acc = Jet2::zero(x[0].order());
            for (aij, xj) in row.iter().zip(x) {
                let t = aij * xj;
                acc = &acc + &t;
            }
            acc
        })
        .collect()
}
