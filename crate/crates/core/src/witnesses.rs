// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Intensity-moment nonclassicality witnesses.
//!
//! `R_k = <W_k><W_k³> − <W_k²>²` and `M = <W1²><W2²> − <W1 W2>²` are
//! nonnegative for every classical state, so a negative value certifies
//! nonclassicality. For a squeezed mode mixed with vacuum on a beam splitter
//! `R1 = f T⁴` and `R2 = f (1 − T)⁴`; the shape factor `f` is recovered as
//! `R1 / T⁴`. The entanglement indicator is `R1[T] + R2[T] − R1[1]`.
//!
//! The local identifiers are proportional to `R_k` with a factor of opposite
//! sign; that factor is not modelled here.

use std::f64::consts::PI;

use crate::moments::MomentTable;
use crate::{Error, Result};

/// Relative tolerance for the `R2 / (1 − T)⁴ = R1 / T⁴` consistency check.
pub const FACTORIZATION_TOL: f64 = 1e-9;

/// Absolute tolerance of the golden-section phase refinement (radians).
pub const PHASE_TOL: f64 = 1e-4;

/// Differences below this fraction of their terms are rounding noise and are
/// reported as exactly zero, so identically vanishing witnesses (coherent
/// states, squeezed light on a beam splitter) are never flagged negative.
pub const WITNESS_RESOLUTION: f64 = 1e-13;

fn resolved(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() <= WITNESS_RESOLUTION * (a.abs() + b.abs()) {
        0.0
    } else {
        d
    }
}

pub fn witness_r(m: &MomentTable, mode: usize) -> Result<f64> {
    m.require(3)?;
    let (w1, w2, w3) = match mode {
        1 => (m.get(1, 0), m.get(2, 0), m.get(3, 0)),
        2 => (m.get(0, 1), m.get(0, 2), m.get(0, 3)),
        _ => return Err(Error::InvalidModeCount(mode)),
    };
    Ok(resolved(w1 * w3, w2 * w2))
}

pub fn witness_m(m: &MomentTable) -> Result<f64> {
    m.require(2)?;
    let cross = m.get(1, 1);
    Ok(resolved(m.get(2, 0) * m.get(0, 2), cross * cross))
}

/// `f = R1 / T⁴`, checked against `R2 / (1 − T)⁴` when `T < 1`.
pub fn shape_factor(r1: f64, r2: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::ShapeFactor(format!("needs 0 < T <= 1, got T = {t}")));
    }
    let f1 = r1 / t.powi(4);
    if t < 1.0 {
        let f2 = r2 / (1.0 - t).powi(4);
        let scale = f1.abs().max(f2.abs());
        if (f1 - f2).abs() > FACTORIZATION_TOL * scale + f64::MIN_POSITIVE {
            return Err(Error::Factorization { f1, f2 });
        }
    }
    Ok(f1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementIndicator {
    pub value: f64,
    /// The inference from a positive value needs `R1[T]`, `R2[T]` and `R1[1]`
    /// all negative.
    pub valid: bool,
}

pub fn entanglement_indicator(r1_t: f64, r2_t: f64, r1_1: f64) -> EntanglementIndicator {
    EntanglementIndicator {
        value: r1_t + r2_t - r1_1,
        valid: r1_t < 0.0 && r2_t < 0.0 && r1_1 < 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NegativityFlags {
    pub r1: bool,
    pub r2: bool,
    pub m: bool,
    pub f: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub r1: f64,
    pub r2: f64,
    pub m: f64,
    pub f: Option<f64>,
    pub ent_indicator: Option<EntanglementIndicator>,
    pub flags: NegativityFlags,
}

impl WitnessReport {
    /// `transmissivity` enables `f` (SHG-through-BS scenarios only) and
    /// `source_r1` (the `R1` of the state before the beam splitter) enables the
    /// entanglement indicator.
    pub fn from_moments(m: &MomentTable, transmissivity: Option<f64>, source_r1: Option<f64>) -> Result<Self> {
        let r1 = witness_r(m, 1)?;
        let r2 = witness_r(m, 2)?;
        let mm = witness_m(m)?;
        let f = transmissivity.map(|t| shape_factor(r1, r2, t)).transpose()?;
        let ent_indicator = source_r1.map(|r| entanglement_indicator(r1, r2, r));
        Ok(Self {
            r1,
            r2,
            m: mm,
            f,
            ent_indicator,
            flags: NegativityFlags {
                r1: r1 < 0.0,
                r2: r2 < 0.0,
                m: mm < 0.0,
                f: f.is_some_and(|v| v < 0.0),
            },
        })
    }
}

/// Wraps a phase into `(-π/2, π/2]`.
pub fn wrap_half_period(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(PI);
    if p > PI / 2.0 {
        p -= PI;
    }
    p
}

/// Minimises a π-periodic `objective(φ)` over a uniform grid on
/// `(-π/2, π/2]`, then refines around the best grid point by golden-section
/// search. The result is reported in `(-π/2, π/2]`.
pub fn optimal_phase<F>(objective: F, grid_points: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let n = grid_points.max(8);
    let step = PI / n as f64;
    let grid: Vec<f64> = (0..n).map(|k| -PI / 2.0 + (k as f64 + 1.0) * step).collect();
    let values = grid.iter().map(|&p| objective(p)).collect::<Result<Vec<_>>>()?;

    let (lo_v, hi_v) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !lo_v.is_finite() || !hi_v.is_finite() {
        return Err(Error::NonFinite("witness during phase scan".into()));
    }
    let scale = lo_v.abs().max(hi_v.abs()).max(f64::MIN_POSITIVE);
    if hi_v - lo_v <= 1e-12 * scale {
        return Err(Error::DegeneratePhase);
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);

    let mut a = grid[best] - step;
    let mut b = grid[best] + step;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    while b - a > PHASE_TOL * 1e-2 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d)?;
        }
    }
    Ok(wrap_half_period(0.5 * (a + b)))
}
