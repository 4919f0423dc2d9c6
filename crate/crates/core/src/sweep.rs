// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Witness scenarios, grid sweeps, zero contours and figure presets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{shg_state, twin_state};
use crate::moments::{moments_of_order, MomentTable};
use crate::state::GaussianState;
use crate::transforms::{apply, beam_splitter, displace, BeamSplitterParams};
use crate::witnesses::{optimal_phase, witness_r, WitnessReport};
use crate::{Error, Result};

/// Default bound on the number of grid points.
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

/// Absolute bisection tolerance of [`zero_contour`].
pub const CONTOUR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    /// Second-subharmonic generation in mode 1, mixed with mode 2 on the
    /// beam splitter.
    Shg,
    /// Down-conversion twin beam.
    Dc,
}

impl Process {
    pub fn name(self) -> &'static str {
        match self {
            Process::Shg => "shg",
            Process::Dc => "dc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    R1,
    R2,
    M,
    F,
    Ent,
}

impl WitnessKind {
    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::R1 => "R1",
            WitnessKind::R2 => "R2",
            WitnessKind::M => "M",
            WitnessKind::F => "f",
            WitnessKind::Ent => "ent",
        }
    }

    pub fn select(self, r: &WitnessReport) -> Result<f64> {
        match self {
            WitnessKind::R1 => Ok(r.r1),
            WitnessKind::R2 => Ok(r.r2),
            WitnessKind::M => Ok(r.m),
            WitnessKind::F => r.f.ok_or(Error::WitnessUndefined("f")),
            WitnessKind::Ent => r.ent_indicator.map(|e| e.value).ok_or(Error::WitnessUndefined("ent")),
        }
    }
}

impl FromStr for WitnessKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R1" => Ok(WitnessKind::R1),
            "R2" => Ok(WitnessKind::R2),
            "M" => Ok(WitnessKind::M),
            "f" => Ok(WitnessKind::F),
            "ent" => Ok(WitnessKind::Ent),
            _ => Err(Error::InvalidAxis(format!("unknown witness `{s}`"))),
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Stimulating field `ξ(0) = sqrt(mag2) e^{iπ phase_pi}`; the phase is kept
/// in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stimulus {
    pub mag2: f64,
    pub phase_pi: f64,
}

impl Stimulus {
    pub fn new(mag2: f64, phase_pi: f64) -> Self {
        Self { mag2, phase_pi }
    }

    pub fn amplitude(&self) -> Complex64 {
        if self.mag2 == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.mag2.sqrt(), self.phase_pi * PI)
    }
}

/// A scanned parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    /// `B_sq` for SHG, `B_p` for DC.
    Source,
    /// `B_n` for SHG, `B_s` for DC.
    Noise1,
    /// Noise on mode 2 (`B_i` for DC).
    Noise2,
    /// Balanced noise `B_s = B_i`.
    NoiseBalanced,
    Xi1Mag2,
    /// Phase of `ξ1(0)` in units of π.
    Phi1,
    Xi2Mag2,
    Phi2,
    Transmissivity,
    /// Beam-splitter phase in units of π.
    Theta,
}

impl Param {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "b_sq" | "b_p" => Param::Source,
            "bn1" | "bs" => Param::Noise1,
            "bn2" | "bi" => Param::Noise2,
            "bs_bi" => Param::NoiseBalanced,
            "xi1_mag2" => Param::Xi1Mag2,
            "phi1" => Param::Phi1,
            "xi2_mag2" => Param::Xi2Mag2,
            "phi2" => Param::Phi2,
            "T" => Param::Transmissivity,
            "theta" => Param::Theta,
            _ => return Err(Error::InvalidAxis(format!("unknown parameter `{s}`"))),
        })
    }

    /// Canonical file name of the parameter.
    pub fn key(self, process: Process) -> &'static str {
        match (self, process) {
            (Param::Source, Process::Shg) => "b_sq",
            (Param::Source, Process::Dc) => "b_p",
            (Param::Noise1, _) => "bn1",
            (Param::Noise2, _) => "bn2",
            (Param::NoiseBalanced, _) => "bs_bi",
            (Param::Xi1Mag2, _) => "xi1_mag2",
            (Param::Phi1, _) => "phi1",
            (Param::Xi2Mag2, _) => "xi2_mag2",
            (Param::Phi2, _) => "phi2",
            (Param::Transmissivity, _) => "T",
            (Param::Theta, _) => "theta",
        }
    }

    /// Column label in datasets.
    pub fn label(self, process: Process) -> &'static str {
        match (self, process) {
            (Param::Source, Process::Shg) => "B_sq",
            (Param::Source, Process::Dc) => "B_p",
            (Param::Noise1, Process::Shg) => "B_n",
            (Param::Noise1, Process::Dc) => "B_s",
            (Param::Noise2, Process::Shg) => "B_n2",
            (Param::Noise2, Process::Dc) => "B_i",
            (Param::NoiseBalanced, _) => "B_s=B_i",
            (Param::Xi1Mag2, _) => "xi1_mag2",
            (Param::Phi1, _) => "phi1",
            (Param::Xi2Mag2, _) => "xi2_mag2",
            (Param::Phi2, _) => "phi2",
            (Param::Transmissivity, _) => "T",
            (Param::Theta, _) => "theta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub process: Process,
    /// `B_sq` (SHG) or `B_p` (DC).
    pub source: f64,
    pub noise1: f64,
    pub noise2: f64,
    pub xi1: Stimulus,
    pub xi2: Stimulus,
    pub transmissivity: f64,
    /// Beam-splitter phase in units of π.
    pub theta_pi: f64,
    pub witness: WitnessKind,
}

/// A fully evaluated scenario point.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub source: GaussianState,
    pub output: GaussianState,
    pub moments: MomentTable,
    pub report: WitnessReport,
}

impl Scenario {
    pub fn shg(b_sq: f64) -> Self {
        Self {
            process: Process::Shg,
            source: b_sq,
            noise1: 0.0,
            noise2: 0.0,
            xi1: Stimulus::default(),
            xi2: Stimulus::default(),
            transmissivity: 1.0,
            theta_pi: 0.0,
            witness: WitnessKind::R1,
        }
    }

    pub fn dc(b_p: f64) -> Self {
        Self {
            process: Process::Dc,
            witness: WitnessKind::M,
            ..Self::shg(b_p)
        }
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::Source => self.source,
            Param::Noise1 | Param::NoiseBalanced => self.noise1,
            Param::Noise2 => self.noise2,
            Param::Xi1Mag2 => self.xi1.mag2,
            Param::Phi1 => self.xi1.phase_pi,
            Param::Xi2Mag2 => self.xi2.mag2,
            Param::Phi2 => self.xi2.phase_pi,
            Param::Transmissivity => self.transmissivity,
            Param::Theta => self.theta_pi,
        }
    }

    pub fn with(mut self, p: Param, v: f64) -> Self {
        match p {
            Param::Source => self.source = v,
            Param::Noise1 => self.noise1 = v,
            Param::Noise2 => self.noise2 = v,
            Param::NoiseBalanced => {
                self.noise1 = v;
                self.noise2 = v;
            }
            Param::Xi1Mag2 => self.xi1.mag2 = v,
            Param::Phi1 => self.xi1.phase_pi = v,
            Param::Xi2Mag2 => self.xi2.mag2 = v,
            Param::Phi2 => self.xi2.phase_pi = v,
            Param::Transmissivity => self.transmissivity = v,
            Param::Theta => self.theta_pi = v,
        }
        self
    }

    pub fn with_witness(mut self, w: WitnessKind) -> Self {
        self.witness = w;
        self
    }

    /// Range checks shared by every entry point.
    pub fn check(&self) -> Result<()> {
        let nonneg = |name: &'static str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    constraint: "finite and nonnegative",
                    value: v,
                })
            }
        };
        nonneg(Param::Source.key(self.process), self.source)?;
        nonneg("bn1", self.noise1)?;
        nonneg("bn2", self.noise2)?;
        nonneg("xi1.mag2", self.xi1.mag2)?;
        nonneg("xi2.mag2", self.xi2.mag2)?;
        for (name, v) in [("xi1.phase", self.xi1.phase_pi), ("xi2.phase", self.xi2.phase_pi), ("bs.theta", self.theta_pi)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    constraint: "finite",
                    value: v,
                });
            }
        }
        if !(0.0..=1.0).contains(&self.transmissivity) {
            return Err(Error::InvalidParameter {
                name: "bs.T",
                constraint: "in [0, 1]",
                value: self.transmissivity,
            });
        }
        if self.witness == WitnessKind::F && (self.process != Process::Shg || self.transmissivity == 0.0) {
            return Err(Error::WitnessUndefined("f"));
        }
        Ok(())
    }

    /// State produced by the parametric process, before the beam splitter.
    pub fn source_state(&self) -> Result<GaussianState> {
        self.check()?;
        match self.process {
            Process::Shg => {
                let s = shg_state(self.source, self.noise1, self.xi1.amplitude())?;
                let s = displace(&s, Complex64::new(0.0, 0.0), self.xi2.amplitude());
                s.add_noise(0.0, self.noise2)
            }
            Process::Dc => twin_state(
                self.source,
                self.noise1,
                self.noise2,
                self.xi1.amplitude(),
                self.xi2.amplitude(),
            ),
        }
    }

    pub fn beam_splitter(&self) -> BeamSplitterParams {
        BeamSplitterParams::new(self.transmissivity, self.theta_pi * PI)
    }

    /// Evaluates moments and the witness report. `with_ent` additionally
    /// computes `R1` of the source state for the entanglement indicator.
    pub fn evaluate(&self, order: usize, with_ent: bool) -> Result<Evaluation> {
        let source = self.source_state()?;
        let output = apply(&source, &beam_splitter(self.beam_splitter())?);
        let moments = moments_of_order(&output, order)?;
        let t = (self.process == Process::Shg && self.transmissivity > 0.0).then_some(self.transmissivity);
        let source_r1 = if with_ent {
            Some(witness_r(&moments_of_order(&source, order)?, 1)?)
        } else {
            None
        };
        let report = WitnessReport::from_moments(&moments, t, source_r1)?;
        Ok(Evaluation {
            source,
            output,
            moments,
            report,
        })
    }

    pub fn witness_value(&self, kind: WitnessKind, order: usize) -> Result<f64> {
        let e = self.evaluate(order, kind == WitnessKind::Ent)?;
        kind.select(&e.report)
    }

    /// Phase of `ξ1(0)` (radians, in `(-π/2, π/2]`) minimising `kind`.
    pub fn optimal_phase(&self, kind: WitnessKind, grid_points: usize, order: usize) -> Result<f64> {
        if self.xi1.mag2 == 0.0 {
            return Err(Error::DegeneratePhase);
        }
        optimal_phase(
            |phi| self.with(Param::Phi1, phi / PI).witness_value(kind, order),
            grid_points,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: Param, min: f64, max: f64, steps: usize) -> Self {
        Self { param, min, max, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|k| {
                    if k == n - 1 {
                        self.max
                    } else {
                        self.min + (self.max - self.min) * k as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidAxis(format!("axis {:?} has zero steps", self.param)));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidAxis(format!("axis {:?} has a non-finite bound", self.param)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub cap: u64,
    pub order: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_POINT_CAP,
            order: crate::jets::DEFAULT_ORDER,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub scenario: Scenario,
    pub axes: Vec<Axis>,
    pub axis_labels: Vec<String>,
    pub columns: Vec<WitnessKind>,
    /// Grid coordinates per row, row-major over the axes (last axis fastest).
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub negative: Vec<Vec<bool>>,
    pub version: &'static str,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_axes(axes: &[Axis]) -> Result<()> {
    if axes.is_empty() || axes.len() > 3 {
        return Err(Error::InvalidAxis(format!("expected 1 to 3 axes, got {}", axes.len())));
    }
    for (k, a) in axes.iter().enumerate() {
        a.check()?;
        for b in &axes[..k] {
            let clash = a.param == b.param
                || (a.param == Param::NoiseBalanced && matches!(b.param, Param::Noise1 | Param::Noise2))
                || (b.param == Param::NoiseBalanced && matches!(a.param, Param::Noise1 | Param::Noise2));
            if clash {
                return Err(Error::InvalidAxis(format!("axes {:?} and {:?} overlap", b.param, a.param)));
            }
        }
    }
    Ok(())
}

/// Evaluates `columns` at every point of the grid spanned by `axes`.
/// Points are independent and land in slots keyed by their grid index, so
/// the output does not depend on the degree of parallelism.
pub fn grid_sweep(scenario: &Scenario, axes: &[Axis], columns: &[WitnessKind], opts: &SweepOptions) -> Result<SweepResult> {
    check_axes(axes)?;
    if columns.is_empty() {
        return Err(Error::InvalidAxis("no witness columns requested".into()));
    }
    let grids: Vec<Vec<f64>> = axes.iter().map(Axis::values).collect();
    let total: u128 = grids.iter().map(|g| g.len() as u128).product();
    if total > opts.cap as u128 {
        return Err(Error::GridCap { points: total, cap: opts.cap });
    }
    let total = total as usize;
    let with_ent = columns.contains(&WitnessKind::Ent);

    let coords = |mut idx: usize| -> Vec<f64> {
        let mut c = vec![0.0; grids.len()];
        for (k, g) in grids.iter().enumerate().rev() {
            c[k] = g[idx % g.len()];
            idx /= g.len();
        }
        c
    };

    let rows: Vec<Result<(Vec<f64>, Vec<f64>)>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let point = coords(idx);
            let s = axes.iter().zip(&point).fold(*scenario, |s, (a, &v)| s.with(a.param, v));
            let e = s.evaluate(opts.order, with_ent)?;
            let vals = columns.iter().map(|k| k.select(&e.report)).collect::<Result<Vec<_>>>()?;
            Ok((point, vals))
        })
        .collect();

    let mut points = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    let mut negative = Vec::with_capacity(total);
    for r in rows {
        let (p, v) = r?;
        negative.push(v.iter().map(|x| *x < 0.0).collect());
        points.push(p);
        values.push(v);
    }
    Ok(SweepResult {
        scenario: *scenario,
        axes: axes.to_vec(),
        axis_labels: axes.iter().map(|a| a.param.label(scenario.process).to_string()).collect(),
        columns: columns.to_vec(),
        points,
        values,
        negative,
        version: crate::VERSION,
    })
}

/// Root of the selected witness along `param` inside `[lo, hi]`, by
/// bisection to absolute tolerance `tol`.
pub fn zero_contour(scenario: &Scenario, param: Param, lo: f64, hi: f64, tol: f64, order: usize) -> Result<f64> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let g = |x: f64| scenario.with(param, x).witness_value(scenario.witness, order);
    let f_lo = g(lo)?;
    let f_hi = g(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = g(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Named scenario bundle reproducing one phase diagram.
#[derive(Debug, Clone)]
pub struct FigurePreset {
    pub id: &'static str,
    pub description: &'static str,
    pub scenario: Scenario,
    pub axes: Vec<Axis>,
    pub columns: Vec<WitnessKind>,
}

pub const FIGURE_IDS: [&str; 9] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"];

/// Figure presets. Ranges of `|ξ1|²` are not fixed by the diagrams and are
/// chosen to contain the visible features.
pub fn figure_preset(id: &str) -> Option<FigurePreset> {
    let shg = Scenario::shg(0.0);
    let dc = Scenario::dc(1.0);
    let (description, scenario, axes, columns) = match id {
        "fig1" => (
            "squeezed vacuum: f over (B_sq, B_n)",
            shg.with_witness(WitnessKind::F),
            vec![Axis::new(Param::Source, 0.0, 0.4, 201), Axis::new(Param::Noise1, 0.0, 0.1, 201)],
            vec![WitnessKind::F],
        ),
        "fig2" => (
            "stimulated squeezed vacuum, B_sq = 1, B_n = 0: f over (|xi1|^2, phi1)",
            Scenario { source: 1.0, ..shg }.with_witness(WitnessKind::F),
            vec![Axis::new(Param::Xi1Mag2, 0.0, 100.0, 201), Axis::new(Param::Phi1, -1.0, 1.0, 201)],
            vec![WitnessKind::F],
        ),
        "fig3" => (
            "stimulated noisy squeezed vacuum, phi1 = -pi/4: f over (B_sq, B_n, |xi1|^2)",
            Scenario { xi1: Stimulus::new(0.0, -0.25), ..shg }.with_witness(WitnessKind::F),
            vec![
                Axis::new(Param::Source, 0.0, 2.0, 41),
                Axis::new(Param::Noise1, 0.0, 0.5, 41),
                Axis::new(Param::Xi1Mag2, 0.0, 50.0, 41),
            ],
            vec![WitnessKind::F],
        ),
        "fig4" => (
            "stimulated pure twin beam, B_p = 1: M over (T, |xi1|^2, phi1)",
            dc,
            vec![
                Axis::new(Param::Transmissivity, 0.0, 1.0, 41),
                Axis::new(Param::Xi1Mag2, 0.0, 100.0, 41),
                Axis::new(Param::Phi1, 0.0, 2.0, 41),
            ],
            vec![WitnessKind::M],
        ),
        "fig5" => (
            "stimulated pure twin beam, phi1 = 3pi/4: M over (B_p, T, |xi1|^2)",
            Scenario { xi1: Stimulus::new(0.0, 0.75), ..dc },
            vec![
                Axis::new(Param::Source, 0.0, 2.0, 41),
                Axis::new(Param::Transmissivity, 0.0, 1.0, 41),
                Axis::new(Param::Xi1Mag2, 0.0, 100.0, 41),
            ],
            vec![WitnessKind::M],
        ),
        "fig6" => (
            "stimulated pure twin beam, B_p = 1, |xi1|^2 = 100: R1 and R2 over (T, phi1)",
            Scenario { xi1: Stimulus::new(100.0, 0.0), ..dc }.with_witness(WitnessKind::R1),
            vec![Axis::new(Param::Transmissivity, 0.0, 1.0, 201), Axis::new(Param::Phi1, 0.0, 2.0, 201)],
            vec![WitnessKind::R1, WitnessKind::R2],
        ),
        "fig7" => (
            "stimulated twin beam with balanced noise, B_p = 1, phi1 = 3pi/4: M over (B_s = B_i, T, |xi1|^2)",
            Scenario { xi1: Stimulus::new(0.0, 0.75), ..dc },
            vec![
                Axis::new(Param::NoiseBalanced, 0.0, 1.0, 41),
                Axis::new(Param::Transmissivity, 0.0, 1.0, 41),
                Axis::new(Param::Xi1Mag2, 0.0, 1000.0, 41),
            ],
            vec![WitnessKind::M],
        ),
        "fig8" => (
            "stimulated twin beam with unbalanced noise (B_i = 0), B_p = 1, phi1 = 3pi/4: M over (B_s, T, |xi1|^2)",
            Scenario { xi1: Stimulus::new(0.0, 0.75), ..dc },
            vec![
                Axis::new(Param::Noise1, 0.0, 1.0, 41),
                Axis::new(Param::Transmissivity, 0.0, 1.0, 41),
                Axis::new(Param::Xi1Mag2, 0.0, 1000.0, 41),
            ],
            vec![WitnessKind::M],
        ),
        "fig9" => (
            "stimulated twin beam with balanced noise, B_p = 1, phi1 = 3pi/4: R1 over (B_s = B_i, T, |xi1|^2)",
            Scenario { xi1: Stimulus::new(0.0, 0.75), ..dc }.with_witness(WitnessKind::R1),
            vec![
                Axis::new(Param::NoiseBalanced, 0.0, 1.0, 41),
                Axis::new(Param::Transmissivity, 0.0, 1.0, 41),
                Axis::new(Param::Xi1Mag2, 0.0, 1000.0, 41),
            ],
            vec![WitnessKind::R1],
        ),
        _ => return None,
    };
    let id = FIGURE_IDS.into_iter().find(|f| *f == id)?;
    Some(FigurePreset {
        id,
        description,
        scenario,
        axes,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const THRESHOLD: f64 = 0.228_713_553_878_169_05; // (sqrt(33) - 3) / 12

    #[test]
    fn threshold_constant() {
        assert!(((33f64.sqrt() - 3.0) / 12.0 - THRESHOLD).abs() < 1e-16);
        // Same number as 1/4 (sqrt(11/3) - 1).
        assert!((0.25 * ((11.0f64 / 3.0).sqrt() - 1.0) - THRESHOLD).abs() < 1e-15);
    }

    #[test]
    fn single_point_grid_matches_direct() {
        let s = Scenario { xi1: Stimulus::new(4.0, 0.75), transmissivity: 0.6, ..Scenario::dc(0.8) };
        let axes = [Axis::new(Param::Transmissivity, 0.6, 0.9, 1)];
        let r = grid_sweep(&s, &axes, &[WitnessKind::M], &SweepOptions::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.values[0][0], s.witness_value(WitnessKind::M, 3).unwrap());
    }

    #[test]
    fn fig1_surface_negative_below_boundary() {
        let p = figure_preset("fig1").unwrap();
        let axes = [Axis::new(Param::Source, 0.0, 0.4, 21), Axis::new(Param::Noise1, 0.0, 0.1, 11)];
        let r = grid_sweep(&p.scenario, &axes, &p.columns, &SweepOptions::default()).unwrap();
        assert_eq!(r.len(), 231);
        for (pt, neg) in r.points.iter().zip(&r.negative) {
            if pt[1] == 0.0 && pt[0] > 0.0 {
                assert_eq!(neg[0], pt[0] < THRESHOLD, "{pt:?}");
            }
        }
        // Noise pushes f up: at B_sq = 0.1, large B_n is positive.
        let s = p.scenario.with(Param::Source, 0.1).with(Param::Noise1, 0.1);
        assert!(s.witness_value(WitnessKind::F, 3).unwrap() > 0.0);
    }

    #[test]
    fn grid_row_major_order() {
        let s = Scenario::dc(1.0);
        let axes = [Axis::new(Param::Transmissivity, 0.0, 1.0, 3), Axis::new(Param::Xi1Mag2, 0.0, 1.0, 2)];
        let r = grid_sweep(&s, &axes, &[WitnessKind::M], &SweepOptions::default()).unwrap();
        let want: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.0], vec![0.5, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        assert_eq!(r.points, want);
    }

    #[test]
    fn grid_errors() {
        let s = Scenario::dc(1.0);
        let opts = SweepOptions { cap: 10, ..Default::default() };
        let axes = [Axis::new(Param::Transmissivity, 0.0, 1.0, 11)];
        assert!(matches!(grid_sweep(&s, &axes, &[WitnessKind::M], &opts), Err(Error::GridCap { .. })));
        let dup = [Axis::new(Param::Transmissivity, 0.0, 1.0, 2), Axis::new(Param::Transmissivity, 0.0, 1.0, 2)];
        assert!(matches!(grid_sweep(&s, &dup, &[WitnessKind::M], &SweepOptions::default()), Err(Error::InvalidAxis(_))));
        assert!(Param::parse("Bsq").is_err());
    }

    #[test]
    fn sweep_is_deterministic_across_pools() {
        let p = figure_preset("fig6").unwrap();
        let axes = [Axis::new(Param::Transmissivity, 0.0, 1.0, 9), Axis::new(Param::Phi1, 0.0, 2.0, 9)];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| grid_sweep(&p.scenario, &axes, &p.columns, &SweepOptions::default()).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.values, b.values);
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn contour_shg_threshold() {
        let s = Scenario::shg(0.0).with_witness(WitnessKind::F);
        let root = zero_contour(&s, Param::Source, 0.01, 0.4, CONTOUR_TOL, 3).unwrap();
        assert!((root - THRESHOLD).abs() < 1e-8, "{root}");
    }

    #[test]
    fn contour_twin_noise_cutoff() {
        let s = Scenario { xi1: Stimulus::new(1e4, 0.75), ..Scenario::dc(1.0) };
        let root = zero_contour(&s, Param::NoiseBalanced, 0.2, 0.5, CONTOUR_TOL, 3).unwrap();
        // Finite-intensity corrections shift the root slightly off 1/3.
        assert!((root - 1.0 / 3.0).abs() < 1e-3, "{root}");
    }

    #[test]
    fn contour_without_sign_change() {
        let s = Scenario::shg(0.0).with_witness(WitnessKind::F);
        assert!(matches!(zero_contour(&s, Param::Source, 0.3, 0.4, CONTOUR_TOL, 3), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn contour_within_one_grid_cell() {
        let s = Scenario::shg(0.0).with_witness(WitnessKind::F).with(Param::Noise1, 0.01);
        let root = zero_contour(&s, Param::Source, 0.01, 0.4, CONTOUR_TOL, 3).unwrap();
        let axis = Axis::new(Param::Source, 0.0, 0.4, 401);
        let r = grid_sweep(&s, &[axis], &[WitnessKind::F], &SweepOptions::default()).unwrap();
        let flips: Vec<usize> = (1..r.len()).filter(|&k| k > 1 && r.negative[k][0] != r.negative[k - 1][0]).collect();
        assert!(!flips.is_empty());
        let cell = 0.4 / 400.0;
        assert!(flips.iter().any(|&k| (r.points[k][0] - root).abs() <= cell + 1e-12), "{root} {flips:?}");
    }

    #[test]
    fn all_presets_exist() {
        for id in FIGURE_IDS {
            let p = figure_preset(id).unwrap();
            assert_eq!(p.id, id);
            p.scenario.check().unwrap();
            let n: usize = p.axes.iter().map(|a| a.steps).product();
            assert!(n <= 200_000);
        }
        assert!(figure_preset("fig42").is_none());
    }

    #[test]
    fn optimal_phase_degenerate_without_field() {
        let s = Scenario::shg(1.0);
        assert_eq!(s.optimal_phase(WitnessKind::R1, 32, 3), Err(Error::DegeneratePhase));
    }

    #[test]
    fn twin_at_unit_transmissivity_phase_insensitive_m() {
        let s = Scenario { xi1: Stimulus::new(25.0, 0.0), ..Scenario::dc(1.0) };
        let a = s.witness_value(WitnessKind::M, 3).unwrap();
        let b = s.with(Param::Phi1, 0.37).witness_value(WitnessKind::M, 3).unwrap();
        assert!((a - b).abs() <= 1e-9 * a.abs());
    }
}
