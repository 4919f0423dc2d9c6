// Copyright 2026 gausswit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: scenario files, reports, CSV datasets.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{shg_state, twin_state};
use crate::jets::DEFAULT_ORDER;
use crate::moments::{moments_of_order, monte_carlo_moments, wick_moment};
use crate::state::GaussianState;
use crate::sweep::{
    figure_preset, grid_sweep, zero_contour, Axis, Param, Process, Scenario, Stimulus, SweepOptions, SweepResult,
    WitnessKind, CONTOUR_TOL, FIGURE_IDS,
};
use crate::transforms::{apply, beam_splitter, displace, phase_shift, BeamSplitterParams};
use crate::{Complex64, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_NO_SIGN_CHANGE: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(Error::NoSignChange { .. }) => EXIT_NO_SIGN_CHANGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(e) => write!(f, "numeric error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKey {
    Shg,
    Dc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StimulusFile {
    pub mag2: f64,
    /// Units of π.
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitterFile {
    #[serde(rename = "T")]
    pub t: f64,
    /// Units of π.
    #[serde(default)]
    pub theta: f64,
}

/// `bs` is either the signal noise of a twin beam (a number) or the beam
/// splitter (an object).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BsField {
    Noise(f64),
    Splitter(SplitterFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisFile {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub axes: Vec<AxisFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub process: ProcessKey,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_sq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bn1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bn2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bs: Option<BsField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi1: Option<StimulusFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi2: Option<StimulusFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepFile>,
}

/// A validated scenario with its optional sweep axes.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub axes: Vec<Axis>,
}

fn pick(key_a: &str, a: Option<f64>, key_b: &str, b: Option<f64>) -> CliResult<Option<f64>> {
    match (a, b) {
        (Some(_), Some(_)) => Err(CliError::Config(format!("keys `{key_a}` and `{key_b}` are aliases; give only one"))),
        (x, None) | (None, x) => Ok(x),
    }
}

impl ScenarioFile {
    pub fn into_loaded(self) -> CliResult<LoadedScenario> {
        let process = match self.process {
            ProcessKey::Shg => Process::Shg,
            ProcessKey::Dc => Process::Dc,
        };
        let (src_key, other_key, source, other) = match process {
            Process::Shg => ("b_sq", "b_p", self.b_sq, self.b_p),
            Process::Dc => ("b_p", "b_sq", self.b_p, self.b_sq),
        };
        if other.is_some() {
            return Err(CliError::Config(format!("key `{other_key}` does not apply to process `{}`", process.name())));
        }
        let source = source.ok_or_else(|| CliError::Config(format!("missing key `{src_key}`")))?;

        let (bs_noise, splitter) = match self.bs {
            Some(BsField::Noise(v)) => (Some(v), None),
            Some(BsField::Splitter(s)) => (None, Some(s)),
            None => (None, None),
        };
        let noise1 = pick("bn1", self.bn1, "bs", bs_noise)?.unwrap_or(0.0);
        let noise2 = pick("bn2", self.bn2, "bi", self.bi)?.unwrap_or(0.0);
        let splitter = splitter.unwrap_or(SplitterFile { t: 1.0, theta: 0.0 });
        let stim = |s: Option<StimulusFile>| s.map(|s| Stimulus::new(s.mag2, s.phase)).unwrap_or_default();
        let witness = match self.witness.as_deref() {
            Some(w) => w.parse::<WitnessKind>().map_err(|_| CliError::Config(format!("key `witness`: unknown witness `{w}`")))?,
            None => match process {
                Process::Shg => WitnessKind::R1,
                Process::Dc => WitnessKind::M,
            },
        };
        let scenario = Scenario {
            process,
            source,
            noise1,
            noise2,
            xi1: stim(self.xi1),
            xi2: stim(self.xi2),
            transmissivity: splitter.t,
            theta_pi: splitter.theta,
            witness,
        };
        scenario.check().map_err(|e| CliError::Config(format!("{e}")))?;

        let axes = match self.sweep {
            None => Vec::new(),
            Some(sw) => sw
                .axes
                .into_iter()
                .map(|a| {
                    let param = Param::parse(&a.param).map_err(|e| CliError::Config(format!("key `sweep.axes.param`: {e}")))?;
                    if a.steps == 0 {
                        return Err(CliError::Config(format!("key `sweep.axes.steps` must be positive for `{}`", a.param)));
                    }
                    if !a.min.is_finite() || !a.max.is_finite() {
                        return Err(CliError::Config(format!("keys `sweep.axes.min/max` must be finite for `{}`", a.param)));
                    }
                    for v in [a.min, a.max] {
                        scenario
                            .with(param, v)
                            .check()
                            .map_err(|e| CliError::Config(format!("key `sweep.axes` ({}): {e}", a.param)))?;
                    }
                    Ok(Axis::new(param, a.min, a.max, a.steps))
                })
                .collect::<CliResult<Vec<_>>>()?,
        };
        Ok(LoadedScenario { scenario, axes })
    }

    /// Canonical file for a scenario.
    pub fn from_loaded(l: &LoadedScenario) -> Self {
        let s = &l.scenario;
        let (b_sq, b_p) = match s.process {
            Process::Shg => (Some(s.source), None),
            Process::Dc => (None, Some(s.source)),
        };
        let stim = |x: Stimulus| StimulusFile {
            mag2: x.mag2,
            phase: x.phase_pi,
        };
        ScenarioFile {
            process: match s.process {
                Process::Shg => ProcessKey::Shg,
                Process::Dc => ProcessKey::Dc,
            },
            b_sq,
            b_p,
            bn1: Some(s.noise1),
            bn2: Some(s.noise2),
            bi: None,
            bs: Some(BsField::Splitter(SplitterFile {
                t: s.transmissivity,
                theta: s.theta_pi,
            })),
            xi1: Some(stim(s.xi1)),
            xi2: Some(stim(s.xi2)),
            witness: Some(s.witness.name().to_string()),
            sweep: (!l.axes.is_empty()).then(|| SweepFile {
                axes: l
                    .axes
                    .iter()
                    .map(|a| AxisFile {
                        param: a.param.key(s.process).to_string(),
                        min: a.min,
                        max: a.max,
                        steps: a.steps,
                    })
                    .collect(),
            }),
        }
    }
}

pub fn parse_scenario(text: &str) -> CliResult<LoadedScenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(config)?;
    file.into_loaded()
}

pub fn load_scenario(path: &Path) -> CliResult<LoadedScenario> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text)
}

pub fn echo_scenario(l: &LoadedScenario) -> String {
    serde_json::to_string_pretty(&ScenarioFile::from_loaded(l)).expect("scenario serializes")
}

/// Writes a sweep as CSV with 9 significant digits per value.
pub fn write_csv<W: Write>(out: &mut W, r: &SweepResult) -> io::Result<()> {
    let header: Vec<&str> = r
        .axis_labels
        .iter()
        .map(String::as_str)
        .chain(r.columns.iter().map(|c| c.name()))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for (p, v) in r.points.iter().zip(&r.values) {
        line.clear();
        for (k, x) in p.iter().chain(v).enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&format!("{x:.8e}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_csv_file(path: &Path, r: &SweepResult) -> CliResult<()> {
    let f = fs::File::create(path).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(f);
    write_csv(&mut w, r)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Parser)]
#[command(name = "gausswit", version, about = "Gaussian two-mode states and intensity-moment nonclassicality witnesses")]
pub struct Cli {
    /// Jet truncation order for moments.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Seed of the Monte Carlo moment check.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Bisection tolerance for contours and the selftest threshold.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one scenario and print moments and witnesses.
    Run {
        file: PathBuf,
        /// Print the canonical scenario file instead of evaluating it.
        #[arg(long)]
        echo: bool,
    },
    /// Evaluate the scenario's sweep axes and write a CSV.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Locate the zero of the scenario's witness along one parameter.
    Contour {
        file: PathBuf,
        #[arg(long)]
        axis: String,
        /// `lo,hi`.
        #[arg(long, allow_hyphen_values = true)]
        bracket: String,
    },
    /// Write the dataset of a figure preset.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(FIGURE_IDS))]
        id: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check jet moments against the Wick oracle and closed forms.
    Selftest,
}

/// Parses arguments, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let result = pool.install(|| {
        let mut out = io::stdout().lock();
        let r = dispatch(&cli, &mut out);
        let _ = out.flush();
        r
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> CliResult<i32> {
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Config(format!("--tolerance must be positive, got {t}")));
        }
    }
    let io_err = |e: io::Error| CliError::Config(format!("cannot write output: {e}"));
    match &cli.command {
        Command::Run { file, echo } => {
            let l = load_scenario(file)?;
            if *echo {
                writeln!(out, "{}", echo_scenario(&l)).map_err(io_err)?;
            } else {
                run_report(out, &l.scenario, cli.order, cli.seed).map_err(|e| match e {
                    ReportError::Io(e) => io_err(e),
                    ReportError::Numeric(e) => CliError::Numeric(e),
                })?;
            }
        }
        Command::Sweep { file, out: path } => {
            let l = load_scenario(file)?;
            if l.axes.is_empty() {
                return Err(CliError::Config("key `sweep` is required for the sweep command".into()));
            }
            let opts = SweepOptions {
                order: cli.order,
                ..Default::default()
            };
            let r = grid_sweep(&l.scenario, &l.axes, &[l.scenario.witness], &opts).map_err(|e| match e {
                Error::InvalidAxis(_) | Error::GridCap { .. } => CliError::Config(format!("key `sweep`: {e}")),
                e => CliError::Numeric(e),
            })?;
            write_csv_file(path, &r)?;
            writeln!(out, "wrote {} rows to {}", r.len(), path.display()).map_err(io_err)?;
        }
        Command::Contour { file, axis, bracket } => {
            let l = load_scenario(file)?;
            let param = Param::parse(axis).map_err(|e| CliError::Config(format!("--axis: {e}")))?;
            let (lo, hi) = parse_bracket(bracket)?;
            for v in [lo, hi] {
                l.scenario
                    .with(param, v)
                    .check()
                    .map_err(|e| CliError::Config(format!("--bracket: {e}")))?;
            }
            let tol = cli.tolerance.unwrap_or(CONTOUR_TOL);
            let root = zero_contour(&l.scenario, param, lo, hi, tol, cli.order)?;
            writeln!(out, "{} = {root:.11e}", param.key(l.scenario.process)).map_err(io_err)?;
        }
        Command::Figure { id, out: path } => {
            let p = figure_preset(id).ok_or_else(|| CliError::Config(format!("unknown preset `{id}`")))?;
            let opts = SweepOptions {
                order: cli.order,
                ..Default::default()
            };
            let r = grid_sweep(&p.scenario, &p.axes, &p.columns, &opts)?;
            write_csv_file(path, &r)?;
            writeln!(out, "{}: {} ({} rows) -> {}", p.id, p.description, r.len(), path.display()).map_err(io_err)?;
        }
        Command::Selftest => {
            let tol = cli.tolerance.unwrap_or(1e-8);
            let ok = selftest(out, cli.seed.unwrap_or(1), tol).map_err(io_err)?;
            return Ok(if ok { EXIT_OK } else { EXIT_NUMERIC });
        }
    }
    Ok(EXIT_OK)
}

fn parse_bracket(text: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Config(format!("--bracket expects lo,hi, got `{text}`"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    Ok((lo, hi))
}

enum ReportError {
    Io(io::Error),
    Numeric(Error),
}

impl From<io::Error> for ReportError {
    fn from(e: io::Error) -> Self {
        ReportError::Io(e)
    }
}

impl From<Error> for ReportError {
    fn from(e: Error) -> Self {
        ReportError::Numeric(e)
    }
}

fn run_report<W: Write>(out: &mut W, s: &Scenario, order: usize, seed: Option<u64>) -> Result<(), ReportError> {
    let e = s.evaluate(order, true)?;
    let (n1, n2) = e.output.mean_photons();
    writeln!(out, "process = {}", s.process.name())?;
    writeln!(out, "witness = {}", s.witness.name())?;
    writeln!(out, "mean photons = {n1:.11e}, {n2:.11e}")?;
    writeln!(out, "moments <W1^a W2^b>:")?;
    for ((a, b), v) in e.moments.entries() {
        writeln!(out, "  {a} {b} {v:.11e}")?;
    }
    let r = &e.report;
    writeln!(out, "R1 = {:.11e}", r.r1)?;
    writeln!(out, "R2 = {:.11e}", r.r2)?;
    writeln!(out, "M = {:.11e}", r.m)?;
    if let Some(f) = r.f {
        writeln!(out, "f = {f:.11e}")?;
    }
    if let Some(ent) = r.ent_indicator {
        writeln!(out, "ent = {:.11e} (valid = {})", ent.value, ent.valid)?;
    }
    let sel = s.witness.select(r)?;
    writeln!(out, "selected {} = {sel:.11e} ({})", s.witness.name(), if sel < 0.0 { "nonclassical" } else { "not negative" })?;
    if let Some(seed) = seed {
        match monte_carlo_moments(&e.output, order, 100_000, seed) {
            Ok(mc) => {
                writeln!(out, "monte carlo (seed {seed}, {} samples):", mc.samples)?;
                for a in 0..=order {
                    for b in 0..=order - a {
                        writeln!(out, "  {a} {b} {:.6e} +- {:.1e}", mc.mean[a][b], mc.std_err[a][b])?;
                    }
                }
            }
            Err(Error::NotClassical(_)) => writeln!(out, "monte carlo: skipped, state has no classical sampler")?,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn random_state(rng: &mut ChaCha8Rng) -> GaussianState {
    let mut amp = |scale: f64| Complex64::from_polar(scale * rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>());
    let (x1, x2) = (amp(2.0), amp(2.0));
    let base = if rng.random::<bool>() {
        shg_state(2.0 * rng.random::<f64>(), 0.5 * rng.random::<f64>(), x1).and_then(|s| s.add_noise(0.0, 0.5 * rng.random::<f64>()))
    } else {
        twin_state(2.0 * rng.random::<f64>(), 0.5 * rng.random::<f64>(), 0.5 * rng.random::<f64>(), x1, x2)
    }
    .expect("parameters in range");
    let bs = beam_splitter(BeamSplitterParams::new(rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>()))
        .expect("parameters in range");
    let s = apply(&base, &bs);
    let s = apply(&s, &phase_shift(rng.random::<f64>() * 6.0, rng.random::<f64>() * 6.0));
    let d = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    displace(&s, d, Complex64::new(0.0, 0.0))
}

/// Oracle-equivalence suite. Returns whether every check passed.
pub fn selftest<W: Write>(out: &mut W, seed: u64, tol: f64) -> io::Result<bool> {
    let mut all = true;
    let mut report = |out: &mut W, name: &str, worst: f64, limit: f64| -> io::Result<()> {
        let ok = worst.is_finite() && worst <= limit;
        all &= ok;
        writeln!(out, "{} {name}: worst {worst:.3e} (limit {limit:.1e})", if ok { "PASS" } else { "FAIL" })
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let s = random_state(&mut rng);
        let m = match moments_of_order(&s, 3) {
            Ok(m) => m,
            Err(_) => {
                worst = f64::INFINITY;
                continue;
            }
        };
        for a in 0..=3 {
            for b in 0..=3 - a {
                let w = wick_moment(&s, a, b).unwrap_or(f64::NAN);
                let rel = (m.get(a, b) - w).abs() / w.abs().max(1e-300);
                worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
            }
        }
    }
    report(out, "jet moments vs Wick pairings (200 states)", worst, tol)?;

    let witness = |s: Scenario, k: WitnessKind| s.witness_value(k, DEFAULT_ORDER).unwrap_or(f64::NAN);
    let thermal = Scenario {
        noise1: 1.0,
        ..Scenario::shg(0.0)
    };
    report(out, "thermal R1 = 2", (witness(thermal, WitnessKind::R1) - 2.0).abs(), 1e-12)?;
    let twin = Scenario::dc(1.0);
    report(out, "twin beam M = -5", (witness(twin, WitnessKind::M) + 5.0).abs(), 1e-10)?;
    let sq = Scenario::shg(0.1);
    report(out, "squeezed vacuum R1 = -0.0064", (witness(sq, WitnessKind::R1) + 0.0064).abs(), 1e-12)?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_dc() {
        let l = parse_scenario(r#"{"process": "dc", "b_p": 1.0}"#).unwrap();
        assert_eq!(l.scenario, Scenario::dc(1.0));
        assert!(l.axes.is_empty());
    }

    #[test]
    fn bs_number_is_signal_noise() {
        let l = parse_scenario(r#"{"process": "dc", "b_p": 1.0, "bs": 0.2, "bi": 0.1}"#).unwrap();
        assert_eq!((l.scenario.noise1, l.scenario.noise2), (0.2, 0.1));
        assert_eq!(l.scenario.transmissivity, 1.0);
        let l = parse_scenario(r#"{"process": "dc", "b_p": 1.0, "bs": {"T": 0.7, "theta": 0.5}}"#).unwrap();
        assert_eq!((l.scenario.transmissivity, l.scenario.theta_pi), (0.7, 0.5));
    }

    #[test]
    fn schema_errors_name_the_key() {
        let e = parse_scenario(r#"{"process": "shg", "bsq": 0.1}"#).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_CONFIG);
        assert!(e.to_string().contains("bsq"), "{e}");
        for (text, key) in [
            (r#"{"process": "shg", "b_sq": -1}"#, "b_sq"),
            (r#"{"process": "shg", "b_p": 1}"#, "b_p"),
            (r#"{"process": "shg", "b_sq": 1, "bs": {"T": 2}}"#, "bs.T"),
            (r#"{"process": "dc", "b_p": 1, "witness": "f"}"#, "f"),
            (r#"{"process": "dc", "b_p": 1, "witness": "Q"}"#, "witness"),
            (r#"{"process": "dc", "b_p": 1, "bn2": 0.1, "bi": 0.1}"#, "bi"),
            (r#"{"process": "dc", "b_p": 1, "xi1": {"mag2": 1, "phi": 0}}"#, "phi"),
            (r#"{"process": "dc", "b_p": 1, "sweep": {"axes": [{"param": "Q", "min": 0, "max": 1, "steps": 3}]}}"#, "Q"),
            (r#"{"process": "dc", "b_p": 1, "sweep": {"axes": [{"param": "T", "min": 0, "max": 2, "steps": 3}]}}"#, "bs.T"),
        ] {
            let e = parse_scenario(text).unwrap_err();
            assert_eq!(e.exit_code(), EXIT_CONFIG, "{text}");
            assert!(e.to_string().contains(key), "{text}: {e}");
        }
    }

    #[test]
    fn echo_round_trip() {
        let text = r#"{"process": "dc", "b_p": 0.3, "bs": 0.1, "bi": 0.05,
            "xi1": {"mag2": 100, "phase": 0.75}, "xi2": {"mag2": 0.1, "phase": -0.1},
            "witness": "R2",
            "sweep": {"axes": [{"param": "bs_bi", "min": 0, "max": 1, "steps": 5}, {"param": "T", "min": 0.1, "max": 0.9, "steps": 3}]}}"#;
        let l = parse_scenario(text).unwrap();
        let again = parse_scenario(&echo_scenario(&l)).unwrap();
        assert_eq!(l, again);
        let shg = parse_scenario(r#"{"process": "shg", "b_sq": 0.123456789012345, "bs": {"T": 0.3, "theta": 0.1}}"#).unwrap();
        assert_eq!(parse_scenario(&echo_scenario(&shg)).unwrap(), shg);
    }

    #[test]
    fn bracket_parsing() {
        assert_eq!(parse_bracket("0.05,0.4").unwrap(), (0.05, 0.4));
        assert_eq!(parse_bracket("-1, 2").unwrap(), (-1.0, 2.0));
        for bad in ["0.1", "a,b", "1,inf", "1,2,3"] {
            assert_eq!(parse_bracket(bad).unwrap_err().exit_code(), EXIT_CONFIG, "{bad}");
        }
    }

    #[test]
    fn csv_format() {
        let s = Scenario::shg(0.1).with_witness(WitnessKind::F);
        let r = grid_sweep(&s, &[Axis::new(Param::Source, 0.1, 0.2, 2)], &[WitnessKind::F, WitnessKind::M], &SweepOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "B_sq,f,M");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1.00000000e-1,-6.40000000e-3,"), "{}", lines[1]);
    }

    #[test]
    fn run_report_prints_spec_lines() {
        let mut buf = Vec::new();
        run_report(&mut buf, &Scenario::dc(1.0), 3, None).ok().unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("M = -5.00000000000e0\n"), "{text}");
        let mut buf = Vec::new();
        run_report(&mut buf, &Scenario::shg(0.1), 3, None).ok().unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("R1 = -6.40000000000e-3\n"), "{text}");
    }

    #[test]
    fn selftest_passes() {
        let mut buf = Vec::new();
        assert!(selftest(&mut buf, 7, 1e-8).unwrap(), "{}", String::from_utf8_lossy(&buf));
    }
}
