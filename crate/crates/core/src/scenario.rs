//! Scenario files, runs, φ-sweeps and parameter scans.
//!
//! A config is TOML with one table per item:
//!
//! ```toml
//! [scenario.gg10]
//! picture = "general"        # general | sc | ac | tc | djc
//! phi = 0.0
//! atomic = "gg"              # ee | eg | ge | gg | phi | psi
//! field = "fock"             # fock | eta | rho_nm | coherent | squeezed_pair | tmss | thermal
//! n = 1
//! m = 0
//! t_max = 25.0
//! samples = 2501
//! measures = ["concurrence", "eof", "negativity:atoms"]
//!
//! [sweep.eg00]
//! scenario = "eg00"
//! phi_min = 0.0
//! phi_max = 6.0
//! phi_points = 13
//!
//! [scan.thermal]
//! scenario = "phi_thermal"
//! kind = "critical"          # critical | optimum
//! parameter = "nbar"
//! lo = 0.3
//! hi = 0.6
//! tol = 0.005
//! ```
//!
//! In the `tc` and `djc` pictures the field keys describe the transformed
//! modes; `tc` traces the second one out before evolving.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{
    classify, scan_critical, scan_optimum, ClassifyOptions, DynamicsVerdict, Label, OptimumResult,
    ScanResult, DEFAULT_EPS_ZERO,
};
use crate::error::{Error, Result};
use crate::evolution::{time_grid, Trajectory};
use crate::fields::{assemble_initial, AtomicState, FieldSpec, Truncated, DEFAULT_EPS_TRUNC};
use crate::measures::{concurrence_matrix, entanglement_of_formation, negativity, Cut};
use crate::model::{ModelParams, Picture};
use crate::state::QuantumState;
use crate::table::TableOptions;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Photon cutoff used when a continuous-variable field gives none.
pub const DEFAULT_CV_N_MAX: usize = 12;
pub const DEFAULT_T_MAX: f64 = 25.0;
pub const DEFAULT_SAMPLES: usize = 2501;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Concurrence,
    Eof,
    Negativity(Cut),
}

impl Measure {
    pub fn label(self) -> String {
        match self {
            Measure::Concurrence => "concurrence".into(),
            Measure::Eof => "eof".into(),
            Measure::Negativity(c) => format!("negativity:{c}"),
        }
    }

    fn column(self) -> String {
        self.label().replace(':', "_")
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concurrence" => Ok(Measure::Concurrence),
            "eof" => Ok(Measure::Eof),
            _ => match s.strip_prefix("negativity:") {
                Some(cut) => Ok(Measure::Negativity(cut.parse()?)),
                None => Err(Error::Config(format!("unknown measure '{s}'"))),
            },
        }
    }
}

/// A fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ModelParams,
    pub picture: Picture,
    pub atomic: AtomicState,
    pub field: FieldSpec,
    pub t_max: f64,
    pub samples: usize,
    /// Always starts with [`Measure::Concurrence`].
    pub measures: Vec<Measure>,
    pub classify: ClassifyOptions,
}

/// The on-disk form of a scenario: every key optional, unknown keys rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picture: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub include_omega0: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_trunc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atomic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_zero: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_dead: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_horizon: Option<bool>,
}

fn field_err(name: &str, key: &str, msg: impl fmt::Display) -> Error {
    Error::Config(format!("scenario '{name}', field '{key}': {msg}"))
}

fn pair_keys(field: &str) -> &'static [&'static str] {
    match field {
        "fock" | "eta" | "rho_nm" => &["n", "m"],
        "coherent" => &["alpha_re", "alpha_im", "beta_re", "beta_im"],
        "squeezed_pair" | "tmss" => &["xi_re", "xi_im"],
        "thermal" => &["nbar"],
        _ => &[],
    }
}

impl RawScenario {
    fn field_keys_present(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let checks: [(&'static str, bool); 9] = [
            ("n", self.n.is_some()),
            ("m", self.m.is_some()),
            ("alpha_re", self.alpha_re.is_some()),
            ("alpha_im", self.alpha_im.is_some()),
            ("beta_re", self.beta_re.is_some()),
            ("beta_im", self.beta_im.is_some()),
            ("xi_re", self.xi_re.is_some()),
            ("xi_im", self.xi_im.is_some()),
            ("nbar", self.nbar.is_some()),
        ];
        for (k, present) in checks {
            if present {
                v.push(k);
            }
        }
        v
    }

    /// Resolves defaults and validates.
    pub fn resolve(&self, name: &str) -> Result<Scenario> {
        let picture: Picture = match &self.picture {
            Some(s) => s.parse().map_err(|e| field_err(name, "picture", e))?,
            None => Picture::General,
        };
        let atomic: AtomicState = self
            .atomic
            .as_deref()
            .ok_or_else(|| field_err(name, "atomic", "missing"))?
            .parse()
            .map_err(|e| field_err(name, "atomic", e))?;
        let kind = self
            .field
            .as_deref()
            .ok_or_else(|| field_err(name, "field", "missing"))?;
        let allowed = pair_keys(kind);
        if allowed.is_empty() {
            return Err(field_err(name, "field", format!("unknown field state '{kind}'")));
        }
        for k in self.field_keys_present() {
            if !allowed.contains(&k) {
                return Err(field_err(name, k, format!("not used by field '{kind}'")));
            }
        }
        let need_usize = |v: Option<usize>, key: &str| v.ok_or_else(|| field_err(name, key, "missing"));
        let cplx = |r: Option<f64>, i: Option<f64>| C64::new(r.unwrap_or(0.0), i.unwrap_or(0.0));
        let field = match kind {
            "fock" => FieldSpec::Fock {
                n: need_usize(self.n, "n")?,
                m: need_usize(self.m, "m")?,
            },
            "eta" => FieldSpec::Eta {
                n: need_usize(self.n, "n")?,
                m: need_usize(self.m, "m")?,
            },
            "rho_nm" => FieldSpec::RhoNm {
                n: need_usize(self.n, "n")?,
                m: need_usize(self.m, "m")?,
            },
            "coherent" => FieldSpec::Coherent {
                alpha: cplx(self.alpha_re, self.alpha_im),
                beta: cplx(self.beta_re, self.beta_im),
            },
            "squeezed_pair" => FieldSpec::SqueezedPair {
                xi: cplx(self.xi_re, self.xi_im),
            },
            "tmss" => FieldSpec::Tmss {
                xi: cplx(self.xi_re, self.xi_im),
            },
            "thermal" => {
                let nbar = self.nbar.ok_or_else(|| field_err(name, "nbar", "missing"))?;
                if !(nbar >= 0.0 && nbar.is_finite()) {
                    return Err(field_err(name, "nbar", format!("{nbar} is not a mean occupation")));
                }
                FieldSpec::Thermal { nbar }
            }
            _ => unreachable!("checked above"),
        };
        let phi = match picture {
            Picture::Sc => 0.0,
            Picture::Ac => PI,
            _ => self.phi.unwrap_or(0.0),
        };
        if matches!(picture, Picture::Sc | Picture::Ac) {
            if let Some(p) = self.phi {
                let fixed = if picture == Picture::Sc { 0.0 } else { PI };
                if (p - fixed).abs() > 1e-12 {
                    return Err(field_err(name, "phi", format!("picture '{picture}' fixes phi = {fixed}")));
                }
            }
        }
        let n_max = self
            .n_max
            .unwrap_or_else(|| field.fock_extent().map_or(DEFAULT_CV_N_MAX, |e| e + 2));
        let params = ModelParams {
            g: self.g.unwrap_or(1.0),
            phi,
            omega0: self.omega0.unwrap_or(0.0),
            include_omega0: self.include_omega0.unwrap_or(false),
            n_max,
            eps_trunc: self.eps_trunc.unwrap_or(DEFAULT_EPS_TRUNC),
        };
        params.validate().map_err(|e| match e {
            Error::Domain { name: key, .. } => field_err(name, key, e),
            other => other,
        })?;
        let t_max = self.t_max.unwrap_or(DEFAULT_T_MAX);
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(field_err(name, "t_max", "must be positive"));
        }
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(field_err(name, "samples", "at least 2 samples are required"));
        }
        let mut measures = vec![Measure::Concurrence];
        for s in self.measures.iter().flatten() {
            let m: Measure = s.parse().map_err(|e| field_err(name, "measures", e))?;
            if let Measure::Negativity(cut) = m {
                let modes = if picture == Picture::Tc { 1 } else { 2 };
                if cut != Cut::Atoms && modes != 2 {
                    return Err(field_err(
                        name,
                        "measures",
                        format!("cut '{cut}' needs two modes; picture '{picture}' keeps one"),
                    ));
                }
            }
            if !measures.contains(&m) {
                measures.push(m);
            }
        }
        let eps_zero = self.eps_zero.unwrap_or(DEFAULT_EPS_ZERO);
        if !(eps_zero > 0.0) {
            return Err(field_err(name, "eps_zero", "must be positive"));
        }
        if let Some(d) = self.delta_dead {
            if !(d > 0.0) {
                return Err(field_err(name, "delta_dead", "must be positive"));
            }
        }
        Ok(Scenario {
            name: name.to_string(),
            params,
            picture,
            atomic,
            field,
            t_max,
            samples,
            measures,
            classify: ClassifyOptions {
                eps_zero,
                delta_dead: self.delta_dead,
                check_horizon: self.check_horizon.unwrap_or(true),
            },
        })
    }
}

/// Command-line overrides applied on top of every scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub phi: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub n_max: Option<usize>,
}

impl Scenario {
    /// The resolved form of this scenario as a config table.
    pub fn to_raw(&self) -> RawScenario {
        let mut r = RawScenario {
            picture: Some(self.picture.label().into()),
            phi: Some(self.params.phi),
            g: Some(self.params.g),
            omega0: Some(self.params.omega0),
            include_omega0: Some(self.params.include_omega0),
            n_max: Some(self.params.n_max),
            eps_trunc: Some(self.params.eps_trunc),
            t_max: Some(self.t_max),
            samples: Some(self.samples),
            atomic: Some(self.atomic.label().into()),
            field: Some(self.field.kind().into()),
            measures: Some(self.measures.iter().map(|m| m.label()).collect()),
            eps_zero: Some(self.classify.eps_zero),
            delta_dead: self.classify.delta_dead,
            check_horizon: Some(self.classify.check_horizon),
            ..RawScenario::default()
        };
        match self.field {
            FieldSpec::Fock { n, m } | FieldSpec::Eta { n, m } | FieldSpec::RhoNm { n, m } => {
                r.n = Some(n);
                r.m = Some(m);
            }
            FieldSpec::Coherent { alpha, beta } => {
                r.alpha_re = Some(alpha.re);
                r.alpha_im = Some(alpha.im);
                r.beta_re = Some(beta.re);
                r.beta_im = Some(beta.im);
            }
            FieldSpec::SqueezedPair { xi } | FieldSpec::Tmss { xi } => {
                r.xi_re = Some(xi.re);
                r.xi_im = Some(xi.im);
            }
            FieldSpec::Thermal { nbar } => r.nbar = Some(nbar),
        }
        r
    }

    /// `[scenario.<name>]` table text of the resolved scenario.
    pub fn to_toml(&self) -> String {
        let mut outer = BTreeMap::new();
        let mut inner = BTreeMap::new();
        inner.insert(self.name.clone(), self.to_raw());
        outer.insert("scenario", inner);
        toml::to_string(&outer).expect("plain data serializes")
    }

    pub fn with_overrides(&self, o: &Overrides) -> Result<Scenario> {
        let mut raw = self.to_raw();
        if let Some(phi) = o.phi {
            if self.picture != Picture::General {
                return Err(field_err(
                    &self.name,
                    "phi",
                    format!("--phi only applies to picture 'general', not '{}'", self.picture),
                ));
            }
            raw.phi = Some(phi);
        }
        if let Some(t) = o.t_max {
            raw.t_max = Some(t);
        }
        if let Some(s) = o.samples {
            raw.samples = Some(s);
        }
        if let Some(n) = o.n_max {
            raw.n_max = Some(n);
        }
        raw.resolve(&self.name)
    }

    /// Copy with one named parameter replaced; used by scans.
    pub fn with_parameter(&self, parameter: &str, value: f64) -> Result<Scenario> {
        let mut raw = self.to_raw();
        let bad = || field_err(&self.name, parameter, "not a parameter of this scenario");
        match parameter {
            "phi" => raw.phi = Some(value),
            "g" => raw.g = Some(value),
            "t_max" => raw.t_max = Some(value),
            "nbar" if raw.nbar.is_some() => raw.nbar = Some(value),
            "xi" if raw.xi_re.is_some() => {
                raw.xi_re = Some(value);
                raw.xi_im = Some(0.0);
            }
            "alpha" if raw.alpha_re.is_some() => {
                raw.alpha_re = Some(value);
                raw.alpha_im = Some(0.0);
            }
            "beta" if raw.beta_re.is_some() => {
                raw.beta_re = Some(value);
                raw.beta_im = Some(0.0);
            }
            _ => return Err(bad()),
        }
        raw.resolve(&self.name)
    }

    /// Initial state on the space the picture's model acts on.
    pub fn initial_state(&self) -> Result<Truncated<QuantumState>> {
        let prepared = self.field.prepare(self.params.truncation())?;
        let model = self.picture.coupling_model(&self.params);
        let full_space = crate::model::CouplingModel::general(&self.params).space(self.params.n_max);
        let full = assemble_initial(self.atomic, &prepared.state, &full_space)?;
        let state = if model.n_modes() == 1 {
            let rho = full.reduce(&[0, 1, 2])?;
            QuantumState::Mixed(rho.to_ensemble(crate::evolution::SUPPORT_TOL)?)
        } else {
            full
        };
        Ok(Truncated {
            state,
            discarded: prepared.discarded,
        })
    }

    pub fn trajectory(&self) -> Result<Trajectory> {
        let init = self.initial_state()?;
        Trajectory::new(&self.picture.coupling_model(&self.params), &init.state)
    }

    pub fn times(&self) -> Vec<f64> {
        time_grid(self.t_max, self.samples)
    }

    /// Evolves, samples every measure and classifies the concurrence series.
    pub fn run(&self) -> Result<DynamicsRecord> {
        let traj = self.trajectory()?;
        let times = self.times();
        let cols = self
            .measures
            .iter()
            .map(|&m| sample_measure(&traj, &times, m))
            .collect::<Result<Vec<_>>>()?;
        let probe = |t: f64| concurrence_matrix(traj.atomic_at(t).matrix());
        let verdict = classify(&times, &cols[0], &self.classify, Some(&probe));
        Ok(DynamicsRecord {
            scenario: self.clone(),
            times,
            columns: self.measures.iter().copied().zip(cols).collect(),
            verdict,
        })
    }

    /// Label only; the cheapest path used by scans and the table report.
    pub fn verdict(&self) -> Result<DynamicsVerdict> {
        let traj = self.trajectory()?;
        let times = self.times();
        let c = sample_measure(&traj, &times, Measure::Concurrence)?;
        let probe = |t: f64| concurrence_matrix(traj.atomic_at(t).matrix());
        classify(&times, &c, &self.classify, Some(&probe))
    }

    /// Largest sampled atomic concurrence.
    pub fn peak_concurrence(&self) -> Result<f64> {
        let traj = self.trajectory()?;
        let c = sample_measure(&traj, &self.times(), Measure::Concurrence)?;
        Ok(c.into_iter().fold(0.0, f64::max))
    }
}

fn sample_measure(traj: &Trajectory, times: &[f64], m: Measure) -> Result<Vec<f64>> {
    match m {
        Measure::Concurrence => Ok(traj
            .atomic_series(times)
            .iter()
            .map(|r| concurrence_matrix(r.matrix()))
            .collect()),
        Measure::Eof => sample_measure(traj, times, Measure::Concurrence)?
            .into_iter()
            .map(|c| entanglement_of_formation(c.clamp(0.0, 1.0)))
            .collect(),
        Measure::Negativity(cut) => times
            .par_iter()
            .map(|&t| {
                let rho = if cut == Cut::Atoms {
                    traj.atomic_at(t)
                } else {
                    traj.reduced_at(t, cut.kept_factors())?
                };
                negativity(&rho, cut.transposed_factors())
            })
            .collect(),
    }
}

/// Sampled series of one scenario together with its verdict.
#[derive(Debug, Clone)]
pub struct DynamicsRecord {
    pub scenario: Scenario,
    pub times: Vec<f64>,
    pub columns: Vec<(Measure, Vec<f64>)>,
    /// Classification can fail (too short a horizon) without invalidating the
    /// series.
    pub verdict: Result<DynamicsVerdict>,
}

impl DynamicsRecord {
    pub fn column(&self, m: Measure) -> Option<&[f64]> {
        self.columns.iter().find(|(k, _)| *k == m).map(|(_, v)| v.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out = header_block(&self.scenario);
        let names: Vec<String> = self.columns.iter().map(|(m, _)| m.column()).collect();
        let _ = writeln!(out, "t,{}", names.join(","));
        for (k, t) in self.times.iter().enumerate() {
            out.push_str(&num(*t));
            for (_, col) in &self.columns {
                out.push(',');
                out.push_str(&num(col[k]));
            }
            out.push('\n');
        }
        out
    }

    pub fn verdict_toml(&self) -> String {
        verdict_toml(&self.scenario.name, &self.verdict)
    }
}

/// Lossless fixed-width rendering: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header_block(s: &Scenario) -> String {
    let mut out = format!("# tatm_version = \"{VERSION}\"\n");
    for line in s.to_toml().lines() {
        if line.is_empty() {
            continue;
        }
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct VerdictOut {
    label: String,
    generated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_generation_time: Option<f64>,
    max_concurrence: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    period_estimate: Option<f64>,
    dead_intervals: Vec<[f64; 2]>,
    isolated_zeros: Vec<f64>,
}

#[derive(Serialize)]
struct VerdictErr {
    error: String,
}

pub fn verdict_toml(name: &str, verdict: &Result<DynamicsVerdict>) -> String {
    let body = match verdict {
        Ok(v) => toml::to_string(&BTreeMap::from([(
            "verdict",
            BTreeMap::from([(
                name,
                VerdictOut {
                    label: v.label.to_string(),
                    generated: v.generated(),
                    first_generation_time: v.first_generation_time,
                    max_concurrence: v.max_value,
                    period_estimate: v.period_estimate,
                    dead_intervals: v.dead_intervals.iter().map(|&(a, b)| [a, b]).collect(),
                    isolated_zeros: v.isolated_zeros.clone(),
                },
            )]),
        )])),
        Err(e) => toml::to_string(&BTreeMap::from([(
            "verdict",
            BTreeMap::from([(name, VerdictErr { error: e.to_string() })]),
        )])),
    };
    format!(
        "tatm_version = \"{VERSION}\"\n{}",
        body.expect("plain data serializes")
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub scenario: String,
    pub phis: Vec<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    scenario: Option<String>,
    phis: Option<Vec<f64>>,
    phi_min: Option<f64>,
    phi_max: Option<f64>,
    phi_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    Critical,
    Optimum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub name: String,
    pub scenario: String,
    pub kind: ScanKind,
    pub parameter: String,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    /// probes per refinement round
    pub k: usize,
    /// grid size for optimum scans
    pub points: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    scenario: Option<String>,
    kind: Option<String>,
    parameter: Option<String>,
    lo: Option<f64>,
    hi: Option<f64>,
    tol: Option<f64>,
    k: Option<usize>,
    points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[allow(dead_code)]
    tatm_version: Option<String>,
    #[serde(default)]
    scenario: BTreeMap<String, RawScenario>,
    #[serde(default)]
    sweep: BTreeMap<String, RawSweep>,
    #[serde(default)]
    scan: BTreeMap<String, RawScan>,
    table1: Option<crate::table::RawTableOptions>,
}

/// A parsed and validated config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub scenarios: BTreeMap<String, Scenario>,
    pub sweeps: BTreeMap<String, SweepSpec>,
    pub scans: BTreeMap<String, ScanSpec>,
    pub table1: Option<TableOptions>,
}

/// 1-based line of `key` inside `[section]`, for error messages.
fn locate(src: &str, section: &str, key: Option<&str>) -> Option<usize> {
    let header = format!("[{section}]");
    let mut inside = false;
    for (i, line) in src.lines().enumerate() {
        let l = line.trim();
        if l.starts_with('[') {
            if inside {
                return None;
            }
            inside = l == header;
            if inside && key.is_none() {
                return Some(i + 1);
            }
            continue;
        }
        if let (true, Some(k)) = (inside, key) {
            if l.split('=').next().map(str::trim) == Some(k) {
                return Some(i + 1);
            }
        }
    }
    None
}

fn with_line(src: &str, section: &str, e: Error) -> Error {
    let Error::Config(msg) = &e else { return e };
    let key = msg.split("field '").nth(1).and_then(|s| s.split('\'').next());
    match locate(src, section, key).or_else(|| locate(src, section, None)) {
        Some(l) => Error::Config(format!("line {l}: {msg}")),
        None => e,
    }
}

impl Config {
    pub fn parse(src: &str) -> Result<Config> {
        let raw: RawConfig = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Config::default();
        for (name, r) in &raw.scenario {
            let s = r
                .resolve(name)
                .map_err(|e| with_line(src, &format!("scenario.{name}"), e))?;
            cfg.scenarios.insert(name.clone(), s);
        }
        for (name, r) in &raw.sweep {
            let sec = format!("sweep.{name}");
            let err = |key: &str, msg: &str| {
                with_line(
                    src,
                    &sec,
                    Error::Config(format!("sweep '{name}', field '{key}': {msg}")),
                )
            };
            let scenario = r.scenario.clone().ok_or_else(|| err("scenario", "missing"))?;
            match cfg.scenarios.get(&scenario) {
                None => return Err(err("scenario", "no such scenario")),
                Some(s) if s.picture != Picture::General => {
                    return Err(err("scenario", "a phi sweep needs picture 'general'"))
                }
                _ => {}
            }
            let phis = match (&r.phis, r.phi_points) {
                (Some(p), None) => p.clone(),
                (None, Some(k)) if k >= 1 => {
                    let lo = r.phi_min.unwrap_or(0.0);
                    let hi = r.phi_max.unwrap_or(2.0 * PI * (1.0 - 1.0 / k as f64));
                    if k == 1 {
                        vec![lo]
                    } else {
                        (0..k).map(|j| lo + (hi - lo) * j as f64 / (k - 1) as f64).collect()
                    }
                }
                _ => return Err(err("phis", "give either 'phis' or 'phi_points'")),
            };
            if let Some(p) = phis.iter().find(|p| !(0.0..2.0 * PI).contains(*p)) {
                return Err(err("phis", &format!("{p} is outside [0, 2pi)")));
            }
            cfg.sweeps.insert(
                name.clone(),
                SweepSpec {
                    name: name.clone(),
                    scenario,
                    phis,
                },
            );
        }
        for (name, r) in &raw.scan {
            let sec = format!("scan.{name}");
            let err = |key: &str, msg: &str| {
                with_line(src, &sec, Error::Config(format!("scan '{name}', field '{key}': {msg}")))
            };
            let scenario = r.scenario.clone().ok_or_else(|| err("scenario", "missing"))?;
            let Some(base) = cfg.scenarios.get(&scenario) else {
                return Err(err("scenario", "no such scenario"));
            };
            let kind = match r.kind.as_deref().unwrap_or("critical") {
                "critical" => ScanKind::Critical,
                "optimum" => ScanKind::Optimum,
                other => return Err(err("kind", &format!("unknown scan kind '{other}'"))),
            };
            let parameter = r.parameter.clone().ok_or_else(|| err("parameter", "missing"))?;
            let lo = r.lo.ok_or_else(|| err("lo", "missing"))?;
            let hi = r.hi.ok_or_else(|| err("hi", "missing"))?;
            if !(lo < hi) {
                return Err(err("hi", "must exceed lo"));
            }
            base.with_parameter(&parameter, lo)
                .map_err(|e| with_line(src, &sec, e))?;
            cfg.scans.insert(
                name.clone(),
                ScanSpec {
                    name: name.clone(),
                    scenario,
                    kind,
                    parameter,
                    lo,
                    hi,
                    tol: r.tol.unwrap_or(1e-3 * (hi - lo)),
                    k: r.k.unwrap_or(3).max(1),
                    points: r.points.unwrap_or(21).max(3),
                },
            );
        }
        if let Some(t) = &raw.table1 {
            cfg.table1 = Some(t.resolve().map_err(|e| with_line(src, "table1", e))?);
        }
        Ok(cfg)
    }

    pub fn scenario(&self, name: &str) -> Result<&Scenario> {
        self.scenarios
            .get(name)
            .ok_or_else(|| Error::Config(format!("no scenario named '{name}'")))
    }
}

/// One φ value of a sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub phi: f64,
    pub record: DynamicsRecord,
}

/// Runs every φ of a sweep (in parallel) and returns them in grid order.
pub fn run_phi_sweep(base: &Scenario, phis: &[f64]) -> Result<Vec<SweepPoint>> {
    phis.par_iter()
        .map(|&phi| {
            let s = base.with_parameter("phi", phi)?;
            let record = s.run()?;
            Ok(SweepPoint { phi, record })
        })
        .collect()
}

/// Long-form CSV `phi,t,<measures>` ordered by `(phi, t)`.
pub fn sweep_csv(base: &Scenario, points: &[SweepPoint]) -> String {
    let mut out = header_block(base);
    let names: Vec<String> = base.measures.iter().map(|m| m.column()).collect();
    let _ = writeln!(out, "phi,t,{}", names.join(","));
    for p in points {
        for (k, t) in p.record.times.iter().enumerate() {
            out.push_str(&num(p.phi));
            out.push(',');
            out.push_str(&num(*t));
            for (_, col) in &p.record.columns {
                out.push(',');
                out.push_str(&num(col[k]));
            }
            out.push('\n');
        }
    }
    out
}

/// Per-φ verdict CSV.
pub fn sweep_verdicts_csv(base: &Scenario, points: &[SweepPoint]) -> String {
    let mut out = header_block(base);
    out.push_str("phi,label,generated,first_generation_time,max_concurrence,dead_intervals,isolated_zeros\n");
    for p in points {
        match &p.record.verdict {
            Ok(v) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    num(p.phi),
                    v.label,
                    v.generated(),
                    v.first_generation_time.map(num).unwrap_or_default(),
                    num(v.max_value),
                    v.dead_intervals.len(),
                    v.isolated_zeros.len()
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{},ERROR,,,,,\"{}\"", num(p.phi), e.to_string().replace('"', "'"));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub enum ScanOutcome {
    Critical(ScanResult),
    Optimum(OptimumResult),
}

pub fn run_scan(base: &Scenario, spec: &ScanSpec) -> Result<ScanOutcome> {
    match spec.kind {
        ScanKind::Critical => {
            let eval = |x: f64| -> Result<Label> {
                Ok(base.with_parameter(&spec.parameter, x)?.verdict()?.label)
            };
            scan_critical(&spec.parameter, spec.lo, spec.hi, spec.tol, spec.k, eval).map(ScanOutcome::Critical)
        }
        ScanKind::Optimum => {
            let eval = |x: f64| base.with_parameter(&spec.parameter, x)?.peak_concurrence();
            scan_optimum(&spec.parameter, spec.lo, spec.hi, spec.points, eval).map(ScanOutcome::Optimum)
        }
    }
}

pub fn scan_report(base: &Scenario, spec: &ScanSpec, outcome: &ScanOutcome) -> String {
    let mut out = header_block(base);
    match outcome {
        ScanOutcome::Critical(r) => {
            let _ = writeln!(
                out,
                "# critical {} = {} +- {} ({} -> {})",
                spec.parameter,
                num(r.critical),
                num(r.uncertainty),
                r.low_label,
                r.high_label
            );
            let _ = writeln!(out, "{},label", spec.parameter);
            for (x, l) in &r.probes {
                let _ = writeln!(out, "{},{}", num(*x), l);
            }
        }
        ScanOutcome::Optimum(r) => {
            let _ = writeln!(
                out,
                "# argmax {} = {} (peak {}, interior = {})",
                spec.parameter,
                num(r.argmax),
                num(r.max),
                r.interior
            );
            let _ = writeln!(out, "{},peak_concurrence", spec.parameter);
            for (x, y) in &r.grid {
                let _ = writeln!(out, "{},{}", num(*x), num(*y));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GG10: &str = r#"
[scenario.gg10]
picture = "general"
phi = 0.0
atomic = "gg"
field = "fock"
n = 1
m = 0
t_max = 25.0
samples = 600
measures = ["eof", "negativity:atoms"]
"#;

    #[test]
    fn gg10_csv_matches_reduction() {
        let cfg = Config::parse(GG10).unwrap();
        let rec = cfg.scenario("gg10").unwrap().run().unwrap();
        let c = rec.column(Measure::Concurrence).unwrap();
        for (t, v) in rec.times.iter().zip(c) {
            assert!((v - 0.5 * (2.0 * t).sin().powi(2)).abs() < 1e-8);
        }
        assert_eq!(rec.verdict.as_ref().unwrap().label, Label::Di);
        let csv = rec.to_csv();
        assert_eq!(csv, cfg.scenario("gg10").unwrap().run().unwrap().to_csv());
        assert!(csv.lines().any(|l| l == "t,concurrence,eof,negativity_atoms"));
    }

    #[test]
    fn header_reparses() {
        let cfg = Config::parse(GG10).unwrap();
        let s = cfg.scenario("gg10").unwrap();
        let csv = s.run().unwrap().to_csv();
        let header: String = csv
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| format!("{}\n", &l[2..]))
            .collect();
        let back = Config::parse(&header).unwrap();
        assert_eq!(back.scenario("gg10").unwrap(), s);
        let line = csv.lines().find(|l| !l.starts_with('#') && !l.starts_with('t')).unwrap();
        let parsed: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(parsed[0], 0.0);
    }

    #[test]
    fn config_errors_carry_lines() {
        let bad = GG10.replace("phi = 0.0", "phi = 7.0");
        let e = Config::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("line 4") && e.contains("phi"), "{e}");
        let bad = GG10.replace("n = 1", "nbar = 1.0");
        let e = Config::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("nbar"), "{e}");
        let e = Config::parse("[scenario.x]\nbogus = 1\n").unwrap_err().to_string();
        assert!(e.contains("bogus"), "{e}");
        let tc = "[scenario.x]\npicture = \"tc\"\natomic = \"ee\"\nfield = \"fock\"\nn = 1\nm = 0\nmeasures = [\"negativity:modes\"]\n";
        assert!(Config::parse(tc).is_err());
    }

    #[test]
    fn overrides_and_parameters() {
        let cfg = Config::parse(GG10).unwrap();
        let s = cfg.scenario("gg10").unwrap();
        let o = s
            .with_overrides(&Overrides {
                phi: Some(1.0),
                samples: Some(700),
                ..Overrides::default()
            })
            .unwrap();
        assert_eq!((o.params.phi, o.samples), (1.0, 700));
        assert!(s.with_parameter("nbar", 0.3).is_err());
        let sc = "[scenario.s]\npicture = \"sc\"\natomic = \"ee\"\nfield = \"fock\"\nn = 1\nm = 0\n";
        let sc = Config::parse(sc).unwrap();
        assert!(sc.scenario("s").unwrap().with_overrides(&Overrides { phi: Some(1.0), ..Default::default() }).is_err());
    }

    #[test]
    fn sweep_is_ordered() {
        let src = format!("{GG10}\n[sweep.w]\nscenario = \"gg10\"\nphis = [0.0, 1.0, 3.141592653589793]\n");
        let cfg = Config::parse(&src).unwrap();
        let base = cfg.scenario("gg10").unwrap();
        let pts = run_phi_sweep(base, &cfg.sweeps["w"].phis).unwrap();
        let csv = sweep_csv(base, &pts);
        let phis: Vec<f64> = csv
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("phi"))
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(phis.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(phis.len(), 3 * 600);
        let v = sweep_verdicts_csv(base, &pts);
        assert!(v.contains(",DI,"));
    }

    #[test]
    fn tc_picture_runs() {
        let src = "[scenario.t]\npicture = \"tc\"\natomic = \"eg\"\nfield = \"fock\"\nn = 1\nm = 1\nsamples = 600\n";
        let cfg = Config::parse(src).unwrap();
        let s = cfg.scenario("t").unwrap();
        let init = s.initial_state().unwrap();
        assert_eq!(init.state.space().dims(), &[2, 2, 4]);
        let rec = s.run().unwrap();
        assert!(rec.column(Measure::Concurrence).unwrap().iter().all(|c| c.is_finite()));
    }
}
