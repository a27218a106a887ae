//! The SC/AC verdict grid over six field classes and five atomic states,
//! diffed against the published expectations.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{ClassifyOptions, Label, DEFAULT_EPS_ZERO};
use crate::error::{Error, Result};
use crate::fields::{AtomicState, FieldSpec};
use crate::model::{ModelParams, Picture};
use crate::scenario::{num, Measure, Scenario};

pub const COLUMNS: [AtomicState; 5] = [
    AtomicState::Ee,
    AtomicState::Eg,
    AtomicState::Gg,
    AtomicState::Phi,
    AtomicState::Psi,
];
pub const COLUMN_NAMES: [char; 5] = ['A', 'B', 'C', 'D', 'E'];

/// Published cells, rows 1-6 by columns A-E. A trailing `*` marks the cells
/// carrying the "no entanglement for n = m" footnote.
pub const PUBLISHED_SC: [[&str; 5]; 6] = [
    ["No", "Yes, DI", "Yes*, DI/SD", "SD", "SD"],
    ["No", "Yes, DI", "Yes, SD", "SD", "SD"],
    ["No", "Yes, DI", "Yes, SD", "AL/SD", "SD"],
    ["Yes, AL/SD", "Yes, SD", "Yes, AL/SD", "AL/SD", "AL/SD"],
    ["No", "Yes, DI", "Yes, SD", "AL/SD", "SD"],
    ["Yes, AL/SD", "Yes, SD", "Yes, AL/SD", "AL", "SD"],
];

pub const PUBLISHED_AC: [[&str; 5]; 6] = [
    ["Yes*, SD", "Yes*, SD", "Yes*, SD/DI", "SD", "SD/AL"],
    ["No", "No", "No", "SD", "SD"],
    ["No", "No", "No", "SD", "SD"],
    ["No", "No", "No", "SD", "SD"],
    ["Yes, SD", "Yes, SD", "Yes, SD", "SD", "SD"],
    ["No", "No", "No", "SD", "SD"],
];

pub const ROW_NAMES: [&str; 6] = ["fock", "eta", "thermal", "coherent", "squeezed_pair", "tmss"];

/// Decoded expectation of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub generation: Option<bool>,
    pub labels: Vec<Label>,
    pub footnote: bool,
}

impl Expected {
    pub fn ambiguous(&self) -> bool {
        self.labels.len() > 1
    }

    pub fn parse(cell: &str) -> Result<Expected> {
        let bad = || Error::Config(format!("bad table cell '{cell}'"));
        let (gen, rest) = match cell.split_once(',') {
            Some((g, r)) => (Some(g.trim()), r.trim()),
            None if cell == "No" => (Some("No"), ""),
            None => (None, cell.trim()),
        };
        let footnote = gen.is_some_and(|g| g.ends_with('*'));
        let generation = match gen.map(|g| g.trim_end_matches('*')) {
            Some("Yes") => Some(true),
            Some("No") => Some(false),
            None => None,
            Some(_) => return Err(bad()),
        };
        let labels = if generation == Some(false) {
            vec![Label::None]
        } else {
            rest.split('/').map(|l| l.trim().parse()).collect::<Result<Vec<_>>>()?
        };
        Ok(Expected {
            generation,
            labels,
            footnote,
        })
    }
}

/// Parameters of the grid; the defaults fill in what the published table
/// leaves unstated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub g: f64,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub nbar: f64,
    pub t_max: f64,
    pub samples: usize,
    /// cutoff for coherent, squeezed and thermal rows
    pub n_max_cv: usize,
    pub eps_trunc: f64,
    pub eps_zero: f64,
    pub delta_dead: Option<f64>,
    /// Evaluate alternative members of each field class for '/' cells.
    pub variants: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            g: 1.0,
            n: 2,
            m: 1,
            alpha: 1.0,
            beta: 0.5,
            xi: 0.5,
            nbar: 0.5,
            t_max: 25.0,
            samples: 2501,
            n_max_cv: 12,
            eps_trunc: 1e-5,
            eps_zero: DEFAULT_EPS_ZERO,
            delta_dead: None,
            variants: true,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTableOptions {
    g: Option<f64>,
    n: Option<usize>,
    m: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    xi: Option<f64>,
    nbar: Option<f64>,
    t_max: Option<f64>,
    samples: Option<usize>,
    n_max_cv: Option<usize>,
    eps_trunc: Option<f64>,
    eps_zero: Option<f64>,
    delta_dead: Option<f64>,
    variants: Option<bool>,
}

impl RawTableOptions {
    pub fn resolve(&self) -> Result<TableOptions> {
        let d = TableOptions::default();
        let o = TableOptions {
            g: self.g.unwrap_or(d.g),
            n: self.n.unwrap_or(d.n),
            m: self.m.unwrap_or(d.m),
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            xi: self.xi.unwrap_or(d.xi),
            nbar: self.nbar.unwrap_or(d.nbar),
            t_max: self.t_max.unwrap_or(d.t_max),
            samples: self.samples.unwrap_or(d.samples),
            n_max_cv: self.n_max_cv.unwrap_or(d.n_max_cv),
            eps_trunc: self.eps_trunc.unwrap_or(d.eps_trunc),
            eps_zero: self.eps_zero.unwrap_or(d.eps_zero),
            delta_dead: self.delta_dead,
            variants: self.variants.unwrap_or(d.variants),
        };
        let err = |k: &str, m: &str| Error::Config(format!("table1, field '{k}': {m}"));
        if o.n == o.m {
            return Err(err("m", "the default Fock row needs n != m; the n = m case is checked separately"));
        }
        if !(o.t_max > 0.0) {
            return Err(err("t_max", "must be positive"));
        }
        if !(o.nbar >= 0.0) {
            return Err(err("nbar", "must be non-negative"));
        }
        Ok(o)
    }
}

/// One member of a field class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowParam {
    Pair(usize, usize),
    Amplitudes(f64, f64),
    Squeeze(f64),
    Nbar(f64),
}

impl RowParam {
    pub fn describe(&self) -> String {
        match *self {
            RowParam::Pair(n, m) => format!("n={n} m={m}"),
            RowParam::Amplitudes(a, b) => format!("alpha={a} beta={b}"),
            RowParam::Squeeze(x) => format!("xi={x}"),
            RowParam::Nbar(x) => format!("nbar={x}"),
        }
    }
}

fn default_param(row: usize, o: &TableOptions) -> RowParam {
    match row {
        0 | 1 => RowParam::Pair(o.n, o.m),
        2 => RowParam::Nbar(o.nbar),
        3 => RowParam::Amplitudes(o.alpha, o.beta),
        _ => RowParam::Squeeze(o.xi),
    }
}

/// Alternative members tried for '/' cells.
pub fn variant_params(row: usize) -> Vec<RowParam> {
    match row {
        0 | 1 => vec![
            RowParam::Pair(1, 0),
            RowParam::Pair(2, 0),
            RowParam::Pair(3, 1),
            RowParam::Pair(3, 2),
        ],
        2 => vec![RowParam::Nbar(0.1), RowParam::Nbar(0.25), RowParam::Nbar(0.75)],
        3 => vec![
            RowParam::Amplitudes(0.5, 0.2),
            RowParam::Amplitudes(1.0, 1.0),
            RowParam::Amplitudes(1.5, 0.5),
            RowParam::Amplitudes(0.3, 0.0),
        ],
        _ => vec![RowParam::Squeeze(0.1), RowParam::Squeeze(0.25), RowParam::Squeeze(0.8)],
    }
}

fn field_for(picture: Picture, row: usize, p: RowParam) -> FieldSpec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match (row, p) {
        (0, RowParam::Pair(n, m)) => FieldSpec::Fock { n, m },
        (1, RowParam::Pair(n, m)) => FieldSpec::Eta { n, m },
        (2, RowParam::Nbar(nbar)) => FieldSpec::Thermal { nbar },
        (3, RowParam::Amplitudes(a, b)) if picture == Picture::Sc => FieldSpec::Coherent {
            alpha: C64::new(s * (a + b), 0.0),
            beta: C64::new(s * (a - b), 0.0),
        },
        (3, RowParam::Amplitudes(a, b)) => FieldSpec::Coherent {
            alpha: C64::new(a, 0.0),
            beta: C64::new(b, 0.0),
        },
        (4, RowParam::Squeeze(x)) => FieldSpec::SqueezedPair { xi: C64::new(x, 0.0) },
        (5, RowParam::Squeeze(x)) => FieldSpec::Tmss { xi: C64::new(x, 0.0) },
        _ => unreachable!("row and parameter kinds agree"),
    }
}

/// Scenario for one cell; continuous-variable rows raise the cutoff from
/// `n_max_cv` until the truncation tolerance is met.
pub fn cell_scenario(picture: Picture, row: usize, col: usize, p: RowParam, o: &TableOptions) -> Result<Scenario> {
    let field = field_for(picture, row, p);
    let mut n_max = field.fock_extent().map_or(o.n_max_cv, |e| e + 2);
    loop {
        let params = ModelParams {
            g: o.g,
            phi: if picture == Picture::Ac { std::f64::consts::PI } else { 0.0 },
            n_max,
            eps_trunc: o.eps_trunc,
            ..ModelParams::default()
        };
        params.validate()?;
        let s = Scenario {
            name: format!("{}_{}{}", picture.label(), row + 1, COLUMN_NAMES[col]),
            params,
            picture,
            atomic: COLUMNS[col],
            field,
            t_max: o.t_max,
            samples: o.samples,
            measures: vec![Measure::Concurrence],
            classify: ClassifyOptions {
                eps_zero: o.eps_zero,
                delta_dead: o.delta_dead,
                check_horizon: true,
            },
        };
        match field.prepare(params.truncation()) {
            Ok(_) => return Ok(s),
            Err(Error::TruncationTooSmall { .. }) if n_max < 30 => n_max += 2,
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observed {
    pub label: Label,
    pub generated: bool,
    /// Smallest concurrence after first generation.
    pub closest_approach: Option<f64>,
    /// Horizon actually used; longer than requested when the series needed
    /// more periods.
    pub horizon: f64,
}

/// Classifies one cell. When the detected period is too long for the
/// requested horizon, the horizon (and sample count, keeping the step) is
/// stretched to cover the required number of periods.
pub fn observe(s: &Scenario) -> std::result::Result<Observed, String> {
    let mut s = s.clone();
    for _ in 0..3 {
        match s.verdict() {
            Ok(v) => {
                return Ok(Observed {
                    label: v.label,
                    generated: v.generated(),
                    closest_approach: v.min_after_generation,
                    horizon: s.t_max,
                })
            }
            Err(Error::InsufficientHorizon { period, .. }) => {
                let t_max = (crate::classify::MIN_PERIODS * period * 1.1).ceil();
                let dt = s.t_max / (s.samples - 1) as f64;
                s.samples = (t_max / dt).round() as usize + 1;
                s.t_max = t_max;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Err(format!("no adequate horizon up to t = {}", s.t_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    /// default parameters reproduce the published entry
    Reproduced,
    /// '/' entry: at least one published branch appears under some parameter
    /// choice
    BranchReproduced,
    Mismatch,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Reproduced => "ok",
            CellStatus::BranchReproduced => "branch",
            CellStatus::Mismatch => "MISMATCH",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub picture: Picture,
    pub row: usize,
    pub column: usize,
    pub published: &'static str,
    pub expected: Expected,
    pub default: std::result::Result<Observed, String>,
    pub variants: Vec<(RowParam, std::result::Result<Observed, String>)>,
    pub status: CellStatus,
}

impl CellOutcome {
    fn agrees(&self, o: &Observed) -> bool {
        let gen_ok = match self.expected.generation {
            Some(g) if COLUMNS[self.column].is_separable() => g == o.generated,
            _ => true,
        };
        gen_ok && self.expected.labels.contains(&o.label)
    }

    /// Published branches seen, each with the first parameter choice that
    /// produced it.
    pub fn branches(&self, o: &TableOptions) -> Vec<(Label, String)> {
        let mut out: Vec<(Label, String)> = Vec::new();
        let all = std::iter::once((default_param(self.row, o), &self.default))
            .chain(self.variants.iter().map(|(p, r)| (*p, r)));
        for (p, r) in all {
            if let Ok(obs) = r {
                if self.agrees(obs) && !out.iter().any(|(l, _)| *l == obs.label) {
                    out.push((obs.label, p.describe()));
                }
            }
        }
        out
    }

    pub fn cell_id(&self) -> String {
        format!("{} {}{}", self.picture.label().to_uppercase(), self.row + 1, COLUMN_NAMES[self.column])
    }
}

/// `n = m` Fock check of the footnoted cells.
#[derive(Debug, Clone)]
pub struct FootnoteCheck {
    pub picture: Picture,
    pub column: usize,
    pub n: usize,
    pub observed: std::result::Result<Observed, String>,
}

impl FootnoteCheck {
    pub fn passed(&self) -> bool {
        matches!(self.observed, Ok(o) if o.label == Label::None && !o.generated)
    }
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub options: TableOptions,
    pub cells: Vec<CellOutcome>,
    pub footnotes: Vec<FootnoteCheck>,
}

pub fn published(picture: Picture) -> &'static [[&'static str; 5]; 6] {
    match picture {
        Picture::Ac => &PUBLISHED_AC,
        _ => &PUBLISHED_SC,
    }
}

/// Evaluates every cell (in parallel) and diffs against the published grid.
pub fn table_one_report(o: &TableOptions) -> Result<TableReport> {
    let mut jobs = Vec::new();
    for picture in [Picture::Sc, Picture::Ac] {
        for row in 0..6 {
            for col in 0..5 {
                let published = published(picture)[row][col];
                let expected = Expected::parse(published)?;
                jobs.push((picture, row, col, published, expected));
            }
        }
    }
    let cells = jobs
        .into_par_iter()
        .map(|(picture, row, col, published, expected)| -> Result<CellOutcome> {
            let default = observe(&cell_scenario(picture, row, col, default_param(row, o), o)?);
            let variants = if o.variants && expected.ambiguous() {
                variant_params(row)
                    .into_par_iter()
                    .map(|p| Ok((p, observe(&cell_scenario(picture, row, col, p, o)?))))
                    .collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            let mut cell = CellOutcome {
                picture,
                row,
                column: col,
                published,
                expected,
                default,
                variants,
                status: CellStatus::Mismatch,
            };
            let default_ok = matches!(&cell.default, Ok(obs) if cell.agrees(obs));
            cell.status = if default_ok {
                CellStatus::Reproduced
            } else if cell.expected.ambiguous() && !cell.branches(o).is_empty() {
                CellStatus::BranchReproduced
            } else {
                CellStatus::Mismatch
            };
            Ok(cell)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut foot_jobs = Vec::new();
    for picture in [Picture::Sc, Picture::Ac] {
        for col in 0..3 {
            if Expected::parse(published(picture)[0][col])?.footnote {
                for n in [1, 2] {
                    foot_jobs.push((picture, col, n));
                }
            }
        }
    }
    let footnotes = foot_jobs
        .into_par_iter()
        .map(|(picture, col, n)| {
            Ok(FootnoteCheck {
                picture,
                column: col,
                n,
                observed: observe(&cell_scenario(picture, 0, col, RowParam::Pair(n, n), o)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport {
        options: *o,
        cells,
        footnotes,
    })
}

fn show(r: &std::result::Result<Observed, String>) -> String {
    match r {
        Ok(o) if o.label == Label::None => "No".into(),
        Ok(o) => format!("{}{}", if o.generated { "Yes, " } else { "" }, o.label),
        Err(_) => "error".into(),
    }
}

impl TableReport {
    pub fn cell(&self, picture: Picture, row: usize, col: usize) -> &CellOutcome {
        self.cells
            .iter()
            .find(|c| c.picture == picture && c.row == row && c.column == col)
            .expect("full grid")
    }

    /// All cells without '/' reproduce under the defaults.
    pub fn unambiguous_reproduced(&self) -> bool {
        self.cells
            .iter()
            .filter(|c| !c.expected.ambiguous())
            .all(|c| c.status == CellStatus::Reproduced)
    }

    /// Every '/' cell shows at least one published branch.
    pub fn ambiguous_reproduced(&self) -> bool {
        self.cells
            .iter()
            .filter(|c| c.expected.ambiguous())
            .all(|c| c.status != CellStatus::Mismatch)
    }

    pub fn footnotes_reproduced(&self) -> bool {
        self.footnotes.iter().all(FootnoteCheck::passed)
    }

    pub fn passed(&self) -> bool {
        self.unambiguous_reproduced() && self.ambiguous_reproduced() && self.footnotes_reproduced()
    }

    pub fn mismatches(&self) -> Vec<&CellOutcome> {
        self.cells.iter().filter(|c| c.status == CellStatus::Mismatch).collect()
    }

    /// Aligned text rendering: observed grid, diff, branch provenance and
    /// footnote checks.
    pub fn render_text(&self) -> String {
        let o = &self.options;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "defaults: g={} n={} m={} alpha={} beta={} xi={} nbar={} t_max={} samples={} n_max_cv={} eps_trunc={:e} eps_zero={:e}",
            o.g, o.n, o.m, o.alpha, o.beta, o.xi, o.nbar, o.t_max, o.samples, o.n_max_cv, o.eps_trunc, o.eps_zero
        );
        for picture in [Picture::Sc, Picture::Ac] {
            let _ = writeln!(out, "\n{}", picture.label().to_uppercase());
            let _ = write!(out, "{:<15}", "row");
            for (c, a) in COLUMN_NAMES.iter().zip(COLUMNS) {
                let _ = write!(out, "| {:<28}", format!("{c}. {a}"));
            }
            out.push('\n');
            for row in 0..6 {
                let _ = write!(out, "{:<15}", format!("{}. {}", row + 1, ROW_NAMES[row]));
                for col in 0..5 {
                    let cell = self.cell(picture, row, col);
                    let mark = match cell.status {
                        CellStatus::Reproduced => "",
                        CellStatus::BranchReproduced => " ~",
                        CellStatus::Mismatch => " !",
                    };
                    let text = format!("{} [{}]{}", show(&cell.default), cell.published.replace('*', ""), mark);
                    let _ = write!(out, "| {text:<28}");
                }
                out.push('\n');
            }
        }
        out.push_str("\ncells: observed [published]; ~ = '/' entry matched via a variant, ! = mismatch\n");
        out.push_str("\nbranches of '/' entries:\n");
        for c in self.cells.iter().filter(|c| c.expected.ambiguous()) {
            let b: Vec<String> = c
                .branches(o)
                .into_iter()
                .map(|(l, p)| format!("{l} at {p}"))
                .collect();
            let missing: Vec<String> = c
                .expected
                .labels
                .iter()
                .filter(|l| !c.branches(o).iter().any(|(x, _)| x == *l))
                .map(|l| l.to_string())
                .collect();
            let _ = writeln!(
                out,
                "  {:<8} {:<12} found: {}{}",
                c.cell_id(),
                c.published.replace('*', ""),
                if b.is_empty() { "none".into() } else { b.join("; ") },
                if missing.is_empty() {
                    String::new()
                } else {
                    format!("; not found: {}", missing.join(", "))
                }
            );
        }
        out.push_str("\nmismatches:\n");
        let mism = self.mismatches();
        if mism.is_empty() {
            out.push_str("  none\n");
        }
        for c in mism {
            let detail = match &c.default {
                Ok(obs) => format!(
                    "{} (min after generation {:.2e}, horizon {})",
                    show(&c.default),
                    obs.closest_approach.unwrap_or(0.0),
                    obs.horizon
                ),
                Err(e) => e.clone(),
            };
            let _ = writeln!(out, "  {:<8} published {:<12} observed {}", c.cell_id(), c.published.replace('*', ""), detail);
        }
        out.push_str("\nn = m footnote:\n");
        for f in &self.footnotes {
            let _ = writeln!(
                out,
                "  {} {}1 n=m={}: {} {}",
                f.picture.label().to_uppercase(),
                COLUMN_NAMES[f.column],
                f.n,
                show(&f.observed),
                if f.passed() { "ok" } else { "MISMATCH" }
            );
        }
        let _ = writeln!(
            out,
            "\nunambiguous: {}  ambiguous: {}  footnote: {}",
            pass(self.unambiguous_reproduced()),
            pass(self.ambiguous_reproduced()),
            pass(self.footnotes_reproduced())
        );
        out
    }

    /// One line per evaluated (cell, parameter) pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("picture,row,column,atomic,field,param,published,label,generated,horizon,closest_approach,status\n");
        for c in &self.cells {
            let rows = std::iter::once((default_param(c.row, &self.options), &c.default, c.status.as_str()))
                .chain(c.variants.iter().map(|(p, r)| (*p, r, "variant")));
            for (p, r, status) in rows {
                let (label, generated, horizon, closest) = match r {
                    Ok(o) => (
                        o.label.to_string(),
                        o.generated.to_string(),
                        num(o.horizon),
                        o.closest_approach.map(num).unwrap_or_default(),
                    ),
                    Err(_) => ("ERROR".into(), String::new(), String::new(), String::new()),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},\"{}\",{},{},{},{},{}",
                    c.picture.label(),
                    c.row + 1,
                    COLUMN_NAMES[c.column],
                    COLUMNS[c.column],
                    ROW_NAMES[c.row],
                    p.describe(),
                    c.published.replace('*', ""),
                    label,
                    generated,
                    horizon,
                    closest,
                    status
                );
            }
        }
        for f in &self.footnotes {
            let (label, generated, horizon) = match &f.observed {
                Ok(o) => (o.label.to_string(), o.generated.to_string(), num(o.horizon)),
                Err(_) => ("ERROR".into(), String::new(), String::new()),
            };
            let _ = writeln!(
                out,
                "{},1,{},{},fock,n={} m={},\"No\",{},{},{},,{}",
                f.picture.label(),
                COLUMN_NAMES[f.column],
                COLUMNS[f.column],
                f.n,
                f.n,
                label,
                generated,
                horizon,
                if f.passed() { "ok" } else { "MISMATCH" }
            );
        }
        out
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_decode() {
        let e = Expected::parse("Yes*, DI/SD").unwrap();
        assert_eq!(e.generation, Some(true));
        assert!(e.footnote && e.ambiguous());
        assert_eq!(e.labels, vec![Label::Di, Label::Sd]);
        assert_eq!(Expected::parse("No").unwrap().labels, vec![Label::None]);
        assert_eq!(Expected::parse("AL").unwrap().generation, None);
        for t in [PUBLISHED_SC, PUBLISHED_AC] {
            for row in t {
                for c in row {
                    Expected::parse(c).unwrap();
                }
            }
        }
    }

    #[test]
    fn single_cells() {
        let o = TableOptions {
            samples: 1500,
            ..TableOptions::default()
        };
        let s = cell_scenario(Picture::Sc, 0, 0, RowParam::Pair(2, 1), &o).unwrap();
        assert_eq!(observe(&s).unwrap().label, Label::None);
        let s = cell_scenario(Picture::Sc, 1, 1, RowParam::Pair(2, 1), &o).unwrap();
        let obs = observe(&s).unwrap();
        assert!(obs.generated);
        assert_eq!(obs.label, Label::Di);
        let s = cell_scenario(Picture::Ac, 0, 0, RowParam::Pair(1, 1), &o).unwrap();
        assert_eq!(observe(&s).unwrap().label, Label::None);
    }

    #[test]
    fn cutoff_grows_for_hot_fields() {
        let o = TableOptions::default();
        let s = cell_scenario(Picture::Sc, 2, 0, RowParam::Nbar(0.75), &o).unwrap();
        assert!(s.params.n_max > 12);
    }
}
