//! Qualitative labels for concurrence time series and parameter scans.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default threshold below which a concurrence value counts as zero.
pub const DEFAULT_EPS_ZERO: f64 = 1e-6;
/// Default minimal dead-interval length, as a fraction of the horizon.
pub const DEFAULT_DEAD_FRACTION: f64 = 1e-3;
/// Edge-refinement resolution, as a fraction of the horizon.
pub const REFINE_FRACTION: f64 = 1e-4;
pub const MIN_SAMPLES: usize = 500;
/// The horizon must cover at least this many periods of the detected
/// oscillation.
pub const MIN_PERIODS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// never entangled
    None,
    /// sudden death: zero over a finite interval after first generation
    Sd,
    /// dies only at isolated instants
    Di,
    /// never zero after first generation
    Al,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::None => "NONE",
            Label::Sd => "SD",
            Label::Di => "DI",
            Label::Al => "AL",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NONE" => Ok(Label::None),
            "SD" => Ok(Label::Sd),
            "DI" => Ok(Label::Di),
            "AL" => Ok(Label::Al),
            _ => Err(Error::Config(format!("unknown label '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub eps_zero: f64,
    /// Absolute minimal dead-interval length; `None` means
    /// `DEFAULT_DEAD_FRACTION · horizon`.
    pub delta_dead: Option<f64>,
    /// Reject series whose detected period exceeds `horizon / MIN_PERIODS`.
    pub check_horizon: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            eps_zero: DEFAULT_EPS_ZERO,
            delta_dead: None,
            check_horizon: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsVerdict {
    pub label: Label,
    pub dead_intervals: Vec<(f64, f64)>,
    /// Instants where the series touches zero for no longer than the dead
    /// threshold.
    pub isolated_zeros: Vec<f64>,
    pub first_generation_time: Option<f64>,
    /// Smallest sampled value from first generation on.
    pub min_after_generation: Option<f64>,
    pub max_value: f64,
    pub period_estimate: Option<f64>,
    pub horizon: f64,
    pub samples: usize,
}

impl DynamicsVerdict {
    /// Whether entanglement appears at some `t > 0` after being absent at
    /// `t = 0`.
    pub fn generated(&self) -> bool {
        self.first_generation_time.is_some_and(|t| t > 0.0)
    }
}

/// Outcome of the autocorrelation period search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeriodEstimate {
    Found(f64),
    /// The autocorrelation changes sign but has no maximum within half the
    /// horizon, so any period is longer than that.
    Longer(f64),
    /// No oscillation detected.
    Aperiodic,
}

/// Period of the dominant oscillation: the lag of the first autocorrelation
/// maximum after its first zero crossing.
pub fn estimate_period(times: &[f64], values: &[f64]) -> Option<f64> {
    match period_search(times, values) {
        PeriodEstimate::Found(p) => Some(p),
        _ => None,
    }
}

pub fn period_search(times: &[f64], values: &[f64]) -> PeriodEstimate {
    let n = values.len();
    if n < 4 {
        return PeriodEstimate::Aperiodic;
    }
    let dt = times[1] - times[0];
    let mean = values.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let var: f64 = x.iter().map(|v| v * v).sum();
    if var <= 1e-300 {
        return PeriodEstimate::Aperiodic;
    }
    let r = |k: usize| x[..n - k].iter().zip(&x[k..]).map(|(a, b)| a * b).sum::<f64>() / var;
    let max_lag = n / 2;
    let mut crossed = false;
    let mut prev = r(0);
    let mut cur = r(1);
    for k in 1..max_lag {
        let next = r(k + 1);
        if !crossed {
            crossed = cur < 0.0;
        } else if cur >= prev && cur >= next && cur > 0.0 {
            return PeriodEstimate::Found(k as f64 * dt);
        }
        prev = cur;
        cur = next;
    }
    if crossed {
        PeriodEstimate::Longer(max_lag as f64 * dt)
    } else {
        PeriodEstimate::Aperiodic
    }
}

fn bisect_edge(probe: &dyn Fn(f64) -> f64, eps: f64, mut above: f64, mut below: f64, res: f64) -> f64 {
    while (above - below).abs() > res {
        let mid = 0.5 * (above + below);
        if probe(mid) <= eps {
            below = mid;
        } else {
            above = mid;
        }
    }
    0.5 * (above + below)
}

fn golden_min(probe: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (probe(c), probe(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = probe(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = probe(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Labels a uniformly sampled series. When `probe` evaluates the underlying
/// quantity at arbitrary times, zero-region edges are refined by bisection and
/// sampled local minima that could hide a zero between grid points are
/// minimized by golden-section search.
pub fn classify(
    times: &[f64],
    values: &[f64],
    opts: &ClassifyOptions,
    probe: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Result<DynamicsVerdict> {
    let n = values.len();
    if n < MIN_SAMPLES || times.len() != n {
        return Err(Error::InsufficientSamples {
            got: n.min(times.len()),
            need: MIN_SAMPLES,
        });
    }
    let horizon = times[n - 1] - times[0];
    let dt = horizon / (n - 1) as f64;
    if !(dt > 0.0)
        || times
            .windows(2)
            .any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt)
    {
        return Err(Error::InsufficientSamples { got: n, need: MIN_SAMPLES });
    }
    let eps = opts.eps_zero;
    let delta = opts.delta_dead.unwrap_or(DEFAULT_DEAD_FRACTION * horizon);
    let res = REFINE_FRACTION * horizon;
    let max_value = values.iter().copied().fold(0.0, f64::max);
    let mut verdict = DynamicsVerdict {
        label: Label::None,
        dead_intervals: Vec::new(),
        isolated_zeros: Vec::new(),
        first_generation_time: None,
        min_after_generation: None,
        max_value,
        period_estimate: None,
        horizon,
        samples: n,
    };
    if max_value <= eps {
        return Ok(verdict);
    }
    let limit = horizon / MIN_PERIODS;
    match period_search(times, values) {
        PeriodEstimate::Found(p) => {
            verdict.period_estimate = Some(p);
            if opts.check_horizon && p > limit {
                return Err(Error::InsufficientHorizon { period: p, limit });
            }
        }
        PeriodEstimate::Longer(p) if opts.check_horizon => {
            return Err(Error::InsufficientHorizon { period: p, limit });
        }
        _ => {}
    }

    let gen = values.iter().position(|&v| v > eps).expect("max exceeds eps");
    verdict.min_after_generation = Some(values[gen..].iter().copied().fold(f64::INFINITY, f64::min));
    verdict.first_generation_time = Some(match (gen, probe) {
        (0, _) => times[0],
        (i, Some(f)) => {
            let mut above = times[i];
            let mut below = times[i - 1];
            while above - below > res {
                let mid = 0.5 * (above + below);
                if f(mid) > eps {
                    above = mid;
                } else {
                    below = mid;
                }
            }
            above
        }
        (i, None) => times[i],
    });

    // an isolated zero sits at the minimum inside its eps band
    let push_zero = |left: f64, right: f64, v: &mut DynamicsVerdict| {
        if right - left > delta {
            v.dead_intervals.push((left, right));
        } else {
            let at = match probe {
                Some(f) => golden_min(f, left - res, right + res, 1e-10 * horizon.max(1.0)).0,
                None => 0.5 * (left + right),
            };
            v.isolated_zeros.push(at);
        }
    };

    let mut i = gen;
    while i < n {
        if values[i] <= eps {
            let start = i;
            while i < n && values[i] <= eps {
                i += 1;
            }
            let end = i - 1;
            let left = match probe {
                Some(f) => bisect_edge(f, eps, times[start - 1], times[start], res),
                None => times[start] - 0.5 * dt,
            };
            let right = if end + 1 < n {
                match probe {
                    Some(f) => bisect_edge(f, eps, times[end + 1], times[end], res),
                    None => times[end] + 0.5 * dt,
                }
            } else {
                times[end]
            };
            push_zero(left, right, &mut verdict);
            continue;
        }
        if let Some(f) = probe {
            if i > gen && i + 1 < n && values[i] <= values[i - 1] && values[i] <= values[i + 1] {
                let jump = (values[i - 1] - values[i]).max(values[i + 1] - values[i]);
                if values[i] <= 2.0 * jump {
                    let (tm, vm) = golden_min(f, times[i - 1], times[i + 1], 1e-10 * horizon.max(1.0));
                    if vm <= eps {
                        let left = bisect_edge(f, eps, times[i - 1], tm, res);
                        let right = bisect_edge(f, eps, times[i + 1], tm, res);
                        push_zero(left, right, &mut verdict);
                    }
                }
            }
        }
        i += 1;
    }
    verdict.isolated_zeros.sort_by(f64::total_cmp);
    verdict.isolated_zeros.dedup_by(|a, b| (*a - *b).abs() < res);
    verdict.label = if !verdict.dead_intervals.is_empty() {
        Label::Sd
    } else if !verdict.isolated_zeros.is_empty() {
        Label::Di
    } else {
        Label::Al
    };
    Ok(verdict)
}

/// Result of locating a label switch along one parameter axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub parameter: String,
    pub lo: f64,
    pub hi: f64,
    pub critical: f64,
    pub uncertainty: f64,
    pub low_label: Label,
    pub high_label: Label,
    /// Every evaluated point, sorted by parameter value.
    pub probes: Vec<(f64, Label)>,
}

/// Brackets the first point above `lo` where the label differs from the label
/// at `lo`, by repeated `k`-section with the `k` interior probes of each round
/// evaluated in parallel, until the bracket is narrower than `2·tol`.
pub fn scan_critical<F>(parameter: &str, lo: f64, hi: f64, tol: f64, k: usize, eval: F) -> Result<ScanResult>
where
    F: Fn(f64) -> Result<Label> + Sync,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::Config(format!(
            "scan over [{lo}, {hi}] with tolerance {tol} is empty"
        )));
    }
    let k = k.max(1);
    let ends: Vec<Result<Label>> = [lo, hi].par_iter().map(|&x| eval(x)).collect();
    let mut ends = ends.into_iter();
    let low_label = ends.next().expect("two")?;
    let high_label = ends.next().expect("two")?;
    let mut probes = vec![(lo, low_label), (hi, high_label)];
    if low_label == high_label {
        return Err(Error::NoSwitch {
            lo,
            hi,
            label: low_label.to_string(),
        });
    }
    let (mut a, mut b) = (lo, hi);
    let mut b_label = high_label;
    while b - a > 2.0 * tol {
        let pts: Vec<f64> = (1..=k).map(|j| a + (b - a) * j as f64 / (k + 1) as f64).collect();
        let labels: Vec<Label> = pts
            .par_iter()
            .map(|&x| eval(x))
            .collect::<Result<Vec<_>>>()?;
        probes.extend(pts.iter().copied().zip(labels.iter().copied()));
        match labels.iter().position(|&l| l != low_label) {
            Some(0) => {
                b = pts[0];
                b_label = labels[0];
            }
            Some(j) => {
                a = pts[j - 1];
                b = pts[j];
                b_label = labels[j];
            }
            None => a = pts[k - 1],
        }
    }
    probes.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(ScanResult {
        parameter: parameter.to_string(),
        lo,
        hi,
        critical: 0.5 * (a + b),
        uncertainty: 0.5 * (b - a),
        low_label,
        high_label: b_label,
        probes,
    })
}

/// Location of the largest value of a scalar objective over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumResult {
    pub parameter: String,
    pub grid: Vec<(f64, f64)>,
    pub argmax: f64,
    pub max: f64,
    /// The maximum is attained strictly inside the range and exceeds both
    /// endpoint values.
    pub interior: bool,
}

/// Evaluates `eval` on `points` uniformly spaced values in `[lo, hi]` (in
/// parallel) and reports the grid maximum.
pub fn scan_optimum<F>(parameter: &str, lo: f64, hi: f64, points: usize, eval: F) -> Result<OptimumResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if points < 3 || !(lo < hi) {
        return Err(Error::Config(
            "an optimum scan needs at least three points on a nonempty range".into(),
        ));
    }
    let xs: Vec<f64> = (0..points)
        .map(|j| lo + (hi - lo) * j as f64 / (points - 1) as f64)
        .collect();
    let ys = xs.par_iter().map(|&x| eval(x)).collect::<Result<Vec<_>>>()?;
    let (best, &max) = ys
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let interior = best > 0 && best + 1 < points && max > ys[0] && max > ys[points - 1];
    Ok(OptimumResult {
        parameter: parameter.to_string(),
        grid: xs.into_iter().zip(ys).collect(),
        argmax: lo + (hi - lo) * best as f64 / (points - 1) as f64,
        max,
        interior,
    })
}
