//! Atomic and field initial states.
//!
//! Every truncating constructor renormalizes after cutting the Fock ladder at
//! `n_max` and reports the discarded probability mass; it refuses to build the
//! state when that mass exceeds the tolerance.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{re, CVector, ZERO};
use crate::space::CompositeSpace;
use crate::state::{DensityMatrix, Ensemble, QuantumState, StateVector};

/// Default bound on the probability mass discarded by truncation.
pub const DEFAULT_EPS_TRUNC: f64 = 1e-8;

/// Per-mode Fock cutoff and the tolerated discarded mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub n_max: usize,
    pub eps: f64,
}

impl Truncation {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            eps: DEFAULT_EPS_TRUNC,
        }
    }

    pub fn with_eps(n_max: usize, eps: f64) -> Self {
        Self { n_max, eps }
    }

    fn mode_space(&self) -> CompositeSpace {
        CompositeSpace::new(vec![self.n_max + 1]).expect("positive")
    }

    fn pair_space(&self) -> CompositeSpace {
        CompositeSpace::new(vec![self.n_max + 1, self.n_max + 1]).expect("positive")
    }

    fn check_tail(&self, tail: f64) -> Result<()> {
        if tail > self.eps {
            Err(Error::TruncationTooSmall {
                tail,
                tol: self.eps,
                n_max: self.n_max,
            })
        } else {
            Ok(())
        }
    }

    fn check_occupation(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            Err(Error::ExceedsTruncation {
                requested: n,
                n_max: self.n_max,
            })
        } else {
            Ok(())
        }
    }
}

/// A renormalized state together with the probability mass cut away.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<S> {
    pub state: S,
    pub discarded: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AtomicState {
    #[serde(rename = "gg")]
    Gg,
    #[serde(rename = "ee")]
    Ee,
    #[serde(rename = "eg")]
    Eg,
    #[serde(rename = "ge")]
    Ge,
    /// `(|ee⟩ + |gg⟩)/√2`
    #[serde(rename = "phi")]
    Phi,
    /// `(|eg⟩ + |ge⟩)/√2`
    #[serde(rename = "psi")]
    Psi,
}

impl AtomicState {
    pub const ALL: [AtomicState; 6] = [
        AtomicState::Ee,
        AtomicState::Eg,
        AtomicState::Ge,
        AtomicState::Gg,
        AtomicState::Phi,
        AtomicState::Psi,
    ];

    /// Amplitudes in the basis `{ee, eg, ge, gg}`.
    pub fn amplitudes(self) -> [C64; 4] {
        let h = re(std::f64::consts::FRAC_1_SQRT_2);
        let (o, z) = (re(1.0), ZERO);
        match self {
            AtomicState::Ee => [o, z, z, z],
            AtomicState::Eg => [z, o, z, z],
            AtomicState::Ge => [z, z, o, z],
            AtomicState::Gg => [z, z, z, o],
            AtomicState::Phi => [h, z, z, h],
            AtomicState::Psi => [z, h, h, z],
        }
    }

    pub fn vector(self) -> StateVector {
        let space = CompositeSpace::new(vec![2, 2]).expect("positive");
        StateVector::from_raw(space, CVector::from_row_slice(&self.amplitudes()))
    }

    pub fn is_separable(self) -> bool {
        !matches!(self, AtomicState::Phi | AtomicState::Psi)
    }

    pub fn label(self) -> &'static str {
        match self {
            AtomicState::Gg => "gg",
            AtomicState::Ee => "ee",
            AtomicState::Eg => "eg",
            AtomicState::Ge => "ge",
            AtomicState::Phi => "phi",
            AtomicState::Psi => "psi",
        }
    }
}

impl fmt::Display for AtomicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AtomicState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AtomicState::ALL
            .into_iter()
            .find(|a| a.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown atomic state '{s}'")))
    }
}

/// A two-mode field state in the original mode picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec {
    Fock { n: usize, m: usize },
    Coherent { alpha: C64, beta: C64 },
    /// `|ξ, −ξ⟩`, a product of single-mode squeezed vacua.
    SqueezedPair { xi: C64 },
    /// Two-mode squeezed vacuum `Ŝ(ξ)|0,0⟩`.
    Tmss { xi: C64 },
    /// Equal-temperature thermal state in both modes.
    Thermal { nbar: f64 },
    Eta { n: usize, m: usize },
    /// Mode-1 state `ρ_nm`, mode 2 in vacuum.
    RhoNm { n: usize, m: usize },
}

impl FieldSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            FieldSpec::Fock { .. } => "fock",
            FieldSpec::Coherent { .. } => "coherent",
            FieldSpec::SqueezedPair { .. } => "squeezed_pair",
            FieldSpec::Tmss { .. } => "tmss",
            FieldSpec::Thermal { .. } => "thermal",
            FieldSpec::Eta { .. } => "eta",
            FieldSpec::RhoNm { .. } => "rho_nm",
        }
    }

    /// Largest single-mode occupation the state needs exactly (Fock-like
    /// states only).
    pub fn fock_extent(&self) -> Option<usize> {
        match *self {
            FieldSpec::Fock { n, m } => Some(n.max(m)),
            FieldSpec::Eta { n, m } | FieldSpec::RhoNm { n, m } => Some(n + m),
            _ => None,
        }
    }

    /// Builds the two-mode state on `[n_max+1, n_max+1]`.
    pub fn prepare(&self, trunc: Truncation) -> Result<Truncated<QuantumState>> {
        let pure = |s: StateVector, d: f64| Truncated {
            state: QuantumState::Pure(s),
            discarded: d,
        };
        Ok(match *self {
            FieldSpec::Fock { n, m } => pure(fock_state(n, m, trunc)?, 0.0),
            FieldSpec::Coherent { alpha, beta } => {
                let a = coherent_state(alpha, trunc)?;
                let b = coherent_state(beta, trunc)?;
                pure(
                    a.state.tensor(&b.state)?,
                    combined_discard(a.discarded, b.discarded),
                )
            }
            FieldSpec::SqueezedPair { xi } => {
                let a = squeezed_vacuum(xi, trunc)?;
                let b = squeezed_vacuum(-xi, trunc)?;
                pure(
                    a.state.tensor(&b.state)?,
                    combined_discard(a.discarded, b.discarded),
                )
            }
            FieldSpec::Tmss { xi } => {
                let s = two_mode_squeezed(xi, trunc)?;
                pure(s.state, s.discarded)
            }
            FieldSpec::Thermal { nbar } => {
                let pair = thermal_pair(nbar, trunc)?;
                Truncated {
                    state: QuantumState::Mixed(pair.state),
                    discarded: pair.discarded,
                }
            }
            FieldSpec::Eta { n, m } => pure(eta_state(n, m, trunc)?, 0.0),
            FieldSpec::RhoNm { n, m } => {
                let rho = rho_nm_state(n, m, trunc)?;
                let vac = StateVector::basis(trunc.mode_space(), &[0]);
                let mode1 = diagonal_ensemble(&rho)?;
                let vac = Ensemble::new(vac.space().clone(), vec![(1.0, vac)])?;
                Truncated {
                    state: QuantumState::Mixed(mode1.tensor(&vac)?),
                    discarded: 0.0,
                }
            }
        })
    }
}

fn combined_discard(a: f64, b: f64) -> f64 {
    1.0 - (1.0 - a) * (1.0 - b)
}

/// Ensemble of Fock states from a (Fock-diagonal) density matrix.
fn diagonal_ensemble(rho: &DensityMatrix) -> Result<Ensemble> {
    let space = rho.space().clone();
    let members = (0..space.total_dim())
        .filter_map(|k| {
            let p = rho.matrix()[(k, k)].re;
            (p > 0.0).then(|| (p, StateVector::basis(space.clone(), &space.multi_index(k))))
        })
        .collect();
    Ensemble::new(space, members)
}

/// `|n, m⟩` on the two-mode field.
pub fn fock_state(n: usize, m: usize, trunc: Truncation) -> Result<StateVector> {
    trunc.check_occupation(n)?;
    trunc.check_occupation(m)?;
    Ok(StateVector::basis(trunc.pair_space(), &[n, m]))
}

/// Glauber coherent state `|α⟩` on one mode.
pub fn coherent_state(alpha: C64, trunc: Truncation) -> Result<Truncated<StateVector>> {
    let mut amps = Vec::with_capacity(trunc.n_max + 1);
    let mut c = re((-alpha.norm_sqr() / 2.0).exp());
    amps.push(c);
    for n in 1..=trunc.n_max {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    finish_single(amps, trunc)
}

/// Squeezed vacuum `exp(½(ξ* â² − ξ â†²))|0⟩` on one mode.
pub fn squeezed_vacuum(xi: C64, trunc: Truncation) -> Result<Truncated<StateVector>> {
    let (r, theta) = xi.to_polar();
    let ratio = -C64::from_polar(r.tanh(), theta);
    let mut amps = vec![ZERO; trunc.n_max + 1];
    let mut c = re(1.0 / r.cosh().sqrt());
    amps[0] = c;
    let mut k = 1;
    while 2 * k <= trunc.n_max {
        c = c * ratio * ((2 * k - 1) as f64 / (2 * k) as f64).sqrt();
        amps[2 * k] = c;
        k += 1;
    }
    finish_single(amps, trunc)
}

fn finish_single(amps: Vec<C64>, trunc: Truncation) -> Result<Truncated<StateVector>> {
    let v = CVector::from_vec(amps);
    let kept = v.norm_squared();
    let discarded = (1.0 - kept).max(0.0);
    trunc.check_tail(discarded)?;
    Ok(Truncated {
        state: StateVector::normalized(trunc.mode_space(), v)?,
        discarded,
    })
}

/// Two-mode squeezed vacuum `exp(ξ* â₁â₂ − ξ â₁†â₂†)|0,0⟩`.
pub fn two_mode_squeezed(xi: C64, trunc: Truncation) -> Result<Truncated<StateVector>> {
    let (r, theta) = xi.to_polar();
    let ratio = -C64::from_polar(r.tanh(), theta);
    let space = trunc.pair_space();
    let mut v = CVector::zeros(space.total_dim());
    let mut c = re(1.0 / r.cosh());
    for n in 0..=trunc.n_max {
        v[space.flat_index(&[n, n])] = c;
        c *= ratio;
    }
    let discarded = (1.0 - v.norm_squared()).max(0.0);
    trunc.check_tail(discarded)?;
    Ok(Truncated {
        state: StateVector::normalized(space, v)?,
        discarded,
    })
}

/// Single-mode thermal state with mean occupation `nbar`, as a Fock ensemble.
pub fn thermal_state(nbar: f64, trunc: Truncation) -> Result<Truncated<Ensemble>> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::Domain {
            name: "nbar",
            value: nbar,
            domain: "[0, inf)",
        });
    }
    let q = nbar / (1.0 + nbar);
    let space = trunc.mode_space();
    let mut members = Vec::new();
    let mut p = 1.0 / (1.0 + nbar);
    for n in 0..=trunc.n_max {
        if p > 0.0 {
            members.push((p, StateVector::basis(space.clone(), &[n])));
        }
        p *= q;
    }
    let discarded = q.powi(trunc.n_max as i32 + 1);
    trunc.check_tail(discarded)?;
    Ok(Truncated {
        state: Ensemble::new(space, members)?,
        discarded,
    })
}

/// Equal-temperature thermal state of both modes, truncated on the total
/// photon number `n + m ≤ N_max` rather than per mode. The excitation
/// sectors reached then stop at `N_max + 2`, not `2 N_max + 2`.
pub fn thermal_pair(nbar: f64, trunc: Truncation) -> Result<Truncated<Ensemble>> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::Domain {
            name: "nbar",
            value: nbar,
            domain: "[0, inf)",
        });
    }
    let q = nbar / (1.0 + nbar);
    let p0 = 1.0 / (1.0 + nbar);
    let space = trunc.pair_space();
    let mut members = Vec::new();
    let mut kept = 0.0;
    for s in 0..=trunc.n_max {
        let w = p0 * p0 * q.powi(s as i32);
        if w <= 0.0 {
            continue;
        }
        for n in 0..=s {
            members.push((w, StateVector::basis(space.clone(), &[n, s - n])));
            kept += w;
        }
    }
    let discarded = (1.0 - kept).max(0.0);
    trunc.check_tail(discarded)?;
    Ok(Truncated {
        state: Ensemble::new(space, members)?,
        discarded,
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Image of `|n, m⟩` in the transformed modes `Â₁ = (â₁+â₂)/√2`,
/// `Â₂ = (â₁−â₂)/√2`:
///
/// ```text
/// |η_nm⟩ = (2^{n+m} n! m!)^{-1/2} Σ_k Σ_l C(n,k) C(m,l) √((n+m−k−l)! (k+l)!) (−1)^l |n+m−k−l, k+l⟩
/// ```
pub fn eta_state(n: usize, m: usize, trunc: Truncation) -> Result<StateVector> {
    trunc.check_occupation(n + m)?;
    let space = trunc.pair_space();
    let mut v = CVector::zeros(space.total_dim());
    let norm = (2f64.powi((n + m) as i32) * factorial(n) * factorial(m)).sqrt();
    for k in 0..=n {
        for l in 0..=m {
            let a = n + m - k - l;
            let b = k + l;
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let c = binomial(n, k) * binomial(m, l) * (factorial(a) * factorial(b)).sqrt() * sign
                / norm;
            v[space.flat_index(&[a, b])] += re(c);
        }
    }
    StateVector::new(space, v)
}

/// `ρ_nm = Tr_{TF₂} |η_nm⟩⟨η_nm|` on one mode.
pub fn rho_nm_state(n: usize, m: usize, trunc: Truncation) -> Result<DensityMatrix> {
    eta_state(n, m, trunc)?.reduce(&[0])
}

/// Diagonal of the closed-form `ρ_nm` sum with the `κ_mnkl` weights exactly as
/// printed (sign `(−1)^l` only). Kept for comparison against
/// [`rho_nm_state`]; not used for evolution.
pub fn rho_nm_printed_diagonal(n: usize, m: usize) -> Vec<f64> {
    let mut diag = vec![0.0; n + m + 1];
    let denom = 2f64.powi((n + m) as i32) * factorial(n) * factorial(m);
    for k in 0..=n {
        for p in 0..=n {
            for l in 0..=m {
                for q in 0..=m {
                    if k + l != p + q {
                        continue;
                    }
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    let kappa = binomial(n, k)
                        * binomial(n, p)
                        * binomial(m, l)
                        * binomial(m, q)
                        * factorial(n + m - k - l)
                        * factorial(k + l)
                        * sign;
                    diag[n + m - k - l] += kappa / denom;
                }
            }
        }
    }
    diag
}

/// `atomic ⊗ field` in the fixed factor order, checked against `space`.
pub fn assemble_initial(
    atomic: AtomicState,
    field: &QuantumState,
    space: &CompositeSpace,
) -> Result<QuantumState> {
    let state = QuantumState::Pure(atomic.vector()).tensor(field)?;
    if state.space() != space {
        return Err(Error::DimensionMismatch(format!(
            "assembled state lives on {:?}, expected {:?}",
            state.space().dims(),
            space.dims()
        )));
    }
    Ok(state)
}
