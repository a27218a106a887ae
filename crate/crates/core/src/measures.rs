//! Entanglement measures and closed-form concurrences.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen_unchecked, kron, pauli_y, trace_norm_hermitian, CMatrix,
};
use crate::space::CompositeSpace;
use crate::state::{partial_transpose, DensityMatrix};

/// Trace and positivity slack accepted by [`concurrence`].
pub const STATE_TOL: f64 = 1e-8;

/// Largest `|ξ|` accepted by the low-squeezing approximations.
pub const LOW_SQUEEZE_LIMIT: f64 = 0.2;

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)` in the basis `{ee, eg, ge, gg}`.
pub fn spin_flip(rho: &CMatrix) -> CMatrix {
    let yy = kron(&pauli_y(), &pauli_y()).expect("4x4");
    &yy * rho.map(|z| z.conj()) * &yy
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.space().dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a two-qubit state, got {:?}",
            rho.space().dims()
        )));
    }
    rho.validate(STATE_TOL)
}

/// Eigenvalues of a density matrix below this are rounding noise and are
/// dropped from its support before the concurrence is formed.
pub const SUPPORT_CLIP: f64 = 1e-14;

/// Wootters concurrence.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    Ok(concurrence_matrix(rho.matrix()))
}

/// [`concurrence`] without validation.
///
/// With `ρ = V V†` over its support, the `λᵢ` are the singular values of
/// `Vᵀ (σ_y ⊗ σ_y) V`. Going through singular values rather than square roots
/// of the eigenvalues of `ρρ̃` keeps rounding noise at `1e-16` instead of
/// `1e-8` for rank-deficient states.
pub fn concurrence_matrix(rho: &CMatrix) -> f64 {
    let eig = hermitian_eigen_unchecked(rho);
    let support: Vec<usize> = (0..4).filter(|&k| eig.values[k] > SUPPORT_CLIP).collect();
    if support.is_empty() {
        return 0.0;
    }
    let v = CMatrix::from_fn(4, support.len(), |i, j| {
        let k = support[j];
        eig.vectors[(i, k)] * eig.values[k].sqrt()
    });
    let yy = kron(&pauli_y(), &pauli_y()).expect("4x4");
    let tau = v.transpose() * yy * &v;
    let mut mu: Vec<f64> = tau.singular_values().iter().copied().collect();
    mu.resize(4, 0.0);
    mu.sort_by(|a, b| b.total_cmp(a));
    (mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0)
}

/// Concurrence of an X-shaped state from its seven nonzero entries:
/// `2 max(0, |ρ_{eg,ge}| − √(ρ_ee ρ_gg), |ρ_{ee,gg}| − √(ρ_eg ρ_ge))`.
/// For a single-excitation state this is `2|ρ_{eg,ge}|`.
pub fn concurrence_x_form(rho: &CMatrix) -> f64 {
    let d = |k: usize| rho[(k, k)].re.max(0.0);
    let a = rho[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    let b = rho[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    (2.0 * a.max(b)).max(0.0)
}

/// `h(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// `E_F = h((1 + √(1 − C²))/2)`.
pub fn entanglement_of_formation(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::Domain {
            name: "concurrence",
            value: c,
            domain: "[0, 1]",
        });
    }
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// `(‖ρ^{T_B}‖₁ − 1)/2` with the listed factors transposed.
pub fn negativity(rho: &DensityMatrix, transposed: &[usize]) -> Result<f64> {
    let pt = partial_transpose(rho, transposed)?;
    let n = (trace_norm_hermitian(&pt)? - 1.0) / 2.0;
    Ok(if n.abs() < 1e-12 { 0.0 } else { n.max(0.0) })
}

/// A bipartition for negativity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cut {
    /// atom 1 | atom 2, on the atomic reduced state
    Atoms,
    /// mode 1 | mode 2, on the field reduced state
    Modes,
    /// (atom 1, mode 1) | (atom 2, mode 2), on the full state
    Pairs,
}

impl Cut {
    pub const ALL: [Cut; 3] = [Cut::Atoms, Cut::Modes, Cut::Pairs];

    pub fn label(self) -> &'static str {
        match self {
            Cut::Atoms => "atoms",
            Cut::Modes => "modes",
            Cut::Pairs => "pairs",
        }
    }

    /// Factors of the full state kept before the transpose.
    pub fn kept_factors(self) -> &'static [usize] {
        match self {
            Cut::Atoms => &[0, 1],
            Cut::Modes => &[2, 3],
            Cut::Pairs => &[0, 1, 2, 3],
        }
    }

    /// Factors of the kept state that are transposed.
    pub fn transposed_factors(self) -> &'static [usize] {
        match self {
            Cut::Atoms | Cut::Modes => &[1],
            Cut::Pairs => &[1, 3],
        }
    }

    pub fn valid_for(self, space: &CompositeSpace) -> bool {
        match self {
            Cut::Atoms => space.n_factors() >= 2,
            Cut::Modes | Cut::Pairs => space.n_factors() == 4,
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Cut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Cut::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown cut '{s}'")))
    }
}

/// One sampled point of a concurrence/negativity series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementSample {
    pub t: f64,
    pub concurrence: f64,
    pub negativity: Option<f64>,
    pub cut: Cut,
}

/// `K₁ = 2g sin(φ/4)`.
pub fn k1(phi: f64, g: f64) -> f64 {
    2.0 * g * (phi / 4.0).sin()
}

/// `K₂ = 2g cos(φ/4)`.
pub fn k2(phi: f64, g: f64) -> f64 {
    2.0 * g * (phi / 4.0).cos()
}

/// Concurrence for the initial state `|eg, 0, 0⟩`:
/// `¼ |cos 2K₁t − cos 2K₂t|`.
pub fn concurrence_eg00(phi: f64, g: f64, t: f64) -> f64 {
    0.25 * ((2.0 * k1(phi, g) * t).cos() - (2.0 * k2(phi, g) * t).cos()).abs()
}

/// Concurrence for `|gg, 1, 0⟩`: `½ (sin² K₁t + sin² K₂t)`.
pub fn concurrence_gg10(phi: f64, g: f64, t: f64) -> f64 {
    0.5 * ((k1(phi, g) * t).sin().powi(2) + (k2(phi, g) * t).sin().powi(2))
}

/// Printed concurrence for `(|eg⟩ + |ge⟩)|0, 0⟩/√2`:
/// `cos²(K₁t) cos²(φ/4) + cos²(K₂t) sin²(φ/4)`. Audit only; see the tests for
/// how it compares to direct evolution.
pub fn concurrence_bell00(phi: f64, g: f64, t: f64) -> f64 {
    let (c4, s4) = ((phi / 4.0).cos(), (phi / 4.0).sin());
    (k1(phi, g) * t).cos().powi(2) * c4 * c4 + (k2(phi, g) * t).cos().powi(2) * s4 * s4
}

/// The first `count` instants `mπ/|K₁ − K₂|`, `m = 1, 2, …`; empty when
/// `K₁ = K₂`.
pub fn death_times_eg00(phi: f64, g: f64, count: usize) -> Vec<f64> {
    let gap = (k1(phi, g) - k2(phi, g)).abs();
    if gap < 1e-14 {
        return Vec::new();
    }
    (1..=count).map(|m| m as f64 * std::f64::consts::PI / gap).collect()
}

/// Small-squeezing estimates of the atom-atom and field-field negativities
/// for `|ee⟩` with a two-mode squeezed vacuum in the independent-pair model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowSqueezeNegativity {
    pub atoms: f64,
    pub fields: f64,
}

/// `𝒩_{A₁−A₂} ≈ |min(s₁²c₁² − ξ s₁²c₂², 0)|`,
/// `𝒩_{TF₁−TF₂} ≈ |min(s₁²c₁² − ξ c₁²c₂², 0)|` with `s₁ = sin √2gt`,
/// `c₁ = cos √2gt`, `c₂ = cos 2gt`. `ξ` is read as the real squeezing
/// amplitude.
pub fn negativity_lowsqueeze_approx(xi: f64, g: f64, t: f64) -> Result<LowSqueezeNegativity> {
    if !(xi.abs() <= LOW_SQUEEZE_LIMIT) {
        return Err(Error::OutOfValidity(xi.abs()));
    }
    let x = std::f64::consts::SQRT_2 * g * t;
    let (s1, c1, c2) = (x.sin(), x.cos(), (2.0 * g * t).cos());
    let base = s1 * s1 * c1 * c1;
    Ok(LowSqueezeNegativity {
        atoms: (base - xi * s1 * s1 * c2 * c2).min(0.0).abs(),
        fields: (base - xi * c1 * c1 * c2 * c2).min(0.0).abs(),
    })
}
