//! Hamiltonians of the two-atom, two-mode model and its transformed pictures.
//!
//! All Hamiltonians are in the resonant interaction picture with `ħ = 1`.
//! The general model is
//!
//! ```text
//! H(φ) = g (σ₁⁺a₁ + σ₁⁺a₂ + σ₂⁺a₁ + e^{iφ} σ₂⁺a₂ + h.c.)
//! ```
//!
//! With `Â₁ = (a₁+a₂)/√2`, `Â₂ = (a₁−a₂)/√2` the symmetric case `φ = 0` becomes
//! two atoms on one mode (Tavis-Cummings) and `φ = π` becomes two independent
//! Jaynes-Cummings pairs.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{kron_all, re, unitary_from_hamiltonian, CMatrix, HermitianOperator, ZERO};
use crate::space::{CompositeSpace, MODE2};
use crate::state::{partial_trace, DensityMatrix, Ensemble, QuantumState};

/// Local phase left on atom 2 after mapping `H(π)` onto the independent-pair
/// form. With `e^{iφ}` attached to `σ₂⁺a₂` the map is exact and no phase
/// remains.
pub const AC_RESIDUAL_ATOM2_PHASE: C64 = C64::new(1.0, 0.0);

/// One physical configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub g: f64,
    pub phi: f64,
    pub omega0: f64,
    /// Adds `ω₀ N̂` to every Hamiltonian. Off by default: it only multiplies
    /// each excitation sector by a phase.
    pub include_omega0: bool,
    pub n_max: usize,
    pub eps_trunc: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            g: 1.0,
            phi: 0.0,
            omega0: 0.0,
            include_omega0: false,
            n_max: 6,
            eps_trunc: crate::fields::DEFAULT_EPS_TRUNC,
        }
    }
}

impl ModelParams {
    pub fn new(g: f64, phi: f64, n_max: usize) -> Result<Self> {
        let p = Self {
            g,
            phi,
            n_max,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(Error::Domain {
                name: "g",
                value: self.g,
                domain: "(0, inf)",
            });
        }
        if !(0.0..2.0 * PI).contains(&self.phi) {
            return Err(Error::Domain {
                name: "phi",
                value: self.phi,
                domain: "[0, 2pi)",
            });
        }
        if self.n_max < 1 {
            return Err(Error::Domain {
                name: "n_max",
                value: self.n_max as f64,
                domain: "[1, inf)",
            });
        }
        if !(self.eps_trunc > 0.0 && self.eps_trunc < 1.0) {
            return Err(Error::Domain {
                name: "eps_trunc",
                value: self.eps_trunc,
                domain: "(0, 1)",
            });
        }
        Ok(())
    }

    pub fn truncation(&self) -> crate::fields::Truncation {
        crate::fields::Truncation::with_eps(self.n_max, self.eps_trunc)
    }

    fn omega0_term(&self) -> f64 {
        if self.include_omega0 {
            self.omega0
        } else {
            0.0
        }
    }
}

/// Which Hamiltonian a scenario evolves under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Picture {
    /// `H(φ)` on the original modes.
    General,
    /// `H(0)`.
    Sc,
    /// `H(π)`.
    Ac,
    /// Both atoms on the transformed mode `Â₁`; `Â₂` is traced out.
    Tc,
    /// Atom 1 on `Â₁`, atom 2 on `Â₂`.
    Djc,
}

impl Picture {
    pub const ALL: [Picture; 5] = [
        Picture::General,
        Picture::Sc,
        Picture::Ac,
        Picture::Tc,
        Picture::Djc,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Picture::General => "general",
            Picture::Sc => "sc",
            Picture::Ac => "ac",
            Picture::Tc => "tc",
            Picture::Djc => "djc",
        }
    }

    pub fn mode_picture(self) -> ModePicture {
        match self {
            Picture::General | Picture::Sc | Picture::Ac => ModePicture::Original,
            Picture::Tc | Picture::Djc => ModePicture::Transformed,
        }
    }

    /// The coupling pattern for this picture; `phi` is only read by
    /// [`Picture::General`].
    pub fn coupling_model(self, p: &ModelParams) -> CouplingModel {
        match self {
            Picture::General => CouplingModel::general(p),
            Picture::Sc => CouplingModel::general(&p.with_phi(0.0)),
            Picture::Ac => CouplingModel::general(&p.with_phi(PI)),
            Picture::Tc => CouplingModel::tc(p),
            Picture::Djc => CouplingModel::djc(p),
        }
    }
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Picture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Picture::ALL
            .into_iter()
            .find(|p| p.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown picture '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModePicture {
    Original,
    Transformed,
}

/// A term `c σ_atom⁺ a_mode + h.c.`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub atom: usize,
    pub mode: usize,
    pub strength: C64,
}

/// Two atoms coupled to one or two modes by a list of rotating-wave terms.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingModel {
    n_modes: usize,
    couplings: Vec<Coupling>,
    omega0: f64,
}

impl CouplingModel {
    pub fn new(n_modes: usize, couplings: Vec<Coupling>, omega0: f64) -> Result<Self> {
        if !(1..=2).contains(&n_modes) {
            return Err(Error::DimensionMismatch(format!(
                "models carry one or two modes, got {n_modes}"
            )));
        }
        for c in &couplings {
            if c.atom > 1 || c.mode >= n_modes {
                return Err(Error::DimensionMismatch(format!(
                    "coupling ({}, {}) outside 2 atoms x {n_modes} modes",
                    c.atom, c.mode
                )));
            }
        }
        Ok(Self {
            n_modes,
            couplings,
            omega0,
        })
    }

    pub fn general(p: &ModelParams) -> Self {
        let g = re(p.g);
        let couplings = vec![
            Coupling { atom: 0, mode: 0, strength: g },
            Coupling { atom: 0, mode: 1, strength: g },
            Coupling { atom: 1, mode: 0, strength: g },
            Coupling {
                atom: 1,
                mode: 1,
                strength: C64::from_polar(p.g, p.phi),
            },
        ];
        Self {
            n_modes: 2,
            couplings,
            omega0: p.omega0_term(),
        }
    }

    /// `√2 g (σ₁⁺Â₁ + σ₂⁺Â₁ + h.c.)` on a single mode.
    pub fn tc(p: &ModelParams) -> Self {
        let s = re(SQRT_2 * p.g);
        Self {
            n_modes: 1,
            couplings: vec![
                Coupling { atom: 0, mode: 0, strength: s },
                Coupling { atom: 1, mode: 0, strength: s },
            ],
            omega0: p.omega0_term(),
        }
    }

    /// `√2 g (σ₁⁺Â₁ + σ₂⁺Â₂ + h.c.)`.
    pub fn djc(p: &ModelParams) -> Self {
        let s = re(SQRT_2 * p.g);
        Self {
            n_modes: 2,
            couplings: vec![
                Coupling { atom: 0, mode: 0, strength: s },
                Coupling { atom: 1, mode: 1, strength: s },
            ],
            omega0: p.omega0_term(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn space(&self, n_max: usize) -> CompositeSpace {
        match self.n_modes {
            1 => CompositeSpace::single_mode(n_max),
            _ => CompositeSpace::two_mode(n_max),
        }
    }

    /// Dense matrix assembled from Kronecker products of single-factor
    /// operators.
    pub fn dense_hamiltonian(&self, space: &CompositeSpace) -> Result<HermitianOperator> {
        let want = self.space(space.n_max());
        if *space != want {
            return Err(Error::DimensionMismatch(format!(
                "space {:?} does not fit a {}-mode model",
                space.dims(),
                self.n_modes
            )));
        }
        let n_max = space.n_max();
        let mut h = CMatrix::zeros(space.total_dim(), space.total_dim());
        for c in &self.couplings {
            let mut factors = vec![CMatrix::identity(2, 2), CMatrix::identity(2, 2)];
            factors[c.atom] = sigma_plus();
            for q in 0..self.n_modes {
                factors.push(if q == c.mode {
                    annihilation(n_max)
                } else {
                    CMatrix::identity(n_max + 1, n_max + 1)
                });
            }
            let refs: Vec<&CMatrix> = factors.iter().collect();
            let term = kron_all(&refs)? * c.strength;
            h += &term + term.adjoint();
        }
        if self.omega0 != 0.0 {
            h += excitation_number(space)?.matrix() * re(self.omega0);
        }
        HermitianOperator::new(h)
    }
}

/// `σ⁺ = |e⟩⟨g|` with `e` at index 0.
pub fn sigma_plus() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = re(1.0);
    m
}

/// Truncated annihilation operator on `{|0⟩ … |n_max⟩}`.
pub fn annihilation(n_max: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = re((n as f64).sqrt());
    }
    a
}

pub fn number_operator(n_max: usize) -> CMatrix {
    CMatrix::from_fn(n_max + 1, n_max + 1, |i, j| {
        if i == j {
            re(i as f64)
        } else {
            ZERO
        }
    })
}

/// `H(φ)` on `[2, 2, N+1, N+1]`.
pub fn build_hamiltonian(p: &ModelParams, space: &CompositeSpace) -> Result<HermitianOperator> {
    p.validate()?;
    CouplingModel::general(p).dense_hamiltonian(space)
}

/// `√2 g (σ₁⁺Â₁ + σ₂⁺Â₁ + h.c.)` on `[2, 2, N+1]`.
pub fn build_tc_hamiltonian(p: &ModelParams, space: &CompositeSpace) -> Result<HermitianOperator> {
    CouplingModel::tc(p).dense_hamiltonian(space)
}

/// `√2 g (σ₁⁺Â₁ + σ₂⁺Â₂ + h.c.)` on `[2, 2, N+1, N+1]`.
pub fn build_djc_hamiltonian(p: &ModelParams, space: &CompositeSpace) -> Result<HermitianOperator> {
    CouplingModel::djc(p).dense_hamiltonian(space)
}

/// `N̂ = σ₁⁺σ₁⁻ + σ₂⁺σ₂⁻ + Σ a†a`, diagonal in the product basis.
pub fn excitation_number(space: &CompositeSpace) -> Result<HermitianOperator> {
    let n = space.total_dim();
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = re(space.excitation(k) as f64);
    }
    HermitianOperator::new(m)
}

/// Fock-space unitary `B` on two modes with `B a₁† B† = (a₁† + a₂†)/√2` and
/// `B a₂† B† = (a₁† − a₂†)/√2`, so `B|n, m⟩ = |η_nm⟩`.
///
/// Built as `exp(π/4 (a₂†a₁ − a₁†a₂)) · (−1)^{n₂}`. Both factors conserve the
/// total photon number, so `B` is exact on every block with `n + m ≤ n_max`
/// and unitary everywhere.
pub fn beam_splitter_unitary(n_max: usize) -> Result<CMatrix> {
    let a = annihilation(n_max);
    let id = CMatrix::identity(n_max + 1, n_max + 1);
    let a1 = kron_all(&[&a, &id])?;
    let a2 = kron_all(&[&id, &a])?;
    let gen = a2.adjoint() * &a1 - a1.adjoint() * &a2;
    // exp(θG) = exp(−iθ·(iG)) with iG Hermitian.
    let h = HermitianOperator::new(gen * C64::new(0.0, 1.0))?;
    let rot = unitary_from_hamiltonian(&h, FRAC_PI_4);
    let dim = n_max + 1;
    let parity = CMatrix::from_fn(dim * dim, dim * dim, |i, j| {
        if i != j {
            ZERO
        } else if (i % dim) % 2 == 0 {
            re(1.0)
        } else {
            re(-1.0)
        }
    });
    Ok(rot * parity)
}

/// `I_atoms ⊗ B` on `[2, 2, N+1, N+1]`.
pub fn transform_modes_operator(n_max: usize) -> Result<CMatrix> {
    let b = beam_splitter_unitary(n_max)?;
    kron_all(&[&CMatrix::identity(4, 4), &b])
}

fn check_two_mode(state: &QuantumState) -> Result<usize> {
    let space = state.space();
    let n_max = space.n_max();
    if *space != CompositeSpace::two_mode(n_max) {
        return Err(Error::DimensionMismatch(format!(
            "expected an atoms x two-mode state, got {:?}",
            space.dims()
        )));
    }
    Ok(n_max)
}

/// Rewrites a state on the original modes in terms of `Â₁, Â₂`.
pub fn map_ac_to_djc(state: &QuantumState) -> Result<QuantumState> {
    let n_max = check_two_mode(state)?;
    let u = transform_modes_operator(n_max)?;
    Ok(match state {
        QuantumState::Pure(s) => QuantumState::Pure(s.apply(&u)),
        QuantumState::Mixed(e) => QuantumState::Mixed(Ensemble::new(
            e.space().clone(),
            e.members().iter().map(|(p, s)| (*p, s.apply(&u))).collect(),
        )?),
    })
}

/// Rewrites a state on the original modes in terms of `Â₁, Â₂` and traces
/// out `Â₂`. The result generally is mixed even for pure input.
pub fn map_sc_to_tc(state: &QuantumState) -> Result<DensityMatrix> {
    let mapped = map_ac_to_djc(state)?;
    let keep = [0, 1, 2];
    match mapped {
        QuantumState::Pure(s) => s.reduce(&keep),
        QuantumState::Mixed(e) => partial_trace(&e.to_density(), &keep),
    }
}

/// Index of the traced transformed mode in the full space.
pub const TRACED_MODE: usize = MODE2;
