//! Time evolution.
//!
//! Two independent routes are provided. The dense route exponentiates a full
//! Kronecker-built Hamiltonian on the truncated space. The sector route
//! exploits conservation of the excitation number: each sector block is
//! assembled directly from the coupling list with a photon cutoff large enough
//! that every occupied sector is complete, so truncation introduces no error at
//! all. The closed-form operator blocks and the single-excitation elements are
//! checked against both.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen_unchecked, re, unitary_from_hamiltonian, CMatrix, CVector, Eigen,
    HermitianOperator, ZERO,
};
use crate::model::{annihilation, CouplingModel, ModelParams};
use crate::space::CompositeSpace;
use crate::state::{DensityMatrix, Ensemble, QuantumState, StateVector};

/// Amplitudes below this magnitude are treated as absent when locating the
/// occupied excitation sectors.
pub const SUPPORT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorSource {
    Numeric,
    TcAnalytic,
    DjcAnalytic,
    Resolvent,
}

/// `U(t)` on a declared space.
#[derive(Debug, Clone)]
pub struct Propagator {
    space: CompositeSpace,
    matrix: CMatrix,
    t: f64,
    source: PropagatorSource,
}

impl Propagator {
    pub fn numeric(h: &HermitianOperator, space: &CompositeSpace, t: f64) -> Result<Self> {
        if h.dim() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "Hamiltonian of dimension {} on a space of dimension {}",
                h.dim(),
                space.total_dim()
            )));
        }
        Ok(Self {
            space: space.clone(),
            matrix: unitary_from_hamiltonian(h, t),
            t,
            source: PropagatorSource::Numeric,
        })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn source(&self) -> PropagatorSource {
        self.source
    }

    /// Largest column deviation from `other` over basis states whose
    /// excitation number is at most `max_excitation`.
    pub fn deviation_on_sectors(&self, other: &Propagator, max_excitation: usize) -> f64 {
        let mut dev: f64 = 0.0;
        for j in 0..self.space.total_dim() {
            if self.space.excitation(j) > max_excitation {
                continue;
            }
            for i in 0..self.space.total_dim() {
                dev = dev.max((self.matrix[(i, j)] - other.matrix[(i, j)]).norm());
            }
        }
        dev
    }
}

pub fn evolve_pure(state: &StateVector, h: &HermitianOperator, t: f64) -> Result<StateVector> {
    let u = Propagator::numeric(h, state.space(), t)?;
    Ok(state.apply(u.matrix()))
}

pub fn evolve_density(rho: &DensityMatrix, h: &HermitianOperator, t: f64) -> Result<DensityMatrix> {
    let u = Propagator::numeric(h, rho.space(), t)?;
    Ok(rho.conjugate_by(u.matrix()))
}

/// `ψ → Uψ` member by member.
pub fn evolve(state: &QuantumState, h: &HermitianOperator, t: f64) -> Result<QuantumState> {
    let u = Propagator::numeric(h, state.space(), t)?;
    Ok(match state {
        QuantumState::Pure(s) => QuantumState::Pure(s.apply(u.matrix())),
        QuantumState::Mixed(e) => QuantumState::Mixed(Ensemble::new(
            e.space().clone(),
            e.members()
                .iter()
                .map(|(p, s)| (*p, s.apply(u.matrix())))
                .collect(),
        )?),
    })
}

/// Reduced state of the two atoms.
pub fn atomic_reduced(state: &QuantumState) -> Result<DensityMatrix> {
    state.reduce(&[0, 1])
}

fn diag_fn(n_max: usize, f: impl Fn(usize) -> f64) -> CMatrix {
    CMatrix::from_fn(n_max + 1, n_max + 1, |i, j| if i == j { re(f(i)) } else { ZERO })
}

/// Closed-form two-atom, one-mode propagator assembled from its operator
/// blocks. Functions of `𝒜 = ÂÂ† + Â†Â = 2n̂ + 1` are evaluated on the exact
/// Fock spectrum.
pub fn tc_propagator_blocks(p: &ModelParams, n_max: usize, t: f64) -> Propagator {
    let gt = p.g * t;
    let d = n_max + 1;
    let a = annihilation(n_max);
    let ad = a.adjoint();
    let id = CMatrix::identity(d, d);
    let freq = |n: usize| (4.0 * (2 * n + 1) as f64).sqrt() * gt;
    let cos_a = diag_fn(n_max, |n| freq(n).cos());
    let inv_a = diag_fn(n_max, |n| 1.0 / (2 * n + 1) as f64);
    let cos_inv = &cos_a * &inv_a;
    let sin_a = diag_fn(n_max, |n| freq(n).sin() / (2.0 * (2 * n + 1) as f64).sqrt());

    let s1 = &a * &sin_a;
    let s2 = &sin_a * &ad;
    let s3 = &sin_a * &a;
    let s4 = &ad * &sin_a;
    let c1 = &id - &a * &inv_a * &ad + &a * &cos_inv * &ad;
    let c2 = -(&a * &inv_a * &a) + &a * &cos_inv * &a;
    let c3 = (&cos_a + &id) * re(0.5);
    let c4 = (&cos_a - &id) * re(0.5);
    let c5 = -(&ad * &inv_a * &ad) + &ad * &cos_inv * &ad;
    let c6 = &id - &ad * &inv_a * &a + &ad * &cos_inv * &a;

    let mi = C64::new(0.0, -1.0);
    let (ms1, ms2, ms3, ms4) = (&s1 * mi, &s2 * mi, &s3 * mi, &s4 * mi);
    let blocks: [[&CMatrix; 4]; 4] = [
        [&c1, &ms1, &ms1, &c2],
        [&ms2, &c3, &c4, &ms3],
        [&ms2, &c4, &c3, &ms3],
        [&c5, &ms4, &ms4, &c6],
    ];
    let mut u = CMatrix::zeros(4 * d, 4 * d);
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, blk) in row.iter().enumerate() {
            u.view_mut((bi * d, bj * d), (d, d)).copy_from(*blk);
        }
    }
    let space = CompositeSpace::single_mode(n_max);
    apply_omega0_phase(&mut u, &space, p, t);
    Propagator {
        space,
        matrix: u,
        t,
        source: PropagatorSource::TcAnalytic,
    }
}

/// One atom-mode factor `[[C₁, −iS₁], [−iS₂, C₂]]` of the independent-pair
/// propagator, on `[atom, mode]`.
///
/// `S₂` is taken as `Â† sin(√(2ÂÂ†)gt)/√(ÂÂ†)`, the adjoint partner of `S₁`.
fn jc_factor(n_max: usize, gt: f64) -> CMatrix {
    let d = n_max + 1;
    let a = annihilation(n_max);
    let ad = a.adjoint();
    let up = |n: usize| (2.0 * (n + 1) as f64).sqrt() * gt;
    let c1 = diag_fn(n_max, |n| up(n).cos());
    let c2 = diag_fn(n_max, |n| (((2 * n) as f64).sqrt() * gt).cos());
    let sinc = diag_fn(n_max, |n| up(n).sin() / ((n + 1) as f64).sqrt());
    let s1 = &sinc * &a;
    let s2 = &ad * &sinc;
    jc_from_blocks(d, &c1, &s1, &s2, &c2)
}

fn jc_from_blocks(d: usize, c1: &CMatrix, s1: &CMatrix, s2: &CMatrix, c2: &CMatrix) -> CMatrix {
    let mi = C64::new(0.0, -1.0);
    let mut u = CMatrix::zeros(2 * d, 2 * d);
    u.view_mut((0, 0), (d, d)).copy_from(c1);
    u.view_mut((0, d), (d, d)).copy_from(&(s1 * mi));
    u.view_mut((d, 0), (d, d)).copy_from(&(s2 * mi));
    u.view_mut((d, d), (d, d)).copy_from(c2);
    u
}

/// Lifts `u1` on `[atom1, mode1]` and `u2` on `[atom2, mode2]` to
/// `u1 ⊗ u2` in the order `[atom1, atom2, mode1, mode2]`.
fn pair_product(u1: &CMatrix, u2: &CMatrix, n_max: usize) -> CMatrix {
    let d = n_max + 1;
    let space = CompositeSpace::two_mode(n_max);
    let n = space.total_dim();
    let mut u = CMatrix::zeros(n, n);
    for j in 0..n {
        let mj = space.multi_index(j);
        for i in 0..n {
            let mi = space.multi_index(i);
            let x = u1[(mi[0] * d + mi[2], mj[0] * d + mj[2])];
            if x == ZERO {
                continue;
            }
            let y = u2[(mi[1] * d + mi[3], mj[1] * d + mj[3])];
            u[(i, j)] = x * y;
        }
    }
    u
}

/// Closed-form independent-pair propagator `Û₁ ⊗ Û₂`.
pub fn djc_propagator_blocks(p: &ModelParams, n_max: usize, t: f64) -> Propagator {
    let f = jc_factor(n_max, p.g * t);
    let mut u = pair_product(&f, &f, n_max);
    let space = CompositeSpace::two_mode(n_max);
    apply_omega0_phase(&mut u, &space, p, t);
    Propagator {
        space,
        matrix: u,
        t,
        source: PropagatorSource::DjcAnalytic,
    }
}

/// Independent-pair propagator with the second factor laid out exactly as
/// printed (diagonal `C₂₁, C₂₁, C₂₂, C₂₂` over `{ee, eg, ge, gg}`) and with
/// `S_{i2} = Â† sin(√(2Â†Â)gt)/√(Â†Â)` in the printed operator order. Audit
/// only.
pub fn djc_propagator_as_printed(p: &ModelParams, n_max: usize, t: f64) -> CMatrix {
    let gt = p.g * t;
    let d = n_max + 1;
    let a = annihilation(n_max);
    let ad = a.adjoint();
    let c1 = diag_fn(n_max, |n| (((2 * (n + 1)) as f64).sqrt() * gt).cos());
    let c2 = diag_fn(n_max, |n| (((2 * n) as f64).sqrt() * gt).cos());
    let s1 = diag_fn(n_max, |n| {
        (((2 * (n + 1)) as f64).sqrt() * gt).sin() / ((n + 1) as f64).sqrt()
    }) * &a;
    let s2 = &ad
        * diag_fn(n_max, |n| {
            if n == 0 {
                std::f64::consts::SQRT_2 * gt
            } else {
                (((2 * n) as f64).sqrt() * gt).sin() / (n as f64).sqrt()
            }
        });
    let u1 = jc_from_blocks(d, &c1, &s1, &s2, &c2);
    let space = CompositeSpace::two_mode(n_max);
    let n = space.total_dim();
    let mi = C64::new(0.0, -1.0);
    // printed second factor over the atom pair, blocks acting on mode 2
    let zero = CMatrix::zeros(d, d);
    let (ms1, ms2) = (&s1 * mi, &s2 * mi);
    let printed: [[&CMatrix; 4]; 4] = [
        [&c1, &ms1, &zero, &zero],
        [&ms2, &c1, &zero, &zero],
        [&zero, &zero, &c2, &ms1],
        [&zero, &zero, &ms2, &c2],
    ];
    let mut u2 = CMatrix::zeros(n, n);
    for j in 0..n {
        let mj = space.multi_index(j);
        for i in 0..n {
            let mi_ = space.multi_index(i);
            if mi_[2] != mj[2] {
                continue;
            }
            let blk = printed[mi_[0] * 2 + mi_[1]][mj[0] * 2 + mj[1]];
            u2[(i, j)] = blk[(mi_[3], mj[3])];
        }
    }
    let u1_full = pair_product(&u1, &CMatrix::identity(2 * d, 2 * d), n_max);
    u1_full * u2
}

fn apply_omega0_phase(u: &mut CMatrix, space: &CompositeSpace, p: &ModelParams, t: f64) {
    if !p.include_omega0 || p.omega0 == 0.0 {
        return;
    }
    for j in 0..space.total_dim() {
        let ph = C64::from_polar(1.0, -p.omega0 * t * space.excitation(j) as f64);
        for i in 0..space.total_dim() {
            u[(i, j)] *= ph;
        }
    }
}

/// Order of the single-excitation basis: `eg00, ge00, gg10, gg01`.
pub const SINGLE_EXCITATION_LABELS: [&str; 4] = ["eg00", "ge00", "gg10", "gg01"];

pub fn single_excitation_indices(space: &CompositeSpace) -> [usize; 4] {
    [[0, 1, 0, 0], [1, 0, 0, 0], [1, 1, 1, 0], [1, 1, 0, 1]].map(|m| space.flat_index(&m))
}

/// Single-excitation block of the dense numeric propagator of `H(φ)`.
pub fn single_excitation_numeric(p: &ModelParams, t: f64) -> Result<Propagator> {
    let space = CompositeSpace::two_mode(1);
    let mut q = *p;
    q.n_max = 1;
    let h = crate::model::build_hamiltonian(&q, &space)?;
    let u = Propagator::numeric(&h, &space, t)?;
    let idx = single_excitation_indices(&space);
    Ok(Propagator {
        space: CompositeSpace::new(vec![4]).expect("positive"),
        matrix: CMatrix::from_fn(4, 4, |i, j| u.matrix()[(idx[i], idx[j])]),
        t,
        source: PropagatorSource::Numeric,
    })
}

/// Single-excitation elements `U_ij` exactly as printed, with
/// `K₁ = 2g sin(φ/4)`, `K₂ = 2g cos(φ/4)`. The `e^{−iω₀t}` prefactor is kept
/// only when `include_omega0` is set.
pub fn resolvent_propagator(p: &ModelParams, t: f64) -> Propagator {
    let phi = p.phi;
    let (k1, k2) = (2.0 * p.g * (phi / 4.0).sin(), 2.0 * p.g * (phi / 4.0).cos());
    let w = if p.include_omega0 {
        C64::from_polar(0.5, -p.omega0 * t)
    } else {
        re(0.5)
    };
    let (c1, c2) = ((k1 * t).cos(), (k2 * t).cos());
    let (s1, s2) = ((k1 * t).sin(), (k2 * t).sin());
    let i = C64::new(0.0, 1.0);
    let ph = |x: f64| C64::from_polar(1.0, x);
    let u11 = w * (c1 + c2);
    let u12 = w * ph(-phi / 2.0) * (c1 - c2);
    let u21 = w * ph(phi / 2.0) * (c1 - c2);
    let u13 = w * ph(-phi / 4.0) * (-i * s1 + s2);
    let u31 = w * ph(phi / 4.0) * (-i * s1 - s2);
    let mut u = CMatrix::zeros(4, 4);
    for k in 0..4 {
        u[(k, k)] = u11;
    }
    u[(0, 1)] = u12;
    u[(3, 2)] = u12;
    u[(1, 0)] = u21;
    u[(2, 3)] = u21;
    u[(0, 2)] = u13;
    u[(3, 0)] = u13;
    u[(2, 1)] = u13;
    u[(1, 3)] = u13 * ph(phi);
    u[(2, 0)] = u31;
    u[(0, 3)] = u31;
    u[(1, 2)] = u31;
    u[(3, 1)] = u31 * ph(-phi);
    Propagator {
        space: CompositeSpace::new(vec![4]).expect("positive"),
        matrix: u,
        t,
        source: PropagatorSource::Resolvent,
    }
}

/// One excitation sector: its basis (flat indices into the extended space)
/// and the spectral decomposition of the Hamiltonian block.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub excitation: usize,
    pub basis: Vec<usize>,
    pub eigen: Eigen,
}

/// Builds the Hamiltonian block of sector `e` on `space` directly from the
/// coupling list.
pub fn sector_block(model: &CouplingModel, space: &CompositeSpace, e: usize) -> (Vec<usize>, CMatrix) {
    let basis: Vec<usize> = (0..space.total_dim())
        .filter(|&k| space.excitation(k) == e)
        .collect();
    let local: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let d = basis.len();
    let mut h = CMatrix::zeros(d, d);
    let n_max = space.n_max();
    for (col, &k) in basis.iter().enumerate() {
        let multi = space.multi_index(k);
        h[(col, col)] = re(model.omega0() * e as f64);
        for c in model.couplings() {
            let slot = 2 + c.mode;
            // σ⁺a: ground → excited, one photon absorbed
            if multi[c.atom] == 1 && multi[slot] >= 1 {
                let mut target = multi.clone();
                target[c.atom] = 0;
                target[slot] -= 1;
                let row = local[&space.flat_index(&target)];
                let amp = c.strength * (multi[slot] as f64).sqrt();
                h[(row, col)] += amp;
                h[(col, row)] += amp.conj();
            }
        }
        debug_assert!(multi[2..].iter().all(|&n| n <= n_max));
    }
    (basis, h)
}

/// Excitation-sector propagation of one initial state.
///
/// The photon cutoff is raised to the largest excitation number present in
/// the initial support, which makes every occupied sector complete: the
/// result is the exact dynamics of the untruncated model for that state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    space: CompositeSpace,
    sectors: Vec<SectorSpectrum>,
    members: Vec<Member>,
    /// Per sector: owning member indices and their coefficient columns
    /// scaled by `√weight`, so a whole ensemble propagates with one product.
    stacks: Vec<(Vec<usize>, CMatrix)>,
}

#[derive(Debug, Clone)]
struct Member {
    weight: f64,
    /// `(sector index, V†ψ_E)`
    parts: Vec<(usize, CVector)>,
}

impl Trajectory {
    pub fn new(model: &CouplingModel, initial: &QuantumState) -> Result<Self> {
        let src = initial.space();
        if src.n_factors() != 2 + model.n_modes() || src.dims()[..2] != [2, 2] {
            return Err(Error::DimensionMismatch(format!(
                "state on {:?} does not fit a {}-mode model",
                src.dims(),
                model.n_modes()
            )));
        }
        let comps = initial.components();
        let mut occupied = BTreeMap::<usize, ()>::new();
        for (_, s) in &comps {
            for (k, a) in s.amplitudes().iter().enumerate() {
                if a.norm() > SUPPORT_TOL {
                    occupied.insert(src.excitation(k), ());
                }
            }
        }
        let e_max = occupied.keys().next_back().copied().unwrap_or(0);
        let cutoff = e_max.max(src.n_max()).max(1);
        let space = model.space(cutoff);
        if space.total_dim() > 4 * crate::space::MAX_TOTAL_DIM {
            return Err(Error::TruncationTooLarge {
                dim: space.total_dim(),
                max: 4 * crate::space::MAX_TOTAL_DIM,
            });
        }

        let sector_list: Vec<usize> = occupied.keys().copied().collect();
        let sectors: Vec<SectorSpectrum> = sector_list
            .par_iter()
            .map(|&e| {
                let (basis, h) = sector_block(model, &space, e);
                SectorSpectrum {
                    excitation: e,
                    basis,
                    eigen: hermitian_eigen_unchecked(&h),
                }
            })
            .collect();
        let members = comps
            .iter()
            .map(|(w, s)| {
                let mut ext = vec![ZERO; space.total_dim()];
                for (k, &a) in s.amplitudes().iter().enumerate() {
                    if a != ZERO {
                        ext[space.flat_index(&src.multi_index(k))] = a;
                    }
                }
                let mut parts = Vec::new();
                for (si, sec) in sectors.iter().enumerate() {
                    let psi = CVector::from_iterator(sec.basis.len(), sec.basis.iter().map(|&k| ext[k]));
                    if psi.iter().any(|a| a.norm() > SUPPORT_TOL) {
                        parts.push((si, sec.eigen.vectors.adjoint() * psi));
                    }
                }
                Member { weight: *w, parts }
            })
            .collect::<Vec<_>>();
        let stacks = (0..sectors.len())
            .map(|si| {
                let owned: Vec<(usize, &CVector)> = members
                    .iter()
                    .enumerate()
                    .filter_map(|(mi, m)| m.parts.iter().find(|(s, _)| *s == si).map(|(_, c)| (mi, c)))
                    .collect();
                let dim = sectors[si].basis.len();
                let mut c = CMatrix::zeros(dim, owned.len());
                for (col, (mi, v)) in owned.iter().enumerate() {
                    c.set_column(col, &(*v * re(members[*mi].weight.sqrt())));
                }
                (owned.into_iter().map(|(mi, _)| mi).collect(), c)
            })
            .collect();
        Ok(Self {
            space,
            sectors,
            members,
            stacks,
        })
    }

    /// The extended space the trajectory lives on.
    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn sectors(&self) -> &[SectorSpectrum] {
        &self.sectors
    }

    fn member_amplitudes(&self, m: &Member, t: f64) -> CVector {
        let mut out = CVector::zeros(self.space.total_dim());
        for (si, c) in &m.parts {
            let sec = &self.sectors[*si];
            let rotated = CVector::from_iterator(
                c.len(),
                c.iter()
                    .zip(&sec.eigen.values)
                    .map(|(a, &lam)| a * C64::from_polar(1.0, -lam * t)),
            );
            let v = &sec.eigen.vectors * rotated;
            for (&k, a) in sec.basis.iter().zip(v.iter()) {
                out[k] = *a;
            }
        }
        out
    }

    pub fn state_at(&self, t: f64) -> QuantumState {
        let comps: Vec<(f64, StateVector)> = self
            .members
            .iter()
            .map(|m| {
                (
                    m.weight,
                    StateVector::from_raw(self.space.clone(), self.member_amplitudes(m, t)),
                )
            })
            .collect();
        if comps.len() == 1 {
            QuantumState::Pure(comps.into_iter().next().expect("one").1)
        } else {
            QuantumState::Mixed(Ensemble::new(self.space.clone(), comps).expect("weights already valid"))
        }
    }

    /// Two-atom reduced density matrix at time `t`.
    pub fn atomic_at(&self, t: f64) -> DensityMatrix {
        let total = self.space.total_dim();
        let f = total / 4;
        let n_members = self.members.len();
        let mut amp = vec![ZERO; n_members * total];
        for (sec, (owners, coeffs)) in self.sectors.iter().zip(&self.stacks) {
            if owners.is_empty() {
                continue;
            }
            let mut rot = coeffs.clone();
            for (r, &lam) in sec.eigen.values.iter().enumerate() {
                let ph = C64::from_polar(1.0, -lam * t);
                for x in rot.row_mut(r).iter_mut() {
                    *x *= ph;
                }
            }
            let psi = &sec.eigen.vectors * rot;
            for (col, &mi) in owners.iter().enumerate() {
                let dst = &mut amp[mi * total..(mi + 1) * total];
                for (r, &k) in sec.basis.iter().enumerate() {
                    dst[k] = psi[(r, col)];
                }
            }
        }
        let mut rho = CMatrix::zeros(4, 4);
        for v in amp.chunks_exact(total) {
            for a in 0..4 {
                for b in a..4 {
                    let mut acc = ZERO;
                    for k in 0..f {
                        acc += v[a * f + k] * v[b * f + k].conj();
                    }
                    rho[(a, b)] += acc;
                }
            }
        }
        for a in 0..4 {
            for b in 0..a {
                rho[(a, b)] = rho[(b, a)].conj();
            }
            rho[(a, a)] = re(rho[(a, a)].re);
        }
        let sub = CompositeSpace::new(vec![2, 2]).expect("positive");
        DensityMatrix::from_raw(sub, rho).expect("4x4")
    }

    /// Reduced state on the kept factors of the extended space.
    pub fn reduced_at(&self, t: f64, keep: &[usize]) -> Result<DensityMatrix> {
        let mut acc: Option<CMatrix> = None;
        let mut sub = None;
        for m in &self.members {
            let s = StateVector::from_raw(self.space.clone(), self.member_amplitudes(m, t));
            let r = s.reduce(keep)?;
            sub.get_or_insert_with(|| r.space().clone());
            let term = r.into_matrix() * re(m.weight);
            acc = Some(match acc {
                Some(a) => a + term,
                None => term,
            });
        }
        let sub = sub.ok_or_else(|| Error::NotAState("empty ensemble".into()))?;
        DensityMatrix::from_raw(sub, acc.expect("nonempty"))
    }

    /// Atomic reduced states on a time grid, computed in parallel.
    pub fn atomic_series(&self, times: &[f64]) -> Vec<DensityMatrix> {
        times.par_iter().map(|&t| self.atomic_at(t)).collect()
    }

    /// Weight of each excitation sector (time independent).
    pub fn sector_weights(&self) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for m in &self.members {
            for (si, c) in &m.parts {
                *out.entry(self.sectors[*si].excitation).or_insert(0.0) += m.weight * c.norm_squared();
            }
        }
        out
    }
}

/// Uniform grid `t_k = k·t_max/(samples−1)`.
pub fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    if samples < 2 {
        return vec![0.0];
    }
    (0..samples)
        .map(|k| t_max * k as f64 / (samples - 1) as f64)
        .collect()
}
