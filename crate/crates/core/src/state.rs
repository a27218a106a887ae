//! Pure and mixed states on a [`CompositeSpace`], partial trace and partial
//! transpose.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, check_hermitian, CMatrix, CVector, ZERO};
use crate::space::CompositeSpace;

/// Norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-10;
/// Trace and positivity tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: CompositeSpace,
    amps: CVector,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(space: CompositeSpace, amps: CVector) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amps.len(),
                space.total_dim()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() >= NORM_TOL {
            return Err(Error::NotAState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { space, amps })
    }

    /// Normalizes before wrapping.
    pub fn normalized(space: CompositeSpace, amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotAState("zero or non-finite vector".into()));
        }
        Self::new(space, amps.unscale(norm))
    }

    pub(crate) fn from_raw(space: CompositeSpace, amps: CVector) -> Self {
        debug_assert_eq!(amps.len(), space.total_dim());
        Self { space, amps }
    }

    pub fn basis(space: CompositeSpace, multi: &[usize]) -> Self {
        let mut amps = CVector::zeros(space.total_dim());
        amps[space.flat_index(multi)] = linalg::ONE;
        Self { space, amps }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let mut dims = self.space.dims().to_vec();
        dims.extend_from_slice(other.space.dims());
        let space = CompositeSpace::new(dims)?;
        let n = other.amps.len();
        let amps = CVector::from_fn(self.amps.len() * n, |i, _| {
            self.amps[i / n] * other.amps[i % n]
        });
        Ok(Self { space, amps })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            space: self.space.clone(),
            matrix: &self.amps * self.amps.adjoint(),
        }
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        self.amps.dotc(&(op * &self.amps))
    }

    pub fn apply(&self, op: &CMatrix) -> StateVector {
        Self::from_raw(self.space.clone(), op * &self.amps)
    }

    /// Reduced state on the kept factors.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = FactorSplit::new(&self.space, keep)?;
        let mut m = CMatrix::zeros(split.kept.total_dim(), split.traced_dim);
        for (i, a) in self.amps.iter().enumerate() {
            if *a != ZERO {
                let (k, t) = split.split(i);
                m[(k, t)] = *a;
            }
        }
        Ok(DensityMatrix {
            space: split.kept,
            matrix: &m * m.adjoint(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: CompositeSpace,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues ≥ −1e−10).
    pub fn new(space: CompositeSpace, matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_raw(space, matrix)?;
        rho.validate(TRACE_TOL)?;
        Ok(rho)
    }

    /// Shape check only.
    pub fn from_raw(space: CompositeSpace, matrix: CMatrix) -> Result<Self> {
        let n = space.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a space of dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        check_hermitian(&self.matrix)
            .map_err(|e| Error::NotAState(format!("density matrix: {e}")))?;
        let tr = self.trace();
        if (tr - 1.0).abs() >= tol {
            return Err(Error::NotAState(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues()[0];
        if min < -tol {
            return Err(Error::NotAState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen_unchecked(&self.matrix).values
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mut dims = self.space.dims().to_vec();
        dims.extend_from_slice(other.space.dims());
        Ok(DensityMatrix {
            space: CompositeSpace::new(dims)?,
            matrix: linalg::kron(&self.matrix, &other.matrix)?,
        })
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (&self.matrix * op).trace()
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix {
            space: self.space.clone(),
            matrix: u * &self.matrix * u.adjoint(),
        }
    }

    /// Spectral decomposition into a weighted ensemble of pure states; weights
    /// below `cutoff` are dropped and the rest renormalized.
    pub fn to_ensemble(&self, cutoff: f64) -> Result<Ensemble> {
        let eig = linalg::hermitian_eigen_unchecked(&self.matrix);
        let mut members = Vec::new();
        for (j, &w) in eig.values.iter().enumerate() {
            if w > cutoff {
                let v = eig.vectors.column(j).into_owned();
                members.push((w, StateVector::normalized(self.space.clone(), v)?));
            }
        }
        Ensemble::new(self.space.clone(), members)
    }
}

/// Mixed state held as `Σ w_k |ψ_k⟩⟨ψ_k|` without forming the dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    space: CompositeSpace,
    members: Vec<(f64, StateVector)>,
}

impl Ensemble {
    /// Weights are renormalized to sum to one.
    pub fn new(space: CompositeSpace, members: Vec<(f64, StateVector)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::NotAState("empty ensemble".into()));
        }
        let total: f64 = members.iter().map(|(w, _)| *w).sum();
        if members.iter().any(|(w, _)| *w < 0.0) || total <= 0.0 {
            return Err(Error::NotAState("ensemble weights must be nonnegative".into()));
        }
        for (_, s) in &members {
            if s.space() != &space {
                return Err(Error::DimensionMismatch(
                    "ensemble member on a different space".into(),
                ));
            }
        }
        let members = members.into_iter().map(|(w, s)| (w / total, s)).collect();
        Ok(Self { space, members })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn members(&self) -> &[(f64, StateVector)] {
        &self.members
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.space.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for (w, s) in &self.members {
            m += (s.amplitudes() * s.amplitudes().adjoint()) * linalg::re(*w);
        }
        DensityMatrix {
            space: self.space.clone(),
            matrix: m,
        }
    }

    pub fn tensor(&self, other: &Ensemble) -> Result<Ensemble> {
        let mut members = Vec::with_capacity(self.members.len() * other.members.len());
        for (wa, a) in &self.members {
            for (wb, b) in &other.members {
                members.push((wa * wb, a.tensor(b)?));
            }
        }
        let space = members[0].1.space().clone();
        Ensemble::new(space, members)
    }
}

/// A pure state or a weighted mixture of pure states.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(Ensemble),
}

impl QuantumState {
    pub fn space(&self) -> &CompositeSpace {
        match self {
            QuantumState::Pure(s) => s.space(),
            QuantumState::Mixed(e) => e.space(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, QuantumState::Pure(_))
    }

    /// `(weight, member)` pairs; a pure state has a single member of weight 1.
    pub fn components(&self) -> Vec<(f64, &StateVector)> {
        match self {
            QuantumState::Pure(s) => vec![(1.0, s)],
            QuantumState::Mixed(e) => e.members().iter().map(|(w, s)| (*w, s)).collect(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(s) => s.to_density(),
            QuantumState::Mixed(e) => e.to_density(),
        }
    }

    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        use QuantumState::*;
        Ok(match (self, other) {
            (Pure(a), Pure(b)) => Pure(a.tensor(b)?),
            (a, b) => Mixed(a.as_ensemble().tensor(&b.as_ensemble())?),
        })
    }

    pub fn as_ensemble(&self) -> Ensemble {
        match self {
            QuantumState::Pure(s) => Ensemble {
                space: s.space().clone(),
                members: vec![(1.0, s.clone())],
            },
            QuantumState::Mixed(e) => e.clone(),
        }
    }

    /// Reduced density matrix on the kept factors.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut acc: Option<DensityMatrix> = None;
        for (w, s) in self.components() {
            let r = s.reduce(keep)?;
            acc = Some(match acc {
                None => DensityMatrix {
                    space: r.space,
                    matrix: r.matrix * linalg::re(w),
                },
                Some(mut a) => {
                    a.matrix += r.matrix * linalg::re(w);
                    a
                }
            });
        }
        Ok(acc.expect("nonempty"))
    }
}

/// Index arithmetic for splitting a space into kept and traced factors.
struct FactorSplit {
    kept: CompositeSpace,
    traced_dim: usize,
    keep: Vec<usize>,
    full: CompositeSpace,
}

impl FactorSplit {
    fn new(space: &CompositeSpace, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::DimensionMismatch("keep set must be nonempty".into()));
        }
        let keep = space.normalize_factors(keep)?;
        let kept = space.subspace(&keep)?;
        let traced_dim = space.total_dim() / kept.total_dim();
        Ok(Self {
            kept,
            traced_dim,
            keep,
            full: space.clone(),
        })
    }

    /// `(kept index, traced index)` of a flat index.
    fn split(&self, flat: usize) -> (usize, usize) {
        let multi = self.full.multi_index(flat);
        let (mut k, mut t) = (0, 0);
        for (f, (&i, &d)) in multi.iter().zip(self.full.dims()).enumerate() {
            if self.keep.binary_search(&f).is_ok() {
                k = k * d + i;
            } else {
                t = t * d + i;
            }
        }
        (k, t)
    }
}

/// Traces out every factor not listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let split = FactorSplit::new(&rho.space, keep)?;
    let n = rho.space.total_dim();
    let idx: Vec<(usize, usize)> = (0..n).map(|i| split.split(i)).collect();
    // bucket full indices by traced index
    let mut buckets: Vec<Vec<(usize, usize)>> = vec![Vec::new(); split.traced_dim];
    for (i, &(k, t)) in idx.iter().enumerate() {
        buckets[t].push((i, k));
    }
    let dk = split.kept.total_dim();
    let mut out = CMatrix::zeros(dk, dk);
    for bucket in &buckets {
        for &(i, ki) in bucket {
            for &(j, kj) in bucket {
                out[(ki, kj)] += rho.matrix[(i, j)];
            }
        }
    }
    Ok(DensityMatrix {
        space: split.kept,
        matrix: out,
    })
}

/// Transposes the listed factors: `⟨j,k|ρ^{T_B}|l,q⟩ = ⟨j,q|ρ|l,k⟩`.
pub fn partial_transpose(rho: &DensityMatrix, factors: &[usize]) -> Result<CMatrix> {
    let space = &rho.space;
    let factors = space.normalize_factors(factors)?;
    let n = space.total_dim();
    let multis: Vec<Vec<usize>> = (0..n).map(|i| space.multi_index(i)).collect();
    let mut out = CMatrix::zeros(n, n);
    let mut a = vec![0; space.n_factors()];
    let mut b = vec![0; space.n_factors()];
    for i in 0..n {
        for j in 0..n {
            a.copy_from_slice(&multis[i]);
            b.copy_from_slice(&multis[j]);
            for &f in &factors {
                std::mem::swap(&mut a[f], &mut b[f]);
            }
            out[(i, j)] = rho.matrix[(space.flat_index(&a), space.flat_index(&b))];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, re, trace_norm_hermitian};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell_phi_plus() -> StateVector {
        let space = CompositeSpace::new(vec![2, 2]).unwrap();
        let mut v = CVector::zeros(4);
        v[0] = re(FRAC_1_SQRT_2);
        v[3] = re(FRAC_1_SQRT_2);
        StateVector::new(space, v).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell_phi_plus().to_density();
        let a = partial_trace(&rho, &[0]).unwrap();
        assert!(max_abs(&(a.matrix() - CMatrix::identity(2, 2) * re(0.5))) < 1e-15);
        let b = bell_phi_plus().reduce(&[1]).unwrap();
        assert!(max_abs(&(b.matrix() - a.matrix())) < 1e-15);
    }

    #[test]
    fn product_state_traces_to_factor() {
        let space = CompositeSpace::two_mode(2);
        // |eg⟩ ⊗ |1,0⟩
        let psi = StateVector::basis(space, &[0, 1, 1, 0]);
        let rho = partial_trace(&psi.to_density(), &[0, 1]).unwrap();
        assert_eq!(rho.space().dims(), &[2, 2]);
        let mut want = CMatrix::zeros(4, 4);
        want[(1, 1)] = re(1.0);
        assert!(max_abs(&(rho.matrix() - want)) < 1e-15);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let rho = bell_phi_plus().to_density();
        let pt = partial_transpose(&rho, &[1]).unwrap();
        let mut ev = linalg::hermitian_eigen(&pt).unwrap().values;
        ev.sort_by(f64::total_cmp);
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((trace_norm_hermitian(&pt).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_unchanged_by_partial_transpose() {
        let space = CompositeSpace::new(vec![2, 3]).unwrap();
        let d: Vec<C64> = (1..=6).map(|k| re(k as f64 / 21.0)).collect();
        let rho = DensityMatrix::new(space, CMatrix::from_diagonal(&CVector::from_vec(d))).unwrap();
        let pt = partial_transpose(&rho, &[1]).unwrap();
        assert_eq!(&pt, rho.matrix());
    }

    #[test]
    fn bad_factor_and_empty_keep() {
        let rho = bell_phi_plus().to_density();
        assert!(matches!(
            partial_trace(&rho, &[2]),
            Err(Error::BadFactor { .. })
        ));
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(matches!(
            partial_transpose(&rho, &[5]),
            Err(Error::BadFactor { .. })
        ));
    }

    #[test]
    fn density_validation() {
        let space = CompositeSpace::new(vec![2]).unwrap();
        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(space.clone(), bad_trace).is_err());
        let negative = CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.5), re(-0.5)]));
        assert!(DensityMatrix::new(space.clone(), negative).is_err());
        assert!(StateVector::new(space, CVector::from_element(2, re(1.0))).is_err());
    }

    #[test]
    fn ensemble_round_trip() {
        let rho = bell_phi_plus().to_density();
        let mixed = DensityMatrix::from_raw(
            rho.space().clone(),
            (rho.matrix() + CMatrix::identity(4, 4) * re(0.25)) * re(0.5),
        )
        .unwrap();
        let ens = mixed.to_ensemble(1e-14).unwrap();
        assert!(max_abs(&(ens.to_density().matrix() - mixed.matrix())) < 1e-13);
    }
}
