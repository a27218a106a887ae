//! Dense complex linear algebra.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::space::MAX_TOTAL_DIM;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative Hermiticity tolerance: `max|M - M†| < HERMITIAN_TOL * max|M|`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in `(-EIGEN_CLIP, 0)` are treated as roundoff and set to zero.
pub const EIGEN_CLIP: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max|M - M†| / max|M|` (zero for the zero matrix).
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let scale = max_abs(m);
    if scale == 0.0 {
        return 0.0;
    }
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev / scale
}

pub fn check_hermitian(m: &CMatrix) -> Result<()> {
    let dev = hermiticity_deviation(m);
    if dev < HERMITIAN_TOL {
        Ok(())
    } else {
        Err(Error::NotHermitian(dev))
    }
}

/// Kronecker product: `(a⊗b)[i·rb+k, j·cb+l] = a[i,j]·b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.nrows() * b.nrows();
    let cols = a.ncols() * b.ncols();
    let dim = rows.max(cols);
    if dim > MAX_TOTAL_DIM {
        return Err(Error::TruncationTooLarge {
            dim,
            max: MAX_TOTAL_DIM,
        });
    }
    let (rb, cb) = (b.nrows(), b.ncols());
    let mut out = CMatrix::zeros(rows, cols);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for l in 0..cb {
                for k in 0..rb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&CMatrix]) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(1, 1);
    for f in factors {
        acc = kron(&acc, f)?;
    }
    Ok(acc)
}

/// Spectral decomposition `H = V diag(λ) V†`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(λ) V†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fj = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn residual(&self, h: &CMatrix) -> f64 {
        let d = CMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.values.iter().map(|&x| re(x)),
        ));
        (h * &self.vectors - &self.vectors * d).norm()
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(h: &CMatrix) -> Result<Eigen> {
    check_hermitian(h)?;
    Ok(hermitian_eigen_unchecked(h))
}

/// Eigendecomposition of the Hermitian part `(H + H†)/2`.
pub(crate) fn hermitian_eigen_unchecked(h: &CMatrix) -> Eigen {
    let n = h.nrows();
    if n == 0 {
        return Eigen {
            values: vec![],
            vectors: CMatrix::zeros(0, 0),
        };
    }
    let sym = (h + h.adjoint()) * re(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Eigen { values, vectors }
}

/// Dense Hermitian matrix with a write-once eigendecomposition cache.
#[derive(Debug)]
pub struct HermitianOperator {
    matrix: CMatrix,
    eigen: OnceLock<Eigen>,
}

impl Clone for HermitianOperator {
    fn clone(&self) -> Self {
        let eigen = OnceLock::new();
        if let Some(e) = self.eigen.get() {
            let _ = eigen.set(e.clone());
        }
        Self {
            matrix: self.matrix.clone(),
            eigen,
        }
    }
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_hermitian(&matrix)?;
        Ok(Self {
            matrix,
            eigen: OnceLock::new(),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigen(&self) -> &Eigen {
        self.eigen
            .get_or_init(|| hermitian_eigen_unchecked(&self.matrix))
    }
}

/// `U(t) = V diag(e^{-iλt}) V†`.
pub fn unitary_from_hamiltonian(h: &HermitianOperator, t: f64) -> CMatrix {
    h.eigen().apply_fn(|lam| C64::from_polar(1.0, -lam * t))
}

/// Entries below this fraction of the largest one are rounding noise when
/// looking for block structure.
pub const BLOCK_TOL: f64 = 1e-15;

/// Index sets of the diagonal blocks of `m` under a permutation: connected
/// components of its pattern of entries above `BLOCK_TOL·max|m|`. Rows with
/// no such entry are left out.
pub fn diagonal_blocks(m: &CMatrix) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let cut = BLOCK_TOL * max_abs(m);
    let live = |z: C64| z.norm() > cut;
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut block = vec![root];
        let mut k = 0;
        while k < block.len() {
            let i = block[k];
            for j in 0..n {
                if !seen[j] && (live(m[(i, j)]) || live(m[(j, i)])) {
                    seen[j] = true;
                    block.push(j);
                }
            }
            k += 1;
        }
        if block.len() > 1 || live(m[(root, root)]) {
            block.sort_unstable();
            blocks.push(block);
        }
    }
    blocks
}

/// `Σ|λ_i|` of a Hermitian matrix, block by block.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64> {
    check_hermitian(m)?;
    Ok(diagonal_blocks(m)
        .iter()
        .map(|b| {
            let sub = CMatrix::from_fn(b.len(), b.len(), |i, j| m[(b[i], b[j])]);
            hermitian_eigen_unchecked(&sub).values.iter().map(|l| l.abs()).sum::<f64>()
        })
        .sum())
}

/// Frobenius norm of `[A, B]`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// `‖U†U − I‖_max`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    let i = C64::new(0.0, 1.0);
    CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}
