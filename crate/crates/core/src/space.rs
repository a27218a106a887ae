//! Composite Hilbert-space bookkeeping.
//!
//! Factors are ordered `[atom1, atom2, mode1, mode2]` everywhere in the crate
//! and flat indices are row-major over that order. Atomic factors use index 0
//! for the excited level `e` and 1 for the ground level `g`, so the two-atom
//! block reads `{ee, eg, ge, gg}`.

use crate::error::{Error, Result};

/// Upper bound on the dimension of any dense matrix the crate will build.
pub const MAX_TOTAL_DIM: usize = 4096;

pub const ATOM1: usize = 0;
pub const ATOM2: usize = 1;
pub const MODE1: usize = 2;
pub const MODE2: usize = 3;

/// Ordered tensor product of finite factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositeSpace {
    dims: Vec<usize>,
    total: usize,
}

impl CompositeSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(format!(
                "factor dimensions must be positive, got {dims:?}"
            )));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total.checked_mul(d).ok_or(Error::TruncationTooLarge {
                dim: usize::MAX,
                max: MAX_TOTAL_DIM,
            })?;
        }
        Ok(Self { dims, total })
    }

    /// `[2, 2, n_max+1, n_max+1]`: two atoms and two field modes.
    pub fn two_mode(n_max: usize) -> Self {
        Self::new(vec![2, 2, n_max + 1, n_max + 1]).expect("positive dims")
    }

    /// `[2, 2, n_max+1]`: two atoms sharing one mode.
    pub fn single_mode(n_max: usize) -> Self {
        Self::new(vec![2, 2, n_max + 1]).expect("positive dims")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn n_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn check_factor(&self, index: usize) -> Result<()> {
        if index < self.dims.len() {
            Ok(())
        } else {
            Err(Error::BadFactor {
                index,
                factors: self.dims.len(),
            })
        }
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        multi
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| {
                debug_assert!(i < d);
                acc * d + i
            })
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    /// The space spanned by the listed factors, in ascending factor order.
    pub fn subspace(&self, keep: &[usize]) -> Result<Self> {
        let keep = self.normalize_factors(keep)?;
        Self::new(keep.iter().map(|&k| self.dims[k]).collect())
    }

    /// Sorted, deduplicated, validated factor list.
    pub(crate) fn normalize_factors(&self, factors: &[usize]) -> Result<Vec<usize>> {
        let mut out = factors.to_vec();
        out.sort_unstable();
        out.dedup();
        for &f in &out {
            self.check_factor(f)?;
        }
        Ok(out)
    }

    /// Number of field quanta plus atomic excitations of a basis element.
    ///
    /// Only meaningful for the atom/mode layout (two atoms first).
    pub fn excitation(&self, flat: usize) -> usize {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(f, &i)| if f < 2 { 1 - i } else { i })
            .sum()
    }

    /// Per-mode cutoff for the atom/mode layout.
    pub fn n_max(&self) -> usize {
        self.dims.get(2).map_or(0, |d| d - 1)
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len().saturating_sub(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_multi_round_trip() {
        let s = CompositeSpace::new(vec![2, 2, 4, 4]).unwrap();
        assert_eq!(s.total_dim(), 64);
        for i in 0..s.total_dim() {
            assert_eq!(s.flat_index(&s.multi_index(i)), i);
        }
        assert_eq!(s.flat_index(&[0, 1, 2, 3]), 16 + 2 * 4 + 3);
    }

    #[test]
    fn excitation_counts() {
        let s = CompositeSpace::two_mode(2);
        assert_eq!(s.excitation(s.flat_index(&[1, 1, 0, 0])), 0);
        assert_eq!(s.excitation(s.flat_index(&[0, 0, 1, 1])), 4);
        assert_eq!(s.excitation(s.flat_index(&[0, 1, 2, 0])), 3);
    }

    #[test]
    fn bad_factor_and_zero_dim() {
        let s = CompositeSpace::two_mode(1);
        assert!(matches!(s.subspace(&[4]), Err(Error::BadFactor { .. })));
        assert!(CompositeSpace::new(vec![2, 0]).is_err());
        assert_eq!(s.subspace(&[3, 0]).unwrap().dims(), &[2, 2]);
    }
}
