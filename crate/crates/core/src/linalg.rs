//! Dense complex operators on `(C^d)^{⊗N}`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator(pub DMatrix<Complex64>);

pub type StateVector = DVector<Complex64>;

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        DenseOperator(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        DenseOperator(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        DenseOperator(DMatrix::from_fn(dim, dim, f))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator(self.0.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Self {
        DenseOperator(&self.0 * &other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        DenseOperator(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        DenseOperator(&self.0 - &other.0)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        DenseOperator(&self.0 * z)
    }

    pub fn kron(&self, other: &Self) -> Self {
        DenseOperator(self.0.kronecker(&other.0))
    }

    /// `A^k` for `k ≥ 0` by repeated squaring.
    pub fn pow(&self, mut k: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `max |A†A − 1|` entrywise.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.0.adjoint() * &self.0;
        max_abs_diff(&prod, &DMatrix::identity(self.dim(), self.dim()))
    }

    /// `max |A − A†|` entrywise.
    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs_diff(&self.0, &self.0.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.hermitian_eigenvalues().last().expect("non-empty operator")
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Complex64 {
        psi.dotc(&(&self.0 * psi))
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        &self.0 * psi
    }
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// `A_1 ⊗ A_2 ⊗ … ⊗ A_N`, party 1 leftmost.
pub fn kron_all(ops: &[&DenseOperator]) -> DenseOperator {
    let mut it = ops.iter();
    let first = (*it.next().expect("at least one factor")).clone();
    it.fold(first, |acc, op| acc.kron(op))
}

/// Applies a single-site operator to `party` (1-based) of an `N`-qudit state
/// without forming the full Kronecker product.
pub fn apply_local(op: &DenseOperator, party: usize, n_parties: usize, psi: &StateVector) -> StateVector {
    let d = op.dim();
    let inner = d.pow((n_parties - party) as u32);
    let outer = psi.len() / (inner * d);
    let mut out = DVector::zeros(psi.len());
    for o in 0..outer {
        for i in 0..inner {
            for r in 0..d {
                let mut acc = Complex64::zero();
                for c in 0..d {
                    let coef = op.0[(r, c)];
                    if !coef.is_zero() {
                        acc += coef * psi[(o * d + c) * inner + i];
                    }
                }
                out[(o * d + r) * inner + i] = acc;
            }
        }
    }
    out
}

pub fn state_from_amplitudes(amps: Vec<Complex64>) -> StateVector {
    DVector::from_vec(amps)
}

/// Checks that `psi` has the expected dimension and unit norm.
pub fn check_state(psi: &StateVector, dim: usize, tol: f64) -> Result<()> {
    if psi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.len(),
        });
    }
    let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > tol {
        return Err(Error::NotNormalized(norm_sq));
    }
    Ok(())
}

/// Basis vector `|i⟩` in dimension `dim`.
pub fn basis_state(dim: usize, i: usize) -> StateVector {
    let mut v = vec![Complex64::zero(); dim];
    v[i] = Complex64::one();
    DVector::from_vec(v)
}
