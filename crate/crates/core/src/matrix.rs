//! Dense square complex matrices.
//!
//! Entries are stored row-major. Basis index `i` of an `n`-qubit register is
//! the integer whose binary digits are the qubit values, qubit 1 being the most
//! significant digit.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by matrix construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,
    #[error("a {dim}x{dim} matrix needs {expected} entries, got {actual}")]
    EntryCount {
        dim: usize,
        expected: usize,
        actual: usize,
    },
    #[error("row {row} has {len} entries, expected {dim}")]
    RaggedRow { row: usize, len: usize, dim: usize },
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// A dense `dim`×`dim` complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::EmptyDimension);
        }
        if data.len() != dim * dim {
            return Err(MatrixError::EntryCount {
                dim,
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::EmptyDimension);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != dim {
                return Err(MatrixError::RaggedRow {
                    row,
                    len: entries.len(),
                    dim,
                });
            }
            data.extend_from_slice(entries);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    /// Builds a 2×2 matrix from `[[a, b], [c, d]]`.
    pub fn from_2x2(m: [[Complex64; 2]; 2]) -> Self {
        ComplexMatrix {
            dim: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Standard matrix product `self · rhs`.
    pub fn mat_mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let (a, b) = (self.dim, rhs.dim);
        let n = a * b;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.data[i * a + j];
                if x.re == 0.0 && x.im == 0.0 {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + j * b + l] = x * rhs.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self − rhs`.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> Result<f64, MatrixError> {
        self.check_same_dim(rhs)?;
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, rhs: &ComplexMatrix, tol: f64) -> bool {
        matches!(self.max_abs_diff(rhs), Ok(d) if d <= tol)
    }

    /// True iff the max-norm of `self · self† − I` is at most `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Max-norm of `self · self† − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            let ri = self.row(i);
            for j in 0..n {
                let rj = self.row(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, b) in ri.iter().zip(rj) {
                    acc += a * b.conj();
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// `Tr(self · rhs†)`, computed without forming the product.
    pub fn trace_with_dagger(&self, rhs: &ComplexMatrix) -> Result<Complex64, MatrixError> {
        self.check_same_dim(rhs)?;
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    fn check_same_dim(&self, rhs: &ComplexMatrix) -> Result<(), MatrixError> {
        if self.dim != rhs.dim {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            for x in self.row(i) {
                write!(f, " {:+.4}{:+.4}i", x.re, x.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `log2(dim)` when `dim` is a power of two.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_2x2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
    }

    fn hadamard() -> ComplexMatrix {
        let h = c(FRAC_1_SQRT_2, 0.);
        ComplexMatrix::from_2x2([[h, h], [h, -h]])
    }

    fn sqrt_not() -> ComplexMatrix {
        ComplexMatrix::from_2x2([
            [c(0.5, 0.5), c(0.5, -0.5)],
            [c(0.5, -0.5), c(0.5, 0.5)],
        ])
    }

    /// Textbook triple-loop product, independent of `mat_mul`'s row-axpy layout.
    fn naive_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let n = a.dim();
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| a[(i, k)] * b[(k, j)]).sum())
    }

    #[test]
    fn identity_products() {
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(i4.mat_mul(&i4).unwrap(), i4);
        let x = pauli_x();
        assert_eq!(x.mat_mul(&x).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn product_of_embedded_paulis() {
        let x = pauli_x();
        let i2 = ComplexMatrix::identity(2);
        let lhs = x.kron(&i2).mat_mul(&i2.kron(&x)).unwrap();
        assert_eq!(lhs, naive_product(&x.kron(&i2), &i2.kron(&x)));
        assert_eq!(lhs, x.kron(&x));
        // X⊗X is the anti-diagonal permutation.
        for i in 0..4 {
            assert_eq!(lhs[(i, 3 - i)], c(1., 0.));
        }
    }

    #[test]
    fn mismatched_product_is_an_error() {
        let err = ComplexMatrix::identity(2)
            .mat_mul(&ComplexMatrix::identity(4))
            .unwrap_err();
        assert_eq!(err, MatrixError::DimensionMismatch { left: 2, right: 4 });
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));

        let xi = pauli_x().kron(&i2);
        let mut expected = ComplexMatrix::zeros(4);
        for (a, b) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
            expected[(a, b)] = c(1., 0.);
        }
        assert_eq!(xi, expected);

        let hh = hadamard().kron(&hadamard());
        for i in 0..4usize {
            for j in 0..4usize {
                let sign = if (i & j).count_ones() % 2 == 0 { 0.5 } else { -0.5 };
                assert!((hh[(i, j)] - c(sign, 0.)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(ComplexMatrix::identity(4).dagger(), ComplexMatrix::identity(4));
        let v = sqrt_not();
        let vd = v.dagger();
        assert_eq!(vd[(0, 0)], c(0.5, -0.5));
        assert_eq!(vd[(0, 1)], c(0.5, 0.5));
        assert!(v.mat_mul(&vd).unwrap().approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ComplexMatrix::identity(8).trace(), c(8., 0.));
        assert_eq!(pauli_x().kron(&ComplexMatrix::identity(2)).trace(), c(0., 0.));
        let mut d = ComplexMatrix::zeros(4);
        d[(0, 0)] = c(1., 0.);
        d[(1, 1)] = c(0., 1.);
        d[(2, 2)] = c(-1., 0.);
        d[(3, 3)] = c(0., -1.);
        assert_eq!(d.trace(), c(0., 0.));
    }

    #[test]
    fn unitarity_examples() {
        assert!(ComplexMatrix::identity(8).is_unitary(1e-12));
        assert!(!ComplexMatrix::identity(2).scale(c(2., 0.)).is_unitary(1e-12));
        assert!(hadamard().is_unitary(1e-12));
        assert!(sqrt_not().is_unitary(1e-12));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            ComplexMatrix::from_vec(0, Vec::new()).unwrap_err(),
            MatrixError::EmptyDimension
        );
        assert!(matches!(
            ComplexMatrix::from_vec(2, vec![c(0., 0.); 3]),
            Err(MatrixError::EntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_rows(&[vec![c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]),
            Err(MatrixError::RaggedRow { row: 0, .. })
        ));
    }

    #[test]
    fn trace_with_dagger_matches_product() {
        let a = hadamard().kron(&sqrt_not());
        let b = sqrt_not().kron(&pauli_x());
        let direct = a.mat_mul(&b.dagger()).unwrap().trace();
        assert!((a.trace_with_dagger(&b).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn qubit_count_from_dim() {
        assert_eq!(qubits_for_dim(1), Some(0));
        assert_eq!(qubits_for_dim(16), Some(4));
        assert_eq!(qubits_for_dim(12), None);
    }
}
