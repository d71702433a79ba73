//! Dense complex linear algebra sized for the dilation pipeline (matrices up to 64×64).
//!
//! Everything here is allocation-happy and cache-oblivious on purpose: operators in
//! this domain are tiny and correctness plus determinism dominate. Storage is
//! column-major so the Jacobi kernels in [`svd`] and [`eig`] work on contiguous
//! columns.

mod eig;
mod svd;
mod text;

pub use eig::{hermitian_eig, hermitian_sqrt};
pub(crate) use eig::hermitian_sqrt_clamped;
pub use svd::{svd, SvdFactors};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest operator dimension the numeric kernels accept.
pub const MAX_DIM: usize = 64;

/// Dense complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must have at least one entry");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Dimension("matrix must be non-empty".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows in matrix literal".into()));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| rows[i][j]))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row + col * self.rows]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row + col * self.rows] = value;
    }

    pub(crate) fn col(&self, col: usize) -> &[Complex64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub(crate) fn col_mut(&mut self, col: usize) -> &mut [Complex64] {
        &mut self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.data.iter().copied()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let r = rhs.get(k, j);
                if r.norm_sqr() == 0.0 {
                    continue;
                }
                for i in 0..self.rows {
                    let v = out.get(i, j) + self.get(i, k) * r;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "inner dimensions must agree");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x.norm_sqr() == 0.0 {
                continue;
            }
            for (i, entry) in out.iter_mut().enumerate() {
                *entry += self.get(i, j) * x;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= factor;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Maximum entrywise deviation from the conjugate transpose.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for j in 0..self.cols {
            for i in 0..=j {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Frobenius distance to the identity, ‖A − I‖_F.
    pub fn identity_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut sum = 0.0;
        for j in 0..self.cols {
            for i in 0..self.rows {
                let target = if i == j { 1.0 } else { 0.0 };
                sum += (self.get(i, j) - Complex64::new(target, 0.0)).norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// ‖A†A − I‖_F, the usual unitarity check.
    pub fn unitary_residual(&self) -> f64 {
        self.adjoint().mul(self).identity_residual()
    }

    pub fn has_finite_entries(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Zero-pads a square matrix to `dim`, putting an identity block on the new
    /// diagonal entries so the extension acts trivially.
    pub fn pad_identity(&self, dim: usize) -> Self {
        assert!(self.is_square() && dim >= self.rows);
        let mut out = Self::identity(dim);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }
}

/// √Σ|mᵢⱼ|².
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.entries().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn check_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "{what} requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() > MAX_DIM {
        return Err(Error::Dimension(format!(
            "{what} supports dimensions up to {MAX_DIM}, got {}",
            m.rows()
        )));
    }
    if !m.has_finite_entries() {
        return Err(Error::Argument(format!("{what} requires finite entries")));
    }
    Ok(m.rows())
}

/// Rotates a column's global phase so its largest-magnitude entry is real and
/// non-negative (ties broken toward the lowest row index). Returns the phase
/// `alpha` that a paired factor must absorb to keep products unchanged: the
/// column is multiplied by `conj(alpha)`.
pub(crate) fn canonicalize_phase(col: &mut [Complex64]) -> Complex64 {
    let mut pivot = 0;
    let mut best = 0.0f64;
    for (i, c) in col.iter().enumerate() {
        let mag = c.norm();
        if mag > best {
            best = mag;
            pivot = i;
        }
    }
    if best == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let alpha = col[pivot] / best;
    for c in col.iter_mut() {
        *c *= alpha.conj();
    }
    alpha
}

/// Pure state over `qubit_count` qubits; basis index bit i is qubit i (qubit 0
/// is the least significant bit).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    qubit_count: usize,
}

impl StateVector {
    /// Wraps an amplitude vector; the length must be a power of two.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "state length must be a power of two, got {len}"
            )));
        }
        Ok(Self {
            amplitudes,
            qubit_count: len.trailing_zeros() as usize,
        })
    }

    /// |index⟩ over `qubit_count` qubits.
    pub fn basis(qubit_count: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubit_count];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            qubit_count,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Appends an ancilla qubit in |0⟩ as the new most significant bit.
    pub fn with_ancilla_zero(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(2 * amplitudes.len(), Complex64::new(0.0, 0.0));
        Self {
            amplitudes,
            qubit_count: self.qubit_count + 1,
        }
    }

    /// Zero-extends an arbitrary-length amplitude list to the next power of two.
    pub fn from_padded(amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("state must be non-empty".into()));
        }
        let len = amplitudes.len().next_power_of_two();
        let mut padded = amplitudes.to_vec();
        padded.resize(len, Complex64::new(0.0, 0.0));
        Self::new(padded)
    }
}

pub use text::{format_matrix, parse_matrix};

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_norm(&ComplexMatrix::zeros(3, 2)), 0.0);
        assert!((frobenius_norm(&ComplexMatrix::identity(2)) - 2.0f64.sqrt()).abs() < 1e-15);
        let m = ComplexMatrix::from_rows(&[vec![c(3.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(4.0, 0.0)]])
            .unwrap();
        assert!((frobenius_norm(&m) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn matmul_against_hand_product() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]])
            .unwrap();
        let b = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let p = a.mul(&b);
        // (1+i)*i + 2*1 = i + i^2 + 2 = 1 + i
        assert!((p.get(0, 0) - c(1.0, 1.0)).norm() < 1e-15);
        assert!((p.get(0, 1) - c(1.0, 1.0)).norm() < 1e-15);
        assert!((p.get(1, 0) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((p.get(1, 1) - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, -4.0)]]).unwrap();
        let ad = a.adjoint();
        assert_eq!(ad.rows(), 2);
        assert_eq!(ad.cols(), 1);
        assert_eq!(ad.get(0, 0), c(1.0, -2.0));
        assert_eq!(ad.get(1, 0), c(3.0, 4.0));
    }

    #[test]
    fn state_vector_requires_power_of_two() {
        assert!(StateVector::new(vec![c(1.0, 0.0); 3]).is_err());
        let s = StateVector::new(vec![c(1.0, 0.0); 4]).unwrap();
        assert_eq!(s.qubit_count(), 2);
    }

    #[test]
    fn ancilla_extension_is_msb() {
        let s = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let e = s.with_ancilla_zero();
        assert_eq!(e.len(), 4);
        assert_eq!(e.amplitudes()[0], c(0.6, 0.0));
        assert_eq!(e.amplitudes()[1], c(0.0, 0.8));
        assert_eq!(e.amplitudes()[2], c(0.0, 0.0));
        assert_eq!(e.amplitudes()[3], c(0.0, 0.0));
    }

    #[test]
    fn pad_identity_extends_with_trivial_action() {
        let m = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(0.25, 0.0)]);
        let p = m.pad_identity(4);
        assert_eq!(p.get(0, 0), c(0.5, 0.0));
        assert_eq!(p.get(2, 2), c(1.0, 0.0));
        assert_eq!(p.get(3, 3), c(1.0, 0.0));
        assert_eq!(p.get(2, 0), c(0.0, 0.0));
    }
}
