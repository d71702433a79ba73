//! Density matrices with validated physicality, plus the two comparison
//! metrics the experiments report: Uhlmann fidelity and Frobenius distance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    check_square, frobenius_norm, hermitian_eig, hermitian_sqrt, hermitian_sqrt_clamped,
    ComplexMatrix,
};

/// Inputs may dip this far below zero in eigenvalue before being rejected;
/// anything in the band is clamped up to exactly zero.
const EIGENVALUE_SLACK: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_SLACK: f64 = 1e-9;
/// Traces below this are treated as zero (no state to normalize).
const ZERO_TRACE: f64 = 1e-14;

/// A positive-semidefinite Hermitian matrix with trace at most one.
///
/// Sub-unit traces are meaningful: post-selected estimates carry the success
/// probability in their trace, so construction does not normalize.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity (clamping slightly negative
    /// eigenvalues to zero), and the trace bound.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_square(&matrix, "density matrix")?;
        let residual = matrix.hermitian_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let trace = matrix.trace().re;
        if !(-TRACE_SLACK..=1.0 + TRACE_SLACK).contains(&trace) {
            return Err(Error::Domain(format!(
                "density matrix trace {trace} outside [0, 1]"
            )));
        }
        let symmetrized = matrix.add(&matrix.adjoint()).scale(Complex64::new(0.5, 0.0));
        let (values, vectors) = hermitian_eig(&symmetrized)?;
        let lowest = values.last().copied().unwrap_or(0.0);
        if lowest < -EIGENVALUE_SLACK {
            return Err(Error::NotPsd { eigenvalue: lowest });
        }
        let stored = if lowest < 0.0 {
            reconstruct_clamped(&values, &vectors)
        } else {
            matrix
        };
        Ok(Self { matrix: stored })
    }

    /// Outer product of a (possibly sub-normalized) amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("empty amplitude vector".into()));
        }
        let n = amplitudes.len();
        let outer =
            ComplexMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::new(outer)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace_real(&self) -> f64 {
        self.matrix.trace().re
    }
}

fn reconstruct_clamped(values: &[f64], vectors: &ComplexMatrix) -> ComplexMatrix {
    let clamped: Vec<Complex64> = values
        .iter()
        .map(|&v| Complex64::new(v.max(0.0), 0.0))
        .collect();
    vectors
        .mul(&ComplexMatrix::diagonal(&clamped))
        .mul(&vectors.adjoint())
}

/// Uhlmann fidelity `F(a, b) = tr(sqrt(sqrt(a) b sqrt(a)))^2` between the
/// normalized versions of the two states. A (near-)zero trace on either side
/// leaves nothing to normalize and is an error.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "fidelity between {}x{} and {}x{} states",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let an = normalized(a)?;
    let bn = normalized(b)?;
    let root = hermitian_sqrt(&an)?;
    let inner = root.mul(&bn).mul(&root);
    // symmetrize away the rounding skew before the second square root
    let inner = inner.add(&inner.adjoint()).scale(Complex64::new(0.5, 0.0));
    let overlap = hermitian_sqrt_clamped(&inner, EIGENVALUE_SLACK)?;
    let value = overlap.trace().re;
    Ok((value * value).max(0.0))
}

fn normalized(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let trace = rho.trace_real();
    if trace <= ZERO_TRACE {
        return Err(Error::Domain(
            "cannot normalize a density matrix with zero trace".into(),
        ));
    }
    Ok(rho.matrix().scale(Complex64::new(1.0 / trace, 0.0)))
}

/// Frobenius distance between the raw (un-normalized) matrices, so trace
/// mismatches show up as distance. Dimensions must already agree.
pub fn distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    frobenius_norm(&a.matrix().sub(b.matrix()))
}
