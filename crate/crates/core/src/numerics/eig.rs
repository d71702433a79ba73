//! Jacobi eigendecomposition for Hermitian matrices, plus the operator square
//! root built on top of it.
//!
//! Same rotation kernel as the SVD, applied two-sided: each rotation first
//! phase-aligns the off-diagonal pivot to be real, then applies the classic
//! symmetric Schur rotation that annihilates it.

use num_complex::Complex64;

use super::{check_square, frobenius_norm, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
/// Off-diagonal magnitude relative to the input norm below which we stop.
const OFF_TOL: f64 = 1e-14;
/// How far from Hermitian an input may be before it is rejected.
const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues above −PSD_CLAMP are treated as rounded zeros by the square root.
const PSD_CLAMP: f64 = 1e-12;

/// Eigenvalues (descending) and a unitary whose columns are matching
/// eigenvectors, for a Hermitian input.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = check_square(h, "hermitian_eig")?;
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }

    // Work on the exactly-Hermitian average so rounding in the caller's input
    // cannot leak into the iteration.
    let mut a = h.add(&h.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_TOL * frobenius_norm(&a);

    let mut converged = false;
    let mut worst = 0.0;
    for _ in 0..MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.norm() <= threshold {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq);
            }
        }
        worst = max_offdiagonal(&a);
        if worst <= threshold {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence { residual: worst });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(diag[src]);
        for i in 0..n {
            vectors.set(i, dst, v.get(i, src));
        }
        super::canonicalize_phase(vectors.col_mut(dst));
    }
    Ok((values, vectors))
}

/// Unique positive-semidefinite square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-1e-12, 0)` are clamped to zero; anything lower is a
/// genuine negativity and is rejected.
pub fn hermitian_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    hermitian_sqrt_clamped(p, PSD_CLAMP)
}

/// Square root with a caller-chosen negativity clamp. Defect operators formed
/// as I − M†M inherit roughly √ε-sized negative rounding when M is close to
/// contraction-saturating, so internal callers need a wider band than the
/// public default.
pub(crate) fn hermitian_sqrt_clamped(p: &ComplexMatrix, clamp: f64) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eig(p)?;
    if let Some(&lowest) = values.last() {
        if lowest < -clamp {
            return Err(Error::NotPsd { eigenvalue: lowest });
        }
    }
    let roots: Vec<f64> = values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let mut scaled = vectors.clone();
    for (j, &r) in roots.iter().enumerate() {
        for x in scaled.col_mut(j) {
            *x *= r;
        }
    }
    Ok(scaled.mul(&vectors.adjoint()))
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64) {
    let n = a.rows();
    let r = apq.norm();
    let phase = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let r00 = phase * c;
    let r01 = phase * s;
    let r10 = Complex64::new(-s, 0.0);
    let r11 = Complex64::new(c, 0.0);

    // A ← A·R (columns p, q), then A ← R†·A (rows p, q); V ← V·R.
    for i in 0..n {
        let xp = a.get(i, p);
        let xq = a.get(i, q);
        a.set(i, p, xp * r00 + xq * r10);
        a.set(i, q, xp * r01 + xq * r11);
    }
    for j in 0..n {
        let xp = a.get(p, j);
        let xq = a.get(q, j);
        a.set(p, j, xp * r00.conj() + xq * r10.conj());
        a.set(q, j, xp * r01.conj() + xq * r11.conj());
    }
    for i in 0..n {
        let xp = v.get(i, p);
        let xq = v.get(i, q);
        v.set(i, p, xp * r00 + xq * r10);
        v.set(i, q, xp * r01 + xq * r11);
    }
}

fn max_offdiagonal(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            worst = worst.max(a.get(p, q).norm());
        }
    }
    worst
}
