//! One-sided Jacobi SVD for square complex matrices.
//!
//! Right rotations orthogonalize the columns of a working copy; the
//! accumulated rotation product is V, column norms are the singular values,
//! and normalized columns are U. Columns belonging to (numerically) zero
//! singular values are completed by Gram–Schmidt so U is always fully unitary,
//! which rank-deficient Kraus operators require.

use num_complex::Complex64;

use super::{check_square, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
/// Normalized Gram off-diagonal below which a column pair counts as orthogonal.
const GRAM_TOL: f64 = 1e-14;

/// Result of [`svd`]: `u · diag(singular_values) · v_dagger` reconstructs the input.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: ComplexMatrix,
    /// Non-negative, sorted descending.
    pub singular_values: Vec<f64>,
    pub v_dagger: ComplexMatrix,
}

impl SvdFactors {
    pub fn dim(&self) -> usize {
        self.singular_values.len()
    }

    /// Largest singular value (operator norm of the decomposed matrix).
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut scaled = self.u.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            for v in scaled.col_mut(j) {
                *v *= s;
            }
        }
        scaled.mul(&self.v_dagger)
    }
}

/// Deterministic singular value decomposition of a square complex matrix.
pub fn svd(m: &ComplexMatrix) -> Result<SvdFactors> {
    let n = check_square(m, "svd")?;
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = false;
    let mut residual = 0.0;
    for _ in 0..MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let (app, aqq, apq) = column_gram(&a, p, q);
                if app == 0.0 || aqq == 0.0 {
                    continue;
                }
                if apq.norm() / (app * aqq).sqrt() <= GRAM_TOL {
                    continue;
                }
                let rot = jacobi_rotation(app, aqq, apq);
                rotate_columns(&mut a, p, q, &rot);
                rotate_columns(&mut v, p, q, &rot);
            }
        }
        residual = max_gram_offdiagonal(&a);
        if residual <= GRAM_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence { residual });
    }

    // Column norms are the singular values; stable descending order.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| column_norm(&a, j)).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let sigma_max = norms[order[0]];
    let zero_tol = sigma_max * f64::EPSILON * n as f64;

    let mut u = ComplexMatrix::zeros(n, n);
    let mut v_dagger = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    let mut kept = vec![false; n];
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(if sigma > zero_tol { sigma } else { 0.0 });
        for i in 0..n {
            v_dagger.set(dst, i, v.get(i, src).conj());
        }
        if sigma > zero_tol {
            kept[dst] = true;
            for i in 0..n {
                u.set(i, dst, a.get(i, src) / sigma);
            }
        }
    }
    complete_basis(&mut u, &kept);

    // Phase convention: largest-magnitude entry of each left singular vector
    // real non-negative, compensated on the matching row of V† so the product
    // is unchanged.
    for (j, &was_kept) in kept.iter().enumerate() {
        let alpha = super::canonicalize_phase(u.col_mut(j));
        if was_kept {
            for i in 0..n {
                v_dagger.set(j, i, v_dagger.get(j, i) * alpha);
            }
        }
    }

    Ok(SvdFactors {
        u,
        singular_values,
        v_dagger,
    })
}

struct Rotation {
    r00: Complex64,
    r01: Complex64,
    r10: Complex64,
    r11: Complex64,
}

/// 2×2 unitary diagonalizing the Hermitian Gram block [[app, apq], [apq*, aqq]].
/// Phase-rotates the block real first, then applies the symmetric Schur rotation.
fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> Rotation {
    let r = apq.norm();
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    Rotation {
        r00: phase * c,
        r01: phase * s,
        r10: Complex64::new(-s, 0.0),
        r11: Complex64::new(c, 0.0),
    }
}

fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, rot: &Rotation) {
    let rows = m.rows();
    for i in 0..rows {
        let xp = m.get(i, p);
        let xq = m.get(i, q);
        m.set(i, p, xp * rot.r00 + xq * rot.r10);
        m.set(i, q, xp * rot.r01 + xq * rot.r11);
    }
}

fn column_gram(m: &ComplexMatrix, p: usize, q: usize) -> (f64, f64, Complex64) {
    let cp = m.col(p);
    let cq = m.col(q);
    let mut app = 0.0;
    let mut aqq = 0.0;
    let mut apq = Complex64::new(0.0, 0.0);
    for (a, b) in cp.iter().zip(cq) {
        app += a.norm_sqr();
        aqq += b.norm_sqr();
        apq += a.conj() * b;
    }
    (app, aqq, apq)
}

fn column_norm(m: &ComplexMatrix, j: usize) -> f64 {
    m.col(j).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn max_gram_offdiagonal(m: &ComplexMatrix) -> f64 {
    let n = m.cols();
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            let (app, aqq, apq) = column_gram(m, p, q);
            if app == 0.0 || aqq == 0.0 {
                continue;
            }
            worst = worst.max(apq.norm() / (app * aqq).sqrt());
        }
    }
    worst
}

/// Fills the columns not marked `kept` with orthonormal vectors obtained by
/// Gram–Schmidt of the standard basis, in index order, against everything
/// already present.
fn complete_basis(u: &mut ComplexMatrix, kept: &[bool]) {
    let n = u.rows();
    let mut present: Vec<usize> = (0..n).filter(|&j| kept[j]).collect();
    for (j, &was_kept) in kept.iter().enumerate() {
        if was_kept {
            continue;
        }
        let mut chosen = None;
        for cand in 0..n {
            let mut vec: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new(if i == cand { 1.0 } else { 0.0 }, 0.0))
                .collect();
            // two passes keep the completion orthogonal to working precision
            for _ in 0..2 {
                for &k in &present {
                    let overlap: Complex64 = u
                        .col(k)
                        .iter()
                        .zip(&vec)
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    for (vi, ui) in vec.iter_mut().zip(u.col(k)) {
                        *vi -= overlap * ui;
                    }
                }
            }
            let norm = vec.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-4 {
                for x in vec.iter_mut() {
                    *x /= norm;
                }
                chosen = Some(vec);
                break;
            }
        }
        let vec = chosen.expect("basis completion always finds a direction");
        for (i, x) in vec.into_iter().enumerate() {
            u.set(i, j, x);
        }
        present.push(j);
    }
}
