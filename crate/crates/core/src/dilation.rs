//! Lifting non-unitary diagonals to unitary ones on a single ancilla qubit.
//!
//! A contraction diagonal Σ (all |σᵢ| ≤ 1) splits into two unit-modulus
//! diagonals Σ₊, Σ₋ with σ±ᵢ = σᵢ ± i√(1−|σᵢ|²)·e^{iφᵢ} (σᵢ = |σᵢ|e^{iφᵢ}),
//! so that Σ₊ + Σ₋ = 2Σ and Σ₊ ⊕ Σ₋ is a unitary diagonal on one extra
//! qubit. Sandwiched between ancilla Hadamards, the two 1/√2 factors recover
//! the missing ½ and the ancilla-0 block acts exactly as Σ.
//!
//! [`sznagy_dilate`] provides the classic block dilation
//! [[M, √(I−MM†)], [√(I−M†M), −M†]] as an independent oracle for the same
//! post-selected action.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_sqrt_clamped, svd, ComplexMatrix, MAX_DIM};

/// Moduli may exceed 1 by at most this much before counting as violations;
/// anything inside the band is clamped to unit modulus.
const UNIT_CLAMP_BAND: f64 = 1e-12;
/// Looser tolerance for the Sz.-Nagy path, whose singular values arrive
/// through a numerical SVD.
const SZNAGY_TOL: f64 = 1e-10;
/// Negativity clamp for the defect operators I − MM† and I − M†M, whose
/// smallest eigenvalues round to ~−(1 − σ_max²) error scale near saturation.
const SZNAGY_PSD_CLAMP: f64 = 1e-9;

/// The two unit-modulus diagonals dilating a contraction diagonal, padded to
/// a power-of-two length.
#[derive(Debug, Clone)]
pub struct DilatedDiagonal {
    sigma_plus: Vec<Complex64>,
    sigma_minus: Vec<Complex64>,
    scale: f64,
    original: Vec<Complex64>,
}

impl DilatedDiagonal {
    /// Padded length (a power of two).
    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of system qubits spanned by the diagonal.
    pub fn system_qubits(&self) -> usize {
        self.len().trailing_zeros() as usize
    }

    pub fn sigma_plus(&self) -> &[Complex64] {
        &self.sigma_plus
    }

    pub fn sigma_minus(&self) -> &[Complex64] {
        &self.sigma_minus
    }

    /// The rescaled (and padded) input entries, each |σᵢ| ≤ 1.
    pub fn original(&self) -> &[Complex64] {
        &self.original
    }

    /// Factor the raw input was divided by (1 when no rescale happened).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Phase angles of Σ₊ ⊕ Σ₋ in block order (ancilla-0 block first), the
    /// input to diagonal gate synthesis.
    pub fn dilated_phases(&self) -> Vec<f64> {
        self.sigma_plus
            .iter()
            .chain(&self.sigma_minus)
            .map(|c| c.arg())
            .collect()
    }

    /// The dilated operator diag(Σ₊ ⊕ Σ₋) as a dense matrix.
    pub fn unitary_matrix(&self) -> ComplexMatrix {
        let entries: Vec<Complex64> = self
            .sigma_plus
            .iter()
            .chain(&self.sigma_minus)
            .copied()
            .collect();
        ComplexMatrix::diagonal(&entries)
    }
}

/// What the contraction check saw, and what (if anything) was done about it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionReport {
    pub max_singular_value: f64,
    pub was_rescaled: bool,
    /// Operator-norm bound of the operator after dividing by the scale.
    pub shifted_operator_norm_bound: f64,
}

impl ContractionReport {
    /// Report for an operator whose largest singular value is `magnitude`.
    pub fn for_magnitude(magnitude: f64) -> Self {
        let was_rescaled = magnitude > 1.0 + UNIT_CLAMP_BAND;
        let scale = if was_rescaled { magnitude } else { 1.0 };
        Self {
            max_singular_value: magnitude,
            was_rescaled,
            shifted_operator_norm_bound: magnitude / scale,
        }
    }
}

/// Splits one diagonal entry σ into the unit-modulus pair (σ₊, σ₋) with
/// σ₊ + σ₋ = 2σ. The σ = 0 limit takes phase 0, giving (+i, −i).
pub fn lift_entry(sigma: Complex64) -> Result<(Complex64, Complex64)> {
    let magnitude = sigma.norm();
    if !magnitude.is_finite() {
        return Err(Error::Argument("diagonal entry must be finite".into()));
    }
    if magnitude > 1.0 + UNIT_CLAMP_BAND {
        return Err(Error::ContractionViolation { magnitude });
    }
    let direction = if magnitude == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        sigma / magnitude
    };
    let clamped = magnitude.min(1.0);
    let defect = (1.0 - clamped * clamped).sqrt();
    let base = direction * clamped;
    let lift = direction * Complex64::new(0.0, defect);
    Ok((base + lift, base - lift))
}

/// Builds the dilated diagonal for `diag`, padding to the next power of two
/// with identity entries. With `auto_rescale` the diagonal is divided by its
/// largest modulus when that exceeds 1; otherwise oversized entries are an
/// error.
pub fn build_dilated_diagonal(
    diag: &[Complex64],
    auto_rescale: bool,
) -> Result<(DilatedDiagonal, ContractionReport)> {
    if diag.is_empty() {
        return Err(Error::Dimension("diagonal must be non-empty".into()));
    }
    if diag.len() > MAX_DIM {
        return Err(Error::Dimension(format!(
            "diagonal length {} exceeds the supported maximum {MAX_DIM}",
            diag.len()
        )));
    }
    if diag
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(Error::Argument("diagonal entries must be finite".into()));
    }

    let max_magnitude = diag.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let report = ContractionReport::for_magnitude(max_magnitude);
    if report.was_rescaled && !auto_rescale {
        return Err(Error::ContractionViolation {
            magnitude: max_magnitude,
        });
    }
    let scale = if report.was_rescaled { max_magnitude } else { 1.0 };

    let padded_len = diag.len().next_power_of_two();
    let mut original: Vec<Complex64> = diag.iter().map(|&e| e / scale).collect();
    original.resize(padded_len, Complex64::new(1.0, 0.0));

    let mut sigma_plus = Vec::with_capacity(padded_len);
    let mut sigma_minus = Vec::with_capacity(padded_len);
    for &entry in &original {
        let (plus, minus) = lift_entry(entry)?;
        sigma_plus.push(plus);
        sigma_minus.push(minus);
    }

    Ok((
        DilatedDiagonal {
            sigma_plus,
            sigma_minus,
            scale,
            original,
        },
        report,
    ))
}

/// The 2r×2r block unitary [[M, √(I−MM†)], [√(I−M†M), −M†]] dilating an
/// arbitrary contraction. Used as an oracle against the diagonal pipeline.
pub fn sznagy_dilate(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let factors = svd(m)?;
    let r = factors.dim();
    let top = factors.spectral_norm();
    if top > 1.0 + SZNAGY_TOL {
        return Err(Error::ContractionViolation { magnitude: top });
    }

    let id = ComplexMatrix::identity(r);
    let adjoint = m.adjoint();
    let defect_left = hermitian_sqrt_clamped(&id.sub(&m.mul(&adjoint)), SZNAGY_PSD_CLAMP)?;
    let defect_right = hermitian_sqrt_clamped(&id.sub(&adjoint.mul(m)), SZNAGY_PSD_CLAMP)?;

    let mut out = ComplexMatrix::zeros(2 * r, 2 * r);
    for j in 0..r {
        for i in 0..r {
            out.set(i, j, m.get(i, j));
            out.set(i, j + r, defect_left.get(i, j));
            out.set(i + r, j, defect_right.get(i, j));
            out.set(i + r, j + r, -adjoint.get(i, j));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::frobenius_norm;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lift_unit_entry_is_fixed() {
        let (plus, minus) = lift_entry(c(1.0, 0.0)).unwrap();
        assert!((plus - c(1.0, 0.0)).norm() <= 1e-15);
        assert!((minus - c(1.0, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn lift_zero_takes_canonical_phase() {
        let (plus, minus) = lift_entry(c(0.0, 0.0)).unwrap();
        assert!((plus - c(0.0, 1.0)).norm() <= 1e-15);
        assert!((minus - c(0.0, -1.0)).norm() <= 1e-15);
    }

    #[test]
    fn lift_real_point_six() {
        let (plus, minus) = lift_entry(c(0.6, 0.0)).unwrap();
        assert!((plus - c(0.6, 0.8)).norm() <= 1e-15);
        assert!((minus - c(0.6, -0.8)).norm() <= 1e-15);
    }

    #[test]
    fn lift_rotates_with_the_entry_phase() {
        // 0.6i = 0.6·e^{iπ/2}: the defect term picks up the same phase.
        let (plus, minus) = lift_entry(c(0.0, 0.6)).unwrap();
        assert!((plus - c(-0.8, 0.6)).norm() <= 1e-15);
        assert!((minus - c(0.8, 0.6)).norm() <= 1e-15);
        assert!((plus + minus - c(0.0, 1.2)).norm() <= 1e-15);
    }

    #[test]
    fn lift_clamps_the_rounding_band_and_rejects_beyond() {
        let (plus, minus) = lift_entry(c(1.0 + 5e-13, 0.0)).unwrap();
        assert!((plus.norm() - 1.0).abs() <= 1e-12);
        assert!((minus.norm() - 1.0).abs() <= 1e-12);
        match lift_entry(c(1.5, 0.0)) {
            Err(Error::ContractionViolation { magnitude }) => {
                assert!((magnitude - 1.5).abs() <= 1e-15)
            }
            other => panic!("expected contraction violation, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn lift_entry_invariants(re in -1.0f64..1.0, im in -1.0f64..1.0) {
            let mut sigma = c(re, im);
            if sigma.norm() > 1.0 {
                sigma /= sigma.norm();
            }
            let (plus, minus) = lift_entry(sigma).unwrap();
            prop_assert!((plus.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((minus.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((plus + minus - sigma * 2.0).norm() <= 1e-12);
        }
    }

    #[test]
    fn build_identity_diagonal() {
        let (dd, report) = build_dilated_diagonal(&[c(1.0, 0.0), c(1.0, 0.0)], false).unwrap();
        assert_eq!(dd.sigma_plus(), &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(dd.sigma_minus(), &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(dd.unitary_matrix().identity_residual() <= 1e-15);
        assert!(dd.dilated_phases().iter().all(|&p| p == 0.0));
        assert_eq!(dd.scale(), 1.0);
        assert!(!report.was_rescaled);
    }

    #[test]
    fn build_mixed_diagonal_matches_hand_values() {
        let (dd, _) = build_dilated_diagonal(&[c(0.6, 0.0), c(1.0, 0.0)], false).unwrap();
        assert!((dd.sigma_plus()[0] - c(0.6, 0.8)).norm() <= 1e-15);
        assert!((dd.sigma_minus()[0] - c(0.6, -0.8)).norm() <= 1e-15);
        assert!((dd.sigma_plus()[1] - c(1.0, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn build_rescales_oversized_diagonals() {
        let (dd, report) = build_dilated_diagonal(&[c(2.0, 0.0), c(1.0, 0.0)], true).unwrap();
        assert_eq!(dd.scale(), 2.0);
        assert!((dd.original()[0] - c(1.0, 0.0)).norm() <= 1e-15);
        assert!((dd.original()[1] - c(0.5, 0.0)).norm() <= 1e-15);
        let root3_half = 3.0f64.sqrt() / 2.0;
        assert!((dd.sigma_plus()[0] - c(1.0, 0.0)).norm() <= 1e-15);
        assert!((dd.sigma_plus()[1] - c(0.5, root3_half)).norm() <= 1e-15);
        assert!(report.was_rescaled);
        assert!((report.max_singular_value - 2.0).abs() <= 1e-15);
        assert!((report.shifted_operator_norm_bound - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn build_rejects_oversized_without_rescale() {
        assert!(matches!(
            build_dilated_diagonal(&[c(2.0, 0.0)], false),
            Err(Error::ContractionViolation { .. })
        ));
    }

    #[test]
    fn build_pads_with_identity_entries() {
        let (dd, _) =
            build_dilated_diagonal(&[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)], false).unwrap();
        assert_eq!(dd.len(), 4);
        assert_eq!(dd.system_qubits(), 2);
        assert_eq!(dd.original()[3], c(1.0, 0.0));
        assert_eq!(dd.sigma_plus()[3], c(1.0, 0.0));
    }

    #[test]
    fn build_rejects_empty_input() {
        assert!(matches!(
            build_dilated_diagonal(&[], false),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn report_invariant_links_flag_and_magnitude() {
        for &(mag, expect) in &[(0.5, false), (1.0, false), (1.0 + 5e-13, false), (1.1, true)] {
            let report = ContractionReport::for_magnitude(mag);
            assert_eq!(report.was_rescaled, expect);
            assert!(report.shifted_operator_norm_bound <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn dilated_diagonal_is_unitary_and_recombines_for_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let len = rng.gen_range(1..=8);
            let diag: Vec<Complex64> = (0..len)
                .map(|_| {
                    let mag = rng.gen::<f64>();
                    let angle = rng.gen::<f64>() * std::f64::consts::TAU;
                    Complex64::from_polar(mag, angle)
                })
                .collect();
            let (dd, _) = build_dilated_diagonal(&diag, false).unwrap();
            assert!(dd.unitary_matrix().unitary_residual() <= 1e-12);
            for (i, &entry) in dd.original().iter().enumerate() {
                let mean = (dd.sigma_plus()[i] + dd.sigma_minus()[i]) / 2.0;
                assert!((mean - entry).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn sznagy_of_zero_swaps_blocks() {
        let w = sznagy_dilate(&ComplexMatrix::zeros(2, 2)).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            expected.set(i, i + 2, c(1.0, 0.0));
            expected.set(i + 2, i, c(1.0, 0.0));
        }
        assert!(frobenius_norm(&w.sub(&expected)) <= 1e-12);
    }

    #[test]
    fn sznagy_of_identity_is_block_diagonal() {
        let w = sznagy_dilate(&ComplexMatrix::identity(2)).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            expected.set(i, i, c(1.0, 0.0));
            expected.set(i + 2, i + 2, c(-1.0, 0.0));
        }
        assert!(frobenius_norm(&w.sub(&expected)) <= 1e-10);
    }

    #[test]
    fn sznagy_action_reproduces_the_contraction() {
        let m = ComplexMatrix::diagonal(&[c(0.6, 0.0), c(0.8, 0.0)]);
        let w = sznagy_dilate(&m).unwrap();
        assert!(w.unitary_residual() <= 1e-10);
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        let extended = [psi[0], psi[1], c(0.0, 0.0), c(0.0, 0.0)];
        let out = w.matvec(&extended);
        let direct = m.matvec(&psi);
        assert!((out[0] - direct[0]).norm() <= 1e-12);
        assert!((out[1] - direct[1]).norm() <= 1e-12);
    }

    #[test]
    fn sznagy_unitary_for_random_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..25 {
            let n = rng.gen_range(2..=6);
            let raw = ComplexMatrix::from_fn(n, n, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            // shrink below unit operator norm
            let top = svd(&raw).unwrap().spectral_norm();
            let m = raw.scale(c(rng.gen::<f64>() / top, 0.0));
            let w = sznagy_dilate(&m).unwrap();
            assert!(w.unitary_residual() <= 1e-9, "dilation not unitary");
            for j in 0..n {
                for i in 0..n {
                    assert_eq!(w.get(i, j), m.get(i, j), "top-left block must be exact");
                }
            }
        }
    }

    #[test]
    fn sznagy_rejects_expansions() {
        let m = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(0.0, 0.0)]);
        match sznagy_dilate(&m) {
            Err(Error::ContractionViolation { magnitude }) => {
                assert!((magnitude - 2.0).abs() <= 1e-12)
            }
            other => panic!("expected contraction violation, got {other:?}"),
        }
    }
}
