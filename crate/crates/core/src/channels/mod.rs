//! Kraus channels: construction of the two physical noise models, contraction
//! diagnostics, the classical operator-sum oracle, and circuit-based channel
//! evolution through the dilation pipeline.

mod config;
mod ensemble;
mod evolve;

pub use config::{ChannelKind, ChannelSpec};
pub use ensemble::{ensemble_decompose, Ensemble, EnsembleMember};
pub use evolve::evolve_on_simulator;

use num_complex::Complex64;

use crate::dilation::ContractionReport;
use crate::error::{Error, Result};
use crate::numerics::{check_square, svd, ComplexMatrix, SvdFactors};
use crate::simulator::DensityMatrix;

/// Largest singular value a valid Kraus operator may have.
const CONTRACTION_SLACK: f64 = 1e-10;
/// Allowed deviation of Σ Kᵢ†Kᵢ from the identity for a valid channel.
const COMPLETENESS_TOL: f64 = 1e-10;
const SIMPLEX_TOL: f64 = 1e-12;

/// A quantum channel in operator-sum form. All operators share one dimension;
/// validated channels are additionally trace-preserving sets of contractions.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    /// Analytic SVD factorizations where known (the damping channel supplies
    /// them); missing entries fall back to the numerical factorizer.
    factors: Vec<Option<SvdFactors>>,
    label: String,
}

impl KrausChannel {
    /// A channel whose operators are verified contractions summing to a
    /// trace-preserving map.
    pub fn new(operators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let channel = Self::unvalidated(operators, label)?;
        for op in &channel.operators {
            let top = svd(op)?.spectral_norm();
            if top > 1.0 + CONTRACTION_SLACK {
                return Err(Error::ContractionViolation { magnitude: top });
            }
        }
        let residual = channel.completeness_matrix().identity_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::Domain(format!(
                "Kraus operators are not trace preserving (residual {residual:.3e})"
            )));
        }
        Ok(channel)
    }

    /// Shape checks only — for diagnosing operator sets that may violate the
    /// contraction or completeness invariants.
    pub fn unvalidated(operators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::Dimension("channel needs at least one Kraus operator".into()))?;
        let dim = check_square(first, "Kraus operator")?;
        for op in &operators {
            if check_square(op, "Kraus operator")? != dim {
                return Err(Error::Dimension(
                    "all Kraus operators must share one dimension".into(),
                ));
            }
        }
        Ok(Self {
            factors: vec![None; operators.len()],
            operators,
            label: label.into(),
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn operator_count(&self) -> usize {
        self.operators.len()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// SVD of one operator: the stored analytic factorization when present,
    /// otherwise computed numerically.
    pub fn factors_for(&self, index: usize) -> Result<SvdFactors> {
        match self.factors.get(index) {
            Some(Some(f)) => Ok(f.clone()),
            Some(None) => svd(&self.operators[index]),
            None => Err(Error::Dimension(format!(
                "operator index {index} out of range for {}-operator channel",
                self.operators.len()
            ))),
        }
    }

    /// Σ Kᵢ†Kᵢ — the identity exactly when the channel preserves trace.
    fn completeness_matrix(&self) -> ComplexMatrix {
        let dim = self.dim();
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(dim, dim), |acc, op| {
                acc.add(&op.adjoint().mul(op))
            })
    }

    /// Σ KᵢKᵢ† — the identity exactly when the channel is unital.
    fn dual_completeness_matrix(&self) -> ComplexMatrix {
        let dim = self.dim();
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(dim, dim), |acc, op| {
                acc.add(&op.mul(&op.adjoint()))
            })
    }
}

/// Dephasing with asymmetric branch weights: both operators are scaled
/// diagonal phase rotations, so populations are untouched and only the
/// off-diagonal coherence evolves.
pub fn dephasing_channel(theta: f64, lambda0: f64, lambda1: f64, t: f64) -> Result<KrausChannel> {
    if !(theta.is_finite() && t.is_finite()) {
        return Err(Error::Argument(
            "dephasing angle and time must be finite".into(),
        ));
    }
    if !(lambda0 >= 0.0 && lambda1 >= 0.0 && (lambda0 + lambda1 - 1.0).abs() <= SIMPLEX_TOL) {
        return Err(Error::Argument(format!(
            "branch weights must be non-negative and sum to one, got ({lambda0}, {lambda1})"
        )));
    }
    let phase = Complex64::from_polar(1.0, theta * t);
    let k0 = ComplexMatrix::diagonal(&[phase, phase.conj()]).scale(lambda0.sqrt().into());
    let k1 = ComplexMatrix::diagonal(&[phase.conj(), phase]).scale(lambda1.sqrt().into());
    KrausChannel::new(
        vec![k0, k1],
        format!("dephasing(theta={theta}, lambda0={lambda0}, lambda1={lambda1}, t={t})"),
    )
}

/// Amplitude damping toward the ground state at rate `gamma`. Both operators
/// carry their closed-form SVD: the no-jump branch is already diagonal, the
/// jump branch factors through a bit flip.
pub fn amplitude_damping_channel(gamma: f64, t: f64) -> Result<KrausChannel> {
    if !(gamma.is_finite() && t.is_finite() && gamma >= 0.0 && t >= 0.0) {
        return Err(Error::Argument(format!(
            "decay rate and time must be finite and non-negative, got ({gamma}, {t})"
        )));
    }
    let decay = (-gamma * t / 2.0).exp();
    let jump = (1.0 - (-gamma * t).exp()).max(0.0).sqrt();

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let k0 = ComplexMatrix::diagonal(&[one, Complex64::new(decay, 0.0)]);
    let k1 = ComplexMatrix::from_rows(&[
        vec![zero, Complex64::new(jump, 0.0)],
        vec![zero, zero],
    ])?;

    let flip = ComplexMatrix::from_rows(&[vec![zero, one], vec![one, zero]])?;
    let k0_factors = SvdFactors {
        u: ComplexMatrix::identity(2),
        singular_values: vec![1.0, decay],
        v_dagger: ComplexMatrix::identity(2),
    };
    let k1_factors = SvdFactors {
        u: ComplexMatrix::identity(2),
        singular_values: vec![jump, 0.0],
        v_dagger: flip,
    };

    let mut channel = KrausChannel::new(
        vec![k0, k1],
        format!("damping(gamma={gamma}, t={t})"),
    )?;
    channel.factors = vec![Some(k0_factors), Some(k1_factors)];
    Ok(channel)
}

/// Classical oracle: ρ ↦ Σ Kᵢ ρ Kᵢ†, computed by direct matrix algebra.
pub fn operator_sum_evolve(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "channel dimension {} does not match state dimension {}",
            ch.dim(),
            rho.dim()
        )));
    }
    let dim = ch.dim();
    let sum = ch
        .operators
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, op| {
            acc.add(&op.mul(rho.matrix()).mul(&op.adjoint()))
        });
    DensityMatrix::new(sum)
}

/// Contraction and completeness diagnostics for a (possibly invalid) channel.
#[derive(Debug, Clone)]
pub struct ChannelReport {
    /// Per-operator contraction reports, in operator order.
    pub operators: Vec<ContractionReport>,
    /// ‖Σ Kᵢ†Kᵢ − I‖_F: zero for a trace-preserving channel.
    pub completeness_residual: f64,
    /// ‖Σ KᵢKᵢ† − I‖_F: zero when the channel is also unital.
    pub unital_residual: f64,
}

/// Measures how far each operator is from the contraction bound and how far
/// the set is from completeness, without rejecting anything.
pub fn check_contraction(ch: &KrausChannel) -> Result<ChannelReport> {
    let mut operators = Vec::with_capacity(ch.operator_count());
    for index in 0..ch.operator_count() {
        let top = ch.factors_for(index)?.spectral_norm();
        operators.push(ContractionReport::for_magnitude(top));
    }
    Ok(ChannelReport {
        operators,
        completeness_residual: ch.completeness_matrix().identity_residual(),
        unital_residual: ch.dual_completeness_matrix().identity_residual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The mixed initial state used throughout the dynamics tests:
    /// ¼·[[1, 1], [1, 3]].
    fn mixed_initial_state() -> DensityMatrix {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.25, 0.0), c(0.25, 0.0)],
            vec![c(0.25, 0.0), c(0.75, 0.0)],
        ])
        .unwrap();
        DensityMatrix::new(m).unwrap()
    }

    fn plus_state_density() -> DensityMatrix {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(&[c(inv, 0.0), c(inv, 0.0)]).unwrap()
    }

    #[test]
    fn dephasing_at_time_zero_is_weighted_identity() {
        let ch = dephasing_channel(0.5, 0.7, 0.3, 0.0).unwrap();
        let expected0 = ComplexMatrix::identity(2).scale(c(0.7f64.sqrt(), 0.0));
        let expected1 = ComplexMatrix::identity(2).scale(c(0.3f64.sqrt(), 0.0));
        assert!(matrix_distance(&ch.operators()[0], &expected0) <= 1e-15);
        assert!(matrix_distance(&ch.operators()[1], &expected1) <= 1e-15);
    }

    fn matrix_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        crate::numerics::frobenius_norm(&a.sub(b))
    }

    #[test]
    fn dephasing_is_trace_preserving_at_all_times() {
        for &t in &[0.0, 0.5, 1.7, 3.2, 6.3] {
            let ch = dephasing_channel(0.5, 0.7, 0.3, t).unwrap();
            assert!(ch.completeness_matrix().identity_residual() <= 1e-12);
        }
    }

    #[test]
    fn dephasing_rejects_bad_weights() {
        assert!(matches!(
            dephasing_channel(0.5, 0.8, 0.3, 1.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            dephasing_channel(0.5, -0.1, 1.1, 1.0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn damping_at_time_zero_is_identity_and_nothing() {
        let ch = amplitude_damping_channel(0.15, 0.0).unwrap();
        assert!(ch.operators()[0].identity_residual() <= 1e-15);
        assert!(crate::numerics::frobenius_norm(&ch.operators()[1]) <= 1e-15);
    }

    #[test]
    fn damping_is_trace_preserving_at_all_times() {
        for &t in &[0.0, 1.0, 5.0, 12.5, 30.0] {
            let ch = amplitude_damping_channel(0.15, t).unwrap();
            assert!(ch.completeness_matrix().identity_residual() <= 1e-12);
        }
    }

    #[test]
    fn damping_rejects_negative_arguments() {
        assert!(matches!(
            amplitude_damping_channel(-0.1, 1.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            amplitude_damping_channel(0.15, -1.0),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn damping_analytic_factors_reconstruct_the_operators() {
        let ch = amplitude_damping_channel(0.15, 7.0).unwrap();
        for index in 0..2 {
            let factors = ch.factors_for(index).unwrap();
            let recon = factors.reconstruct();
            assert!(matrix_distance(&recon, &ch.operators()[index]) <= 1e-12);
            // cross-check the analytic singular values against the numerical SVD
            let numerical = svd(&ch.operators()[index]).unwrap();
            for (a, b) in factors
                .singular_values
                .iter()
                .zip(&numerical.singular_values)
            {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn identity_channel_leaves_states_alone() {
        let ch = KrausChannel::new(vec![ComplexMatrix::identity(2)], "identity").unwrap();
        let rho = mixed_initial_state();
        let evolved = operator_sum_evolve(&ch, &rho).unwrap();
        assert!(matrix_distance(evolved.matrix(), rho.matrix()) <= 1e-15);
    }

    #[test]
    fn dephasing_coherence_follows_the_two_branch_interference() {
        // ρ₀₁(t) = ½(λ₀ e^{2iθt} + λ₁ e^{−2iθt}) for the |+⟩ initial state
        let (theta, l0, l1) = (0.5, 0.7, 0.3);
        let rho0 = plus_state_density();
        for &t in &[0.0, 0.9, 2.4, std::f64::consts::PI, 5.5] {
            let ch = dephasing_channel(theta, l0, l1, t).unwrap();
            let evolved = operator_sum_evolve(&ch, &rho0).unwrap();
            let expected = (Complex64::from_polar(l0, 2.0 * theta * t)
                + Complex64::from_polar(l1, -2.0 * theta * t))
                / 2.0;
            assert!(
                (evolved.matrix().get(0, 1) - expected).norm() <= 1e-12,
                "coherence mismatch at t = {t}"
            );
        }
        // at 2θt = π both branches align destructively: coherence −½
        let t_pi = std::f64::consts::PI / (2.0 * theta);
        let ch = dephasing_channel(theta, l0, l1, t_pi).unwrap();
        let evolved = operator_sum_evolve(&ch, &rho0).unwrap();
        assert!((evolved.matrix().get(0, 1) - c(-0.5, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn dephasing_populations_never_move() {
        let rho0 = mixed_initial_state();
        for &t in &[0.3, 1.1, 4.8, 6.2] {
            let ch = dephasing_channel(0.5, 0.7, 0.3, t).unwrap();
            let evolved = operator_sum_evolve(&ch, &rho0).unwrap();
            assert!((evolved.matrix().get(0, 0).re - 0.25).abs() <= 1e-12);
            assert!((evolved.matrix().get(1, 1).re - 0.75).abs() <= 1e-12);
        }
    }

    #[test]
    fn damping_trajectories_match_the_closed_form() {
        // ρ₁₁(t) = ¾ e^{−γt} and ρ₀₁(t) = ¼ e^{−γt/2} for the mixed start
        let gamma = 0.15;
        let rho0 = mixed_initial_state();
        for &t in &[0.0, 1.0, 3.0, 7.5, 15.0, 30.0] {
            let ch = amplitude_damping_channel(gamma, t).unwrap();
            let evolved = operator_sum_evolve(&ch, &rho0).unwrap();
            let expected_pop = 0.75 * (-gamma * t).exp();
            let expected_coh = 0.25 * (-gamma * t / 2.0).exp();
            assert!((evolved.matrix().get(1, 1).re - expected_pop).abs() <= 1e-12);
            assert!((evolved.matrix().get(0, 1) - c(expected_coh, 0.0)).norm() <= 1e-12);
            assert!((evolved.trace_real() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn damping_decays_to_the_ground_state() {
        let gamma = 0.15;
        let t = 20.0 / gamma;
        let ch = amplitude_damping_channel(gamma, t).unwrap();
        let evolved = operator_sum_evolve(&ch, &mixed_initial_state()).unwrap();
        assert!(evolved.matrix().get(1, 1).re <= 1e-8);
    }

    #[test]
    fn evolve_rejects_dimension_mismatch() {
        let ch = dephasing_channel(0.5, 0.7, 0.3, 1.0).unwrap();
        let rho4 = DensityMatrix::new(
            ComplexMatrix::identity(4).scale(c(0.25, 0.0)),
        )
        .unwrap();
        assert!(matches!(
            operator_sum_evolve(&ch, &rho4),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn contraction_report_for_dephasing() {
        let report = check_contraction(&dephasing_channel(0.5, 0.7, 0.3, 2.0).unwrap()).unwrap();
        assert!((report.operators[0].max_singular_value - 0.7f64.sqrt()).abs() <= 1e-12);
        assert!((report.operators[1].max_singular_value - 0.3f64.sqrt()).abs() <= 1e-12);
        assert!(report.operators.iter().all(|r| !r.was_rescaled));
        assert!(report.completeness_residual <= 1e-12);
        // dephasing operators are normal, so the dual sum is the identity too
        assert!(report.unital_residual <= 1e-12);
    }

    #[test]
    fn contraction_report_for_damping() {
        let (gamma, t) = (0.15, 6.0);
        let report = check_contraction(&amplitude_damping_channel(gamma, t).unwrap()).unwrap();
        let jump = (1.0 - (-gamma * t).exp()).sqrt();
        assert!((report.operators[0].max_singular_value - 1.0).abs() <= 1e-12);
        assert!((report.operators[1].max_singular_value - jump).abs() <= 1e-12);
        assert!(report.completeness_residual <= 1e-12);
        // damping is not unital: Σ KKᵀ ≠ I away from t = 0
        assert!(report.unital_residual > 0.1);
    }

    #[test]
    fn contraction_report_flags_an_expanding_operator() {
        let dummy = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(0.0, 0.0)]);
        let ch = KrausChannel::unvalidated(vec![dummy], "dummy").unwrap();
        let report = check_contraction(&ch).unwrap();
        assert!((report.operators[0].max_singular_value - 2.0).abs() <= 1e-12);
        assert!(report.operators[0].was_rescaled);
    }

    #[test]
    fn validated_constructor_rejects_bad_channels() {
        let expanding = ComplexMatrix::identity(2).scale(c(2.0, 0.0));
        assert!(matches!(
            KrausChannel::new(vec![expanding], "bad"),
            Err(Error::ContractionViolation { .. })
        ));
        let lossy = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(matches!(
            KrausChannel::new(vec![lossy], "incomplete"),
            Err(Error::Domain(_))
        ));
        assert!(KrausChannel::new(vec![], "empty").is_err());
    }

    #[test]
    fn label_is_retained() {
        let ch = amplitude_damping_channel(0.15, 1.0).unwrap();
        assert_eq!(ch.label(), "damping(gamma=0.15, t=1)");
    }
}
