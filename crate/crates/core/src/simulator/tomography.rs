//! Single-qubit state tomography conditioned on the ancilla reading zero.
//!
//! Three measurement settings (Z directly, X after H, Y after a basis
//! rotation) give the Bloch components of the post-selected qubit. Combined
//! with the pooled ancilla-0 frequency they reconstruct the *un-normalized*
//! state the circuit applied, trace and all.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, ComplexMatrix, StateVector};
use crate::simulator::{run_statevector, sample_measurements, DensityMatrix, Sampling};

/// Exact conditional probabilities below this leave no post-selected state to
/// reconstruct, mirroring the zero-count case in shot mode.
const EXACT_SUCCESS_FLOOR: f64 = 1e-18;

/// Reconstruction of the ancilla-0 output of a width-2 circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyEstimate {
    /// Un-normalized state: `trace` carries the estimated squared norm of the
    /// applied (non-unitary) map's output.
    pub rho: DensityMatrix,
    /// Ancilla-0 frequency pooled over the three measurement settings.
    pub success_probability: f64,
    /// Shots per setting, or 0 when the run was exact.
    pub shots_per_basis: u64,
}

/// Tomography with the state-preparation normalization: the circuit prepares
/// `target / sqrt(2)` on success, so the output trace is twice the pooled
/// success probability.
pub fn tomography_1q(prep: &Circuit, sampling: Sampling) -> Result<TomographyEstimate> {
    tomography_1q_with_scale(prep, sampling, 2.0)
}

/// Tomography with an explicit norm scale. The estimated output trace is
/// `norm_scale * success_probability`, capped at one: the reconstructed map
/// output is a sub-normalized state by construction, so any excess is shot
/// noise.
pub fn tomography_1q_with_scale(
    prep: &Circuit,
    sampling: Sampling,
    norm_scale: f64,
) -> Result<TomographyEstimate> {
    if prep.width() != 2 {
        return Err(Error::Dimension(format!(
            "tomography needs one system qubit plus the ancilla, got width {}",
            prep.width()
        )));
    }
    if !norm_scale.is_finite() || norm_scale <= 0.0 {
        return Err(Error::Argument(format!(
            "norm scale must be positive and finite, got {norm_scale}"
        )));
    }

    let state = run_statevector(prep, &StateVector::basis(2, 0))?;
    let settings = [z_setting(), x_setting(), y_setting()];

    let mut expectations = [0.0f64; 3];
    let mut pooled_success = 0.0f64;
    let mut shots_per_basis = 0u64;

    for (index, setting) in settings.iter().enumerate() {
        let (expectation, success) = match sampling {
            Sampling::Exact => exact_setting(&state, setting)?,
            Sampling::Shots { shots_per_basis: shots, seed } => {
                shots_per_basis = shots;
                sampled_setting(&state, setting, shots, seed + index as u64)?
            }
        };
        expectations[index] = expectation;
        pooled_success += success / 3.0;
    }

    let [z, x, y] = expectations;
    let bloch = ComplexMatrix::from_rows(&[
        vec![
            Complex64::new((1.0 + z) / 2.0, 0.0),
            Complex64::new(x / 2.0, -y / 2.0),
        ],
        vec![
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new((1.0 - z) / 2.0, 0.0),
        ],
    ])?;
    let trace = (norm_scale * pooled_success).min(1.0);
    let rho = DensityMatrix::new(project_psd(&bloch)?.scale(Complex64::new(trace, 0.0)))?;
    Ok(TomographyEstimate {
        rho,
        success_probability: pooled_success,
        shots_per_basis,
    })
}

struct Setting {
    rotations: Vec<Gate>,
}

fn z_setting() -> Setting {
    Setting { rotations: vec![] }
}

fn x_setting() -> Setting {
    Setting { rotations: vec![Gate::h(0)] }
}

fn y_setting() -> Setting {
    // undo the +i phase of the Y eigenstate, then measure like X
    Setting { rotations: vec![Gate::rz(0, -FRAC_PI_2), Gate::h(0)] }
}

/// Conditional expectation and success probability from exact amplitudes.
fn exact_setting(state: &StateVector, setting: &Setting) -> Result<(f64, f64)> {
    let mut rotated = state.clone();
    for gate in &setting.rotations {
        gate.apply(rotated.amplitudes_mut());
    }
    let amps = rotated.amplitudes();
    // index layout: bit 0 = system, bit 1 = ancilla
    let p_sys0 = amps[0b00].norm_sqr();
    let p_sys1 = amps[0b01].norm_sqr();
    let success = p_sys0 + p_sys1;
    if success < EXACT_SUCCESS_FLOOR {
        return Err(Error::InsufficientStatistics(
            "ancilla never reads zero for this circuit".into(),
        ));
    }
    Ok(((p_sys0 - p_sys1) / success, success))
}

/// Conditional expectation and success frequency from a seeded shot run.
fn sampled_setting(
    state: &StateVector,
    setting: &Setting,
    shots: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    let run = sample_measurements(state, shots, seed, &setting.rotations)?;
    let n_sys0 = *run.counts.get("00").unwrap_or(&0);
    let n_sys1 = *run.counts.get("01").unwrap_or(&0);
    let n_success = n_sys0 + n_sys1;
    if n_success == 0 {
        return Err(Error::InsufficientStatistics(format!(
            "no ancilla-0 outcomes in {shots} shots"
        )));
    }
    let expectation = (n_sys0 as f64 - n_sys1 as f64) / n_success as f64;
    Ok((expectation, n_success as f64 / shots as f64))
}

/// Clamps negative eigenvalues of the (trace-one) Bloch reconstruction to
/// zero and rescales back to unit trace, so shot noise cannot push the
/// estimate outside the physical set.
fn project_psd(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eig(rho)?;
    if values.last().copied().unwrap_or(0.0) >= 0.0 {
        return Ok(rho.clone());
    }
    let clamped: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    let scaled: Vec<Complex64> = clamped
        .iter()
        .map(|&v| Complex64::new(v / total, 0.0))
        .collect();
    Ok(vectors
        .mul(&ComplexMatrix::diagonal(&scaled))
        .mul(&vectors.adjoint()))
}
