//! Channel evolution through the dilation pipeline: every Kraus operator is
//! applied to every ensemble member as a circuit, and the weighted outcomes
//! are summed back into a density matrix.

use num_complex::Complex64;

use crate::channels::{Ensemble, KrausChannel};
use crate::circuit::{build_svd_circuit, Circuit, Gate};
use crate::dilation::build_dilated_diagonal;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, StateVector, SvdFactors};
use crate::simulator::{
    apply_with_factors, tomography_1q_with_scale, DensityMatrix, Sampling,
};

/// Exact evolution runs full statevectors; keep the exponential blowup small.
const EXACT_MAX_DIM: usize = 16;
const STATE_MATCH_TOL: f64 = 1e-12;

/// Evolves an ensemble through a channel on the simulator.
///
/// Exact mode accumulates the post-selected branches directly and reproduces
/// the operator-sum oracle. Shot mode reconstructs each (operator, member)
/// outcome by seeded single-qubit tomography; operators whose outcome never
/// passes post-selection (vanishing operators) contribute nothing, which is
/// their exact contribution anyway.
pub fn evolve_on_simulator(
    ch: &KrausChannel,
    ens: &Ensemble,
    mode: Sampling,
) -> Result<DensityMatrix> {
    let dim = ch.dim();
    for member in ens.members() {
        if member.state.len() != dim {
            return Err(Error::Dimension(format!(
                "ensemble member length {} does not match channel dimension {dim}",
                member.state.len()
            )));
        }
    }
    match mode {
        Sampling::Exact => evolve_exact(ch, ens),
        Sampling::Shots { shots_per_basis, seed } => evolve_sampled(ch, ens, shots_per_basis, seed),
    }
}

fn evolve_exact(ch: &KrausChannel, ens: &Ensemble) -> Result<DensityMatrix> {
    let dim = ch.dim();
    if dim > EXACT_MAX_DIM {
        return Err(Error::Dimension(format!(
            "exact channel evolution supports dimensions up to {EXACT_MAX_DIM}, got {dim}"
        )));
    }
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for member in ens.members() {
        for index in 0..ch.operator_count() {
            let factors = ch.factors_for(index)?;
            let (branch, _probability) = apply_with_factors(&factors, &member.state, false)?;
            let weighted = ComplexMatrix::from_fn(dim, dim, |i, j| {
                branch[i] * branch[j].conj() * member.weight
            });
            sum = sum.add(&weighted);
        }
    }
    DensityMatrix::new(sum)
}

fn evolve_sampled(
    ch: &KrausChannel,
    ens: &Ensemble,
    shots_per_basis: u64,
    seed: u64,
) -> Result<DensityMatrix> {
    if ch.dim() != 2 {
        return Err(Error::Dimension(format!(
            "sampled channel evolution reconstructs a single qubit, got dimension {}",
            ch.dim()
        )));
    }
    let mut sum = ComplexMatrix::zeros(2, 2);
    let mut pair = 0u64;
    for member in ens.members() {
        let preparation = preparation_gates(&member.state)?;
        for index in 0..ch.operator_count() {
            let circuit = operator_circuit(&ch.factors_for(index)?, &preparation)?;
            // tomography burns three seeds (one per basis); stride accordingly
            let sampling = Sampling::Shots {
                shots_per_basis,
                seed: seed + 3 * pair,
            };
            pair += 1;
            match tomography_1q_with_scale(&circuit, sampling, 1.0) {
                Ok(estimate) => {
                    sum = sum.add(&estimate.rho.matrix().scale(member.weight.into()));
                }
                // all shots post-selected away: the operator kills this
                // member, so its true contribution is zero
                Err(Error::InsufficientStatistics(_)) => {}
                Err(other) => return Err(other),
            }
        }
    }
    // the output trace cannot physically exceed the input trace; shave off
    // what shot noise added so the result stays a valid state
    let total = ens.total_weight();
    let trace = sum.trace().re;
    if trace > total {
        sum = sum.scale(Complex64::new(total / trace, 0.0));
    }
    DensityMatrix::new(sum)
}

/// Gates turning |0⟩ into the member state, preferring the one-gate
/// preparations (X for |1⟩, H for |+⟩) over a general rotation.
fn preparation_gates(state: &StateVector) -> Result<Vec<Gate>> {
    let amps = state.amplitudes();
    let a = amps[0];
    let b = amps[1];
    let one = Complex64::new(1.0, 0.0);
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    if (a - one).norm() <= STATE_MATCH_TOL && b.norm() <= STATE_MATCH_TOL {
        return Ok(vec![]);
    }
    if a.norm() <= STATE_MATCH_TOL && (b - one).norm() <= STATE_MATCH_TOL {
        return Ok(vec![Gate::x(0)]);
    }
    if (a - inv).norm() <= STATE_MATCH_TOL && (b - inv).norm() <= STATE_MATCH_TOL {
        return Ok(vec![Gate::h(0)]);
    }
    // complete the state to a unitary whose first column is the state
    let rotation = ComplexMatrix::from_rows(&[
        vec![a, -b.conj()],
        vec![b, a.conj()],
    ])?;
    Ok(vec![Gate::unitary(vec![0], rotation)])
}

/// Member preparation followed by the dilated operator circuit.
fn operator_circuit(factors: &SvdFactors, preparation: &[Gate]) -> Result<Circuit> {
    let diagonal: Vec<Complex64> = factors
        .singular_values
        .iter()
        .map(|&s| Complex64::new(s, 0.0))
        .collect();
    let (dd, _report) = build_dilated_diagonal(&diagonal, false)?;
    let core = build_svd_circuit(factors, &dd)?;
    let mut circuit = Circuit::new(core.width())?;
    for gate in preparation {
        circuit.push(gate.clone())?;
    }
    circuit.append(&core)?;
    Ok(circuit)
}
