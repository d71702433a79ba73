//! Exact and truncated synthesis of diagonal unitaries into Rz/CNOT gates.
//!
//! The phase vector θ over d qubits is expanded in the Walsh–Hadamard basis:
//! θ_b = Σ_w c_w (−1)^{popcount(w AND b)}. Each nonzero coefficient with
//! w ≠ 0 becomes one Rz(−2c_w) acting on the parity of the qubits in w,
//! reached by folding that parity onto the lowest set bit of w with CNOTs.
//! Walking the coefficients of each parity target in Gray-code order makes
//! consecutive parities differ by a single CNOT, which is what pins the
//! worst-case gate count at 2^{d+1} − 3. The w = 0 coefficient is a global
//! phase.

use super::Gate;
use crate::error::{Error, Result};

/// Gate list plus the truncation bookkeeping of one synthesis run.
#[derive(Debug, Clone)]
pub struct DiagonalSynthesis {
    pub gates: Vec<Gate>,
    /// Sum of |c_w| over dropped coefficients; bounds the max phase error.
    pub error_bound: f64,
    /// How many nonzero coefficients the threshold removed.
    pub dropped: usize,
}

impl DiagonalSynthesis {
    /// Gates excluding the bookkeeping global phase, i.e. what counts against
    /// the 2^{d+1} − 3 bound.
    pub fn elementary_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| !matches!(g.kind(), super::GateKind::GlobalPhase(_)))
            .count()
    }
}

/// Exact synthesis: the reconstructed operator equals diag(e^{iθ}) including
/// global phase. Zero coefficients are skipped, so an all-zero phase vector
/// produces no gates at all.
pub fn decompose_diagonal(phases: &[f64]) -> Result<Vec<Gate>> {
    Ok(decompose_diagonal_approx(phases, 0.0)?.gates)
}

/// Walsh-truncated synthesis: coefficients with |c_w| < epsilon are dropped
/// and their magnitudes accumulated into the reported error bound. epsilon = 0
/// reproduces the exact synthesis.
pub fn decompose_diagonal_approx(phases: &[f64], epsilon: f64) -> Result<DiagonalSynthesis> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::Argument(format!(
            "epsilon must be a finite non-negative number, got {epsilon}"
        )));
    }
    let len = phases.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Dimension(format!(
            "phase vector length must be a power of two ≥ 2, got {len}"
        )));
    }
    if phases.iter().any(|p| !p.is_finite()) {
        return Err(Error::Argument("phases must be finite".into()));
    }
    let d = len.trailing_zeros() as usize;
    let coefficients = walsh_coefficients(phases);

    let mut gates = Vec::new();
    let mut error_bound = 0.0;
    let mut dropped = 0usize;

    // Coefficients grouped by their lowest set bit j (the Rz target qubit),
    // visited in Gray order of the remaining high bits.
    for j in 0..d {
        let high_count = 1usize << (d - 1 - j);
        let mut parity_state = 0usize;
        for rank in 0..high_count {
            let high = rank ^ (rank >> 1);
            let w = (high << (j + 1)) | (1 << j);
            let coefficient = coefficients[w];
            if coefficient == 0.0 {
                continue;
            }
            if coefficient.abs() < epsilon {
                error_bound += coefficient.abs();
                dropped += 1;
                continue;
            }
            let mut delta = parity_state ^ high;
            while delta != 0 {
                let bit = delta.trailing_zeros() as usize;
                gates.push(Gate::cnot(j + 1 + bit, j));
                delta &= delta - 1;
            }
            parity_state = high;
            gates.push(Gate::rz(j, -2.0 * coefficient));
        }
        let mut delta = parity_state;
        while delta != 0 {
            let bit = delta.trailing_zeros() as usize;
            gates.push(Gate::cnot(j + 1 + bit, j));
            delta &= delta - 1;
        }
    }

    if coefficients[0] != 0.0 {
        gates.push(Gate::global_phase(coefficients[0]));
    }

    Ok(DiagonalSynthesis {
        gates,
        error_bound,
        dropped,
    })
}

/// c_w = (1/2^d) Σ_b θ_b (−1)^{popcount(w AND b)} via the fast transform.
fn walsh_coefficients(phases: &[f64]) -> Vec<f64> {
    let len = phases.len();
    let mut a = phases.to_vec();
    let mut h = 1;
    while h < len {
        let mut base = 0;
        while base < len {
            for i in base..base + h {
                let (x, y) = (a[i], a[i + h]);
                a[i] = x + y;
                a[i + h] = x - y;
            }
            base += 2 * h;
        }
        h *= 2;
    }
    let scale = 1.0 / len as f64;
    for v in a.iter_mut() {
        *v *= scale;
    }
    a
}
