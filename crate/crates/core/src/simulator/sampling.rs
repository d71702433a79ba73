//! Seeded measurement sampling.
//!
//! A shot run draws computational-basis outcomes from a statevector with a
//! ChaCha8 stream, so identical (state, shots, seed, basis) inputs always
//! reproduce the same counts — a hard requirement for replayable experiments.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::numerics::StateVector;

/// How an estimator consumes a circuit: exact amplitudes, or a finite number
/// of seeded measurement shots per basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Exact,
    Shots { shots_per_basis: u64, seed: u64 },
}

/// Counts from one seeded measurement run. Keys are bitstrings with qubit 0
/// rightmost (so the ancilla, the highest qubit, is the leftmost character);
/// absent keys mean zero counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShotRun {
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, u64>,
}

impl ShotRun {
    /// Serializes to a stable JSON object (BTreeMap keeps key order fixed).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("shot counts always serialize")
    }
}

fn bitstring(index: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Applies the basis-change gates, then samples `shots` computational-basis
/// outcomes by inverse-CDF lookup on the outcome distribution.
pub fn sample_measurements(
    state: &StateVector,
    shots: u64,
    seed: u64,
    basis_changes: &[Gate],
) -> Result<ShotRun> {
    if shots == 0 {
        return Err(Error::Argument("shot count must be positive".into()));
    }
    let width = state.qubit_count();
    let mut rotated = state.clone();
    for gate in basis_changes {
        gate.validate(width)?;
        gate.apply(rotated.amplitudes_mut());
    }

    let weights: Vec<f64> = rotated.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = weights.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..shots {
        let draw: f64 = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut outcome = weights.len() - 1;
        for (index, &w) in weights.iter().enumerate() {
            acc += w;
            if draw < acc {
                outcome = index;
                break;
            }
        }
        *counts.entry(bitstring(outcome, width)).or_insert(0) += 1;
    }
    Ok(ShotRun { shots, seed, counts })
}
