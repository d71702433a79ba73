//! Pure-state ensembles: mixed states written as weighted sums of projectors,
//! so channel evolution can run one pure state at a time on the simulator.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{frobenius_norm, hermitian_eig, ComplexMatrix, StateVector};
use crate::simulator::DensityMatrix;

/// Eigenvalues at or below this carry no weight and are dropped.
const WEIGHT_FLOOR: f64 = 1e-12;
const RECONSTRUCTION_TOL: f64 = 1e-10;
const NORMALIZATION_TOL: f64 = 1e-12;

/// One weighted pure state of an ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub weight: f64,
    pub state: StateVector,
}

/// A convex decomposition ρ = Σ wᵢ·|ψᵢ⟩⟨ψᵢ|. The members need not be
/// orthogonal; any decomposition that reconstructs the source is accepted.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<EnsembleMember>,
}

impl Ensemble {
    /// Accepts a user-chosen decomposition after checking that it rebuilds
    /// the source state.
    pub fn validated(members: Vec<EnsembleMember>, source: &DensityMatrix) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Argument(
                "an ensemble needs at least one member".into(),
            ));
        }
        for member in &members {
            if !(member.weight.is_finite() && member.weight > 0.0) {
                return Err(Error::Argument(format!(
                    "member weights must be positive, got {}",
                    member.weight
                )));
            }
            if member.state.len() != source.dim() {
                return Err(Error::Dimension(format!(
                    "member state length {} does not match source dimension {}",
                    member.state.len(),
                    source.dim()
                )));
            }
            let norm = member.state.norm();
            if (norm - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::Argument(format!(
                    "member states must be normalized, got norm {norm}"
                )));
            }
        }
        let ensemble = Self { members };
        let residual = frobenius_norm(&ensemble.reconstruct().sub(source.matrix()));
        if residual > RECONSTRUCTION_TOL {
            return Err(Error::EnsembleValidation { residual });
        }
        Ok(ensemble)
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    /// Sum of member weights — the trace of the represented state.
    pub fn total_weight(&self) -> f64 {
        self.members.iter().map(|m| m.weight).sum()
    }

    /// Σ wᵢ·|ψᵢ⟩⟨ψᵢ| as a plain matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.members[0].state.len();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for member in &self.members {
            let amps = member.state.amplitudes();
            let weighted = ComplexMatrix::from_fn(dim, dim, |i, j| {
                amps[i] * amps[j].conj() * member.weight
            });
            sum = sum.add(&weighted);
        }
        sum
    }
}

/// Canonical decomposition along the eigenbasis: weights are the (positive)
/// eigenvalues, states the matching eigenvectors.
pub fn ensemble_decompose(rho: &DensityMatrix) -> Result<Ensemble> {
    let (values, vectors) = hermitian_eig(rho.matrix())?;
    let mut members = Vec::new();
    for (index, &value) in values.iter().enumerate() {
        if value <= WEIGHT_FLOOR {
            continue;
        }
        let column: Vec<Complex64> = vectors.col(index).to_vec();
        members.push(EnsembleMember {
            weight: value,
            state: StateVector::new(column)?,
        });
    }
    if members.is_empty() {
        return Err(Error::Domain(
            "state has no weight to decompose into an ensemble".into(),
        ));
    }
    Ok(Ensemble { members })
}
