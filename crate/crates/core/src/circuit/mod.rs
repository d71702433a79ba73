//! Gate-level intermediate representation for dilation circuits.
//!
//! A [`Circuit`] is an ordered gate list over `k` system qubits plus one
//! ancilla, which is always the highest index / most significant basis bit —
//! that way the Σ₊ ⊕ Σ₋ block structure of the dilated diagonal shows up
//! literally as the ancilla-0 / ancilla-1 halves of the state vector.
//!
//! Gates know how to apply themselves to raw amplitude slices; the simulator
//! module layers validation, sampling and tomography on top.

mod qasm;
mod walsh;

pub use qasm::{export_qasm, lower_for_export};
pub use walsh::{decompose_diagonal, decompose_diagonal_approx, DiagonalSynthesis};

use num_complex::Complex64;

use crate::dilation::DilatedDiagonal;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, SvdFactors};

/// Hard cap on circuit width (qubits); the simulator allocates 2^width amplitudes.
pub const MAX_WIDTH: usize = 24;
/// Width cap for dense matrix reconstruction of a whole circuit.
pub const MAX_MATRIX_WIDTH: usize = 10;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Gate flavors. `Diag` and `Unitary` are "opaque" compound gates that the
/// simulator applies directly and the QASM exporter refuses until lowered.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    /// diag(e^{−iλ/2}, e^{+iλ/2})
    Rz(f64),
    /// qubits = [control, target]
    Cnot,
    /// diag(e^{iθ_b}) over the gate's qubit span; θ indexed with qubit[j] as bit j
    Diag(Vec<f64>),
    /// dense unitary over the gate's qubit span, same bit convention
    Unitary(ComplexMatrix),
    /// e^{iα} on the whole state
    GlobalPhase(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn h(qubit: usize) -> Self {
        Self {
            kind: GateKind::H,
            qubits: vec![qubit],
        }
    }

    pub fn x(qubit: usize) -> Self {
        Self {
            kind: GateKind::X,
            qubits: vec![qubit],
        }
    }

    pub fn rz(qubit: usize, angle: f64) -> Self {
        Self {
            kind: GateKind::Rz(angle),
            qubits: vec![qubit],
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cnot,
            qubits: vec![control, target],
        }
    }

    pub fn diag(qubits: Vec<usize>, phases: Vec<f64>) -> Self {
        Self {
            kind: GateKind::Diag(phases),
            qubits,
        }
    }

    pub fn unitary(qubits: Vec<usize>, matrix: ComplexMatrix) -> Self {
        Self {
            kind: GateKind::Unitary(matrix),
            qubits,
        }
    }

    pub fn global_phase(angle: f64) -> Self {
        Self {
            kind: GateKind::GlobalPhase(angle),
            qubits: Vec::new(),
        }
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub(crate) fn validate(&self, width: usize) -> Result<()> {
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= width {
                return Err(Error::Dimension(format!(
                    "gate qubit {q} outside circuit width {width}"
                )));
            }
            if self.qubits[..i].contains(&q) {
                return Err(Error::Argument(format!("gate qubit {q} repeated")));
            }
        }
        let arity_ok = match &self.kind {
            GateKind::H | GateKind::X | GateKind::Rz(_) => self.qubits.len() == 1,
            GateKind::Cnot => self.qubits.len() == 2,
            GateKind::Diag(_) | GateKind::Unitary(_) => !self.qubits.is_empty(),
            GateKind::GlobalPhase(_) => self.qubits.is_empty(),
        };
        if !arity_ok {
            return Err(Error::Argument(format!(
                "gate arity mismatch: {} qubits for {:?}",
                self.qubits.len(),
                std::mem::discriminant(&self.kind)
            )));
        }
        match &self.kind {
            GateKind::Rz(a) | GateKind::GlobalPhase(a) => {
                if !a.is_finite() {
                    return Err(Error::Argument("gate angle must be finite".into()));
                }
            }
            GateKind::Diag(phases) => {
                if phases.len() != 1 << self.qubits.len() {
                    return Err(Error::Dimension(format!(
                        "diagonal gate needs {} phases for {} qubits, got {}",
                        1usize << self.qubits.len(),
                        self.qubits.len(),
                        phases.len()
                    )));
                }
                if phases.iter().any(|p| !p.is_finite()) {
                    return Err(Error::Argument("diagonal phases must be finite".into()));
                }
            }
            GateKind::Unitary(m) => {
                let dim = 1usize << self.qubits.len();
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::Dimension(format!(
                        "unitary gate over {} qubits needs a {dim}x{dim} matrix, got {}x{}",
                        self.qubits.len(),
                        m.rows(),
                        m.cols()
                    )));
                }
                let residual = m.unitary_residual();
                if residual > 1e-10 {
                    return Err(Error::Argument(format!(
                        "matrix gate is not unitary (residual {residual:.3e})"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Applies the gate to a full-register amplitude slice (length 2^width).
    pub(crate) fn apply(&self, amps: &mut [Complex64]) {
        match &self.kind {
            GateKind::H => {
                let s = 1usize << self.qubits[0];
                for_each_pair(amps.len(), s, |i, j| {
                    let (a, b) = (amps[i], amps[j]);
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[j] = (a - b) * FRAC_1_SQRT_2;
                });
            }
            GateKind::X => {
                let s = 1usize << self.qubits[0];
                for_each_pair(amps.len(), s, |i, j| amps.swap(i, j));
            }
            GateKind::Rz(angle) => {
                let s = 1usize << self.qubits[0];
                let lower = Complex64::from_polar(1.0, -angle / 2.0);
                let upper = Complex64::from_polar(1.0, angle / 2.0);
                for_each_pair(amps.len(), s, |i, j| {
                    amps[i] *= lower;
                    amps[j] *= upper;
                });
            }
            GateKind::Cnot => {
                let control = 1usize << self.qubits[0];
                let target = 1usize << self.qubits[1];
                for i in 0..amps.len() {
                    if i & control != 0 && i & target == 0 {
                        amps.swap(i, i | target);
                    }
                }
            }
            GateKind::Diag(phases) => {
                let factors: Vec<Complex64> = phases
                    .iter()
                    .map(|&p| Complex64::from_polar(1.0, p))
                    .collect();
                for (i, amp) in amps.iter_mut().enumerate() {
                    let mut local = 0usize;
                    for (bit, &q) in self.qubits.iter().enumerate() {
                        local |= ((i >> q) & 1) << bit;
                    }
                    *amp *= factors[local];
                }
            }
            GateKind::Unitary(m) => {
                let span = self.qubits.len();
                let dim = 1usize << span;
                let mask: usize = self.qubits.iter().map(|&q| 1usize << q).sum();
                let mut local = vec![Complex64::new(0.0, 0.0); dim];
                for rest in 0..amps.len() {
                    if rest & mask != 0 {
                        continue;
                    }
                    for (l, slot) in local.iter_mut().enumerate() {
                        *slot = amps[rest | self.scatter(l)];
                    }
                    let transformed = m.matvec(&local);
                    for (l, value) in transformed.into_iter().enumerate() {
                        amps[rest | self.scatter(l)] = value;
                    }
                }
            }
            GateKind::GlobalPhase(angle) => {
                let factor = Complex64::from_polar(1.0, *angle);
                for amp in amps.iter_mut() {
                    *amp *= factor;
                }
            }
        }
    }

    /// Spreads a local span index onto the gate's physical qubit bits.
    fn scatter(&self, local: usize) -> usize {
        let mut out = 0usize;
        for (bit, &q) in self.qubits.iter().enumerate() {
            out |= ((local >> bit) & 1) << q;
        }
        out
    }
}

fn for_each_pair(len: usize, stride: usize, mut f: impl FnMut(usize, usize)) {
    let mut base = 0;
    while base < len {
        for offset in base..base + stride {
            f(offset, offset | stride);
        }
        base += 2 * stride;
    }
}

/// Ordered gate list over `width` qubits; the ancilla is qubit `width − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::Dimension(format!(
                "circuit width must be in 1..={MAX_WIDTH}, got {width}"
            )));
        }
        Ok(Self {
            width,
            gates: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The ancilla qubit index (always the most significant bit).
    pub fn ancilla_index(&self) -> usize {
        self.width - 1
    }

    pub fn system_qubits(&self) -> usize {
        self.width - 1
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of another circuit of the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::Dimension(format!(
                "cannot append width-{} circuit to width-{}",
                other.width, self.width
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }
}

/// The dilated operator circuit: V† on the system, Hadamard on the ancilla,
/// the dilated diagonal across everything, U on the system, Hadamard on the
/// ancilla. Post-selecting the ancilla on 0 applies U·Σ·V† = M (after any
/// rescale recorded in `dd`).
pub fn build_svd_circuit(factors: &SvdFactors, dd: &DilatedDiagonal) -> Result<Circuit> {
    let r = factors.dim();
    if dd.len() != r.next_power_of_two() || dd.len() < r {
        return Err(Error::Dimension(format!(
            "dilated diagonal length {} does not match factor dimension {r}",
            dd.len()
        )));
    }
    let k = dd.system_qubits();
    let mut circuit = Circuit::new(k + 1)?;
    let system: Vec<usize> = (0..k).collect();
    let all: Vec<usize> = (0..=k).collect();

    push_factor(&mut circuit, &factors.v_dagger, &system, dd.len())?;
    circuit.push(Gate::h(k))?;
    circuit.push(Gate::diag(all, dd.dilated_phases()))?;
    push_factor(&mut circuit, &factors.u, &system, dd.len())?;
    circuit.push(Gate::h(k))?;
    Ok(circuit)
}

/// A 1×1 unitary factor is a bare phase; anything larger becomes an opaque
/// matrix gate padded up to the diagonal's power-of-two dimension.
fn push_factor(
    circuit: &mut Circuit,
    factor: &ComplexMatrix,
    system: &[usize],
    padded_dim: usize,
) -> Result<()> {
    if system.is_empty() {
        circuit.push(Gate::global_phase(factor.get(0, 0).arg()))
    } else {
        circuit.push(Gate::unitary(
            system.to_vec(),
            factor.pad_identity(padded_dim),
        ))
    }
}

/// The probabilistic state-preparation circuit: Hadamards everywhere, the
/// dilated diagonal of the target amplitudes, a closing Hadamard on the
/// ancilla. Post-selecting ancilla 0 leaves target/2^{k/2} on the system.
pub fn build_stateprep_circuit(target: &[Complex64], k: usize) -> Result<Circuit> {
    if target.is_empty() {
        return Err(Error::Dimension("target state must be non-empty".into()));
    }
    let dim = 1usize
        .checked_shl(k as u32)
        .filter(|_| k < MAX_WIDTH)
        .ok_or_else(|| Error::Dimension(format!("system qubit count {k} too large")))?;
    if target.len() > dim {
        return Err(Error::Dimension(format!(
            "target length {} exceeds 2^{k} = {dim}",
            target.len()
        )));
    }
    // Pad with zeros: unused basis states must stay unpopulated, unlike the
    // identity padding used for operator diagonals.
    let mut amplitudes = target.to_vec();
    amplitudes.resize(dim, Complex64::new(0.0, 0.0));
    let (dd, _) = crate::dilation::build_dilated_diagonal(&amplitudes, false)?;

    let mut circuit = Circuit::new(k + 1)?;
    for q in 0..=k {
        circuit.push(Gate::h(q))?;
    }
    circuit.push(Gate::diag((0..=k).collect(), dd.dilated_phases()))?;
    circuit.push(Gate::h(k))?;
    Ok(circuit)
}

/// Dense matrix of the whole circuit, for testing and cross-checks.
pub fn circuit_matrix(circuit: &Circuit) -> Result<ComplexMatrix> {
    if circuit.width() > MAX_MATRIX_WIDTH {
        return Err(Error::Dimension(format!(
            "matrix reconstruction capped at width {MAX_MATRIX_WIDTH}, got {}",
            circuit.width()
        )));
    }
    let dim = 1usize << circuit.width();
    let mut out = ComplexMatrix::zeros(dim, dim);
    let mut column = vec![Complex64::new(0.0, 0.0); dim];
    for b in 0..dim {
        column.fill(Complex64::new(0.0, 0.0));
        column[b] = Complex64::new(1.0, 0.0);
        for gate in circuit.gates() {
            gate.apply(&mut column);
        }
        for (i, &amp) in column.iter().enumerate() {
            out.set(i, b, amp);
        }
    }
    Ok(out)
}
