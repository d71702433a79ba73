//! OpenQASM 2.0 emission.
//!
//! Only elementary gates are exportable; [`lower_for_export`] rewrites a
//! circuit's compound gates first — diagonal gates through Walsh synthesis,
//! opaque unitaries by recognizing the few shapes the dilation pipeline
//! actually produces (identity, Pauli-X, diagonal unitaries). Global phases
//! have no QASM 2.0 syntax and are emitted as comments so the byte stream
//! still captures the full operator.

use super::{decompose_diagonal, Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Tolerance for recognizing an opaque unitary as an exact elementary form.
const RECOGNITION_TOL: f64 = 1e-12;

/// Renders an elementary-gate circuit as a deterministic OpenQASM 2.0 program
/// with measurements on every qubit.
pub fn export_qasm(circuit: &Circuit) -> Result<String> {
    let width = circuit.width();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{width}];\n"));
    out.push_str(&format!("creg c[{width}];\n"));
    for gate in circuit.gates() {
        match gate.kind() {
            GateKind::H => out.push_str(&format!("h q[{}];\n", gate.qubits()[0])),
            GateKind::X => out.push_str(&format!("x q[{}];\n", gate.qubits()[0])),
            GateKind::Rz(angle) => out.push_str(&format!(
                "rz({}) q[{}];\n",
                format_angle(*angle),
                gate.qubits()[0]
            )),
            GateKind::Cnot => out.push_str(&format!(
                "cx q[{}], q[{}];\n",
                gate.qubits()[0],
                gate.qubits()[1]
            )),
            GateKind::GlobalPhase(angle) => {
                out.push_str(&format!("// global phase: {} rad\n", format_angle(*angle)))
            }
            GateKind::Diag(_) => {
                return Err(Error::UnsupportedGate(
                    "diagonal gate must be decomposed before QASM export".into(),
                ))
            }
            GateKind::Unitary(_) => {
                return Err(Error::UnsupportedGate(
                    "opaque unitary gate cannot be exported to QASM".into(),
                ))
            }
        }
    }
    for q in 0..width {
        out.push_str(&format!("measure q[{q}] -> c[{q}];\n"));
    }
    Ok(out)
}

/// 17 significant digits, enough to round-trip any f64.
fn format_angle(angle: f64) -> String {
    format!("{angle:.16e}")
}

/// Rewrites compound gates into the elementary set accepted by
/// [`export_qasm`]. Diagonal gates go through Walsh synthesis; opaque
/// unitaries are accepted only when they are an identity (dropped), a
/// single-qubit Pauli-X, or a diagonal unitary (synthesized like a diagonal
/// gate). Anything else is refused.
pub fn lower_for_export(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.width())?;
    for gate in circuit.gates() {
        match gate.kind() {
            GateKind::Diag(phases) => {
                push_synthesized(&mut out, phases, gate.qubits())?;
            }
            GateKind::Unitary(m) => {
                if m.identity_residual() <= RECOGNITION_TOL {
                    continue;
                }
                if gate.qubits().len() == 1 && is_pauli_x(m) {
                    out.push(Gate::x(gate.qubits()[0]))?;
                    continue;
                }
                if let Some(phases) = diagonal_phases(m) {
                    push_synthesized(&mut out, &phases, gate.qubits())?;
                    continue;
                }
                return Err(Error::UnsupportedGate(format!(
                    "cannot lower a dense {}-qubit unitary for export",
                    gate.qubits().len()
                )));
            }
            _ => out.push(gate.clone())?,
        }
    }
    Ok(out)
}

fn push_synthesized(out: &mut Circuit, phases: &[f64], span: &[usize]) -> Result<()> {
    for gate in decompose_diagonal(phases)? {
        out.push(remap(gate, span))?;
    }
    Ok(())
}

/// Rewrites a gate over local span indices onto the physical qubits.
fn remap(gate: Gate, span: &[usize]) -> Gate {
    match gate.kind() {
        GateKind::Rz(angle) => Gate::rz(span[gate.qubits()[0]], *angle),
        GateKind::Cnot => Gate::cnot(span[gate.qubits()[0]], span[gate.qubits()[1]]),
        GateKind::GlobalPhase(_) => gate,
        _ => unreachable!("diagonal synthesis only emits Rz/CNOT/global phase"),
    }
}

fn is_pauli_x(m: &ComplexMatrix) -> bool {
    let x = ComplexMatrix::from_fn(2, 2, |i, j| {
        num_complex::Complex64::new(if i != j { 1.0 } else { 0.0 }, 0.0)
    });
    crate::numerics::frobenius_norm(&m.sub(&x)) <= RECOGNITION_TOL
}

/// Extracts phase angles when the matrix is a diagonal unitary.
fn diagonal_phases(m: &ComplexMatrix) -> Option<Vec<f64>> {
    let n = m.rows();
    let mut phases = Vec::with_capacity(n);
    for j in 0..n {
        for i in 0..n {
            let entry = m.get(i, j);
            if i == j {
                if (entry.norm() - 1.0).abs() > 1e-10 {
                    return None;
                }
            } else if entry.norm() > RECOGNITION_TOL {
                return None;
            }
        }
        phases.push(m.get(j, j).arg());
    }
    Some(phases)
}
