//! Operator decomposition inspector: reads a matrix (or bare diagonal) from
//! a text file, lifts it onto one ancilla qubit, and reports the singular
//! values, the contraction check, and the elementary gate cost of the dilated
//! diagonal — optionally emitting OpenQASM.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use dilatia_core::circuit::{
    build_svd_circuit, decompose_diagonal_approx, export_qasm, lower_for_export, Circuit, Gate,
};
use dilatia_core::dilation::{build_dilated_diagonal, ContractionReport, DilatedDiagonal};
use dilatia_core::numerics::{parse_matrix, svd};

use crate::report::format_value;
use crate::{CliError, CliResult};

/// What the decompose subcommand was asked to do.
#[derive(Debug, Clone)]
pub struct DecomposeOptions {
    pub input: PathBuf,
    /// Walsh truncation threshold; `None` reports exact synthesis only.
    pub epsilon: Option<f64>,
    pub write_qasm: bool,
    /// Divide an over-unity operator by its largest singular value instead
    /// of refusing it.
    pub auto_rescale: bool,
    pub output_dir: PathBuf,
}

/// Cost of one synthesis run of the dilated diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisCost {
    pub gates: usize,
    pub dropped: usize,
    pub error_bound: f64,
}

/// Everything the inspector found, kept numeric so tests need not scrape
/// the rendered summary.
#[derive(Debug, Clone)]
pub struct DecomposeOutcome {
    pub singular_values: Vec<f64>,
    pub contraction: ContractionReport,
    pub system_qubits: usize,
    pub exact: SynthesisCost,
    pub approx: Option<SynthesisCost>,
    /// Worst-case elementary count for a diagonal of this width.
    pub gate_bound: usize,
    pub qasm_path: Option<PathBuf>,
    summary: String,
}

impl DecomposeOutcome {
    /// Human-readable report, one finding per line.
    pub fn summary(&self) -> &str {
        &self.summary
    }
}

pub fn run_decompose(opts: &DecomposeOptions) -> CliResult<DecomposeOutcome> {
    let text = fs::read_to_string(&opts.input)?;
    let matrix = parse_matrix(&text)?;

    let mut lines = Vec::new();
    let (factors_circuit, dd, contraction, singular_values);
    if matrix.rows() == 1 {
        let entries: Vec<Complex64> = (0..matrix.cols()).map(|j| matrix.get(0, j)).collect();
        lines.push(format!(
            "input: diagonal with {} entries ({})",
            entries.len(),
            opts.input.display()
        ));
        singular_values = {
            let mut moduli: Vec<f64> = entries.iter().map(|c| c.norm()).collect();
            moduli.sort_by(|a, b| b.total_cmp(a));
            moduli
        };
        let (built, report) = build_dilated_diagonal(&entries, opts.auto_rescale)?;
        factors_circuit = diagonal_circuit(&built)?;
        dd = built;
        contraction = report;
    } else if matrix.is_square() {
        lines.push(format!(
            "input: {0}x{0} matrix ({1})",
            matrix.rows(),
            opts.input.display()
        ));
        let factors = svd(&matrix)?;
        singular_values = factors.singular_values.clone();
        let sigma: Vec<Complex64> = factors
            .singular_values
            .iter()
            .map(|&s| Complex64::new(s, 0.0))
            .collect();
        let (built, report) = build_dilated_diagonal(&sigma, opts.auto_rescale)?;
        factors_circuit = build_svd_circuit(&factors, &built)?;
        dd = built;
        contraction = report;
    } else {
        return Err(CliError::Config(format!(
            "input must be a single diagonal row or a square matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }

    let rendered: Vec<String> = singular_values.iter().map(|&s| format_value(s)).collect();
    lines.push(format!("singular values: {}", rendered.join(" ")));
    lines.push(format!(
        "max singular value: {}",
        format_value(contraction.max_singular_value)
    ));
    lines.push(if contraction.was_rescaled {
        format!(
            "rescaled: yes (divided by {}, effective norm bound {})",
            format_value(contraction.max_singular_value),
            format_value(contraction.shifted_operator_norm_bound)
        )
    } else {
        "rescaled: no (already a contraction)".to_string()
    });

    let system_qubits = dd.system_qubits();
    lines.push(format!(
        "circuit width: {} system qubit(s) + 1 ancilla",
        system_qubits
    ));

    // The dilated diagonal spans system_qubits + 1 wires; exact Walsh
    // synthesis of any diagonal over w wires needs at most 2^{w+1} - 3 gates.
    let gate_bound = (1usize << (system_qubits + 2)) - 3;
    let exact = synthesize(&dd, 0.0)?;
    lines.push(format!(
        "dilated diagonal gates (exact): {} of at most {}",
        exact.gates, gate_bound
    ));
    let approx = match opts.epsilon {
        Some(epsilon) => {
            let cost = synthesize(&dd, epsilon)?;
            lines.push(format!(
                "dilated diagonal gates (epsilon = {}): {}, dropped {} coefficient(s), \
                 phase error bound {}",
                epsilon,
                cost.gates,
                cost.dropped,
                format_value(cost.error_bound)
            ));
            Some(cost)
        }
        None => None,
    };

    let qasm_path = if opts.write_qasm {
        let path = qasm_target(opts);
        let lowered = lower_for_export(&factors_circuit)?;
        let qasm = export_qasm(&lowered)?;
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        fs::write(&path, qasm)?;
        lines.push(format!("qasm: written to {}", path.display()));
        Some(path)
    } else {
        None
    };

    Ok(DecomposeOutcome {
        singular_values,
        contraction,
        system_qubits,
        exact,
        approx,
        gate_bound,
        qasm_path,
        summary: lines.join("\n"),
    })
}

/// The circuit applying a diagonal operator: Hadamards around the dilated
/// diagonal on the ancilla, nothing on the system (U = V† = I).
fn diagonal_circuit(dd: &DilatedDiagonal) -> CliResult<Circuit> {
    let ancilla = dd.system_qubits();
    let mut circuit = Circuit::new(ancilla + 1)?;
    circuit.push(Gate::h(ancilla))?;
    circuit.push(Gate::diag((0..=ancilla).collect(), dd.dilated_phases()))?;
    circuit.push(Gate::h(ancilla))?;
    Ok(circuit)
}

fn synthesize(dd: &DilatedDiagonal, epsilon: f64) -> CliResult<SynthesisCost> {
    let synthesis = decompose_diagonal_approx(&dd.dilated_phases(), epsilon)?;
    Ok(SynthesisCost {
        gates: synthesis.elementary_count(),
        dropped: synthesis.dropped,
        error_bound: synthesis.error_bound,
    })
}

fn qasm_target(opts: &DecomposeOptions) -> PathBuf {
    let stem = opts
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "operator".to_string());
    opts.output_dir.join(format!("{stem}.qasm"))
}

/// Convenience for tests and docs: writes `content` to `dir/name` and
/// returns options pointing at it.
pub fn options_for(dir: &Path, name: &str, content: &str) -> CliResult<DecomposeOptions> {
    fs::create_dir_all(dir)?;
    let input = dir.join(name);
    fs::write(&input, content)?;
    Ok(DecomposeOptions {
        input,
        epsilon: None,
        write_qasm: false,
        auto_rescale: false,
        output_dir: dir.to_path_buf(),
    })
}
