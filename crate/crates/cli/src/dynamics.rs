//! Open-system dynamics runs: a pure dephasing sweep started from |+⟩ and an
//! amplitude-damping sweep started from a mixed state, each emitting one CSV
//! row per time point with simulated and analytic values side by side, plus
//! static SVG figures.

use num_complex::Complex64;

use dilatia_core::channels::{
    amplitude_damping_channel, dephasing_channel, evolve_on_simulator, Ensemble, EnsembleMember,
    KrausChannel,
};
use dilatia_core::numerics::{ComplexMatrix, StateVector};
use dilatia_core::simulator::{DensityMatrix, Sampling};

use crate::config::{ExperimentConfig, Mode};
use crate::report::RunReport;
use crate::svg::{LinePlot, Series};
use crate::CliResult;

const COLUMNS: [&str; 12] = [
    "t",
    "rho00",
    "rho11",
    "re01",
    "im01",
    "re01_exact",
    "im01_exact",
    "rho00_exact",
    "rho11_exact",
    "bloch_x",
    "bloch_y",
    "bloch_z",
];

/// Closed-form density matrix entries (ρ₀₀, ρ₁₁, Re ρ₀₁, Im ρ₀₁) at time t.
type AnalyticEntries = (f64, f64, f64, f64);

/// Sweeps the time grid, evolving `ensemble` through `channel_at(t)` and
/// pairing every simulated entry with its analytic reference.
fn sweep(
    cfg: &ExperimentConfig,
    ensemble: &Ensemble,
    channel_at: impl Fn(f64) -> dilatia_core::Result<KrausChannel>,
    analytic_at: impl Fn(f64) -> AnalyticEntries,
) -> CliResult<RunReport> {
    let mut rows = Vec::new();
    // Tomography consumes three seeds per (member, operator) pair; advance
    // the cursor past everything a time point used so streams never overlap.
    let mut seed_cursor = cfg.seed + 1;
    for &t in &cfg.time_grid() {
        let channel = channel_at(t)?;
        let sampling = match cfg.mode {
            Mode::Exact => Sampling::Exact,
            Mode::Shots => Sampling::Shots {
                shots_per_basis: cfg.shots[0],
                seed: seed_cursor,
            },
        };
        seed_cursor += 3 * (ensemble.members().len() * channel.operator_count()) as u64;
        let rho = evolve_on_simulator(&channel, ensemble, sampling)?;
        let m = rho.matrix();
        let (rho00, rho11) = (m.get(0, 0).re, m.get(1, 1).re);
        let (re01, im01) = (m.get(0, 1).re, m.get(0, 1).im);
        let (rho00_e, rho11_e, re01_e, im01_e) = analytic_at(t);
        rows.push(vec![
            t,
            rho00,
            rho11,
            re01,
            im01,
            re01_e,
            im01_e,
            rho00_e,
            rho11_e,
            2.0 * re01,
            -2.0 * im01,
            rho00 - rho11,
        ]);
    }
    Ok(RunReport {
        columns: COLUMNS.to_vec(),
        rows,
        echo: cfg.echo(),
        integer_columns: vec![],
    })
}

/// Pure dephasing of |+⟩ = (|0⟩+|1⟩)/√2: populations stay put while the
/// coherence rotates and shrinks as ρ₀₁(t) = (λ₀e^{2iθt} + λ₁e^{−2iθt})/2.
/// Writes `dephasing.csv`, `fig3_coherence.svg`, and `fig4_bloch.svg`.
pub fn run_dephasing(cfg: &ExperimentConfig) -> CliResult<RunReport> {
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [Complex64::new(amp, 0.0), Complex64::new(amp, 0.0)];
    let source = DensityMatrix::from_pure(&plus)?;
    let ensemble = Ensemble::validated(
        vec![EnsembleMember {
            weight: 1.0,
            state: StateVector::new(plus.to_vec())?,
        }],
        &source,
    )?;

    let (theta, l0, l1) = (cfg.theta, cfg.lambda0, cfg.lambda1);
    let report = sweep(
        cfg,
        &ensemble,
        |t| dephasing_channel(theta, l0, l1, t),
        |t| {
            let phase = Complex64::new(0.0, 2.0 * theta * t).exp();
            let rho01 = 0.5 * (l0 * phase + l1 * phase.conj());
            (0.5, 0.5, rho01.re, rho01.im)
        },
    )?;

    report.write_csv(&cfg.output_dir.join("dephasing.csv"))?;
    coherence_figure(&report).write(&cfg.output_dir.join("fig3_coherence.svg"))?;
    bloch_figure(&report).write(&cfg.output_dir.join("fig4_bloch.svg"))?;
    Ok(report)
}

/// Zero-temperature amplitude damping of the mixed state ¼[[1,1],[1,3]],
/// realized as the ensemble ½|1⟩⟨1| + ½|+⟩⟨+|. The excited population decays
/// as ¾e^{−γt} and the coherence as ¼e^{−γt/2}. Writes `damping.csv` and
/// `fig5_damping.svg`.
pub fn run_damping(cfg: &ExperimentConfig) -> CliResult<RunReport> {
    let source = DensityMatrix::new(initial_damping_state())?;
    let ensemble = Ensemble::validated(damping_members()?, &source)?;

    let gamma = cfg.gamma;
    let report = sweep(
        cfg,
        &ensemble,
        |t| amplitude_damping_channel(gamma, t),
        |t| {
            let rho11 = 0.75 * (-gamma * t).exp();
            let re01 = 0.25 * (-gamma * t / 2.0).exp();
            (1.0 - rho11, rho11, re01, 0.0)
        },
    )?;

    report.write_csv(&cfg.output_dir.join("damping.csv"))?;
    damping_figure(&report).write(&cfg.output_dir.join("fig5_damping.svg"))?;
    Ok(report)
}

/// The mixed initial state ¼[[1,1],[1,3]] of the damping run.
pub fn initial_damping_state() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| {
        let value = if i == 1 && j == 1 { 0.75 } else { 0.25 };
        Complex64::new(value, 0.0)
    })
}

/// Equal-weight decomposition of that state into |1⟩ and |+⟩.
fn damping_members() -> dilatia_core::Result<Vec<EnsembleMember>> {
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    Ok(vec![
        EnsembleMember {
            weight: 0.5,
            state: StateVector::new(vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ])?,
        },
        EnsembleMember {
            weight: 0.5,
            state: StateVector::new(vec![
                Complex64::new(amp, 0.0),
                Complex64::new(amp, 0.0),
            ])?,
        },
    ])
}

fn paired(report: &RunReport, x: &str, y: &str) -> Vec<(f64, f64)> {
    let xs = report.column(x).expect("known column");
    let ys = report.column(y).expect("known column");
    xs.into_iter().zip(ys).collect()
}

fn coherence_figure(report: &RunReport) -> LinePlot {
    LinePlot {
        title: "Dephasing coherence".to_string(),
        x_label: "t".to_string(),
        y_label: "rho01".to_string(),
        series: vec![
            Series::line("Re rho01", paired(report, "t", "re01")),
            Series::line("Im rho01", paired(report, "t", "im01")),
            Series::reference("Re rho01 (analytic)", paired(report, "t", "re01_exact")),
            Series::reference("Im rho01 (analytic)", paired(report, "t", "im01_exact")),
        ],
    }
}

fn bloch_figure(report: &RunReport) -> LinePlot {
    let analytic: Vec<(f64, f64)> = report
        .column("re01_exact")
        .expect("known column")
        .into_iter()
        .zip(report.column("im01_exact").expect("known column"))
        .map(|(re, im)| (2.0 * re, -2.0 * im))
        .collect();
    LinePlot {
        title: "Bloch trajectory (z = 0 plane)".to_string(),
        x_label: "x".to_string(),
        y_label: "y".to_string(),
        series: vec![
            Series::line("simulated", paired(report, "bloch_x", "bloch_y")),
            Series::reference("analytic", analytic),
        ],
    }
}

fn damping_figure(report: &RunReport) -> LinePlot {
    LinePlot {
        title: "Amplitude damping dynamics".to_string(),
        x_label: "t".to_string(),
        y_label: "matrix entry".to_string(),
        series: vec![
            Series::line("rho00", paired(report, "t", "rho00")),
            Series::line("rho11", paired(report, "t", "rho11")),
            Series::line("Re rho01", paired(report, "t", "re01")),
            Series::reference("rho00 (analytic)", paired(report, "t", "rho00_exact")),
            Series::reference("rho11 (analytic)", paired(report, "t", "rho11_exact")),
            Series::reference("Re rho01 (analytic)", paired(report, "t", "re01_exact")),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    fn temp_dir(tag: &str) -> std::path::PathBuf {
        std::env::temp_dir().join(format!("dilatia-dyn-{tag}-{}", std::process::id()))
    }

    #[test]
    fn exact_dephasing_matches_the_analytic_columns() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Dephasing);
        cfg.output_dir = temp_dir("dephasing");
        let report = run_dephasing(&cfg).unwrap();
        assert_eq!(report.rows.len(), 25);
        for row in &report.rows {
            assert!((row[3] - row[5]).abs() <= 1e-10, "re01 at t={}", row[0]);
            assert!((row[4] - row[6]).abs() <= 1e-10, "im01 at t={}", row[0]);
            assert!(row[11].abs() <= 1e-10, "bloch z at t={}", row[0]);
            assert!((row[1] - 0.5).abs() <= 1e-10);
        }
        assert!((report.rows[0][3] - 0.5).abs() <= 1e-12);
        for name in ["dephasing.csv", "fig3_coherence.svg", "fig4_bloch.svg"] {
            assert!(cfg.output_dir.join(name).exists(), "{name} missing");
        }
    }

    #[test]
    fn exact_damping_matches_the_analytic_columns_and_keeps_trace() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Damping);
        cfg.mode = Mode::Exact;
        cfg.t_end = 10.0;
        cfg.output_dir = temp_dir("damping");
        let report = run_damping(&cfg).unwrap();
        assert_eq!(report.rows.len(), 11);
        for row in &report.rows {
            assert!((row[1] + row[2] - 1.0).abs() <= 1e-10, "trace at t={}", row[0]);
            assert!((row[2] - row[8]).abs() <= 1e-9, "rho11 at t={}", row[0]);
            assert!((row[3] - row[5]).abs() <= 1e-9, "re01 at t={}", row[0]);
            assert!(row[4].abs() <= 1e-9, "im01 at t={}", row[0]);
        }
        let first = &report.rows[0];
        assert!((first[1] - 0.25).abs() <= 1e-10);
        assert!((first[2] - 0.75).abs() <= 1e-10);
        assert!((first[3] - 0.25).abs() <= 1e-10);
        assert!(cfg.output_dir.join("fig5_damping.svg").exists());
    }

    #[test]
    fn initial_mixed_state_decomposition_is_exact() {
        let source = DensityMatrix::new(initial_damping_state()).unwrap();
        let ens = Ensemble::validated(damping_members().unwrap(), &source).unwrap();
        assert!((ens.total_weight() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn sampled_damping_reruns_are_byte_identical() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Damping);
        cfg.shots = vec![256];
        cfg.t_end = 3.0;
        cfg.output_dir = temp_dir("damping-shots");
        let first = run_damping(&cfg).unwrap().to_csv();
        let second = run_damping(&cfg).unwrap().to_csv();
        assert_eq!(first, second);
    }

    #[test]
    fn sampled_dephasing_tracks_the_analytic_curve_loosely() {
        let mut cfg = ExperimentConfig::defaults(Experiment::Dephasing);
        cfg.mode = Mode::Shots;
        cfg.shots = vec![8192];
        cfg.t_end = 2.0;
        cfg.t_step = 1.0;
        cfg.output_dir = temp_dir("dephasing-shots");
        let report = run_dephasing(&cfg).unwrap();
        for row in &report.rows {
            assert!((row[3] - row[5]).abs() <= 0.05, "re01 at t={}", row[0]);
            assert!((row[4] - row[6]).abs() <= 0.05, "im01 at t={}", row[0]);
        }
    }
}
