//! Experiment configuration: JSON files mirror [`ExperimentConfig`] field
//! names, every field is optional, and unset fields take experiment-specific
//! defaults so a bare subcommand reproduces the reference runs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Deserialize;

use crate::{CliError, CliResult};

/// Which experiment a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Prep,
    Dephasing,
    Damping,
    Decompose,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Prep => "prep",
            Experiment::Dephasing => "dephasing",
            Experiment::Damping => "damping",
            Experiment::Decompose => "decompose",
        }
    }
}

/// Exact probabilities or seeded measurement sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Shots,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub shots: Vec<u64>,
    pub n_states: usize,
    pub theta: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub gamma: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub t_step: f64,
    pub mode: Mode,
    pub output_dir: PathBuf,
}

/// Default seed of the reference runs; any other seed is equally valid but
/// the acceptance thresholds are asserted on this one.
pub const DEFAULT_SEED: u64 = 11;
/// Shot schedule of the preparation study: 2⁶ through 2¹⁴.
pub const PREP_SHOT_SCHEDULE: [u64; 5] = [64, 256, 1024, 4096, 16384];
/// Single-run budget of the damping study.
pub const DAMPING_SHOTS: u64 = 32_000;

/// A configuration file as written by the user: everything optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub shots: Option<Vec<u64>>,
    pub n_states: Option<usize>,
    pub theta: Option<f64>,
    pub lambda0: Option<f64>,
    pub lambda1: Option<f64>,
    pub gamma: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub t_step: Option<f64>,
    pub mode: Option<Mode>,
    pub output_dir: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    /// Fills defaults for `experiment` and validates the result. A config
    /// file naming a different experiment than the subcommand is an error.
    pub fn resolve(&self, experiment: Experiment) -> CliResult<ExperimentConfig> {
        if let Some(declared) = self.experiment {
            if declared != experiment {
                return Err(CliError::Config(format!(
                    "config file is for '{}' but the '{}' command was invoked",
                    declared.name(),
                    experiment.name()
                )));
            }
        }
        let theta = self.theta.unwrap_or(0.5);
        let (default_mode, default_shots): (Mode, &[u64]) = match experiment {
            Experiment::Prep => (Mode::Shots, &PREP_SHOT_SCHEDULE),
            Experiment::Dephasing => (Mode::Exact, &[4096]),
            Experiment::Damping => (Mode::Shots, &[DAMPING_SHOTS]),
            Experiment::Decompose => (Mode::Exact, &[]),
        };
        let t_start = self.t_start.unwrap_or(0.0);
        let t_end = self.t_end.unwrap_or(match experiment {
            // one full coherence period of e^{±2iθt}
            Experiment::Dephasing => PI / theta,
            _ => 30.0,
        });
        let t_step = self.t_step.unwrap_or(match experiment {
            Experiment::Dephasing => (t_end - t_start) / 24.0,
            _ => 1.0,
        });

        let config = ExperimentConfig {
            experiment,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            shots: self.shots.clone().unwrap_or_else(|| default_shots.to_vec()),
            n_states: self.n_states.unwrap_or(98),
            theta,
            lambda0: self.lambda0.unwrap_or(0.7),
            lambda1: self.lambda1.unwrap_or(0.3),
            gamma: self.gamma.unwrap_or(0.15),
            t_start,
            t_end,
            t_step,
            mode: self.mode.unwrap_or(default_mode),
            output_dir: self.output_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
        };
        config.validate()?;
        Ok(config)
    }
}

impl ExperimentConfig {
    /// Reference configuration for an experiment with nothing overridden.
    pub fn defaults(experiment: Experiment) -> Self {
        PartialConfig::default()
            .resolve(experiment)
            .expect("default configuration is valid")
    }

    fn validate(&self) -> CliResult<()> {
        if self.mode == Mode::Shots && self.experiment != Experiment::Decompose {
            if self.shots.is_empty() {
                return Err(CliError::Config(
                    "shot mode needs at least one shot count".into(),
                ));
            }
            if self.shots.iter().any(|&s| s < 1) {
                return Err(CliError::Config("shot counts must be at least 1".into()));
            }
        }
        if self.n_states < 1 {
            return Err(CliError::Config("n_states must be at least 1".into()));
        }
        if !(self.t_step > 0.0 && self.t_step.is_finite()) {
            return Err(CliError::Config(format!(
                "t_step must be positive, got {}",
                self.t_step
            )));
        }
        if !self.t_start.is_finite() || !self.t_end.is_finite() || self.t_end < self.t_start {
            return Err(CliError::Config(format!(
                "time grid [{}, {}] is not a finite forward interval",
                self.t_start, self.t_end
            )));
        }
        for (name, value) in [
            ("theta", self.theta),
            ("lambda0", self.lambda0),
            ("lambda1", self.lambda1),
            ("gamma", self.gamma),
        ] {
            if !value.is_finite() {
                return Err(CliError::Config(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// The inclusive time grid `t_start, t_start + t_step, …, t_end`.
    pub fn time_grid(&self) -> Vec<f64> {
        let count = ((self.t_end - self.t_start) / self.t_step + 0.5).floor() as usize + 1;
        (0..count)
            .map(|i| self.t_start + i as f64 * self.t_step)
            .collect()
    }

    /// Key/value pairs echoed into every report, in fixed order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut echo: Vec<(String, String)> = vec![
            ("experiment".into(), self.experiment.name().into()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("seed".into(), self.seed.to_string()),
            (
                "mode".into(),
                match self.mode {
                    Mode::Exact => "exact".into(),
                    Mode::Shots => "shots".into(),
                },
            ),
        ];
        match self.experiment {
            Experiment::Prep => {
                echo.push(("shots".into(), join_counts(&self.shots)));
                echo.push(("n_states".into(), self.n_states.to_string()));
            }
            Experiment::Dephasing => {
                if self.mode == Mode::Shots {
                    echo.push(("shots".into(), join_counts(&self.shots)));
                }
                echo.push(("theta".into(), self.theta.to_string()));
                echo.push(("lambda0".into(), self.lambda0.to_string()));
                echo.push(("lambda1".into(), self.lambda1.to_string()));
                push_grid(&mut echo, self);
            }
            Experiment::Damping => {
                if self.mode == Mode::Shots {
                    echo.push(("shots".into(), join_counts(&self.shots)));
                }
                echo.push(("gamma".into(), self.gamma.to_string()));
                push_grid(&mut echo, self);
            }
            Experiment::Decompose => {}
        }
        echo
    }

    /// Parameters as a map, for tests that assert on echoes.
    pub fn echo_map(&self) -> BTreeMap<String, String> {
        self.echo().into_iter().collect()
    }
}

fn join_counts(shots: &[u64]) -> String {
    shots
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn push_grid(echo: &mut Vec<(String, String)>, cfg: &ExperimentConfig) {
    echo.push(("t_start".into(), cfg.t_start.to_string()));
    echo.push(("t_end".into(), cfg.t_end.to_string()));
    echo.push(("t_step".into(), cfg.t_step.to_string()));
}
