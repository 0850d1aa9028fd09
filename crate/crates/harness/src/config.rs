//! Experiment configuration: a JSON file, command-line overrides, or both.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use seldonian_core::SearchConfig64;

#[derive(Debug, Error)]
pub enum ConfigError {
    // The source is reported through the error chain, not the message,
    // so a chained printout does not repeat it.
    #[error("cannot read config {path}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Which sweep the runner executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum ExperimentKind {
    #[serde(rename = "regression-sweep")]
    #[value(name = "regression-sweep")]
    RegressionSweep,
    #[serde(rename = "lambda-sweep")]
    #[value(name = "lambda-sweep")]
    LambdaSweep,
    #[serde(rename = "rl-sweep")]
    #[value(name = "rl-sweep")]
    RlSweep,
    #[serde(rename = "oracle-check")]
    #[value(name = "oracle-check")]
    OracleCheck,
}

/// Algorithm selector for regression sweeps and single fits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Algo {
    /// Unconstrained least squares.
    #[serde(rename = "ls")]
    #[value(name = "ls")]
    Ls,
    /// Penalized (non-Seldonian) baseline: MSE + lambda * |disc stat|.
    #[serde(rename = "sclr")]
    #[value(name = "sclr")]
    Sclr,
    /// Hoeffding-bound trainer.
    #[serde(rename = "ndlr")]
    #[value(name = "ndlr")]
    Ndlr,
    /// Student-t trainer, plain form (lambda = 0).
    #[serde(rename = "qndlr")]
    #[value(name = "qndlr")]
    Qndlr,
    /// Student-t trainer with the linear penalty from the config.
    #[serde(rename = "qndlr-lambda")]
    #[value(name = "qndlr-lambda")]
    QndlrLambda,
    /// General trainer with the two-sided error-difference and
    /// prediction-difference constraints.
    #[serde(rename = "alg11")]
    #[value(name = "alg11")]
    Alg11,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algo::Ls => "ls",
            Algo::Sclr => "sclr",
            Algo::Ndlr => "ndlr",
            Algo::Qndlr => "qndlr",
            Algo::QndlrLambda => "qndlr-lambda",
            Algo::Alg11 => "alg11",
        };
        f.write_str(s)
    }
}

/// Optional overrides for the candidate-search configuration. Unset
/// fields keep the per-algorithm defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchOverrides {
    pub d1_fraction: Option<f64>,
    pub shuffle: Option<bool>,
    pub init_step: Option<f64>,
    pub max_evals: Option<usize>,
    pub f_tolerance: Option<f64>,
    pub x_tolerance: Option<f64>,
    pub restarts: Option<usize>,
}

impl SearchOverrides {
    pub fn apply(&self, base: &mut SearchConfig64) {
        if let Some(v) = self.d1_fraction {
            base.d1_fraction = v;
        }
        if let Some(v) = self.shuffle {
            base.shuffle = v;
        }
        if let Some(v) = self.init_step {
            base.init_step = v;
        }
        if let Some(v) = self.max_evals {
            base.max_evals = v;
        }
        if let Some(v) = self.f_tolerance {
            base.f_tolerance = v;
        }
        if let Some(v) = self.x_tolerance {
            base.x_tolerance = v;
        }
        if let Some(v) = self.restarts {
            base.restarts = v;
        }
    }
}

/// Full description of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub algo: Algo,
    /// Training-set sizes (regression) or episode counts (RL).
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub delta: f64,
    pub eps: f64,
    /// Penalty weight for `sclr` and `qndlr-lambda`.
    pub lambda: f64,
    /// Penalty grid for `lambda-sweep`.
    pub lambdas: Vec<f64>,
    /// Range/barrier scale override; algorithms fall back to their
    /// documented defaults when absent.
    pub b: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; 0 runs trials serially on the calling thread.
    /// Output bytes are identical at any setting.
    pub threads: usize,
    /// Record wall-clock times. Off by default so reruns are
    /// byte-identical.
    pub timing: bool,
    pub search: SearchOverrides,
}

impl Default for ExperimentConfig {
    /// Desk-scale regression defaults: 500 trials over the m grid
    /// {100, 316, 1000, 3162, 10^4, 10^5}.
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::RegressionSweep,
            algo: Algo::Ls,
            m_values: vec![100, 316, 1000, 3162, 10_000, 100_000],
            trials: 500,
            delta: 0.05,
            eps: 0.1,
            lambda: 0.0,
            lambdas: vec![2.45, 4.9, 9.8],
            b: None,
            seed: 0,
            out: PathBuf::from("experiment.csv"),
            threads: 0,
            timing: false,
            search: SearchOverrides::default(),
        }
    }
}

impl ExperimentConfig {
    /// Desk-scale RL defaults: 200 trials at episode counts {30, 60, 180}.
    pub fn rl_default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::RlSweep,
            m_values: vec![30, 60, 180],
            trials: 200,
            out: PathBuf::from("rl-experiment.csv"),
            ..ExperimentConfig::default()
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials < 1 {
            return Err(ConfigError::Invalid("trials must be at least 1".into()));
        }
        if self.m_values.is_empty() {
            return Err(ConfigError::Invalid("m_values must be nonempty".into()));
        }
        if let Some(&m) = self.m_values.iter().find(|&&m| m < 10) {
            return Err(ConfigError::Invalid(format!("every m must be at least 10 (found {m})")));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "delta must lie in (0, 1) (found {})",
                self.delta
            )));
        }
        if !self.eps.is_finite() || self.eps < 0.0 {
            return Err(ConfigError::Invalid(format!(
                "eps must be finite and nonnegative (found {})",
                self.eps
            )));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(ConfigError::Invalid(format!(
                "lambda must be finite and nonnegative (found {})",
                self.lambda
            )));
        }
        if self.kind == ExperimentKind::LambdaSweep {
            if self.lambdas.is_empty() {
                return Err(ConfigError::Invalid(
                    "lambda-sweep needs a nonempty lambdas grid".into(),
                ));
            }
            if let Some(&l) = self.lambdas.iter().find(|l| !l.is_finite() || **l < 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "lambdas must be finite and nonnegative (found {l})"
                )));
            }
        }
        if let Some(b) = self.b {
            if !b.is_finite() || b <= 0.0 {
                return Err(ConfigError::Invalid(format!(
                    "b must be finite and positive (found {b})"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        ExperimentConfig::default().validate().unwrap();
        ExperimentConfig::rl_default().validate().unwrap();
    }

    #[test]
    fn json_round_trip_preserves_the_config() {
        let mut cfg = ExperimentConfig::default();
        cfg.kind = ExperimentKind::LambdaSweep;
        cfg.algo = Algo::QndlrLambda;
        cfg.b = Some(7.5);
        cfg.search.max_evals = Some(123);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_json_fills_in_defaults() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"kind":"rl-sweep","trials":7}"#).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::RlSweep);
        assert_eq!(cfg.trials, 7);
        assert_eq!(cfg.delta, 0.05);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"tirals":7}"#).is_err());
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut cfg = ExperimentConfig::default();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.m_values = vec![100, 9];
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.delta = 1.0;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.kind = ExperimentKind::LambdaSweep;
        cfg.lambdas.clear();
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.b = Some(0.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn algo_tokens_match_the_cli_contract() {
        for (algo, token) in [
            (Algo::Ls, "ls"),
            (Algo::Sclr, "sclr"),
            (Algo::Ndlr, "ndlr"),
            (Algo::Qndlr, "qndlr"),
            (Algo::QndlrLambda, "qndlr-lambda"),
            (Algo::Alg11, "alg11"),
        ] {
            assert_eq!(algo.to_string(), token);
            assert_eq!(serde_json::to_string(&algo).unwrap(), format!("\"{token}\""));
        }
    }
}
