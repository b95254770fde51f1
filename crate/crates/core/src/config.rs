//! Run configuration shared by the library drivers and the CLI.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::ExecMode;

/// Pass thresholds for the six verification checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckTolerances {
    pub unit_norm: f64,
    pub divergence: f64,
    pub arc_trace: f64,
    pub normal_trace: f64,
    /// The duality gap must stay below `duality_constant / grid`.
    pub duality_constant: f64,
    pub primal: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        Self {
            unit_norm: 1e-10,
            divergence: 1e-3,
            arc_trace: 1e-8,
            normal_trace: 1e-6,
            duality_constant: 10.0,
            primal: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub bisection_tol: f64,
    pub chain_closure_tol: f64,
    /// Width of the bands around interfaces excluded from pointwise checks.
    pub band: f64,
    pub fd_step: f64,
    pub grid: usize,
    pub competitors: usize,
    pub seed: u64,
    pub exec: ExecMode,
    pub tolerances: CheckTolerances,
    pub outputs: OutputPaths,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            bisection_tol: crate::cutlocus::DEFAULT_TOLERANCE,
            chain_closure_tol: crate::geom2d::CHAIN_TOL,
            band: 1e-2,
            fd_step: 1e-5,
            grid: 400,
            competitors: 100,
            seed: 0,
            exec: ExecMode::Parallel,
            tolerances: CheckTolerances::default(),
            outputs: OutputPaths::default(),
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Config = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        let positive = [
            ("bisection_tol", self.bisection_tol),
            ("chain_closure_tol", self.chain_closure_tol),
            ("band", self.band),
            ("fd_step", self.fd_step),
            ("tolerances.unit_norm", t.unit_norm),
            ("tolerances.divergence", t.divergence),
            ("tolerances.arc_trace", t.arc_trace),
            ("tolerances.normal_trace", t.normal_trace),
            ("tolerances.duality_constant", t.duality_constant),
            ("tolerances.primal", t.primal),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.grid < 2 {
            return Err(Error::InvalidParameter(format!("grid must be at least 2, got {}", self.grid)));
        }
        Ok(())
    }
}
