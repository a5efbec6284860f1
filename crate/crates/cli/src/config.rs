//! Settings from flags and an optional JSON config file.
//!
//! The file uses the flag names with hyphens as underscores. Flags win over
//! the file; anything left unset falls back to the command's own defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{Command, Common, Format};
use crate::error::{CliError, CliResult};
use crate::grid::{Axis, ValueSpec};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub tau: Option<ValueSpec>,
    pub theta: Option<ValueSpec>,
    #[serde(rename = "A")]
    pub amplitude: Option<ValueSpec>,
    pub cutoff: Option<ValueSpec>,
    pub temp: Option<ValueSpec>,
    pub t: Option<ValueSpec>,
    pub modes_file: Option<PathBuf>,
    pub rel_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub free: Option<Vec<Axis>>,
    pub tau_bounds: Option<String>,
    pub theta_bounds: Option<String>,
    pub tau_max: Option<f64>,
    pub gamma: Option<f64>,
    pub omega: Option<f64>,
    pub g_abs: Option<f64>,
    pub omega0: Option<f64>,
    pub fock_dim: Option<usize>,
    pub max_dim: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> CliResult<(Self, Vec<Axis>)> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))?;
        // key order is kept, so grids declared in the file keep their order
        let order = value
            .as_object()
            .map(|o| {
                o.keys()
                    .filter_map(|k| Axis::ALL.into_iter().find(|a| a.name() == k))
                    .collect()
            })
            .unwrap_or_default();
        let config = serde_json::from_value(value).map_err(|e| CliError::usage(format!("config: {e}")))?;
        Ok((config, order))
    }

    pub fn load(path: &Path) -> CliResult<(Self, Vec<Axis>)> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}

/// Flag values merged over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub tau: Option<ValueSpec>,
    pub theta: Option<ValueSpec>,
    pub amplitude: Option<ValueSpec>,
    pub cutoff: Option<ValueSpec>,
    pub temp: Option<ValueSpec>,
    pub t: Option<ValueSpec>,
    pub modes_file: Option<PathBuf>,
    pub rel_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub free: Vec<Axis>,
    pub tau_bounds: Option<String>,
    pub theta_bounds: Option<String>,
    pub tau_max: Option<f64>,
    pub gamma: Option<f64>,
    pub omega: Option<f64>,
    pub g_abs: Option<f64>,
    pub omega0: Option<f64>,
    pub fock_dim: Option<usize>,
    pub max_dim: Option<usize>,
    /// Order in which tau/theta/t were declared: flags first, then the file.
    pub axis_order: Vec<Axis>,
}

fn spec(flag: &Option<String>) -> Option<ValueSpec> {
    flag.as_deref().map(ValueSpec::from)
}

impl Settings {
    /// `flag_order` lists the axes given as flags, in command-line order.
    pub fn merge(common: &Common, command: &Command, file: FileConfig, file_order: &[Axis], flag_order: &[Axis]) -> Self {
        let mut axis_order: Vec<Axis> = flag_order.to_vec();
        for a in file_order {
            if !axis_order.contains(a) {
                axis_order.push(*a);
            }
        }
        let mut s = Settings {
            tau: spec(&common.tau).or(file.tau),
            theta: spec(&common.theta).or(file.theta),
            amplitude: spec(&common.amplitude).or(file.amplitude),
            cutoff: spec(&common.cutoff).or(file.cutoff),
            temp: spec(&common.temp).or(file.temp),
            t: spec(&common.t).or(file.t),
            modes_file: common.modes_file.clone().or(file.modes_file),
            rel_tol: common.rel_tol.or(file.rel_tol),
            out: common.out.clone().or(file.out),
            format: common.format.or(file.format).unwrap_or_default(),
            jobs: common.jobs.or(file.jobs).unwrap_or(0),
            free: file.free.unwrap_or_default(),
            tau_bounds: file.tau_bounds,
            theta_bounds: file.theta_bounds,
            tau_max: file.tau_max,
            gamma: file.gamma,
            omega: file.omega,
            g_abs: file.g_abs,
            omega0: file.omega0,
            fock_dim: file.fock_dim,
            max_dim: file.max_dim,
            axis_order,
        };
        match command {
            Command::Optimize {
                free,
                tau_bounds,
                theta_bounds,
            } => {
                if !free.is_empty() {
                    s.free = free.clone();
                }
                s.tau_bounds = tau_bounds.clone().or(s.tau_bounds);
                s.theta_bounds = theta_bounds.clone().or(s.theta_bounds);
            }
            Command::Crossover { tau_max } => s.tau_max = tau_max.or(s.tau_max),
            Command::Concurrence { gamma } => s.gamma = gamma.or(s.gamma),
            Command::Oracle {
                omega,
                g_abs,
                omega0,
                fock_dim,
                max_dim,
            } => {
                s.omega = omega.or(s.omega);
                s.g_abs = g_abs.or(s.g_abs);
                s.omega0 = omega0.or(s.omega0);
                s.fock_dim = fock_dim.or(s.fock_dim);
                s.max_dim = max_dim.or(s.max_dim);
            }
            Command::Gamma | Command::Sweep | Command::Figure { .. } => {}
        }
        s
    }

    pub fn axis(&self, axis: Axis) -> Option<&ValueSpec> {
        match axis {
            Axis::Tau => self.tau.as_ref(),
            Axis::Theta => self.theta.as_ref(),
            Axis::T => self.t.as_ref(),
        }
    }

    /// Scalar setting with a fallback default.
    pub fn scalar_or(&self, value: &Option<ValueSpec>, name: &str, default: f64) -> CliResult<f64> {
        value.as_ref().map_or(Ok(default), |v| v.scalar(name))
    }
}
