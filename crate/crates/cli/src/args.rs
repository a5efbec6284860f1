use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::grid::Axis;
use crate::presets::FigureId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ptdeco", version, about = "Qubit dephasing under a PT-symmetric non-Hermitian bath")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Grid-capable values accept a number
/// (`pi` allowed, e.g. `2pi/3`) or `start:stop:count`.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Non-Hermiticity tau
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Coupling phase theta
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Ohmic amplitude A
    #[arg(long = "A", global = true)]
    pub amplitude: Option<String>,
    /// Ohmic cutoff Lambda
    #[arg(long, global = true)]
    pub cutoff: Option<String>,
    /// Bath temperature (k_B = 1)
    #[arg(long, global = true)]
    pub temp: Option<String>,
    /// Time, scalar or start:stop:count
    #[arg(long = "t", global = true)]
    pub t: Option<String>,
    /// Discrete bath from a CSV file with header omega,g_abs,theta
    #[arg(long, global = true)]
    pub modes_file: Option<PathBuf>,
    /// Relative tolerance of the frequency quadrature
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with the same settings; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Decoherence exponent for one parameter set (t may be a grid)
    Gamma,
    /// Cartesian sweep over any of --tau, --theta, --t given as grids
    Sweep,
    /// Regenerate the data behind one figure
    Figure {
        #[arg(value_enum)]
        id: FigureId,
    },
    /// Minimise the decoherence exponent over tau and/or theta
    Optimize {
        /// Free parameters, e.g. tau,theta
        #[arg(long, value_delimiter = ',', value_enum)]
        free: Vec<Axis>,
        /// lo:hi (default 0:20)
        #[arg(long, allow_hyphen_values = true)]
        tau_bounds: Option<String>,
        /// lo:hi (default 0:pi)
        #[arg(long, allow_hyphen_values = true)]
        theta_bounds: Option<String>,
    },
    /// tau > 0 where the exponent returns to its Hermitian value
    Crossover {
        /// Upper end of the search interval (default 4)
        #[arg(long)]
        tau_max: Option<f64>,
    },
    /// Concurrence and entanglement of formation of a dephased Bell pair
    Concurrence {
        /// Decoherence exponent of the dephased qubit
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<f64>,
    },
    /// Exact truncated-Fock validation of the closed form
    Oracle {
        /// Mode frequency (ignored with --modes-file)
        #[arg(long)]
        omega: Option<f64>,
        /// Coupling magnitude (ignored with --modes-file)
        #[arg(long)]
        g_abs: Option<f64>,
        /// Qubit splitting
        #[arg(long)]
        omega0: Option<f64>,
        /// Starting Fock dimension per mode
        #[arg(long)]
        fock_dim: Option<usize>,
        /// Budget on the total dimension 2 * prod N_F
        #[arg(long)]
        max_dim: Option<usize>,
    },
}
