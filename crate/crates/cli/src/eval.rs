//! Batched evaluation of the decoherence exponent.
//!
//! Points are grouped by `(tau, t)`; each group costs one frequency
//! integration, shared by every `theta` in it. Groups run on the worker
//! pool and results are assembled in input order, so values are
//! bit-identical to one-at-a-time calls whatever the thread count.

use std::collections::HashMap;

use ptdeco::continuum::{gamma_components, gamma_hermitian, GammaComponents, OhmicSpectrum, QuadratureSpec};
use ptdeco::dephasing::{gamma_discrete, DiscreteBath};
use ptdeco::par;

use crate::error::{CliError, CliResult};
use crate::grid::Axis;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub tau: f64,
    pub theta: f64,
    pub t: f64,
}

impl Point {
    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Tau => self.tau,
            Axis::Theta => self.theta,
            Axis::T => self.t,
        }
    }

    pub fn set(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::Tau => self.tau = value,
            Axis::Theta => self.theta = value,
            Axis::T => self.t = value,
        }
    }
}

/// Ohmic bath parameters that are never swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physical {
    pub amplitude: f64,
    pub cutoff: f64,
    pub temperature: f64,
}

impl Physical {
    pub const FIGURE: Physical = Physical {
        amplitude: 1.0,
        cutoff: 0.1,
        temperature: 300.0,
    };
}

fn located(point: &str, source: ptdeco::Error) -> CliError {
    CliError::Located {
        at: point.to_string(),
        source,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Evaluator {
    pub physical: Physical,
    pub quad: QuadratureSpec,
}

impl Evaluator {
    pub fn spectrum(&self, tau: f64, theta: f64) -> CliResult<OhmicSpectrum> {
        let p = &self.physical;
        Ok(OhmicSpectrum::new(p.amplitude, p.cutoff, theta, p.temperature, tau)?)
    }

    pub fn components(&self, tau: f64, t: f64) -> CliResult<GammaComponents> {
        let spec = self.spectrum(tau, 0.0)?;
        gamma_components(&spec, t, &self.quad).map_err(|e| located(&format!("tau={tau}, t={t}"), e))
    }

    /// Components for each `(tau, t)` pair, computed in parallel.
    pub fn components_batch(&self, keys: &[(f64, f64)]) -> CliResult<Vec<GammaComponents>> {
        par::map(keys, |&(tau, t)| self.components(tau, t))
            .into_iter()
            .collect()
    }

    /// Non-Hermitian exponent at each point.
    pub fn gamma_nh(&self, points: &[Point]) -> CliResult<Vec<f64>> {
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut keys = Vec::new();
        let slots: Vec<usize> = points
            .iter()
            .map(|p| {
                *index.entry((p.tau.to_bits(), p.t.to_bits())).or_insert_with(|| {
                    keys.push((p.tau, p.t));
                    keys.len() - 1
                })
            })
            .collect();
        let comps = self.components_batch(&keys)?;
        Ok(points
            .iter()
            .zip(slots)
            .map(|(p, k)| comps[k].gamma(p.theta))
            .collect())
    }

    /// Ordinary spin-boson exponent at each time.
    pub fn gamma_hermitian(&self, times: &[f64]) -> CliResult<Vec<f64>> {
        let p = self.physical;
        par::map(times, |&t| {
            gamma_hermitian(p.amplitude, p.cutoff, p.temperature, t, &self.quad)
                .map_err(|e| located(&format!("hermitian, t={t}"), e))
        })
        .into_iter()
        .collect()
    }
}

/// Discrete-bath exponent; each point's `tau` replaces the bath's.
pub fn gamma_discrete_points(bath: &DiscreteBath, points: &[Point]) -> CliResult<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            let b = bath.with_tau(p.tau)?;
            gamma_discrete(&b, p.t).map_err(|e| located(&format!("tau={}, t={}", p.tau, p.t), e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ptdeco::continuum::gamma_continuum_nh;

    #[test]
    fn grouped_values_match_direct_calls() {
        let ev = Evaluator {
            physical: Physical::FIGURE,
            quad: QuadratureSpec::default(),
        };
        let mut points = Vec::new();
        for tau in [0.0, 1.0] {
            for theta in [0.0, 1.0, 2.0] {
                for t in [3.0, 7.0] {
                    points.push(Point { tau, theta, t });
                }
            }
        }
        let got = ev.gamma_nh(&points).unwrap();
        for (p, g) in points.iter().zip(got) {
            let direct = gamma_continuum_nh(&ev.spectrum(p.tau, p.theta).unwrap(), p.t, &ev.quad).unwrap();
            assert_eq!(g.to_bits(), direct.to_bits());
        }
    }
}
