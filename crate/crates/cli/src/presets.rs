//! Parameter sets behind each figure.
//!
//! Every preset fixes `A`, `Lambda`, `T` and one of `(tau, theta, t)`,
//! draws one curve per value of a second axis and sweeps the third.

use std::f64::consts::PI;

use serde::Deserialize;

use crate::eval::{Evaluator, Point};
use crate::error::CliResult;
use crate::grid::Axis;
use crate::output::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3a,
    Fig3b,
    Fig4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub amplitude: f64,
    pub cutoff: f64,
    pub temperature: f64,
    pub fixed: (Axis, f64),
    pub family: (Axis, Vec<f64>),
    pub sweep: (Axis, Vec<f64>),
    /// Also emit the ordinary spin-boson curve (rows with `tau = theta = 0`).
    pub hermitian_reference: bool,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    v[n - 1] = b;
    v
}

const TAU_CURVES: [f64; 4] = [0.0, 1.0, 2.0, 4.0];

fn theta_curves() -> Vec<f64> {
    vec![0.0, PI / 4.0, PI / 2.0, 2.0 * PI / 3.0, 3.0 * PI / 4.0, PI]
}

impl FigurePreset {
    pub fn defaults(id: FigureId) -> Self {
        let base = |fixed, family, sweep| FigurePreset {
            id,
            amplitude: 1.0,
            cutoff: 0.1,
            temperature: 300.0,
            fixed,
            family,
            sweep,
            hermitian_reference: false,
        };
        match id {
            FigureId::Fig1a => FigurePreset {
                hermitian_reference: true,
                ..base(
                    (Axis::Tau, 2.0),
                    (Axis::Theta, vec![0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI]),
                    (Axis::T, linspace(0.0, 20.0, 401)),
                )
            },
            FigureId::Fig1b => FigurePreset {
                amplitude: 0.1,
                ..base(
                    (Axis::T, 20.0),
                    (Axis::Tau, vec![0.0, 0.5, 1.0, 2.0, 4.0]),
                    (Axis::Theta, linspace(0.0, 2.0 * PI, 721)),
                )
            },
            FigureId::Fig2 => base(
                (Axis::Theta, PI / 2.0),
                (Axis::Tau, TAU_CURVES.to_vec()),
                (Axis::T, linspace(0.0, 20.0, 401)),
            ),
            FigureId::Fig3a => base((Axis::T, 120.0), (Axis::Theta, theta_curves()), (Axis::Tau, linspace(0.0, 4.0, 201))),
            FigureId::Fig3b => base((Axis::T, 2.0), (Axis::Theta, theta_curves()), (Axis::Tau, linspace(0.0, 4.0, 201))),
            FigureId::Fig4 => base(
                (Axis::Theta, PI / 2.0),
                (Axis::T, vec![2.0, 120.0]),
                (Axis::Tau, linspace(0.0, 20.0, 201)),
            ),
        }
    }

    /// Role of `axis` in this preset.
    pub fn set_axis(&mut self, axis: Axis, values: Vec<f64>) -> Result<(), String> {
        if self.fixed.0 == axis {
            match values.as_slice() {
                [x] => self.fixed.1 = *x,
                _ => return Err(format!("{axis} is fixed in {:?}; give a single value", self.id)),
            }
        } else if self.family.0 == axis {
            self.family.1 = values;
        } else {
            self.sweep.1 = values;
        }
        Ok(())
    }

    pub fn columns(&self) -> Vec<Axis> {
        if self.hermitian_reference {
            vec![self.fixed.0, self.family.0, self.sweep.0]
        } else {
            vec![self.family.0, self.sweep.0]
        }
    }

    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.family.1.len() * self.sweep.1.len());
        for &f in &self.family.1 {
            for &s in &self.sweep.1 {
                let mut p = Point {
                    tau: 0.0,
                    theta: 0.0,
                    t: 0.0,
                };
                p.set(self.fixed.0, self.fixed.1);
                p.set(self.family.0, f);
                p.set(self.sweep.0, s);
                out.push(p);
            }
        }
        out
    }

    /// One row per point, family-major; the Hermitian curve, if any, last.
    pub fn run(&self, eval: &Evaluator) -> CliResult<Table> {
        let columns = self.columns();
        let mut table = Table::decoherence(columns.iter().map(|a| a.name()));
        let points = self.points();
        for (p, g) in points.iter().zip(eval.gamma_nh(&points)?) {
            table.push_gamma(columns.iter().map(|&a| p.get(a)).collect(), g);
        }
        if self.hermitian_reference && self.sweep.0 == Axis::T {
            let times = &self.sweep.1;
            for (&t, g) in times.iter().zip(eval.gamma_hermitian(times)?) {
                let p = Point { tau: 0.0, theta: 0.0, t };
                table.push_gamma(columns.iter().map(|&a| p.get(a)).collect(), g);
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caption_parameters() {
        let p = FigurePreset::defaults(FigureId::Fig1a);
        assert_eq!((p.amplitude, p.cutoff, p.temperature), (1.0, 0.1, 300.0));
        assert_eq!(p.fixed, (Axis::Tau, 2.0));
        assert_eq!(p.sweep.1.len(), 401);
        assert!(p.hermitian_reference);

        let p = FigurePreset::defaults(FigureId::Fig1b);
        assert_eq!(p.amplitude, 0.1);
        assert_eq!(p.fixed, (Axis::T, 20.0));
        assert_eq!(p.sweep.0, Axis::Theta);
        assert_eq!(p.sweep.1.len(), 721);
        assert_eq!(*p.sweep.1.last().unwrap(), 2.0 * PI);

        assert_eq!(FigurePreset::defaults(FigureId::Fig2).fixed, (Axis::Theta, PI / 2.0));
        assert_eq!(FigurePreset::defaults(FigureId::Fig3a).fixed, (Axis::T, 120.0));
        assert_eq!(FigurePreset::defaults(FigureId::Fig3b).fixed, (Axis::T, 2.0));
        let p = FigurePreset::defaults(FigureId::Fig4);
        assert_eq!(p.family, (Axis::T, vec![2.0, 120.0]));
        assert_eq!(*p.sweep.1.last().unwrap(), 20.0);
        for id in [FigureId::Fig2, FigureId::Fig3a, FigureId::Fig3b, FigureId::Fig4] {
            let p = FigurePreset::defaults(id);
            assert_eq!((p.amplitude, p.cutoff, p.temperature), (1.0, 0.1, 300.0));
        }
    }

    #[test]
    fn overrides_follow_axis_roles() {
        let mut p = FigurePreset::defaults(FigureId::Fig4);
        p.set_axis(Axis::T, vec![5.0]).unwrap();
        assert_eq!(p.family.1, vec![5.0]);
        assert!(p.set_axis(Axis::Theta, vec![0.0, 1.0]).is_err());
        p.set_axis(Axis::Theta, vec![1.0]).unwrap();
        assert_eq!(p.fixed, (Axis::Theta, 1.0));
    }
}
