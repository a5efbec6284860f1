//! Optimizer over `(tau, theta)` and the `tau` crossover finder.

use std::collections::HashMap;

use ptdeco::continuum::GammaComponents;

use crate::error::{CliError, CliResult};
use crate::eval::Evaluator;
use crate::grid::parse_number;

/// Coarse grid points per free axis.
pub const GRID_POINTS: usize = 64;
/// Golden-section stopping width, in parameter units.
pub const PARAM_TOL: f64 = 1e-4;
/// Scan resolution of the crossover search.
pub const SCAN_POINTS: usize = 256;
/// Bisection stopping width of the crossover search.
pub const CROSSOVER_TOL: f64 = 1e-4;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> CliResult<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(CliError::usage(format!("bounds must be finite with lo <= hi, got {lo}:{hi}")));
        }
        Ok(Self { lo, hi })
    }

    /// `lo:hi`
    pub fn parse(s: &str) -> CliResult<Self> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| CliError::usage(format!("expected lo:hi, got {s:?}")))?;
        let lo = parse_number(lo).map_err(CliError::Usage)?;
        let hi = parse_number(hi).map_err(CliError::Usage)?;
        Self::new(lo, hi)
    }

    fn grid(&self) -> Vec<f64> {
        if self.lo == self.hi {
            return vec![self.lo];
        }
        let n = GRID_POINTS;
        let mut v: Vec<f64> = (0..n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
            .collect();
        v[n - 1] = self.hi;
        v
    }

    fn step(&self) -> f64 {
        (self.hi - self.lo) / (GRID_POINTS - 1) as f64
    }
}

/// One evaluation of the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub tau: f64,
    pub theta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub best: Evaluation,
    pub log: Vec<Evaluation>,
}

struct Objective<'a> {
    eval: &'a Evaluator,
    t: f64,
    cache: HashMap<u64, GammaComponents>,
    log: Vec<Evaluation>,
}

impl Objective<'_> {
    fn prefetch(&mut self, taus: &[f64]) -> CliResult<()> {
        let keys: Vec<(f64, f64)> = taus.iter().map(|&tau| (tau, self.t)).collect();
        for (tau, c) in taus.iter().zip(self.eval.components_batch(&keys)?) {
            self.cache.insert(tau.to_bits(), c);
        }
        Ok(())
    }

    fn gamma(&mut self, tau: f64, theta: f64) -> CliResult<f64> {
        let comps = match self.cache.get(&tau.to_bits()) {
            Some(c) => *c,
            None => {
                let c = self.eval.components(tau, self.t)?;
                self.cache.insert(tau.to_bits(), c);
                c
            }
        };
        let gamma = comps.gamma(theta);
        self.log.push(Evaluation { tau, theta, gamma });
        Ok(gamma)
    }

    fn best(&self) -> Evaluation {
        *self
            .log
            .iter()
            .min_by(|a, b| a.gamma.total_cmp(&b.gamma))
            .expect("at least one evaluation")
    }
}

/// Golden-section search of `f` on `[a, b]` down to width [`PARAM_TOL`].
fn golden(mut a: f64, mut b: f64, mut f: impl FnMut(f64) -> CliResult<f64>) -> CliResult<()> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > PARAM_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(())
}

/// Minimises the exponent at time `t` over the free axes (`None` keeps the
/// start value). A coarse grid is followed by golden-section refinement of
/// each free axis around the incumbent; the answer is the best entry of
/// the evaluation log, so it is never worse than any grid point.
pub fn optimize(
    eval: &Evaluator,
    t: f64,
    start: (f64, f64),
    tau: Option<Bounds>,
    theta: Option<Bounds>,
) -> CliResult<Optimum> {
    if tau.is_none() && theta.is_none() {
        return Err(CliError::usage("optimize needs at least one free parameter (--free tau,theta)"));
    }
    let mut obj = Objective {
        eval,
        t,
        cache: HashMap::new(),
        log: Vec::new(),
    };
    let taus = tau.map_or(vec![start.0], |b| b.grid());
    let thetas = theta.map_or(vec![start.1], |b| b.grid());
    obj.prefetch(&taus)?;
    for &x in &taus {
        for &y in &thetas {
            obj.gamma(x, y)?;
        }
    }

    for _ in 0..2 {
        if let Some(b) = tau {
            let best = obj.best();
            let (lo, hi) = ((best.tau - b.step()).max(b.lo), (best.tau + b.step()).min(b.hi));
            if hi > lo {
                golden(lo, hi, |x| obj.gamma(x, best.theta))?;
            }
        }
        if let Some(b) = theta {
            let best = obj.best();
            let (lo, hi) = ((best.theta - b.step()).max(b.lo), (best.theta + b.step()).min(b.hi));
            if hi > lo {
                golden(lo, hi, |y| obj.gamma(best.tau, y))?;
            }
        }
    }
    Ok(Optimum {
        best: obj.best(),
        log: obj.log,
    })
}

/// First `tau` in `(0, tau_max]` where `Gamma(tau) - Gamma(0)` changes sign,
/// to within [`CROSSOVER_TOL`], with the exponent there. `None` when the
/// scan finds no sign change.
pub fn crossover(eval: &Evaluator, theta: f64, t: f64, tau_max: f64) -> CliResult<Option<(f64, f64)>> {
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(CliError::usage(format!("tau_max must be > 0, got {tau_max}")));
    }
    let taus: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| tau_max * i as f64 / SCAN_POINTS as f64)
        .collect();
    let keys: Vec<(f64, f64)> = taus.iter().map(|&x| (x, t)).collect();
    let comps = eval.components_batch(&keys)?;
    let reference = comps[0].gamma(theta);
    let diff: Vec<f64> = comps.iter().map(|c| c.gamma(theta) - reference).collect();

    for i in 2..=SCAN_POINTS {
        let (d0, d1) = (diff[i - 1], diff[i]);
        if d0 == 0.0 {
            return Ok(Some((taus[i - 1], reference)));
        }
        if d0 * d1 < 0.0 {
            let (mut a, mut b) = (taus[i - 1], taus[i]);
            let mut da = d0;
            while b - a > CROSSOVER_TOL {
                let m = 0.5 * (a + b);
                let dm = eval.components(m, t)?.gamma(theta) - reference;
                if (dm < 0.0) == (da < 0.0) {
                    a = m;
                    da = dm;
                } else {
                    b = m;
                }
            }
            let root = 0.5 * (a + b);
            return Ok(Some((root, eval.components(root, t)?.gamma(theta))));
        }
    }
    if diff[SCAN_POINTS] == 0.0 {
        return Ok(Some((tau_max, reference)));
    }
    Ok(None)
}
