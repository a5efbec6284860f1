//! Globally adaptive Gauss-Kronrod (7/15) quadrature over a fixed initial
//! panel mesh, for vector-valued integrands.
//!
//! The caller picks the initial panel width; for oscillatory integrands it
//! should resolve every oscillation with several panels so that the first
//! pass is already close to converged. Panels with the largest normalised
//! error are then bisected until every component satisfies
//! `error <= max(abs_tol, rel_tol * integral of |f|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod abscissae on `[0, 1]` (the negative half is symmetric); odd
/// indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    abs_value: [f64; K],
    error: [f64; K],
}

fn gauss_kronrod<const K: usize, F>(f: &F, a: f64, b: f64) -> Panel<K>
where
    F: Fn(f64) -> [f64; K],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = [0.0; K];
    let mut gauss = [0.0; K];
    let mut abs_value = [0.0; K];
    for k in 0..K {
        kronrod[k] = WGK[7] * fc[k];
        gauss[k] = WG[3] * fc[k];
        abs_value[k] = WGK[7] * fc[k].abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for k in 0..K {
            let pair = f1[k] + f2[k];
            kronrod[k] += WGK[j] * pair;
            abs_value[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * pair;
            }
        }
    }

    let mut value = [0.0; K];
    let mut error = [0.0; K];
    for k in 0..K {
        value[k] = kronrod[k] * half;
        abs_value[k] *= half.abs();
        error[k] = ((kronrod[k] - gauss[k]) * half).abs();
    }
    Panel {
        a,
        b,
        value,
        abs_value,
        error,
    }
}

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome<const K: usize> {
    pub value: [f64; K],
    pub error_estimate: [f64; K],
    pub panels: usize,
}

/// Controls for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub initial_width: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

struct Queued {
    priority: f64,
    index: usize,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    // ties go to the leftmost panel so refinement order is reproducible
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.index.cmp(&self.index))
    }
}

struct Totals<const K: usize> {
    abs_value: [f64; K],
    error: [f64; K],
}

impl<const K: usize> Totals<K> {
    fn of(panels: &[Panel<K>]) -> Self {
        let mut t = Totals {
            abs_value: [0.0; K],
            error: [0.0; K],
        };
        for p in panels {
            t.add(p);
        }
        t
    }

    fn add(&mut self, p: &Panel<K>) {
        for k in 0..K {
            self.abs_value[k] += p.abs_value[k];
            self.error[k] += p.error[k];
        }
    }

    fn remove(&mut self, p: &Panel<K>) {
        for k in 0..K {
            self.abs_value[k] -= p.abs_value[k];
            self.error[k] -= p.error[k];
        }
    }

    fn tolerance(&self, opts: &AdaptiveOptions) -> [f64; K] {
        let mut tol = [0.0; K];
        for k in 0..K {
            tol[k] = opts.abs_tol.max(opts.rel_tol * self.abs_value[k]);
        }
        tol
    }

    /// Largest `error / tolerance` ratio over components.
    fn worst_ratio(&self, opts: &AdaptiveOptions) -> (f64, f64, f64) {
        let tol = self.tolerance(opts);
        let mut worst = (0.0, 0.0, 0.0);
        for k in 0..K {
            let r = self.error[k] / tol[k];
            if r > worst.0 || k == 0 {
                worst = (r, self.error[k], tol[k]);
            }
        }
        worst
    }
}

fn priority<const K: usize>(p: &Panel<K>, scale: &[f64; K]) -> f64 {
    (0..K).map(|k| p.error[k] / scale[k]).sum()
}

/// Integrates `f` over `[a, b]`.
///
/// Panels are finally summed in order of their left endpoint, so the result
/// is bit-reproducible for fixed inputs.
pub fn integrate<const K: usize, F>(
    f: F,
    a: f64,
    b: f64,
    opts: &AdaptiveOptions,
) -> Result<QuadratureOutcome<K>>
where
    F: Fn(f64) -> [f64; K],
{
    debug_assert!(b >= a);
    if b == a {
        return Ok(QuadratureOutcome {
            value: [0.0; K],
            error_estimate: [0.0; K],
            panels: 0,
        });
    }

    let n0 = ((b - a) / opts.initial_width).ceil().max(1.0);
    if n0 > opts.max_panels as f64 {
        return Err(Error::QuadratureMeshTooLarge {
            needed: n0,
            limit: opts.max_panels,
        });
    }
    let n0 = n0 as usize;
    let width = opts.initial_width;

    let mut panels: Vec<Panel<K>> = (0..n0)
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == n0 { b } else { a + (i + 1) as f64 * width };
            gauss_kronrod(&f, lo, hi)
        })
        .collect();

    let mut totals = Totals::of(&panels);
    let scale = totals.tolerance(opts);
    let mut heap: BinaryHeap<Queued> = panels
        .iter()
        .enumerate()
        .map(|(index, p)| Queued {
            priority: priority(p, &scale),
            index,
        })
        .collect();

    loop {
        let (ratio, _, _) = totals.worst_ratio(opts);
        if ratio <= 1.0 {
            // running sums drift; confirm against a fresh total
            totals = Totals::of(&panels);
            let (ratio, _, _) = totals.worst_ratio(opts);
            if ratio <= 1.0 {
                break;
            }
        }
        if panels.len() >= opts.max_panels {
            let (_, error_estimate, tolerance) = totals.worst_ratio(opts);
            return Err(Error::QuadratureNotConverged {
                error_estimate,
                tolerance,
                subdivisions: panels.len(),
            });
        }
        let Some(Queued { index, .. }) = heap.pop() else {
            let (_, error_estimate, tolerance) = totals.worst_ratio(opts);
            return Err(Error::QuadratureNotConverged {
                error_estimate,
                tolerance,
                subdivisions: panels.len(),
            });
        };
        let parent = panels[index];
        let mid = 0.5 * (parent.a + parent.b);
        if !(mid > parent.a && mid < parent.b) {
            // cannot split further in f64; leave the panel as is
            continue;
        }
        let left = gauss_kronrod(&f, parent.a, mid);
        let right = gauss_kronrod(&f, mid, parent.b);
        totals.remove(&parent);
        totals.add(&left);
        totals.add(&right);
        panels[index] = left;
        panels.push(right);
        heap.push(Queued {
            priority: priority(&left, &scale),
            index,
        });
        heap.push(Queued {
            priority: priority(&right, &scale),
            index: panels.len() - 1,
        });
    }

    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = [0.0; K];
    let mut error_estimate = [0.0; K];
    for p in &panels {
        for k in 0..K {
            value[k] += p.value[k];
            error_estimate[k] += p.error[k];
        }
    }
    Ok(QuadratureOutcome {
        value,
        error_estimate,
        panels: panels.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(width: f64) -> AdaptiveOptions {
        AdaptiveOptions {
            initial_width: width,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_panels: 100_000,
        }
    }

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        // K15 integrates degree-29 polynomials exactly; G7 degree 13
        let out = integrate(|x| [x.powi(12), 1.0], 0.0, 1.0, &opts(1.0)).unwrap();
        assert!((out.value[0] - 1.0 / 13.0).abs() < 1e-15);
        assert!((out.value[1] - 1.0).abs() < 1e-15);
        assert_eq!(out.panels, 1);
    }

    #[test]
    fn oscillatory_integral() {
        // int_0^10 sin^2(50 x) dx = 5 - sin(1000)/200
        let exact = 5.0 - 1000f64.sin() / 200.0;
        let out = integrate(|x| [(50.0 * x).sin().powi(2)], 0.0, 10.0, &opts(0.02)).unwrap();
        assert!((out.value[0] - exact).abs() < 1e-10, "{}", out.value[0] - exact);
    }

    #[test]
    fn refines_endpoint_singularity() {
        // int_0^1 sqrt(x) dx = 2/3; the coarse mesh must be bisected near 0
        let out = integrate(|x| [x.sqrt()], 0.0, 1.0, &opts(0.25)).unwrap();
        assert!((out.value[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!(out.panels > 4);
    }

    #[test]
    fn reports_non_convergence() {
        let mut o = opts(0.5);
        o.max_panels = 8;
        o.rel_tol = 1e-15;
        let err = integrate(|x| [1.0 / x.sqrt()], 0.0, 1.0, &o).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn rejects_oversized_initial_mesh() {
        let mut o = opts(1e-3);
        o.max_panels = 10;
        let err = integrate(|x| [x], 0.0, 1.0, &o).unwrap_err();
        assert!(matches!(err, Error::QuadratureMeshTooLarge { limit: 10, .. }));
    }

    #[test]
    fn cancelling_component_uses_l1_scale() {
        // int sin over a full period is zero; must still converge
        let out = integrate(
            |x| [x.sin(), x.cos().abs()],
            0.0,
            std::f64::consts::TAU,
            &opts(0.5),
        )
        .unwrap();
        assert!(out.value[0].abs() < 1e-12);
        assert!((out.value[1] - 4.0).abs() < 1e-9);
    }
}
