//! Brute-force reference values for the Ohmic decoherence integrals.
//!
//! Uniform grid over `[0, upper]`, composite trapezoid plus the Simpson
//! (one Richardson step) value from the same nodes. The integrand is written
//! out here from scratch, including its `omega -> 0` limit, and shares no
//! code with the library.

#![allow(dead_code)]

#[derive(Debug, Clone, Copy)]
pub struct Reference {
    pub trapezoid: f64,
    pub simpson: f64,
}

impl Reference {
    /// Relative gap between trapezoid and Simpson, a proxy for the grid error.
    pub fn spread(&self) -> f64 {
        (self.trapezoid - self.simpson).abs() / self.simpson.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Bath {
    pub amplitude: f64,
    pub cutoff: f64,
    pub temperature: f64,
}

pub const INTERVALS: usize = 10_000_000;

fn coth_weight(w: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        1.0
    } else {
        1.0 / (w / (2.0 * temperature)).tanh()
    }
}

/// Three theta-free pieces: the integrand is `p0 + sin cos p1 + cos^2 p2`.
fn nh_pieces(bath: &Bath, tau: f64, t: f64, w: f64) -> [f64; 3] {
    if w == 0.0 {
        // 2 A w t^2 coth(w/2T) -> 4 A T t^2
        return [4.0 * bath.amplitude * bath.temperature * t * t, 0.0, 0.0];
    }
    let big = w * (1.0 + 4.0 * tau * tau).sqrt();
    let pref = 2.0 * bath.amplitude * w * (-w / bath.cutoff).exp() / big.powi(4)
        * coth_weight(w, bath.temperature);
    let full = (big * t).sin();
    let half = (big * t / 2.0).sin();
    let h4 = 4.0 * w * w * half.powi(4);
    [
        pref * (big * big * full * full + h4),
        pref * 16.0 * tau * tau * w * big * full * half * half,
        pref * h4 * 8.0 * tau * tau * (1.0 + 2.0 * tau * tau),
    ]
}

fn hermitian_piece(bath: &Bath, t: f64, w: f64) -> [f64; 1] {
    if w == 0.0 {
        return [4.0 * bath.amplitude * bath.temperature * t * t];
    }
    [4.0 * bath.amplitude * (-w / bath.cutoff).exp() * (1.0 - (w * t).cos())
        * coth_weight(w, bath.temperature)
        / w]
}

/// Trapezoid and Simpson sums for each component; `intervals` must be even.
fn rules<const K: usize>(f: impl Fn(f64) -> [f64; K], upper: f64, intervals: usize) -> [Reference; K] {
    assert!(intervals % 2 == 0);
    let h = upper / intervals as f64;
    let mut trap = [0.0; K];
    let mut simp = [0.0; K];
    let mut chunk_trap = [0.0; K];
    let mut chunk_simp = [0.0; K];
    for i in 0..=intervals {
        let v = f(i as f64 * h);
        let (wt, ws) = if i == 0 || i == intervals {
            (0.5, 1.0)
        } else if i % 2 == 1 {
            (1.0, 4.0)
        } else {
            (1.0, 2.0)
        };
        for k in 0..K {
            chunk_trap[k] += wt * v[k];
            chunk_simp[k] += ws * v[k];
        }
        if i % 4096 == 0 {
            for k in 0..K {
                trap[k] += chunk_trap[k];
                simp[k] += chunk_simp[k];
            }
            chunk_trap = [0.0; K];
            chunk_simp = [0.0; K];
        }
    }
    std::array::from_fn(|k| Reference {
        trapezoid: (trap[k] + chunk_trap[k]) * h,
        simpson: (simp[k] + chunk_simp[k]) * h / 3.0,
    })
}

fn combine(p: &[Reference; 3], theta: f64) -> Reference {
    let (s, c) = theta.sin_cos();
    let mix = |f: fn(&Reference) -> f64| f(&p[0]) + s * c * f(&p[1]) + c * c * f(&p[2]);
    Reference {
        trapezoid: mix(|r| r.trapezoid),
        simpson: mix(|r| r.simpson),
    }
}

/// Non-Hermitian exponent at each `theta`, sharing one pass over the grid.
pub fn gamma_nh(bath: &Bath, tau: f64, t: f64, thetas: &[f64], intervals: usize) -> Vec<Reference> {
    let pieces = rules(|w| nh_pieces(bath, tau, t, w), 60.0 * bath.cutoff, intervals);
    thetas.iter().map(|&th| combine(&pieces, th)).collect()
}

/// Ordinary spin-boson exponent.
pub fn gamma_hermitian(bath: &Bath, t: f64, intervals: usize) -> Reference {
    rules(|w| hermitian_piece(bath, t, w), 60.0 * bath.cutoff, intervals)[0]
}
