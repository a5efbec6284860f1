//! Hyperbolic helpers shared by the discrete and continuum engines.

/// Below this argument `coth` switches to its Laurent series.
const COTH_SERIES_CUTOFF: f64 = 1e-4;

/// `coth(x)` for `x > 0`, using `1/x + x/3 - x^3/45` near the pole.
pub fn coth(x: f64) -> f64 {
    if x < COTH_SERIES_CUTOFF {
        1.0 / x + x / 3.0 - x * x * x / 45.0
    } else {
        1.0 / x.tanh()
    }
}

/// Thermal occupation factor `coth(omega / 2T)`; exactly 1 at `T = 0`.
pub fn thermal_coth(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        1.0
    } else {
        coth(omega / (2.0 * temperature))
    }
}

/// `omega * coth(omega / 2T)`, finite as `omega -> 0` (limit `2T`).
pub fn omega_thermal_coth(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return omega;
    }
    let x = omega / (2.0 * temperature);
    if x < COTH_SERIES_CUTOFF {
        // x coth x = 1 + x^2/3 - x^4/45
        let x2 = x * x;
        2.0 * temperature * (1.0 + x2 / 3.0 - x2 * x2 / 45.0)
    } else {
        omega / x.tanh()
    }
}
