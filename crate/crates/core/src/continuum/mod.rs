//! Ohmic-continuum decoherence factors.
//!
//! For a bath with spectral density `J(omega) = A omega e^{-omega/Lambda}` and
//! couplings of common phase `theta`, the non-Hermitian decoherence exponent
//! is an integral over `omega` whose integrand is linear in
//! `sin(theta) cos(theta)` and `cos^2(theta)`. The quadrature therefore
//! integrates the three theta-independent parts together on one mesh and
//! recombines them; a theta sweep at fixed `(tau, t)` costs one integration
//! and `Gamma(theta) = Gamma(theta + pi)` holds to rounding.
//!
//! The upper limit defaults to `60 Lambda`. Past that point the integrand
//! is bounded by `e^{-60}` (about `8.8e-27`) times a factor polynomial in
//! `omega`, `T` and `t`, far below any practical absolute tolerance.

pub mod quadrature;

use std::f64::consts::TAU;

use crate::error::{ensure, Result};
use crate::special::omega_thermal_coth;
use quadrature::{integrate, AdaptiveOptions};

/// Below `SMALL_OMEGA_FRACTION * Lambda` the integrands use their leading
/// small-`omega` expansion instead of the `0 * inf` closed form.
pub const SMALL_OMEGA_FRACTION: f64 = 1e-6;

/// Ohmic bath with exponential cutoff, common coupling phase and
/// non-Hermiticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicSpectrum {
    pub amplitude: f64,
    pub cutoff: f64,
    pub theta: f64,
    pub temperature: f64,
    pub tau: f64,
}

impl OhmicSpectrum {
    pub fn new(amplitude: f64, cutoff: f64, theta: f64, temperature: f64, tau: f64) -> Result<Self> {
        let s = Self {
            amplitude,
            cutoff,
            theta,
            temperature,
            tau,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.amplitude.is_finite() && self.amplitude >= 0.0,
            "amplitude",
            self.amplitude,
            "amplitude must be finite and >= 0",
        )?;
        ensure(
            self.cutoff.is_finite() && self.cutoff > 0.0,
            "cutoff",
            self.cutoff,
            "cutoff must be > 0",
        )?;
        ensure(
            self.temperature.is_finite() && self.temperature >= 0.0,
            "temperature",
            self.temperature,
            "temperature must be finite and >= 0",
        )?;
        ensure(self.theta.is_finite(), "theta", self.theta, "theta must be finite")?;
        ensure(self.tau.is_finite(), "tau", self.tau, "tau must be finite")
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }
}

/// Tolerances and mesh controls for the continuum integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper integration limit; `None` means `60 * cutoff`.
    pub omega_max: Option<f64>,
    pub min_panels_per_oscillation: usize,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            omega_max: None,
            min_panels_per_oscillation: 8,
            max_subdivisions: 2_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        ensure(self.rel_tol > 0.0, "rel_tol", self.rel_tol, "must be > 0")?;
        ensure(self.abs_tol > 0.0, "abs_tol", self.abs_tol, "must be > 0")?;
        ensure(
            self.min_panels_per_oscillation >= 4,
            "min_panels_per_oscillation",
            self.min_panels_per_oscillation as f64,
            "must be >= 4",
        )?;
        if let Some(w) = self.omega_max {
            ensure(w.is_finite() && w > 0.0, "omega_max", w, "must be > 0")?;
        }
        Ok(())
    }

    pub fn upper_limit(&self, cutoff: f64) -> f64 {
        self.omega_max.unwrap_or(60.0 * cutoff)
    }

    /// `min(Lambda/8, 2pi / (m max(t,1) sqrt(1+4tau^2)))`
    fn initial_width(&self, cutoff: f64, tau: f64, t: f64) -> f64 {
        let rate = t.max(1.0) * (1.0 + 4.0 * tau * tau).sqrt();
        (cutoff / 8.0).min(TAU / (self.min_panels_per_oscillation as f64 * rate))
    }

    fn options(&self, cutoff: f64, tau: f64, t: f64) -> AdaptiveOptions {
        AdaptiveOptions {
            initial_width: self.initial_width(cutoff, tau, t),
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_panels: self.max_subdivisions,
        }
    }
}

/// `J(omega) = A omega e^{-omega/Lambda}`.
pub fn spectral_density(omega: f64, amplitude: f64, cutoff: f64) -> Result<f64> {
    ensure(omega >= 0.0, "omega", omega, "frequency must be >= 0")?;
    ensure(cutoff > 0.0, "cutoff", cutoff, "cutoff must be > 0")?;
    Ok(amplitude * omega * (-omega / cutoff).exp())
}

/// Theta-independent parts of the non-Hermitian integrand at one frequency:
/// the full integrand is `base + sin(theta)cos(theta) cross + cos^2(theta) anisotropic`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandParts {
    pub base: f64,
    pub cross: f64,
    pub anisotropic: f64,
}

impl IntegrandParts {
    pub fn combine(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.base + s * c * self.cross + c * c * self.anisotropic
    }

    fn as_array(&self) -> [f64; 3] {
        [self.base, self.cross, self.anisotropic]
    }
}

pub fn integrand_parts(omega: f64, spec: &OhmicSpectrum, t: f64) -> IntegrandParts {
    let a = spec.amplitude;
    let tau2 = spec.tau * spec.tau;
    let stretch = (1.0 + 4.0 * tau2).sqrt();
    let damping = (-omega / spec.cutoff).exp();
    let wc = omega_thermal_coth(omega, spec.temperature);

    if omega < SMALL_OMEGA_FRACTION * spec.cutoff {
        // Omega t << 1: sin(Omega t) ~ Omega t, sin(Omega t / 2) ~ Omega t / 2
        let lead = 2.0 * a * damping * wc;
        return IntegrandParts {
            base: lead * t * t,
            cross: lead * 4.0 * tau2 * omega * t * t * t,
            anisotropic: lead * 2.0 * tau2 * (1.0 + 2.0 * tau2) * omega * omega * t.powi(4),
        };
    }

    let big = omega * stretch;
    let big2 = big * big;
    let prefactor = 2.0 * a * damping * wc / (big2 * big2);
    let sn = (big * t).sin();
    let s = (0.5 * big * t).sin();
    let s2 = s * s;
    let quartic = omega * omega * s2 * s2;
    IntegrandParts {
        base: prefactor * (big2 * sn * sn + 4.0 * quartic),
        cross: prefactor * 16.0 * tau2 * omega * big * sn * s2,
        anisotropic: prefactor * 32.0 * tau2 * (1.0 + 2.0 * tau2) * quartic,
    }
}

/// Integrand of the non-Hermitian decoherence exponent at frequency `omega`.
pub fn gamma_integrand_nh(omega: f64, spec: &OhmicSpectrum, t: f64) -> f64 {
    integrand_parts(omega, spec, t).combine(spec.theta)
}

/// Integrand of the ordinary spin-boson exponent,
/// `4 A e^{-omega/Lambda} (1 - cos(omega t)) coth(omega/2T) / omega`.
pub fn gamma_integrand_hermitian(
    omega: f64,
    amplitude: f64,
    cutoff: f64,
    temperature: f64,
    t: f64,
) -> f64 {
    let damping = (-omega / cutoff).exp();
    let wc = omega_thermal_coth(omega, temperature);
    if omega < SMALL_OMEGA_FRACTION * cutoff {
        return 2.0 * amplitude * damping * wc * t * t;
    }
    let s = (0.5 * omega * t).sin();
    // 1 - cos(x) = 2 sin^2(x/2)
    8.0 * amplitude * damping * s * s * wc / (omega * omega)
}

/// Integrated theta-independent parts; `gamma(theta)` recombines them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaComponents {
    pub base: f64,
    pub cross: f64,
    pub anisotropic: f64,
    pub panels: usize,
}

impl GammaComponents {
    pub fn gamma(&self, theta: f64) -> f64 {
        let parts = IntegrandParts {
            base: self.base,
            cross: self.cross,
            anisotropic: self.anisotropic,
        };
        parts.combine(theta).max(0.0)
    }
}

fn check_time(t: f64) -> Result<()> {
    ensure(t.is_finite() && t >= 0.0, "t", t, "time must be finite and >= 0")
}

/// Integrates the three parts of the non-Hermitian integrand for the
/// spectrum's `(A, Lambda, T, tau)`; its `theta` is ignored.
pub fn gamma_components(spec: &OhmicSpectrum, t: f64, quad: &QuadratureSpec) -> Result<GammaComponents> {
    spec.validate()?;
    quad.validate()?;
    check_time(t)?;
    let upper = quad.upper_limit(spec.cutoff);
    let out = integrate(
        |w| integrand_parts(w, spec, t).as_array(),
        0.0,
        upper,
        &quad.options(spec.cutoff, spec.tau, t),
    )?;
    Ok(GammaComponents {
        base: out.value[0],
        cross: out.value[1],
        anisotropic: out.value[2],
        panels: out.panels,
    })
}

/// Non-Hermitian Ohmic decoherence exponent `Gamma(t)`.
pub fn gamma_continuum_nh(spec: &OhmicSpectrum, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(gamma_components(spec, t, quad)?.gamma(spec.theta))
}

/// Ordinary (Hermitian bath) Ohmic decoherence exponent `gamma(t)`.
pub fn gamma_hermitian(
    amplitude: f64,
    cutoff: f64,
    temperature: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    OhmicSpectrum::new(amplitude, cutoff, 0.0, temperature, 0.0)?;
    quad.validate()?;
    check_time(t)?;
    let out = integrate(
        |w| [gamma_integrand_hermitian(w, amplitude, cutoff, temperature, t)],
        0.0,
        quad.upper_limit(cutoff),
        &quad.options(cutoff, 0.0, t),
    )?;
    Ok(out.value[0].max(0.0))
}
