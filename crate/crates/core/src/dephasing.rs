//! Closed-form dephasing engine for a qubit coupled to a discrete bath of
//! non-Hermitian oscillators.
//!
//! Everything here uses `hbar = k_B = 1`, so temperatures share the unit of
//! the mode frequencies.

use std::f64::consts::TAU;
use std::io::Read;
use std::path::Path;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{ensure, Error, Result};
use crate::special::thermal_coth;

/// Hermiticity, trace and positivity tolerance for [`QubitState`].
pub const QUBIT_STATE_TOL: f64 = 1e-12;

/// System-bath coupling `g = |g| e^{i theta}`, stored in polar form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    magnitude: f64,
    phase: f64,
}

impl Coupling {
    /// The phase is reduced into `[0, 2pi)`.
    pub fn new(magnitude: f64, phase: f64) -> Result<Self> {
        ensure(
            magnitude.is_finite() && magnitude >= 0.0,
            "magnitude",
            magnitude,
            "coupling magnitude must be finite and >= 0",
        )?;
        ensure(phase.is_finite(), "phase", phase, "coupling phase must be finite")?;
        let mut phase = phase.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2pi for tiny negative inputs
        if phase >= TAU {
            phase = 0.0;
        }
        Ok(Self { magnitude, phase })
    }

    pub fn from_complex(g: Complex64) -> Result<Self> {
        let (r, theta) = g.to_polar();
        Self::new(r, theta)
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// `Re[g] = |g| cos(theta)`
    pub fn re(&self) -> f64 {
        self.magnitude * self.phase.cos()
    }

    /// `Im[g] = |g| sin(theta)`
    pub fn im(&self) -> f64 {
        self.magnitude * self.phase.sin()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// One bath oscillator with frequency `omega` and its coupling to the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub omega: f64,
    pub coupling: Coupling,
}

impl BathMode {
    pub fn new(omega: f64, coupling: Coupling) -> Result<Self> {
        ensure(
            omega.is_finite() && omega > 0.0,
            "omega",
            omega,
            "mode frequency must be > 0",
        )?;
        Ok(Self { omega, coupling })
    }
}

/// A finite set of bath modes in a thermal state at `temperature`, with
/// non-Hermiticity `tau` shared by every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath {
    modes: Vec<BathMode>,
    temperature: f64,
    tau: f64,
}

impl DiscreteBath {
    pub fn new(modes: Vec<BathMode>, temperature: f64, tau: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidState("a discrete bath needs at least one mode".into()));
        }
        ensure(
            temperature.is_finite() && temperature >= 0.0,
            "temperature",
            temperature,
            "temperature must be finite and >= 0",
        )?;
        ensure(tau.is_finite(), "tau", tau, "tau must be finite")?;
        Ok(Self {
            modes,
            temperature,
            tau,
        })
    }

    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Same modes and temperature, different non-Hermiticity.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.modes.clone(), self.temperature, tau)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.modes.clone(), temperature, self.tau)
    }

    /// Reads the `omega,g_abs,theta` CSV format, one mode per row.
    pub fn modes_from_csv<R: Read>(reader: R) -> Result<Vec<BathMode>> {
        #[derive(Deserialize)]
        struct Row {
            omega: f64,
            g_abs: f64,
            theta: f64,
        }

        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::BathFile(e.to_string()))?
            .clone();
        let expected = ["omega", "g_abs", "theta"];
        if headers.len() != expected.len() || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(Error::BathFile(format!(
                "expected header `omega,g_abs,theta`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }

        let mut modes = Vec::new();
        for (line, row) in rdr.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| Error::BathFile(format!("row {}: {e}", line + 1)))?;
            let coupling = Coupling::new(row.g_abs, row.theta)?;
            modes.push(BathMode::new(row.omega, coupling)?);
        }
        if modes.is_empty() {
            return Err(Error::BathFile("no modes listed".into()));
        }
        Ok(modes)
    }

    pub fn modes_from_path(path: impl AsRef<Path>) -> Result<Vec<BathMode>> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::BathFile(format!("{}: {e}", path.display())))?;
        Self::modes_from_csv(std::io::BufReader::new(file))
    }
}

/// Bare qubit splitting. It drops out of every coherence modulus, but the
/// exact oracle carries it through the full Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitSystem {
    pub omega0: f64,
}

impl QubitSystem {
    pub fn new(omega0: f64) -> Result<Self> {
        ensure(
            omega0.is_finite() && omega0 > 0.0,
            "omega0",
            omega0,
            "qubit splitting must be > 0",
        )?;
        Ok(Self { omega0 })
    }
}

/// Validated single-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    rho: Matrix2<Complex64>,
}

impl QubitState {
    pub fn new(rho: Matrix2<Complex64>) -> Result<Self> {
        let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(herm <= QUBIT_STATE_TOL) {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:.3e})")));
        }
        let trace = rho.trace();
        if !((trace - Complex64::new(1.0, 0.0)).norm() <= QUBIT_STATE_TOL) {
            return Err(Error::InvalidState(format!("trace {trace} != 1")));
        }
        let a = rho[(0, 0)].re;
        let d = rho[(1, 1)].re;
        let b = rho[(0, 1)].norm();
        let lowest = 0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt();
        if lowest < -QUBIT_STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(Self { rho })
    }

    /// `|+><+|`, every entry 1/2.
    pub fn plus() -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self {
            rho: Matrix2::new(h, h, h, h),
        }
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.rho
    }

    pub fn coherence(&self) -> Complex64 {
        self.rho[(0, 1)]
    }
}

/// Renormalised frequency `Omega = omega sqrt(1 + 4 tau^2)`.
pub fn big_omega(omega: f64, tau: f64) -> Result<f64> {
    check_omega(omega)?;
    Ok(omega * (1.0 + 4.0 * tau * tau).sqrt())
}

fn check_omega(omega: f64) -> Result<()> {
    ensure(
        omega.is_finite() && omega > 0.0,
        "omega",
        omega,
        "frequency must be > 0",
    )
}

fn check_time(t: f64) -> Result<()> {
    ensure(t.is_finite() && t >= 0.0, "t", t, "time must be finite and >= 0")
}

/// Displacement amplitude of the ordinary oscillator bath,
/// `xi(t) = (g / omega) (1 - e^{i omega t})`.
pub fn xi_hermitian(g: Coupling, omega: f64, t: f64) -> Result<Complex64> {
    check_omega(omega)?;
    check_time(t)?;
    let phase = Complex64::new(0.0, omega * t).exp();
    Ok(g.to_complex() / omega * (Complex64::new(1.0, 0.0) - phase))
}

/// Displacement amplitude with the non-Hermitian bath:
///
/// `xi(t) = 8 omega sin^2(Omega t/2) / Omega^2 * (g/4 + tau^2 Re g) - i g sin(Omega t) / Omega`.
pub fn xi_non_hermitian(g: Coupling, omega: f64, tau: f64, t: f64) -> Result<Complex64> {
    let big = big_omega(omega, tau)?;
    check_time(t)?;
    let half = (0.5 * big * t).sin();
    let gc = g.to_complex();
    let envelope = 8.0 * omega * half * half / (big * big);
    let real_shift = Complex64::new(tau * tau * g.re(), 0.0);
    Ok((gc / 4.0 + real_shift) * envelope - Complex64::i() * gc * ((big * t).sin() / big))
}

/// Decoherence exponent of a single mode, without the thermal factor.
fn mode_gamma_bare(mode: &BathMode, tau: f64, t: f64) -> f64 {
    let omega = mode.omega;
    let tau2 = tau * tau;
    let big = omega * (1.0 + 4.0 * tau2).sqrt();
    let s = (0.5 * big * t).sin();
    let s2 = s * s;
    let sn = (big * t).sin();
    let g2 = mode.coupling.magnitude * mode.coupling.magnitude;
    let re = mode.coupling.re();
    let im = mode.coupling.im();
    let big2 = big * big;

    let cross = 32.0 * tau2 * omega * re * im * sn * s2 / (big2 * big);
    let quartic =
        8.0 * omega * omega * s2 * s2 * (g2 + 8.0 * tau2 * re * re * (1.0 + 2.0 * tau2)) / (big2 * big2);
    let direct = 2.0 * g2 * sn * sn / big2;
    cross + quartic + direct
}

/// Decoherence exponent `Gamma(t)` of a discrete bath, summed mode by mode in
/// sequence order.
pub fn gamma_discrete(bath: &DiscreteBath, t: f64) -> Result<f64> {
    check_time(t)?;
    let total: f64 = bath
        .modes
        .iter()
        .map(|m| mode_gamma_bare(m, bath.tau, t) * thermal_coth(m.omega, bath.temperature))
        .sum();
    Ok(total.max(0.0))
}

/// `e^{-Gamma(t)}`, the modulus of the qubit coherence relative to `t = 0`.
pub fn coherence_factor(bath: &DiscreteBath, t: f64) -> Result<f64> {
    Ok((-gamma_discrete(bath, t)?).exp())
}

/// Pure dephasing map: populations fixed, coherences scaled by `e^{-gamma}`.
pub fn evolve_qubit(initial: &QubitState, gamma: f64) -> Result<QubitState> {
    ensure(gamma >= 0.0, "gamma", gamma, "decoherence exponent must be >= 0")?;
    let decay = (-gamma).exp();
    let mut rho = initial.rho;
    rho[(0, 1)] *= decay;
    rho[(1, 0)] *= decay;
    Ok(QubitState { rho })
}
