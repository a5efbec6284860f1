//! Exact qubit-bath evolution on a truncated Fock space.
//!
//! The total Hamiltonian commutes with `sigma_z`, so it splits into two
//! bath-only branches `H_pm = pm omega0/2 + H_B pm sum_k (g_k a_k^dag + g_k^* a_k)`.
//! The qubit coherence is `rho01(t) = rho01(0) Tr[e^{-i H_+ t} rho_B e^{i H_- t}]`,
//! and both propagators come from Hermitian eigendecompositions.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::fock::{annihilation, bath_hamiltonian_h, TruncatedMode};
use crate::dephasing::{BathMode, QubitSystem};
use crate::error::{ensure, Error, Result};

/// Tail weight above which a truncated thermal state is flagged.
pub const THERMAL_TAIL_WARNING: f64 = 1e-10;

/// Thermal populations of the bare oscillator, renormalised on the
/// truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    pub populations: Vec<f64>,
    /// Weight of the untruncated distribution beyond the cut, `e^{-N omega / T}`.
    pub tail_weight: f64,
}

impl ThermalState {
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.populations))
    }

    pub fn truncation_warning(&self) -> bool {
        self.tail_weight > THERMAL_TAIL_WARNING
    }
}

/// `(1 - e^{-omega/T}) e^{-omega a^dag a / T}` restricted to `mode.fock_dim`
/// levels; `T = 0` gives the vacuum.
pub fn thermal_state(mode: &TruncatedMode, temperature: f64) -> Result<ThermalState> {
    ensure(
        temperature.is_finite() && temperature >= 0.0,
        "temperature",
        temperature,
        "temperature must be finite and >= 0",
    )?;
    let n = mode.fock_dim;
    if temperature == 0.0 {
        let mut populations = vec![0.0; n];
        populations[0] = 1.0;
        return Ok(ThermalState {
            populations,
            tail_weight: 0.0,
        });
    }
    let ratio = (-mode.omega / temperature).exp();
    let mut populations = Vec::with_capacity(n);
    let mut p = 1.0 - ratio;
    for _ in 0..n {
        populations.push(p);
        p *= ratio;
    }
    let total: f64 = populations.iter().sum();
    populations.iter_mut().for_each(|p| *p /= total);
    Ok(ThermalState {
        populations,
        tail_weight: ratio.powi(n as i32),
    })
}

/// Truncation and budget controls for [`exact_dephasing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockPlan {
    /// Starting Fock dimension for every mode; doubled until converged.
    pub initial_dim: usize,
    /// Largest total Hilbert dimension `2 * prod N_F` allowed.
    pub max_hilbert_dim: usize,
    /// Largest change under doubling accepted as converged.
    pub tolerance: f64,
}

impl Default for FockPlan {
    fn default() -> Self {
        Self {
            initial_dim: 40,
            max_hilbert_dim: 3200,
            tolerance: 1e-8,
        }
    }
}

/// Output of [`exact_dephasing`].
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingRun {
    /// `|rho01(t)| / |rho01(0)|` at each requested time.
    pub ratios: Vec<f64>,
    /// Per-mode Fock dimension of the reported run.
    pub fock_dim: usize,
    pub converged: bool,
    /// Largest change of any ratio in the last doubling.
    pub last_change: f64,
    /// Largest deviation of either branch's trace from one.
    pub branch_norm_error: f64,
    pub warnings: Vec<String>,
}

struct Branch {
    energies: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

fn kron_all(factors: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

fn embed(op: &DMatrix<Complex64>, slot: usize, dims: &[usize]) -> DMatrix<Complex64> {
    let factors: Vec<_> = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| if k == slot { op.clone() } else { DMatrix::identity(d, d) })
        .collect();
    kron_all(&factors)
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Bath Hamiltonian and coupling operator on the tensor-product space.
fn bath_operators(
    modes: &[BathMode],
    tau: f64,
    dim: usize,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let dims = vec![dim; modes.len()];
    let total: usize = dims.iter().product();
    let mut h_bath = DMatrix::<Complex64>::zeros(total, total);
    let mut coupling = DMatrix::<Complex64>::zeros(total, total);
    for (k, m) in modes.iter().enumerate() {
        let tm = TruncatedMode::new(m.omega, tau, dim)?;
        let h = to_complex(&bath_hamiltonian_h(&tm));
        let a = to_complex(&annihilation(dim));
        let g = m.coupling.to_complex();
        let v = a.transpose() * g + &a * g.conj();
        h_bath += embed(&h, k, &dims);
        coupling += embed(&v, k, &dims);
    }
    Ok((h_bath, coupling))
}

fn diagonalize(h: DMatrix<Complex64>) -> Branch {
    let eig = SymmetricEigen::new(h);
    Branch {
        energies: eig.eigenvalues.iter().copied().collect(),
        vectors: eig.eigenvectors,
    }
}

/// `sum_jk e^{-i a_j t} C_jk e^{i b_k t}`
fn phase_sum(c: &DMatrix<Complex64>, left: &[f64], right: &[f64], t: f64) -> Complex64 {
    let right_phase: Vec<Complex64> = right.iter().map(|e| Complex64::new(0.0, e * t).exp()).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (j, ej) in left.iter().enumerate() {
        let row: Complex64 = c.row(j).iter().zip(&right_phase).map(|(x, p)| x * p).sum();
        total += Complex64::new(0.0, -ej * t).exp() * row;
    }
    total
}

/// Coherence ratios at one fixed truncation.
fn run_fixed(
    system: &QubitSystem,
    modes: &[BathMode],
    tau: f64,
    temperature: f64,
    times: &[f64],
    dim: usize,
) -> Result<(Vec<f64>, f64, Vec<String>)> {
    let (h_bath, coupling) = bath_operators(modes, tau, dim)?;
    let n = h_bath.nrows();
    let shift = DMatrix::<Complex64>::identity(n, n) * Complex64::new(0.5 * system.omega0, 0.0);
    let plus = diagonalize(&h_bath + &coupling + &shift);
    let minus = diagonalize(&h_bath - &coupling - &shift);

    let mut warnings = Vec::new();
    let mut rho = DMatrix::<Complex64>::from_element(1, 1, Complex64::new(1.0, 0.0));
    for m in modes {
        let tm = TruncatedMode::new(m.omega, tau, dim)?;
        let th = thermal_state(&tm, temperature)?;
        if th.truncation_warning() {
            warnings.push(format!(
                "thermal tail weight {:.3e} beyond N_F = {dim} for omega = {}",
                th.tail_weight, m.omega
            ));
        }
        rho = rho.kronecker(&to_complex(&th.matrix()));
    }

    let vp_adj = plus.vectors.adjoint();
    let vm_adj = minus.vectors.adjoint();
    // Tr[V+ e^{-iE+ t} V+^dag rho V- e^{iE- t} V-^dag]
    let left = &vp_adj * &rho * &minus.vectors;
    let right = &vm_adj * &plus.vectors;
    let c = left.component_mul(&right.transpose());
    // branch norms Tr[U rho U^dag]
    let norm_plus = (&vp_adj * &rho * &plus.vectors).component_mul(&(&vp_adj * &plus.vectors).transpose());
    let norm_minus =
        (&vm_adj * &rho * &minus.vectors).component_mul(&(&vm_adj * &minus.vectors).transpose());

    let mut ratios = Vec::with_capacity(times.len());
    let mut norm_error = 0.0f64;
    for &t in times {
        ratios.push(phase_sum(&c, &plus.energies, &minus.energies, t).norm());
        for (nm, e) in [(&norm_plus, &plus.energies), (&norm_minus, &minus.energies)] {
            norm_error = norm_error.max((phase_sum(nm, e, e, t) - 1.0).norm());
        }
    }
    Ok((ratios, norm_error, warnings))
}

/// Exact coherence ratios `|rho01(t)| / |rho01(0)|` for a qubit dephasing
/// against `modes`, each truncated to the same Fock dimension. The
/// dimension doubles from `plan.initial_dim` until the ratios move by less
/// than `plan.tolerance`, or until the next doubling would exceed the
/// budget (then `converged` is false).
pub fn exact_dephasing(
    system: &QubitSystem,
    modes: &[BathMode],
    tau: f64,
    temperature: f64,
    times: &[f64],
    plan: &FockPlan,
) -> Result<DephasingRun> {
    if modes.is_empty() {
        return Err(Error::InvalidState("exact dephasing needs at least one mode".into()));
    }
    for &t in times {
        ensure(t.is_finite() && t >= 0.0, "t", t, "time must be finite and >= 0")?;
    }
    let hilbert = |dim: usize| -> usize {
        (0..modes.len()).fold(2usize, |acc, _| acc.saturating_mul(dim))
    };
    let check_budget = |dim: usize| -> Result<()> {
        let requested = hilbert(dim);
        if requested > plan.max_hilbert_dim {
            Err(Error::BudgetExceeded {
                requested,
                budget: plan.max_hilbert_dim,
            })
        } else {
            Ok(())
        }
    };

    let mut dim = plan.initial_dim.max(2);
    check_budget(dim)?;
    check_budget(2 * dim)?;
    let (mut ratios, mut norm_error, _) = run_fixed(system, modes, tau, temperature, times, dim)?;

    loop {
        let next = 2 * dim;
        let (next_ratios, next_norm, warnings) = run_fixed(system, modes, tau, temperature, times, next)?;
        let change = ratios
            .iter()
            .zip(&next_ratios)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ratios = next_ratios;
        norm_error = norm_error.max(next_norm);
        dim = next;
        let converged = change <= plan.tolerance;
        if converged || check_budget(2 * dim).is_err() {
            if !converged {
                log::warn!("Fock truncation not converged at N_F = {dim}: change {change:.3e}");
            }
            return Ok(DephasingRun {
                ratios,
                fock_dim: dim,
                converged,
                last_change: change,
                branch_norm_error: norm_error,
                warnings,
            });
        }
    }
}
