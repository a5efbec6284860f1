//! Two-qubit entanglement: Wootters concurrence and entanglement of formation.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{ensure, Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

/// Validated 4x4 two-qubit density matrix in the `|00>, |01>, |10>, |11>` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: Matrix4<Complex64>,
}

impl TwoQubitState {
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(herm <= HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:.3e})")));
        }
        let trace = rho.trace();
        if !((trace - Complex64::new(1.0, 0.0)).norm() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {trace} != 1")));
        }
        let hermitian_part = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let lowest = SymmetricEigen::new(hermitian_part).eigenvalues.min();
        if lowest < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(Self { rho })
    }

    /// `|psi><psi|` for a (not necessarily normalised) pure state.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(psi);
        let norm = v.norm();
        ensure(norm > 0.0, "norm", norm, "state vector must be nonzero")?;
        let v = v / Complex64::new(norm, 0.0);
        Self::new(v * v.adjoint())
    }

    /// `|Phi+> = (|00> + |11>) / sqrt(2)`.
    pub fn bell_phi_plus() -> Self {
        dephased_bell(0.0).expect("gamma = 0 is valid")
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.rho
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub concurrence: f64,
    /// Square roots of the eigenvalues of `R`, descending.
    pub lambdas: [f64; 4],
}

/// `sigma_y (x) sigma_y` in the computational basis: the anti-diagonal `(-1, 1, 1, -1)`.
fn spin_flip() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// Hermitian square root of a positive semidefinite matrix.
fn sqrt_psd(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*m);
    let v = eig.eigenvectors;
    let d = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    v * Matrix4::from_diagonal(&d) * v.adjoint()
}

/// Wootters concurrence `C = max(0, l1 - l2 - l3 - l4)`.
///
/// The `l_i` are the square roots of the eigenvalues of
/// `R = rho (sy x sy) rho* (sy x sy)`. They are taken here as the singular
/// values of `sqrt(rho) (sy x sy) sqrt(rho)* (sy x sy)`, which are the same
/// numbers but avoid square roots of tiny, noisy eigenvalues of `R`.
pub fn concurrence(state: &TwoQubitState) -> ConcurrenceResult {
    let flip = spin_flip();
    let root = sqrt_psd(&state.rho);
    let m = root * flip * root.conjugate() * flip;

    let mut lambdas = [0.0; 4];
    for (l, s) in lambdas.iter_mut().zip(m.singular_values().iter()) {
        *l = *s;
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let concurrence = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    ConcurrenceResult {
        concurrence,
        lambdas,
    }
}

/// `|Phi+>` after one qubit has dephased by `e^{-gamma}`.
pub fn dephased_bell(gamma: f64) -> Result<TwoQubitState> {
    ensure(gamma >= 0.0, "gamma", gamma, "decoherence exponent must be >= 0")?;
    let half = Complex64::new(0.5, 0.0);
    let corner = Complex64::new(0.5 * (-gamma).exp(), 0.0);
    let mut rho = Matrix4::zeros();
    rho[(0, 0)] = half;
    rho[(3, 3)] = half;
    rho[(0, 3)] = corner;
    rho[(3, 0)] = corner;
    Ok(TwoQubitState { rho })
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Two-qubit entanglement of formation `h((1 + sqrt(1 - C^2)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    ensure(
        (0.0..=1.0).contains(&c),
        "concurrence",
        c,
        "concurrence must lie in [0, 1]",
    )?;
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    Ok(binary_entropy(x).clamp(0.0, 1.0))
}
