//! Fock-truncated operators for one non-Hermitian bath oscillator.
//!
//! Units are `m = hbar = 1`, so the spring constant is `omega^2` and the
//! dimensional non-Hermiticity is `tau / omega`. With
//! `x = (a + a^dag) / sqrt(2 omega)` and `p = i sqrt(omega/2) (a^dag - a)`
//! the bath Hamiltonian `p^2/2 + omega^2 x^2/2 + 2i tau omega p x` becomes
//! `omega (a^dag a + 1/2) + tau omega (a^2 - a^dag^2 + 1)`, and the metric
//! `exp(tau p^2 / omega)` becomes `exp(-(tau/2) (a - a^dag)^2)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{ensure, Error, Result};

/// One oscillator truncated to its lowest `fock_dim` number states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedMode {
    pub omega: f64,
    pub tau: f64,
    pub fock_dim: usize,
}

impl TruncatedMode {
    pub fn new(omega: f64, tau: f64, fock_dim: usize) -> Result<Self> {
        ensure(
            omega.is_finite() && omega > 0.0,
            "omega",
            omega,
            "mode frequency must be > 0",
        )?;
        ensure(tau.is_finite(), "tau", tau, "tau must be finite")?;
        ensure(fock_dim >= 2, "fock_dim", fock_dim as f64, "need at least 2 Fock states")?;
        Ok(Self {
            omega,
            tau,
            fock_dim,
        })
    }

    /// `Omega = omega sqrt(1 + 4 tau^2)`
    pub fn renormalized_frequency(&self) -> f64 {
        self.omega * (1.0 + 4.0 * self.tau * self.tau).sqrt()
    }

    /// Exact level `n` of the untruncated bath, `Omega (n + 1/2) + omega tau`.
    pub fn exact_level(&self, n: usize) -> f64 {
        self.renormalized_frequency() * (n as f64 + 0.5) + self.omega * self.tau
    }
}

/// Annihilation operator: `<n-1| a |n> = sqrt(n)`.
pub fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 })
}

/// `<n| a^2 |n+2> = sqrt((n+1)(n+2))`, exact on the truncated block.
fn lower_two(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 2 {
            ((r + 1) as f64 * (r + 2) as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// `omega (a^dag a + 1/2) + tau omega (a^2 - a^dag^2 + 1)`.
///
/// Every entry is real in the Fock basis; the matrix is non-symmetric for
/// `tau != 0`.
pub fn bath_hamiltonian_nh(mode: &TruncatedMode) -> DMatrix<f64> {
    let n = mode.fock_dim;
    let (w, tau) = (mode.omega, mode.tau);
    let a2 = lower_two(n);
    let mut h = (&a2 - a2.transpose()) * (tau * w);
    for k in 0..n {
        h[(k, k)] = w * (k as f64 + 0.5) + tau * w;
    }
    h
}

/// Hermitian equivalent `omega [a^dag a + 1/2 + tau - tau^2 (a - a^dag)^2]`.
pub fn bath_hamiltonian_h(mode: &TruncatedMode) -> DMatrix<f64> {
    let n = mode.fock_dim;
    let (w, tau) = (mode.omega, mode.tau);
    // (a - a^dag)^2 = a^2 + a^dag^2 - (2 a^dag a + 1)
    let a2 = lower_two(n);
    let mut h = (&a2 + a2.transpose()) * (-tau * tau * w);
    for k in 0..n {
        let kk = k as f64;
        h[(k, k)] = w * (kk + 0.5 + tau) + tau * tau * w * (2.0 * kk + 1.0);
    }
    h
}

/// Eigenvalues of the truncated non-Hermitian Hamiltonian, by ascending real part.
pub fn nh_spectrum(mode: &TruncatedMode) -> Vec<Complex64> {
    let mut ev: Vec<Complex64> = bath_hamiltonian_nh(mode)
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re));
    ev
}

/// `x^2` in units of `1/omega` built from the truncated position operator,
/// `((a + a^dag)/sqrt 2)^2`. Every entry is nonnegative.
fn position_squared(dim: usize) -> DMatrix<f64> {
    let a = annihilation(dim);
    let x = (&a + a.transpose()) * std::f64::consts::FRAC_1_SQRT_2;
    &x * &x
}

/// `exp(m)` for an entrywise nonnegative matrix by scaling and squaring a
/// Taylor series. No cancellation occurs, so small entries keep full
/// relative accuracy even when the norm is huge.
fn expm_nonnegative(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.row_iter().map(|r| r.sum()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let y = m / 2f64.powi(squarings as i32);

    // ||y|| <= 1/2: thirty terms leave a remainder below 1e-40
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=30 {
        term = (&term * &y) / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-s S)` for symmetric positive semidefinite `S` and `s >= 0`; the
/// result has norm at most one, so eigendecomposition is stable.
fn expm_contracting(s_mat: &DMatrix<f64>, s: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(s_mat.clone());
    let v = &eig.eigenvectors;
    let d = eig.eigenvalues.map(|l| (-s * l.max(0.0)).exp());
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, c)] * d[c]);
    scaled * v.transpose()
}

/// Undo the `i^n` similarity relating `exp(-(s/2)(a-a^dag)^2)` to
/// `exp(s x^2)`: entry `(m, n)` picks up `(-1)^{(n-m)/2}`.
fn parity_signs(mut e: DMatrix<f64>) -> DMatrix<f64> {
    for c in 0..e.ncols() {
        for r in 0..e.nrows() {
            let d = c.abs_diff(r);
            if d % 4 == 2 {
                e[(r, c)] = -e[(r, c)];
            }
        }
    }
    e
}

/// `exp(-(s/2) (a - a^dag)^2)` on the truncated space.
fn metric_power(dim: usize, s: f64, tau_for_error: f64) -> Result<DMatrix<f64>> {
    if s == 0.0 {
        return Ok(DMatrix::identity(dim, dim));
    }
    let x2 = position_squared(dim);
    let e = if s > 0.0 {
        expm_nonnegative(&(x2 * s))
    } else {
        expm_contracting(&x2, -s)
    };
    if e.iter().any(|v| !v.is_finite()) {
        return Err(Error::MetricOverflow {
            tau: tau_for_error,
            fock_dim: dim,
        });
    }
    Ok(parity_signs(e))
}

/// Metric `eta = exp(-(tau/2)(a - a^dag)^2)`; identity at `tau = 0`.
pub fn metric(mode: &TruncatedMode) -> Result<DMatrix<f64>> {
    metric_power(mode.fock_dim, mode.tau, mode.tau)
}

/// `eta^{-1} = exp(+(tau/2)(a - a^dag)^2)`.
pub fn metric_inverse(mode: &TruncatedMode) -> Result<DMatrix<f64>> {
    metric_power(mode.fock_dim, -mode.tau, mode.tau)
}

/// Largest entry of `eta H_nh eta^{-1} - H_h` on the leading
/// `interior_dim x interior_dim` block. Rows near the truncation edge are
/// corrupted by the cut and excluded.
pub fn similarity_residual(mode: &TruncatedMode, interior_dim: usize) -> Result<f64> {
    ensure(
        interior_dim >= 1 && interior_dim * 4 <= mode.fock_dim,
        "interior_dim",
        interior_dim as f64,
        "interior block must satisfy 1 <= interior_dim <= fock_dim / 4",
    )?;
    let eta = metric(mode)?;
    let eta_inv = metric_inverse(mode)?;
    let transformed = eta * bath_hamiltonian_nh(mode) * eta_inv;
    let h = bath_hamiltonian_h(mode);
    let mut worst = 0.0f64;
    for c in 0..interior_dim {
        for r in 0..interior_dim {
            worst = worst.max((transformed[(r, c)] - h[(r, c)]).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_matrix_elements() {
        let a = annihilation(12);
        for n in 1..12 {
            assert!((a[(n - 1, n)] - (n as f64).sqrt()).abs() < 1e-15);
        }
        let a2 = lower_two(12);
        let sq = &a * &a;
        assert!((a2 - sq).amax() < 1e-13);
    }

    #[test]
    fn zero_tau_is_the_harmonic_oscillator() {
        let m = TruncatedMode::new(1.3, 0.0, 10).unwrap();
        let d = DMatrix::from_fn(10, 10, |r, c| if r == c { 1.3 * (r as f64 + 0.5) } else { 0.0 });
        assert_eq!(bath_hamiltonian_nh(&m), d);
        assert_eq!(bath_hamiltonian_h(&m), d);
        assert_eq!(metric(&m).unwrap(), DMatrix::identity(10, 10));
        assert_eq!(similarity_residual(&m, 2).unwrap(), 0.0);
    }

    #[test]
    fn nh_off_diagonal_entries() {
        let m = TruncatedMode::new(1.0, 0.25, 8).unwrap();
        let h = bath_hamiltonian_nh(&m);
        assert!((h[(0, 2)] - 0.25 * 2f64.sqrt()).abs() < 1e-15);
        assert!((h[(2, 0)] + 0.25 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn nh_matches_position_momentum_form() {
        // p^2/2 + w^2 x^2/2 + 2 i tau w p x with x = (a+a^dag)/sqrt(2w), p = i sqrt(w/2)(a^dag - a)
        let (w, tau, n): (f64, f64, usize) = (1.7, 0.3, 14);
        let a = annihilation(n).map(|v| Complex64::new(v, 0.0));
        let ad = a.transpose();
        let i = Complex64::i();
        let x = (&a + &ad) * Complex64::new(1.0 / (2.0 * w).sqrt(), 0.0);
        let p = (&ad - &a) * (i * (w / 2.0).sqrt());
        let h = &p * &p * Complex64::new(0.5, 0.0)
            + &x * &x * Complex64::new(0.5 * w * w, 0.0)
            + &p * &x * (i * 2.0 * tau * w);
        let m = TruncatedMode::new(w, tau, n).unwrap();
        let ours = bath_hamiltonian_nh(&m).map(|v| Complex64::new(v, 0.0));
        // products of truncated operators are exact away from the last row/column
        for r in 0..n - 2 {
            for c in 0..n - 2 {
                assert!((h[(r, c)] - ours[(r, c)]).norm() < 1e-12, "({r},{c})");
            }
        }
    }

    #[test]
    fn hermitian_equivalent_is_symmetric() {
        for tau in [-1.3, 0.2, 0.77] {
            let m = TruncatedMode::new(0.9, tau, 30).unwrap();
            let h = bath_hamiltonian_h(&m);
            assert!((&h - h.transpose()).amax() <= 1e-13);
        }
    }

    #[test]
    fn metric_is_positive_definite() {
        let m = TruncatedMode::new(1.0, 0.1, 80).unwrap();
        let eta = metric(&m).unwrap();
        assert!((&eta - eta.transpose()).amax() <= 1e-12 * eta.amax());
        // eta = exp(Hermitian); check positivity on its inverse, which is well conditioned
        let inv = metric_inverse(&m).unwrap();
        let ev = SymmetricEigen::new(inv.clone()).eigenvalues;
        assert!(ev.min() > 0.0);
        let prod = (&eta * &inv).view((0, 0), (20, 20)).into_owned();
        assert!((prod - DMatrix::<f64>::identity(20, 20)).amax() < 1e-9);
    }

    #[test]
    fn similarity_example() {
        let m = TruncatedMode::new(1.0, 0.1, 80).unwrap();
        let r80 = similarity_residual(&m, 20).unwrap();
        assert!(r80 <= 1e-8, "{r80}");
        let m160 = TruncatedMode::new(1.0, 0.1, 160).unwrap();
        let r160 = similarity_residual(&m160, 20).unwrap();
        // both sit on the round-off floor, which grows slowly with N
        assert!(r160 <= 1e-12, "{r160} vs {r80}");
        assert!(similarity_residual(&m, 21).is_err());
    }

    #[test]
    fn similarity_converges_under_doubling() {
        for tau in [0.1, 0.3] {
            let mut previous = f64::INFINITY;
            for n in [8, 16, 32, 64] {
                let r = similarity_residual(&TruncatedMode::new(1.0, tau, n).unwrap(), 2).unwrap();
                assert!(r < previous || r <= 1e-12, "tau {tau} N {n}: {r} after {previous}");
                previous = r;
            }
            assert!(previous <= 1e-12);
        }
    }

    #[test]
    fn low_levels_are_real() {
        let m = TruncatedMode::new(1.0, 0.3, 80).unwrap();
        let ev = nh_spectrum(&m);
        assert!((ev[0].re - 0.883_095_2).abs() < 1e-6, "{}", ev[0]);
        for (n, z) in ev.iter().take(5).enumerate() {
            assert!((z.re - m.exact_level(n)).abs() < 1e-6, "level {n}: {z}");
            assert!(z.im.abs() < 1e-8);
        }
    }
}
