use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;
use ptdeco::dephasing::{
    big_omega, coherence_factor, evolve_qubit, gamma_discrete, xi_hermitian, xi_non_hermitian,
    BathMode, Coupling, DiscreteBath, QubitState,
};
use ptdeco::special::thermal_coth;

fn mode() -> impl Strategy<Value = BathMode> {
    (0.05f64..5.0, 0.0f64..1.0, 0.0f64..2.0 * PI)
        .prop_map(|(w, g, th)| BathMode::new(w, Coupling::new(g, th).unwrap()).unwrap())
}

fn bath() -> impl Strategy<Value = DiscreteBath> {
    (prop::collection::vec(mode(), 1..6), 0.0f64..10.0, -3.0f64..3.0)
        .prop_map(|(m, temp, tau)| DiscreteBath::new(m, temp, tau).unwrap())
}

/// `2 sum |xi_k|^2 coth(omega_k / 2T)` through the displacement amplitudes.
fn gamma_via_xi(b: &DiscreteBath, t: f64) -> f64 {
    b.modes()
        .iter()
        .map(|m| {
            let xi = xi_non_hermitian(m.coupling, m.omega, b.tau(), t).unwrap();
            2.0 * xi.norm_sqr() * thermal_coth(m.omega, b.temperature())
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_equals_amplitude_sum(b in bath(), t in 0.0f64..50.0) {
        let direct = gamma_discrete(&b, t).unwrap();
        let via = gamma_via_xi(&b, t);
        prop_assert!((direct - via).abs() <= 1e-12 * via.max(1e-300) + 1e-300,
            "{} vs {}", direct, via);
    }

    #[test]
    fn gamma_nonnegative_and_coherence_bounded(b in bath(), t in 0.0f64..50.0) {
        let g = gamma_discrete(&b, t).unwrap();
        prop_assert!(g >= 0.0);
        let c = coherence_factor(&b, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        // e^{-gamma} underflows to zero past gamma ~ 745
        prop_assert!(c > 0.0 || g > 700.0);
    }

    #[test]
    fn gamma_even_in_tau(b in bath(), t in 0.0f64..50.0) {
        let plus = gamma_discrete(&b, t).unwrap();
        let minus = gamma_discrete(&b.with_tau(-b.tau()).unwrap(), t).unwrap();
        prop_assert!((plus - minus).abs() <= 1e-12 * plus.max(1e-300));
    }

    #[test]
    fn single_mode_period(m in mode(), tau in -3.0f64..3.0, temp in 0.0f64..5.0, t in 0.0f64..20.0) {
        let b = DiscreteBath::new(vec![m], temp, tau).unwrap();
        let period = 2.0 * PI / big_omega(m.omega, tau).unwrap();
        let g0 = gamma_discrete(&b, t).unwrap();
        let g1 = gamma_discrete(&b, t + period).unwrap();
        // the period shift itself carries a rounding error of ~eps * t * Omega
        let slack = 1e-12 * g0.max(1e-300) + 1e-14 * (1.0 + t * m.omega) * m.coupling.magnitude().powi(2);
        prop_assert!((g0 - g1).abs() <= slack, "{} vs {}", g0, g1);
    }

    #[test]
    fn xi_vanishes_at_zero_time(m in mode(), tau in -3.0f64..3.0) {
        prop_assert_eq!(xi_non_hermitian(m.coupling, m.omega, tau, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn xi_reduces_to_hermitian(m in mode(), t in 0.0f64..50.0) {
        let nh = xi_non_hermitian(m.coupling, m.omega, 0.0, t).unwrap();
        let h = xi_hermitian(m.coupling, m.omega, t).unwrap();
        prop_assert!((nh - h).norm() <= 1e-12 * (1.0 + h.norm()));
    }

    #[test]
    fn evolution_keeps_a_valid_state(p in 0.0f64..1.0, phase in 0.0f64..2.0 * PI, frac in 0.0f64..1.0, gamma in 0.0f64..50.0) {
        // coherence magnitude up to the purity bound sqrt(p (1-p))
        let c = Complex64::from_polar(frac * (p * (1.0 - p)).sqrt(), phase);
        let rho = Matrix2::new(Complex64::new(p, 0.0), c, c.conj(), Complex64::new(1.0 - p, 0.0));
        let s = QubitState::new(rho).unwrap();
        let out = evolve_qubit(&s, gamma).unwrap();
        let m = out.matrix();
        prop_assert_eq!(m.trace(), rho.trace());
        prop_assert!((m - m.adjoint()).norm() <= 1e-12);
        let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
        prop_assert!(det >= -1e-12);
    }
}
