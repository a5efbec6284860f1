//! Acceptance run: one PASS/FAIL line per criterion with the measured value,
//! its pinned tolerance and the runtime against its budget. Exits non-zero if
//! any criterion fails.

#[path = "../../core/tests/support/riemann.rs"]
mod riemann;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use ptdeco::continuum::{gamma_continuum_nh, gamma_hermitian, OhmicSpectrum, QuadratureSpec};
use ptdeco::dephasing::{gamma_discrete, BathMode, Coupling, DiscreteBath};
use ptdeco::entanglement::{concurrence, dephased_bell, eof_from_concurrence, TwoQubitState};
use ptdeco::oracle::{
    nh_spectrum, run_validations, similarity_residual, OracleSettings, TruncatedMode,
};
use ptdeco::par;
use ptdeco_cli::eval::{Evaluator, Physical, Point};
use ptdeco_cli::search::crossover;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use riemann::{Bath, INTERVALS};

type Check = Result<(bool, String), String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn figure_eval() -> Evaluator {
    Evaluator {
        physical: Physical::FIGURE,
        quad: QuadratureSpec::default(),
    }
}

fn point(tau: f64, theta: f64, t: f64) -> Point {
    Point { tau, theta, t }
}

fn gammas(eval: &Evaluator, points: &[Point]) -> Result<Vec<f64>, String> {
    eval.gamma_nh(points).map_err(|e| e.to_string())
}

fn reduction_identity() -> Check {
    let quad = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a = rng.random_range(0.05..2.0);
        let cutoff = rng.random_range(0.05..2.0);
        let temp = rng.random_range(0.0..50.0);
        let t = rng.random_range(0.0..30.0);
        let theta = rng.random_range(0.0..2.0 * PI);
        let s = OhmicSpectrum::new(a, cutoff, theta, temp, 0.0).map_err(|e| e.to_string())?;
        let nh = gamma_continuum_nh(&s, t, &quad).map_err(|e| e.to_string())?;
        let h = gamma_hermitian(a, cutoff, temp, t, &quad).map_err(|e| e.to_string())?;
        worst = worst.max(if h == 0.0 { nh.abs() } else { rel(nh, h) });
    }
    Ok((worst <= 1e-8, format!("max rel {worst:.2e} (tol 1e-8)")))
}

/// Displacement amplitude written out directly from its closed form.
fn xi(g: Complex64, omega: f64, tau: f64, t: f64) -> Complex64 {
    let big = omega * (1.0 + 4.0 * tau * tau).sqrt();
    let s = (big * t / 2.0).sin();
    let real = 2.0 * omega * s * s / (big * big);
    (g + 4.0 * tau * tau * g.re) * real - Complex64::i() * g * (big * t).sin() / big
}

fn amplitude_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..6);
        let temp: f64 = rng.random_range(0.0..10.0);
        let tau = rng.random_range(-3.0..3.0);
        let t = rng.random_range(0.0..50.0);
        let mut modes = Vec::new();
        let mut expected = 0.0;
        for _ in 0..n {
            let omega: f64 = rng.random_range(0.05..5.0);
            let mag = rng.random_range(0.0..1.0);
            let theta = rng.random_range(0.0..2.0 * PI);
            let weight = if temp == 0.0 { 1.0 } else { 1.0 / (omega / (2.0 * temp)).tanh() };
            expected += 2.0 * xi(Complex64::from_polar(mag, theta), omega, tau, t).norm_sqr() * weight;
            modes.push(BathMode::new(omega, Coupling::new(mag, theta).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?);
        }
        let bath = DiscreteBath::new(modes, temp, tau).map_err(|e| e.to_string())?;
        let got = gamma_discrete(&bath, t).map_err(|e| e.to_string())?;
        if expected > 0.0 {
            worst = worst.max(rel(got, expected));
        }
    }
    Ok((worst <= 1e-12, format!("max rel {worst:.2e} (tol 1e-12)")))
}

fn oracle_certification() -> Check {
    let mut settings = Vec::new();
    for tau in [0.0, 0.2, 0.4] {
        for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
            settings.push(OracleSettings {
                modes: vec![BathMode::new(1.0, Coupling::new(0.1, theta).unwrap()).unwrap()],
                tau,
                ..OracleSettings::default()
            });
        }
    }
    let mut worst = 0.0f64;
    let mut all_converged = true;
    let mut dims = Vec::new();
    for r in run_validations(&settings) {
        let r = r.map_err(|e| e.to_string())?;
        worst = worst.max(r.dephasing_max_error);
        all_converged &= r.converged;
        dims.push(r.fock_dim_used);
    }
    let max_dim = dims.iter().max().copied().unwrap_or(0);
    Ok((
        all_converged && worst <= 1e-6,
        format!("max |exact - closed| {worst:.2e} (tol 1e-6), converged {all_converged}, fock dim <= {max_dim}"),
    ))
}

fn nh_spectrum_check() -> Check {
    let mode = TruncatedMode::new(1.0, 0.3, 80).map_err(|e| e.to_string())?;
    let levels = nh_spectrum(&mode);
    let big = 1.36f64.sqrt();
    let mut level_err = 0.0f64;
    let mut imag = 0.0f64;
    for (n, e) in levels.iter().take(5).enumerate() {
        level_err = level_err.max((e.re - (big * (n as f64 + 0.5) + 0.3)).abs());
        imag = imag.max(e.im.abs());
    }
    let sim = similarity_residual(&mode, 20).map_err(|e| e.to_string())?;
    Ok((
        level_err <= 1e-6 && imag <= 1e-8 && sim <= 1e-8,
        format!("level err {level_err:.2e} (tol 1e-6), max |Im| {imag:.2e} (tol 1e-8), similarity {sim:.2e} (tol 1e-8)"),
    ))
}

fn fig1a_ordering() -> Check {
    let eval = figure_eval();
    let g = gammas(&eval, &[point(2.0, FRAC_PI_2, 20.0), point(2.0, PI, 20.0)])?;
    let h = eval.gamma_hermitian(&[20.0]).map_err(|e| e.to_string())?[0];
    let (half, full) = (g[0], g[1]);
    Ok((
        -half > -h && -h > -full,
        format!("Gamma(pi/2) {half:.6e} < Gamma(hermitian) {h:.6e} < Gamma(pi) {full:.6e}"),
    ))
}

fn theta_periodicity() -> Check {
    let eval = Evaluator {
        physical: Physical {
            amplitude: 0.1,
            ..Physical::FIGURE
        },
        quad: QuadratureSpec::default(),
    };
    let mut points = Vec::new();
    for tau in [0.0, 0.5, 1.0, 2.0, 4.0] {
        for k in 0..72 {
            let theta = 2.0 * PI * k as f64 / 72.0;
            points.push(point(tau, theta, 20.0));
            points.push(point(tau, theta + PI, 20.0));
        }
    }
    let g = gammas(&eval, &points)?;
    let worst = g.chunks(2).map(|p| rel(p[1], p[0])).fold(0.0, f64::max);
    Ok((worst <= 1e-10, format!("max rel {worst:.2e} over 5 x 72 points (tol 1e-10)")))
}

fn fig2_trend() -> Check {
    let taus = [0.0, 1.0, 2.0, 4.0];
    let points: Vec<Point> = taus.iter().map(|&tau| point(tau, FRAC_PI_2, 20.0)).collect();
    let g = gammas(&figure_eval(), &points)?;
    let ok = g.windows(2).all(|w| w[1] < w[0]);
    let listed: Vec<String> = g.iter().map(|x| format!("{x:.4e}")).collect();
    Ok((ok, format!("Gamma over tau 0,1,2,4: {}", listed.join(", "))))
}

fn fig3a_crossover() -> Check {
    let eval = figure_eval();
    let theta = 2.0 * PI / 3.0;
    let late = crossover(&eval, theta, 120.0, 4.0).map_err(|e| e.to_string())?;
    let early = crossover(&eval, theta, 2.0, 4.0).map_err(|e| e.to_string())?;
    let late_ok = matches!(late, Some((tau, _)) if (1.0..=1.6).contains(&tau));
    let show = |c: Option<(f64, f64)>| c.map_or("none".to_string(), |(tau, _)| format!("{tau:.4}"));
    Ok((
        late_ok && early.is_none(),
        format!(
            "tau* at t=120: {} (want [1.0, 1.6]); at t=2: {} (want none)",
            show(late),
            show(early)
        ),
    ))
}

fn fig4_asymptote() -> Check {
    let eval = figure_eval();
    let taus = [0.0, 5.0, 10.0, 20.0];
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [2.0, 120.0] {
        let points: Vec<Point> = taus.iter().map(|&tau| point(tau, FRAC_PI_2, t)).collect();
        let g = gammas(&eval, &points)?;
        let ratio = g[3] / g[0];
        let monotone = g[1] > g[2] && g[2] > g[3];
        ok &= ratio <= 0.05 && monotone;
        parts.push(format!("t={t}: Gamma(20)/Gamma(0) {ratio:.4} (want <= 0.05), decreasing over 5,10,20 {monotone}"));
    }
    Ok((ok, parts.join("; ")))
}

fn haar_unitary(rng: &mut ChaCha8Rng) -> Matrix2<Complex64> {
    let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (Complex64::new(q[0], q[1]) / n, Complex64::new(q[2], q[3]) / n);
    Matrix2::new(a, -b.conj(), b, a.conj())
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

fn entanglement_layer() -> Check {
    let mut bell_err = 0.0f64;
    for g in [0.0, 0.5, 2.0, 10.0] {
        let c = concurrence(&dephased_bell(g).map_err(|e| e.to_string())?).concurrence;
        bell_err = bell_err.max((c - (-g as f64).exp()).abs());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut lu_err = 0.0f64;
    for i in 0..100 {
        let state = if i % 2 == 0 {
            let m = Matrix4::from_fn(|_, _| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)));
            let rho = m * m.adjoint();
            let rho = rho / rho.trace();
            TwoQubitState::new((rho + rho.adjoint()) * Complex64::new(0.5, 0.0)).map_err(|e| e.to_string())?
        } else {
            dephased_bell(0.02 * i as f64).map_err(|e| e.to_string())?
        };
        let u = kron(&haar_unitary(&mut rng), &haar_unitary(&mut rng));
        let r = u * state.matrix() * u.adjoint();
        let rotated = TwoQubitState::new((r + r.adjoint()) * Complex64::new(0.5, 0.0)).map_err(|e| e.to_string())?;
        lu_err = lu_err.max((concurrence(&state).concurrence - concurrence(&rotated).concurrence).abs());
    }

    let e0 = eof_from_concurrence(0.0).map_err(|e| e.to_string())?;
    let e1 = eof_from_concurrence(1.0).map_err(|e| e.to_string())?;
    let endpoints = e0 == 0.0 && e1 == 1.0;
    Ok((
        bell_err <= 1e-12 && lu_err <= 1e-10 && endpoints,
        format!("bell err {bell_err:.2e} (tol 1e-12), local-unitary err {lu_err:.2e} (tol 1e-10), eof(0)={e0}, eof(1)={e1}"),
    ))
}

fn riemann_grid() -> Check {
    let bath = Bath {
        amplitude: 1.0,
        cutoff: 0.1,
        temperature: 300.0,
    };
    let taus = [0.0, 0.5, 1.0, 2.0, 4.0];
    let thetas = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];
    let times = [2.0, 10.0, 20.0];
    let keys: Vec<(f64, f64)> = taus.iter().flat_map(|&tau| times.iter().map(move |&t| (tau, t))).collect();
    let references = par::map(&keys, |&(tau, t)| riemann::gamma_nh(&bath, tau, t, &thetas, INTERVALS));

    let points: Vec<Point> = keys
        .iter()
        .flat_map(|&(tau, t)| thetas.iter().map(move |&theta| point(tau, theta, t)))
        .collect();
    let got = gammas(&figure_eval(), &points)?;

    let mut worst = 0.0f64;
    let mut spread = 0.0f64;
    for (g, r) in got.iter().zip(references.iter().flatten()) {
        worst = worst.max(rel(*g, r.simpson));
        spread = spread.max(r.spread());
    }
    Ok((
        worst <= 1e-6,
        format!("max rel {worst:.2e} over 75 points (tol 1e-6), reference trapezoid/simpson spread {spread:.1e}"),
    ))
}

const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "reduction to the ordinary spin-boson exponent", budget: Duration::from_secs(10), run: reduction_identity },
    Criterion { id: 2, name: "discrete exponent equals amplitude sum", budget: Duration::from_secs(5), run: amplitude_identity },
    Criterion { id: 3, name: "exact Fock oracle certification", budget: Duration::from_secs(60), run: oracle_certification },
    Criterion { id: 4, name: "non-Hermitian spectrum and metric similarity", budget: Duration::from_secs(5), run: nh_spectrum_check },
    Criterion { id: 5, name: "fig1a ordering at t=20", budget: Duration::from_secs(5), run: fig1a_ordering },
    Criterion { id: 6, name: "theta periodicity at fig1b settings", budget: Duration::from_secs(30), run: theta_periodicity },
    Criterion { id: 7, name: "fig2 decrease with tau", budget: Duration::from_secs(5), run: fig2_trend },
    Criterion { id: 8, name: "fig3a crossover", budget: Duration::from_secs(60), run: fig3a_crossover },
    Criterion { id: 9, name: "fig4 asymptote", budget: Duration::from_secs(30), run: fig4_asymptote },
    Criterion { id: 10, name: "entanglement layer", budget: Duration::from_secs(5), run: entanglement_layer },
    Criterion { id: 11, name: "quadrature vs Riemann reference", budget: Duration::from_secs(120), run: riemann_grid },
];

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "{} [{:>2}] {}: {}; {:.2} s (budget {} s{})",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            if in_budget { "" } else { ", exceeded" },
        );
        if !ok {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of {} criteria fail: {failed:?}", failed.len(), CRITERIA.len());
        ExitCode::FAILURE
    }
}
