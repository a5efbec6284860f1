use std::f64::consts::{FRAC_PI_2, PI};

use ptdeco::continuum::QuadratureSpec;
use ptdeco::dephasing::{BathMode, Coupling, DiscreteBath};
use ptdeco::entanglement::{concurrence, dephased_bell, eof_from_concurrence};
use ptdeco::oracle::{run_validations, OracleReport, OracleSettings};

use crate::args::Command;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::eval::{gamma_discrete_points, Evaluator, Physical, Point};
use crate::grid::{Axis, SweepGrid, ValueSpec};
use crate::output::Table;
use crate::presets::FigurePreset;
use crate::search::{self, Bounds};

/// Default time when `--t` is not given.
pub const DEFAULT_T: f64 = 20.0;

pub enum Output {
    Table(Table),
    /// A JSON document; `failure` is set when the command must exit non-zero
    /// after writing it.
    Json { text: String, failure: Option<String> },
}

pub fn execute(command: &Command, s: &Settings) -> CliResult<Output> {
    match command {
        Command::Gamma => gamma(s).map(Output::Table),
        Command::Sweep => sweep(s).map(Output::Table),
        Command::Figure { id } => figure(s, FigurePreset::defaults(*id)).map(Output::Table),
        Command::Optimize { .. } => optimize(s).map(Output::Table),
        Command::Crossover { .. } => crossover(s).map(Output::Table),
        Command::Concurrence { .. } => concurrence_cmd(s).map(Output::Table),
        Command::Oracle { .. } => oracle(s),
    }
}

fn quadrature(s: &Settings) -> CliResult<QuadratureSpec> {
    let mut q = QuadratureSpec::default();
    if let Some(r) = s.rel_tol {
        q.rel_tol = r;
    }
    q.validate()?;
    Ok(q)
}

fn physical(s: &Settings, defaults: Physical) -> CliResult<Physical> {
    Ok(Physical {
        amplitude: s.scalar_or(&s.amplitude, "A", defaults.amplitude)?,
        cutoff: s.scalar_or(&s.cutoff, "cutoff", defaults.cutoff)?,
        temperature: s.scalar_or(&s.temp, "temp", defaults.temperature)?,
    })
}

fn evaluator(s: &Settings) -> CliResult<Evaluator> {
    Ok(Evaluator {
        physical: physical(s, Physical::FIGURE)?,
        quad: quadrature(s)?,
    })
}

/// The discrete bath from `--modes-file`, if one was given.
fn discrete_bath(s: &Settings) -> CliResult<Option<DiscreteBath>> {
    let Some(path) = &s.modes_file else {
        return Ok(None);
    };
    for (given, name) in [(&s.theta, "theta"), (&s.amplitude, "A"), (&s.cutoff, "cutoff")] {
        if given.is_some() {
            return Err(CliError::usage(format!(
                "--{name} does not apply to a discrete bath (--modes-file)"
            )));
        }
    }
    let modes = DiscreteBath::modes_from_path(path)?;
    let temp = s.scalar_or(&s.temp, "temp", Physical::FIGURE.temperature)?;
    Ok(Some(DiscreteBath::new(modes, temp, 0.0)?))
}

fn evaluate(s: &Settings, points: &[Point]) -> CliResult<Vec<f64>> {
    match discrete_bath(s)? {
        Some(bath) => gamma_discrete_points(&bath, points),
        None => evaluator(s)?.gamma_nh(points),
    }
}

fn gamma(s: &Settings) -> CliResult<Table> {
    for (v, name) in [(&s.tau, "tau"), (&s.theta, "theta")] {
        if v.as_ref().is_some_and(ValueSpec::is_grid) {
            return Err(CliError::usage(format!("gamma takes a single --{name}; use sweep for grids")));
        }
    }
    let tau = s.scalar_or(&s.tau, "tau", 0.0)?;
    let theta = s.scalar_or(&s.theta, "theta", 0.0)?;
    let times = match &s.t {
        Some(v) => SweepGrid::parse(Axis::T, v)?.values().to_vec(),
        None => vec![DEFAULT_T],
    };
    let points: Vec<Point> = times.iter().map(|&t| Point { tau, theta, t }).collect();
    let mut table = Table::decoherence(["t"]);
    for (p, g) in points.iter().zip(evaluate(s, &points)?) {
        table.push_gamma(vec![p.t], g);
    }
    Ok(table)
}

fn sweep(s: &Settings) -> CliResult<Table> {
    let mut base = Point {
        tau: 0.0,
        theta: 0.0,
        t: DEFAULT_T,
    };
    let mut grids = Vec::new();
    for axis in Axis::ALL {
        if let Some(v) = s.axis(axis) {
            if !v.is_grid() {
                base.set(axis, v.scalar(axis.name())?);
            }
        }
    }
    for &axis in &s.axis_order {
        if let Some(v) = s.axis(axis).filter(|v| v.is_grid()) {
            grids.push(SweepGrid::parse(axis, v)?);
        }
    }

    // lexicographic: the first declared grid varies slowest
    let mut points = vec![base];
    for g in &grids {
        points = points
            .iter()
            .flat_map(|p| {
                g.values().iter().map(move |&x| {
                    let mut q = *p;
                    q.set(g.axis(), x);
                    q
                })
            })
            .collect();
    }
    let mut table = Table::decoherence(grids.iter().map(|g| g.axis().name()));
    for (p, gamma) in points.iter().zip(evaluate(s, &points)?) {
        table.push_gamma(grids.iter().map(|g| p.get(g.axis())).collect(), gamma);
    }
    Ok(table)
}

fn figure(s: &Settings, mut preset: FigurePreset) -> CliResult<Table> {
    if s.modes_file.is_some() {
        return Err(CliError::usage("figures use the Ohmic continuum; drop --modes-file"));
    }
    let phys = physical(
        s,
        Physical {
            amplitude: preset.amplitude,
            cutoff: preset.cutoff,
            temperature: preset.temperature,
        },
    )?;
    preset.amplitude = phys.amplitude;
    preset.cutoff = phys.cutoff;
    preset.temperature = phys.temperature;
    for axis in Axis::ALL {
        if let Some(v) = s.axis(axis) {
            let values = SweepGrid::parse(axis, v)?.values().to_vec();
            preset.set_axis(axis, values).map_err(CliError::Usage)?;
        }
    }
    let eval = Evaluator {
        physical: phys,
        quad: quadrature(s)?,
    };
    preset.run(&eval)
}

fn optimize(s: &Settings) -> CliResult<Table> {
    if s.modes_file.is_some() {
        return Err(CliError::usage("optimize uses the Ohmic continuum; drop --modes-file"));
    }
    if s.free.contains(&Axis::T) {
        return Err(CliError::usage("only tau and theta can be free"));
    }
    let eval = evaluator(s)?;
    let t = s.scalar_or(&s.t, "t", DEFAULT_T)?;
    let start = (s.scalar_or(&s.tau, "tau", 0.0)?, s.scalar_or(&s.theta, "theta", 0.0)?);
    let bounds = |axis: Axis, given: &Option<String>, default: Bounds| -> CliResult<Option<Bounds>> {
        if !s.free.contains(&axis) {
            return Ok(None);
        }
        given.as_deref().map_or(Ok(default), Bounds::parse).map(Some)
    };
    let tau = bounds(Axis::Tau, &s.tau_bounds, Bounds::new(0.0, 20.0)?)?;
    let theta = bounds(Axis::Theta, &s.theta_bounds, Bounds::new(0.0, PI)?)?;
    let found = search::optimize(&eval, t, start, tau, theta)?;
    log::info!("optimize: {} evaluations", found.log.len());
    let mut table = Table::decoherence(["tau", "theta", "t"]);
    table.push_gamma(vec![found.best.tau, found.best.theta, t], found.best.gamma);
    Ok(table)
}

fn crossover(s: &Settings) -> CliResult<Table> {
    if s.modes_file.is_some() {
        return Err(CliError::usage("crossover uses the Ohmic continuum; drop --modes-file"));
    }
    if s.tau.is_some() {
        return Err(CliError::usage("crossover searches over tau; use --tau-max for the interval"));
    }
    let eval = evaluator(s)?;
    let theta = s.scalar_or(&s.theta, "theta", 2.0 * PI / 3.0)?;
    let t = s.scalar_or(&s.t, "t", 120.0)?;
    let tau_max = s.tau_max.unwrap_or(4.0);
    match search::crossover(&eval, theta, t, tau_max)? {
        Some((tau, gamma)) => {
            let mut table = Table::decoherence(["theta", "t", "tau_star"]);
            table.push_gamma(vec![theta, t, tau], gamma);
            Ok(table)
        }
        None => Err(CliError::usage(format!(
            "no crossover in (0, {tau_max}] at theta = {theta}, t = {t}"
        ))),
    }
}

fn concurrence_cmd(s: &Settings) -> CliResult<Table> {
    let gamma = s.gamma.ok_or_else(|| CliError::usage("concurrence needs --gamma"))?;
    let state = dephased_bell(gamma)?;
    let c = concurrence(&state).concurrence;
    let mut table = Table::new(["gamma", "concurrence", "eof"]);
    table.push(vec![gamma, c, eof_from_concurrence(c)?]);
    Ok(table)
}

fn oracle_settings(s: &Settings) -> CliResult<Vec<OracleSettings>> {
    let defaults = OracleSettings::default();
    let values = |v: &Option<ValueSpec>, axis: Axis, default: f64| -> CliResult<Vec<f64>> {
        match v {
            Some(v) => Ok(SweepGrid::parse(axis, v)?.values().to_vec()),
            None => Ok(vec![default]),
        }
    };
    let taus = values(&s.tau, Axis::Tau, defaults.tau)?;
    let thetas = values(&s.theta, Axis::Theta, FRAC_PI_2)?;
    let temperature = s.scalar_or(&s.temp, "temp", defaults.temperature)?;
    let times = match &s.t {
        Some(v) => SweepGrid::parse(Axis::T, v)?.values().to_vec(),
        None => defaults.times.clone(),
    };
    let file_modes = match &s.modes_file {
        Some(p) => Some(DiscreteBath::modes_from_path(p)?),
        None => None,
    };
    if file_modes.is_some() && s.theta.is_some() {
        return Err(CliError::usage("--theta does not apply with --modes-file"));
    }
    let mut plan = defaults.plan;
    plan.initial_dim = s.fock_dim.unwrap_or(plan.initial_dim);
    plan.max_hilbert_dim = s.max_dim.unwrap_or(plan.max_hilbert_dim);

    let mut out = Vec::new();
    for &tau in &taus {
        for &theta in &thetas {
            let modes = match &file_modes {
                Some(m) => m.clone(),
                None => {
                    let g = Coupling::new(s.g_abs.unwrap_or(0.1), theta)?;
                    vec![BathMode::new(s.omega.unwrap_or(1.0), g)?]
                }
            };
            out.push(OracleSettings {
                modes,
                tau,
                temperature,
                omega0: s.omega0.unwrap_or(defaults.omega0),
                times: times.clone(),
                plan,
                ..defaults.clone()
            });
            if file_modes.is_some() {
                break;
            }
        }
    }
    Ok(out)
}

fn oracle(s: &Settings) -> CliResult<Output> {
    let settings = oracle_settings(s)?;
    let reports: Vec<OracleReport> = run_validations(&settings).into_iter().collect::<Result<_, _>>()?;
    let failed: Vec<String> = reports
        .iter()
        .zip(&settings)
        .filter(|(r, _)| !r.passed())
        .map(|(r, st)| {
            format!(
                "tau={} converged={} max error {:.3e}",
                st.tau, r.converged, r.dephasing_max_error
            )
        })
        .collect();
    let text = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(&reports)
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(Output::Json {
        text,
        failure: (!failed.is_empty()).then(|| failed.join("; ")),
    })
}
