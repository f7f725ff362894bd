use std::fmt::Write as _;

use num_complex::Complex64;

use super::config::RunConfig;
use super::CliError;
use crate::dynamics::{
    homodyne_trajectory, master_evolve, mcwf_trajectory, DriveHamiltonian, Events,
    HomodyneConfig, NullMonitor,
};
use crate::ensemble::{compare_series, run_ensemble, EnsembleConfig, EnsemblePhysics, Execution, TrajectoryKind};
use crate::kernel::{
    amplitude_lorentzian, amplitude_scaled, effective_rate_empirical, effective_rate_scaled,
    memory_kernel, survival_repeated, volterra_amplitude, zeno_fidelity, zeno_retention,
    MeasurementSchedule, RateFlavor, ScalingParams, SpectralDensity, SystemParams, UniformGrid,
    ZenoParams,
};
use crate::state::PureState;

use super::Command;

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

/// Shortest round-trip form, exponent notation for very small or large magnitudes.
fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v == 0.0 {
        "0.0".to_string()
    } else {
        format!("{v:?}")
    }
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(num).collect::<Vec<_>>().join(",")
}

struct Output {
    text: String,
}

impl Output {
    fn new(command: Command, cfg: &RunConfig, derived: &[(&str, String)]) -> Self {
        let mut text = format!("# qtraj {}\n# command = {}\n# config:\n", env!("CARGO_PKG_VERSION"), command.name());
        for line in cfg.echo() {
            let _ = writeln!(text, "# {line}");
        }
        text.push_str("# derived:\n");
        for (k, v) in derived {
            let _ = writeln!(text, "# derived.{k} = {v}");
        }
        Output { text }
    }

    fn columns(&mut self, names: &[&str]) {
        self.text.push_str(&names.join(","));
        self.text.push('\n');
    }

    fn row(&mut self, values: &[String]) {
        self.text.push_str(&values.join(","));
        self.text.push('\n');
    }

    fn comment(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }
}

/// One measurement interval with its scaling variable.
#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    tau: f64,
}

/// Physics keys resolved into one consistent parameter set.
#[derive(Debug, Clone)]
struct Resolved {
    gamma: f64,
    lambda: f64,
    omega0: f64,
    e_g: f64,
    c: f64,
    e: f64,
    points: Vec<Point>,
    /// Given as interval and offset rather than `x` and `c`.
    explicit: bool,
}

impl Resolved {
    fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        let lambda = cfg.require_f64("physics.lambda")?;
        let omega0 = cfg.require_f64("physics.omega0")?;
        let e_g = cfg.require_f64("physics.e_g")?;
        if !(lambda > 0.0 && lambda.is_finite()) {
            return config_err("physics.lambda must be positive");
        }
        let gamma = match (cfg.get_f64("physics.gamma")?, cfg.get_f64("physics.d0")?) {
            (Some(_), Some(_)) => return config_err("set only one of physics.gamma and physics.d0"),
            (Some(g), None) => g,
            (None, Some(d0)) => SpectralDensity::lorentzian(d0, omega0, lambda)?.gamma().unwrap_or(f64::NAN),
            (None, None) => 1.0,
        };
        if !(gamma > 0.0 && gamma.is_finite()) {
            return config_err("physics.gamma must be positive");
        }

        let scaling_given = cfg.contains("scaling.x") || cfg.contains("scaling.c");
        let explicit = cfg.contains("physics.tau") || cfg.contains("physics.e");
        if scaling_given && explicit {
            return config_err(
                "give either scaling.x/scaling.c or physics.tau/physics.e, not both",
            );
        }
        let (c, e, points): (f64, f64, Vec<Point>) = if explicit {
            let Some(taus) = cfg.get_list("physics.tau")? else {
                return config_err("physics.e requires physics.tau");
            };
            let e = cfg.get_f64("physics.e")?.unwrap_or(0.0);
            let points = taus.iter().map(|&tau| Point { x: lambda * tau, tau }).collect();
            (e / lambda, e, points)
        } else {
            let xs = cfg.get_list("scaling.x")?.unwrap_or_else(|| vec![0.2]);
            let c = cfg.get_f64("scaling.c")?.unwrap_or(0.0);
            let points = xs.iter().map(|&x| Point { x, tau: x / lambda }).collect();
            (c, c * lambda, points)
        };
        for p in &points {
            if !(p.tau > 0.0 && p.tau.is_finite()) {
                return config_err(format!("measurement interval must be positive (x = {}, tau = {})", p.x, p.tau));
            }
        }
        Ok(Resolved { gamma, lambda, omega0, e_g, c, e, points, explicit })
    }

    fn e_e(&self) -> f64 {
        self.e_g + self.omega0 + self.e
    }

    fn single_point(&self) -> Result<Point, CliError> {
        match self.points.as_slice() {
            [p] => Ok(*p),
            _ => config_err("this command takes a single scaling.x or physics.tau value"),
        }
    }

    fn scaling(&self, p: Point) -> Result<ScalingParams, CliError> {
        Ok(ScalingParams::new(p.x, self.c, self.gamma)?)
    }

    fn spectral(&self) -> Result<SpectralDensity, CliError> {
        Ok(SpectralDensity::lorentzian_with_rate(self.gamma, self.omega0, self.lambda)?)
    }

    /// Scaling-form monitor, or `abar = a(tau)^n` with `n = dt / tau` for the explicit form.
    fn monitor(&self, p: Point, dt: f64) -> Result<NullMonitor, CliError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return config_err("step must be positive");
        }
        if !self.explicit {
            return Ok(NullMonitor::scaled(&self.scaling(p)?, dt)?);
        }
        let ratio = dt / p.tau;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio {
            return config_err(format!("step {dt} must be a whole number of measurement intervals {}", p.tau));
        }
        let schedule = MeasurementSchedule::new(p.tau, n as u64)?;
        Ok(NullMonitor::repeated(&schedule, self.lambda, self.gamma, self.e)?)
    }

    fn derived(&self) -> Vec<(&'static str, String)> {
        vec![
            ("gamma", num(self.gamma)),
            ("x", join(self.points.iter().map(|p| p.x))),
            ("c", num(self.c)),
            ("tau", join(self.points.iter().map(|p| p.tau))),
            ("e", num(self.e)),
            ("e_e", num(self.e_e())),
        ]
    }

    fn warn_validity(&self) {
        if let Ok(sdf) = self.spectral() {
            let _ = SystemParams::new(self.e_e(), self.e_g, 0.0, &sdf);
        }
    }
}

fn log_sweep(spec: &[f64]) -> Result<Vec<f64>, CliError> {
    let &[lo, hi, n] = spec else {
        return config_err("rate.x_log takes min,max,points");
    };
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || n < 1.0 || n.fract() != 0.0 {
        return config_err("rate.x_log needs 0 < min <= max and a whole number of points");
    }
    let n = n as usize;
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)).collect())
}

fn kind_of(cfg: &RunConfig) -> Result<TrajectoryKind, CliError> {
    match cfg.raw("run.kind") {
        Some("mcwf") => Ok(TrajectoryKind::Mcwf),
        Some("homodyne") => Ok(TrajectoryKind::Homodyne),
        other => config_err(format!("run.kind must be mcwf or homodyne, got {other:?}")),
    }
}

fn initial_state(cfg: &RunConfig) -> Result<PureState, CliError> {
    let p = cfg.require_f64("init.p_excited")?;
    let phase = cfg.require_f64("init.phase")?;
    Ok(PureState::from_population(p, phase)?)
}

fn step_for(cfg: &RunConfig, kind: TrajectoryKind) -> Result<f64, CliError> {
    Ok(match kind {
        TrajectoryKind::Mcwf => cfg.require_f64("time.dt")?,
        TrajectoryKind::Homodyne => cfg.require_f64("homodyne.dt")?,
    })
}

fn drive(cfg: &RunConfig) -> Result<DriveHamiltonian, CliError> {
    Ok(DriveHamiltonian::new(cfg.require_f64("drive.delta")?, cfg.require_f64("drive.rabi")?))
}

fn seed(cfg: &RunConfig) -> Result<u64, CliError> {
    Ok(cfg.require_u64("run.seed")?)
}

fn t_final(cfg: &RunConfig) -> Result<f64, CliError> {
    let t = cfg.require_f64("time.t_final")?;
    if !(t >= 0.0 && t.is_finite()) {
        return config_err("time.t_final must be nonnegative");
    }
    Ok(t)
}

pub(super) fn run(command: Command, cfg: &RunConfig, execution: Execution) -> Result<String, CliError> {
    match command {
        Command::Amplitude => amplitude(cfg),
        Command::Rate => rate(cfg),
        Command::Traj => traj(cfg),
        Command::Ensemble => ensemble(cfg, execution),
        Command::Zeno => zeno(cfg),
    }
}

fn amplitude(cfg: &RunConfig) -> Result<String, CliError> {
    let phys = Resolved::from_config(cfg)?;
    let (analytic, scaled, volterra) = match cfg.raw("run.solver") {
        Some("analytic") => (true, false, false),
        Some("scaled") => (false, true, false),
        Some("volterra") => (false, false, true),
        Some("all") => (true, true, true),
        other => return config_err(format!("run.solver must be analytic, scaled, volterra or all, got {other:?}")),
    };
    let t_final = t_final(cfg)?;
    let h = cfg.require_f64("volterra.h")?;
    phys.warn_validity();

    let mut out = Output::new(Command::Amplitude, cfg, &phys.derived());
    let mut names = vec!["x", "n", "t"];
    if analytic {
        names.extend(["analytic_re", "analytic_im", "analytic_abs", "repeated_re", "repeated_im", "repeated_abs"]);
    }
    if scaled {
        names.extend(["scaled_re", "scaled_im", "scaled_abs"]);
    }
    if volterra {
        names.extend(["volterra_re", "volterra_im", "volterra_abs"]);
    }
    out.columns(&names);

    let cplx = |row: &mut Vec<String>, a: Complex64| {
        row.extend([num(a.re), num(a.im), num(a.norm())]);
    };
    for &p in &phys.points {
        let steps = (t_final / p.tau + 1e-9).floor() as u64;
        let scaling = phys.scaling(p)?;
        let series = if volterra {
            let grid = UniformGrid::new(p.tau, steps as usize + 1)?;
            let kernel = memory_kernel(&phys.spectral()?, phys.e_g, UniformGrid::covering(grid.last(), h)?)?;
            Some(volterra_amplitude(&kernel, phys.e_e(), grid)?)
        } else {
            None
        };
        for n in 0..=steps {
            let t = n as f64 * p.tau;
            let mut row = vec![num(p.x), n.to_string(), num(t)];
            if analytic {
                cplx(&mut row, amplitude_lorentzian(t, phys.lambda, phys.gamma, phys.e)?);
                let rep = if n == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    survival_repeated(p.tau, n, phys.lambda, phys.gamma, phys.e)?
                };
                cplx(&mut row, rep);
            }
            if scaled {
                cplx(&mut row, amplitude_scaled(t, &scaling)?);
            }
            if let Some(s) = &series {
                let v = s.values[n as usize] * Complex64::from_polar(1.0, phys.e_e() * t);
                cplx(&mut row, v);
            }
            out.row(&row);
        }
    }
    Ok(out.text)
}

fn rate(cfg: &RunConfig) -> Result<String, CliError> {
    let mut phys = Resolved::from_config(cfg)?;
    if let Some(spec) = cfg.get_list("rate.x_log")? {
        if cfg.contains("scaling.x") || cfg.contains("physics.tau") {
            return config_err("rate.x_log replaces scaling.x / physics.tau; set only one");
        }
        phys.points = log_sweep(&spec)?
            .into_iter()
            .map(|x| Point { x, tau: x / phys.lambda })
            .collect();
    }
    let dt = cfg.require_f64("time.dt")?;
    let mut derived = phys.derived();
    let mut rows = Vec::with_capacity(phys.points.len());
    let mut closed_rates = Vec::with_capacity(phys.points.len());
    for &p in &phys.points {
        let scaling = phys.scaling(p)?;
        let closed = effective_rate_scaled(&scaling);
        let abar = amplitude_scaled(dt, &scaling)?;
        let linear = effective_rate_empirical(abar, dt, RateFlavor::Linear)?;
        let log = effective_rate_empirical(abar, dt, RateFlavor::Log)?;
        closed_rates.push(closed);
        rows.push(vec![
            num(p.x),
            num(phys.c),
            num(dt),
            num(closed / phys.gamma),
            num(linear / phys.gamma),
            num(log / phys.gamma),
        ]);
    }
    derived.push(("rate", join(closed_rates)));
    let mut out = Output::new(Command::Rate, cfg, &derived);
    out.columns(&["x", "c", "dt", "ratio_closed", "ratio_linear", "ratio_log"]);
    for r in &rows {
        out.row(r);
    }
    Ok(out.text)
}

fn traj(cfg: &RunConfig) -> Result<String, CliError> {
    let phys = Resolved::from_config(cfg)?;
    let p = phys.single_point()?;
    let kind = kind_of(cfg)?;
    let dt = step_for(cfg, kind)?;
    let monitor = phys.monitor(p, dt)?;
    let drive = drive(cfg)?;
    let initial = initial_state(cfg)?;
    let seed = seed(cfg)?;
    let t_final = t_final(cfg)?;

    let record = match kind {
        TrajectoryKind::Mcwf => mcwf_trajectory(initial, &drive, &monitor, t_final, seed)?,
        TrajectoryKind::Homodyne => {
            let hc = HomodyneConfig::new(cfg.require_f64("homodyne.phi")?, dt)?;
            homodyne_trajectory(&initial.projector(), &drive, monitor.rate, &hc, t_final, seed)?
        }
    };

    let mut derived = phys.derived();
    derived.push(("dt", num(dt)));
    derived.push(("rate", num(monitor.rate)));
    derived.push(("abar_abs", num(monitor.abar.norm())));
    let mut out = Output::new(Command::Traj, cfg, &derived);
    match &record.events {
        Events::Jumps(jumps) => {
            out.columns(&["t", "p_excited", "jump"]);
            for k in 0..record.len() {
                let jumped = k > 0 && jumps[k - 1];
                out.row(&[num(record.times[k]), num(record.excited_population(k)), (jumped as u8).to_string()]);
            }
            out.comment(&format!("jumps = {}", jumps.iter().filter(|j| **j).count()));
        }
        Events::Current(current) => {
            out.columns(&["t", "p_excited", "current"]);
            for k in 0..record.len() {
                // current integrated over the step ending at this row
                let i = if k == 0 { f64::NAN } else { current[k - 1] };
                out.row(&[num(record.times[k]), num(record.excited_population(k)), num(i)]);
            }
            out.comment(&format!("clamp_count = {}", record.clamp_count));
        }
    }
    Ok(out.text)
}

fn ensemble(cfg: &RunConfig, execution: Execution) -> Result<String, CliError> {
    let phys = Resolved::from_config(cfg)?;
    let p = phys.single_point()?;
    let kind = kind_of(cfg)?;
    let dt = step_for(cfg, kind)?;
    let monitor = phys.monitor(p, dt)?;
    let drive = drive(cfg)?;
    let initial = initial_state(cfg)?;
    let t_final = t_final(cfg)?;
    let n_traj = cfg.require_u64("ensemble.n_traj")? as usize;
    let samples = cfg.require_u64("ensemble.samples")?;
    let threshold = cfg.require_f64("ensemble.z")?;
    if samples == 0 {
        return config_err("ensemble.samples must be at least 1");
    }

    let indices: Vec<usize> = (1..=samples)
        .map(|k| (k as f64 * t_final / samples as f64 / dt).round() as usize)
        .collect();
    let sample_times: Vec<f64> = indices.iter().map(|&k| k as f64 * dt).collect();
    let config = EnsembleConfig {
        n_traj,
        kind,
        master_seed: seed(cfg)?,
        sample_times: sample_times.clone(),
        execution,
    };
    let physics = EnsemblePhysics {
        drive,
        monitor,
        phi: cfg.require_f64("homodyne.phi")?,
        initial,
    };
    let result = run_ensemble(&config, &physics)?;
    let horizon = indices.iter().copied().max().unwrap_or(0) as f64 * dt;
    let master = master_evolve(&initial.projector(), &drive, monitor.rate, horizon, dt)?;
    let reference: Vec<f64> = indices.iter().map(|&k| master[k].rho_ee).collect();
    let mean = result.excited_population();
    let report = match result.excited_stderr() {
        Some(se) => Some((compare_series(&mean, &reference, &se, threshold)?, se)),
        None => None,
    };

    let mut derived = phys.derived();
    derived.push(("dt", num(dt)));
    derived.push(("rate", num(monitor.rate)));
    let mut out = Output::new(Command::Ensemble, cfg, &derived);
    out.columns(&["t", "mean_p_excited", "stderr", "master_p_excited", "z"]);
    for (i, &t) in sample_times.iter().enumerate() {
        let (se, z) = match &report {
            Some((r, se)) => (se[i], r.z[i]),
            None => (f64::NAN, f64::NAN),
        };
        out.row(&[num(t), num(mean[i]), num(se), num(reference[i]), num(z)]);
    }
    out.comment(&format!("n_traj = {n_traj}"));
    match &report {
        Some((r, _)) => {
            out.comment(&format!("max_z = {} at t = {}", num(r.max_z), num(sample_times[r.argmax])));
            out.comment(&format!("threshold = {}", num(r.threshold)));
            out.comment(&format!("pass = {}", r.pass));
        }
        None => out.comment("single trajectory: standard error undefined, comparison skipped"),
    }
    out.comment(&format!("clamp_count = {}", result.clamp_count));
    Ok(out.text)
}

fn zeno(cfg: &RunConfig) -> Result<String, CliError> {
    let k = cfg.require_f64("zeno.k")?;
    let t = cfg.require_f64("zeno.t")?;
    let Some(taus) = cfg.get_list("zeno.tau")? else {
        return config_err("missing required key `zeno.tau`");
    };
    let initial = initial_state(cfg)?;
    let params = taus
        .iter()
        .map(|&tau| Ok(ZenoParams::spanning(k, t, tau)?))
        .collect::<Result<Vec<_>, CliError>>()?;

    let derived = [("n", params.iter().map(|p| p.n.to_string()).collect::<Vec<_>>().join(","))];
    let mut out = Output::new(Command::Zeno, cfg, &derived);
    out.columns(&["tau", "n", "retention", "fidelity", "infidelity", "deficit"]);
    for p in &params {
        let retention = zeno_retention(p);
        let fidelity = zeno_fidelity(p, initial.alpha(), initial.beta())?;
        out.row(&[
            num(p.tau),
            p.n.to_string(),
            num(retention),
            num(fidelity),
            num(1.0 - fidelity),
            num(1.0 - retention),
        ]);
    }
    Ok(out.text)
}
