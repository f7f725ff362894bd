//! C ABI over the `qtraj` engine.
//!
//! Every fallible call returns a [`QtStatus`]; on failure a message is kept
//! per thread and read back with [`qt_last_error`]. Results come back through
//! out-pointers. Heap objects are opaque handles released by their `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use qtraj::dynamics::{
    homodyne_trajectory, master_evolve, mcwf_trajectory, DriveHamiltonian, Events,
    HomodyneConfig, NullMonitor, TrajectoryRecord,
};
use qtraj::ensemble::{run_ensemble, EnsembleConfig, EnsemblePhysics, Execution, TrajectoryKind};
use qtraj::kernel::{
    amplitude_lorentzian, amplitude_scaled, effective_rate_empirical, effective_rate_scaled,
    memory_kernel, null_probability, survival_repeated, volterra_amplitude, AmplitudeSeries,
    RateFlavor, ScalingParams, SpectralDensity, UniformGrid,
};
use qtraj::{Error, PureState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QtComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for QtComplex {
    fn from(z: Complex64) -> Self {
        QtComplex { re: z.re, im: z.im }
    }
}

impl From<QtComplex> for Complex64 {
    fn from(z: QtComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    OutOfDomain = 3,
    Resolution = 4,
    GridMismatch = 5,
    Instability = 6,
    StepGuard = 7,
    IndexOutOfRange = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QtRateFlavor {
    Linear = 0,
    Log = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QtKind {
    Mcwf = 0,
    Homodyne = 1,
}

/// Driven two-level atom under frequent null-result monitoring, in scaling variables.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QtMonitoredAtom {
    /// `lambda * tau`
    pub x: f64,
    /// `E / lambda`
    pub c: f64,
    pub gamma: f64,
    pub rabi: f64,
    pub delta: f64,
    /// Initial excited population and relative phase of the ground amplitude.
    pub p_excited: f64,
    pub phase: f64,
}

pub struct QtAmplitudeSeries {
    inner: AmplitudeSeries,
}

pub struct QtTrajectory {
    inner: TrajectoryRecord,
}

pub struct QtEnsemble {
    times: Vec<f64>,
    mean: Vec<f64>,
    stderr: Vec<f64>,
    master: Vec<f64>,
    clamp_count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QtStatus {
    match e {
        Error::InvalidParameter { .. } => QtStatus::InvalidParameter,
        Error::OutOfDomain(_) => QtStatus::OutOfDomain,
        Error::Resolution { .. } => QtStatus::Resolution,
        Error::GridMismatch(_) => QtStatus::GridMismatch,
        Error::Instability { .. } => QtStatus::Instability,
        Error::StepGuard(_) => QtStatus::StepGuard,
        Error::Trajectory { source, .. } => status_of(source),
    }
}

struct Fail(QtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QtStatus::NullPointer, format!("{what} is null"))
}

fn guarded(body: impl FnOnce() -> Result<(), Fail>) -> QtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            QtStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            QtStatus::Panic
        }
    }
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// NUL-terminated library version.
#[no_mangle]
pub extern "C" fn qt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Survival amplitude for a Lorentzian environment.
///
/// # Safety
/// `out` must be valid for writing one `QtComplex`.
#[no_mangle]
pub unsafe extern "C" fn qt_amplitude_lorentzian(
    t: f64,
    lambda: f64,
    gamma: f64,
    e: f64,
    out: *mut QtComplex,
) -> QtStatus {
    guarded(|| write(out, amplitude_lorentzian(t, lambda, gamma, e)?.into()))
}

/// Amplitude after `n` null measurements spaced by `tau`.
///
/// # Safety
/// `out` must be valid for writing one `QtComplex`.
#[no_mangle]
pub unsafe extern "C" fn qt_survival_repeated(
    tau: f64,
    n: u64,
    lambda: f64,
    gamma: f64,
    e: f64,
    out: *mut QtComplex,
) -> QtStatus {
    guarded(|| write(out, survival_repeated(tau, n, lambda, gamma, e)?.into()))
}

/// Scaling-form amplitude at time `t`.
///
/// # Safety
/// `out` must be valid for writing one `QtComplex`.
#[no_mangle]
pub unsafe extern "C" fn qt_amplitude_scaled(
    t: f64,
    x: f64,
    c: f64,
    gamma: f64,
    out: *mut QtComplex,
) -> QtStatus {
    guarded(|| {
        let s = ScalingParams::new(x, c, gamma)?;
        write(out, amplitude_scaled(t, &s)?.into())
    })
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn qt_effective_rate_scaled(x: f64, c: f64, gamma: f64, out: *mut f64) -> QtStatus {
    guarded(|| {
        let s = ScalingParams::new(x, c, gamma)?;
        write(out, effective_rate_scaled(&s))
    })
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn qt_effective_rate_empirical(
    abar: QtComplex,
    dt: f64,
    flavor: QtRateFlavor,
    out: *mut f64,
) -> QtStatus {
    let flavor = match flavor {
        QtRateFlavor::Linear => RateFlavor::Linear,
        QtRateFlavor::Log => RateFlavor::Log,
    };
    guarded(|| write(out, effective_rate_empirical(abar.into(), dt, flavor)?))
}

/// Probability of no click for the state `alpha0 |e> + beta0 |g>`.
///
/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn qt_null_probability(
    abar: QtComplex,
    alpha0: QtComplex,
    beta0: QtComplex,
    out: *mut f64,
) -> QtStatus {
    guarded(|| write(out, null_probability(abar.into(), alpha0.into(), beta0.into())))
}

/// Solves the memory-kernel equation for a Lorentzian environment on the
/// grid `k * spacing`, `k < len`, with kernel step `h`. Values are in the
/// lab frame.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_volterra_lorentzian(
    gamma: f64,
    omega0: f64,
    lambda: f64,
    e_g: f64,
    e_e: f64,
    h: f64,
    spacing: f64,
    len: usize,
    out: *mut *mut QtAmplitudeSeries,
) -> QtStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let sdf = SpectralDensity::lorentzian_with_rate(gamma, omega0, lambda)?;
        let grid = UniformGrid::new(spacing, len)?;
        let kernel = memory_kernel(&sdf, e_g, UniformGrid::covering(grid.last(), h)?)?;
        let inner = volterra_amplitude(&kernel, e_e, grid)?;
        out.write(Box::into_raw(Box::new(QtAmplitudeSeries { inner })));
        Ok(())
    })
}

/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qt_series_len(series: *const QtAmplitudeSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.values.len())
}

/// # Safety
/// `series` must be a live handle; `t` and `value` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qt_series_get(
    series: *const QtAmplitudeSeries,
    k: usize,
    t: *mut f64,
    value: *mut QtComplex,
) -> QtStatus {
    guarded(|| {
        let s = &borrow(series, "series")?.inner;
        let Some(v) = s.values.get(k) else {
            return Err(Fail(QtStatus::IndexOutOfRange, format!("index {k} >= {}", s.values.len())));
        };
        write(t, s.grid.at(k))?;
        write(value, (*v).into())
    })
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_series_free(series: *mut QtAmplitudeSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

fn physics_of(atom: &QtMonitoredAtom, dt: f64) -> Result<(DriveHamiltonian, NullMonitor, PureState), Fail> {
    let scaling = ScalingParams::new(atom.x, atom.c, atom.gamma)?;
    let monitor = NullMonitor::scaled(&scaling, dt)?;
    let initial = PureState::from_population(atom.p_excited, atom.phase)?;
    Ok((DriveHamiltonian::new(atom.delta, atom.rabi), monitor, initial))
}

/// Jump trajectory with coarse step `dt`.
///
/// # Safety
/// `atom` must point to a valid `QtMonitoredAtom`; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_mcwf_trajectory(
    atom: *const QtMonitoredAtom,
    dt: f64,
    t_final: f64,
    seed: u64,
    out: *mut *mut QtTrajectory,
) -> QtStatus {
    guarded(|| {
        let (drive, monitor, initial) = physics_of(borrow(atom, "atom")?, dt)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let inner = mcwf_trajectory(initial, &drive, &monitor, t_final, seed)?;
        out.write(Box::into_raw(Box::new(QtTrajectory { inner })));
        Ok(())
    })
}

/// Diffusive (homodyne) trajectory with local-oscillator phase `phi`.
///
/// # Safety
/// `atom` must point to a valid `QtMonitoredAtom`; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_homodyne_trajectory(
    atom: *const QtMonitoredAtom,
    phi: f64,
    dt: f64,
    t_final: f64,
    seed: u64,
    out: *mut *mut QtTrajectory,
) -> QtStatus {
    guarded(|| {
        let (drive, monitor, initial) = physics_of(borrow(atom, "atom")?, dt)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let cfg = HomodyneConfig::new(phi, dt)?;
        let inner = homodyne_trajectory(&initial.projector(), &drive, monitor.rate, &cfg, t_final, seed)?;
        out.write(Box::into_raw(Box::new(QtTrajectory { inner })));
        Ok(())
    })
}

/// Number of recorded states (steps + 1).
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qt_trajectory_len(traj: *const QtTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.len())
}

/// Time and excited population of state `k`, plus the event of the step
/// ending there: `1`/`0` jump flag for MCWF, the current sample for homodyne,
/// `NaN` at `k = 0`.
///
/// # Safety
/// `traj` must be a live handle; the out-pointers valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qt_trajectory_get(
    traj: *const QtTrajectory,
    k: usize,
    t: *mut f64,
    p_excited: *mut f64,
    event: *mut f64,
) -> QtStatus {
    guarded(|| {
        let rec = &borrow(traj, "trajectory")?.inner;
        if k >= rec.len() {
            return Err(Fail(QtStatus::IndexOutOfRange, format!("index {k} >= {}", rec.len())));
        }
        let ev = match (&rec.events, k) {
            (_, 0) => f64::NAN,
            (Events::Jumps(j), k) => j[k - 1] as u8 as f64,
            (Events::Current(c), k) => c[k - 1],
        };
        write(t, rec.times[k])?;
        write(p_excited, rec.excited_population(k))?;
        write(event, ev)
    })
}

/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qt_trajectory_clamp_count(traj: *const QtTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.clamp_count)
}

/// # Safety
/// `traj` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_trajectory_free(traj: *mut QtTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Runs `n_traj` trajectories and the master equation, sampled at
/// `samples` evenly spaced times over `(0, t_final]` rounded to the step grid.
///
/// # Safety
/// `atom` must point to a valid `QtMonitoredAtom`; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_ensemble_run(
    atom: *const QtMonitoredAtom,
    kind: QtKind,
    phi: f64,
    dt: f64,
    t_final: f64,
    n_traj: usize,
    samples: usize,
    seed: u64,
    parallel: bool,
    out: *mut *mut QtEnsemble,
) -> QtStatus {
    guarded(|| {
        let (drive, monitor, initial) = physics_of(borrow(atom, "atom")?, dt)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if samples == 0 || t_final.is_nan() || t_final <= 0.0 {
            return Err(Fail(QtStatus::InvalidParameter, "need samples > 0 and t_final > 0".into()));
        }
        let indices: Vec<usize> = (1..=samples)
            .map(|k| (k as f64 * t_final / samples as f64 / dt).round() as usize)
            .collect();
        let times: Vec<f64> = indices.iter().map(|&k| k as f64 * dt).collect();
        let config = EnsembleConfig {
            n_traj,
            kind: match kind {
                QtKind::Mcwf => TrajectoryKind::Mcwf,
                QtKind::Homodyne => TrajectoryKind::Homodyne,
            },
            master_seed: seed,
            sample_times: times.clone(),
            execution: if parallel { Execution::Parallel } else { Execution::Serial },
        };
        let result = run_ensemble(&config, &EnsemblePhysics { drive, monitor, phi, initial })?;
        let horizon = indices.iter().copied().max().unwrap_or(0) as f64 * dt;
        let rho = master_evolve(&initial.projector(), &drive, monitor.rate, horizon, dt)?;
        let handle = QtEnsemble {
            mean: result.excited_population(),
            stderr: result.excited_stderr().unwrap_or_else(|| vec![f64::NAN; times.len()]),
            master: indices.iter().map(|&k| rho[k].rho_ee).collect(),
            clamp_count: result.clamp_count,
            times,
        };
        out.write(Box::into_raw(Box::new(handle)));
        Ok(())
    })
}

/// # Safety
/// `ens` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qt_ensemble_len(ens: *const QtEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.times.len())
}

/// Sample `k`: time, ensemble-mean excited population, its standard error
/// (`NaN` for a single trajectory) and the master-equation value.
///
/// # Safety
/// `ens` must be a live handle; the out-pointers valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qt_ensemble_get(
    ens: *const QtEnsemble,
    k: usize,
    t: *mut f64,
    mean: *mut f64,
    stderr: *mut f64,
    master: *mut f64,
) -> QtStatus {
    guarded(|| {
        let e = borrow(ens, "ensemble")?;
        if k >= e.times.len() {
            return Err(Fail(QtStatus::IndexOutOfRange, format!("index {k} >= {}", e.times.len())));
        }
        write(t, e.times[k])?;
        write(mean, e.mean[k])?;
        write(stderr, e.stderr[k])?;
        write(master, e.master[k])
    })
}

/// # Safety
/// `ens` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qt_ensemble_clamp_count(ens: *const QtEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.clamp_count)
}

/// # Safety
/// `ens` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_ensemble_free(ens: *mut QtEnsemble) {
    if !ens.is_null() {
        drop(Box::from_raw(ens));
    }
}
