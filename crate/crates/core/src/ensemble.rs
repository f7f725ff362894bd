//! Reproducible many-trajectory runs and statistical comparison with the
//! master equation.
//!
//! Trajectory `i` always draws from [`trajectory_stream`]`(master_seed, i)`
//! and means are formed by a pairwise tree over trajectory index, so the
//! result is bit-identical for serial and parallel execution.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::dynamics::{
    homodyne_trajectory_with_noise, mcwf_trajectory_with_rng, DriveHamiltonian, HomodyneConfig,
    NullMonitor, TrajectoryRecord,
};
use crate::error::{Error, Result};
use crate::rng::trajectory_stream;
use crate::state::{DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    Mcwf,
    Homodyne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub n_traj: usize,
    pub kind: TrajectoryKind,
    pub master_seed: u64,
    /// Must lie on the step grid `k * monitor.dt`; the largest one sets the horizon.
    pub sample_times: Vec<f64>,
    pub execution: Execution,
}

/// Everything a trajectory needs besides its random stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsemblePhysics {
    pub drive: DriveHamiltonian,
    pub monitor: NullMonitor,
    /// Local-oscillator phase (homodyne only).
    pub phi: f64,
    pub initial: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub sample_times: Vec<f64>,
    pub mean_rho: Vec<DensityMatrix>,
    /// Standard errors of `(rho_ee, Re rho_eg, Im rho_eg)`; `None` for a single trajectory.
    pub stderr: Option<Vec<[f64; 3]>>,
    pub clamp_count: usize,
    pub n_traj: usize,
}

impl EnsembleResult {
    pub fn excited_population(&self) -> Vec<f64> {
        self.mean_rho.iter().map(|r| r.rho_ee).collect()
    }

    pub fn excited_stderr(&self) -> Option<Vec<f64>> {
        self.stderr.as_ref().map(|s| s.iter().map(|c| c[0]).collect())
    }
}

fn sample_indices(times: &[f64], dt: f64) -> Result<Vec<usize>> {
    times
        .iter()
        .map(|&t| {
            let k = (t / dt).round();
            if !(t >= 0.0) || (k * dt - t).abs() > 1e-9 * t.max(1.0) {
                return Err(Error::GridMismatch(format!(
                    "sample time {t} is not a multiple of the step {dt}"
                )));
            }
            Ok(k as usize)
        })
        .collect()
}

fn run_one(
    index: usize,
    config: &EnsembleConfig,
    physics: &EnsemblePhysics,
    t_final: f64,
) -> Result<TrajectoryRecord> {
    let mut rng = trajectory_stream(config.master_seed, index as u64);
    match config.kind {
        TrajectoryKind::Mcwf => mcwf_trajectory_with_rng(
            physics.initial,
            &physics.drive,
            &physics.monitor,
            t_final,
            config.master_seed,
            &mut rng,
        ),
        TrajectoryKind::Homodyne => {
            let cfg = HomodyneConfig::new(physics.phi, physics.monitor.dt)?;
            homodyne_trajectory_with_noise(
                &physics.initial.projector(),
                &physics.drive,
                physics.monitor.rate,
                &cfg,
                t_final,
                config.master_seed,
                || rng.sample(StandardNormal),
            )
        }
    }
}

/// Sum in a fixed binary tree over the slice order.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

pub fn run_ensemble(config: &EnsembleConfig, physics: &EnsemblePhysics) -> Result<EnsembleResult> {
    if config.n_traj == 0 {
        return Err(Error::invalid("n_traj", "need at least one trajectory"));
    }
    if config.sample_times.is_empty() {
        return Err(Error::invalid("sample_times", "need at least one sample time"));
    }
    let indices = sample_indices(&config.sample_times, physics.monitor.dt)?;
    let t_final = indices.iter().copied().max().unwrap_or(0) as f64 * physics.monitor.dt;

    // (samples as [ee, Re eg, Im eg], clamps)
    let simulate = |i: usize| -> Result<(Vec<[f64; 3]>, usize)> {
        let rec = run_one(i, config, physics, t_final).map_err(|e| Error::Trajectory {
            index: i,
            seed: config.master_seed,
            source: Box::new(e),
        })?;
        let samples = indices
            .iter()
            .map(|&k| {
                let r = rec.density(k);
                [r.rho_ee, r.rho_eg.re, r.rho_eg.im]
            })
            .collect();
        Ok((samples, rec.clamp_count))
    };
    let runs: Vec<Result<(Vec<[f64; 3]>, usize)>> = match config.execution {
        Execution::Serial => (0..config.n_traj).map(simulate).collect(),
        Execution::Parallel => (0..config.n_traj).into_par_iter().map(simulate).collect(),
    };
    let runs: Vec<(Vec<[f64; 3]>, usize)> = runs.into_iter().collect::<Result<_>>()?;

    let n = config.n_traj as f64;
    let clamp_count = runs.iter().map(|r| r.1).sum();
    let mut mean_rho = Vec::with_capacity(indices.len());
    let mut stderr = Vec::with_capacity(indices.len());
    let mut column = vec![0.0; config.n_traj];
    for s in 0..indices.len() {
        let mut mean = [0.0; 3];
        let mut se = [0.0; 3];
        for c in 0..3 {
            for (slot, run) in column.iter_mut().zip(&runs) {
                *slot = run.0[s][c];
            }
            mean[c] = pairwise_sum(&column) / n;
            if config.n_traj > 1 {
                for v in column.iter_mut() {
                    *v = (*v - mean[c]).powi(2);
                }
                se[c] = (pairwise_sum(&column) / (n - 1.0) / n).sqrt();
            }
        }
        mean_rho.push(DensityMatrix {
            rho_ee: mean[0],
            rho_gg: 1.0 - mean[0],
            rho_eg: num_complex::Complex64::new(mean[1], mean[2]),
        });
        stderr.push(se);
    }

    Ok(EnsembleResult {
        sample_times: config.sample_times.clone(),
        mean_rho,
        stderr: (config.n_traj > 1).then_some(stderr),
        clamp_count,
        n_traj: config.n_traj,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub z: Vec<f64>,
    pub max_z: f64,
    pub argmax: usize,
    pub threshold: f64,
    pub pass: bool,
}

/// Per-point z-scores `|a - b| / stderr`. A zero standard error counts as
/// `z = 0` when the values agree to 1e-12 and as infinite otherwise.
pub fn compare_series(a: &[f64], b: &[f64], stderr: &[f64], threshold: f64) -> Result<ComparisonReport> {
    if a.len() != b.len() || a.len() != stderr.len() {
        return Err(Error::GridMismatch(format!(
            "series lengths {} / {} / {} differ",
            a.len(),
            b.len(),
            stderr.len()
        )));
    }
    let z: Vec<f64> = a
        .iter()
        .zip(b)
        .zip(stderr)
        .map(|((x, y), &se)| {
            let d = (x - y).abs();
            if se > 0.0 {
                d / se
            } else if d <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let (argmax, max_z) = z
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    Ok(ComparisonReport { pass: max_z <= threshold, z, max_z, argmax, threshold })
}

/// Default z threshold for ensemble agreement checks.
pub const DEFAULT_Z_THRESHOLD: f64 = 3.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ScalingParams;

    fn physics() -> EnsemblePhysics {
        let scaling = ScalingParams::new(0.2, 0.0, 1.0).unwrap();
        EnsemblePhysics {
            drive: DriveHamiltonian::new(0.0, 0.1),
            monitor: NullMonitor::scaled(&scaling, 0.01).unwrap(),
            phi: 0.0,
            initial: PureState::excited(),
        }
    }

    fn config(n: usize, kind: TrajectoryKind, execution: Execution) -> EnsembleConfig {
        EnsembleConfig {
            n_traj: n,
            kind,
            master_seed: 2024,
            sample_times: (1..=10).map(|k| k as f64).collect(),
            execution,
        }
    }

    #[test]
    fn single_trajectory_matches_its_projectors() {
        let p = physics();
        let res = run_ensemble(&config(1, TrajectoryKind::Mcwf, Execution::Serial), &p).unwrap();
        assert!(res.stderr.is_none());
        let mut rng = trajectory_stream(2024, 0);
        let rec = mcwf_trajectory_with_rng(p.initial, &p.drive, &p.monitor, 10.0, 2024, &mut rng).unwrap();
        for (i, r) in res.mean_rho.iter().enumerate() {
            let k = (i + 1) * 100;
            assert_eq!(r.rho_ee, rec.density(k).rho_ee);
            assert_eq!(r.rho_eg, rec.density(k).rho_eg);
        }
    }

    #[test]
    fn serial_and_parallel_are_bit_identical() {
        for kind in [TrajectoryKind::Mcwf, TrajectoryKind::Homodyne] {
            let a = run_ensemble(&config(64, kind, Execution::Serial), &physics()).unwrap();
            let b = run_ensemble(&config(64, kind, Execution::Parallel), &physics()).unwrap();
            let c = run_ensemble(&config(64, kind, Execution::Parallel), &physics()).unwrap();
            assert_eq!(a, b);
            assert_eq!(b, c);
        }
    }

    #[test]
    fn off_grid_sample_time_is_rejected() {
        let mut cfg = config(4, TrajectoryKind::Mcwf, Execution::Serial);
        cfg.sample_times = vec![0.005];
        assert!(matches!(run_ensemble(&cfg, &physics()), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn failing_trajectory_reports_index_and_seed() {
        let mut p = physics();
        p.monitor.rate = 20.0;
        let err = run_ensemble(&config(3, TrajectoryKind::Mcwf, Execution::Parallel), &p).unwrap_err();
        match err {
            Error::Trajectory { index, seed, .. } => {
                assert_eq!(index, 0);
                assert_eq!(seed, 2024);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn compare_series_examples() {
        let a = [0.1, 0.2, 0.3];
        let se = [0.01, 0.02, 0.01];
        let r = compare_series(&a, &a, &se, DEFAULT_Z_THRESHOLD).unwrap();
        assert_eq!(r.max_z, 0.0);
        assert!(r.pass);
        let b = [0.1, 0.2 + 5.0 * 0.02, 0.3];
        let r = compare_series(&a, &b, &se, DEFAULT_Z_THRESHOLD).unwrap();
        assert!(!r.pass);
        assert_eq!(r.argmax, 1);
        assert!((r.max_z - 5.0).abs() < 1e-9);
        assert!(compare_series(&a, &b[..2], &se, 3.0).is_err());
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let v: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }
}
