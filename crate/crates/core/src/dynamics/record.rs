use crate::state::{DensityMatrix, PureState};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSeries {
    Pure(Vec<PureState>),
    Mixed(Vec<DensityMatrix>),
}

/// Per-step events: jump flags for direct detection, current samples for homodyne.
#[derive(Debug, Clone, PartialEq)]
pub enum Events {
    Jumps(Vec<bool>),
    Current(Vec<f64>),
}

/// A single trajectory: states at `times`, one event per step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: StateSeries,
    pub events: Events,
    pub seed: u64,
    /// Positivity repairs applied along the way (homodyne only).
    pub clamp_count: usize,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.times.len().saturating_sub(1)
    }

    pub fn density(&self, k: usize) -> DensityMatrix {
        match &self.states {
            StateSeries::Pure(v) => v[k].projector(),
            StateSeries::Mixed(v) => v[k],
        }
    }

    pub fn excited_population(&self, k: usize) -> f64 {
        match &self.states {
            StateSeries::Pure(v) => v[k].excited_population(),
            StateSeries::Mixed(v) => v[k].rho_ee,
        }
    }

    /// Times at the end of steps that ended in a jump.
    pub fn jump_times(&self) -> Vec<f64> {
        match &self.events {
            Events::Jumps(j) => j
                .iter()
                .enumerate()
                .filter(|(_, &jumped)| jumped)
                .map(|(k, _)| self.times[k + 1])
                .collect(),
            Events::Current(_) => Vec::new(),
        }
    }
}
