//! Quantum trajectories of a driven two-level atom whose emission into a
//! finite-bandwidth (Lorentzian) environment is monitored by frequent
//! null-result measurements.
//!
//! The measurement interval `tau` and the bandwidth `lambda` enter only
//! through `x = lambda tau`. Large `x` recovers the memoryless decay at the
//! wide-band rate, small `x` freezes the atom (Zeno limit). In between, the
//! dynamics is an ordinary Lindblad/trajectory problem with an
//! `x`-dependent effective decay rate.
//!
//! Validity: the symmetric Lorentzian model assumes `delta_eg > omega0 >> lambda`.
//! No correction for spectral weight at negative frequencies is applied.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod rng;
pub mod state;

pub use error::{Error, Result};
pub use state::{DensityMatrix, PureState};
