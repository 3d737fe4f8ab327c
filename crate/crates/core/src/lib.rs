//! Simulation and inference for SDEs driven by additive Rosenblatt noise.
//!
//! The crate covers noise synthesis ([`noise`]), Euler–Maruyama integration
//! ([`sde`]), the quadratic-variation estimators of the Hurst index, the
//! diffusion coefficient and the drift ([`estimators`]), and a reproducible
//! Monte Carlo harness ([`harness`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod harness;
pub mod io;
pub mod noise;
pub mod quadrature;
pub mod report;
pub mod sde;
pub mod stats;

pub use error::{Error, Result};
pub use estimators::{DConstant, DiffusionEstimate, DriftEstimate};
pub use harness::{ExperimentConfig, ReplicationResult, SummaryTable};
pub use noise::{HurstParam, NoiseSpec, SamplePath};
pub use report::{EstimationReport, Estimator};
pub use sde::{DriftPoly, ModelSpec, SolutionPath};
