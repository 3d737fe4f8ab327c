use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{DSource, ExperimentConfig};
use super::seed_for_replication;
use crate::error::Result;
use crate::estimators::{calibrate_table, DCalibration, DConstant};
use crate::noise::NoiseGenerator;
use crate::report::{estimate_all, EstimationReport, EstimationRequest, Estimator};
use crate::sde::{downsample, euler_maruyama};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationResult {
    pub replication_index: usize,
    pub seed: u64,
    /// One report per observation size, in the order of `obs_sizes`; empty
    /// when the replication failed before estimation.
    pub reports: Vec<EstimationReport>,
    /// Error kind when synthesis or integration failed.
    pub error: Option<String>,
}

/// The `d(H)` source after calibration, plus calibration diagnostics if any.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedD {
    pub constant: DConstant,
    pub calibrations: Vec<DCalibration>,
}

pub fn resolve_d(config: &ExperimentConfig) -> Result<ResolvedD> {
    Ok(match &config.d_h_source {
        DSource::Override { value } => ResolvedD {
            constant: DConstant::Fixed { value: *value },
            calibrations: vec![],
        },
        DSource::Table { points } => ResolvedD {
            constant: DConstant::Table {
                points: points.clone(),
            },
            calibrations: vec![],
        },
        DSource::LeadingOrder => ResolvedD {
            constant: DConstant::LeadingOrder,
            calibrations: vec![],
        },
        DSource::Calibrate { h_grid, settings } => {
            let grid = h_grid
                .clone()
                .unwrap_or_else(|| vec![config.model.noise.h().value()]);
            let (constant, calibrations) = calibrate_table(&grid, settings)?;
            ResolvedD {
                constant,
                calibrations,
            }
        }
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ReplicationResult>> {
    config.validate()?;
    let d = resolve_d(config)?;
    run_experiment_with_d(config, &d.constant)
}

/// Runs every replication on the current rayon pool. Results come back in
/// replication order and do not depend on the number of workers.
pub fn run_experiment_with_d(
    config: &ExperimentConfig,
    d: &DConstant,
) -> Result<Vec<ReplicationResult>> {
    config.validate()?;
    d.validate()?;
    let model = &config.model;
    let generator = NoiseGenerator::new(&model.noise_spec(0))?;
    let needs_truth = config.estimators.contains(&Estimator::LambdaKnown);
    let request = EstimationRequest {
        estimators: config.estimators.clone(),
        drift: model.drift.clone(),
        h: needs_truth.then(|| model.noise.h()),
        sigma: needs_truth.then_some(model.sigma),
        d: d.clone(),
    };
    let results = (0..config.replications)
        .into_par_iter()
        .map(|index| {
            let seed = seed_for_replication(config.master_seed, index as u64);
            let noise = generator.sample(seed);
            let solution = match euler_maruyama(model, &noise) {
                Ok(s) => s.solution,
                Err(e) => {
                    return ReplicationResult {
                        replication_index: index,
                        seed,
                        reports: vec![],
                        error: Some(e.kind().into()),
                    }
                }
            };
            let mut reports = Vec::with_capacity(config.obs_sizes.len());
            for &n in &config.obs_sizes {
                match downsample(&solution, n) {
                    Ok(p) => reports.push(estimate_all(&p, &request)),
                    Err(e) => {
                        return ReplicationResult {
                            replication_index: index,
                            seed,
                            reports: vec![],
                            error: Some(e.kind().into()),
                        }
                    }
                }
            }
            ReplicationResult {
                replication_index: index,
                seed,
                reports,
                error: None,
            }
        })
        .collect();
    Ok(results)
}
