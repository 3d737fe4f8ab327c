use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::seed_for_replication;
use crate::error::{Error, Result};
use crate::estimators::{CalibrationSettings, DConstant, DPoint};
use crate::report::Estimator;
use crate::sde::ModelSpec;

/// Where the campaign takes `d(H)` from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DSource {
    Override {
        value: f64,
    },
    Table {
        points: Vec<DPoint>,
    },
    LeadingOrder,
    /// Monte Carlo calibration before any replication runs. Without an
    /// explicit grid only the model's own `H` is calibrated.
    Calibrate {
        #[serde(default)]
        h_grid: Option<Vec<f64>>,
        #[serde(default)]
        settings: CalibrationSettings,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub obs_sizes: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    pub estimators: Vec<Estimator>,
    pub d_h_source: DSource,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.obs_sizes.is_empty() {
            return Err(Error::Config("obs_sizes must not be empty".into()));
        }
        for w in self.obs_sizes.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(
                    "obs_sizes must be strictly increasing".into(),
                ));
            }
        }
        for &n in &self.obs_sizes {
            if n < 4 || n % 2 != 0 {
                return Err(Error::Config(format!(
                    "observation size {n} must be even and at least 4"
                )));
            }
            if !self.model.fine_steps.is_multiple_of(n) {
                return Err(Error::Config(format!(
                    "fine_steps {} is not a multiple of observation size {n}",
                    self.model.fine_steps
                )));
            }
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be positive".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("at least one estimator is required".into()));
        }
        let unique: HashSet<_> = self.estimators.iter().collect();
        if unique.len() != self.estimators.len() {
            return Err(Error::Config("estimators must not repeat".into()));
        }
        match &self.d_h_source {
            DSource::Override { value } => DConstant::Fixed { value: *value }.validate()?,
            DSource::Table { points } => DConstant::Table {
                points: points.clone(),
            }
            .validate()?,
            DSource::LeadingOrder => {}
            DSource::Calibrate { settings, .. } => settings.validate()?,
        }
        self.check_seed_disjointness()
    }

    /// All replication seeds of the campaign, in replication order.
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.replications as u64)
            .map(|i| seed_for_replication(self.master_seed, i))
            .collect()
    }

    fn check_seed_disjointness(&self) -> Result<()> {
        let seeds = self.seeds();
        let distinct: HashSet<u64> = seeds.iter().copied().collect();
        if distinct.len() != seeds.len() {
            return Err(Error::Config("replication seeds collide".into()));
        }
        Ok(())
    }
}
