use super::{cumulative, fgn_autocovariance, HurstParam, SamplePath, StationaryGaussian};
use crate::error::Result;

/// Fractional Brownian motion via exact synthesis of its Gaussian increments.
#[derive(Clone)]
pub struct FbmGenerator {
    h: HurstParam,
    n_steps: usize,
    gauss: StationaryGaussian,
}

impl FbmGenerator {
    pub fn new(h: HurstParam, n_steps: usize) -> Result<Self> {
        let acov: Vec<f64> = (0..=n_steps).map(|k| fgn_autocovariance(h, k)).collect();
        Ok(Self {
            h,
            n_steps,
            gauss: StationaryGaussian::new(&acov)?,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn sample(&self, seed: u64) -> SamplePath {
        let scale = (self.n_steps as f64).powf(-self.h.value());
        let g = self.gauss.sample_seeded(seed);
        SamplePath::new(cumulative(g.into_iter().map(|x| scale * x)))
            .expect("finite Gaussian draws give a finite path")
    }
}
