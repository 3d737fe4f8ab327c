use super::{cumulative, fgn_autocovariance, HurstParam, SamplePath, StationaryGaussian};
use crate::error::Result;

/// Rosenblatt synthesis from Wick squares of a Gaussian sequence.
///
/// On an inner grid of `M` cells a stationary standard Gaussian sequence
/// `G_n` with correlation `ρ(k) = sqrt(γ_H(k))` is drawn, where `γ_H` is the
/// fractional-Gaussian-noise autocovariance. The cell increments
/// `M^{-H} (G_n^2 - 1) / sqrt(2)` then have covariance `M^{-2H} γ_H(k)` at
/// every lag, so the summed path carries the exact fBm-type covariance at all
/// grid times while each increment lives in the second Wiener chaos. As `M`
/// grows the normalized partial sums converge to the Rosenblatt process.
#[derive(Clone)]
pub struct WickSquare {
    h: HurstParam,
    n_steps: usize,
    inner: usize,
    gauss: StationaryGaussian,
}

impl WickSquare {
    pub fn new(h: HurstParam, n_steps: usize, inner_resolution: usize) -> Result<Self> {
        let acov: Vec<f64> = (0..=inner_resolution)
            .map(|k| fgn_autocovariance(h, k).sqrt())
            .collect();
        let gauss = StationaryGaussian::new(&acov)?;
        Ok(Self {
            h,
            n_steps,
            inner: inner_resolution,
            gauss,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn inner_resolution(&self) -> usize {
        self.inner
    }

    pub fn sample(&self, seed: u64) -> SamplePath {
        let g = self.gauss.sample_seeded(seed);
        let scale = (self.inner as f64).powf(-self.h.value()) * std::f64::consts::FRAC_1_SQRT_2;
        let r = self.inner / self.n_steps;
        let increments = g
            .chunks(r)
            .map(|block| scale * block.iter().map(|x| x * x - 1.0).sum::<f64>());
        SamplePath::new(cumulative(increments)).expect("finite Gaussian draws give a finite path")
    }
}
