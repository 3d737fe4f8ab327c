use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::variation::sum_sq;
use crate::error::{Error, Result};
use crate::noise::SamplePath;

/// Joint least-squares estimate of the Hurst index and the diffusion coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionEstimate {
    pub h_hat: f64,
    pub sigma_hat: f64,
    pub n: usize,
    pub sum_sq_full: f64,
    pub sum_sq_half: f64,
}

impl DiffusionEstimate {
    /// Closed forms in terms of `S_N` and `S_{N/2}`:
    /// `Ĥ = -(ln S_N - ln S_{N/2}) / (2 ln 2) + 1/2` and
    /// `σ̂ = exp((ln(2/N) ln S_N + ln N ln S_{N/2}) / (2 ln 2))`.
    pub fn from_sums(n: usize, sum_sq_full: f64, sum_sq_half: f64) -> Self {
        let ls_full = sum_sq_full.ln();
        let ls_half = sum_sq_half.ln();
        let nf = n as f64;
        let h_hat = -(ls_full - ls_half) / (2.0 * LN_2) + 0.5;
        let sigma_hat = (((2.0 / nf).ln() * ls_full + nf.ln() * ls_half) / (2.0 * LN_2)).exp();
        Self {
            h_hat,
            sigma_hat,
            n,
            sum_sq_full,
            sum_sq_half,
        }
    }
}

/// Estimates `(H, σ)` from the squared increments at resolutions `N` and `N/2`;
/// the coarse sums use every second observation of the same path.
pub fn estimate_diffusion(path: &SamplePath) -> Result<DiffusionEstimate> {
    let n = path.n_steps();
    if !n.is_multiple_of(2) {
        return Err(Error::OddSampleSize(n));
    }
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "diffusion estimation needs N >= 4, got {n}"
        )));
    }
    let full = sum_sq(path.values());
    let coarse: Vec<f64> = path.values().iter().step_by(2).copied().collect();
    let half = sum_sq(&coarse);
    if !(full > 0.0) || !(half > 0.0) {
        return Err(Error::DegeneratePath(
            "a squared-increment sum vanishes".into(),
        ));
    }
    Ok(DiffusionEstimate::from_sums(n, full, half))
}
