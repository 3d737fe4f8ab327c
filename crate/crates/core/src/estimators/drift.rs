use serde::{Deserialize, Serialize};

use super::diffusion::{estimate_diffusion, DiffusionEstimate};
use super::rates::{deceleration_params, delta_opt, DecelerationParams};
use super::variation::{decelerated_w, w_statistic, Interval, WForm};
use crate::error::{Error, Result};
use crate::noise::{HurstParam, SamplePath};
use crate::sde::{drift_eval, DriftPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftMode {
    KnownParameters,
    PlugIn,
}

/// Intermediate quantities of the plug-in estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PluginDetails {
    pub diffusion: DiffusionEstimate,
    /// `Ĥ` clamped into `[0.501, 0.999]`; used for `δ°`, `d(H)` and the normalization.
    pub h_used: f64,
    pub deceleration: DecelerationParams,
    pub d_h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftEstimate {
    pub lambda_hat: f64,
    pub regressor: [f64; 2],
    pub response: [f64; 2],
    pub mode: DriftMode,
    /// The two half-interval 2-variation statistics entering the response.
    pub w: Option<[f64; 2]>,
    pub plugin: Option<PluginDetails>,
}

/// Riemann sums with step `k / n` over indices `1..=split` and `split+1..=end`.
fn half_sums(
    values: &[f64],
    split: usize,
    end: usize,
    k: usize,
    n: usize,
    drift: &DriftPoly,
) -> [f64; 2] {
    let f = |range: std::ops::RangeInclusive<usize>| {
        values[range]
            .iter()
            .map(|&x| drift_eval(drift, x))
            .sum::<f64>()
            * k as f64
            / n as f64
    };
    [f(1..=split), f(split + 1..=end)]
}

/// Right-node Riemann sums of `f(X)` over `[0, 1/2]` and `[1/2, 1]`.
pub fn riemann_drift_sums(path: &SamplePath, drift: &DriftPoly) -> Result<(f64, f64)> {
    let n = path.n_steps();
    if !n.is_multiple_of(2) {
        return Err(Error::OddSampleSize(n));
    }
    let [a, b] = half_sums(path.values(), n / 2, n, 1, n, drift);
    Ok((a, b))
}

fn least_squares(z: [f64; 2], u: [f64; 2]) -> Result<f64> {
    let zz = z[0] * z[0] + z[1] * z[1];
    if zz == 0.0 {
        return Err(Error::DegenerateRegressor);
    }
    Ok((z[0] * u[0] + z[1] * u[1]) / zz)
}

fn increments_over_halves(path: &SamplePath) -> [f64; 2] {
    let v = path.values();
    let n = path.n_steps();
    [v[n / 2] - v[0], v[n] - v[n / 2]]
}

/// Scalar least-squares drift estimate with known `(H, σ, d(H))`.
///
/// With `σ = 0` the 2-variation correction vanishes and is skipped.
pub fn estimate_lambda_known(
    path: &SamplePath,
    drift: &DriftPoly,
    h: HurstParam,
    sigma: f64,
    d_h: f64,
) -> Result<DriftEstimate> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sigma = {sigma} must be nonnegative"
        )));
    }
    let (z0, z1) = riemann_drift_sums(path, drift)?;
    let dx = increments_over_halves(path);
    let (response, w) = if sigma > 0.0 {
        let w1 = w_statistic(path, Interval::FirstHalf, h, sigma, d_h)?;
        let w2 = w_statistic(path, Interval::SecondHalf, h, sigma, d_h)?;
        ([dx[0] - sigma * w1, dx[1] - sigma * w2], Some([w1, w2]))
    } else {
        (dx, None)
    };
    let regressor = [z0, z1];
    Ok(DriftEstimate {
        lambda_hat: least_squares(regressor, response)?,
        regressor,
        response,
        mode: DriftMode::KnownParameters,
        w,
        plugin: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PluginOptions {
    pub sigma_floor: f64,
    pub h_clamp: (f64, f64),
}

impl Default for PluginOptions {
    fn default() -> Self {
        Self {
            sigma_floor: 1e-8,
            h_clamp: (0.501, 0.999),
        }
    }
}

pub fn estimate_lambda_plugin<F>(
    path: &SamplePath,
    drift: &DriftPoly,
    d_h_fn: F,
) -> Result<DriftEstimate>
where
    F: Fn(HurstParam) -> Result<f64>,
{
    estimate_lambda_plugin_with(path, drift, d_h_fn, PluginOptions::default())
}

/// Plug-in drift estimator: `(Ĥ, σ̂)` from all observations, then the
/// decelerated half-interval statistics at `δ°(Ĥ)` and least squares on the
/// decelerated Riemann sums.
pub fn estimate_lambda_plugin_with<F>(
    path: &SamplePath,
    drift: &DriftPoly,
    d_h_fn: F,
    opts: PluginOptions,
) -> Result<DriftEstimate>
where
    F: Fn(HurstParam) -> Result<f64>,
{
    let diffusion = estimate_diffusion(path)?;
    if !(diffusion.sigma_hat >= opts.sigma_floor) {
        return Err(Error::DegenerateDiffusion {
            sigma_hat: diffusion.sigma_hat,
            floor: opts.sigma_floor,
        });
    }
    let h_used = HurstParam::new(diffusion.h_hat.clamp(opts.h_clamp.0, opts.h_clamp.1))?;
    let n = path.n_steps();
    let params = deceleration_params(n, delta_opt(h_used))?;
    let d_h = d_h_fn(h_used)?;
    let sigma = diffusion.sigma_hat;
    let w1 = decelerated_w(
        path,
        Interval::FirstHalf,
        &params,
        h_used,
        sigma,
        d_h,
        WForm::Plain,
    )?;
    let w2 = decelerated_w(
        path,
        Interval::SecondHalf,
        &params,
        h_used,
        sigma,
        d_h,
        WForm::Plain,
    )?;
    let dx = increments_over_halves(path);
    let response = [dx[0] - sigma * w1, dx[1] - sigma * w2];
    let sub: Vec<f64> = path
        .values()
        .iter()
        .step_by(params.k)
        .take(params.n_n + 1)
        .copied()
        .collect();
    let regressor = half_sums(&sub, n / (2 * params.k), params.n_n, params.k, n, drift);
    Ok(DriftEstimate {
        lambda_hat: least_squares(regressor, response)?,
        regressor,
        response,
        mode: DriftMode::PlugIn,
        w: Some([w1, w2]),
        plugin: Some(PluginDetails {
            diffusion,
            h_used: h_used.value(),
            deceleration: params,
            d_h,
        }),
    })
}
