use serde::{Deserialize, Serialize};

use super::rates::DecelerationParams;
use crate::error::{Error, Result};
use crate::noise::{HurstParam, SamplePath};

/// Index range of a partial 2-variation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interval {
    FirstHalf,
    SecondHalf,
    Full,
}

/// Shape of the decelerated statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WForm {
    Log,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoVariationStats {
    pub v_n: f64,
    pub sum_sq: f64,
    pub n: usize,
}

pub(crate) fn sum_sq(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| (w[1] - w[0]) * (w[1] - w[0]))
        .sum()
}

/// `V_N = (1/N) Σ (|ΔX_i|² N^{2H} - 1)`.
pub fn two_variation(path: &SamplePath, h: HurstParam) -> Result<TwoVariationStats> {
    let n = path.n_steps();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "two_variation needs N >= 2, got {n}"
        )));
    }
    let s = sum_sq(path.values());
    let nf = n as f64;
    // Written as a nonnegative term minus one so that V_N >= -1 holds in floating point too.
    let v_n = s * nf.powf(2.0 * h.value()) / nf - 1.0;
    Ok(TwoVariationStats { v_n, sum_sq: s, n })
}

/// `ln(step * S / (σ² step^{2H}))`, shared by the plain and decelerated log statistics.
fn log_normalized(s: f64, step: f64, h: f64, sigma: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::DegeneratePath("all increments are zero".into()));
    }
    Ok((step * s / (sigma * sigma * step.powf(2.0 * h))).ln())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "sigma = {sigma} must be positive"
        )))
    }
}

fn check_d(d_h: f64) -> Result<()> {
    if d_h > 0.0 && d_h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "d(H) = {d_h} must be positive"
        )))
    }
}

/// `ln((1/N) Σ |ΔX_i|² / (σ² N^{-2H}))`.
pub fn log_two_variation(path: &SamplePath, h: HurstParam, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let step = 1.0 / path.n_steps() as f64;
    log_normalized(sum_sq(path.values()), step, h.value(), sigma)
}

/// Normalized partial 2-variation `(N^{1-H} / (4 d)) (1/N) Σ_{i∈I} (|ΔX_i|² / (σ² N^{-2H}) - 1)`.
///
/// The full-interval value is defined as the sum of the two halves so that
/// additivity holds bit for bit.
pub fn w_statistic(
    path: &SamplePath,
    interval: Interval,
    h: HurstParam,
    sigma: f64,
    d_h: f64,
) -> Result<f64> {
    check_sigma(sigma)?;
    check_d(d_h)?;
    let n = path.n_steps();
    if !n.is_multiple_of(2) {
        return Err(Error::OddSampleSize(n));
    }
    let nf = n as f64;
    let hv = h.value();
    let pre = nf.powf(1.0 - hv) / (4.0 * d_h);
    let half = n / 2;
    let part = |range: std::ops::Range<usize>| {
        let k = range.len() as f64;
        let s = sum_sq(&path.values()[range.start..=range.end]);
        pre * (s / (sigma * sigma * nf.powf(-2.0 * hv)) - k) / nf
    };
    Ok(match interval {
        Interval::FirstHalf => part(0..half),
        Interval::SecondHalf => part(half..n),
        Interval::Full => part(0..half) + part(half..n),
    })
}

/// 2-variation on the subsampled grid `{X(i h_N)}` with `h_N = k / N`.
///
/// The log form exists only for the full interval. The plain form uses the
/// first `⌊N / (2k)⌋` decelerated increments for the first half and the
/// remaining ones up to `n_N` for the second half.
pub fn decelerated_w(
    path: &SamplePath,
    interval: Interval,
    params: &DecelerationParams,
    h_used: HurstParam,
    sigma_used: f64,
    d_h: f64,
    form: WForm,
) -> Result<f64> {
    check_sigma(sigma_used)?;
    check_d(d_h)?;
    let n = path.n_steps();
    if params.n != n || params.k * params.n_n > n {
        return Err(Error::IncompatibleGrid(format!(
            "deceleration parameters for N = {} (k = {}, n_N = {}) do not fit a path with {n} steps",
            params.n, params.k, params.n_n
        )));
    }
    let k = params.k;
    let hv = h_used.value();
    let step = params.h_n;
    let pre = (n as f64 / k as f64).powf(1.0 - hv) / (4.0 * d_h);
    let sub: Vec<f64> = path
        .values()
        .iter()
        .step_by(k)
        .take(params.n_n + 1)
        .copied()
        .collect();
    match form {
        WForm::Log => {
            if interval != Interval::Full {
                return Err(Error::InvalidArgument(
                    "the logarithmic decelerated statistic is only defined on the full interval"
                        .into(),
                ));
            }
            Ok(pre * log_normalized(sum_sq(&sub), step, hv, sigma_used)?)
        }
        WForm::Plain => {
            let half = n / (2 * k);
            let denom = sigma_used * sigma_used * step.powf(2.0 * hv);
            let part = |lo: usize, hi: usize| {
                let s = sum_sq(&sub[lo..=hi]);
                pre * step * (s / denom - (hi - lo) as f64)
            };
            Ok(match interval {
                Interval::FirstHalf => part(0, half),
                Interval::SecondHalf => part(half, params.n_n),
                Interval::Full => part(0, half) + part(half, params.n_n),
            })
        }
    }
}
