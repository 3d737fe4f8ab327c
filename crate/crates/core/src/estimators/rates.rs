use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::HurstParam;

/// Optimal deceleration exponent: `2(1 - H)` up to `H = 3/4`, then `1/2`.
pub fn delta_opt(h: HurstParam) -> f64 {
    let h = h.value();
    if h <= 0.75 {
        2.0 * (1.0 - h)
    } else {
        0.5
    }
}

/// Supremum of the almost-sure rate exponent reachable by the plug-in drift estimator.
pub fn rate_a_opt(h: HurstParam) -> f64 {
    let h = h.value();
    if h <= 0.75 {
        2.0 * (1.0 - h) * (h - 0.5)
    } else {
        0.5 * (1.0 - h)
    }
}

/// Supremum of the rate exponent in the almost-sure convergence of the
/// normalized 2-variation to `Z(1)`.
pub fn alpha_bound(h: HurstParam) -> f64 {
    let h = h.value();
    if h <= 0.75 {
        h - 0.5
    } else {
        1.0 - h
    }
}

/// Subsampling plan keeping every `k`-th of `N` observations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecelerationParams {
    pub n: usize,
    pub delta: f64,
    pub k: usize,
    pub h_n: f64,
    pub n_n: usize,
}

/// `k = ⌊N / N^δ⌋`, `h_N = k / N`, `n_N = ⌊1 / h_N⌋ = ⌊N / k⌋`.
pub fn deceleration_params(n: usize, delta: f64) -> Result<DecelerationParams> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta = {delta} must lie in (0, 1)"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let nf = n as f64;
    let x = nf / nf.powf(delta);
    // Guard against N / N^δ landing a rounding error below an exact integer.
    let mut k = x.floor();
    if k + 1.0 <= x * (1.0 + 1e-12) {
        k += 1.0;
    }
    let k = (k as usize).clamp(1, n);
    let n_n = n / k;
    if n_n < 4 {
        return Err(Error::InsufficientResolution { n, delta, n_n });
    }
    Ok(DecelerationParams {
        n,
        delta,
        k,
        h_n: k as f64 / nf,
        n_n,
    })
}
