//! Synthesis of Rosenblatt and fractional Brownian sample paths on `[0, 1]`.

mod circulant;
mod fbm;
mod grid;
mod kernel;
mod wick;

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

pub use circulant::{StationaryGaussian, DENSE_FALLBACK_LIMIT};
pub use fbm::FbmGenerator;
pub use grid::KernelGrid;
pub use kernel::{kernel_l, kernel_l_with};
pub use wick::WickSquare;

/// Self-similarity index of the noise, strictly inside `(1/2, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParam(f64);

impl HurstParam {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.5 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidHurst(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for HurstParam {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<HurstParam> for f64 {
    fn from(h: HurstParam) -> f64 {
        h.0
    }
}

impl fmt::Display for HurstParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trajectory observed at `t_i = i / N`, `i = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePath {
    values: Vec<f64>,
}

impl SamplePath {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a sample path needs at least two points, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite path value at index {i}"
            )));
        }
        Ok(Self { values })
    }

    pub fn n_steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.n_steps() as f64
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// Values of `c * X + b`.
    pub fn affine(&self, c: f64, b: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| c * v + b).collect())
    }
}

/// Which discretization of the double Wiener–Itô integral to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthesisMethod {
    /// Wick squares of a stationary Gaussian sequence on the inner grid.
    #[default]
    WickSquare,
    /// Off-diagonal double sum of the kernel over midpoint Wiener cells.
    KernelGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RosenblattSpec {
    pub h: HurstParam,
    pub n_steps: usize,
    pub inner_resolution: usize,
    pub seed: u64,
    #[serde(default)]
    pub method: SynthesisMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FbmSpec {
    pub h: HurstParam,
    pub n_steps: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    Rosenblatt(RosenblattSpec),
    Fbm(FbmSpec),
}

impl NoiseSpec {
    pub fn h(&self) -> HurstParam {
        match self {
            NoiseSpec::Rosenblatt(s) => s.h,
            NoiseSpec::Fbm(s) => s.h,
        }
    }

    pub fn n_steps(&self) -> usize {
        match self {
            NoiseSpec::Rosenblatt(s) => s.n_steps,
            NoiseSpec::Fbm(s) => s.n_steps,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            NoiseSpec::Rosenblatt(s) => s.seed,
            NoiseSpec::Fbm(s) => s.seed,
        }
    }

    /// Grid and resolution checks, without building a generator.
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseSpec::Rosenblatt(s) => validate_rosenblatt(s),
            NoiseSpec::Fbm(s) if s.n_steps == 0 => {
                Err(Error::InvalidArgument("n_steps must be positive".into()))
            }
            NoiseSpec::Fbm(_) => Ok(()),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        match &mut out {
            NoiseSpec::Rosenblatt(s) => s.seed = seed,
            NoiseSpec::Fbm(s) => s.seed = seed,
        }
        out
    }
}

/// Caps on the inner grid size, one per synthesis method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesisBudget {
    pub max_inner_wick: usize,
    pub max_inner_grid: usize,
}

impl Default for SynthesisBudget {
    fn default() -> Self {
        Self {
            max_inner_wick: 1 << 24,
            max_inner_grid: 1 << 17,
        }
    }
}

/// Default inner resolution: four Wiener cells per observation step, capped by the budget.
pub fn default_inner_resolution(n_steps: usize, method: SynthesisMethod) -> usize {
    let budget = SynthesisBudget::default();
    let cap = match method {
        SynthesisMethod::WickSquare => budget.max_inner_wick,
        SynthesisMethod::KernelGrid => budget.max_inner_grid,
    };
    let m = 4 * n_steps;
    if m <= cap {
        m
    } else {
        // Largest multiple of n_steps under the cap, never below n_steps itself.
        (cap / n_steps).max(1) * n_steps
    }
}

/// `C_H^Z = sqrt(2H(2H-1)) / (2 B(1-H, H/2))`.
pub fn c_h_z(h: HurstParam) -> f64 {
    let h = h.value();
    let ln_beta = ln_gamma(1.0 - h) + ln_gamma(0.5 * h) - ln_gamma(1.0 - 0.5 * h);
    (2.0 * h * (2.0 * h - 1.0)).sqrt() / (2.0 * ln_beta.exp())
}

/// `E[X(s) X(t)] = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2`, shared by fBm and the Rosenblatt process.
pub fn covariance_oracle(h: HurstParam, s: f64, t: f64) -> f64 {
    let e = 2.0 * h.value();
    0.5 * (t.powf(e) + s.powf(e) - (t - s).abs().powf(e))
}

/// Autocovariance of unit-step fractional Gaussian noise at lag `k`.
pub fn fgn_autocovariance(h: HurstParam, k: usize) -> f64 {
    let e = 2.0 * h.value();
    if k < 64 {
        let k = k as f64;
        return 0.5 * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e));
    }
    // The direct second difference cancels badly at large lags; expand
    // (1 ± 1/k)^e in even powers of 1/k instead.
    let kf = k as f64;
    let x2 = 1.0 / (kf * kf);
    let mut binom = 1.0;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for n in 1..=24 {
        let nf = n as f64;
        binom *= (e - nf + 1.0) / nf;
        if n % 2 == 0 {
            pow *= x2;
            sum += binom * pow;
        }
    }
    kf.powf(e) * sum
}

/// A reusable sampler for one noise configuration; the expensive spectral
/// set-up is done once and sampling is a pure function of the seed.
#[derive(Clone)]
pub enum NoiseGenerator {
    Wick(WickSquare),
    Grid(KernelGrid),
    Fbm(FbmGenerator),
}

impl NoiseGenerator {
    pub fn new(spec: &NoiseSpec) -> Result<Self> {
        Self::with_budget(spec, SynthesisBudget::default())
    }

    pub fn with_budget(spec: &NoiseSpec, budget: SynthesisBudget) -> Result<Self> {
        match spec {
            NoiseSpec::Rosenblatt(s) => {
                validate_rosenblatt(s)?;
                match s.method {
                    SynthesisMethod::WickSquare => {
                        if s.inner_resolution > budget.max_inner_wick {
                            return Err(Error::ResourceLimit(format!(
                                "inner resolution {} exceeds the Wick-square budget {}",
                                s.inner_resolution, budget.max_inner_wick
                            )));
                        }
                        Ok(Self::Wick(WickSquare::new(
                            s.h,
                            s.n_steps,
                            s.inner_resolution,
                        )?))
                    }
                    SynthesisMethod::KernelGrid => {
                        if s.inner_resolution > budget.max_inner_grid {
                            return Err(Error::ResourceLimit(format!(
                                "inner resolution {} exceeds the kernel-grid budget {}",
                                s.inner_resolution, budget.max_inner_grid
                            )));
                        }
                        Ok(Self::Grid(KernelGrid::new(
                            s.h,
                            s.n_steps,
                            s.inner_resolution,
                        )?))
                    }
                }
            }
            NoiseSpec::Fbm(s) => {
                if s.n_steps == 0 {
                    return Err(Error::InvalidArgument("n_steps must be positive".into()));
                }
                Ok(Self::Fbm(FbmGenerator::new(s.h, s.n_steps)?))
            }
        }
    }

    pub fn n_steps(&self) -> usize {
        match self {
            Self::Wick(g) => g.n_steps(),
            Self::Grid(g) => g.n_steps(),
            Self::Fbm(g) => g.n_steps(),
        }
    }

    pub fn sample(&self, seed: u64) -> SamplePath {
        match self {
            Self::Wick(g) => g.sample(seed),
            Self::Grid(g) => g.sample(seed),
            Self::Fbm(g) => g.sample(seed),
        }
    }
}

fn validate_rosenblatt(s: &RosenblattSpec) -> Result<()> {
    if s.n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be positive".into()));
    }
    if s.inner_resolution < s.n_steps {
        return Err(Error::IncompatibleGrid(format!(
            "inner resolution {} is below n_steps {}",
            s.inner_resolution, s.n_steps
        )));
    }
    if !s.inner_resolution.is_multiple_of(s.n_steps) {
        return Err(Error::IncompatibleGrid(format!(
            "inner resolution {} is not a multiple of n_steps {}",
            s.inner_resolution, s.n_steps
        )));
    }
    Ok(())
}

pub fn simulate_rosenblatt(spec: &RosenblattSpec) -> Result<SamplePath> {
    let seed = spec.seed;
    Ok(NoiseGenerator::new(&NoiseSpec::Rosenblatt(spec.clone()))?.sample(seed))
}

pub fn simulate_fbm(spec: &FbmSpec) -> Result<SamplePath> {
    let seed = spec.seed;
    Ok(NoiseGenerator::new(&NoiseSpec::Fbm(spec.clone()))?.sample(seed))
}

pub(crate) fn cumulative(increments: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let it = increments.into_iter();
    let mut out = Vec::with_capacity(it.size_hint().0 + 1);
    let mut acc = 0.0;
    out.push(acc);
    for d in it {
        acc += d;
        out.push(acc);
    }
    out
}
