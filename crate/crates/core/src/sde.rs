//! Euler–Maruyama integration of `dX = λ f(X) dt + σ dY` on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{
    FbmSpec, HurstParam, NoiseGenerator, NoiseSpec, RosenblattSpec, SamplePath, SynthesisMethod,
};

/// Default guard on `|X|` before a run is declared a blowup.
pub const BLOWUP_GUARD: f64 = 1e6;

/// Polynomial drift `f(x) = Σ c_j x^j`, restricted to the admissible class:
/// degree at most one, or odd degree with a negative leading coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DriftPoly {
    coefficients: Vec<f64>,
}

impl DriftPoly {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InadmissibleDrift(
                "coefficients must be finite".into(),
            ));
        }
        let poly = Self { coefficients };
        if !poly.is_admissible() {
            return Err(Error::InadmissibleDrift(format!(
                "degree {} with leading coefficient {}; need degree <= 1 or odd degree with negative leading coefficient",
                poly.degree(),
                poly.leading()
            )));
        }
        Ok(poly)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Degree ignoring trailing zero coefficients; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    fn leading(&self) -> f64 {
        self.coefficients.get(self.degree()).copied().unwrap_or(0.0)
    }

    fn is_admissible(&self) -> bool {
        let d = self.degree();
        d <= 1 || (d % 2 == 1 && self.leading() < 0.0)
    }

    /// Whether `λ f` is still admissible.
    pub fn admissible_scaled(&self, lambda: f64) -> bool {
        self.degree() <= 1 || lambda >= 0.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        drift_eval(self, x)
    }
}

impl TryFrom<Vec<f64>> for DriftPoly {
    type Error = Error;
    fn try_from(c: Vec<f64>) -> Result<Self> {
        Self::new(c)
    }
}

impl From<DriftPoly> for Vec<f64> {
    fn from(p: DriftPoly) -> Vec<f64> {
        p.coefficients
    }
}

/// Horner evaluation of the drift polynomial.
pub fn drift_eval(drift: &DriftPoly, x: f64) -> f64 {
    drift
        .coefficients
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c)
}

fn default_inner_ratio() -> usize {
    4
}

/// Driving noise of a model; the step count comes from the model's fine mesh
/// and the seed from the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseModel {
    Rosenblatt {
        h: HurstParam,
        #[serde(default = "default_inner_ratio")]
        inner_ratio: usize,
        #[serde(default)]
        method: SynthesisMethod,
    },
    Fbm {
        h: HurstParam,
    },
}

impl NoiseModel {
    pub fn h(&self) -> HurstParam {
        match self {
            NoiseModel::Rosenblatt { h, .. } | NoiseModel::Fbm { h } => *h,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub x0: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub drift: DriftPoly,
    pub noise: NoiseModel,
    pub fine_steps: usize,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("x0", self.x0),
            ("lambda", self.lambda),
            ("sigma", self.sigma),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        if self.sigma < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "sigma = {} must be nonnegative",
                self.sigma
            )));
        }
        if self.fine_steps == 0 {
            return Err(Error::InvalidArgument("fine_steps must be positive".into()));
        }
        if !self.drift.admissible_scaled(self.lambda) {
            return Err(Error::InadmissibleDrift(format!(
                "lambda = {} flips the sign of the leading coefficient",
                self.lambda
            )));
        }
        if let NoiseModel::Rosenblatt { inner_ratio, .. } = self.noise {
            if inner_ratio == 0 {
                return Err(Error::InvalidArgument(
                    "inner_ratio must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn noise_spec(&self, seed: u64) -> NoiseSpec {
        match self.noise {
            NoiseModel::Rosenblatt {
                h,
                inner_ratio,
                method,
            } => NoiseSpec::Rosenblatt(RosenblattSpec {
                h,
                n_steps: self.fine_steps,
                inner_resolution: inner_ratio * self.fine_steps,
                seed,
                method,
            }),
            NoiseModel::Fbm { h } => NoiseSpec::Fbm(FbmSpec {
                h,
                n_steps: self.fine_steps,
                seed,
            }),
        }
    }
}

/// Solution, driving noise and the model that produced them, on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionPath {
    pub solution: SamplePath,
    pub noise: SamplePath,
    pub model: ModelSpec,
}

pub fn euler_maruyama(model: &ModelSpec, noise_path: &SamplePath) -> Result<SolutionPath> {
    euler_maruyama_with_guard(model, noise_path, BLOWUP_GUARD)
}

pub fn euler_maruyama_with_guard(
    model: &ModelSpec,
    noise_path: &SamplePath,
    guard: f64,
) -> Result<SolutionPath> {
    model.validate()?;
    if noise_path.n_steps() != model.fine_steps {
        return Err(Error::IncompatibleGrid(format!(
            "noise has {} steps but the model mesh has {}",
            noise_path.n_steps(),
            model.fine_steps
        )));
    }
    let dt = 1.0 / model.fine_steps as f64;
    let mut x = model.x0;
    let mut out = Vec::with_capacity(model.fine_steps + 1);
    out.push(x);
    for (k, dy) in noise_path.increments().enumerate() {
        x = x + model.lambda * drift_eval(&model.drift, x) * dt + model.sigma * dy;
        if !x.is_finite() || x.abs() > guard {
            return Err(Error::NumericalBlowup {
                step: k + 1,
                value: x.abs(),
                guard,
            });
        }
        out.push(x);
    }
    Ok(SolutionPath {
        solution: SamplePath::new(out)?,
        noise: noise_path.clone(),
        model: model.clone(),
    })
}

/// Synthesizes the driving noise for `seed` and integrates the model.
pub fn solve(model: &ModelSpec, seed: u64) -> Result<SolutionPath> {
    model.validate()?;
    let noise = NoiseGenerator::new(&model.noise_spec(seed))?.sample(seed);
    euler_maruyama(model, &noise)
}

/// Keeps the points at times `i / n_obs`.
pub fn downsample(path: &SamplePath, n_obs: usize) -> Result<SamplePath> {
    let n = path.n_steps();
    if n_obs == 0 || !n.is_multiple_of(n_obs) {
        return Err(Error::IncompatibleGrid(format!(
            "{n} steps cannot be reduced to {n_obs}"
        )));
    }
    let stride = n / n_obs;
    SamplePath::new(path.values().iter().step_by(stride).copied().collect())
}
