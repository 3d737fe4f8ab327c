//! Running a set of estimators on one observed path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{
    estimate_diffusion, estimate_lambda_known, estimate_lambda_plugin, DConstant,
    DiffusionEstimate, DriftEstimate,
};
use crate::noise::{HurstParam, SamplePath};
use crate::sde::DriftPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Joint `(Ĥ, σ̂)`; reported as the two outputs `h_hat` and `sigma_hat`.
    Diffusion,
    LambdaKnown,
    LambdaPlugin,
}

impl Estimator {
    /// Names of the scalar outputs this estimator contributes to a campaign.
    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Estimator::Diffusion => &["h_hat", "sigma_hat"],
            Estimator::LambdaKnown => &["lambda_known"],
            Estimator::LambdaPlugin => &["lambda_plugin"],
        }
    }
}

/// What to estimate and with which known quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimationRequest {
    pub estimators: Vec<Estimator>,
    pub drift: DriftPoly,
    /// True `H`, needed by the known-parameter drift estimator.
    pub h: Option<HurstParam>,
    /// True `σ`, needed by the known-parameter drift estimator.
    pub sigma: Option<f64>,
    pub d: DConstant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub interval_scheme: String,
    pub h: Option<f64>,
    pub sigma: Option<f64>,
    pub drift: Vec<f64>,
    pub d_source: String,
    /// `d(H)` at the known `H`, when it was needed.
    pub d_h: Option<f64>,
    /// Deceleration exponent chosen by the plug-in estimator.
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorFailure {
    pub estimator: Estimator,
    pub kind: String,
    pub message: String,
}

/// Estimates on one path plus every intermediate statistic that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub n: usize,
    pub inputs: ReportInputs,
    pub diffusion: Option<DiffusionEstimate>,
    pub lambda_known: Option<DriftEstimate>,
    pub lambda_plugin: Option<DriftEstimate>,
    pub failures: Vec<EstimatorFailure>,
}

impl EstimationReport {
    /// Scalar output by campaign name, or the error that prevented it.
    pub fn output(&self, name: &str) -> std::result::Result<f64, String> {
        let est = match name {
            "h_hat" | "sigma_hat" => Estimator::Diffusion,
            "lambda_known" => Estimator::LambdaKnown,
            "lambda_plugin" => Estimator::LambdaPlugin,
            _ => return Err("UnknownOutput".into()),
        };
        if let Some(f) = self.failures.iter().find(|f| f.estimator == est) {
            return Err(f.kind.clone());
        }
        let value = match name {
            "h_hat" => self.diffusion.map(|d| d.h_hat),
            "sigma_hat" => self.diffusion.map(|d| d.sigma_hat),
            "lambda_known" => self.lambda_known.as_ref().map(|d| d.lambda_hat),
            _ => self.lambda_plugin.as_ref().map(|d| d.lambda_hat),
        };
        value.ok_or_else(|| "NotRequested".into())
    }
}

fn known_inputs(req: &EstimationRequest) -> Result<(HurstParam, f64, f64)> {
    let h = req
        .h
        .ok_or_else(|| Error::Config("the known-parameter drift estimator needs h".into()))?;
    let sigma = req
        .sigma
        .ok_or_else(|| Error::Config("the known-parameter drift estimator needs sigma".into()))?;
    let d = req.d.value(h)?;
    Ok((h, sigma, d))
}

/// Runs every requested estimator; a failing estimator is recorded and does
/// not prevent the others from running.
pub fn estimate_all(path: &SamplePath, req: &EstimationRequest) -> EstimationReport {
    let mut report = EstimationReport {
        n: path.n_steps(),
        inputs: ReportInputs {
            interval_scheme: "halves [0,1/2] and [1/2,1]".into(),
            h: req.h.map(HurstParam::value),
            sigma: req.sigma,
            drift: req.drift.coefficients().to_vec(),
            d_source: req.d.describe(),
            d_h: None,
            delta: None,
        },
        diffusion: None,
        lambda_known: None,
        lambda_plugin: None,
        failures: Vec::new(),
    };
    let fail = |estimator: Estimator, e: Error, failures: &mut Vec<EstimatorFailure>| {
        failures.push(EstimatorFailure {
            estimator,
            kind: e.kind().into(),
            message: e.to_string(),
        });
    };
    for &est in &req.estimators {
        match est {
            Estimator::Diffusion => match estimate_diffusion(path) {
                Ok(d) => report.diffusion = Some(d),
                Err(e) => fail(est, e, &mut report.failures),
            },
            Estimator::LambdaKnown => {
                let r = known_inputs(req).and_then(|(h, sigma, d)| {
                    report.inputs.d_h = Some(d);
                    estimate_lambda_known(path, &req.drift, h, sigma, d)
                });
                match r {
                    Ok(d) => report.lambda_known = Some(d),
                    Err(e) => fail(est, e, &mut report.failures),
                }
            }
            Estimator::LambdaPlugin => {
                match estimate_lambda_plugin(path, &req.drift, |h| req.d.value(h)) {
                    Ok(d) => {
                        report.inputs.delta = d.plugin.as_ref().map(|p| p.deceleration.delta);
                        report.lambda_plugin = Some(d);
                    }
                    Err(e) => fail(est, e, &mut report.failures),
                }
            }
        }
    }
    report
}
