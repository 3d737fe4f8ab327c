//! Strict JSON configuration documents, one per command.

use std::path::PathBuf;

use rblab_core::estimators::{CalibrationSettings, DConstant};
use rblab_core::harness::ExperimentConfig;
use rblab_core::noise::HurstParam;
use rblab_core::report::Estimator;
use rblab_core::sde::{DriftPoly, ModelSpec};
use rblab_core::NoiseSpec;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Input of `solve`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub model: ModelSpec,
    #[serde(default)]
    pub seed: u64,
}

/// Input of `estimate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    /// Path CSV to estimate from; relative paths resolve against the working directory.
    pub input: PathBuf,
    pub estimators: Vec<Estimator>,
    pub drift: DriftPoly,
    #[serde(default)]
    pub h: Option<HurstParam>,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub d: Option<DConstant>,
}

/// Input of `calibrate-d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateConfig {
    #[serde(default)]
    pub h_grid: Vec<f64>,
    #[serde(default)]
    pub settings: CalibrationSettings,
}

/// Domain checks that run right after deserialization.
pub trait Validate {
    fn validate_doc(&self) -> CliResult<()>;
}

fn range(path: &str, e: rblab_core::Error) -> CliError {
    CliError::Range {
        path: path.into(),
        message: e.to_string(),
    }
}

impl Validate for NoiseSpec {
    fn validate_doc(&self) -> CliResult<()> {
        self.validate().map_err(|e| range(".", e))
    }
}

impl Validate for SolveConfig {
    fn validate_doc(&self) -> CliResult<()> {
        self.model.validate().map_err(|e| range("model", e))
    }
}

impl Validate for EstimateConfig {
    fn validate_doc(&self) -> CliResult<()> {
        if self.estimators.is_empty() {
            return Err(CliError::Range {
                path: "estimators".into(),
                message: "at least one estimator is required".into(),
            });
        }
        if let Some(s) = self.sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(CliError::Range {
                    path: "sigma".into(),
                    message: format!("sigma = {s} must be nonnegative"),
                });
            }
        }
        if self.estimators.contains(&Estimator::LambdaKnown)
            && (self.h.is_none() || self.sigma.is_none())
        {
            return Err(CliError::Range {
                path: "estimators".into(),
                message: "lambda_known needs both h and sigma".into(),
            });
        }
        let needs_d = self.estimators.iter().any(|e| *e != Estimator::Diffusion);
        match &self.d {
            Some(d) => d.validate().map_err(|e| range("d", e)),
            None if needs_d => Err(CliError::Range {
                path: "d".into(),
                message: "drift estimators need a d(H) source".into(),
            }),
            None => Ok(()),
        }
    }
}

impl Validate for CalibrateConfig {
    fn validate_doc(&self) -> CliResult<()> {
        if self.h_grid.is_empty() {
            return Err(CliError::Range {
                path: "h_grid".into(),
                message: "at least one H value is required".into(),
            });
        }
        for (i, &h) in self.h_grid.iter().enumerate() {
            HurstParam::new(h).map_err(|e| range(&format!("h_grid[{i}]"), e))?;
        }
        self.settings.validate().map_err(|e| range("settings", e))
    }
}

impl Validate for ExperimentConfig {
    fn validate_doc(&self) -> CliResult<()> {
        self.validate().map_err(|e| range(".", e))
    }
}

/// Applies one `key=value` override. The value is parsed as JSON and taken
/// as a plain string when that fails; numeric segments index arrays.
pub fn apply_override(doc: &mut Value, assignment: &str) -> CliResult<()> {
    let (key, raw) = assignment.split_once('=').ok_or_else(|| {
        CliError::Usage(format!(
            "override `{assignment}` is not of the form key=value"
        ))
    })?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(CliError::Usage(format!(
            "override key `{key}` has an empty segment"
        )));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let segments: Vec<&str> = key.split('.').collect();
    let mut cur = doc;
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        if cur.is_null() {
            *cur = Value::Object(Default::default());
        }
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(seg.to_string(), value);
                    return Ok(());
                }
                map.entry(seg.to_string()).or_insert(Value::Null)
            }
            Value::Array(items) => {
                let idx: usize = seg.parse().map_err(|_| {
                    CliError::Usage(format!("`{seg}` in `{key}` must index an array"))
                })?;
                let len = items.len();
                let slot = items.get_mut(idx).ok_or_else(|| {
                    CliError::Usage(format!(
                        "index {idx} in `{key}` is out of bounds ({len} items)"
                    ))
                })?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(CliError::Usage(format!("`{key}` descends into a scalar"))),
        };
    }
    Ok(())
}

const SCHEMA_PREFIXES: &[&str] = &[
    "unknown field",
    "missing field",
    "invalid type",
    "invalid length",
    "invalid value",
    "unknown variant",
    "duplicate field",
    "expected",
    "data did not match",
];

/// Deserializes and validates a document. Shape problems become
/// [`CliError::Schema`]; domain violations, whether raised by a checked
/// constructor during deserialization or by validation afterwards, become
/// [`CliError::Range`].
pub fn parse_value<T: DeserializeOwned + Validate>(doc: Value) -> CliResult<T> {
    let parsed: T = serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().to_string();
        if SCHEMA_PREFIXES.iter().any(|p| message.starts_with(p)) {
            CliError::Schema { path, message }
        } else {
            CliError::Range { path, message }
        }
    })?;
    parsed.validate_doc()?;
    Ok(parsed)
}

/// Parses JSON text, applies overrides, then deserializes and validates.
pub fn parse_config<T: DeserializeOwned + Validate>(
    text: &str,
    overrides: &[String],
) -> CliResult<T> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| CliError::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    parse_value(doc)
}
