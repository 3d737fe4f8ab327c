use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::variation::two_variation;
use crate::error::{Error, Result};
use crate::harness::seed_for_replication;
use crate::noise::{HurstParam, NoiseGenerator, NoiseSpec, RosenblattSpec, SynthesisMethod};
use crate::sde::downsample;
use crate::stats::median;

/// One calibrated value of `d(H)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DPoint {
    pub h: f64,
    pub d: f64,
}

/// Source of the constant `d(H)` in the normalization `N^{1-H} / (4 d(H))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DConstant {
    /// The same value for every `H`.
    #[serde(rename = "override")]
    Fixed { value: f64 },
    /// Calibrated points, linearly interpolated; no extrapolation.
    Table { points: Vec<DPoint> },
    /// Leading-order expression `sqrt(2H(2H-1)) / (H(H+1))`, available as an opt-in cross-check.
    LeadingOrder,
}

impl DConstant {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        match self {
            DConstant::Fixed { value } if !positive(*value) => Err(Error::InvalidArgument(
                format!("d(H) override {value} must be positive"),
            )),
            DConstant::Table { points } => {
                if points.is_empty() {
                    return Err(Error::InvalidArgument("d(H) table is empty".into()));
                }
                for w in points.windows(2) {
                    if !(w[1].h > w[0].h) {
                        return Err(Error::InvalidArgument(
                            "d(H) table must be strictly increasing in H".into(),
                        ));
                    }
                }
                for p in points {
                    HurstParam::new(p.h)?;
                    if !positive(p.d) {
                        return Err(Error::InvalidArgument(format!(
                            "d({}) = {} must be positive",
                            p.h, p.d
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, h: HurstParam) -> Result<f64> {
        let hv = h.value();
        match self {
            DConstant::Fixed { value } => Ok(*value),
            DConstant::LeadingOrder => Ok(leading_order_d(h)),
            DConstant::Table { points } => {
                const TIE: f64 = 1e-12;
                let (first, last) = match (points.first(), points.last()) {
                    (Some(f), Some(l)) => (f, l),
                    _ => return Err(Error::MissingCalibration(hv)),
                };
                if (hv - first.h).abs() <= TIE {
                    return Ok(first.d);
                }
                if (hv - last.h).abs() <= TIE {
                    return Ok(last.d);
                }
                if hv < first.h || hv > last.h {
                    return Err(Error::MissingCalibration(hv));
                }
                let j = points.partition_point(|p| p.h <= hv);
                let (a, b) = (points[j - 1], points[j]);
                Ok(a.d + (b.d - a.d) * (hv - a.h) / (b.h - a.h))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DConstant::Fixed { value } => format!("override {value}"),
            DConstant::Table { points } => format!("calibration table ({} points)", points.len()),
            DConstant::LeadingOrder => "leading-order closed form".into(),
        }
    }
}

/// `sqrt(2H(2H-1)) / (H(H+1))`.
pub fn leading_order_d(h: HurstParam) -> f64 {
    let h = h.value();
    (2.0 * h * (2.0 * h - 1.0)).sqrt() / (h * (h + 1.0))
}

/// `d(H)` together with the rate exponents that depend only on `H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateConstants {
    pub d: DConstant,
}

impl RateConstants {
    pub fn alpha_bound(&self, h: HurstParam) -> f64 {
        super::rates::alpha_bound(h)
    }

    pub fn a_opt(&self, h: HurstParam) -> f64 {
        super::rates::rate_a_opt(h)
    }

    pub fn delta_opt(&self, h: HurstParam) -> f64 {
        super::rates::delta_opt(h)
    }
}

pub fn d_of_h(h: HurstParam, config: &RateConstants) -> Result<f64> {
    config.d.value(h)
}

fn default_calibration_n() -> usize {
    16384
}
fn default_calibration_seeds() -> usize {
    500
}
fn default_calibration_ratio() -> usize {
    4
}

/// Monte Carlo settings for calibrating `d(H)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSettings {
    #[serde(default = "default_calibration_n")]
    pub n: usize,
    #[serde(default = "default_calibration_seeds")]
    pub seeds: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_calibration_ratio")]
    pub inner_ratio: usize,
    #[serde(default)]
    pub method: SynthesisMethod,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        Self {
            n: default_calibration_n(),
            seeds: default_calibration_seeds(),
            master_seed: 0,
            inner_ratio: default_calibration_ratio(),
            method: SynthesisMethod::default(),
        }
    }
}

impl CalibrationSettings {
    pub fn validate(&self) -> Result<()> {
        if self.n < 8 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "calibration N = {} must be even and >= 8",
                self.n
            )));
        }
        if self.seeds == 0 || self.inner_ratio == 0 {
            return Err(Error::InvalidArgument(
                "calibration needs positive seeds and inner_ratio".into(),
            ));
        }
        Ok(())
    }
}

/// Calibrated `d(H)` with the same estimate at half the resolution as a stability diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DCalibration {
    pub h: f64,
    pub n: usize,
    pub seeds: usize,
    pub value: f64,
    pub value_half: f64,
    pub relative_difference: f64,
}

/// Median over simulated paths of `N^{1-H} V_N / (4 Z(1))`, whose almost-sure
/// limit is `d(H)`. The half-resolution value reuses the same paths.
pub fn calibrate_d(h: HurstParam, settings: &CalibrationSettings) -> Result<DCalibration> {
    settings.validate()?;
    let n = settings.n;
    let spec = NoiseSpec::Rosenblatt(RosenblattSpec {
        h,
        n_steps: n,
        inner_resolution: settings.inner_ratio * n,
        seed: 0,
        method: settings.method,
    });
    let gen = NoiseGenerator::new(&spec)?;
    let hv = h.value();
    let ratios: Vec<Result<(f64, f64)>> = (0..settings.seeds)
        .into_par_iter()
        .map(|i| {
            let path = gen.sample(seed_for_replication(settings.master_seed, i as u64));
            let z1 = path.last();
            let ratio = |m: usize| -> Result<f64> {
                let p = downsample(&path, m)?;
                let v = two_variation(&p, h)?.v_n;
                Ok((m as f64).powf(1.0 - hv) * v / (4.0 * z1))
            };
            Ok((ratio(n)?, ratio(n / 2)?))
        })
        .collect();
    let mut full = Vec::with_capacity(ratios.len());
    let mut half = Vec::with_capacity(ratios.len());
    for r in ratios {
        let (a, b) = r?;
        full.push(a);
        half.push(b);
    }
    let value = median(&full)?;
    let value_half = median(&half)?;
    if !(value > 0.0) {
        return Err(Error::DegenerateSample(format!(
            "calibrated d(H) = {value} is not positive"
        )));
    }
    Ok(DCalibration {
        h: hv,
        n,
        seeds: settings.seeds,
        value,
        value_half,
        relative_difference: (value - value_half).abs() / value,
    })
}

/// Calibrates every grid value and assembles an interpolation table.
pub fn calibrate_table(
    h_grid: &[f64],
    settings: &CalibrationSettings,
) -> Result<(DConstant, Vec<DCalibration>)> {
    let mut grid: Vec<f64> = h_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut cals = Vec::with_capacity(grid.len());
    for &hv in &grid {
        cals.push(calibrate_d(HurstParam::new(hv)?, settings)?);
    }
    let points = cals.iter().map(|c| DPoint { h: c.h, d: c.value }).collect();
    Ok((DConstant::Table { points }, cals))
}
