//! Quadratic-variation statistics and the estimators built on them.

mod dconst;
mod diffusion;
mod drift;
mod rates;
mod variation;

pub use dconst::{
    calibrate_d, calibrate_table, d_of_h, leading_order_d, CalibrationSettings, DCalibration,
    DConstant, DPoint, RateConstants,
};
pub use diffusion::{estimate_diffusion, DiffusionEstimate};
pub use drift::{
    estimate_lambda_known, estimate_lambda_plugin, estimate_lambda_plugin_with, riemann_drift_sums,
    DriftEstimate, DriftMode, PluginDetails, PluginOptions,
};
pub use rates::{alpha_bound, deceleration_params, delta_opt, rate_a_opt, DecelerationParams};
pub use variation::{
    decelerated_w, log_two_variation, two_variation, w_statistic, Interval, TwoVariationStats,
    WForm,
};
