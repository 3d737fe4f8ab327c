use serde::{Deserialize, Serialize};

use super::run::ReplicationResult;
use crate::error::{Error, Result};
use crate::report::Estimator;
use crate::stats::{
    mean, population_variance, quantile_sorted, skewness, standard_normal_quantile,
};

/// True parameter values the estimates are compared against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    pub h: f64,
    pub sigma: f64,
    pub lambda: f64,
}

impl Truth {
    /// Truth for a campaign output name such as `h_hat` or `lambda_plugin`.
    pub fn for_output(&self, output: &str) -> Option<f64> {
        match output {
            "h_hat" => Some(self.h),
            "sigma_hat" => Some(self.sigma),
            "lambda_known" | "lambda_plugin" => Some(self.lambda),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub mean: f64,
    pub bias: f64,
    pub rmse: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub skewness: f64,
    /// Median of `|estimate - truth|`.
    pub median_abs_error: f64,
}

impl CellStats {
    /// Statistics of `values` against `truth`. Values are sorted first so
    /// the result depends only on the multiset of estimates.
    pub fn compute(values: &[f64], truth: f64) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let m = mean(&v);
        let mut sq: Vec<f64> = v.iter().map(|x| (x - truth) * (x - truth)).collect();
        sq.sort_by(f64::total_cmp);
        let mut abs: Vec<f64> = v.iter().map(|x| (x - truth).abs()).collect();
        abs.sort_by(f64::total_cmp);
        Self {
            mean: m,
            bias: m - truth,
            rmse: mean(&sq).sqrt(),
            median: quantile_sorted(&v, 0.5),
            q1: quantile_sorted(&v, 0.25),
            q3: quantile_sorted(&v, 0.75),
            skewness: skewness(&v),
            median_abs_error: quantile_sorted(&abs, 0.5),
        }
    }

    pub fn variance_of(values: &[f64]) -> f64 {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        population_variance(&v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub estimator: String,
    pub n: usize,
    pub truth: f64,
    pub count: usize,
    pub failed: usize,
    /// `None` when fewer than two replications succeeded.
    pub stats: Option<CellStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn get(&self, estimator: &str, n: usize) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.estimator == estimator && r.n == n)
    }

    /// Observation sizes and positive RMSE values of one estimator, in table order.
    pub fn rmse_series(&self, estimator: &str) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.estimator == estimator)
            .filter_map(|r| r.stats.map(|s| (r.n, s.rmse)))
            .collect()
    }
}

const MIN_CELL: usize = 2;

/// Successful estimates of `output` at observation size `n`, plus the failure count.
pub fn cell_values(results: &[ReplicationResult], output: &str, n: usize) -> (Vec<f64>, usize) {
    let mut values = Vec::with_capacity(results.len());
    let mut failed = 0;
    for r in results {
        match r
            .reports
            .iter()
            .find(|rep| rep.n == n)
            .map(|rep| rep.output(output))
        {
            Some(Ok(v)) if v.is_finite() => values.push(v),
            _ => failed += 1,
        }
    }
    (values, failed)
}

fn output_names(estimators: &[Estimator]) -> Vec<&'static str> {
    let mut sorted = estimators.to_vec();
    sorted.sort();
    sorted
        .iter()
        .flat_map(|e| e.outputs().iter().copied())
        .collect()
}

/// Like [`summarize`], but cells with too few successes carry no statistics
/// instead of failing the whole table.
pub fn summarize_partial(
    results: &[ReplicationResult],
    obs_sizes: &[usize],
    estimators: &[Estimator],
    truth: &Truth,
) -> SummaryTable {
    let mut rows = Vec::new();
    for name in output_names(estimators) {
        let t = truth.for_output(name).unwrap_or(f64::NAN);
        for &n in obs_sizes {
            let (values, failed) = cell_values(results, name, n);
            let stats = (values.len() >= MIN_CELL).then(|| CellStats::compute(&values, t));
            rows.push(SummaryRow {
                estimator: name.to_string(),
                n,
                truth: t,
                count: values.len(),
                failed,
                stats,
            });
        }
    }
    SummaryTable { rows }
}

pub fn summarize(
    results: &[ReplicationResult],
    obs_sizes: &[usize],
    estimators: &[Estimator],
    truth: &Truth,
) -> Result<SummaryTable> {
    let table = summarize_partial(results, obs_sizes, estimators, truth);
    if let Some(r) = table.rows.iter().find(|r| r.stats.is_none()) {
        return Err(Error::EmptyCell {
            estimator: r.estimator.clone(),
            n: r.n,
            count: r.count,
            needed: MIN_CELL,
        });
    }
    Ok(table)
}

/// Least-squares slope of `ln(metric)` against `ln(n)`.
pub fn fit_loglog_slope(points: &[(usize, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, m)| *n > 0 && *m > 0.0 && m.is_finite())
        .map(|&(n, m)| ((n as f64).ln(), m.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints(format!(
            "{} usable points, need at least 3",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientPoints(
            "all observation sizes coincide".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// Standardized sample quantiles paired with standard-normal quantiles at
/// plotting positions `(i - 0.5) / R`.
pub fn qq_data(values: &[f64]) -> Result<Vec<(f64, f64)>> {
    const MIN_QQ: usize = 20;
    if values.len() < MIN_QQ {
        return Err(Error::InsufficientPoints(format!(
            "{} estimates, need at least {MIN_QQ}",
            values.len()
        )));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = mean(&v);
    let sd = population_variance(&v).sqrt();
    if !(sd > 0.0) {
        return Err(Error::DegenerateSample(
            "sample standard deviation is zero".into(),
        ));
    }
    let r = v.len() as f64;
    Ok(v.iter()
        .enumerate()
        .map(|(i, x)| (standard_normal_quantile((i as f64 + 0.5) / r), (x - m) / sd))
        .collect())
}

/// One line of `replications.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRow {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub estimator: String,
    pub estimate: Option<f64>,
    pub truth: f64,
    pub error_tag: Option<String>,
}

/// Long-format rows ordered by replication, then observation size, then estimator output.
pub fn replication_rows(
    results: &[ReplicationResult],
    obs_sizes: &[usize],
    estimators: &[Estimator],
    truth: &Truth,
) -> Vec<ReplicationRow> {
    let names = output_names(estimators);
    let mut sorted: Vec<&ReplicationResult> = results.iter().collect();
    sorted.sort_by_key(|r| r.replication_index);
    let mut rows = Vec::with_capacity(results.len() * obs_sizes.len() * names.len());
    for r in sorted {
        for &n in obs_sizes {
            let report = r.reports.iter().find(|rep| rep.n == n);
            for &name in &names {
                let (estimate, error_tag) = match (report, &r.error) {
                    (_, Some(e)) => (None, Some(e.clone())),
                    (None, None) => (None, Some("Missing".to_string())),
                    (Some(rep), None) => match rep.output(name) {
                        Ok(v) => (Some(v), None),
                        Err(tag) => (None, Some(tag)),
                    },
                };
                rows.push(ReplicationRow {
                    index: r.replication_index,
                    seed: r.seed,
                    n,
                    estimator: name.to_string(),
                    estimate,
                    truth: truth.for_output(name).unwrap_or(f64::NAN),
                    error_tag,
                });
            }
        }
    }
    rows
}
