use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::run::{ReplicationResult, ResolvedD};
use super::summary::{
    cell_values, fit_loglog_slope, qq_data, replication_rows, summarize_partial, SummaryTable,
    Truth,
};
use crate::error::Result;
use crate::io::{fmt_f64, write_json, write_text};

/// Contents of `metadata.json` in a campaign directory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignMetadata {
    pub crate_version: &'static str,
    pub truth: Truth,
    pub d_h: ResolvedD,
    /// Present when the campaign uses the reproduction default `sigma = 1`,
    /// a value the benchmark models leave unstated.
    pub sigma_note: Option<&'static str>,
    pub failed_replications: usize,
    /// Cells that did not get a Q-Q file, with the reason.
    pub skipped_qq: Vec<String>,
    pub skipped_slopes: Vec<String>,
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn summary_csv(table: &SummaryTable) -> String {
    let mut s = String::from(
        "estimator,n,truth,count,failed,mean,bias,rmse,median,q1,q3,skewness,median_abs_error\n",
    );
    for r in &table.rows {
        let st = r.stats;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.estimator,
            r.n,
            fmt_f64(r.truth),
            r.count,
            r.failed,
            opt(st.map(|x| x.mean)),
            opt(st.map(|x| x.bias)),
            opt(st.map(|x| x.rmse)),
            opt(st.map(|x| x.median)),
            opt(st.map(|x| x.q1)),
            opt(st.map(|x| x.q3)),
            opt(st.map(|x| x.skewness)),
            opt(st.map(|x| x.median_abs_error)),
        );
    }
    s
}

/// Writes every campaign artifact into the existing directory `dir` and
/// returns the summary table.
pub fn write_campaign(
    dir: &Path,
    config: &ExperimentConfig,
    d: &ResolvedD,
    results: &[ReplicationResult],
) -> Result<SummaryTable> {
    let truth = Truth {
        h: config.model.noise.h().value(),
        sigma: config.model.sigma,
        lambda: config.model.lambda,
    };
    write_json(&dir.join("config.json"), config)?;

    let mut reps = String::from("index,seed,n,estimator,estimate,truth,error_tag\n");
    for r in replication_rows(results, &config.obs_sizes, &config.estimators, &truth) {
        let _ = writeln!(
            reps,
            "{},{},{},{},{},{},{}",
            r.index,
            r.seed,
            r.n,
            r.estimator,
            opt(r.estimate),
            fmt_f64(r.truth),
            r.error_tag.unwrap_or_default()
        );
    }
    write_text(&dir.join("replications.csv"), &reps)?;

    let table = summarize_partial(results, &config.obs_sizes, &config.estimators, &truth);
    write_text(&dir.join("summary.csv"), &summary_csv(&table))?;

    let mut names: Vec<&str> = Vec::new();
    for r in &table.rows {
        if !names.contains(&r.estimator.as_str()) {
            names.push(&r.estimator);
        }
    }
    let mut slopes = String::from("estimator,metric,slope,points\n");
    let mut skipped_slopes = Vec::new();
    for &name in &names {
        let series = table.rmse_series(name);
        match fit_loglog_slope(&series) {
            Ok(b) => {
                let _ = writeln!(slopes, "{name},rmse,{},{}", fmt_f64(b), series.len());
            }
            Err(e) => {
                let _ = writeln!(slopes, "{name},rmse,,{}", series.len());
                skipped_slopes.push(format!("{name}: {e}"));
            }
        }
    }
    write_text(&dir.join("slopes.csv"), &slopes)?;

    let mut skipped_qq = Vec::new();
    for &name in &names {
        for &n in &config.obs_sizes {
            let (values, _) = cell_values(results, name, n);
            match qq_data(&values) {
                Ok(pairs) => {
                    let mut s = String::from("theoretical,sample\n");
                    for (t, q) in pairs {
                        let _ = writeln!(s, "{},{}", fmt_f64(t), fmt_f64(q));
                    }
                    write_text(&dir.join(format!("qq_{name}_{n}.csv")), &s)?;
                }
                Err(e) => skipped_qq.push(format!("{name} N={n}: {e}")),
            }
        }
    }

    let meta = CampaignMetadata {
        crate_version: env!("CARGO_PKG_VERSION"),
        truth,
        d_h: d.clone(),
        sigma_note: (config.model.sigma == 1.0)
            .then_some("sigma = 1 is an assumed reproduction default, not a value taken from the model definitions"),
        failed_replications: results.iter().filter(|r| r.error.is_some()).count(),
        skipped_qq,
        skipped_slopes,
    };
    write_json(&dir.join("metadata.json"), &meta)?;
    Ok(table)
}
