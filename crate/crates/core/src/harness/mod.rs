//! Replicated Monte Carlo campaigns: configuration, execution, aggregation and persistence.

mod config;
mod output;
mod run;
mod summary;

pub use config::{DSource, ExperimentConfig};
pub use output::{write_campaign, CampaignMetadata};
pub use run::{resolve_d, run_experiment, run_experiment_with_d, ReplicationResult, ResolvedD};
pub use summary::{
    cell_values, fit_loglog_slope, qq_data, replication_rows, summarize, summarize_partial,
    CellStats, ReplicationRow, SummaryRow, SummaryTable, Truth,
};

/// SplitMix64 finalizer applied to `master + (index + 1) * 0x9E3779B97F4A7C15`.
pub fn seed_for_replication(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
