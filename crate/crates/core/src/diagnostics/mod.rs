//! Convergence, mixing and trajectory diagnostics, and the tuning advisor.

mod modes;
mod report;
mod rhat;
mod series;
mod tuning;

pub use modes::{
    carried_labels, count_mode_hops, visited_modes, ModeClassifier, NearestReferenceClassifier, ProjectionClassifier,
};
pub use report::{ChainSummary, DeltaHSummary, DiagnosticsReport, VariableRhat};
pub use rhat::{average_ranks, rank_normalized_rhat, split_rhat_of};
pub use series::{effective_sample_size, estimate_oscillation_frequency, ks_critical_1pct, ks_statistic, time_to_reach};
pub use tuning::{
    delta_h_trace, delta_h_trace_from, eps_max_for, k_min_for, pilot_vbar_trace, recommend_tuning, PilotOptions,
    TuningAdvice,
};
