//! Monte Carlo experiments on how small p-values arise without a real
//! effect: a constant bias measured with ever larger samples, and the
//! selection of the smallest of many p-values.

mod bias;
pub mod rng;
mod selection;
mod summary;

pub use bias::{
    bias_curve, expected_z, measured_effect, simulate_p_values, simulate_study_p, BiasModelConfig,
};
pub use selection::{min_p_selection, selected_effect_meta, SelectionSimConfig, SignConvention};
pub use summary::{quantile_sorted, RrSummary, SimSummary, SUMMARY_LEVELS};
