//! Reliability audit of meta-analyses built on study-level log risk ratios.
//!
//! The pipeline runs in four stages, each in its own module:
//!
//! * [`study`] parses and validates effect tables (`ln_effect`, `se_ln_effect`).
//! * [`inference`] turns each study into a Z-score, a tail-accurate two-sided
//!   p-value and a rank.
//! * [`plot`] builds the rank-vs-p-value plot, fits one- and two-segment
//!   lines, classifies the plot shape and renders it as SVG.
//! * [`pool`] computes fixed-effect and DerSimonian–Laird pooled risk ratios.
//!
//! [`sim`] holds the Monte Carlo experiments showing how a constant bias or
//! a multiple-testing selection step produces small p-values on its own.

// `!(x > 0.0)` is used deliberately so NaN lands on the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod inference;
pub mod plot;
pub mod pool;
pub mod reference;
pub mod sim;
pub mod special;
pub mod study;

pub use error::{Error, Result};
pub use inference::{
    audit, normal_quantile, normal_quantile_upper, two_sided_p, z_score, AuditResult, AuditedStudy,
    DEFAULT_ALPHA,
};
pub use plot::{
    build_series, classify_shape, classify_shape_with, fit_single_line, fit_two_segment,
    ks_uniform, render_svg, LineFit, PlotSeries, Shape, ShapeConfig, ShapeReport, SvgOptions,
    TwoSegmentFit,
};
pub use pool::{
    dersimonian_laird_pool, fixed_effect_pool, to_risk_ratio, PoolMethod, PooledEffect, Z_975,
};
pub use sim::{
    bias_curve, expected_z, measured_effect, min_p_selection, selected_effect_meta,
    simulate_study_p, BiasModelConfig, RrSummary, SelectionSimConfig, SignConvention, SimSummary,
};
pub use study::{
    parse_study_table, validate_dataset, Dataset, DatasetWarning, StudyRecord, TableFormat,
};
