//! P-value plots: ranked p-values against their integer ranks.
//!
//! Under the null every p-value is Uniform(0, 1), so the ranked values fall
//! on a straight line from 0 to 1. A real effect or a strong bias shows up
//! as a flat arm of tiny p-values; a mixture of the two gives a bilinear
//! plot. This module fits both readings and classifies the plot.

mod fit;
mod ks;
mod series;
mod shape;
mod svg;

pub use fit::{fit_single_line, fit_two_segment, LineFit, TwoSegmentFit};
pub use ks::{kolmogorov_sf, ks_uniform};
pub use series::{build_series, PlotSeries};
pub use shape::{classify_shape, classify_shape_with, Shape, ShapeConfig, ShapeReport};
pub use svg::{render_svg, SvgOptions};
