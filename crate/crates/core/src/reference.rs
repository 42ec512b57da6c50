//! The bundled PM2.5 all-cause mortality table (29 studies).

use crate::study::{parse_study_table, Dataset, TableFormat};

/// Raw CSV as shipped in `data/orellano_a5_pm25_allcause.csv`.
pub const PM25_ALLCAUSE_CSV: &str = include_str!("../../../data/orellano_a5_pm25_allcause.csv");

pub fn pm25_allcause() -> Dataset {
    let mut d =
        parse_study_table(PM25_ALLCAUSE_CSV, TableFormat::Csv).expect("bundled table parses");
    d.label = "PM2.5 / all-cause mortality".into();
    d
}

/// The 29 standard errors, in row order.
pub fn pm25_allcause_standard_errors() -> Vec<f64> {
    pm25_allcause().standard_errors()
}
