//! Shared fixtures for the criterion benches.

use pvaudit_core::{reference, Dataset};

/// The bundled table replicated `copies` times, for scaling runs.
pub fn replicated_table(copies: usize) -> Dataset {
    let base = reference::pm25_allcause();
    let pairs: Vec<(f64, f64)> = (0..copies)
        .flat_map(|_| base.records.iter().map(|r| (r.ln_effect, r.se_ln_effect)))
        .collect();
    Dataset::from_effects(&pairs).expect("bundled rows are valid")
}
