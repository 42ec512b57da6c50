use pvaudit_core::reference::{pm25_allcause, PM25_ALLCAUSE_CSV};
use pvaudit_core::{audit, validate_dataset, DatasetWarning};

/// Printed (z, p, rank) columns of the shipped table, by row.
fn printed_columns() -> Vec<(f64, f64, usize)> {
    let mut rdr = csv::Reader::from_reader(PM25_ALLCAUSE_CSV.as_bytes());
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[6].parse().unwrap(),
                r[7].parse().unwrap(),
                r[8].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn recomputed_z_matches_printed() {
    let a = audit(&pm25_allcause(), 0.05).unwrap();
    let printed = printed_columns();
    assert_eq!(printed.len(), 29);
    for s in a.in_row_order() {
        let (z_printed, _, _) = printed[s.base.row_id - 1];
        let ok = if z_printed.abs() < 1.0 {
            (s.z - z_printed).abs() <= 0.005
        } else {
            ((s.z - z_printed) / z_printed).abs() <= 0.005
        };
        assert!(
            ok,
            "row {}: z {} vs printed {}",
            s.base.row_id, s.z, z_printed
        );
    }
}

#[test]
fn recomputed_p_matches_printed() {
    let a = audit(&pm25_allcause(), 0.05).unwrap();
    let printed = printed_columns();
    for s in a.in_row_order() {
        let (_, p_printed, _) = printed[s.base.row_id - 1];
        let ok = if p_printed < 1e-6 {
            let ratio = s.p / p_printed;
            (0.5..=2.0).contains(&ratio)
        } else {
            (s.p - p_printed).abs() <= 0.002
        };
        assert!(
            ok,
            "row {}: p {:e} vs printed {:e}",
            s.base.row_id, s.p, p_printed
        );
    }
}

#[test]
fn ranks_reproduced_exactly() {
    let a = audit(&pm25_allcause(), 0.05).unwrap();
    let printed = printed_columns();
    for s in &a.studies {
        assert_eq!(
            s.rank,
            printed[s.base.row_id - 1].2,
            "row {}",
            s.base.row_id
        );
    }
    let top = &a.studies[0];
    assert_eq!((top.base.author.as_str(), top.base.year), ("Dai", 2014));
    assert!((top.p / 3.27e-19 - 1.0).abs() < 0.05, "{:e}", top.p);
}

#[test]
fn significance_split() {
    let d = pm25_allcause();
    let a = audit(&d, 0.05).unwrap();
    assert_eq!((a.n_below_alpha, a.n_at_or_above_alpha), (13, 16));
    let strict = audit(&d, 0.01).unwrap();
    assert_eq!((strict.n_below_alpha, strict.n_at_or_above_alpha), (11, 18));
}

#[test]
fn duplicate_author_years_flagged() {
    let pairs: Vec<Vec<usize>> = validate_dataset(&pm25_allcause())
        .into_iter()
        .filter_map(|w| match w {
            DatasetWarning::DuplicateStudy { row_ids, .. } => Some(row_ids),
            _ => None,
        })
        .collect();
    assert_eq!(pairs, vec![vec![7, 22], vec![15, 17], vec![25, 26]]);
}

#[test]
fn no_implausible_values_in_reference() {
    assert!(validate_dataset(&pm25_allcause())
        .iter()
        .all(|w| matches!(w, DatasetWarning::DuplicateStudy { .. })));
}
