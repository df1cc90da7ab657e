//! Schema A serialization is lossless: saving any loadable record set and
//! loading it back reproduces every field.

use chrono::NaiveDate;
use fundea_core::data_io::{load_metric_table, save_metric_table, DmuRecord};
use fundea_core::metrics::MetricSet;
use proptest::prelude::*;

fn opt_metric() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![
        3 => prop::option::of(-1000.0..1000.0f64),
        1 => Just(Some(0.0)),
    ]
}

fn record_strategy(index: usize) -> impl Strategy<Value = DmuRecord> {
    (
        "[A-Za-z][A-Za-z0-9 ,&().-]{0,24}[A-Za-z0-9)]",
        prop::option::of(0.0..100_000.0f64),
        prop::option::of((2000i32..2020, 1u32..=12, 1u32..=28)),
        prop::collection::vec(opt_metric(), 12),
        "[a-z]{0,8}",
        "[A-Za-z ]{0,12}",
    )
        .prop_map(move |(name, corpus, date, m, category, sub)| DmuRecord {
            // Suffix keeps names unique across the generated set.
            name: format!("{name} #{index}"),
            category,
            sub_category: sub.trim().to_string(),
            corpus_crore: corpus,
            inception_date: date.map(|(y, mo, d)| NaiveDate::from_ymd_opt(y, mo, d).unwrap()),
            metrics: MetricSet {
                expected_return: m[0],
                beta: m[1],
                std_dev: m[2],
                downside_probability: m[3],
                var_pct_corpus: m[4],
                expense_ratio: m[5],
                exit_load: m[6],
                sharpe: m[7],
                treynor: m[8],
                sortino: m[9],
                jensen_alpha: m[10],
                information_ratio: m[11],
                ..MetricSet::default()
            },
            external_rank: None,
        })
}

fn records_strategy() -> impl Strategy<Value = Vec<DmuRecord>> {
    prop::collection::vec(Just(()), 0..8).prop_flat_map(|slots| {
        slots
            .iter()
            .enumerate()
            .map(|(i, _)| record_strategy(i))
            .collect::<Vec<_>>()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn save_then_load_is_identity(records in records_strategy()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.csv");
        save_metric_table(&path, &records).unwrap();
        let loaded = load_metric_table(&path).unwrap();
        prop_assert_eq!(records, loaded);
    }
}
