use std::collections::BTreeMap;

use chrono::{Days, NaiveDate};
use loadfpca::curves::{denormalize, normalize_by_max, CurveSet, DailyCurve, TimeGrid};
use loadfpca::fpca::{explained_variability_table, fit};
use loadfpca::metrics::{mae, mape, nmse, ppmcc, rep, PairedSeries};
use loadfpca::pipeline::{
    aggregate_spatial, filter_days, resample_to_grid, CorruptionRule, FilterThresholds,
    LocalStamp, MeasurementRecord,
};
use proptest::prelude::*;

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2016, 1, 1).unwrap()
}

fn set_from(entity: &str, rows: &[Vec<f64>], offsets: &[u64]) -> CurveSet {
    let curves = rows
        .iter()
        .zip(offsets)
        .map(|(r, o)| DailyCurve::new(entity, start() + Days::new(*o), r.clone()))
        .collect();
    CurveSet::new(TimeGrid::uniform(rows[0].len()).unwrap(), entity, curves).unwrap()
}

fn rows(m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.01f64..500.0, m), 2..15)
}

fn distinct_offsets(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::sample::subsequence((0u64..40).collect::<Vec<_>>(), n).prop_shuffle()
}

fn paired() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(1.0f64..100.0, n),
            prop::collection::vec(1.0f64..100.0, n),
        )
    })
}

proptest! {
    #[test]
    fn normalization_round_trips(r in (2usize..6).prop_flat_map(rows)) {
        let offsets: Vec<u64> = (0..r.len() as u64).collect();
        let set = set_from("e", &r, &offsets);
        let norm = normalize_by_max(&set).unwrap();
        prop_assert_eq!(norm.global_max(), Some(1.0));
        prop_assert!(norm.curves().iter().flat_map(|c| &c.values).all(|v| (0.0..=1.0).contains(v)));
        let back = denormalize(&norm).unwrap();
        for (a, b) in set.curves().iter().zip(back.curves()) {
            for (x, y) in a.values.iter().zip(&b.values) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn curve_sets_are_date_ordered(r in rows(3), seed in distinct_offsets(14)) {
        let offsets = &seed[..r.len()];
        let set = set_from("e", &r, offsets);
        prop_assert!(set.dates().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn theta_is_monotone(r in (2usize..7).prop_flat_map(rows)) {
        let offsets: Vec<u64> = (0..r.len() as u64).collect();
        let set = set_from("e", &r, &offsets);
        let (model, _) = fit(&set, r[0].len()).unwrap();
        let table = explained_variability_table(&model).unwrap();
        prop_assert!(table.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!((table.last().unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn metrics_ignore_sample_order((x, y) in paired(), rot in 0usize..30) {
        let k = rot % x.len();
        let mut xr = x.clone();
        let mut yr = y.clone();
        xr.rotate_left(k);
        yr.rotate_left(k);
        let a = PairedSeries::new(&x, &y).unwrap();
        let b = PairedSeries::new(&xr, &yr).unwrap();
        prop_assert!((mape(&a).unwrap() - mape(&b).unwrap()).abs() <= 1e-9);
        prop_assert!((mae(&a) - mae(&b)).abs() <= 1e-9);
        prop_assert!((rep(&a).unwrap() - rep(&b).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn relative_metrics_are_scale_free((x, y) in paired(), c in 0.01f64..1000.0) {
        let xs: Vec<f64> = x.iter().map(|v| v * c).collect();
        let ys: Vec<f64> = y.iter().map(|v| v * c).collect();
        let a = PairedSeries::new(&x, &y).unwrap();
        let b = PairedSeries::new(&xs, &ys).unwrap();
        prop_assert!((mape(&a).unwrap() - mape(&b).unwrap()).abs() <= 1e-9 * (1.0 + mape(&a).unwrap()));
        prop_assert!((rep(&a).unwrap() - rep(&b).unwrap()).abs() <= 1e-9 * (1.0 + rep(&a).unwrap()));
        prop_assert!((mae(&b) - c * mae(&a)).abs() <= 1e-9 * (1.0 + mae(&b)));
        if let (Ok(p), Ok(q)) = (ppmcc(&a), ppmcc(&b)) {
            prop_assert!((p - q).abs() <= 1e-9);
        }
        if let (Ok(p), Ok(q)) = (nmse(&a), nmse(&b)) {
            prop_assert!((p - q).abs() <= 1e-9 * (1.0 + p));
        }
    }

    #[test]
    fn perfect_forecast_has_zero_error(x in prop::collection::vec(1.0f64..100.0, 1..30)) {
        let s = PairedSeries::new(&x, &x).unwrap();
        prop_assert_eq!(mape(&s).unwrap(), 0.0);
        prop_assert_eq!(mae(&s), 0.0);
        prop_assert_eq!(rep(&s).unwrap(), 0.0);
    }

    #[test]
    fn aggregation_commutes_with_date_restriction(
        a in rows(4),
        b in rows(4),
        oa in distinct_offsets(14),
        ob in distinct_offsets(14),
        cut in 0u64..40,
    ) {
        let sa = set_from("A", &a, &oa[..a.len()]);
        let sb = set_from("B", &b, &ob[..b.len()]);
        let map: BTreeMap<String, String> =
            [("A".to_string(), "R".to_string()), ("B".to_string(), "R".to_string())].into();
        let keep = |d: NaiveDate| d < start() + Days::new(cut);
        let then_restrict = aggregate_spatial(&[sa.clone(), sb.clone()], &map).unwrap()[0].filter_dates(keep);
        let restrict_first =
            aggregate_spatial(&[sa.filter_dates(keep), sb.filter_dates(keep)], &map).unwrap();
        prop_assert_eq!(&then_restrict, &restrict_first[0]);
    }

    #[test]
    fn resampling_conserves_mean_power(q in prop::collection::vec(0.0f64..900.0, 96)) {
        let day = NaiveDate::from_ymd_opt(2016, 6, 15).unwrap();
        let records: Vec<MeasurementRecord> = q
            .iter()
            .enumerate()
            .map(|(i, v)| MeasurementRecord {
                entity_id: "S".into(),
                timestamp: LocalStamp::naive(day.and_hms_opt(0, 0, 0).unwrap() + chrono::Duration::minutes(15 * i as i64)),
                power_kw: *v,
            })
            .collect();
        let out = resample_to_grid("S", &records, &TimeGrid::hourly(), chrono_tz::Europe::Rome).unwrap();
        let hourly = &out.curves.curves()[0].values;
        let raw_mean = q.iter().sum::<f64>() / 96.0;
        let hourly_mean = hourly.iter().sum::<f64>() / 24.0;
        prop_assert!((raw_mean - hourly_mean).abs() <= 1e-10 * raw_mean.abs().max(1e-300) + 1e-12);
    }

    #[test]
    fn filtering_twice_changes_nothing(r in rows(3), zeros in prop::collection::vec(any::<bool>(), 14)) {
        let offsets: Vec<u64> = (0..r.len() as u64).collect();
        let mut r = r;
        for (row, z) in r.iter_mut().zip(&zeros) {
            if *z {
                row[1] = 0.0;
            }
        }
        let set = set_from("e", &r, &offsets);
        let t = FilterThresholds { max_corrupted_fraction: 1.0, min_days: 1, ..FilterThresholds::default() };
        let first = filter_days(&set, &[], CorruptionRule::AnyZeroSample, &t);
        let second = filter_days(&first.curves, &[], CorruptionRule::AnyZeroSample, &t);
        prop_assert_eq!(&first.curves, &second.curves);
    }
}
