mod common;

use std::fmt::Write as _;
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};
use common::hours;
use netload_bench::dataio::{
    build_load_dataset, build_pv_dataset, load_benchmark_data, load_gefcom_load, virtual_weather_station,
    CalendarFeatures, DataSources, HolidayCalendar, Partition, TimeSeriesFrame, LOAD_FEATURES, PV_COLUMN, TEMP_COLUMN,
};
use netload_bench::synth::{write_gefcom_files, SynthConfig};
use netload_bench::Error;
use proptest::prelude::*;

fn wide_file(path: &Path, rows: &[(u32, NaiveDate, [Option<f64>; 24])]) {
    let mut s = String::from("zone_id,year,month,day");
    for h in 1..=24 {
        write!(s, ",h{h}").unwrap();
    }
    s.push('\n');
    for (zone, d, vals) in rows {
        write!(s, "{zone},{},{},{}", d.year(), d.month(), d.day()).unwrap();
        for v in vals {
            match v {
                Some(v) => write!(s, ",\"{}\"", v).unwrap(),
                None => s.push(','),
            }
        }
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn one_zone_file_is_ingested_whole() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("load.csv");
    let d0 = NaiveDate::from_ymd_opt(2005, 3, 1).unwrap();
    let rows: Vec<_> = (0..3)
        .map(|k| (1, d0 + Duration::days(k), std::array::from_fn(|h| Some((k * 24 + h as i64) as f64))))
        .collect();
    wide_file(&path, &rows);
    let f = load_gefcom_load(&path, 1).unwrap();
    assert_eq!(f.len(), 3 * 24);
    assert!(f.gaps().is_empty());
    assert_eq!(f.column("load_kw").unwrap()[30], 30.0);
    assert!(matches!(load_gefcom_load(&path, 2), Err(Error::SchemaMismatch(_))));
    assert!(matches!(load_gefcom_load(&tmp.path().join("nope.csv"), 1), Err(Error::FileNotFound(_))));
}

#[test]
fn missing_hour_is_forward_filled_and_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("load.csv");
    let mut vals: [Option<f64>; 24] = std::array::from_fn(|h| Some(100.0 + h as f64));
    vals[1] = None;
    wide_file(&path, &[(7, NaiveDate::from_ymd_opt(2006, 1, 1).unwrap(), vals)]);
    let f = load_gefcom_load(&path, 7).unwrap();
    let load = f.column("load_kw").unwrap();
    assert_eq!(&load[..3], &[100.0, 100.0, 102.0]);
    assert_eq!(f.gaps().len(), 1);
    assert_eq!(f.gap_report().trim(), "2006-01-01T01:00:00,2006-01-01T00:00:00");
}

#[test]
fn station_mean_reference_cases() {
    let one = TimeSeriesFrame::new(hours(5), vec![(TEMP_COLUMN.into(), vec![1.0, -2.0, 3.5, 0.0, 9.0])]).unwrap();
    assert_eq!(virtual_weather_station(&[one.clone()]).unwrap().column(TEMP_COLUMN), one.column(TEMP_COLUMN));
    let ten = TimeSeriesFrame::new(hours(3), vec![(TEMP_COLUMN.into(), vec![10.0; 3])]).unwrap();
    let twenty = TimeSeriesFrame::new(hours(3), vec![(TEMP_COLUMN.into(), vec![20.0; 3])]).unwrap();
    assert_eq!(virtual_weather_station(&[ten.clone(), twenty]).unwrap().column(TEMP_COLUMN).unwrap(), &[15.0; 3]);
    assert!(matches!(virtual_weather_station(&[]), Err(Error::EmptyInput(_))));
    assert!(matches!(virtual_weather_station(&[ten, one]), Err(Error::TimestampMismatch(_))));
}

#[test]
fn synthetic_history_spans_the_competition_calendar() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write_gefcom_files(tmp.path(), &SynthConfig::default()).unwrap();
    let data = load_benchmark_data(&DataSources::new(p.load, p.temperature, p.solar)).unwrap();
    let at = |s: &str| NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M").unwrap();
    assert_eq!(data.load.first_timestamp(), Some(at("2004-01-01 00:00")));
    assert_eq!(data.load.last_timestamp(), Some(at("2008-06-30 23:00")));
    // hour-ending stamps: the last value of 2014-04-06 is stamped at midnight
    assert_eq!(data.pv.first_timestamp(), Some(at("2012-04-01 01:00")));
    assert_eq!(data.pv.last_timestamp(), Some(at("2014-04-07 00:00")));
    assert_eq!(data.load_dataset.feature_names(), LOAD_FEATURES.map(String::from));
    assert_eq!(data.pv_dataset.n_features(), 12 + 43);
    for ds in [&data.load_dataset, &data.pv_dataset] {
        let train = ds.timestamps_of(Partition::Train);
        let test = ds.timestamps_of(Partition::Test);
        assert!(train.last().unwrap() < test.first().unwrap());
        assert_eq!(train.len(), (ds.len() as f64 * 0.7).floor() as usize);
    }
}

#[test]
fn load_split_arithmetic() {
    for (n, train) in [(1000, 700), (10, 7)] {
        let load = TimeSeriesFrame::new(hours(n), vec![("load_kw".into(), vec![1.0; n])]).unwrap();
        let temp = TimeSeriesFrame::new(hours(n), vec![(TEMP_COLUMN.into(), vec![2.0; n])]).unwrap();
        let ds = build_load_dataset(&load, &temp, &HolidayCalendar::default()).unwrap();
        assert_eq!(ds.partition_len(Partition::Train), train);
        assert_eq!(ds.partition_len(Partition::Test), n - train);
    }
}

#[test]
fn pv_dataset_requires_temperature() {
    let pv = TimeSeriesFrame::new(hours(4), vec![(PV_COLUMN.into(), vec![0.0; 4])]).unwrap();
    let w = TimeSeriesFrame::new(hours(4), vec![("VAR78".into(), vec![0.0; 4])]).unwrap();
    assert!(matches!(build_pv_dataset(&pv, &w), Err(Error::MissingWeatherColumn(_))));
}

fn start_time() -> impl Strategy<Value = NaiveDateTime> {
    (0i64..200_000).prop_map(|h| NaiveDate::from_ymd_opt(2000, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap() + Duration::hours(h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_csv_round_trips(
        t0 in start_time(),
        values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO | prop::num::f64::SUBNORMAL, 1..200),
    ) {
        let ts: Vec<_> = (0..values.len()).map(|i| t0 + Duration::hours(i as i64)).collect();
        let frame = TimeSeriesFrame::new(ts, vec![("v".into(), values)]).unwrap();
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("v.csv");
        frame.write_column_csv("v", &path).unwrap();
        let back = TimeSeriesFrame::read_column_csv(&path, "v").unwrap();
        prop_assert_eq!(back.timestamps(), frame.timestamps());
        let bits = |f: &TimeSeriesFrame| f.column("v").unwrap().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back), bits(&frame));
    }

    #[test]
    fn station_mean_matches_recomputation(
        stations in prop::collection::vec(prop::collection::vec(-40.0f64..45.0, 24), 1..12),
    ) {
        let frames: Vec<_> = stations
            .iter()
            .map(|v| TimeSeriesFrame::new(hours(24), vec![(TEMP_COLUMN.into(), v.clone())]).unwrap())
            .collect();
        let out = virtual_weather_station(&frames).unwrap();
        let got = out.column(TEMP_COLUMN).unwrap();
        for t in 0..24 {
            let want = stations.iter().map(|s| s[t]).sum::<f64>() / stations.len() as f64;
            prop_assert!((got[t] - want).abs() <= 4.0 * f64::EPSILON * want.abs().max(1.0));
        }
    }

    #[test]
    fn pv_one_hot_groups_sum_to_one(t0 in start_time(), n in 1usize..100) {
        let ts: Vec<_> = (0..n).map(|i| t0 + Duration::hours(i as i64)).collect();
        let pv = TimeSeriesFrame::new(ts.clone(), vec![(PV_COLUMN.into(), vec![1.0; n])]).unwrap();
        let w = TimeSeriesFrame::new(ts.clone(), vec![(TEMP_COLUMN.into(), vec![3.0; n]), ("VAR78".into(), vec![0.5; n])]).unwrap();
        let ds = build_pv_dataset(&pv, &w).unwrap();
        for (i, t) in ts.iter().enumerate() {
            let row = &ds.row(i)[2..];
            for (lo, hi) in [(0, 12), (12, 19), (19, 43)] {
                prop_assert_eq!(row[lo..hi].iter().sum::<f64>(), 1.0);
            }
            prop_assert_eq!(row[t.month0() as usize], 1.0);
            prop_assert_eq!(row[19 + t.hour() as usize], 1.0);
        }
    }

    #[test]
    fn calendar_fields_in_range(t0 in start_time()) {
        let c = CalendarFeatures::new(t0, &HolidayCalendar::default());
        prop_assert!((1..=12).contains(&c.month));
        prop_assert!(c.day_of_week <= 6);
        prop_assert!((1..=366).contains(&c.day_of_year));
        prop_assert!(c.hour_of_day <= 23);
    }

    #[test]
    fn split_is_chronological(n in 2usize..500, extra in 0usize..50) {
        let rows: Vec<Vec<f64>> = (0..n + extra).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = (0..n + extra).map(|i| i as f64).collect();
        let ds = common::split_dataset(&rows, &y);
        let train = ds.timestamps_of(Partition::Train);
        let test = ds.timestamps_of(Partition::Test);
        prop_assert_eq!(train.len() + test.len(), n + extra);
        if let (Some(a), Some(b)) = (train.last(), test.first()) {
            prop_assert!(a < b);
        }
        let sub = ds.subsample_train(n / 2 + 1);
        prop_assert!(sub.partition_len(Partition::Train) <= n / 2 + 1);
        prop_assert_eq!(sub.targets(Partition::Test), ds.targets(Partition::Test));
    }
}
