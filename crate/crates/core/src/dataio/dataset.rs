use std::ops::Range;

use chrono::NaiveDateTime;

use super::calendar::{CalendarFeatures, HolidayCalendar};
use super::frame::{format_timestamp, TimeSeriesFrame};
use super::gefcom::{LOAD_COLUMN, PV_COLUMN, TEMP_COLUMN};
use crate::error::{Error, Result};

/// Share of rows (rounded down) that go to the training partition.
pub const TRAIN_FRACTION: f64 = 0.70;

/// Feature order used by the load model.
pub const LOAD_FEATURES: [&str; 6] = [
    TEMP_COLUMN,
    "month",
    "day_of_week",
    "day_of_year",
    "holiday",
    "hour_of_day",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Partition {
    Train,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 2] = [Partition::Train, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Test => "test",
        }
    }
}

/// Row-major feature matrix, target and a chronological train/test boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct SupervisedDataset {
    timestamps: Vec<NaiveDateTime>,
    feature_names: Vec<String>,
    features: Vec<f64>,
    target: Vec<f64>,
    split: usize,
}

impl SupervisedDataset {
    /// Builds a dataset with the default 70/30 chronological split.
    pub fn new(
        timestamps: Vec<NaiveDateTime>,
        feature_names: Vec<String>,
        features: Vec<f64>,
        target: Vec<f64>,
    ) -> Result<Self> {
        let split = (target.len() as f64 * TRAIN_FRACTION).floor() as usize;
        Self::with_split(timestamps, feature_names, features, target, split)
    }

    pub fn with_split(
        timestamps: Vec<NaiveDateTime>,
        feature_names: Vec<String>,
        features: Vec<f64>,
        target: Vec<f64>,
        split: usize,
    ) -> Result<Self> {
        let rows = target.len();
        let width = feature_names.len();
        if timestamps.len() != rows || features.len() != rows * width {
            return Err(Error::SchemaMismatch(format!(
                "dataset shape: {} timestamps, {} targets, {} feature cells for {} columns",
                timestamps.len(),
                rows,
                features.len(),
                width
            )));
        }
        if split > rows {
            return Err(Error::SchemaMismatch(format!("split {split} beyond {rows} rows")));
        }
        if features.iter().chain(&target).any(|v| v.is_nan()) {
            return Err(Error::SchemaMismatch("dataset contains NaN".into()));
        }
        Ok(Self {
            timestamps,
            feature_names,
            features,
            target,
            split,
        })
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn timestamps(&self) -> &[NaiveDateTime] {
        &self.timestamps
    }

    /// Index of the first test row.
    pub fn split_index(&self) -> usize {
        self.split
    }

    pub fn range(&self, partition: Partition) -> Range<usize> {
        match partition {
            Partition::Train => 0..self.split,
            Partition::Test => self.split..self.len(),
        }
    }

    pub fn partition_len(&self, partition: Partition) -> usize {
        self.range(partition).len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.n_features();
        &self.features[i * w..(i + 1) * w]
    }

    pub fn rows(&self, partition: Partition) -> impl Iterator<Item = &[f64]> {
        self.range(partition).map(move |i| self.row(i))
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn targets(&self, partition: Partition) -> &[f64] {
        &self.target[self.range(partition)]
    }

    pub fn timestamps_of(&self, partition: Partition) -> &[NaiveDateTime] {
        &self.timestamps[self.range(partition)]
    }

    /// Values of one feature column over a partition.
    pub fn feature_column(&self, col: usize, partition: Partition) -> Vec<f64> {
        let w = self.n_features();
        self.range(partition)
            .map(|i| self.features[i * w + col])
            .collect()
    }

    pub(crate) fn set_feature_column(&mut self, col: usize, partition: Partition, values: &[f64]) {
        let w = self.n_features();
        for (i, v) in self.range(partition).zip(values) {
            self.features[i * w + col] = *v;
        }
    }

    pub(crate) fn set_targets(&mut self, partition: Partition, values: &[f64]) {
        let r = self.range(partition);
        self.target[r].copy_from_slice(values);
    }

    /// Keeps only the most recent `max_rows` training rows; the test
    /// partition is untouched.
    pub fn subsample_train(&self, max_rows: usize) -> Self {
        let drop = self.split.saturating_sub(max_rows);
        if drop == 0 {
            return self.clone();
        }
        let w = self.n_features();
        Self {
            timestamps: self.timestamps[drop..].to_vec(),
            feature_names: self.feature_names.clone(),
            features: self.features[drop * w..].to_vec(),
            target: self.target[drop..].to_vec(),
            split: self.split - drop,
        }
    }
}

fn check_aligned(a: &TimeSeriesFrame, b: &TimeSeriesFrame) -> Result<()> {
    if a.timestamps() != b.timestamps() {
        let detail = match (a.first_timestamp(), b.first_timestamp()) {
            (Some(x), Some(y)) => format!(
                "{} rows from {} vs {} rows from {}",
                a.len(),
                format_timestamp(x),
                b.len(),
                format_timestamp(y)
            ),
            _ => "one frame is empty".to_string(),
        };
        return Err(Error::TimestampMismatch(detail));
    }
    Ok(())
}

/// Averages station temperatures into a single `temp_c` series.
pub fn virtual_weather_station(stations: &[TimeSeriesFrame]) -> Result<TimeSeriesFrame> {
    let first = stations.first().ok_or(Error::EmptyInput("no weather stations"))?;
    let mut columns = Vec::with_capacity(stations.len());
    for s in stations {
        check_aligned(first, s)?;
        let col = s
            .column(TEMP_COLUMN)
            .or_else(|| s.columns().first().map(|(_, v)| v.as_slice()))
            .ok_or(Error::EmptyInput("station without columns"))?;
        columns.push(col);
    }
    let n = stations.len() as f64;
    let mean = (0..first.len())
        .map(|t| columns.iter().map(|c| c[t]).sum::<f64>() / n)
        .collect();
    let gaps = stations.iter().flat_map(|s| s.gaps().iter().cloned()).collect();
    Ok(TimeSeriesFrame::new(
        first.timestamps().to_vec(),
        vec![(TEMP_COLUMN.to_string(), mean)],
    )?
    .with_gaps(gaps))
}

/// Load model inputs: temperature plus integer-coded calendar variables.
pub fn build_load_dataset(
    load: &TimeSeriesFrame,
    temp: &TimeSeriesFrame,
    holidays: &HolidayCalendar,
) -> Result<SupervisedDataset> {
    check_aligned(load, temp)?;
    let load_kw = load
        .column(LOAD_COLUMN)
        .ok_or_else(|| Error::UnknownColumn(LOAD_COLUMN.into()))?;
    let temp_c = temp
        .column(TEMP_COLUMN)
        .ok_or_else(|| Error::MissingWeatherColumn(TEMP_COLUMN.into()))?;
    let mut features = Vec::with_capacity(load.len() * LOAD_FEATURES.len());
    for (ts, t) in load.timestamps().iter().zip(temp_c) {
        let cal = CalendarFeatures::new(*ts, holidays);
        features.extend_from_slice(&[
            *t,
            cal.month as f64,
            cal.day_of_week as f64,
            cal.day_of_year as f64,
            if cal.holiday { 1.0 } else { 0.0 },
            cal.hour_of_day as f64,
        ]);
    }
    SupervisedDataset::new(
        load.timestamps().to_vec(),
        LOAD_FEATURES.iter().map(|s| s.to_string()).collect(),
        features,
        load_kw.to_vec(),
    )
}

/// PV model inputs: every weather column, then one-hot month (12),
/// day of week (7) and hour of day (24).
pub fn build_pv_dataset(pv: &TimeSeriesFrame, weather: &TimeSeriesFrame) -> Result<SupervisedDataset> {
    check_aligned(pv, weather)?;
    let pv_kw = pv
        .column(PV_COLUMN)
        .ok_or_else(|| Error::UnknownColumn(PV_COLUMN.into()))?;
    if weather.column(TEMP_COLUMN).is_none() {
        return Err(Error::MissingWeatherColumn(TEMP_COLUMN.into()));
    }
    let mut names: Vec<String> = weather.column_names().map(str::to_string).collect();
    names.extend((1..=12).map(|m| format!("month_{m}")));
    names.extend((0..7).map(|d| format!("dow_{d}")));
    names.extend((0..24).map(|h| format!("hour_{h}")));

    let holidays = HolidayCalendar::Dates(Default::default());
    let n_weather = weather.columns().len();
    let mut features = Vec::with_capacity(pv.len() * names.len());
    for (i, ts) in pv.timestamps().iter().enumerate() {
        features.extend(weather.columns().iter().map(|(_, v)| v[i]));
        let cal = CalendarFeatures::new(*ts, &holidays);
        let base = features.len();
        features.resize(base + 43, 0.0);
        features[base + (cal.month - 1) as usize] = 1.0;
        features[base + 12 + cal.day_of_week as usize] = 1.0;
        features[base + 19 + cal.hour_of_day as usize] = 1.0;
    }
    debug_assert_eq!(names.len(), n_weather + 43);
    SupervisedDataset::new(pv.timestamps().to_vec(), names, features, pv_kw.to_vec())
}
