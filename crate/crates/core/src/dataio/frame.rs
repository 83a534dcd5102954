use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{Duration, NaiveDateTime};

use crate::error::{Error, Result};

/// Timestamp layout used by every canonical CSV the crate writes.
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

pub fn format_timestamp(ts: NaiveDateTime) -> String {
    ts.format(TIMESTAMP_FORMAT).to_string()
}

pub fn parse_timestamp(raw: &str) -> Result<NaiveDateTime> {
    NaiveDateTime::parse_from_str(raw.trim(), TIMESTAMP_FORMAT)
        .map_err(|e| Error::SchemaMismatch(format!("bad timestamp {raw:?}: {e}")))
}

/// A value that was missing at ingestion and forward-filled from `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilledGap {
    pub timestamp: NaiveDateTime,
    pub source: NaiveDateTime,
    pub column: String,
}

/// Hourly, gap-free table of named real-valued columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesFrame {
    timestamps: Vec<NaiveDateTime>,
    columns: Vec<(String, Vec<f64>)>,
    gaps: Vec<FilledGap>,
}

impl TimeSeriesFrame {
    /// Builds a frame, checking the hourly cadence, column lengths and NaNs.
    pub fn new(timestamps: Vec<NaiveDateTime>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        for pair in timestamps.windows(2) {
            if pair[1] - pair[0] != Duration::hours(1) {
                return Err(Error::TimestampMismatch(format!(
                    "non-hourly step between {} and {}",
                    format_timestamp(pair[0]),
                    format_timestamp(pair[1])
                )));
            }
        }
        for (name, values) in &columns {
            if values.len() != timestamps.len() {
                return Err(Error::SchemaMismatch(format!(
                    "column {name} has {} values for {} timestamps",
                    values.len(),
                    timestamps.len()
                )));
            }
            if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::SchemaMismatch(format!(
                    "column {name} has a non-finite value at {}",
                    format_timestamp(timestamps[i])
                )));
            }
        }
        Ok(Self {
            timestamps,
            columns,
            gaps: Vec::new(),
        })
    }

    pub(crate) fn with_gaps(mut self, gaps: Vec<FilledGap>) -> Self {
        self.gaps = gaps;
        self
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn timestamps(&self) -> &[NaiveDateTime] {
        &self.timestamps
    }

    pub fn first_timestamp(&self) -> Option<NaiveDateTime> {
        self.timestamps.first().copied()
    }

    pub fn last_timestamp(&self) -> Option<NaiveDateTime> {
        self.timestamps.last().copied()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn columns(&self) -> &[(String, Vec<f64>)] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Hours that were forward-filled during ingestion.
    pub fn gaps(&self) -> &[FilledGap] {
        &self.gaps
    }

    /// Rows with `start <= t <= end`. Gap entries outside the window are dropped.
    pub fn slice(&self, start: NaiveDateTime, end: NaiveDateTime) -> Self {
        let lo = self.timestamps.partition_point(|t| *t < start);
        let hi = self.timestamps.partition_point(|t| *t <= end);
        let hi = hi.max(lo);
        Self {
            timestamps: self.timestamps[lo..hi].to_vec(),
            columns: self
                .columns
                .iter()
                .map(|(n, v)| (n.clone(), v[lo..hi].to_vec()))
                .collect(),
            gaps: self
                .gaps
                .iter()
                .filter(|g| g.timestamp >= start && g.timestamp <= end)
                .cloned()
                .collect(),
        }
    }

    /// Trims every frame to the span they all cover.
    pub fn align(frames: &[&TimeSeriesFrame]) -> Result<Vec<TimeSeriesFrame>> {
        let start = frames.iter().filter_map(|f| f.first_timestamp()).max();
        let end = frames.iter().filter_map(|f| f.last_timestamp()).min();
        match (start, end) {
            (Some(s), Some(e)) if s <= e => Ok(frames.iter().map(|f| f.slice(s, e)).collect()),
            _ => Err(Error::TimestampMismatch("frames do not overlap".into())),
        }
    }

    /// Writes one column in the canonical long format (`timestamp,value`).
    pub fn write_column_csv(&self, column: &str, path: &Path) -> Result<()> {
        let values = self
            .column(column)
            .ok_or_else(|| Error::UnknownColumn(column.to_string()))?;
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
            writeln!(out, "timestamp,value")?;
            for (ts, v) in self.timestamps.iter().zip(values) {
                writeln!(out, "{},{}", format_timestamp(*ts), v)?;
            }
            out.flush()
        };
        write(&mut out).map_err(|e| Error::io(path, e))
    }

    /// Reads a canonical long-format CSV back into a one-column frame.
    pub fn read_column_csv(path: &Path, column: &str) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut timestamps = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if lineno == 0 {
                if line.trim() != "timestamp,value" {
                    return Err(Error::SchemaMismatch(format!(
                        "{}: expected header timestamp,value",
                        path.display()
                    )));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (ts, v) = line.split_once(',').ok_or_else(|| {
                Error::SchemaMismatch(format!("{}:{}: missing value", path.display(), lineno + 1))
            })?;
            timestamps.push(parse_timestamp(ts)?);
            values.push(v.trim().parse::<f64>().map_err(|e| {
                Error::SchemaMismatch(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?);
        }
        if timestamps.is_empty() {
            return Err(Error::EmptySeries(path.display().to_string()));
        }
        Self::new(timestamps, vec![(column.to_string(), values)])
    }

    /// Gap report lines, `timestamp,fill_source`, one per filled hour.
    pub fn gap_report(&self) -> String {
        let mut out = String::new();
        let mut last = None;
        for gap in &self.gaps {
            if last == Some(gap.timestamp) {
                continue;
            }
            last = Some(gap.timestamp);
            out.push_str(&format_timestamp(gap.timestamp));
            out.push(',');
            out.push_str(&format_timestamp(gap.source));
            out.push('\n');
        }
        out
    }
}

/// Assembles an hourly frame from sparse per-timestamp observations.
///
/// Leading hours where any column is missing and trailing hours where every
/// column is missing are trimmed; interior holes are forward-filled and
/// recorded as gaps.
pub(crate) fn assemble_hourly(
    names: &[String],
    rows: &std::collections::BTreeMap<NaiveDateTime, Vec<Option<f64>>>,
    source: &str,
) -> Result<TimeSeriesFrame> {
    let width = names.len();
    let first = rows
        .iter()
        .find(|(_, v)| v.iter().all(Option::is_some))
        .map(|(t, _)| *t);
    let last = rows
        .iter()
        .rev()
        .find(|(_, v)| v.iter().any(Option::is_some))
        .map(|(t, _)| *t);
    let (first, last) = match (first, last) {
        (Some(f), Some(l)) if f <= l => (f, l),
        _ => return Err(Error::EmptySeries(source.to_string())),
    };

    let hours = ((last - first).num_hours() + 1) as usize;
    let mut timestamps = Vec::with_capacity(hours);
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(hours); width];
    let mut last_seen: Vec<(f64, NaiveDateTime)> = vec![(f64::NAN, first); width];
    let mut gaps = Vec::new();

    let mut ts = first;
    while ts <= last {
        let row = rows.get(&ts);
        for c in 0..width {
            match row.and_then(|r| r[c]) {
                Some(v) => {
                    last_seen[c] = (v, ts);
                    columns[c].push(v);
                }
                None => {
                    let (v, src) = last_seen[c];
                    columns[c].push(v);
                    gaps.push(FilledGap {
                        timestamp: ts,
                        source: src,
                        column: names[c].clone(),
                    });
                }
            }
        }
        timestamps.push(ts);
        ts += Duration::hours(1);
    }

    let frame = TimeSeriesFrame::new(
        timestamps,
        names.iter().cloned().zip(columns).collect(),
    )?;
    Ok(frame.with_gaps(gaps))
}
