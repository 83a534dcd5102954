//! Readers for the two public competition layouts.
//!
//! * Load / temperature history (2012 track): wide rows
//!   `zone_id|station_id,year,month,day,h1,...,h24`. Column `hK` is the hour
//!   ending at K:00 and is stored at timestamp `day + (K-1)h`. Values may carry
//!   thousands separators (`"16,853"`); empty cells are missing.
//! * Solar track (2014): long rows `ZONEID,TIMESTAMP,VAR78,...,VAR228,POWER`
//!   with `TIMESTAMP` as `YYYYMMDD HH:MM`. `VAR167` (2 m temperature, kelvin)
//!   becomes `temp_c`; every other `VAR*` column is kept under its own name.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use chrono::{Duration, NaiveDate, NaiveDateTime};

use super::frame::{assemble_hourly, TimeSeriesFrame};
use crate::error::{Error, Result};

pub const LOAD_COLUMN: &str = "load_kw";
pub const TEMP_COLUMN: &str = "temp_c";
pub const PV_COLUMN: &str = "pv_kw";
pub const SOLAR_TEMP_VAR: &str = "VAR167";
pub const SOLAR_POWER: &str = "POWER";

/// Unit of the temperatures stored in a history file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TemperatureUnit {
    #[default]
    Fahrenheit,
    Celsius,
}

impl TemperatureUnit {
    fn to_celsius(self, v: f64) -> f64 {
        match self {
            TemperatureUnit::Fahrenheit => (v - 32.0) * 5.0 / 9.0,
            TemperatureUnit::Celsius => v,
        }
    }
}

impl std::str::FromStr for TemperatureUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" | "fahrenheit" => Ok(TemperatureUnit::Fahrenheit),
            "c" | "celsius" => Ok(TemperatureUnit::Celsius),
            other => Err(Error::Config(format!("unknown temperature unit {other:?}"))),
        }
    }
}

fn open_csv(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    if file.metadata().map_err(|e| Error::io(path, e))?.len() == 0 {
        return Err(Error::EmptySeries(path.display().to_string()));
    }
    Ok(csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::SchemaMismatch(format!("{}: {e}", path.display()))
}

fn parse_cell(raw: &str) -> Option<f64> {
    let cleaned: String = raw.chars().filter(|c| *c != ',' && *c != '"').collect();
    let cleaned = cleaned.trim();
    if cleaned.is_empty() {
        return None;
    }
    cleaned.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn find_column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            Error::SchemaMismatch(format!("{}: missing column {name}", path.display()))
        })
}

/// Parses a wide history file into one hourly series per id.
fn read_wide(
    path: &Path,
    id_column: &str,
    wanted: Option<u32>,
) -> Result<BTreeMap<u32, BTreeMap<NaiveDateTime, Vec<Option<f64>>>>> {
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    let id_idx = find_column(&headers, id_column, path)?;
    let year_idx = find_column(&headers, "year", path)?;
    let month_idx = find_column(&headers, "month", path)?;
    let day_idx = find_column(&headers, "day", path)?;
    let hour_idx = (1..=24)
        .map(|h| find_column(&headers, &format!("h{h}"), path))
        .collect::<Result<Vec<_>>>()?;

    let mut out: BTreeMap<u32, BTreeMap<NaiveDateTime, Vec<Option<f64>>>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let Ok(id) = field(id_idx).parse::<u32>() else {
            continue;
        };
        if wanted.is_some_and(|w| w != id) {
            continue;
        }
        let (Ok(y), Ok(m), Ok(d)) = (
            field(year_idx).parse::<i32>(),
            field(month_idx).parse::<u32>(),
            field(day_idx).parse::<u32>(),
        ) else {
            continue;
        };
        let Some(date) = NaiveDate::from_ymd_opt(y, m, d) else {
            continue;
        };
        let midnight = date.and_hms_opt(0, 0, 0).expect("midnight");
        let series = out.entry(id).or_default();
        for (h, &col) in hour_idx.iter().enumerate() {
            let ts = midnight + Duration::hours(h as i64);
            series.insert(ts, vec![parse_cell(field(col))]);
        }
    }
    Ok(out)
}

/// Reads the hourly load of one zone from a wide load-history file.
pub fn load_gefcom_load(path: &Path, zone: u32) -> Result<TimeSeriesFrame> {
    let mut zones = read_wide(path, "zone_id", Some(zone))?;
    let rows = zones.remove(&zone).ok_or_else(|| {
        Error::SchemaMismatch(format!("{}: zone {zone} not present", path.display()))
    })?;
    assemble_hourly(&[LOAD_COLUMN.to_string()], &rows, &path.display().to_string())
}

/// Reads every station of a wide temperature-history file, converted to °C.
pub fn load_gefcom_temperature(path: &Path, unit: TemperatureUnit) -> Result<Vec<TimeSeriesFrame>> {
    let stations = read_wide(path, "station_id", None)?;
    if stations.is_empty() {
        return Err(Error::EmptySeries(path.display().to_string()));
    }
    stations
        .into_values()
        .map(|mut rows| {
            for v in rows.values_mut() {
                v[0] = v[0].map(|t| unit.to_celsius(t));
            }
            assemble_hourly(&[TEMP_COLUMN.to_string()], &rows, &path.display().to_string())
        })
        .collect()
}

/// PV output and the matching weather covariates for one solar zone.
#[derive(Debug, Clone)]
pub struct SolarData {
    pub pv: TimeSeriesFrame,
    pub weather: TimeSeriesFrame,
}

/// Reads one zone of a solar-track file.
///
/// `POWER` (normalised to plant capacity) is multiplied by `capacity_kw`.
pub fn load_gefcom_solar(path: &Path, zone: u32, capacity_kw: f64) -> Result<SolarData> {
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    let zone_idx = find_column(&headers, "ZONEID", path)?;
    let ts_idx = find_column(&headers, "TIMESTAMP", path)?;
    let power_idx = find_column(&headers, SOLAR_POWER, path)?;
    let temp_idx = find_column(&headers, SOLAR_TEMP_VAR, path).map_err(|_| {
        Error::MissingWeatherColumn(format!("{}: {SOLAR_TEMP_VAR}", path.display()))
    })?;
    let weather_idx: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| h.to_ascii_uppercase().starts_with("VAR"))
        .map(|(i, _)| i)
        .collect();

    // temp_c first, then the remaining weather variables in file order
    let mut names = vec![PV_COLUMN.to_string(), TEMP_COLUMN.to_string()];
    let mut source_idx = vec![power_idx, temp_idx];
    for &i in &weather_idx {
        if i != temp_idx {
            names.push(headers[i].to_string());
            source_idx.push(i);
        }
    }

    let mut rows: BTreeMap<NaiveDateTime, Vec<Option<f64>>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        if record.get(zone_idx).and_then(|z| z.parse::<u32>().ok()) != Some(zone) {
            continue;
        }
        let Some(ts) = record
            .get(ts_idx)
            .and_then(|t| NaiveDateTime::parse_from_str(t, "%Y%m%d %H:%M").ok())
        else {
            continue;
        };
        let values = source_idx
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                parse_cell(record.get(i).unwrap_or("")).map(|v| match k {
                    0 => v * capacity_kw,
                    1 => v - 273.15,
                    _ => v,
                })
            })
            .collect();
        rows.insert(ts, values);
    }
    if rows.is_empty() {
        return Err(Error::EmptySeries(path.display().to_string()));
    }
    let frame = assemble_hourly(&names, &rows, &path.display().to_string())?;
    split_solar(frame)
}

fn split_solar(frame: TimeSeriesFrame) -> Result<SolarData> {
    let ts = frame.timestamps().to_vec();
    let mut pv_cols = Vec::new();
    let mut weather_cols = Vec::new();
    for (name, values) in frame.columns() {
        if name == PV_COLUMN {
            pv_cols.push((name.clone(), values.clone()));
        } else {
            weather_cols.push((name.clone(), values.clone()));
        }
    }
    let (pv_gaps, weather_gaps) = frame
        .gaps()
        .iter()
        .cloned()
        .partition(|g| g.column == PV_COLUMN);
    Ok(SolarData {
        pv: TimeSeriesFrame::new(ts.clone(), pv_cols)?.with_gaps(pv_gaps),
        weather: TimeSeriesFrame::new(ts, weather_cols)?.with_gaps(weather_gaps),
    })
}
