use std::path::PathBuf;

use super::calendar::HolidayCalendar;
use super::dataset::{build_load_dataset, build_pv_dataset, virtual_weather_station, SupervisedDataset};
use super::frame::TimeSeriesFrame;
use super::gefcom::{load_gefcom_load, load_gefcom_solar, load_gefcom_temperature, TemperatureUnit};
use crate::error::Result;

/// Where the raw files live and how to read them.
#[derive(Debug, Clone)]
pub struct DataSources {
    pub load_csv: PathBuf,
    pub temperature_csv: PathBuf,
    pub solar_csv: PathBuf,
    pub load_zone: u32,
    pub solar_zone: u32,
    pub temperature_unit: TemperatureUnit,
    pub pv_capacity_kw: f64,
    pub holidays: HolidayCalendar,
}

impl DataSources {
    /// Defaults: aggregate zone 21, solar zone 1, °F station data, a
    /// 100 kW plant (so PV errors read as percent of capacity).
    pub fn new(load_csv: PathBuf, temperature_csv: PathBuf, solar_csv: PathBuf) -> Self {
        Self {
            load_csv,
            temperature_csv,
            solar_csv,
            load_zone: 21,
            solar_zone: 1,
            temperature_unit: TemperatureUnit::Fahrenheit,
            pv_capacity_kw: 100.0,
            holidays: HolidayCalendar::UsFederal,
        }
    }
}

/// Ingested frames (trimmed to their common spans) and the two datasets.
#[derive(Debug, Clone)]
pub struct BenchmarkData {
    pub load: TimeSeriesFrame,
    pub temperature: TimeSeriesFrame,
    pub pv: TimeSeriesFrame,
    pub weather: TimeSeriesFrame,
    pub load_dataset: SupervisedDataset,
    pub pv_dataset: SupervisedDataset,
}

/// Load zone + virtual weather station, aligned to their overlap.
pub fn ingest_load(src: &DataSources) -> Result<(TimeSeriesFrame, TimeSeriesFrame)> {
    let load = load_gefcom_load(&src.load_csv, src.load_zone)?;
    let stations = load_gefcom_temperature(&src.temperature_csv, src.temperature_unit)?;
    let stations = TimeSeriesFrame::align(&stations.iter().collect::<Vec<_>>())?;
    let temperature = virtual_weather_station(&stations)?;
    let mut aligned = TimeSeriesFrame::align(&[&load, &temperature])?.into_iter();
    Ok((aligned.next().unwrap(), aligned.next().unwrap()))
}

pub fn load_benchmark_data(src: &DataSources) -> Result<BenchmarkData> {
    let (load, temperature) = ingest_load(src)?;
    let load_dataset = build_load_dataset(&load, &temperature, &src.holidays)?;
    let solar = load_gefcom_solar(&src.solar_csv, src.solar_zone, src.pv_capacity_kw)?;
    let pv_dataset = build_pv_dataset(&solar.pv, &solar.weather)?;
    Ok(BenchmarkData {
        load,
        temperature,
        pv: solar.pv,
        weather: solar.weather,
        load_dataset,
        pv_dataset,
    })
}
