//! Ingestion of the competition CSV layouts, the virtual weather station,
//! calendar features and chronologically split supervised datasets.

pub mod calendar;
pub mod dataset;
pub mod frame;
pub mod gefcom;
pub mod pipeline;

pub use calendar::{us_federal_holidays, CalendarFeatures, HolidayCalendar};
pub use dataset::{
    build_load_dataset, build_pv_dataset, virtual_weather_station, Partition, SupervisedDataset,
    LOAD_FEATURES, TRAIN_FRACTION,
};
pub use frame::{format_timestamp, parse_timestamp, FilledGap, TimeSeriesFrame};
pub use gefcom::{
    load_gefcom_load, load_gefcom_solar, load_gefcom_temperature, SolarData, TemperatureUnit,
    LOAD_COLUMN, PV_COLUMN, TEMP_COLUMN,
};
pub use pipeline::{ingest_load, load_benchmark_data, BenchmarkData, DataSources};
