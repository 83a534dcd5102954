//! Reads the three competition files and prints what the pipeline built.
//!
//! ```text
//! cargo run --release --example ingest -- [DATA_DIR]
//! ```
//!
//! `DATA_DIR` must hold `Load_history.csv`, `temperature_history.csv` and
//! `solar_predictors.csv`. Without it, 90 days of synthetic data are written
//! to a temporary directory first.

use std::path::Path;

use netload_bench::dataio::{load_benchmark_data, BenchmarkData, DataSources, Partition};
use netload_bench::synth::{write_gefcom_files, SynthConfig, LOAD_FILE, SOLAR_FILE, TEMPERATURE_FILE};

pub fn run_example(dir: &Path) -> netload_bench::Result<BenchmarkData> {
    let src = DataSources::new(dir.join(LOAD_FILE), dir.join(TEMPERATURE_FILE), dir.join(SOLAR_FILE));
    let data = load_benchmark_data(&src)?;
    println!("load rows {} (forward-filled {})", data.load.len(), data.load.gaps().len());
    println!("pv rows {} with {} weather columns", data.pv.len(), data.weather.columns().len());
    for (name, ds) in [("load", &data.load_dataset), ("pv", &data.pv_dataset)] {
        println!(
            "{name} dataset: {} features, {} train rows, {} test rows",
            ds.n_features(),
            ds.partition_len(Partition::Train),
            ds.partition_len(Partition::Test)
        );
    }
    println!("load features: {}", data.load_dataset.feature_names().join(", "));
    Ok(data)
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    match std::env::args().nth(1) {
        Some(dir) => run_example(Path::new(&dir)).map(drop),
        None => {
            let tmp = tempfile::tempdir().expect("temporary directory");
            write_gefcom_files(tmp.path(), &SynthConfig::small(90))?;
            run_example(tmp.path()).map(drop)
        }
    }
}
