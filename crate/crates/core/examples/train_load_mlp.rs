//! Trains the load network on synthetic history and scores it on the test
//! window.
//!
//! ```text
//! cargo run --release --example train_load_mlp -- [DAYS] [EPOCHS]
//! ```

use netload_bench::dataio::{load_benchmark_data, DataSources, Partition, SupervisedDataset};
use netload_bench::mlp::{self, TrainConfig, TrainedMlp};
use netload_bench::scenario::metrics::mape;
use netload_bench::synth::{write_gefcom_files, SynthConfig};

pub fn synthetic_load(days: i64) -> netload_bench::Result<SupervisedDataset> {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let p = write_gefcom_files(tmp.path(), &SynthConfig::small(days))?;
    Ok(load_benchmark_data(&DataSources::new(p.load, p.temperature, p.solar))?.load_dataset)
}

/// Returns the trained network and its test MAPE in percent.
pub fn run_example(ds: &SupervisedDataset, cfg: &TrainConfig) -> netload_bench::Result<(TrainedMlp, f64)> {
    let trained = mlp::train_with_history(ds, cfg)?;
    let forecast = mlp::predict_series(&trained.model, ds, Partition::Test)?;
    let score = mape(ds.targets(Partition::Test), &forecast)?;
    let h = &trained.loss_history;
    println!("training loss {:.5} -> {:.5} over {} epochs", h[0], h[h.len() - 1], h.len() - 1);
    println!("test MAPE {score:.2}%");
    Ok((trained, score))
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    let mut args = std::env::args().skip(1);
    let days = args.next().map_or(365, |d| d.parse().expect("DAYS"));
    let epochs = args.next().map_or(100, |e| e.parse().expect("EPOCHS"));
    let ds = synthetic_load(days)?;
    run_example(&ds, &TrainConfig { epochs, ..TrainConfig::default() })?;
    Ok(())
}
