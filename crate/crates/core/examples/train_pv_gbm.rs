//! Fits the boosted-tree PV model, shows the staged test error and
//! round-trips the model through its text format.
//!
//! ```text
//! cargo run --release --example train_pv_gbm -- [DAYS]
//! ```

use netload_bench::dataio::{load_benchmark_data, DataSources, Partition, SupervisedDataset};
use netload_bench::gbm::{self, GbmConfig, GbmModel};
use netload_bench::scenario::metrics::rmse;
use netload_bench::synth::{write_gefcom_files, SynthConfig};

pub fn synthetic_pv(days: i64) -> netload_bench::Result<SupervisedDataset> {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let p = write_gefcom_files(tmp.path(), &SynthConfig::small(days))?;
    Ok(load_benchmark_data(&DataSources::new(p.load, p.temperature, p.solar))?.pv_dataset)
}

/// Returns the model and its test RMSE (kW).
pub fn run_example(ds: &SupervisedDataset, cfg: &GbmConfig) -> netload_bench::Result<(GbmModel, f64)> {
    let model = gbm::fit(ds, cfg)?;
    let actual = ds.targets(Partition::Test);
    for stages in [0, 10, 50, cfg.estimators] {
        let fc: Vec<f64> = ds
            .rows(Partition::Test)
            .map(|x| model.predict_staged(x, stages))
            .collect::<netload_bench::Result<_>>()?;
        println!("{stages:>4} trees: test RMSE {:.3}", rmse(actual, &fc)?);
    }
    let restored = GbmModel::from_text(&model.to_text())?;
    assert_eq!(restored, model);
    let score = rmse(actual, &gbm::predict_series(&model, ds, Partition::Test)?)?;
    Ok((model, score))
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    let days = std::env::args().nth(1).map_or(365, |d| d.parse().expect("DAYS"));
    run_example(&synthetic_pv(days)?, &GbmConfig::default())?;
    Ok(())
}
