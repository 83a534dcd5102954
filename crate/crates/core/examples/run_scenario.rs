//! Runs the clean base case and one attacked scenario on the same model
//! seed, then prints both metric pairs and a few net-load points.
//!
//! ```text
//! cargo run --release --example run_scenario -- [SCENARIO] [DAYS]
//! ```

use netload_bench::attack::NoiseSpec;
use netload_bench::dataio::{load_benchmark_data, DataSources, SupervisedDataset};
use netload_bench::gbm::GbmConfig;
use netload_bench::mlp::TrainConfig;
use netload_bench::scenario::{run_experiment, ExperimentReport, ScenarioId, ScenarioSpec};
use netload_bench::synth::{write_gefcom_files, SynthConfig};

pub fn synthetic(days: i64) -> netload_bench::Result<(SupervisedDataset, SupervisedDataset)> {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let p = write_gefcom_files(tmp.path(), &SynthConfig::small(days))?;
    let data = load_benchmark_data(&DataSources::new(p.load, p.temperature, p.solar))?;
    Ok((data.load_dataset, data.pv_dataset))
}

pub fn run_example(
    id: ScenarioId,
    noise: NoiseSpec,
    load: &SupervisedDataset,
    pv: &SupervisedDataset,
    mlp_cfg: &TrainConfig,
    gbm_cfg: &GbmConfig,
) -> netload_bench::Result<(ExperimentReport, ExperimentReport)> {
    let base = run_experiment(&ScenarioSpec::builtin(ScenarioId::Base, noise), load, pv, mlp_cfg, gbm_cfg)?;
    let attacked = run_experiment(&ScenarioSpec::builtin(id, noise), load, pv, mlp_cfg, gbm_cfg)?;
    for r in [&base, &attacked] {
        println!(
            "{:<4} load MAPE {:6.2}%  PV RMSE {:6.3}  attacked: {}",
            r.scenario_id.as_str(),
            r.load_mape_pct,
            r.pv_rmse,
            if r.attacked_columns.is_empty() { "-".to_string() } else { r.attacked_columns.join(", ") }
        );
    }
    for c in &attacked.attack_counts {
        println!("  {} {} {}: {} values", c.model, c.column, c.partition.as_str(), c.count);
    }
    for p in attacked.net_series.iter().take(3) {
        println!("  {} actual {:8.2} forecast {:8.2}", p.timestamp, p.actual_net, p.forecast_net);
    }
    Ok((base, attacked))
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    let mut args = std::env::args().skip(1);
    let id: ScenarioId = args.next().as_deref().unwrap_or("3a").parse()?;
    let days = args.next().map_or(365, |d| d.parse().expect("DAYS"));
    let (load, pv) = synthetic(days)?;
    run_example(id, NoiseSpec::default(), &load, &pv, &TrainConfig::default(), &GbmConfig::default())?;
    Ok(())
}
