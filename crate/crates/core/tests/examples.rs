//! Runs each example's entry point at a small scale.

#[path = "../examples/attack_surface.rs"]
mod attack_surface;
#[path = "../examples/generate_synthetic_data.rs"]
mod generate_synthetic_data;
#[path = "../examples/gradient_check.rs"]
mod gradient_check;
#[path = "../examples/ingest.rs"]
mod ingest;
#[path = "../examples/inject_noise.rs"]
mod inject_noise;
#[path = "../examples/run_scenario.rs"]
mod run_scenario;
#[path = "../examples/run_suite.rs"]
mod run_suite;
#[path = "../examples/train_load_mlp.rs"]
mod train_load_mlp;
#[path = "../examples/train_pv_gbm.rs"]
mod train_pv_gbm;

use netload_bench::attack::NoiseSpec;
use netload_bench::gbm::GbmConfig;
use netload_bench::mlp::TrainConfig;
use netload_bench::scenario::{ScenarioId, SuiteInputs};

#[test]
fn synthetic_files_then_ingest() {
    let tmp = tempfile::tempdir().unwrap();
    let paths = generate_synthetic_data::run_example(tmp.path(), Some(30)).unwrap();
    assert!(paths.load.exists() && paths.temperature.exists() && paths.solar.exists());
    let data = ingest::run_example(tmp.path()).unwrap();
    assert_eq!(data.load.len(), 30 * 24);
    assert_eq!(data.load_dataset.n_features(), 6);
}

#[test]
fn model_training_examples() {
    let cfg = TrainConfig { hidden_units: 10, epochs: 5, ..TrainConfig::default() };
    let (trained, score) = train_load_mlp::run_example(&train_load_mlp::synthetic_load(60).unwrap(), &cfg).unwrap();
    assert!(score.is_finite());
    assert!(trained.loss_history.last().unwrap() < &trained.loss_history[0]);

    let cfg = GbmConfig { estimators: 60, ..GbmConfig::default() };
    let (model, rmse) = train_pv_gbm::run_example(&train_pv_gbm::synthetic_pv(60).unwrap(), &cfg).unwrap();
    assert_eq!(model.trees.len(), 60);
    assert!(rmse.is_finite());
}

#[test]
fn noise_and_surface_examples() {
    let (clean, attacked, flagged) = inject_noise::run_example(1000, &NoiseSpec::default()).unwrap();
    assert_eq!(attacked.indices.len(), 100);
    assert_eq!(clean.len(), attacked.values.len());
    assert!(flagged.len() <= 1000);
    let pct = attack_surface::run_example(attack_surface::PUBLISHED_PV_RMSE_3A, attack_surface::PUBLISHED_PV_RMSE_2A).unwrap();
    assert!((pct - 17.44).abs() < 0.05);
    assert!(gradient_check::run_example(20, 3) < 1e-4);
}

#[test]
fn scenario_and_suite_examples() {
    let (load, pv) = run_scenario::synthetic(60).unwrap();
    let mlp = TrainConfig { hidden_units: 8, epochs: 3, ..TrainConfig::default() };
    let gbm = GbmConfig { estimators: 10, ..GbmConfig::default() };
    let (base, hit) = run_scenario::run_example(ScenarioId::E3b, NoiseSpec::default(), &load, &pv, &mlp, &gbm).unwrap();
    assert!(base.attacked_columns.is_empty());
    assert_eq!(hit.attack_counts.len(), 5);

    let mut inputs = SuiteInputs::new(load, pv);
    inputs.mlp = mlp;
    inputs.gbm = gbm;
    let tmp = tempfile::tempdir().unwrap();
    let result = run_suite::run_example(&inputs, &[1, 2], Some(tmp.path())).unwrap();
    assert_eq!(result.reports.len(), 14);
    assert!(tmp.path().join("results.csv").exists());
}
