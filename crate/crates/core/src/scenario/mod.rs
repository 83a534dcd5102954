//! The seven attack scenarios, their execution, and Table-style summaries.

pub mod metrics;
pub mod report;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use chrono::{Datelike, NaiveDateTime, Timelike};

use crate::attack::{apply_to_dataset, derive_seed, AttackTarget, Column, NoiseSpec, Stream};
use crate::dataio::{Partition, SupervisedDataset, TEMP_COLUMN};
use crate::error::{Error, Result};
use crate::gbm::{self, GbmConfig, GbmModel};
use crate::mlp::{self, MlpModel, TrainConfig};

pub use metrics::{mape, mape_with_floor, net_load, rmse, MapeOutcome, MetricPair, MAPE_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioId {
    Base,
    E1a,
    E1b,
    E2a,
    E2b,
    E3a,
    E3b,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 7] = [
        ScenarioId::Base,
        ScenarioId::E1a,
        ScenarioId::E1b,
        ScenarioId::E2a,
        ScenarioId::E2b,
        ScenarioId::E3a,
        ScenarioId::E3b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Base => "base",
            ScenarioId::E1a => "1a",
            ScenarioId::E1b => "1b",
            ScenarioId::E2a => "2a",
            ScenarioId::E2b => "2b",
            ScenarioId::E3a => "3a",
            ScenarioId::E3b => "3b",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown scenario id {:?}", s.trim())))
    }
}

/// Where a scenario may run. Only labels the attack surface; the
/// computation is identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Central,
    CentralOrIopt,
}

impl Domain {
    /// Whether an edge (IoPT) deployment can face this scenario.
    pub fn allows_iopt(self) -> bool {
        self == Domain::CentralOrIopt
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Central => "central",
            Domain::CentralOrIopt => "central_or_iopt",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: ScenarioId,
    pub domain: Domain,
    pub load_attack: Option<AttackTarget>,
    pub nwp_attack: Option<AttackTarget>,
    pub noise: NoiseSpec,
}

impl ScenarioSpec {
    /// The built-in use case for `id`.
    pub fn builtin(id: ScenarioId, noise: NoiseSpec) -> Self {
        use Partition::{Test, Train};
        let both: &[Partition] = &[Train, Test];
        let load = |p: &[Partition]| Some(AttackTarget::new(Stream::Load, p));
        let nwp = |p: &[Partition]| Some(AttackTarget::new(Stream::Nwp, p));
        let (domain, load_attack, nwp_attack) = match id {
            ScenarioId::Base => (Domain::CentralOrIopt, None, None),
            ScenarioId::E1a => (Domain::Central, load(both), None),
            ScenarioId::E1b => (Domain::Central, load(&[Train]), None),
            ScenarioId::E2a => (Domain::CentralOrIopt, None, nwp(both)),
            ScenarioId::E2b => (Domain::CentralOrIopt, None, nwp(&[Test])),
            ScenarioId::E3a => (Domain::Central, load(both), nwp(both)),
            ScenarioId::E3b => (Domain::Central, load(&[Train]), nwp(both)),
        };
        Self {
            id,
            domain,
            load_attack,
            nwp_attack,
            noise,
        }
    }
}

/// One row of the aligned test window.
#[derive(Debug, Clone, PartialEq)]
pub struct NetPoint {
    pub timestamp: NaiveDateTime,
    pub actual_net: f64,
    pub forecast_net: f64,
    pub temp_clean: f64,
    pub temp_attacked: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackCount {
    pub model: &'static str,
    pub column: String,
    pub partition: Partition,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub scenario_id: ScenarioId,
    pub domain: Domain,
    pub model_seed: u64,
    pub noise_seed: u64,
    pub load_mape_pct: f64,
    pub load_mape_excluded: usize,
    pub pv_rmse: f64,
    /// Load test rows that have a PV test row at the same month, day and
    /// hour; see [`overlay_net_load`].
    pub net_series: Vec<NetPoint>,
    pub attacked_columns: Vec<String>,
    pub attack_counts: Vec<AttackCount>,
}

impl ExperimentReport {
    pub fn metrics(&self) -> MetricPair {
        MetricPair {
            mape_pct: self.load_mape_pct,
            rmse: self.pv_rmse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Mape,
    Rmse,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mape" => Ok(Metric::Mape),
            "rmse" => Ok(Metric::Rmse),
            other => Err(Error::Config(format!("unknown metric {other:?}"))),
        }
    }
}

/// Relative excess error, in percent, of the larger-exposure result `e_a`
/// over the reduced-surface result `e_b`.
pub fn surface_reduction_pct(e_a: f64, e_b: f64) -> Result<f64> {
    if e_b == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(100.0 * (e_a - e_b) / e_b)
}

pub fn attack_surface_comparison(
    report_a: &ExperimentReport,
    report_b: &ExperimentReport,
    metric: Metric,
) -> Result<f64> {
    let pick = |r: &ExperimentReport| match metric {
        Metric::Mape => r.load_mape_pct,
        Metric::Rmse => r.pv_rmse,
    };
    surface_reduction_pct(pick(report_a), pick(report_b))
}

const LOAD_MODEL_TAG: u64 = 0x4c4f4144; // "LOAD"
const PV_MODEL_TAG: u64 = 0x5056; // "PV"

/// Composes net load on the load test window by matching every load test
/// timestamp with the first PV test row at the same (month, day, hour).
/// Load rows without a match are skipped.
pub fn overlay_net_load(
    load_times: &[NaiveDateTime],
    load_actual: &[f64],
    load_forecast: &[f64],
    pv_times: &[NaiveDateTime],
    pv_actual: &[f64],
    pv_forecast: &[f64],
) -> Vec<(usize, NaiveDateTime, f64, f64)> {
    let mut by_hour: HashMap<(u32, u32, u32), usize> = HashMap::new();
    for (j, t) in pv_times.iter().enumerate() {
        by_hour.entry((t.month(), t.day(), t.hour())).or_insert(j);
    }
    load_times
        .iter()
        .enumerate()
        .filter_map(|(i, t)| {
            let j = *by_hour.get(&(t.month(), t.day(), t.hour()))?;
            Some((
                i,
                *t,
                load_actual[i] - pv_actual[j],
                load_forecast[i] - pv_forecast[j],
            ))
        })
        .collect()
}

fn fingerprint(ds: &SupervisedDataset, extra: u64) -> u64 {
    let mut h = DefaultHasher::new();
    extra.hash(&mut h);
    ds.n_features().hash(&mut h);
    let train = ds.range(Partition::Train);
    let w = ds.n_features();
    for v in &ds.features()[train.start * w..train.end * w] {
        v.to_bits().hash(&mut h);
    }
    for v in ds.targets(Partition::Train) {
        v.to_bits().hash(&mut h);
    }
    h.finish()
}

/// Reuses models across scenarios whose training partitions are identical.
#[derive(Default)]
pub(crate) struct ModelCache {
    mlp: HashMap<u64, Arc<MlpModel>>,
    gbm: HashMap<u64, Arc<GbmModel>>,
}

impl ModelCache {
    fn mlp(&mut self, ds: &SupervisedDataset, cfg: &TrainConfig) -> Result<Arc<MlpModel>> {
        let key = fingerprint(ds, cfg_hash_mlp(cfg));
        if let Some(m) = self.mlp.get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(mlp::train(ds, cfg)?);
        self.mlp.insert(key, m.clone());
        Ok(m)
    }

    fn gbm(&mut self, ds: &SupervisedDataset, cfg: &GbmConfig) -> Result<Arc<GbmModel>> {
        let key = fingerprint(ds, cfg_hash_gbm(cfg));
        if let Some(m) = self.gbm.get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(gbm::fit(ds, cfg)?);
        self.gbm.insert(key, m.clone());
        Ok(m)
    }
}

fn cfg_hash_mlp(cfg: &TrainConfig) -> u64 {
    let mut h = DefaultHasher::new();
    (cfg.hidden_units, cfg.learning_rate.to_bits(), cfg.epochs, cfg.batch_size, cfg.seed).hash(&mut h);
    h.finish()
}

fn cfg_hash_gbm(cfg: &GbmConfig) -> u64 {
    let mut h = DefaultHasher::new();
    (cfg.estimators, cfg.shrinkage.to_bits(), cfg.max_depth, cfg.seed).hash(&mut h);
    h.finish()
}

/// Applies a scenario's attacks to one model's dataset.
fn attack_dataset(
    spec: &ScenarioSpec,
    ds: &SupervisedDataset,
    model: &'static str,
    model_tag: u64,
    with_load: bool,
    counts: &mut Vec<AttackCount>,
    columns: &mut Vec<String>,
) -> Result<SupervisedDataset> {
    let noise = spec.noise.with_seed(derive_seed(spec.noise.seed, &[model_tag]));
    let mut current = ds.clone();
    let mut attacks = Vec::new();
    if with_load {
        if let Some(t) = &spec.load_attack {
            attacks.push((t, Column::Target));
        }
    }
    if let Some(t) = &spec.nwp_attack {
        attacks.push((t, Column::feature(TEMP_COLUMN)));
    }
    for (target, column) in attacks {
        let outcome = apply_to_dataset(&current, target, &noise, &column)?;
        for slice in &outcome.attacked {
            columns.push(format!(
                "{model}:{}:{}",
                slice.column,
                slice.partition.as_str()
            ));
            counts.push(AttackCount {
                model,
                column: slice.column.clone(),
                partition: slice.partition,
                count: slice.indices.len(),
            });
        }
        current = outcome.dataset;
    }
    Ok(current)
}

/// The datasets a scenario trains and predicts on.
#[derive(Debug, Clone)]
pub struct AttackedInputs {
    pub load: SupervisedDataset,
    pub pv: SupervisedDataset,
    pub counts: Vec<AttackCount>,
    /// `model:column:partition` labels.
    pub columns: Vec<String>,
}

/// Applies the scenario's attacks: load attacks reach the load target only,
/// weather attacks reach `temp_c` in both datasets.
pub fn attacked_inputs(
    spec: &ScenarioSpec,
    load_ds: &SupervisedDataset,
    pv_ds: &SupervisedDataset,
) -> Result<AttackedInputs> {
    let mut counts = Vec::new();
    let mut columns = Vec::new();
    let load = attack_dataset(spec, load_ds, "load", LOAD_MODEL_TAG, true, &mut counts, &mut columns)?;
    let pv = attack_dataset(spec, pv_ds, "pv", PV_MODEL_TAG, false, &mut counts, &mut columns)?;
    Ok(AttackedInputs {
        load,
        pv,
        counts,
        columns,
    })
}

/// Runs one scenario: attack, train both models, evaluate against the
/// clean test actuals and compose net load.
pub fn run_experiment(
    spec: &ScenarioSpec,
    load_ds: &SupervisedDataset,
    pv_ds: &SupervisedDataset,
    mlp_cfg: &TrainConfig,
    gbm_cfg: &GbmConfig,
) -> Result<ExperimentReport> {
    run_cached(spec, load_ds, pv_ds, mlp_cfg, gbm_cfg, &mut ModelCache::default())
}

pub(crate) fn run_cached(
    spec: &ScenarioSpec,
    load_ds: &SupervisedDataset,
    pv_ds: &SupervisedDataset,
    mlp_cfg: &TrainConfig,
    gbm_cfg: &GbmConfig,
    cache: &mut ModelCache,
) -> Result<ExperimentReport> {
    spec.noise.validate()?;
    let AttackedInputs {
        load: load_att,
        pv: pv_att,
        counts,
        columns,
    } = attacked_inputs(spec, load_ds, pv_ds)?;

    let mlp_model = cache.mlp(&load_att, mlp_cfg)?;
    let load_fc = mlp::predict_series(&mlp_model, &load_att, Partition::Test)?;
    let load_actual = load_ds.targets(Partition::Test);
    let load_mape = mape_with_floor(load_actual, &load_fc, MAPE_FLOOR)?;

    let gbm_model = cache.gbm(&pv_att, gbm_cfg)?;
    let pv_fc = gbm::predict_series(&gbm_model, &pv_att, Partition::Test)?;
    let pv_actual = pv_ds.targets(Partition::Test);
    let pv_rmse = rmse(pv_actual, &pv_fc)?;

    let temp_col = load_ds
        .feature_index(TEMP_COLUMN)
        .ok_or_else(|| Error::UnknownColumn(TEMP_COLUMN.into()))?;
    let temp_clean = load_ds.feature_column(temp_col, Partition::Test);
    let temp_att = load_att.feature_column(temp_col, Partition::Test);
    let net_series = overlay_net_load(
        load_ds.timestamps_of(Partition::Test),
        load_actual,
        &load_fc,
        pv_ds.timestamps_of(Partition::Test),
        pv_actual,
        &pv_fc,
    )
    .into_iter()
    .map(|(i, timestamp, actual_net, forecast_net)| NetPoint {
        timestamp,
        actual_net,
        forecast_net,
        temp_clean: temp_clean[i],
        temp_attacked: temp_att[i],
    })
    .collect();

    Ok(ExperimentReport {
        scenario_id: spec.id,
        domain: spec.domain,
        model_seed: mlp_cfg.seed,
        noise_seed: spec.noise.seed,
        load_mape_pct: load_mape.value,
        load_mape_excluded: load_mape.excluded,
        pv_rmse,
        net_series,
        attacked_columns: columns,
        attack_counts: counts,
    })
}

/// Everything a suite run needs besides the seeds.
#[derive(Debug, Clone)]
pub struct SuiteInputs {
    pub load: SupervisedDataset,
    pub pv: SupervisedDataset,
    pub mlp: TrainConfig,
    pub gbm: GbmConfig,
    pub noise: NoiseSpec,
    /// When set, every seed uses this noise seed instead of its own.
    pub fixed_noise_seed: Option<u64>,
    pub scenarios: Vec<ScenarioId>,
}

impl SuiteInputs {
    pub fn new(load: SupervisedDataset, pv: SupervisedDataset) -> Self {
        Self {
            load,
            pv,
            mlp: TrainConfig::default(),
            gbm: GbmConfig::default(),
            noise: NoiseSpec::default(),
            fixed_noise_seed: None,
            scenarios: ScenarioId::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario_id: ScenarioId,
    pub load_mape_pct: f64,
    pub pv_rmse: f64,
    pub runs: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    /// Ordered by seed, then by scenario.
    pub reports: Vec<ExperimentReport>,
    pub summary: Vec<SummaryRow>,
}

impl SuiteResult {
    pub fn summary_for(&self, id: ScenarioId) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.scenario_id == id)
    }

    pub fn report(&self, id: ScenarioId, model_seed: u64) -> Option<&ExperimentReport> {
        self.reports
            .iter()
            .find(|r| r.scenario_id == id && r.model_seed == model_seed)
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Runs every scenario of `inputs` once per seed. The model seeds equal the
/// run seed; the noise seed too unless `fixed_noise_seed` is set. Seeds run
/// on up to `jobs` threads.
pub fn run_suite(inputs: &SuiteInputs, seeds: &[u64], jobs: usize) -> Result<SuiteResult> {
    use rayon::prelude::*;

    if seeds.is_empty() {
        return Err(Error::Config("at least one seed is required".into()));
    }
    let run_seed = |seed: u64| -> Result<Vec<ExperimentReport>> {
        let mlp_cfg = TrainConfig { seed, ..inputs.mlp };
        let gbm_cfg = GbmConfig { seed, ..inputs.gbm };
        let noise = inputs.noise.with_seed(inputs.fixed_noise_seed.unwrap_or(seed));
        let mut cache = ModelCache::default();
        inputs
            .scenarios
            .iter()
            .map(|id| {
                let spec = ScenarioSpec::builtin(*id, noise);
                run_cached(&spec, &inputs.load, &inputs.pv, &mlp_cfg, &gbm_cfg, &mut cache).map_err(
                    |e| Error::Scenario {
                        scenario: id.as_str().to_string(),
                        source: Box::new(e),
                    },
                )
            })
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let per_seed: Vec<Result<Vec<ExperimentReport>>> =
        pool.install(|| seeds.par_iter().map(|s| run_seed(*s)).collect());
    let mut reports = Vec::new();
    for r in per_seed {
        reports.extend(r?);
    }
    let summary = inputs
        .scenarios
        .iter()
        .map(|id| {
            let rows: Vec<&ExperimentReport> =
                reports.iter().filter(|r| r.scenario_id == *id).collect();
            let mapes: Vec<f64> = rows.iter().map(|r| r.load_mape_pct).collect();
            let rmses: Vec<f64> = rows.iter().map(|r| r.pv_rmse).collect();
            SummaryRow {
                scenario_id: *id,
                load_mape_pct: median(&mapes),
                pv_rmse: median(&rmses),
                runs: rows.len(),
            }
        })
        .collect();
    Ok(SuiteResult { reports, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table() {
        use Partition::{Test, Train};
        let n = NoiseSpec::default();
        let s = |id| ScenarioSpec::builtin(id, n);
        assert!(s(ScenarioId::Base).load_attack.is_none() && s(ScenarioId::Base).nwp_attack.is_none());
        assert_eq!(s(ScenarioId::E1a).load_attack.unwrap().partitions, vec![Train, Test]);
        assert_eq!(s(ScenarioId::E1b).load_attack.unwrap().partitions, vec![Train]);
        assert!(s(ScenarioId::E1b).nwp_attack.is_none());
        assert_eq!(s(ScenarioId::E2a).nwp_attack.unwrap().partitions, vec![Train, Test]);
        assert_eq!(s(ScenarioId::E2b).nwp_attack.unwrap().partitions, vec![Test]);
        assert!(s(ScenarioId::E2b).load_attack.is_none());
        assert_eq!(s(ScenarioId::E3a).load_attack.unwrap().partitions, vec![Train, Test]);
        assert_eq!(s(ScenarioId::E3b).load_attack.unwrap().partitions, vec![Train]);
        assert_eq!(s(ScenarioId::E3b).nwp_attack.unwrap().partitions, vec![Train, Test]);
        for id in ScenarioId::ALL {
            let expected = match id {
                ScenarioId::Base | ScenarioId::E2a | ScenarioId::E2b => Domain::CentralOrIopt,
                _ => Domain::Central,
            };
            assert_eq!(s(id).domain, expected, "{id}");
        }
    }

    #[test]
    fn ids_parse() {
        for id in ScenarioId::ALL {
            assert_eq!(id.as_str().parse::<ScenarioId>().unwrap(), id);
        }
        assert!("4c".parse::<ScenarioId>().is_err());
    }

    #[test]
    fn surface_examples() {
        assert_eq!(surface_reduction_pct(5.0, 5.0).unwrap(), 0.0);
        assert!((surface_reduction_pct(10.1, 8.6).unwrap() - 17.44186).abs() < 1e-4);
        assert!((surface_reduction_pct(8.57, 6.42).unwrap() - 33.489).abs() < 1e-3);
        assert!(matches!(surface_reduction_pct(1.0, 0.0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn median_even_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
