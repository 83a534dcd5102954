//! Command-line front end: `ingest`, `run` and `validate`.
//!
//! Configuration is a flat `key = value` file (`#` starts a comment).
//! Command-line flags override file keys; unspecified keys take the
//! defaults listed in [`RunConfig::default`]. Every `run` writes
//! `manifest.txt`, a complete config file with all defaults resolved.
//!
//! Exit codes: 0 success, 1 config error, 2 data error, 3 training error,
//! 4 evaluation error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::attack::NoiseSpec;
use crate::dataio::{
    format_timestamp, ingest_load, load_benchmark_data, load_gefcom_solar, DataSources, HolidayCalendar,
    TemperatureUnit, TimeSeriesFrame, LOAD_COLUMN, PV_COLUMN, TEMP_COLUMN,
};
use crate::error::{Error, Result};
use crate::gbm::GbmConfig;
use crate::mlp::TrainConfig;
use crate::scenario::{report, run_suite, ScenarioId, ScenarioSpec, SuiteInputs};

/// Seed fallback when neither a flag nor the config names seeds.
pub const SEED_ENV: &str = "NETLOAD_BENCH_SEED";

#[derive(Debug, Parser)]
#[command(name = "netload-bench", version, about = "Net-load forecasting under noise-injection attacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalise raw files into canonical timestamp,value CSVs.
    Ingest(CommonArgs),
    /// Run scenarios and write results, report, plot data and manifest.
    Run(CommonArgs),
    /// Check a configuration without running anything.
    Validate(CommonArgs),
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    load_csv: Option<String>,
    #[arg(long)]
    temperature_csv: Option<String>,
    #[arg(long)]
    solar_csv: Option<String>,
    /// Comma-separated scenario ids (base,1a,1b,2a,2b,3a,3b).
    #[arg(long, conflicts_with = "all")]
    scenarios: Option<String>,
    #[arg(long)]
    all: bool,
    /// Comma-separated seeds.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    noise_mean: Option<String>,
    #[arg(long)]
    noise_std: Option<String>,
    #[arg(long)]
    noise_fraction: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    jobs: Option<String>,
    /// Keep only the most recent N training rows of each dataset.
    #[arg(long)]
    subsample: Option<String>,
}

impl CommonArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut o = Vec::new();
        let mut put = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                o.push((k.to_string(), v.clone()));
            }
        };
        put("load_csv", &self.load_csv);
        put("temperature_csv", &self.temperature_csv);
        put("solar_csv", &self.solar_csv);
        put("scenarios", &self.scenarios);
        put("seeds", &self.seeds);
        put("mean", &self.noise_mean);
        put("std", &self.noise_std);
        put("fraction", &self.noise_fraction);
        put("out", &self.out);
        put("jobs", &self.jobs);
        put("subsample", &self.subsample);
        if self.all {
            o.push(("scenarios".into(), "all".into()));
        }
        o
    }
}

/// Where the forecasters run. An edge deployment keeps load measurements
/// internal, so only scenarios that attack weather inputs apply to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deployment {
    Central,
    Iopt,
}

impl Deployment {
    fn as_str(self) -> &'static str {
        match self {
            Deployment::Central => "central",
            Deployment::Iopt => "iopt",
        }
    }
}

/// Fully resolved configuration of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub load_csv: Option<PathBuf>,
    pub temperature_csv: Option<PathBuf>,
    pub solar_csv: Option<PathBuf>,
    pub load_zone: u32,
    pub solar_zone: u32,
    pub temperature_unit: TemperatureUnit,
    pub pv_capacity_kw: f64,
    pub holidays: Option<PathBuf>,
    pub scenarios: Vec<ScenarioId>,
    pub deployment: Deployment,
    pub seeds: Vec<u64>,
    pub noise: NoiseSpec,
    pub noise_seed: Option<u64>,
    pub mlp: TrainConfig,
    pub gbm: GbmConfig,
    pub out: PathBuf,
    pub jobs: usize,
    pub subsample: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            load_csv: None,
            temperature_csv: None,
            solar_csv: None,
            load_zone: 21,
            solar_zone: 1,
            temperature_unit: TemperatureUnit::Fahrenheit,
            pv_capacity_kw: 100.0,
            holidays: None,
            scenarios: ScenarioId::ALL.to_vec(),
            deployment: Deployment::Central,
            seeds: vec![42],
            noise: NoiseSpec::default(),
            noise_seed: None,
            mlp: TrainConfig::default(),
            gbm: GbmConfig::default(),
            out: PathBuf::from("results"),
            jobs: 1,
            subsample: None,
        }
    }
}

/// Every key a config file may contain.
pub const CONFIG_KEYS: &[&str] = &[
    "load_csv",
    "temperature_csv",
    "solar_csv",
    "load_zone",
    "solar_zone",
    "temperature_unit",
    "pv_capacity_kw",
    "holidays",
    "scenarios",
    "deployment",
    "seeds",
    "fraction",
    "mean",
    "std",
    "seed",
    "mlp.hidden_units",
    "mlp.learning_rate",
    "mlp.epochs",
    "mlp.batch_size",
    "gbm.estimators",
    "gbm.shrinkage",
    "gbm.max_depth",
    "out",
    "jobs",
    "subsample",
];

/// Parses `key = value` lines.
pub fn parse_config_text(text: &str) -> std::result::Result<Vec<(String, String)>, Vec<String>> {
    let mut pairs = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => pairs.push((k.trim().to_string(), v.trim().to_string())),
            None => errors.push(format!("line {}: expected key = value, got {line:?}", i + 1)),
        }
    }
    if errors.is_empty() {
        Ok(pairs)
    } else {
        Err(errors)
    }
}

fn parse_list<T: std::str::FromStr>(v: &str) -> std::result::Result<Vec<T>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| s.to_string()))
        .collect()
}

impl RunConfig {
    /// Applies `pairs` in order over the defaults, collecting every problem.
    pub fn from_pairs(pairs: &[(String, String)]) -> std::result::Result<Self, Vec<String>> {
        let mut cfg = RunConfig::default();
        let mut errors = Vec::new();
        let mut seeds_set = false;
        for (key, value) in pairs {
            if let Err(e) = cfg.set(key, value) {
                errors.push(e);
            }
            seeds_set |= key == "seeds";
        }
        if !seeds_set {
            if let Ok(env) = std::env::var(SEED_ENV) {
                if let Err(e) = cfg.set("seeds", &env) {
                    errors.push(format!("{SEED_ENV}: {e}"));
                }
            }
        }
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(errors)
        }
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse::<T>().map_err(|_| format!("{key}: invalid value {v:?}"))
        }
        match key {
            "load_csv" => self.load_csv = (!value.is_empty()).then(|| PathBuf::from(value)),
            "temperature_csv" => self.temperature_csv = (!value.is_empty()).then(|| PathBuf::from(value)),
            "solar_csv" => self.solar_csv = (!value.is_empty()).then(|| PathBuf::from(value)),
            "load_zone" => self.load_zone = num(key, value)?,
            "solar_zone" => self.solar_zone = num(key, value)?,
            "temperature_unit" => {
                self.temperature_unit = value.parse().map_err(|_| format!("{key}: invalid value {value:?}"))?
            }
            "pv_capacity_kw" => self.pv_capacity_kw = num(key, value)?,
            "holidays" => {
                self.holidays = (!value.is_empty() && value != "us_federal").then(|| PathBuf::from(value))
            }
            "scenarios" => {
                self.scenarios = if value.eq_ignore_ascii_case("all") {
                    ScenarioId::ALL.to_vec()
                } else {
                    parse_list::<ScenarioId>(value)
                        .map_err(|bad| format!("scenarios: unknown scenario id {bad:?}"))?
                };
                if self.scenarios.is_empty() {
                    return Err("scenarios: empty list".into());
                }
            }
            "deployment" => {
                self.deployment = match value.to_ascii_lowercase().as_str() {
                    "central" => Deployment::Central,
                    "iopt" | "edge" => Deployment::Iopt,
                    _ => return Err(format!("deployment: expected central or iopt, got {value:?}")),
                }
            }
            "seeds" => {
                self.seeds = parse_list::<u64>(value).map_err(|bad| format!("seeds: invalid seed {bad:?}"))?;
                if self.seeds.is_empty() {
                    return Err("seeds: empty list".into());
                }
            }
            "fraction" => self.noise.fraction = num(key, value)?,
            "mean" => self.noise.mean = num(key, value)?,
            "std" => self.noise.std = num(key, value)?,
            "seed" => self.noise_seed = if value.is_empty() { None } else { Some(num(key, value)?) },
            "mlp.hidden_units" => self.mlp.hidden_units = num(key, value)?,
            "mlp.learning_rate" => self.mlp.learning_rate = num(key, value)?,
            "mlp.epochs" => self.mlp.epochs = num(key, value)?,
            "mlp.batch_size" => self.mlp.batch_size = num(key, value)?,
            "gbm.estimators" => self.gbm.estimators = num(key, value)?,
            "gbm.shrinkage" => self.gbm.shrinkage = num(key, value)?,
            "gbm.max_depth" => self.gbm.max_depth = num(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "jobs" => self.jobs = num(key, value)?,
            "subsample" => {
                self.subsample = if value.is_empty() || value == "none" { None } else { Some(num(key, value)?) }
            }
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Semantic checks. `need_data` requires all three data paths to exist.
    pub fn validate(&self, need_data: bool) -> Vec<String> {
        let mut errors = Vec::new();
        for (key, path) in [
            ("load_csv", &self.load_csv),
            ("temperature_csv", &self.temperature_csv),
            ("solar_csv", &self.solar_csv),
            ("holidays", &self.holidays),
        ] {
            match path {
                Some(p) if !p.exists() => errors.push(format!("{key}: path {} does not exist", p.display())),
                None if need_data && key != "holidays" => errors.push(format!("{key}: missing")),
                _ => {}
            }
        }
        if self.deployment == Deployment::Iopt {
            for id in &self.scenarios {
                if !ScenarioSpec::builtin(*id, self.noise).domain.allows_iopt() {
                    errors.push(format!("scenarios: {id} attacks load data and cannot run in an iopt deployment"));
                }
            }
        }
        if let Err(e) = self.noise.validate() {
            errors.push(format!("noise: {e}"));
        }
        if let Err(e) = self.mlp.validate() {
            errors.push(format!("mlp: {e}"));
        }
        if let Err(e) = self.gbm.validate() {
            errors.push(format!("gbm: {e}"));
        }
        if !(self.pv_capacity_kw > 0.0) {
            errors.push("pv_capacity_kw: must be positive".into());
        }
        if self.jobs == 0 {
            errors.push("jobs: must be >= 1".into());
        }
        if self.subsample == Some(0) {
            errors.push("subsample: must be >= 1".into());
        }
        errors
    }

    /// The configuration as `key = value` pairs, in [`CONFIG_KEYS`] order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let join = |v: Vec<String>| v.join(",");
        let values = [
            path(&self.load_csv),
            path(&self.temperature_csv),
            path(&self.solar_csv),
            self.load_zone.to_string(),
            self.solar_zone.to_string(),
            match self.temperature_unit {
                TemperatureUnit::Fahrenheit => "fahrenheit".into(),
                TemperatureUnit::Celsius => "celsius".into(),
            },
            format!("{:?}", self.pv_capacity_kw),
            self.holidays
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "us_federal".into()),
            join(self.scenarios.iter().map(|s| s.to_string()).collect()),
            self.deployment.as_str().to_string(),
            join(self.seeds.iter().map(|s| s.to_string()).collect()),
            format!("{:?}", self.noise.fraction),
            format!("{:?}", self.noise.mean),
            format!("{:?}", self.noise.std),
            self.noise_seed.map(|s| s.to_string()).unwrap_or_default(),
            self.mlp.hidden_units.to_string(),
            format!("{:?}", self.mlp.learning_rate),
            self.mlp.epochs.to_string(),
            self.mlp.batch_size.to_string(),
            self.gbm.estimators.to_string(),
            format!("{:?}", self.gbm.shrinkage),
            self.gbm.max_depth.to_string(),
            self.out.display().to_string(),
            self.jobs.to_string(),
            self.subsample.map(|s| s.to_string()).unwrap_or_else(|| "none".into()),
        ];
        CONFIG_KEYS
            .iter()
            .zip(values)
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }

    pub fn manifest(&self) -> String {
        let mut s = String::from("# netload-bench effective configuration\n");
        for (k, v) in self.to_pairs() {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in self.to_pairs() {
            m.insert(k, Value::String(v));
        }
        Value::Object(m)
    }

    pub fn data_sources(&self) -> Result<DataSources> {
        let need = |p: &Option<PathBuf>, key: &str| {
            p.clone().ok_or_else(|| Error::Config(format!("{key}: missing")))
        };
        let mut src = DataSources::new(
            need(&self.load_csv, "load_csv")?,
            need(&self.temperature_csv, "temperature_csv")?,
            need(&self.solar_csv, "solar_csv")?,
        );
        src.load_zone = self.load_zone;
        src.solar_zone = self.solar_zone;
        src.temperature_unit = self.temperature_unit;
        src.pv_capacity_kw = self.pv_capacity_kw;
        src.holidays = match &self.holidays {
            Some(p) => HolidayCalendar::from_file(p)?,
            None => HolidayCalendar::UsFederal,
        };
        Ok(src)
    }
}

/// Reads the optional config file and applies flag overrides.
fn resolve(args: &CommonArgs) -> std::result::Result<RunConfig, Vec<String>> {
    let mut pairs = Vec::new();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| vec![format!("config: cannot read {}: {e}", path.display())])?;
        pairs = parse_config_text(&text)?;
    }
    pairs.extend(args.overrides());
    RunConfig::from_pairs(&pairs)
}

fn report_errors(errors: &[String]) -> i32 {
    for e in errors {
        eprintln!("error: {e}");
    }
    1
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    err.exit_code()
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Validate(args) => cmd_validate(&args),
        Command::Ingest(args) => cmd_ingest(&args),
        Command::Run(args) => cmd_run(&args),
    }
}

fn cmd_validate(args: &CommonArgs) -> i32 {
    let cfg = match resolve(args) {
        Ok(c) => c,
        Err(errors) => return report_errors(&errors),
    };
    let errors = cfg.validate(true);
    if errors.is_empty() {
        println!("OK");
        0
    } else {
        report_errors(&errors)
    }
}

fn span(frame: &TimeSeriesFrame) -> String {
    match (frame.first_timestamp(), frame.last_timestamp()) {
        (Some(a), Some(b)) => format!("{} rows, {} .. {}", frame.len(), format_timestamp(a), format_timestamp(b)),
        _ => "0 rows".into(),
    }
}

fn write_text(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn cmd_ingest(args: &CommonArgs) -> i32 {
    let cfg = match resolve(args) {
        Ok(c) => c,
        Err(errors) => return report_errors(&errors),
    };
    let errors = cfg.validate(false);
    if !errors.is_empty() {
        return report_errors(&errors);
    }
    if cfg.load_csv.is_none() && cfg.solar_csv.is_none() {
        return report_errors(&["nothing to ingest: give load_csv/temperature_csv and/or solar_csv".into()]);
    }
    match ingest(&cfg) {
        Ok(()) => 0,
        Err(e) => fail(&e),
    }
}

fn ingest(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let holidays = match &cfg.holidays {
        Some(p) => HolidayCalendar::from_file(p)?,
        None => HolidayCalendar::UsFederal,
    };
    if let Some(load_csv) = &cfg.load_csv {
        let temperature_csv = cfg
            .temperature_csv
            .clone()
            .ok_or_else(|| Error::Config("temperature_csv: missing".into()))?;
        let mut src = DataSources::new(load_csv.clone(), temperature_csv, PathBuf::new());
        src.load_zone = cfg.load_zone;
        src.temperature_unit = cfg.temperature_unit;
        src.holidays = holidays;
        let (load, temp) = ingest_load(&src)?;
        load.write_column_csv(LOAD_COLUMN, &cfg.out.join("load_kw.csv"))?;
        temp.write_column_csv(TEMP_COLUMN, &cfg.out.join("temp_c.csv"))?;
        write_text(&cfg.out.join("gaps_load.txt"), &load.gap_report())?;
        write_text(&cfg.out.join("gaps_temperature.txt"), &temp.gap_report())?;
        println!("load zone {}: {} ({} filled)", cfg.load_zone, span(&load), load.gaps().len());
        println!("virtual weather station: {}", span(&temp));
    }
    if let Some(solar_csv) = &cfg.solar_csv {
        let solar = load_gefcom_solar(solar_csv, cfg.solar_zone, cfg.pv_capacity_kw)?;
        solar.pv.write_column_csv(PV_COLUMN, &cfg.out.join("pv_kw.csv"))?;
        for name in solar.weather.column_names() {
            solar
                .weather
                .write_column_csv(name, &cfg.out.join(format!("weather_{name}.csv")))?;
        }
        write_text(&cfg.out.join("gaps_solar.txt"), &solar.pv.gap_report())?;
        println!("solar zone {}: {} ({} filled)", cfg.solar_zone, span(&solar.pv), solar.pv.gaps().len());
        println!("weather columns: {}", solar.weather.columns().len());
    }
    Ok(())
}

fn cmd_run(args: &CommonArgs) -> i32 {
    let cfg = match resolve(args) {
        Ok(c) => c,
        Err(errors) => return report_errors(&errors),
    };
    let errors = cfg.validate(true);
    if !errors.is_empty() {
        return report_errors(&errors);
    }
    match execute(&cfg) {
        Ok(()) => 0,
        Err(e) => fail(&e),
    }
}

/// Loads data, runs the configured suite and writes every artifact.
pub fn execute(cfg: &RunConfig) -> Result<()> {
    let started = Instant::now();
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    write_text(&cfg.out.join("manifest.txt"), &cfg.manifest())?;

    let data = load_benchmark_data(&cfg.data_sources()?)?;
    let (mut load_ds, mut pv_ds) = (data.load_dataset, data.pv_dataset);
    if let Some(n) = cfg.subsample {
        load_ds = load_ds.subsample_train(n);
        pv_ds = pv_ds.subsample_train(n);
    }
    eprintln!(
        "load dataset {} train / {} test rows, pv dataset {} train / {} test rows, {} pv features",
        load_ds.partition_len(crate::dataio::Partition::Train),
        load_ds.partition_len(crate::dataio::Partition::Test),
        pv_ds.partition_len(crate::dataio::Partition::Train),
        pv_ds.partition_len(crate::dataio::Partition::Test),
        pv_ds.n_features()
    );

    // base always runs so every attacked scenario has a clean reference plot
    let mut scenarios = cfg.scenarios.clone();
    if !scenarios.contains(&ScenarioId::Base) {
        scenarios.insert(0, ScenarioId::Base);
    }
    let mut inputs = SuiteInputs::new(load_ds, pv_ds);
    inputs.mlp = cfg.mlp;
    inputs.gbm = cfg.gbm;
    inputs.noise = cfg.noise;
    inputs.fixed_noise_seed = cfg.noise_seed;
    inputs.scenarios = scenarios;
    let mut result = run_suite(&inputs, &cfg.seeds, cfg.jobs)?;

    if result.reports.iter().any(|r| r.net_series.is_empty()) {
        eprintln!("warning: the load and PV test windows share no calendar hours; plot files are empty");
    }
    for seed in &cfg.seeds {
        let Some(base) = result.report(ScenarioId::Base, *seed) else {
            continue;
        };
        for id in &cfg.scenarios {
            if let Some(r) = result.report(*id, *seed) {
                report::write_plot_csv(&cfg.out.join(format!("plot_{id}_seed{seed}.csv")), base, r)?;
            }
        }
    }
    result.summary.retain(|r| cfg.scenarios.contains(&r.scenario_id));
    result.reports.retain(|r| cfg.scenarios.contains(&r.scenario_id));
    report::write_results_csv(&cfg.out.join("results.csv"), &result.summary)?;
    report::write_json(&cfg.out.join("report.json"), &report::suite_json(&result, cfg.to_json()))?;
    print!("{}", report::results_table(&result.summary));
    eprintln!("finished in {:.1} s", started.elapsed().as_secs_f64());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(text: &str) -> Vec<(String, String)> {
        parse_config_text(text).unwrap()
    }

    #[test]
    fn defaults_and_overrides() {
        let cfg = RunConfig::from_pairs(&pairs("seeds = 1,2\nstd = 0\nmlp.epochs = 5\nscenarios = base, 2a")).unwrap();
        assert_eq!(cfg.seeds, vec![1, 2]);
        assert_eq!(cfg.noise.std, 0.0);
        assert_eq!(cfg.noise.mean, 10.0);
        assert_eq!(cfg.mlp.epochs, 5);
        assert_eq!(cfg.scenarios, vec![ScenarioId::Base, ScenarioId::E2a]);
    }

    #[test]
    fn unknown_scenario_named() {
        let errs = RunConfig::from_pairs(&pairs("scenarios = base,4c")).unwrap_err();
        assert!(errs[0].contains("4c"), "{errs:?}");
    }

    #[test]
    fn unknown_key_named() {
        let errs = RunConfig::from_pairs(&pairs("colour = blue")).unwrap_err();
        assert!(errs[0].contains("colour"));
    }

    #[test]
    fn iopt_rejects_load_scenarios() {
        let cfg = RunConfig::from_pairs(&pairs("deployment = iopt\nscenarios = base,2a,3b")).unwrap();
        let errs = cfg.validate(false);
        assert_eq!(errs.len(), 1, "{errs:?}");
        assert!(errs[0].contains("3b"));
        let cfg = RunConfig::from_pairs(&pairs("deployment = iopt\nscenarios = base,2a,2b")).unwrap();
        assert!(cfg.validate(false).is_empty());
    }

    #[test]
    fn bad_line() {
        assert!(parse_config_text("just words").is_err());
    }

    #[test]
    fn manifest_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.seeds = vec![3, 9];
        cfg.deployment = Deployment::Iopt;
        cfg.noise_seed = Some(5);
        cfg.subsample = Some(20000);
        cfg.mlp.learning_rate = 0.1 + 0.2;
        let back = RunConfig::from_pairs(&parse_config_text(&cfg.manifest()).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn missing_paths_reported_by_key() {
        let cfg = RunConfig::from_pairs(&pairs("solar_csv = /definitely/not/here.csv")).unwrap();
        let errs = cfg.validate(true);
        assert!(errs.iter().any(|e| e.starts_with("solar_csv")));
        assert!(errs.iter().any(|e| e.starts_with("load_csv: missing")));
    }
}
