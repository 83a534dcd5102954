//! The full seven-scenario suite over several seeds, summarised by the
//! per-scenario median, plus the artifacts the CLI would write.
//!
//! ```text
//! cargo run --release --example run_suite -- [OUT_DIR] [DAYS] [SEEDS]
//! ```
//!
//! `SEEDS` is a comma-separated list (default `1,2,3`).

use std::path::Path;

use netload_bench::dataio::{load_benchmark_data, DataSources};
use netload_bench::scenario::{report, run_suite, ScenarioId, SuiteInputs, SuiteResult};
use netload_bench::synth::{write_gefcom_files, SynthConfig};

pub fn run_example(inputs: &SuiteInputs, seeds: &[u64], out: Option<&Path>) -> netload_bench::Result<SuiteResult> {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let result = run_suite(inputs, seeds, jobs)?;
    print!("{}", report::results_table(&result.summary));
    if let Some(out) = out {
        std::fs::create_dir_all(out).expect("output directory");
        report::write_results_csv(&out.join("results.csv"), &result.summary)?;
        report::write_json(&out.join("report.json"), &report::suite_json(&result, serde_json::json!({})))?;
        let seed = seeds[0];
        if let (Some(base), Some(hit)) = (result.report(ScenarioId::Base, seed), result.report(ScenarioId::E2b, seed)) {
            report::write_plot_csv(&out.join(format!("plot_2b_seed{seed}.csv")), base, hit)?;
        }
        println!("artifacts written to {}", out.display());
    }
    Ok(result)
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "suite-output".into());
    let days = args.next().map_or(365, |d| d.parse().expect("DAYS"));
    let seeds: Vec<u64> = args
        .next()
        .unwrap_or_else(|| "1,2,3".into())
        .split(',')
        .map(|s| s.trim().parse().expect("SEEDS"))
        .collect();
    let tmp = tempfile::tempdir().expect("temporary directory");
    let p = write_gefcom_files(tmp.path(), &SynthConfig::small(days))?;
    let data = load_benchmark_data(&DataSources::new(p.load, p.temperature, p.solar))?;
    run_example(&SuiteInputs::new(data.load_dataset, data.pv_dataset), &seeds, Some(Path::new(&out)))?;
    Ok(())
}
