//! Writes a synthetic data set in the competition CSV layouts.
//!
//! ```text
//! cargo run --example generate_synthetic_data -- OUT_DIR [DAYS]
//! ```
//!
//! Without `DAYS` the full default calendar is generated (about 4.5 years
//! of load and 2 years of solar data). The files can be fed straight to
//! `netload-bench ingest` or `netload-bench run`.

use std::path::{Path, PathBuf};

use netload_bench::synth::{write_gefcom_files, SynthConfig, SynthPaths};

pub fn run_example(out: &Path, days: Option<i64>) -> netload_bench::Result<SynthPaths> {
    let cfg = match days {
        Some(d) => SynthConfig::small(d),
        None => SynthConfig::default(),
    };
    let paths = write_gefcom_files(out, &cfg)?;
    println!("load:        {}", paths.load.display());
    println!("temperature: {}", paths.temperature.display());
    println!("solar:       {}", paths.solar.display());
    Ok(paths)
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "synthetic-data".into()));
    let days = args.next().map(|d| d.parse().expect("DAYS must be an integer"));
    run_example(&out, days)?;
    Ok(())
}
