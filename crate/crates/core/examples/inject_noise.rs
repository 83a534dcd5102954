//! Seeded Gaussian noise injection on a plain vector, and the z-score
//! detector run against the result.
//!
//! ```text
//! cargo run --example inject_noise -- [SEED]
//! ```

use netload_bench::attack::{detect_anomalies, inject, ColumnStats, Injected, NoiseSpec};

/// Attacks a smooth daily-cycle series of `n` points.
pub fn run_example(n: usize, spec: &NoiseSpec) -> netload_bench::Result<(Vec<f64>, Injected, Vec<usize>)> {
    let clean: Vec<f64> = (0..n)
        .map(|i| 500.0 + 80.0 * (i as f64 * std::f64::consts::TAU / 24.0).sin())
        .collect();
    let attacked = inject(&clean, spec)?;
    let shifts: Vec<f64> = attacked.indices.iter().map(|&i| attacked.values[i] - clean[i]).collect();
    let mean = shifts.iter().sum::<f64>() / shifts.len().max(1) as f64;
    println!("attacked {} of {n} points, mean shift {mean:.2}", attacked.indices.len());

    // the screen only knows the clean column's statistics, so noise that
    // stays inside the normal range goes unnoticed
    let stats = ColumnStats::from_values(&clean)?;
    let flagged = detect_anomalies(stats, &attacked.values, 3.0)?;
    let hits = flagged.iter().filter(|i| attacked.indices.binary_search(i).is_ok()).count();
    println!("detector flagged {} points, {hits} of them attacked", flagged.len());
    Ok((clean, attacked, flagged))
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    let seed = std::env::args().nth(1).map_or(42, |s| s.parse().expect("SEED"));
    run_example(1000, &NoiseSpec::default().with_seed(seed))?;
    Ok(())
}
