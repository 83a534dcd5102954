//! Relative error increase of the centrally hosted deployment (every
//! stream exposed) over the edge deployment (only weather forecasts
//! exposed), computed from fixed metric values.
//!
//! ```text
//! cargo run --example attack_surface -- [E_CENTRAL E_EDGE]
//! ```
//!
//! The defaults are the published PV errors for scenarios 3a (10.10) and
//! 2a (8.60).

use netload_bench::scenario::surface_reduction_pct;

pub const PUBLISHED_PV_RMSE_3A: f64 = 10.10;
pub const PUBLISHED_PV_RMSE_2A: f64 = 8.60;

pub fn run_example(e_central: f64, e_edge: f64) -> netload_bench::Result<f64> {
    let pct = surface_reduction_pct(e_central, e_edge)?;
    println!("central error {e_central} vs edge error {e_edge}: {pct:.2}% higher");
    Ok(pct)
}

#[allow(dead_code)]
fn main() -> netload_bench::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("number")).collect();
    match args.as_slice() {
        [a, b] => run_example(*a, *b),
        _ => run_example(PUBLISHED_PV_RMSE_3A, PUBLISHED_PV_RMSE_2A),
    }
    .map(drop)
}
