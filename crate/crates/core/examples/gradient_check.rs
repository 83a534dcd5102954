//! Compares backpropagated gradients of small random networks with central
//! finite differences of the loss.
//!
//! ```text
//! cargo run --release --example gradient_check -- [NETWORKS]
//! ```

use netload_bench::mlp::MlpModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-6;

/// Relative error with an absolute floor so near-zero entries do not blow up.
fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a.abs() + b.abs()).max(1e-6)
}

fn numeric(model: &MlpModel, xs: &[f64], t: f64, poke: impl Fn(&mut MlpModel, f64)) -> f64 {
    let mut plus = model.clone();
    poke(&mut plus, STEP);
    let mut minus = model.clone();
    poke(&mut minus, -STEP);
    (plus.loss_scaled(xs, t) - minus.loss_scaled(xs, t)) / (2.0 * STEP)
}

/// Worst relative error over every parameter of `networks` random nets.
pub fn run_example(networks: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..networks {
        let n_in = rng.gen_range(1..=4);
        let hidden = rng.gen_range(1..=6);
        let model = MlpModel::random(n_in, hidden, &mut rng);
        let xs: Vec<f64> = (0..n_in).map(|_| rng.gen::<f64>()).collect();
        let t = rng.gen::<f64>();
        let g = model.loss_gradient(&xs, t);
        for h in 0..hidden {
            for i in 0..n_in {
                let k = h * n_in + i;
                let fd = numeric(&model, &xs, t, |m, d| m.w_ih[k] += d);
                worst = worst.max(rel_err(g.w_ih[k], fd));
            }
            worst = worst.max(rel_err(g.b_h[h], numeric(&model, &xs, t, |m, d| m.b_h[h] += d)));
            worst = worst.max(rel_err(g.w_ho[h], numeric(&model, &xs, t, |m, d| m.w_ho[h] += d)));
        }
        worst = worst.max(rel_err(g.b_o, numeric(&model, &xs, t, |m, d| m.b_o += d)));
    }
    println!("{networks} networks, worst relative error {worst:.2e}");
    worst
}

#[allow(dead_code)]
fn main() {
    let n = std::env::args().nth(1).map_or(100, |s| s.parse().expect("NETWORKS"));
    run_example(n, 7);
}
