//! Independent oracles and fixture builders shared by the integration tests.
#![allow(dead_code)]

use chrono::{Duration, NaiveDate, NaiveDateTime};
use netload_bench::dataio::SupervisedDataset;
use netload_bench::mlp::MlpModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn hours(n: usize) -> Vec<NaiveDateTime> {
    let t0 = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
    (0..n).map(|i| t0 + Duration::hours(i as i64)).collect()
}

/// Dataset whose rows are all training rows.
pub fn train_only(rows: &[Vec<f64>], target: &[f64]) -> SupervisedDataset {
    let width = rows.first().map_or(0, Vec::len);
    let names = (0..width).map(|i| format!("x{i}")).collect();
    SupervisedDataset::with_split(hours(target.len()), names, rows.concat(), target.to_vec(), target.len()).unwrap()
}

/// Dataset with the default chronological split.
pub fn split_dataset(rows: &[Vec<f64>], target: &[f64]) -> SupervisedDataset {
    let width = rows.first().map_or(0, Vec::len);
    let names = (0..width).map(|i| format!("x{i}")).collect();
    SupervisedDataset::new(hours(target.len()), names, rows.concat(), target.to_vec()).unwrap()
}

// ---------------------------------------------------------------------------
// Brute-force boosting oracle (depth ≤ 1)

#[derive(Debug, Clone, PartialEq)]
pub enum OracleTree {
    Leaf(f64),
    Stump { feature: usize, threshold: f64, left: f64, right: f64 },
}

impl OracleTree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match *self {
            OracleTree::Leaf(v) => v,
            OracleTree::Stump { feature, threshold, left, right } => {
                if x[feature] <= threshold {
                    left
                } else {
                    right
                }
            }
        }
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sse(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum()
}

/// Exhaustive best split: every feature, every midpoint between consecutive
/// distinct values, scored by directly computed squared error. Candidates
/// within `1e-9·Σr²` of the best count as ties and the first one in
/// (feature, threshold) order wins. No split unless it lowers the error.
pub fn oracle_tree(rows: &[Vec<f64>], residuals: &[f64], depth: usize) -> OracleTree {
    let parent_mean = mean(residuals);
    if depth == 0 || rows.len() < 2 {
        return OracleTree::Leaf(parent_mean);
    }
    let parent = sse(residuals);
    let tol = 1e-9 * residuals.iter().map(|r| r * r).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut candidates = Vec::new();
    for f in 0..rows[0].len() {
        let mut values: Vec<f64> = rows.iter().map(|r| r[f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let threshold = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<f64>, Vec<f64>) = {
                let mut l = Vec::new();
                let mut r = Vec::new();
                for (row, res) in rows.iter().zip(residuals) {
                    if row[f] <= threshold {
                        l.push(*res)
                    } else {
                        r.push(*res)
                    }
                }
                (l, r)
            };
            let gain = parent - sse(&l) - sse(&r);
            candidates.push((gain, f, threshold, mean(&l), mean(&r)));
        }
    }
    let best = candidates.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max);
    if !(best > tol) {
        return OracleTree::Leaf(parent_mean);
    }
    let (_, feature, threshold, left, right) = *candidates.iter().find(|c| c.0 >= best - tol).unwrap();
    OracleTree::Stump { feature, threshold, left, right }
}

/// Stage-wise recurrence `f ← f + δ·tree(x)` starting from the target mean.
pub fn oracle_boost(rows: &[Vec<f64>], y: &[f64], stages: usize, shrinkage: f64, depth: usize) -> (f64, Vec<OracleTree>) {
    let init = mean(y);
    let mut f = vec![init; y.len()];
    let mut trees = Vec::new();
    for _ in 0..stages {
        let residuals: Vec<f64> = y.iter().zip(&f).map(|(a, b)| a - b).collect();
        let tree = oracle_tree(rows, &residuals, depth);
        for (fi, row) in f.iter_mut().zip(rows) {
            *fi += shrinkage * tree.predict(row);
        }
        trees.push(tree);
    }
    (init, trees)
}

pub fn oracle_predict(init: f64, trees: &[OracleTree], shrinkage: f64, x: &[f64]) -> f64 {
    trees.iter().fold(init, |acc, t| acc + shrinkage * t.predict(x))
}

/// A hand-built boosting fixture.
pub struct GbmFixture {
    pub name: &'static str,
    pub rows: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub stages: usize,
    pub shrinkage: f64,
    pub depth: usize,
    /// Hand-computed training predictions where worked out on paper.
    pub expected: Option<Vec<f64>>,
}

pub fn gbm_fixtures() -> Vec<GbmFixture> {
    let col = |v: &[f64]| v.iter().map(|x| vec![*x]).collect::<Vec<_>>();
    vec![
        GbmFixture {
            name: "four points, two stages, half shrinkage",
            rows: col(&[1.0, 2.0, 3.0, 4.0]),
            y: vec![1.0, 1.0, 3.0, 5.0],
            stages: 2,
            shrinkage: 0.5,
            depth: 1,
            // stage 1 splits at 2.5 (leaves -1.5, 1.5), stage 2 at 3.5
            // (leaves -7/12, 7/4)
            expected: Some(vec![35.0 / 24.0, 35.0 / 24.0, 71.0 / 24.0, 99.0 / 24.0]),
        },
        GbmFixture {
            name: "sign split around zero",
            rows: col(&[-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]),
            y: vec![-1.0, -1.0, -1.0, 1.0, 1.0, 1.0],
            stages: 1,
            shrinkage: 1.0,
            depth: 1,
            expected: Some(vec![-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]),
        },
        GbmFixture {
            name: "constant target",
            rows: col(&[0.0, 1.0, 2.0]),
            y: vec![4.0, 4.0, 4.0],
            stages: 2,
            shrinkage: 0.3,
            depth: 1,
            expected: Some(vec![4.0, 4.0, 4.0]),
        },
        GbmFixture {
            name: "depth zero is the mean",
            rows: col(&[0.0, 1.0, 2.0, 3.0]),
            y: vec![1.0, 2.0, 3.0, 6.0],
            stages: 1,
            shrinkage: 1.0,
            depth: 0,
            expected: Some(vec![3.0; 4]),
        },
        GbmFixture {
            name: "duplicate feature columns tie to the lower index",
            rows: vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0], vec![4.0, 4.0]],
            y: vec![0.0, 0.0, 1.0, 1.0],
            stages: 2,
            shrinkage: 0.5,
            depth: 1,
            expected: Some(vec![0.125, 0.125, 0.875, 0.875]),
        },
        GbmFixture {
            name: "second feature carries the signal",
            rows: vec![
                vec![5.0, 0.0],
                vec![1.0, 1.0],
                vec![4.0, 0.0],
                vec![2.0, 1.0],
                vec![3.0, 0.0],
                vec![6.0, 1.0],
                vec![7.0, 0.0],
                vec![0.0, 1.0],
            ],
            y: vec![0.0, 10.0, 0.5, 9.5, 0.0, 10.0, 1.0, 9.0],
            stages: 2,
            shrinkage: 0.1,
            depth: 1,
            expected: None,
        },
        GbmFixture {
            name: "repeated feature values",
            rows: col(&[1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0]),
            y: vec![3.0, 5.0, 1.0, 0.0, 2.0, 7.0, 9.0],
            stages: 2,
            shrinkage: 0.7,
            depth: 1,
            expected: None,
        },
        GbmFixture {
            name: "single row",
            rows: col(&[2.0]),
            y: vec![7.0],
            stages: 2,
            shrinkage: 0.5,
            depth: 1,
            expected: Some(vec![7.0]),
        },
    ]
}

// ---------------------------------------------------------------------------
// Finite-difference gradient oracle

pub const FD_STEP: f64 = 1e-5;

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-8 {
        (a - b).abs()
    } else {
        (a - b).abs() / scale
    }
}

fn central(model: &MlpModel, xs: &[f64], t: f64, poke: &dyn Fn(&mut MlpModel, f64)) -> f64 {
    let mut plus = model.clone();
    poke(&mut plus, FD_STEP);
    let mut minus = model.clone();
    poke(&mut minus, -FD_STEP);
    (plus.loss_scaled(xs, t) - minus.loss_scaled(xs, t)) / (2.0 * FD_STEP)
}

/// Worst relative error between backprop and central differences over every
/// parameter of `networks` random networks (≤3 inputs, ≤5 hidden units).
pub fn worst_gradient_error(networks: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..networks {
        let n_in = rng.gen_range(1..=3);
        let hidden = rng.gen_range(1..=5);
        let mut model = MlpModel::random(n_in, hidden, &mut rng);
        // spread the weights beyond the initial range so saturation is exercised
        for w in model.w_ih.iter_mut().chain(model.w_ho.iter_mut()) {
            *w *= 4.0;
        }
        let xs: Vec<f64> = (0..n_in).map(|_| rng.gen_range(-1.0..2.0)).collect();
        let t = rng.gen_range(-1.0..2.0);
        let g = model.loss_gradient(&xs, t);
        let mut check = |analytic: f64, poke: &dyn Fn(&mut MlpModel, f64)| {
            worst = worst.max(rel_err(analytic, central(&model, &xs, t, poke)));
        };
        for k in 0..hidden * n_in {
            check(g.w_ih[k], &|m, d| m.w_ih[k] += d);
        }
        for h in 0..hidden {
            check(g.b_h[h], &|m, d| m.b_h[h] += d);
            check(g.w_ho[h], &|m, d| m.w_ho[h] += d);
        }
        check(g.b_o, &|m, d| m.b_o += d);
    }
    worst
}
