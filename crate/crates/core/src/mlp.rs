//! One-hidden-layer regression network trained by mini-batch backpropagation.
//!
//! Hidden units use the logistic sigmoid; the output unit is linear. Inputs
//! and the target are min-max scaled to `[0, 1]` with scalers fitted on the
//! training partition only. The per-sample loss is `½(target − output)²`
//! in scaled units and each mini-batch step moves every weight by
//! `−η · mean(∂E/∂w)` over the batch.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataio::{Partition, SupervisedDataset};
use crate::error::{Error, Result};

pub const DEFAULT_HIDDEN_UNITS: usize = 200;

/// Logistic transfer function.
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Squared-error loss of a single output.
pub fn loss(target: f64, output: f64) -> f64 {
    let d = target - output;
    0.5 * d * d
}

/// Affine map of `[min, max]` onto `[0, 1]`. A zero-width range maps to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMaxScaler {
    pub min: f64,
    pub max: f64,
}

impl MinMaxScaler {
    pub const IDENTITY: MinMaxScaler = MinMaxScaler { min: 0.0, max: 1.0 };

    pub fn fit(values: impl IntoIterator<Item = f64>) -> Self {
        let (min, max) = values
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if min > max {
            Self::IDENTITY
        } else {
            Self { min, max }
        }
    }

    pub fn scale(&self, v: f64) -> f64 {
        let span = self.max - self.min;
        if span > 0.0 {
            (v - self.min) / span
        } else {
            0.0
        }
    }

    pub fn unscale(&self, s: f64) -> f64 {
        self.min + s * (self.max - self.min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub hidden_units: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_units: DEFAULT_HIDDEN_UNITS,
            learning_rate: 0.01,
            epochs: 100,
            batch_size: 32,
            seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidHyperparameter(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 || self.batch_size == 0 || self.hidden_units == 0 {
            return Err(Error::InvalidHyperparameter(
                "epochs, batch_size and hidden_units must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Weights of the network. `w_ih` is row-major `hidden_units × n_features`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub hidden_units: usize,
    pub n_features: usize,
    pub w_ih: Vec<f64>,
    pub b_h: Vec<f64>,
    pub w_ho: Vec<f64>,
    pub b_o: f64,
    pub input_scaler: Vec<MinMaxScaler>,
    pub target_scaler: MinMaxScaler,
}

/// Gradient of the scaled loss with respect to every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w_ih: Vec<f64>,
    pub b_h: Vec<f64>,
    pub w_ho: Vec<f64>,
    pub b_o: f64,
}

impl Gradients {
    fn zeros(hidden: usize, n_features: usize) -> Self {
        Self {
            w_ih: vec![0.0; hidden * n_features],
            b_h: vec![0.0; hidden],
            w_ho: vec![0.0; hidden],
            b_o: 0.0,
        }
    }

    fn clear(&mut self) {
        self.w_ih.fill(0.0);
        self.b_h.fill(0.0);
        self.w_ho.fill(0.0);
        self.b_o = 0.0;
    }
}

impl MlpModel {
    pub fn zeros(n_features: usize, hidden_units: usize) -> Self {
        Self {
            hidden_units,
            n_features,
            w_ih: vec![0.0; hidden_units * n_features],
            b_h: vec![0.0; hidden_units],
            w_ho: vec![0.0; hidden_units],
            b_o: 0.0,
            input_scaler: vec![MinMaxScaler::IDENTITY; n_features],
            target_scaler: MinMaxScaler::IDENTITY,
        }
    }

    /// Uniform `[-0.5, 0.5)` initialisation drawn in the order
    /// `w_ih`, `b_h`, `w_ho`, `b_o`.
    pub fn random(n_features: usize, hidden_units: usize, rng: &mut impl Rng) -> Self {
        let mut m = Self::zeros(n_features, hidden_units);
        let mut draw = || rng.gen::<f64>() - 0.5;
        m.w_ih.iter_mut().for_each(|w| *w = draw());
        m.b_h.iter_mut().for_each(|w| *w = draw());
        m.w_ho.iter_mut().for_each(|w| *w = draw());
        m.b_o = draw();
        m
    }

    pub fn scale_input(&self, x: &[f64], out: &mut [f64]) {
        for ((o, v), s) in out.iter_mut().zip(x).zip(&self.input_scaler) {
            *o = s.scale(*v);
        }
    }

    /// Hidden activations and scaled output for a scaled input.
    pub fn forward_scaled(&self, xs: &[f64], hidden: &mut [f64]) -> f64 {
        let n = self.n_features;
        let mut out = self.b_o;
        for (j, h) in hidden.iter_mut().enumerate() {
            let row = &self.w_ih[j * n..(j + 1) * n];
            let z = self.b_h[j] + row.iter().zip(xs).map(|(w, x)| w * x).sum::<f64>();
            *h = sigmoid(z);
            out += self.w_ho[j] * *h;
        }
        out
    }

    /// Predicted target in physical units.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut xs = vec![0.0; self.n_features];
        let mut hidden = vec![0.0; self.hidden_units];
        self.scale_input(x, &mut xs);
        Ok(self.target_scaler.unscale(self.forward_scaled(&xs, &mut hidden)))
    }

    /// Loss on one scaled sample.
    pub fn loss_scaled(&self, xs: &[f64], ts: f64) -> f64 {
        let mut hidden = vec![0.0; self.hidden_units];
        loss(ts, self.forward_scaled(xs, &mut hidden))
    }

    /// Backpropagated gradient of the loss on one scaled sample.
    pub fn loss_gradient(&self, xs: &[f64], ts: f64) -> Gradients {
        let mut g = Gradients::zeros(self.hidden_units, self.n_features);
        let mut hidden = vec![0.0; self.hidden_units];
        self.accumulate_gradient(xs, ts, &mut hidden, &mut g);
        g
    }

    fn accumulate_gradient(&self, xs: &[f64], ts: f64, hidden: &mut [f64], g: &mut Gradients) -> f64 {
        let n = self.n_features;
        let out = self.forward_scaled(xs, hidden);
        let d_out = out - ts;
        g.b_o += d_out;
        for (j, &h) in hidden.iter().enumerate() {
            g.w_ho[j] += d_out * h;
            let delta = d_out * self.w_ho[j] * h * (1.0 - h);
            g.b_h[j] += delta;
            for (gw, x) in g.w_ih[j * n..(j + 1) * n].iter_mut().zip(xs) {
                *gw += delta * x;
            }
        }
        loss(ts, out)
    }

    fn step(&mut self, g: &Gradients, rate: f64) {
        for (w, d) in self.w_ih.iter_mut().zip(&g.w_ih) {
            *w -= rate * d;
        }
        for (w, d) in self.b_h.iter_mut().zip(&g.b_h) {
            *w -= rate * d;
        }
        for (w, d) in self.w_ho.iter_mut().zip(&g.w_ho) {
            *w -= rate * d;
        }
        self.b_o -= rate * g.b_o;
    }

    pub fn is_finite(&self) -> bool {
        self.w_ih
            .iter()
            .chain(&self.b_h)
            .chain(&self.w_ho)
            .chain(std::iter::once(&self.b_o))
            .all(|w| w.is_finite())
    }

    /// Versioned plain-text form; see [`MlpModel::from_text`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
        writeln!(s, "netload-mlp v1").unwrap();
        writeln!(s, "hidden_units {}", self.hidden_units).unwrap();
        writeln!(s, "n_features {}", self.n_features).unwrap();
        for sc in &self.input_scaler {
            writeln!(s, "input_scaler {:?} {:?}", sc.min, sc.max).unwrap();
        }
        writeln!(s, "target_scaler {:?} {:?}", self.target_scaler.min, self.target_scaler.max).unwrap();
        for j in 0..self.hidden_units {
            let n = self.n_features;
            writeln!(s, "w_ih {}", join(&self.w_ih[j * n..(j + 1) * n])).unwrap();
        }
        writeln!(s, "b_h {}", join(&self.b_h)).unwrap();
        writeln!(s, "w_ho {}", join(&self.w_ho)).unwrap();
        writeln!(s, "b_o {:?}", self.b_o).unwrap();
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::ModelFormat(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("netload-mlp v1") {
            return Err(bad("missing `netload-mlp v1` header"));
        }
        let mut field = |key: &str| -> Result<Vec<f64>> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing {key}")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(bad(&format!("expected {key}, got {line:?}")));
            }
            parts
                .map(|p| p.parse::<f64>().map_err(|e| bad(&format!("{key}: {e}"))))
                .collect()
        };
        let single = |v: Vec<f64>, key: &str| -> Result<f64> {
            match v.as_slice() {
                [x] => Ok(*x),
                _ => Err(bad(&format!("{key} expects one value"))),
            }
        };
        let hidden_units = single(field("hidden_units")?, "hidden_units")? as usize;
        let n_features = single(field("n_features")?, "n_features")? as usize;
        let mut input_scaler = Vec::with_capacity(n_features);
        for _ in 0..n_features {
            match field("input_scaler")?.as_slice() {
                [min, max] => input_scaler.push(MinMaxScaler { min: *min, max: *max }),
                _ => return Err(bad("input_scaler expects two values")),
            }
        }
        let target_scaler = match field("target_scaler")?.as_slice() {
            [min, max] => MinMaxScaler { min: *min, max: *max },
            _ => return Err(bad("target_scaler expects two values")),
        };
        let mut w_ih = Vec::with_capacity(hidden_units * n_features);
        for _ in 0..hidden_units {
            let row = field("w_ih")?;
            if row.len() != n_features {
                return Err(bad("w_ih row width"));
            }
            w_ih.extend(row);
        }
        let b_h = field("b_h")?;
        let w_ho = field("w_ho")?;
        if b_h.len() != hidden_units || w_ho.len() != hidden_units {
            return Err(bad("hidden vector length"));
        }
        let b_o = single(field("b_o")?, "b_o")?;
        Ok(Self {
            hidden_units,
            n_features,
            w_ih,
            b_h,
            w_ho,
            b_o,
            input_scaler,
            target_scaler,
        })
    }
}

/// A trained network together with its per-epoch training loss.
///
/// `loss_history[0]` is the loss before the first update; entry `k` is the
/// mean scaled loss over the training partition after epoch `k`.
#[derive(Debug, Clone)]
pub struct TrainedMlp {
    pub model: MlpModel,
    pub loss_history: Vec<f64>,
}

fn mean_loss(model: &MlpModel, xs: &[f64], ts: &[f64], hidden: &mut [f64]) -> f64 {
    let n = model.n_features;
    let total: f64 = ts
        .iter()
        .enumerate()
        .map(|(i, t)| loss(*t, model.forward_scaled(&xs[i * n..(i + 1) * n], hidden)))
        .sum();
    total / ts.len() as f64
}

pub fn train(dataset: &SupervisedDataset, config: &TrainConfig) -> Result<MlpModel> {
    train_with_history(dataset, config).map(|t| t.model)
}

/// Fits the network on the training partition.
///
/// The generator seeded from `config.seed` first draws the initial weights
/// and then the per-epoch shuffles.
pub fn train_with_history(dataset: &SupervisedDataset, config: &TrainConfig) -> Result<TrainedMlp> {
    config.validate()?;
    let rows = dataset.partition_len(Partition::Train);
    if rows == 0 {
        return Err(Error::EmptyTrainSet);
    }
    let n = dataset.n_features();

    let input_scaler: Vec<MinMaxScaler> = (0..n)
        .map(|c| MinMaxScaler::fit(dataset.feature_column(c, Partition::Train)))
        .collect();
    let target_scaler = MinMaxScaler::fit(dataset.targets(Partition::Train).iter().copied());

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = MlpModel::random(n, config.hidden_units, &mut rng);
    model.input_scaler = input_scaler;
    model.target_scaler = target_scaler;

    let mut xs = vec![0.0; rows * n];
    for (i, row) in dataset.rows(Partition::Train).enumerate() {
        model.scale_input(row, &mut xs[i * n..(i + 1) * n]);
    }
    let ts: Vec<f64> = dataset
        .targets(Partition::Train)
        .iter()
        .map(|t| target_scaler.scale(*t))
        .collect();

    let mut hidden = vec![0.0; config.hidden_units];
    let mut grads = Gradients::zeros(config.hidden_units, n);
    let mut order: Vec<usize> = (0..rows).collect();
    let mut loss_history = Vec::with_capacity(config.epochs + 1);
    loss_history.push(mean_loss(&model, &xs, &ts, &mut hidden));

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch_size) {
            grads.clear();
            for &i in batch {
                model.accumulate_gradient(&xs[i * n..(i + 1) * n], ts[i], &mut hidden, &mut grads);
            }
            model.step(&grads, config.learning_rate / batch.len() as f64);
        }
        let l = mean_loss(&model, &xs, &ts, &mut hidden);
        if !l.is_finite() || !model.is_finite() {
            return Err(Error::DivergenceDetected { epoch, loss: l });
        }
        loss_history.push(l);
    }
    Ok(TrainedMlp {
        model,
        loss_history,
    })
}

/// `forward` over every row of a partition, in order.
pub fn predict_series(
    model: &MlpModel,
    dataset: &SupervisedDataset,
    partition: Partition,
) -> Result<Vec<f64>> {
    if dataset.n_features() != model.n_features {
        return Err(Error::DimensionMismatch {
            expected: model.n_features,
            got: dataset.n_features(),
        });
    }
    let mut xs = vec![0.0; model.n_features];
    let mut hidden = vec![0.0; model.hidden_units];
    Ok(dataset
        .rows(partition)
        .map(|row| {
            model.scale_input(row, &mut xs);
            model.target_scaler.unscale(model.forward_scaled(&xs, &mut hidden))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{Duration, NaiveDate};

    fn dataset(xs: &[f64], ys: &[f64]) -> SupervisedDataset {
        let t0 = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
        SupervisedDataset::new(
            (0..ys.len()).map(|i| t0 + Duration::hours(i as i64)).collect(),
            vec!["x".into()],
            xs.to_vec(),
            ys.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn sigmoid_points() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((sigmoid(40.0) - 1.0).abs() < 1e-12);
        for x in [-3.0, -0.1, 0.7, 12.0] {
            assert!((sigmoid(x) + sigmoid(-x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn loss_points() {
        assert_eq!(loss(5.0, 5.0), 0.0);
        assert_eq!(loss(3.0, 1.0), 2.0);
        assert_eq!(loss(1.0, 3.0), 2.0);
    }

    #[test]
    fn zero_network_predicts_zero() {
        let m = MlpModel::zeros(3, 4);
        assert_eq!(m.forward(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn hand_network() {
        let mut m = MlpModel::zeros(1, 1);
        m.w_ih[0] = 1.0;
        m.w_ho[0] = 2.0;
        assert_eq!(m.forward(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn forward_checks_width() {
        let m = MlpModel::zeros(2, 1);
        assert!(matches!(
            m.forward(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn scaling_matches_unscaled_reference() {
        // Two-point dataset: x in {10, 30}, y in {100, 300}.
        let ds = dataset(&[10.0, 30.0, 20.0], &[100.0, 300.0, 0.0]);
        let ds = SupervisedDataset::with_split(
            ds.timestamps().to_vec(),
            vec!["x".into()],
            ds.features().to_vec(),
            ds.target().to_vec(),
            2,
        )
        .unwrap();
        let cfg = TrainConfig { hidden_units: 3, epochs: 1, ..Default::default() };
        let m = train(&ds, &cfg).unwrap();
        for x in [10.0, 20.0, 30.0, 55.0] {
            // reference: explicit composition in physical units
            let xs = (x - 10.0) / 20.0;
            let mut o = m.b_o;
            for j in 0..3 {
                o += m.w_ho[j] * sigmoid(m.w_ih[j] * xs + m.b_h[j]);
            }
            let expected = 100.0 + o * 200.0;
            assert!((m.forward(&[x]).unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_train_set() {
        let ds = dataset(&[1.0], &[1.0]);
        assert!(matches!(train(&ds, &TrainConfig::default()), Err(Error::EmptyTrainSet)));
    }

    #[test]
    fn huge_learning_rate_diverges() {
        let xs: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x * 0.3).sin()).collect();
        let cfg = TrainConfig {
            hidden_units: 8,
            learning_rate: 1e200,
            epochs: 5,
            batch_size: 4,
            seed: 1,
        };
        assert!(matches!(
            train(&ds_split(&xs, &ys), &cfg),
            Err(Error::DivergenceDetected { .. })
        ));
    }

    fn ds_split(xs: &[f64], ys: &[f64]) -> SupervisedDataset {
        dataset(xs, ys)
    }

    #[test]
    fn invalid_config() {
        let ds = dataset(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        let cfg = TrainConfig { learning_rate: 0.0, ..Default::default() };
        assert!(matches!(train(&ds, &cfg), Err(Error::InvalidHyperparameter(_))));
    }

    #[test]
    fn constant_target() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let ds = dataset(&xs, &[42.0; 30]);
        let m = train(&ds, &TrainConfig { hidden_units: 5, epochs: 20, ..Default::default() }).unwrap();
        for p in predict_series(&m, &ds, Partition::Test).unwrap() {
            assert!((p - 42.0).abs() <= 0.42);
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut m = MlpModel::random(3, 4, &mut rng);
        m.input_scaler[1] = MinMaxScaler { min: -1.5, max: 0.1 + 0.2 };
        m.target_scaler = MinMaxScaler { min: 1e-300, max: 7.0 / 3.0 };
        let back = MlpModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
        assert!(MlpModel::from_text("nope").is_err());
    }

    #[test]
    fn predict_series_lengths() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ds = dataset(&xs, &xs);
        let m = MlpModel::zeros(1, 2);
        let p = predict_series(&m, &ds, Partition::Test).unwrap();
        assert_eq!(p, vec![0.0; 3]);
        let wide = MlpModel::zeros(2, 2);
        assert!(predict_series(&wide, &ds, Partition::Test).is_err());
    }
}
