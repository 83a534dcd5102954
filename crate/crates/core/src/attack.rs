//! Seeded Gaussian noise injection emulating data-integrity attacks.
//!
//! # Generator contract
//!
//! Every random draw comes from `ChaCha8Rng::seed_from_u64(seed)`
//! (`rand_chacha` 0.3) through three primitives, so the stream can be
//! reproduced in any language with a ChaCha8 implementation:
//!
//! * `below(n)`: draw `u = next_u64()`, reject while `u < (2^64 − n) mod n`,
//!   return `u mod n`.
//! * `unit()`: `(next_u64() >> 11) · 2^-53`, in `[0, 1)`.
//! * `normal()`: Box–Muller cosine branch,
//!   `sqrt(−2 ln(1 − u1)) · cos(2π u2)` with `u1 = unit()`, `u2 = unit()`.
//!
//! `inject` first selects `k = round(fraction · N)` indices with a partial
//! Fisher–Yates shuffle (`for i in 0..k: swap(i, i + below(N − i))`), sorts
//! them ascending, then draws one `μ + σ · normal()` per selected index in
//! that order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataio::{Partition, SupervisedDataset};
use crate::error::{Error, Result};

/// Seeded stream implementing the documented draw primitives.
pub struct NoiseRng(ChaCha8Rng);

impl NoiseRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = n.wrapping_neg() % n;
        loop {
            let u = self.0.next_u64();
            if u >= zone {
                return u % n;
            }
        }
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.unit();
        let u2 = self.unit();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds tags into a base seed; different tag lists give unrelated streams.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(mix(seed), |acc, t| mix(acc ^ mix(*t)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub fraction: f64,
    pub mean: f64,
    pub std: f64,
    pub seed: u64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            fraction: 0.10,
            mean: 10.0,
            std: 50.0,
            seed: 42,
        }
    }
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::InvalidHyperparameter(format!(
                "noise fraction must lie in [0, 1], got {}",
                self.fraction
            )));
        }
        if !(self.std >= 0.0 && self.std.is_finite()) || !self.mean.is_finite() {
            return Err(Error::InvalidHyperparameter(format!(
                "noise needs finite mean and std >= 0, got mean {} std {}",
                self.mean, self.std
            )));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Number of entries attacked out of `n`.
    pub fn count(&self, n: usize) -> usize {
        ((self.fraction * n as f64).round() as usize).min(n)
    }
}

/// Result of [`inject`]: attacked copy plus ascending attacked indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Injected {
    pub values: Vec<f64>,
    pub indices: Vec<usize>,
}

/// Adds `Normal(μ, σ²)` noise to a seeded random subset of `values`.
pub fn inject(values: &[f64], spec: &NoiseSpec) -> Result<Injected> {
    if values.is_empty() {
        return Err(Error::EmptyInput("cannot inject noise into an empty series"));
    }
    spec.validate()?;
    let n = values.len();
    let k = spec.count(n);
    let mut rng = NoiseRng::new(spec.seed);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut indices = pool[..k].to_vec();
    indices.sort_unstable();

    let mut out = values.to_vec();
    for &i in &indices {
        out[i] += spec.mean + spec.std * rng.normal();
    }
    Ok(Injected {
        values: out,
        indices,
    })
}

/// Which data stream an attack reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    /// Measured load (the regression target of the load model).
    Load,
    /// Numerical weather prediction inputs.
    Nwp,
}

impl Stream {
    pub fn as_str(self) -> &'static str {
        match self {
            Stream::Load => "load",
            Stream::Nwp => "nwp",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Stream::Load => 1,
            Stream::Nwp => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackTarget {
    pub stream: Stream,
    pub partitions: Vec<Partition>,
}

impl AttackTarget {
    pub fn new(stream: Stream, partitions: &[Partition]) -> Self {
        Self {
            stream,
            partitions: partitions.to_vec(),
        }
    }
}

/// Column an attack is applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Feature(String),
    Target,
}

impl Column {
    pub fn feature(name: &str) -> Self {
        Column::Feature(name.to_string())
    }

    pub fn label(&self) -> &str {
        match self {
            Column::Feature(n) => n,
            Column::Target => "target",
        }
    }
}

/// Indices (relative to the partition start) that were attacked.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackedSlice {
    pub partition: Partition,
    pub column: String,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    pub dataset: SupervisedDataset,
    pub attacked: Vec<AttackedSlice>,
}

fn partition_tag(p: Partition) -> u64 {
    match p {
        Partition::Train => 11,
        Partition::Test => 12,
    }
}

/// Applies `inject` to one column of each selected partition, returning a
/// new dataset. Each partition uses the seed
/// `derive_seed(spec.seed, [stream, partition])`.
pub fn apply_to_dataset(
    dataset: &SupervisedDataset,
    target: &AttackTarget,
    spec: &NoiseSpec,
    column: &Column,
) -> Result<AttackOutcome> {
    spec.validate()?;
    if target.partitions.is_empty() {
        return Err(Error::InvalidTarget("attack names no partition".into()));
    }
    let feature = match (target.stream, column) {
        (Stream::Load, Column::Target) => None,
        (Stream::Nwp, Column::Feature(name)) => Some(
            dataset
                .feature_index(name)
                .ok_or_else(|| Error::UnknownColumn(name.clone()))?,
        ),
        (stream, col) => {
            return Err(Error::InvalidTarget(format!(
                "{} stream cannot attack column {}",
                stream.as_str(),
                col.label()
            )))
        }
    };

    let mut out = dataset.clone();
    let mut attacked = Vec::new();
    let mut partitions = target.partitions.clone();
    partitions.sort();
    partitions.dedup();
    for p in partitions {
        if dataset.partition_len(p) == 0 {
            continue;
        }
        let seed = derive_seed(spec.seed, &[target.stream.tag(), partition_tag(p)]);
        let pspec = spec.with_seed(seed);
        let injected = match feature {
            Some(col) => {
                let inj = inject(&dataset.feature_column(col, p), &pspec)?;
                out.set_feature_column(col, p, &inj.values);
                inj
            }
            None => {
                let inj = inject(dataset.targets(p), &pspec)?;
                out.set_targets(p, &inj.values);
                inj
            }
        };
        attacked.push(AttackedSlice {
            partition: p,
            column: column.label().to_string(),
            indices: injected.indices,
        });
    }
    Ok(AttackOutcome {
        dataset: out,
        attacked,
    })
}

/// Mean and population standard deviation of a clean reference column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnStats {
    pub mean: f64,
    pub std: f64,
}

impl ColumnStats {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("no values for column statistics"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Ok(Self {
            mean,
            std: var.sqrt(),
        })
    }
}

/// Residual z-score screen: indices whose `|v − mean| / std` exceeds
/// `threshold_z`.
pub fn detect_anomalies(stats: ColumnStats, series: &[f64], threshold_z: f64) -> Result<Vec<usize>> {
    if !(stats.std > 0.0) {
        return Err(Error::DegenerateStats(stats.std));
    }
    if !(threshold_z > 0.0) {
        return Err(Error::InvalidHyperparameter(format!(
            "z threshold must be positive, got {threshold_z}"
        )));
    }
    Ok(series
        .iter()
        .enumerate()
        .filter(|(_, v)| ((*v - stats.mean) / stats.std).abs() > threshold_z)
        .map(|(i, _)| i)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_fraction_is_noop() {
        let v = vec![1.0, 2.0, 3.0];
        let out = inject(&v, &NoiseSpec { fraction: 0.0, ..Default::default() }).unwrap();
        assert_eq!(out.values, v);
        assert!(out.indices.is_empty());
    }

    #[test]
    fn zero_sigma_full_fraction_shifts() {
        let spec = NoiseSpec { fraction: 1.0, mean: 10.0, std: 0.0, seed: 9 };
        let out = inject(&[1.0, 2.0, 3.0], &spec).unwrap();
        assert_eq!(out.values, vec![11.0, 12.0, 13.0]);
        assert_eq!(out.indices, vec![0, 1, 2]);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(inject(&[], &NoiseSpec::default()), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn invalid_spec_rejected() {
        let bad = NoiseSpec { fraction: 1.5, ..Default::default() };
        assert!(inject(&[1.0], &bad).is_err());
        let bad = NoiseSpec { std: -1.0, ..Default::default() };
        assert!(inject(&[1.0], &bad).is_err());
    }

    #[test]
    fn below_is_in_range() {
        let mut rng = NoiseRng::new(5);
        for n in [1u64, 2, 3, 7, 1000, u64::MAX] {
            for _ in 0..100 {
                assert!(rng.below(n) < n);
            }
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(42, &[1, 11]);
        let b = derive_seed(42, &[1, 12]);
        let c = derive_seed(42, &[2, 11]);
        assert!(a != b && a != c && b != c);
        assert_eq!(a, derive_seed(42, &[1, 11]));
    }

    #[test]
    fn detector_flags_outlier() {
        let stats = ColumnStats { mean: 5.0, std: 2.0 };
        assert!(detect_anomalies(stats, &[5.0; 10], 4.0).unwrap().is_empty());
        let mut s = vec![5.0; 10];
        s[3] = 5.0 + 10.0 * 2.0;
        assert_eq!(detect_anomalies(stats, &s, 4.0).unwrap(), vec![3]);
        assert!(matches!(
            detect_anomalies(ColumnStats { mean: 0.0, std: 0.0 }, &s, 4.0),
            Err(Error::DegenerateStats(_))
        ));
    }
}
