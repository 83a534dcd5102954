//! Gradient boosting with squared-error loss and CART regression trees.
//!
//! The ensemble starts from the mean training target. Stage `i` fits a tree
//! to the current residuals `y − f̂` (the negative gradient of the squared
//! error) and adds `shrinkage · tree_i(x)` to the running prediction.
//!
//! Trees split greedily on the largest reduction of residual sum of squares.
//! Candidate thresholds are midpoints between consecutive distinct values of
//! a feature within the node; a row goes left when `x[feature] <= threshold`.
//! Near-equal gains (within [`GAIN_TIE_TOLERANCE`] relative to the node's sum
//! of squared residuals) keep the earlier candidate, i.e. the lowest feature
//! index and then the lowest threshold.

use std::fmt::Write as _;

use crate::dataio::{Partition, SupervisedDataset};
use crate::error::{Error, Result};

pub const DEFAULT_ESTIMATORS: usize = 350;
pub const DEFAULT_SHRINKAGE: f64 = 0.1;
pub const DEFAULT_MAX_DEPTH: usize = 3;
pub const MIN_SAMPLES_LEAF: usize = 1;
pub const GAIN_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    /// `right` is the index of the right child; the left child follows
    /// immediately (nodes are stored in pre-order).
    Split {
        feature: usize,
        threshold: f64,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    nodes: Vec<Node>,
    max_depth: usize,
}

impl RegressionTree {
    pub fn leaf(value: f64) -> Self {
        Self {
            nodes: vec![Node::Leaf { value }],
            max_depth: 0,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> (usize, usize) {
            // returns (depth below i, index after subtree)
            match nodes[i] {
                Node::Leaf { .. } => (0, i + 1),
                Node::Split { right, .. } => {
                    let (dl, _) = walk(nodes, i + 1);
                    let (dr, end) = walk(nodes, right);
                    (1 + dl.max(dr), end)
                }
            }
        }
        walk(&self.nodes, 0).0
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    right,
                } => i = if x[feature] <= threshold { i + 1 } else { right },
            }
        }
    }
}

struct TreeBuilder<'a> {
    features: &'a [f64],
    width: usize,
    residuals: &'a [f64],
    max_depth: usize,
    nodes: Vec<Node>,
    go_left: Vec<bool>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl TreeBuilder<'_> {
    fn value(&self, row: u32, feature: usize) -> f64 {
        self.features[row as usize * self.width + feature]
    }

    fn best_split(&self, sorted: &[Vec<u32>], sum: f64, sum_sq: f64) -> Option<BestSplit> {
        let n = sorted[0].len();
        let parent = sum * sum / n as f64;
        let tol = GAIN_TIE_TOLERANCE * sum_sq.max(f64::MIN_POSITIVE);
        let mut best: Option<BestSplit> = None;
        for (feature, order) in sorted.iter().enumerate() {
            let mut left_sum = 0.0;
            for k in 0..n - 1 {
                left_sum += self.residuals[order[k] as usize];
                let left_n = k + 1;
                let right_n = n - left_n;
                if left_n < MIN_SAMPLES_LEAF || right_n < MIN_SAMPLES_LEAF {
                    continue;
                }
                let lo = self.value(order[k], feature);
                let hi = self.value(order[k + 1], feature);
                if lo >= hi {
                    continue;
                }
                let right_sum = sum - left_sum;
                let gain = left_sum * left_sum / left_n as f64
                    + right_sum * right_sum / right_n as f64
                    - parent;
                let floor = best.as_ref().map_or(0.0, |b| b.gain);
                if gain > floor + tol {
                    best = Some(BestSplit {
                        feature,
                        threshold: midpoint(lo, hi),
                        gain,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, sorted: Vec<Vec<u32>>, depth: usize) {
        let members = &sorted[0];
        let n = members.len();
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &r in members {
            let v = self.residuals[r as usize];
            sum += v;
            sum_sq += v * v;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let mean = sum / n as f64;
        let split = if depth >= self.max_depth || n < 2 * MIN_SAMPLES_LEAF || lo == hi {
            None
        } else {
            self.best_split(&sorted, sum, sum_sq)
        };
        let Some(split) = split else {
            self.nodes.push(Node::Leaf { value: mean });
            return;
        };

        for &r in members {
            self.go_left[r as usize] = self.value(r, split.feature) <= split.threshold;
        }
        let (left, right): (Vec<Vec<u32>>, Vec<Vec<u32>>) = sorted
            .into_iter()
            .map(|order| order.into_iter().partition(|r| self.go_left[*r as usize]))
            .unzip();

        let at = self.nodes.len();
        self.nodes.push(Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            right: 0,
        });
        self.build(left, depth + 1);
        let right_at = self.nodes.len();
        if let Node::Split { right, .. } = &mut self.nodes[at] {
            *right = right_at;
        }
        self.build(right, depth + 1);
    }
}

/// Midpoint that always separates `lo` (left) from `hi` (right).
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m >= hi {
        lo
    } else {
        m
    }
}

/// Fits one regression tree to `residuals`; `features` is row-major with
/// `n_features` columns.
pub fn fit_tree(
    features: &[f64],
    n_features: usize,
    residuals: &[f64],
    max_depth: usize,
) -> Result<RegressionTree> {
    let rows: Vec<u32> = (0..residuals.len() as u32).collect();
    fit_tree_on(features, n_features, residuals, max_depth, &presort(features, n_features, &rows))
}

fn presort(features: &[f64], width: usize, rows: &[u32]) -> Vec<Vec<u32>> {
    (0..width.max(1))
        .map(|f| {
            let mut order = rows.to_vec();
            if width > 0 {
                order.sort_by(|a, b| {
                    features[*a as usize * width + f].total_cmp(&features[*b as usize * width + f])
                });
            }
            order
        })
        .collect()
}

fn fit_tree_on(
    features: &[f64],
    n_features: usize,
    residuals: &[f64],
    max_depth: usize,
    sorted: &[Vec<u32>],
) -> Result<RegressionTree> {
    if residuals.is_empty() {
        return Err(Error::EmptyInput("no rows to fit a tree on"));
    }
    if features.len() != residuals.len() * n_features {
        return Err(Error::DimensionMismatch {
            expected: residuals.len() * n_features,
            got: features.len(),
        });
    }
    let mut builder = TreeBuilder {
        features,
        width: n_features,
        residuals,
        max_depth: if n_features == 0 { 0 } else { max_depth },
        nodes: Vec::new(),
        go_left: vec![false; residuals.len()],
    };
    builder.build(sorted.to_vec(), 0);
    Ok(RegressionTree {
        nodes: builder.nodes,
        max_depth,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmConfig {
    pub estimators: usize,
    pub shrinkage: f64,
    pub max_depth: usize,
    /// Kept for the determinism contract; fitting draws no random numbers.
    pub seed: u64,
}

impl Default for GbmConfig {
    fn default() -> Self {
        Self {
            estimators: DEFAULT_ESTIMATORS,
            shrinkage: DEFAULT_SHRINKAGE,
            max_depth: DEFAULT_MAX_DEPTH,
            seed: 42,
        }
    }
}

impl GbmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.estimators == 0 {
            return Err(Error::InvalidHyperparameter("estimators must be >= 1".into()));
        }
        if !(self.shrinkage > 0.0 && self.shrinkage <= 1.0) {
            return Err(Error::InvalidHyperparameter(format!(
                "shrinkage must lie in (0, 1], got {}",
                self.shrinkage
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GbmModel {
    pub init_constant: f64,
    pub shrinkage: f64,
    pub n_features: usize,
    pub trees: Vec<RegressionTree>,
}

impl GbmModel {
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.predict_staged(x, self.trees.len())
    }

    /// Prediction using only the first `stages` trees.
    pub fn predict_staged(&self, x: &[f64], stages: usize) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut f = self.init_constant;
        for tree in self.trees.iter().take(stages) {
            f += self.shrinkage * tree.predict(x);
        }
        Ok(f)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "netload-gbm v1").unwrap();
        writeln!(s, "init_constant {:?}", self.init_constant).unwrap();
        writeln!(s, "shrinkage {:?}", self.shrinkage).unwrap();
        writeln!(s, "n_features {}", self.n_features).unwrap();
        writeln!(s, "trees {}", self.trees.len()).unwrap();
        for tree in &self.trees {
            writeln!(s, "tree {} {}", tree.nodes.len(), tree.max_depth).unwrap();
            for node in &tree.nodes {
                match node {
                    Node::Split {
                        feature, threshold, ..
                    } => writeln!(s, "split,{feature},{threshold:?},").unwrap(),
                    Node::Leaf { value } => writeln!(s, "leaf,,,{value:?}").unwrap(),
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: String| Error::ModelFormat(m);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some("netload-gbm v1") {
            return Err(bad("missing `netload-gbm v1` header".into()));
        }
        fn keyed<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<Vec<String>> {
            let bad = |m: String| Error::ModelFormat(m);
            let line = lines.next().ok_or_else(|| bad(format!("missing {key}")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(bad(format!("expected {key}, got {line:?}")));
            }
            Ok(parts.map(str::to_string).collect())
        }
        let num = |v: &[String], i: usize| -> Result<f64> {
            v.get(i)
                .ok_or_else(|| bad("missing number".into()))?
                .parse::<f64>()
                .map_err(|e| bad(e.to_string()))
        };
        let init_constant = num(&keyed(&mut lines, "init_constant")?, 0)?;
        let shrinkage = num(&keyed(&mut lines, "shrinkage")?, 0)?;
        let n_features = num(&keyed(&mut lines, "n_features")?, 0)? as usize;
        let n_trees = num(&keyed(&mut lines, "trees")?, 0)? as usize;
        let mut trees = Vec::with_capacity(n_trees);
        for _ in 0..n_trees {
            let head = keyed(&mut lines, "tree")?;
            let count = num(&head, 0)? as usize;
            let max_depth = num(&head, 1)? as usize;
            let mut raw = Vec::with_capacity(count);
            for _ in 0..count {
                let line = lines.next().ok_or_else(|| bad("truncated tree".into()))?;
                raw.push(parse_node(line)?);
            }
            let nodes = link_preorder(raw)?;
            trees.push(RegressionTree { nodes, max_depth });
        }
        Ok(Self {
            init_constant,
            shrinkage,
            n_features,
            trees,
        })
    }
}

fn parse_node(line: &str) -> Result<Node> {
    let bad = || Error::ModelFormat(format!("bad node line {line:?}"));
    let parts: Vec<&str> = line.split(',').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    match parts[0] {
        "split" => Ok(Node::Split {
            feature: parts[1].parse().map_err(|_| bad())?,
            threshold: parts[2].parse().map_err(|_| bad())?,
            right: 0,
        }),
        "leaf" => Ok(Node::Leaf {
            value: parts[3].parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

/// Restores right-child links of a pre-order node list.
fn link_preorder(mut nodes: Vec<Node>) -> Result<Vec<Node>> {
    fn walk(nodes: &mut [Node], i: usize) -> Result<usize> {
        match nodes.get(i) {
            None => Err(Error::ModelFormat("tree ends inside a split".into())),
            Some(Node::Leaf { .. }) => Ok(i + 1),
            Some(Node::Split { .. }) => {
                let right_at = walk(nodes, i + 1)?;
                if let Node::Split { right, .. } = &mut nodes[i] {
                    *right = right_at;
                }
                walk(nodes, right_at)
            }
        }
    }
    if walk(&mut nodes, 0)? != nodes.len() {
        return Err(Error::ModelFormat("trailing nodes after tree".into()));
    }
    Ok(nodes)
}

/// Fits the ensemble on the training partition of `dataset`.
pub fn fit(dataset: &SupervisedDataset, config: &GbmConfig) -> Result<GbmModel> {
    config.validate()?;
    let rows = dataset.partition_len(Partition::Train);
    if rows == 0 {
        return Err(Error::EmptyTrainSet);
    }
    let width = dataset.n_features();
    let features = &dataset.features()[..rows * width];
    let target = dataset.targets(Partition::Train);
    let init_constant = target.iter().sum::<f64>() / rows as f64;

    let all: Vec<u32> = (0..rows as u32).collect();
    let sorted = presort(features, width, &all);
    let mut current = vec![init_constant; rows];
    let mut residuals = vec![0.0; rows];
    let mut trees = Vec::with_capacity(config.estimators);
    for _ in 0..config.estimators {
        for ((r, y), f) in residuals.iter_mut().zip(target).zip(&current) {
            *r = y - f;
        }
        let tree = fit_tree_on(features, width, &residuals, config.max_depth, &sorted)?;
        for (i, f) in current.iter_mut().enumerate() {
            *f += config.shrinkage * tree.predict(&features[i * width..(i + 1) * width]);
        }
        trees.push(tree);
    }
    Ok(GbmModel {
        init_constant,
        shrinkage: config.shrinkage,
        n_features: width,
        trees,
    })
}

pub fn predict_series(
    model: &GbmModel,
    dataset: &SupervisedDataset,
    partition: Partition,
) -> Result<Vec<f64>> {
    dataset.rows(partition).map(|row| model.predict(row)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_residuals_single_leaf() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let t = fit_tree(&x, 1, &[0.1; 4], 3).unwrap();
        assert_eq!(t.nodes(), &[Node::Leaf { value: 0.1 }]);
    }

    #[test]
    fn depth_zero_is_mean() {
        let t = fit_tree(&[0.0, 1.0, 2.0], 1, &[1.0, 2.0, 6.0], 0).unwrap();
        assert_eq!(t.nodes(), &[Node::Leaf { value: 3.0 }]);
    }

    #[test]
    fn separable_stump() {
        let x = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0];
        let r = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0];
        let t = fit_tree(&x, 1, &r, 1).unwrap();
        match t.nodes() {
            [Node::Split { feature: 0, threshold, right: 2 }, Node::Leaf { value: l }, Node::Leaf { value: h }] =>
            {
                assert_eq!(*threshold, -0.5);
                assert_eq!((*l, *h), (-1.0, 1.0));
            }
            other => panic!("unexpected tree {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(fit_tree(&[], 1, &[], 2), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn depth_respected() {
        let x: Vec<f64> = (0..64).map(|i| i as f64).collect();
        let r: Vec<f64> = x.iter().map(|v| (v * 0.37).sin()).collect();
        for d in 0..5 {
            let t = fit_tree(&x, 1, &r, d).unwrap();
            assert!(t.depth() <= d);
        }
    }

    #[test]
    fn tie_prefers_lowest_feature() {
        // both columns separate the residuals identically
        let x = [0.0, 5.0, 0.0, 5.0, 1.0, 6.0, 1.0, 6.0];
        let t = fit_tree(&x, 2, &[-1.0, -1.0, 1.0, 1.0], 1).unwrap();
        assert!(matches!(t.nodes()[0], Node::Split { feature: 0, .. }));
    }

    #[test]
    fn zero_trees_predicts_init() {
        let m = GbmModel {
            init_constant: 2.5,
            shrinkage: 0.1,
            n_features: 1,
            trees: vec![],
        };
        assert_eq!(m.predict(&[9.0]).unwrap(), 2.5);
        let m = GbmModel {
            trees: vec![RegressionTree::leaf(4.0)],
            ..m
        };
        assert_eq!(m.predict(&[9.0]).unwrap(), 2.5 + 0.1 * 4.0);
        assert!(matches!(m.predict(&[]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_hyperparameters() {
        for cfg in [
            GbmConfig { estimators: 0, ..Default::default() },
            GbmConfig { shrinkage: 0.0, ..Default::default() },
            GbmConfig { shrinkage: 1.5, ..Default::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::InvalidHyperparameter(_))));
        }
    }

    #[test]
    fn text_round_trip() {
        let x: Vec<f64> = (0..40).map(|i| (i as f64 * 0.7).cos()).collect();
        let r: Vec<f64> = (0..20).map(|i| (i as f64 * 0.3).sin()).collect();
        let tree = fit_tree(&x, 2, &r, 3).unwrap();
        let m = GbmModel {
            init_constant: 0.1 + 0.2,
            shrinkage: 0.1,
            n_features: 2,
            trees: vec![tree, RegressionTree::leaf(-1.0)],
        };
        assert_eq!(GbmModel::from_text(&m.to_text()).unwrap(), m);
        assert!(GbmModel::from_text("netload-gbm v1\ninit_constant 1\nshrinkage 1\nn_features 1\ntrees 1\ntree 1 1\nsplit,0,1.0,\n").is_err());
    }
}
