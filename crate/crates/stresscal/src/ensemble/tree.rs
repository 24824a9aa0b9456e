//! Single CART decision tree with Gini (classification) or variance
//! (regression) splitting, grown under either the Random Forest rule
//! (best midpoint threshold per candidate feature) or the Extremely
//! Randomized rule (one uniform-random threshold per candidate feature).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Algorithm, EnsembleHyperparams};
use crate::error::{Error, Result};

/// A split must improve impurity by more than this to be accepted; gains
/// closer than this are treated as ties and broken toward the lowest
/// feature index, then the lowest threshold.
const MIN_GAIN: f64 = 1e-12;

/// Terminal node payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LeafValue {
    /// Per-class training counts over the declared label set.
    ClassCounts(Vec<usize>),
    /// Mean training target.
    Mean(f64),
}

/// Arena node: children are indices into the owning [`DecisionTree`]'s
/// node list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(LeafValue),
}

/// A fitted tree; the root is node 0. Traversal sends `x[feature] <= threshold`
/// left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

/// Training targets for one tree.
#[derive(Debug, Clone, Copy)]
pub enum TreeTarget<'a> {
    /// Class indices into a declared label set of `n_classes` labels.
    Classes {
        labels: &'a [usize],
        n_classes: usize,
    },
    /// Real-valued regression targets.
    Values(&'a [f64]),
}

/// Gini impurity of a probability distribution: `Σ p(1−p) = 1 − Σ p²`.
pub fn gini_impurity(p: &[f64]) -> f64 {
    1.0 - p.iter().map(|v| v * v).sum::<f64>()
}

fn gini_from_counts(counts: &[usize], total: f64) -> f64 {
    if total == 0.0 {
        return 0.0;
    }
    let sum_sq: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * p
        })
        .sum();
    1.0 - sum_sq
}

/// Population variance from running sums, clamped at 0 against rounding.
fn variance_from_sums(sum: f64, sum_sq: f64, n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    let mean = sum / n;
    (sum_sq / n - mean * mean).max(0.0)
}

struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// `true` when `candidate` beats `best` under the gain/feature/threshold
/// ordering (ties within [`MIN_GAIN`] go to the lower feature, then the
/// lower threshold, so the winner is independent of evaluation order).
fn beats(candidate: &Candidate, best: &Candidate) -> bool {
    if candidate.gain > best.gain + MIN_GAIN {
        return true;
    }
    if candidate.gain + MIN_GAIN < best.gain {
        return false;
    }
    (candidate.feature, candidate.threshold) < (best.feature, best.threshold)
}

/// Install `candidate` into `best` if it clears [`MIN_GAIN`] and wins the
/// ordering. Single acceptance path so the grower and test oracles agree.
fn consider(best: &mut Option<Candidate>, candidate: Candidate) {
    if candidate.gain <= MIN_GAIN {
        return;
    }
    let replace = match best {
        None => true,
        Some(current) => beats(&candidate, current),
    };
    if replace {
        *best = Some(candidate);
    }
}

struct Grower<'a> {
    x: &'a [Vec<f64>],
    target: TreeTarget<'a>,
    hyper: &'a EnsembleHyperparams,
    n_candidates: usize,
    n_root: f64,
    nodes: Vec<Node>,
    importances: Vec<f64>,
}

impl<'a> Grower<'a> {
    fn leaf_value(&self, idx: &[usize]) -> LeafValue {
        match self.target {
            TreeTarget::Classes { labels, n_classes } => {
                let mut counts = vec![0usize; n_classes];
                for &i in idx {
                    counts[labels[i]] += 1;
                }
                LeafValue::ClassCounts(counts)
            }
            TreeTarget::Values(y) => {
                let sum: f64 = idx.iter().map(|&i| y[i]).sum();
                LeafValue::Mean(sum / idx.len() as f64)
            }
        }
    }

    fn node_impurity(&self, idx: &[usize]) -> f64 {
        match self.target {
            TreeTarget::Classes { labels, n_classes } => {
                let mut counts = vec![0usize; n_classes];
                for &i in idx {
                    counts[labels[i]] += 1;
                }
                gini_from_counts(&counts, idx.len() as f64)
            }
            TreeTarget::Values(y) => {
                let (mut sum, mut sum_sq) = (0.0, 0.0);
                for &i in idx {
                    sum += y[i];
                    sum_sq += y[i] * y[i];
                }
                variance_from_sums(sum, sum_sq, idx.len() as f64)
            }
        }
    }

    fn is_pure(&self, idx: &[usize]) -> bool {
        match self.target {
            TreeTarget::Classes { labels, .. } => idx.iter().all(|&i| labels[i] == labels[idx[0]]),
            TreeTarget::Values(y) => idx.iter().all(|&i| y[i] == y[idx[0]]),
        }
    }

    /// Draw `n_candidates` distinct feature indices (partial Fisher-Yates).
    fn sample_features(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let p = self.x[0].len();
        let mut pool: Vec<usize> = (0..p).collect();
        for i in 0..self.n_candidates {
            let j = rng.gen_range(i..p);
            pool.swap(i, j);
        }
        pool.truncate(self.n_candidates);
        pool
    }

    /// Best candidate for one feature under the Random Forest rule:
    /// evaluate every midpoint between consecutive distinct sorted values.
    fn best_midpoint_split(&self, idx: &[usize], feature: usize) -> Option<Candidate> {
        let mut values: Vec<usize> = idx.to_vec();
        values.sort_by(|&a, &b| {
            self.x[a][feature]
                .partial_cmp(&self.x[b][feature])
                .expect("features are finite")
        });
        let n = idx.len() as f64;
        let node_impurity = self.node_impurity(idx);
        let mut best: Option<Candidate> = None;

        match self.target {
            TreeTarget::Classes { labels, n_classes } => {
                let mut left = vec![0usize; n_classes];
                let mut right = vec![0usize; n_classes];
                for &i in &values {
                    right[labels[i]] += 1;
                }
                for k in 0..values.len() - 1 {
                    let i = values[k];
                    left[labels[i]] += 1;
                    right[labels[i]] -= 1;
                    let (a, b) = (self.x[i][feature], self.x[values[k + 1]][feature]);
                    if a == b {
                        continue;
                    }
                    let threshold = propose_threshold(a, b);
                    let n_left = (k + 1) as f64;
                    let n_right = n - n_left;
                    let gain = node_impurity
                        - n_left / n * gini_from_counts(&left, n_left)
                        - n_right / n * gini_from_counts(&right, n_right);
                    consider(
                        &mut best,
                        Candidate {
                            feature,
                            threshold,
                            gain,
                        },
                    );
                }
            }
            TreeTarget::Values(y) => {
                let (mut left_sum, mut left_sq) = (0.0, 0.0);
                let (mut right_sum, mut right_sq) = (0.0, 0.0);
                for &i in &values {
                    right_sum += y[i];
                    right_sq += y[i] * y[i];
                }
                for k in 0..values.len() - 1 {
                    let i = values[k];
                    left_sum += y[i];
                    left_sq += y[i] * y[i];
                    right_sum -= y[i];
                    right_sq -= y[i] * y[i];
                    let (a, b) = (self.x[i][feature], self.x[values[k + 1]][feature]);
                    if a == b {
                        continue;
                    }
                    let threshold = propose_threshold(a, b);
                    let n_left = (k + 1) as f64;
                    let n_right = n - n_left;
                    let gain = node_impurity
                        - n_left / n * variance_from_sums(left_sum, left_sq, n_left)
                        - n_right / n * variance_from_sums(right_sum, right_sq, n_right);
                    consider(
                        &mut best,
                        Candidate {
                            feature,
                            threshold,
                            gain,
                        },
                    );
                }
            }
        }
        best
    }

    /// Candidate for one feature under the Extremely Randomized rule: a
    /// single uniform threshold in `[min, max)` of the node's values.
    fn random_split(
        &self,
        idx: &[usize],
        feature: usize,
        rng: &mut ChaCha8Rng,
    ) -> Option<Candidate> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &i in idx {
            lo = lo.min(self.x[i][feature]);
            hi = hi.max(self.x[i][feature]);
        }
        if lo == hi {
            return None;
        }
        let threshold = rng.gen_range(lo..hi);
        let n = idx.len() as f64;
        let node_impurity = self.node_impurity(idx);
        let gain = match self.target {
            TreeTarget::Classes { labels, n_classes } => {
                let mut left = vec![0usize; n_classes];
                let mut right = vec![0usize; n_classes];
                for &i in idx {
                    if self.x[i][feature] <= threshold {
                        left[labels[i]] += 1;
                    } else {
                        right[labels[i]] += 1;
                    }
                }
                let n_left: usize = left.iter().sum();
                let n_right = idx.len() - n_left;
                node_impurity
                    - n_left as f64 / n * gini_from_counts(&left, n_left as f64)
                    - n_right as f64 / n * gini_from_counts(&right, n_right as f64)
            }
            TreeTarget::Values(y) => {
                let (mut ls, mut lq, mut ln) = (0.0, 0.0, 0.0);
                let (mut rs, mut rq, mut rn) = (0.0, 0.0, 0.0);
                for &i in idx {
                    if self.x[i][feature] <= threshold {
                        ls += y[i];
                        lq += y[i] * y[i];
                        ln += 1.0;
                    } else {
                        rs += y[i];
                        rq += y[i] * y[i];
                        rn += 1.0;
                    }
                }
                node_impurity
                    - ln / n * variance_from_sums(ls, lq, ln)
                    - rn / n * variance_from_sums(rs, rq, rn)
            }
        };
        Some(Candidate {
            feature,
            threshold,
            gain,
        })
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let make_leaf = depth >= self.hyper.max_depth || idx.len() < 2 || self.is_pure(&idx);
        if !make_leaf {
            let candidates = self.sample_features(rng);
            let mut best: Option<Candidate> = None;
            for feature in candidates {
                let candidate = match self.hyper.algorithm {
                    Algorithm::RandomForest => self.best_midpoint_split(&idx, feature),
                    Algorithm::ExtraTrees => self.random_split(&idx, feature, rng),
                };
                if let Some(c) = candidate {
                    consider(&mut best, c);
                }
            }
            if let Some(split) = best {
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
                    .iter()
                    .partition(|&&i| self.x[i][split.feature] <= split.threshold);
                if !left_idx.is_empty() && !right_idx.is_empty() {
                    self.importances[split.feature] += idx.len() as f64 / self.n_root * split.gain;
                    let pos = self.nodes.len();
                    self.nodes.push(Node::Leaf(LeafValue::Mean(0.0)));
                    let left = self.grow(left_idx, depth + 1, rng);
                    let right = self.grow(right_idx, depth + 1, rng);
                    self.nodes[pos] = Node::Split {
                        feature: split.feature,
                        threshold: split.threshold,
                        left,
                        right,
                    };
                    return pos;
                }
            }
        }
        let pos = self.nodes.len();
        self.nodes.push(Node::Leaf(self.leaf_value(&idx)));
        pos
    }
}

/// Midpoint of two consecutive distinct sorted values, guarded so that the
/// split `x <= t` always separates them even when the midpoint rounds onto
/// the larger value.
fn propose_threshold(a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    if mid >= b {
        a
    } else {
        mid
    }
}

/// Fit one tree on the rows selected by `idx` (duplicates allowed, as in a
/// bootstrap resample). Returns the tree and its unnormalized MDI vector.
pub(crate) fn fit_tree_on(
    x: &[Vec<f64>],
    target: &TreeTarget<'_>,
    idx: Vec<usize>,
    hyper: &EnsembleHyperparams,
    rng: &mut ChaCha8Rng,
) -> (DecisionTree, Vec<f64>) {
    let p = x[0].len();
    let mut grower = Grower {
        x,
        target: *target,
        hyper,
        n_candidates: hyper.max_features.resolve(p),
        n_root: idx.len() as f64,
        nodes: Vec::new(),
        importances: vec![0.0; p],
    };
    grower.grow(idx, 0, rng);
    (
        DecisionTree {
            nodes: grower.nodes,
        },
        grower.importances,
    )
}

/// Fit one tree on all rows. Returns the tree and its unnormalized MDI
/// vector.
///
/// # Errors
/// * [`Error::EmptyInput`] with no rows.
/// * [`Error::ShapeMismatch`] when target length or row widths disagree.
pub fn fit_tree(
    x: &[Vec<f64>],
    target: &TreeTarget<'_>,
    hyper: &EnsembleHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<(DecisionTree, Vec<f64>)> {
    if x.is_empty() {
        return Err(Error::EmptyInput("tree training set".into()));
    }
    let p = x[0].len();
    if x.iter().any(|row| row.len() != p) {
        return Err(Error::ShapeMismatch("ragged feature matrix".into()));
    }
    let target_len = match target {
        TreeTarget::Classes { labels, .. } => labels.len(),
        TreeTarget::Values(y) => y.len(),
    };
    if target_len != x.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} rows but {target_len} targets",
            x.len()
        )));
    }
    hyper.validate()?;
    Ok(fit_tree_on(x, target, (0..x.len()).collect(), hyper, rng))
}

impl DecisionTree {
    /// Walk to the leaf for `x`.
    pub fn leaf(&self, x: &[f64]) -> &LeafValue {
        let mut node = &self.nodes[0];
        loop {
            match node {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold {
                        &self.nodes[*left]
                    } else {
                        &self.nodes[*right]
                    };
                }
                Node::Leaf(value) => return value,
            }
        }
    }

    /// Modal class of the reached leaf (lowest index on ties).
    ///
    /// # Panics
    /// Panics if the tree was fitted on regression targets.
    pub fn predict_class(&self, x: &[f64]) -> usize {
        match self.leaf(x) {
            LeafValue::ClassCounts(counts) => modal_class(counts),
            LeafValue::Mean(_) => panic!("classification prediction from a regression tree"),
        }
    }

    /// Mean target of the reached leaf.
    ///
    /// # Panics
    /// Panics if the tree was fitted on class labels.
    pub fn predict_value(&self, x: &[f64]) -> f64 {
        match self.leaf(x) {
            LeafValue::Mean(m) => *m,
            LeafValue::ClassCounts(_) => panic!("regression prediction from a classification tree"),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_internal(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Split { .. }))
            .count()
    }

    /// Maximum root-to-leaf edge count.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    #[cfg(test)]
    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    #[cfg(test)]
    pub(crate) fn single_leaf(value: LeafValue) -> Self {
        DecisionTree {
            nodes: vec![Node::Leaf(value)],
        }
    }
}

/// Argmax over counts, lowest index on ties.
pub(crate) fn modal_class(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = i;
        }
    }
    best
}
