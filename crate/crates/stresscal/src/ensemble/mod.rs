//! Hand-rolled tree ensembles: CART decision trees, Random Forests, and
//! Extremely Randomized Trees for classification and regression, with
//! mean-decrease-impurity (MDI) feature importances.
//!
//! Everything is deterministic given the hyperparameters: per-tree RNG
//! streams are derived from the master seed with a counter-based mix, so
//! training produces bit-identical models under any thread count.

mod forest;
mod tree;

pub use forest::{fit_forest, TrainedEnsemble};
pub use tree::{fit_tree, gini_impurity, DecisionTree, LeafValue, Node, TreeTarget};

use serde::{Deserialize, Serialize};

use crate::dataio::TaskKind;
use crate::error::{Error, Result};

/// Ensemble flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Bagged trees with midpoint threshold search.
    RandomForest,
    /// No bagging; one uniform-random threshold per candidate feature.
    ExtraTrees,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::RandomForest => write!(f, "random_forest"),
            Algorithm::ExtraTrees => write!(f, "extra_trees"),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rf" | "random_forest" | "random-forest" | "randomforest" => {
                Ok(Algorithm::RandomForest)
            }
            "et" | "extra_trees" | "extra-trees" | "extratrees" => Ok(Algorithm::ExtraTrees),
            other => Err(Error::Usage(format!(
                "unknown algorithm '{other}' (expected rf or extratrees)"
            ))),
        }
    }
}

/// Number of candidate features drawn (without replacement) at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `round(sqrt(p))` — the classification rule.
    Sqrt,
    /// `round(p / 3)` — the regression rule.
    Third,
    /// All `p` features (exhaustive candidate set).
    All,
}

impl MaxFeatures {
    /// Resolve against `p` features, clamped to `[1, p]`.
    pub fn resolve(&self, p: usize) -> usize {
        let raw = match self {
            MaxFeatures::Sqrt => (p as f64).sqrt().round() as usize,
            MaxFeatures::Third => (p as f64 / 3.0).round() as usize,
            MaxFeatures::All => p,
        };
        raw.clamp(1, p.max(1))
    }
}

impl std::str::FromStr for MaxFeatures {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sqrt" => Ok(MaxFeatures::Sqrt),
            "third" => Ok(MaxFeatures::Third),
            "all" => Ok(MaxFeatures::All),
            other => Err(Error::Usage(format!(
                "unknown max_features rule '{other}' (expected sqrt, third, or all)"
            ))),
        }
    }
}

/// Full training configuration of one ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleHyperparams {
    pub algorithm: Algorithm,
    pub task: TaskKind,
    pub n_trees: usize,
    pub max_depth: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub seed: u64,
}

impl EnsembleHyperparams {
    /// Shipped Random Forest defaults: 1000 shallow (depth-2) bagged trees,
    /// `sqrt(p)` candidates for classification and `p/3` for regression.
    pub fn random_forest(task: TaskKind, seed: u64) -> Self {
        Self {
            algorithm: Algorithm::RandomForest,
            task,
            n_trees: 1000,
            max_depth: 2,
            max_features: Self::rule_for(task),
            bootstrap: true,
            seed,
        }
    }

    /// Shipped Extremely Randomized Trees defaults: 1000 depth-16 trees on
    /// the full sample (no bagging).
    pub fn extra_trees(task: TaskKind, seed: u64) -> Self {
        Self {
            algorithm: Algorithm::ExtraTrees,
            task,
            n_trees: 1000,
            max_depth: 16,
            max_features: Self::rule_for(task),
            bootstrap: false,
            seed,
        }
    }

    /// Shipped defaults for an algorithm/task pair.
    pub fn defaults(algorithm: Algorithm, task: TaskKind, seed: u64) -> Self {
        match algorithm {
            Algorithm::RandomForest => Self::random_forest(task, seed),
            Algorithm::ExtraTrees => Self::extra_trees(task, seed),
        }
    }

    fn rule_for(task: TaskKind) -> MaxFeatures {
        match task {
            TaskKind::Classification => MaxFeatures::Sqrt,
            TaskKind::Regression => MaxFeatures::Third,
        }
    }

    /// # Errors
    /// [`Error::Parameter`] when `n_trees` or `max_depth` is zero.
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Parameter("n_trees must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Parameter("max_depth must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_defaults_follow_the_algorithm_tables() {
        let rf = EnsembleHyperparams::random_forest(TaskKind::Classification, 1);
        assert_eq!(rf.n_trees, 1000);
        assert_eq!(rf.max_depth, 2);
        assert_eq!(rf.max_features, MaxFeatures::Sqrt);
        assert!(rf.bootstrap);

        let et = EnsembleHyperparams::extra_trees(TaskKind::Regression, 1);
        assert_eq!(et.n_trees, 1000);
        assert_eq!(et.max_depth, 16);
        assert_eq!(et.max_features, MaxFeatures::Third);
        assert!(!et.bootstrap);
    }

    #[test]
    fn max_features_rules_round_and_clamp() {
        assert_eq!(MaxFeatures::Sqrt.resolve(46), 7); // sqrt(46) = 6.78 -> 7
        assert_eq!(MaxFeatures::Sqrt.resolve(23), 5); // sqrt(23) = 4.80 -> 5
        assert_eq!(MaxFeatures::Third.resolve(46), 15);
        assert_eq!(MaxFeatures::Third.resolve(1), 1); // floor at 1
        assert_eq!(MaxFeatures::All.resolve(9), 9);
        assert_eq!(MaxFeatures::Sqrt.resolve(2), 1);
    }

    #[test]
    fn algorithm_names_parse_from_cli_spellings() {
        assert_eq!("rf".parse::<Algorithm>().unwrap(), Algorithm::RandomForest);
        assert_eq!(
            "extratrees".parse::<Algorithm>().unwrap(),
            Algorithm::ExtraTrees
        );
        assert_eq!(
            "extra-trees".parse::<Algorithm>().unwrap(),
            Algorithm::ExtraTrees
        );
        assert!("boosting".parse::<Algorithm>().is_err());
    }

    #[test]
    fn invalid_hyperparams_are_rejected() {
        let mut h = EnsembleHyperparams::random_forest(TaskKind::Classification, 0);
        h.n_trees = 0;
        assert!(h.validate().is_err());
        h.n_trees = 10;
        h.max_depth = 0;
        assert!(h.validate().is_err());
    }
}
