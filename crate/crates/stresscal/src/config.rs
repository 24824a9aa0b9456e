//! Run configuration.
//!
//! A run is described by a single [`RunConfig`]: where the data lives, how
//! signals are windowed, how features are engineered, which model to fit,
//! and which evaluation protocol to apply.  Configs are read from a TOML
//! file, command-line flags are merged on top (flags win), and the merged
//! result is echoed next to every output so any artifact can be traced back
//! to the exact settings that produced it.
//!
//! All randomness derives from the single `seed` field: each pipeline stage
//! draws its own stream via [`RunConfig::stage_seed`], so adding a stage or
//! reordering stages never perturbs the others.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataio::TaskKind;
use crate::ensemble::{Algorithm, EnsembleHyperparams};
use crate::error::{Error, Result};
use crate::eval::CalibrationConfig;
use crate::features::{ExtractOptions, FrequencyBands};
use crate::seeds;
use crate::signal::FilterSpec;
use crate::transforms::DEFAULT_SKEW_THRESHOLD;

/// Name of the config echo written into the output directory on every run.
pub const CONFIG_ECHO_FILE: &str = "run_config.toml";

/// Complete description of a pipeline run.
///
/// Every field has a default, so an empty file (or no file at all) is a
/// valid configuration; unknown keys are rejected to catch typos early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; all per-stage randomness is derived from it.
    pub seed: u64,
    /// Directory that receives reports, artifacts, and the config echo.
    pub out_dir: PathBuf,
    /// Worker threads for ensemble fitting; `None` uses all cores.
    pub threads: Option<usize>,
    pub data: DataSection,
    pub extract: ExtractSection,
    pub engineering: EngineeringSection,
    pub model: ModelSection,
    pub evaluation: EvaluationSection,
    pub calibration: CalibrationSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out_dir: PathBuf::from("out"),
            threads: None,
            data: DataSection::default(),
            extract: ExtractSection::default(),
            engineering: EngineeringSection::default(),
            model: ModelSection::default(),
            evaluation: EvaluationSection::default(),
            calibration: CalibrationSection::default(),
        }
    }
}

/// Input locations.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    /// Feature table CSV consumed by `train`, `evaluate`, `calibrate`,
    /// and `rank-features`.
    pub features: Option<PathBuf>,
    /// Sidecar schema for the feature table; defaults to the table path
    /// with a `.schema` extension.
    pub schema: Option<PathBuf>,
    /// Subject manifest consumed by `extract`.
    pub manifest: Option<PathBuf>,
}

impl DataSection {
    /// Path of the feature table, or a usage error naming the missing flag.
    pub fn features_path(&self) -> Result<&Path> {
        self.features.as_deref().ok_or_else(|| {
            Error::Usage("no feature table given (use --features or [data].features)".into())
        })
    }

    /// Schema path: explicit if set, otherwise `<features>.schema`.
    pub fn schema_path(&self) -> Result<PathBuf> {
        if let Some(schema) = &self.schema {
            return Ok(schema.clone());
        }
        Ok(self.features_path()?.with_extension("schema"))
    }

    /// Path of the extraction manifest, or a usage error.
    pub fn manifest_path(&self) -> Result<&Path> {
        self.manifest.as_deref().ok_or_else(|| {
            Error::Usage("no manifest given (use --manifest or [data].manifest)".into())
        })
    }
}

/// Signal-to-feature extraction parameters (see [`ExtractOptions`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractSection {
    /// HRV window length in seconds (>= 300 so the VLF band resolves).
    pub hrv_window_s: f64,
    /// EDA window length in seconds.
    pub eda_window_s: f64,
    /// EDA window step in samples.
    pub eda_step: usize,
    /// EDA low-pass cutoff in Hz.
    pub cutoff_hz: f64,
    /// EDA Butterworth filter order.
    pub filter_order: usize,
    /// EDA post-filter moving-average width in seconds.
    pub smoothing_window_s: f64,
    /// SCR onset slope threshold in µS/s.
    pub scr_threshold: f64,
    /// VLF band edges `[lo, hi)` in Hz.
    pub vlf_band: [f64; 2],
    /// LF band edges `[lo, hi)` in Hz.
    pub lf_band: [f64; 2],
    /// HF band edges `[lo, hi)` in Hz.
    pub hf_band: [f64; 2],
}

impl Default for ExtractSection {
    fn default() -> Self {
        let options = ExtractOptions::default();
        Self {
            hrv_window_s: options.hrv_window_s,
            eda_window_s: options.eda_window_s,
            eda_step: options.eda_step,
            cutoff_hz: options.filter.cutoff_hz,
            filter_order: options.filter.order,
            smoothing_window_s: options.filter.smoothing_window_s,
            scr_threshold: options.scr_threshold,
            vlf_band: options.bands.vlf.into(),
            lf_band: options.bands.lf.into(),
            hf_band: options.bands.hf.into(),
        }
    }
}

impl ExtractSection {
    /// Convert to the extraction options consumed by the feature pipeline.
    pub fn options(&self) -> ExtractOptions {
        ExtractOptions {
            hrv_window_s: self.hrv_window_s,
            eda_window_s: self.eda_window_s,
            eda_step: self.eda_step,
            filter: FilterSpec {
                cutoff_hz: self.cutoff_hz,
                order: self.filter_order,
                smoothing_window_s: self.smoothing_window_s,
            },
            scr_threshold: self.scr_threshold,
            bands: FrequencyBands {
                vlf: (self.vlf_band[0], self.vlf_band[1]),
                lf: (self.lf_band[0], self.lf_band[1]),
                hf: (self.hf_band[0], self.hf_band[1]),
            },
        }
    }
}

/// Feature-engineering parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineeringSection {
    /// Absolute skewness above which a column is transformed.
    pub skew_threshold: f64,
    /// Downsample majority classes to the minority count before fitting.
    pub rebalance: bool,
    /// Optional selection policy, e.g. `top_k=20` or `min_mdi=0.01`.
    pub select: Option<String>,
    /// Disable the distribution transforms entirely (scaling included).
    pub no_transform: bool,
}

impl Default for EngineeringSection {
    fn default() -> Self {
        Self {
            skew_threshold: DEFAULT_SKEW_THRESHOLD,
            rebalance: false,
            select: None,
            no_transform: false,
        }
    }
}

/// Ensemble hyperparameters; unset fields fall back to the per-algorithm
/// defaults (see [`EnsembleHyperparams::defaults`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    /// `rf` | `extratrees`.
    pub algorithm: String,
    /// `classification` | `regression`.
    pub task: String,
    pub n_trees: Option<usize>,
    pub max_depth: Option<usize>,
    /// `sqrt` | `third` | `all`.
    pub max_features: Option<String>,
    pub bootstrap: Option<bool>,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            algorithm: "rf".into(),
            task: "classification".into(),
            n_trees: None,
            max_depth: None,
            max_features: None,
            bootstrap: None,
        }
    }
}

impl ModelSection {
    /// Resolve to concrete hyperparameters seeded with `seed`.
    ///
    /// # Errors
    /// [`Error::Config`] for unknown algorithm/task/rule spellings;
    /// [`EnsembleHyperparams::validate`] errors for out-of-range values.
    pub fn hyperparams(&self, seed: u64) -> Result<EnsembleHyperparams> {
        let algorithm: Algorithm = self.algorithm.parse()?;
        let task: TaskKind = self.task.parse()?;
        let mut hyper = EnsembleHyperparams::defaults(algorithm, task, seed);
        if let Some(n_trees) = self.n_trees {
            hyper.n_trees = n_trees;
        }
        if let Some(max_depth) = self.max_depth {
            hyper.max_depth = max_depth;
        }
        if let Some(rule) = &self.max_features {
            hyper.max_features = rule.parse()?;
        }
        if let Some(bootstrap) = self.bootstrap {
            hyper.bootstrap = bootstrap;
        }
        hyper.validate()?;
        Ok(hyper)
    }
}

/// Evaluation protocol parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationSection {
    /// `kfold` (person-specific) | `loso` (generic).
    pub protocol: String,
    /// Fold count for `kfold`.
    pub k: usize,
    /// Restrict `kfold` to one subject; all subjects when unset.
    pub subject: Option<String>,
}

impl Default for EvaluationSection {
    fn default() -> Self {
        Self {
            protocol: "kfold".into(),
            k: 10,
            subject: None,
        }
    }
}

/// Calibration sweep parameters (see [`CalibrationConfig`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSection {
    /// Held-out subject count.
    pub q: usize,
    /// Calibration sizes to sweep, strictly increasing.
    pub sizes: Vec<usize>,
    /// Fraction of each held-out subject's rows available for calibration.
    pub calibration_fraction: f64,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        let config = CalibrationConfig::default();
        Self {
            q: config.q,
            sizes: config.sizes,
            calibration_fraction: config.calibration_fraction,
        }
    }
}

impl CalibrationSection {
    /// Convert to the sweep configuration, seeding its subject selection
    /// and row draws with `seed`.
    pub fn config(&self, seed: u64) -> CalibrationConfig {
        CalibrationConfig {
            q: self.q,
            sizes: self.sizes.clone(),
            calibration_fraction: self.calibration_fraction,
            seed,
        }
    }
}

impl RunConfig {
    /// Read a config file.
    ///
    /// # Errors
    /// [`Error::Config`] naming the path for unreadable files, TOML syntax
    /// errors, and unknown keys.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Derive the seed for a named pipeline stage from the master seed.
    pub fn stage_seed(&self, stage: &str) -> u64 {
        seeds::stage_seed(self.seed, stage)
    }

    /// Serialize for the config echo.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }

    /// Write the config echo into `out_dir` (creating the directory), so
    /// outputs stay traceable to the settings that produced them.
    pub fn write_echo(&self) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join(CONFIG_ECHO_FILE);
        std::fs::write(&path, self.to_toml()?)?;
        Ok(path)
    }
}
