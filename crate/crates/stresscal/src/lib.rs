//! Stress recognition from wearable physiological signals, with
//! person-specific model calibration.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! 1. **Signals → features** ([`signal`], [`features`]): Butterworth
//!    denoising, R-peak detection on ECG, SCR event detection on EDA, then
//!    sliding-window extraction of 23 HRV and 22 EDA features per window.
//! 2. **Feature engineering** ([`transforms`]): skew-triggered
//!    log/sqrt/Yeo-Johnson transforms with robust scaling, class
//!    rebalancing, and importance-based feature selection — all captured in
//!    a replayable recipe so the exact training-time mapping can be applied
//!    to new data.
//! 3. **Models** ([`ensemble`]): random forests and extremely randomized
//!    trees for classification and regression, built from scratch with
//!    deterministic per-tree seeding, so results are bit-reproducible at
//!    any thread count.
//! 4. **Evaluation** ([`eval`]): person-specific k-fold, leave-one-subject-
//!    out, a calibration-size sweep that measures how quickly a generic
//!    model personalizes, and a subject-identity probe for leakage checks.
//!
//! [`dataio`] holds the table/artifact/report formats, [`config`] the run
//! configuration, and [`cli`] the command-line frontend that strings the
//! stages together.
//!
//! # Example
//!
//! ```
//! use stresscal::dataio::{FeatureRow, FeatureTable, TaskKind};
//! use stresscal::ensemble::{fit_forest, Algorithm, EnsembleHyperparams};
//!
//! // A toy two-class table: the first feature separates the classes.
//! let rows: Vec<FeatureRow> = (0..20)
//!     .map(|i| FeatureRow {
//!         subject_id: format!("s{}", i % 2),
//!         label: Some(if i < 10 { "calm" } else { "stress" }.to_string()),
//!         target: None,
//!         features: vec![i as f64, 0.5],
//!     })
//!     .collect();
//! let table = FeatureTable::new(
//!     vec!["MEAN_RR".into(), "SDRR".into()],
//!     rows,
//!     TaskKind::Classification,
//! )?;
//!
//! let mut hyper = EnsembleHyperparams::defaults(
//!     Algorithm::RandomForest,
//!     TaskKind::Classification,
//!     7,
//! );
//! hyper.n_trees = 25;
//! let model = fit_forest(&table, &hyper)?;
//! assert_eq!(model.predict_label(&[2.0, 0.5])?, "calm");
//! assert_eq!(model.predict_label(&[17.0, 0.5])?, "stress");
//! # Ok::<(), stresscal::Error>(())
//! ```

pub mod cli;
pub mod config;
pub mod dataio;
pub mod ensemble;
mod error;
pub mod eval;
pub mod features;
mod seeds;
pub mod signal;
mod stats;
pub mod transforms;

pub use error::{Error, Result};
