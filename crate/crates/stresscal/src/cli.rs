//! Command-line interface.
//!
//! Six subcommands cover the pipeline end to end: `extract` turns raw
//! recordings into windowed feature tables, `train` engineers features and
//! fits an ensemble, `evaluate` runs a cross-validation protocol,
//! `calibrate` sweeps per-subject calibration sizes, `rank-features` probes
//! importance rankings, and `report` re-renders saved reports.
//!
//! Settings come from an optional TOML config (`--config`) with flags
//! merged on top (flags win), and the merged configuration is echoed into
//! the output directory so every artifact is traceable.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{DataSection, ModelSection, RunConfig};
use crate::dataio::{
    json_string, load_feature_table, load_ibi_series, load_signal_recording, save_model_artifact,
    write_feature_table, write_report, write_table_schema, FeatureTable, ModelArtifact,
    ReportFormat, SignalKind, TableSchema,
};
use crate::ensemble::{fit_forest, TrainedEnsemble};
use crate::error::{Error, Result};
use crate::eval::{
    calibration_sweep, kfold_person_specific, kfold_person_specific_all, loso_generic,
    subject_id_probe, CalibrationCurve, EvaluationReport, ProbeReport, RankedFeature,
};
use crate::features::{extract_feature_table, ConditionSpan, SubjectRecording};
use crate::transforms::{apply_transform_policy, rebalance, select_features, SelectionPolicy};

/// Stress recognition from wearable HRV/EDA features with person-specific
/// model calibration.
#[derive(Debug, Parser)]
#[command(name = "stresscal", version, propagate_version = true)]
pub struct Cli {
    /// Run-config TOML file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed; every pipeline stage derives its own stream from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for reports, artifacts, and the config echo.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Worker threads for ensemble fitting (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract windowed HRV/EDA feature tables from raw recordings.
    Extract(ExtractArgs),
    /// Engineer features and fit an ensemble, saving a model artifact.
    Train(TrainArgs),
    /// Evaluate an ensemble with a cross-validation protocol.
    Evaluate(EvaluateArgs),
    /// Sweep per-subject calibration sizes against a generic model.
    Calibrate(CalibrateArgs),
    /// Rank features by impurity importance with a subject-id probe column.
    RankFeatures(RankFeaturesArgs),
    /// Print the summary of a saved report, optionally re-rendering it.
    Report(ReportArgs),
}

/// Feature-table location flags shared by the table-consuming commands.
#[derive(Debug, Args)]
struct TableFlags {
    /// Feature table CSV.
    #[arg(long, value_name = "FILE")]
    features: Option<PathBuf>,
    /// Sidecar schema (default: the table path with a .schema extension).
    #[arg(long, value_name = "FILE")]
    schema: Option<PathBuf>,
}

impl TableFlags {
    fn merge_into(self, data: &mut DataSection) {
        if let Some(features) = self.features {
            data.features = Some(features);
        }
        if let Some(schema) = self.schema {
            data.schema = Some(schema);
        }
    }
}

/// Ensemble hyperparameter flags shared by the model-fitting commands.
#[derive(Debug, Args)]
struct ModelFlags {
    /// Ensemble algorithm: rf | extratrees.
    #[arg(long)]
    algorithm: Option<String>,
    /// Prediction task: classification | regression.
    #[arg(long)]
    task: Option<String>,
    /// Number of trees (default: 1000).
    #[arg(long)]
    n_trees: Option<usize>,
    /// Maximum tree depth (default: 2 for rf, 16 for extratrees).
    #[arg(long)]
    max_depth: Option<usize>,
    /// Features sampled per split: sqrt | third | all.
    #[arg(long)]
    max_features: Option<String>,
    /// Bootstrap-resample rows per tree: true | false.
    #[arg(long, value_name = "BOOL")]
    bootstrap: Option<bool>,
}

impl ModelFlags {
    fn merge_into(self, model: &mut ModelSection) {
        if let Some(algorithm) = self.algorithm {
            model.algorithm = algorithm;
        }
        if let Some(task) = self.task {
            model.task = task;
        }
        if let Some(n_trees) = self.n_trees {
            model.n_trees = Some(n_trees);
        }
        if let Some(max_depth) = self.max_depth {
            model.max_depth = Some(max_depth);
        }
        if let Some(max_features) = self.max_features {
            model.max_features = Some(max_features);
        }
        if let Some(bootstrap) = self.bootstrap {
            model.bootstrap = Some(bootstrap);
        }
    }
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Subject manifest (TOML) listing signal files and condition spans.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    /// HRV window length in seconds (>= 300).
    #[arg(long)]
    hrv_window_s: Option<f64>,
    /// EDA window length in seconds.
    #[arg(long)]
    eda_window_s: Option<f64>,
    /// EDA window step in samples.
    #[arg(long)]
    eda_step: Option<usize>,
    /// EDA low-pass cutoff in Hz.
    #[arg(long)]
    cutoff_hz: Option<f64>,
    /// EDA Butterworth filter order (positive even integer).
    #[arg(long)]
    filter_order: Option<usize>,
    /// EDA post-filter moving-average width in seconds.
    #[arg(long)]
    smooth_window_s: Option<f64>,
    /// SCR onset slope threshold in µS/s.
    #[arg(long)]
    scr_threshold: Option<f64>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    table: TableFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Absolute skewness above which a feature is transformed.
    #[arg(long)]
    skew_threshold: Option<f64>,
    /// Downsample majority classes to the minority count before fitting.
    #[arg(long)]
    rebalance: bool,
    /// Skip distribution transforms and robust scaling.
    #[arg(long)]
    no_transform: bool,
    /// Refit on a selected subset: top_k=<n> | min_mdi=<x>.
    #[arg(long, value_name = "POLICY")]
    select: Option<String>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    table: TableFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Evaluation protocol: kfold (person-specific) | loso (generic).
    #[arg(long)]
    protocol: Option<String>,
    /// Fold count for kfold.
    #[arg(long)]
    k: Option<usize>,
    /// Restrict person-specific kfold to one subject.
    #[arg(long, value_name = "ID")]
    subject: Option<String>,
    /// Downsample majority classes to the minority count first.
    #[arg(long)]
    rebalance: bool,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[command(flatten)]
    table: TableFlags,
    #[command(flatten)]
    model: ModelFlags,
    /// Number of held-out subjects.
    #[arg(long)]
    q: Option<usize>,
    /// Comma-separated calibration sizes, e.g. 0,1,2,5,10,20,50,100.
    #[arg(long, value_name = "LIST")]
    sizes: Option<String>,
    /// Fraction of each held-out subject's rows usable for calibration.
    #[arg(long)]
    calibration_fraction: Option<f64>,
}

#[derive(Debug, Args)]
struct RankFeaturesArgs {
    #[command(flatten)]
    table: TableFlags,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Saved JSON report (evaluation, calibration curve, or ranking).
    #[arg(value_name = "REPORT")]
    input: PathBuf,
    /// Output format for --out: json | csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Re-render the report to this path; only the summary prints without it.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Entry point used by `main`: parse, run, and map errors to exit codes
/// (0 success, 2 usage/config, 1 runtime).
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap routes --help/--version to stdout with code 0 and real
            // parse errors to stderr with code 2.
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

/// Parse `args` (including the binary name) and run the command; useful
/// for driving the CLI in-process.
pub fn run_from<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    run(cli)
}

/// Run a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out_dir) = cli.out_dir {
        config.out_dir = out_dir;
    }
    if let Some(threads) = cli.threads {
        config.threads = Some(threads);
    }

    let command = cli.command;
    match config.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(format!("cannot build a {threads}-thread pool: {e}")))?;
            pool.install(move || dispatch(command, config))
        }
        None => dispatch(command, config),
    }
}

fn dispatch(command: Command, mut config: RunConfig) -> Result<()> {
    match command {
        Command::Extract(args) => cmd_extract(args, &mut config),
        Command::Train(args) => cmd_train(args, &mut config),
        Command::Evaluate(args) => cmd_evaluate(args, &mut config),
        Command::Calibrate(args) => cmd_calibrate(args, &mut config),
        Command::RankFeatures(args) => cmd_rank_features(args, &mut config),
        Command::Report(args) => cmd_report(args),
    }
}

// ---------------------------------------------------------------------------
// extract

/// Subject manifest: which files hold each subject's signals and which
/// condition was active when.  Relative paths resolve against the
/// manifest's directory.
#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    subjects: Vec<ManifestSubject>,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestSubject {
    id: String,
    /// Raw ECG, one sample per line; requires `ecg_rate_hz`.
    ecg: Option<PathBuf>,
    ecg_rate_hz: Option<f64>,
    /// Pre-computed inter-beat intervals in ms, one per line; takes
    /// precedence over `ecg`.
    ibi: Option<PathBuf>,
    /// Raw skin conductance, one sample per line; requires `eda_rate_hz`.
    eda: Option<PathBuf>,
    eda_rate_hz: Option<f64>,
    #[serde(default)]
    conditions: Vec<ManifestCondition>,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestCondition {
    label: String,
    start_s: f64,
    end_s: f64,
    target: Option<f64>,
}

fn load_manifest(path: &Path) -> Result<Manifest> {
    require_file(path)?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read manifest {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| Error::Config(format!("invalid manifest {}: {e}", path.display())))
}

fn build_recordings(manifest: &Manifest, base: &Path) -> Result<Vec<SubjectRecording>> {
    if manifest.subjects.is_empty() {
        return Err(Error::EmptyInput("manifest lists no subjects".into()));
    }
    let resolve = |p: &Path| {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let mut recordings = Vec::with_capacity(manifest.subjects.len());
    for subject in &manifest.subjects {
        let id = &subject.id;
        let ibi = match &subject.ibi {
            Some(path) => {
                let path = resolve(path);
                require_file(&path)?;
                Some(load_ibi_series(&path)?)
            }
            None => None,
        };
        let ecg = match &subject.ecg {
            Some(path) => {
                let rate = subject.ecg_rate_hz.ok_or_else(|| {
                    Error::Config(format!("subject {id}: ecg file given without ecg_rate_hz"))
                })?;
                let path = resolve(path);
                require_file(&path)?;
                Some(load_signal_recording(&path, SignalKind::Ecg, rate)?)
            }
            None => None,
        };
        let eda = match &subject.eda {
            Some(path) => {
                let rate = subject.eda_rate_hz.ok_or_else(|| {
                    Error::Config(format!("subject {id}: eda file given without eda_rate_hz"))
                })?;
                let path = resolve(path);
                require_file(&path)?;
                Some(load_signal_recording(&path, SignalKind::Eda, rate)?)
            }
            None => None,
        };
        if ibi.is_none() && ecg.is_none() && eda.is_none() {
            return Err(Error::Config(format!(
                "subject {id}: no signal files given (need ibi, ecg, or eda)"
            )));
        }
        let conditions = subject
            .conditions
            .iter()
            .map(|c| ConditionSpan {
                label: c.label.clone(),
                start_s: c.start_s,
                end_s: c.end_s,
                target: c.target,
            })
            .collect();
        recordings.push(SubjectRecording {
            subject_id: id.clone(),
            ecg,
            ibi,
            eda,
            conditions,
        });
    }
    Ok(recordings)
}

fn cmd_extract(args: ExtractArgs, config: &mut RunConfig) -> Result<()> {
    if let Some(manifest) = args.manifest {
        config.data.manifest = Some(manifest);
    }
    if let Some(v) = args.hrv_window_s {
        config.extract.hrv_window_s = v;
    }
    if let Some(v) = args.eda_window_s {
        config.extract.eda_window_s = v;
    }
    if let Some(v) = args.eda_step {
        config.extract.eda_step = v;
    }
    if let Some(v) = args.cutoff_hz {
        config.extract.cutoff_hz = v;
    }
    if let Some(v) = args.filter_order {
        config.extract.filter_order = v;
    }
    if let Some(v) = args.smooth_window_s {
        config.extract.smoothing_window_s = v;
    }
    if let Some(v) = args.scr_threshold {
        config.extract.scr_threshold = v;
    }
    let manifest_path = config.data.manifest_path()?.to_path_buf();
    config.write_echo()?;

    let manifest = load_manifest(&manifest_path)?;
    let base = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let recordings = build_recordings(&manifest, base)?;
    let output = extract_feature_table(&recordings, &config.extract.options())?;

    if let Some(hrv) = &output.hrv {
        write_modality(&config.out_dir, "hrv", hrv)?;
    }
    if let Some(eda) = &output.eda {
        write_modality(&config.out_dir, "eda", eda)?;
    }
    let log_path = config.out_dir.join("extract_log.json");
    fs::write(&log_path, json_string(&output.logs)?)?;
    println!("extraction log: {}", log_path.display());
    Ok(())
}

fn write_modality(out_dir: &Path, name: &str, table: &FeatureTable) -> Result<()> {
    let csv_path = out_dir.join(format!("features_{name}.csv"));
    write_feature_table(table, &csv_path)?;
    write_table_schema(table, &csv_path.with_extension("schema"))?;
    println!(
        "{name} features: {} rows x {} columns -> {}",
        table.n_rows(),
        table.n_features(),
        csv_path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// train

fn cmd_train(args: TrainArgs, config: &mut RunConfig) -> Result<()> {
    args.table.merge_into(&mut config.data);
    args.model.merge_into(&mut config.model);
    if let Some(v) = args.skew_threshold {
        config.engineering.skew_threshold = v;
    }
    if args.rebalance {
        config.engineering.rebalance = true;
    }
    if args.no_transform {
        config.engineering.no_transform = true;
    }
    if let Some(v) = args.select {
        config.engineering.select = Some(v);
    }
    let hyper = config.model.hyperparams(config.stage_seed("train"))?;
    let policy = config
        .engineering
        .select
        .as_deref()
        .map(str::parse::<SelectionPolicy>)
        .transpose()?;
    config.write_echo()?;

    let mut table = load_table(&config.data)?;
    if config.engineering.rebalance {
        let before = table.n_rows();
        table = rebalance(&table, config.stage_seed("rebalance"))?;
        println!("rebalanced: {before} rows -> {}", table.n_rows());
    }
    let (mut engineered, recipe) = if config.engineering.no_transform {
        (table, None)
    } else {
        let (engineered, recipe) =
            apply_transform_policy(&table, config.engineering.skew_threshold)?;
        (engineered, Some(recipe))
    };

    let mut model = fit_forest(&engineered, &hyper)?;
    if let Some(policy) = policy {
        let keep = select_features(model.feature_importances(), policy)?;
        println!(
            "selected {} of {} features, refitting",
            keep.len(),
            engineered.n_features()
        );
        engineered = engineered.project(&keep)?;
        model = fit_forest(&engineered, &hyper)?;
    }
    println!(
        "fitted {} ({}) with {} trees on {} rows x {} features",
        hyper.algorithm,
        hyper.task,
        hyper.n_trees,
        engineered.n_rows(),
        engineered.n_features()
    );

    let ranking = ranked_importances(&model);
    let model_path = config.out_dir.join("model.json");
    save_model_artifact(&model_path, &ModelArtifact::new(model, recipe))?;
    println!("model artifact: {}", model_path.display());
    let importances_path = config.out_dir.join("importances.json");
    fs::write(&importances_path, json_string(&ranking)?)?;
    println!("feature importances: {}", importances_path.display());
    for feature in ranking.iter().take(5) {
        println!(
            "  #{} {} {:.4}",
            feature.rank, feature.name, feature.importance
        );
    }
    Ok(())
}

/// Features ranked by descending importance (ties break to the earlier
/// column), 1-based ranks.
fn ranked_importances(model: &TrainedEnsemble) -> Vec<RankedFeature> {
    let importances = model.feature_importances();
    let mut order: Vec<usize> = (0..importances.len()).collect();
    order.sort_by(|&a, &b| {
        importances[b]
            .partial_cmp(&importances[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
        .iter()
        .enumerate()
        .map(|(rank, &i)| RankedFeature {
            rank: rank + 1,
            name: model.feature_names()[i].clone(),
            importance: importances[i],
        })
        .collect()
}

// ---------------------------------------------------------------------------
// evaluate

fn cmd_evaluate(args: EvaluateArgs, config: &mut RunConfig) -> Result<()> {
    args.table.merge_into(&mut config.data);
    args.model.merge_into(&mut config.model);
    if let Some(v) = args.protocol {
        config.evaluation.protocol = v;
    }
    if let Some(v) = args.k {
        config.evaluation.k = v;
    }
    if let Some(v) = args.subject {
        config.evaluation.subject = Some(v);
    }
    if args.rebalance {
        config.engineering.rebalance = true;
    }
    let protocol = config.evaluation.protocol.trim().to_ascii_lowercase();
    if protocol != "kfold" && protocol != "loso" {
        return Err(Error::Usage(format!(
            "unknown protocol '{protocol}' (expected 'kfold' or 'loso')"
        )));
    }
    let hyper = config.model.hyperparams(config.stage_seed("evaluate"))?;
    config.write_echo()?;

    let mut table = load_table(&config.data)?;
    if config.engineering.rebalance {
        let before = table.n_rows();
        table = rebalance(&table, config.stage_seed("rebalance"))?;
        println!("rebalanced: {before} rows -> {}", table.n_rows());
    }
    let report = match protocol.as_str() {
        "kfold" => match &config.evaluation.subject {
            Some(subject) => kfold_person_specific(&table, subject, config.evaluation.k, &hyper)?,
            None => kfold_person_specific_all(&table, config.evaluation.k, &hyper)?,
        },
        _ => loso_generic(&table, &hyper)?,
    };

    let json_path = config.out_dir.join(format!("evaluation_{protocol}.json"));
    let csv_path = config.out_dir.join(format!("evaluation_{protocol}.csv"));
    write_report(&json_path, ReportFormat::Json, &report)?;
    write_report(&csv_path, ReportFormat::Csv, &report)?;
    println!("{}", report.summary());
    println!("report: {} (+ csv)", json_path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// calibrate

fn cmd_calibrate(args: CalibrateArgs, config: &mut RunConfig) -> Result<()> {
    args.table.merge_into(&mut config.data);
    args.model.merge_into(&mut config.model);
    if let Some(v) = args.q {
        config.calibration.q = v;
    }
    if let Some(list) = args.sizes {
        config.calibration.sizes = parse_sizes(&list)?;
    }
    if let Some(v) = args.calibration_fraction {
        config.calibration.calibration_fraction = v;
    }
    let seed = config.stage_seed("calibrate");
    let sweep_config = config.calibration.config(seed);
    let hyper = config.model.hyperparams(seed)?;
    config.write_echo()?;

    let table = load_table(&config.data)?;
    let curve = calibration_sweep(&table, &sweep_config, &hyper)?;

    let json_path = config.out_dir.join("calibration_curve.json");
    let csv_path = config.out_dir.join("calibration_curve.csv");
    write_report(&json_path, ReportFormat::Json, &curve)?;
    write_report(&csv_path, ReportFormat::Csv, &curve)?;
    println!("{}", curve.summary());
    println!("report: {} (+ csv)", json_path.display());
    Ok(())
}

fn parse_sizes(list: &str) -> Result<Vec<usize>> {
    let sizes: Vec<usize> = list
        .split(',')
        .map(|token| {
            token.trim().parse::<usize>().map_err(|_| {
                Error::Usage(format!(
                    "invalid calibration size '{}' in --sizes",
                    token.trim()
                ))
            })
        })
        .collect::<Result<_>>()?;
    if sizes.is_empty() {
        return Err(Error::Usage("--sizes lists no values".into()));
    }
    Ok(sizes)
}

// ---------------------------------------------------------------------------
// rank-features

fn cmd_rank_features(args: RankFeaturesArgs, config: &mut RunConfig) -> Result<()> {
    args.table.merge_into(&mut config.data);
    args.model.merge_into(&mut config.model);
    let hyper = config
        .model
        .hyperparams(config.stage_seed("rank_features"))?;
    config.write_echo()?;

    let table = load_table(&config.data)?;
    let report = subject_id_probe(&table, &hyper)?;

    let json_path = config.out_dir.join("feature_ranking.json");
    let csv_path = config.out_dir.join("feature_ranking.csv");
    write_report(&json_path, ReportFormat::Json, &report)?;
    write_report(&csv_path, ReportFormat::Csv, &report)?;
    println!("{}", report.summary());
    println!("report: {} (+ csv)", json_path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// report

enum LoadedReport {
    Evaluation(EvaluationReport),
    Calibration(CalibrationCurve),
    Probe(ProbeReport),
}

fn load_report(path: &Path) -> Result<LoadedReport> {
    require_file(path)?;
    let raw = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&raw)?;
    let protocol = value
        .get("protocol")
        .and_then(serde_json::Value::as_str)
        .ok_or_else(|| {
            Error::Schema(format!(
                "{}: report has no 'protocol' field",
                path.display()
            ))
        })?;
    match protocol {
        "calibration_sweep" => Ok(LoadedReport::Calibration(serde_json::from_value(value)?)),
        "subject_id_probe" => Ok(LoadedReport::Probe(serde_json::from_value(value)?)),
        "loso" | "person_specific_kfold" | "person_specific_kfold_mean" => {
            Ok(LoadedReport::Evaluation(serde_json::from_value(value)?))
        }
        other => Err(Error::Schema(format!(
            "{}: unknown report protocol '{other}'",
            path.display()
        ))),
    }
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let format: ReportFormat = args.format.parse()?;
    let loaded = load_report(&args.input)?;
    match &loaded {
        LoadedReport::Evaluation(report) => println!("{}", report.summary()),
        LoadedReport::Calibration(curve) => println!("{}", curve.summary()),
        LoadedReport::Probe(report) => println!("{}", report.summary()),
    }
    if let Some(out) = args.out {
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        match &loaded {
            LoadedReport::Evaluation(report) => write_report(&out, format, report)?,
            LoadedReport::Calibration(curve) => write_report(&out, format, curve)?,
            LoadedReport::Probe(report) => write_report(&out, format, report)?,
        }
        println!("re-rendered: {}", out.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// shared helpers

/// Fail early with a message that names the missing path; the plain
/// `io::Error` from a later open would not.
fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{}: no such file", path.display()),
        )))
    }
}

fn load_table(data: &DataSection) -> Result<FeatureTable> {
    let features = data.features_path()?.to_path_buf();
    require_file(&features)?;
    let schema_path = data.schema_path()?;
    require_file(&schema_path)?;
    let schema = TableSchema::from_file(&schema_path)?;
    load_feature_table(&features, &schema)
}
