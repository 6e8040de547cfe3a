//! Command-line front end.
//!
//! Subcommands: `train`, `score`, `eval`, `grid`, `boundary`, `synth`.
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 solver failure.
//! Every output file is written atomically (temp file + rename) and all
//! randomness flows through `--seed`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    anomaly_scores, roc_auc, run_trials, AnalysisError, GridSpec,
};
use crate::data::{load_csv, synth_gaussian_2d, DataError, Dataset, LabelColumn, Preprocessing};
use crate::kernel::{width_heuristic, KernelKind, KernelSpec};
use crate::model::{
    fit_with_preprocessing, LpSvddModel, ModelError, PreprocessingMode,
};
use crate::solver::SolverConfig;

#[derive(Parser)]
#[command(
    name = "lp-svdd",
    version,
    about = "One-class classification with lp slack-norm support vector data description"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a description and write a model file.
    Train(TrainArgs),
    /// Score a CSV against a trained model.
    Score(ScoreArgs),
    /// Evaluate a trained model on labeled data (AUC + ROC curve).
    Eval(EvalArgs),
    /// Run the seeded multi-trial grid-search experiment.
    Grid(GridArgs),
    /// Export a 2-D decision-boundary grid for contour plotting.
    Boundary(BoundaryArgs),
    /// Generate a 2-D Gaussian synthetic dataset.
    Synth(SynthArgs),
}

fn parse_p(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if v >= 1.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("p must be a finite number >= 1".to_string())
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("value must be positive".to_string())
    }
}

#[derive(Debug, Clone, Copy)]
enum WidthArg {
    Auto,
    Value(f64),
}

fn parse_width(s: &str) -> Result<WidthArg, String> {
    if s == "auto" {
        return Ok(WidthArg::Auto);
    }
    parse_positive(s).map(WidthArg::Value)
}

fn parse_ratios(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("ratios must be three comma-separated numbers".to_string());
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(parts.iter()) {
        *slot = parse_positive(part)?;
    }
    Ok(out)
}

#[derive(Args)]
struct TrainArgs {
    /// Training CSV (header row, one ±1 label column).
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_parser = parse_p, default_value = "2")]
    p: f64,
    #[arg(long, value_parser = parse_positive, default_value = "1")]
    c1: f64,
    #[arg(long, value_parser = parse_positive, default_value = "1")]
    c2: f64,
    #[arg(long, default_value = "gaussian")]
    kernel: KernelKind,
    /// Gaussian width: "auto" (half mean pairwise distance) or a number.
    #[arg(long, value_parser = parse_width, default_value = "auto")]
    width: WidthArg,
    /// Keep −1-labeled rows in training; otherwise they are dropped.
    #[arg(long)]
    use_negatives: bool,
    /// Train on raw features instead of standardize + unit-normalize.
    #[arg(long)]
    raw_features: bool,
    /// Reserved for interface symmetry; training itself is deterministic.
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Output model file (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    margin: f64,
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Output CSV: index,score,score_minus_r2,prediction.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Output CSV of the ROC curve: threshold,tpr,fpr.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "10")]
    trials: usize,
    #[arg(long, default_value = "0")]
    seed: u64,
    /// Include −1-labeled rows of each train split in training.
    #[arg(long)]
    use_negatives: bool,
    #[arg(long, default_value = "gaussian")]
    kernel: KernelKind,
    /// Train/validation/test ratios.
    #[arg(long, value_parser = parse_ratios, default_value = "0.4,0.3,0.3")]
    ratios: [f64; 3],
    /// Worker threads for grid cells (0 = all cores).
    #[arg(long, default_value = "0")]
    jobs: usize,
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Output CSV: trial,seed,p,c1,c2,test_auc.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    xmax: f64,
    #[arg(long, allow_hyphen_values = true)]
    ymin: f64,
    #[arg(long, allow_hyphen_values = true)]
    ymax: f64,
    #[arg(long, default_value = "100")]
    resolution: usize,
    /// Output CSV: x,y,score_minus_r2 in row-major order (y outer, x inner).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value = "100")]
    n: usize,
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    mean: f64,
    #[arg(long, value_parser = parse_positive, default_value = "3")]
    std: f64,
    #[arg(long, default_value = "0")]
    seed: u64,
    /// Output CSV: x,y,label with all labels +1.
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Data(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Solver(inner) => Failure::Solver(inner.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Model(ModelError::Solver(inner)) => Failure::Solver(inner.to_string()),
            AnalysisError::AllCellsFailed(detail) => {
                Failure::Solver(format!("every grid cell failed; last error: {detail}"))
            }
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

/// Run the CLI on explicit arguments (the first is the program name) and
/// return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Score(args) => cmd_score(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Grid(args) => cmd_grid(args),
        Command::Boundary(args) => cmd_boundary(args),
        Command::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.code()
        }
    }
}

/// Entry point for the binary.
pub fn run_from_env() -> i32 {
    run(std::env::args_os())
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| Failure::Data(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

fn load_labeled(path: &Path, label_column: &str) -> Result<Dataset, Failure> {
    Ok(load_csv(path, &LabelColumn::Name(label_column.to_string()))?)
}

fn cmd_train(args: TrainArgs) -> Result<(), Failure> {
    let full = load_labeled(&args.data, &args.label_column)?;
    let train = if args.use_negatives {
        full
    } else {
        full.positives()
    };
    if train.n() == 0 || train.n_positives() == 0 {
        return Err(Failure::Data(
            "training set has no positive samples".to_string(),
        ));
    }
    let mode = if args.raw_features {
        PreprocessingMode::Raw
    } else {
        PreprocessingMode::Standardize
    };
    let spec = resolve_kernel(&train, args.kernel, args.width, mode)?;
    let config = SolverConfig::default();
    let (model, report) =
        fit_with_preprocessing(&train, args.p, args.c1, args.c2, spec, &config, mode)?;
    if !report.dual.converged {
        return Err(Failure::Solver(format!(
            "solver did not converge within {} iterations (kkt residual {:.3e})",
            report.dual.iterations, report.dual.kkt_residual
        )));
    }
    model.save(&args.out)?;
    let width = match spec {
        KernelSpec::Gaussian { width } => format!("{width}"),
        KernelSpec::Linear => "n/a".to_string(),
    };
    println!(
        "trained: r_squared={} support_count={} duality_gap={:.6e} iterations={} width={}",
        model.squared_radius,
        model.support_count(),
        report.duality_gap,
        report.dual.iterations,
        width
    );
    Ok(())
}

fn resolve_kernel(
    train: &Dataset,
    kind: KernelKind,
    width: WidthArg,
    mode: PreprocessingMode,
) -> Result<KernelSpec, Failure> {
    match (kind, width) {
        (KernelKind::Linear, _) => Ok(KernelSpec::Linear),
        (KernelKind::Gaussian, WidthArg::Value(w)) => {
            KernelSpec::gaussian(w).map_err(|e| Failure::Usage(e.to_string()))
        }
        (KernelKind::Gaussian, WidthArg::Auto) => {
            let features = match mode {
                PreprocessingMode::Raw => train.features().to_owned(),
                PreprocessingMode::Standardize => {
                    let params = crate::data::fit_standardizer(&train.positives())?;
                    Preprocessing::Standardize(params).apply(train.features())?
                }
            };
            let w = width_heuristic(features.view()).map_err(|e| Failure::Data(e.to_string()))?;
            Ok(KernelSpec::gaussian(w).expect("heuristic width is positive"))
        }
    }
}

fn cmd_score(args: ScoreArgs) -> Result<(), Failure> {
    let model = LpSvddModel::load(&args.model)?;
    let data = load_labeled(&args.data, &args.label_column)?;
    let mut out = String::from("index,score,score_minus_r2,prediction\n");
    for (i, row) in data.features().outer_iter().enumerate() {
        let score = model.score(row)?;
        let prediction = if score <= model.squared_radius + args.margin {
            1
        } else {
            -1
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            i,
            score,
            score - model.squared_radius,
            prediction
        ));
    }
    write_atomic(&args.out, &out)
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    let model = LpSvddModel::load(&args.model)?;
    let data = load_labeled(&args.data, &args.label_column)?;
    let scores = anomaly_scores(&model, &data)?;
    let roc = roc_auc(&scores, data.labels())?;
    let mut out = String::from("threshold,tpr,fpr\n");
    for (k, threshold) in roc.thresholds.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", threshold, roc.tpr[k + 1], roc.fpr[k + 1]));
    }
    write_atomic(&args.out, &out)?;
    println!("auc = {:.6}", roc.auc);
    Ok(())
}

fn cmd_grid(args: GridArgs) -> Result<(), Failure> {
    let data = load_labeled(&args.data, &args.label_column)?;
    let grid = GridSpec::default();
    let config = SolverConfig::default();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| Failure::Data(e.to_string()))?;
    let report = pool.install(|| {
        run_trials(
            &data,
            args.trials,
            args.ratios,
            &grid,
            args.kernel,
            &config,
            args.seed,
            args.use_negatives,
        )
    })?;
    let mut out = Vec::new();
    crate::analysis::write_trials_csv(&report, &mut out)?;
    write_atomic(&args.out, &String::from_utf8(out).expect("csv is utf-8"))?;
    println!("test_auc = {:.6} ± {:.6}", report.mean_auc, report.std_auc);
    Ok(())
}

fn cmd_boundary(args: BoundaryArgs) -> Result<(), Failure> {
    if args.resolution == 0 {
        return Err(Failure::Usage("resolution must be at least 1".to_string()));
    }
    if args.resolution > 1 && (args.xmax <= args.xmin || args.ymax <= args.ymin) {
        return Err(Failure::Usage(
            "xmax/ymax must exceed xmin/ymin".to_string(),
        ));
    }
    let model = LpSvddModel::load(&args.model)?;
    if model.dim() != 2 {
        return Err(Failure::Data(format!(
            "boundary export needs a 2-D model, this one has {} features",
            model.dim()
        )));
    }
    let coord = |min: f64, max: f64, k: usize| {
        if args.resolution == 1 {
            min
        } else {
            min + (max - min) * k as f64 / (args.resolution - 1) as f64
        }
    };
    let mut out = String::from("x,y,score_minus_r2\n");
    for yi in 0..args.resolution {
        let y = coord(args.ymin, args.ymax, yi);
        for xi in 0..args.resolution {
            let x = coord(args.xmin, args.xmax, xi);
            let score = model.score(ndarray::array![x, y].view())?;
            out.push_str(&format!("{},{},{}\n", x, y, score - model.squared_radius));
        }
    }
    write_atomic(&args.out, &out)
}

fn cmd_synth(args: SynthArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::Usage("n must be at least 1".to_string()));
    }
    let data = synth_gaussian_2d(args.n, args.mean, args.std, args.seed)?;
    let mut out = String::from("x,y,label\n");
    for row in data.features().outer_iter() {
        out.push_str(&format!("{},{},1\n", row[0], row[1]));
    }
    write_atomic(&args.out, &out)
}
