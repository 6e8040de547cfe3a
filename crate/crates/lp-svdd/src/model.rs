//! Training, slack/radius recovery, scoring, and model persistence.
//!
//! A fitted description keeps the support points (in preprocessed
//! coordinates), their signed weights α_i·y_i, the squared radius recovered
//! from the complementarity conditions, and everything needed to score raw
//! inputs: kernel spec plus preprocessing parameters.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{fit_standardizer, DataError, Dataset, Preprocessing, StandardizationParams};
use crate::kernel::{kernel_eval, kernel_matrix, KernelError, KernelSpec};
use crate::solver::{
    dual_objective, p1_solve, solve, DualProblem, DualSolution, SolverConfig, SolverError,
};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("training set has no positive samples")]
    NoPositiveSamples,
    #[error("no multiplier exceeds the support threshold")]
    NoSupportVectors,
    #[error("dimension mismatch: model expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Format(String),
    #[error("unsupported model format version {0} (expected {MODEL_FORMAT_VERSION})")]
    UnsupportedVersion(u64),
}

/// Whether [`fit_with_preprocessing`] standardizes features or trains on raw
/// coordinates (useful for 2-D boundary studies).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreprocessingMode {
    Standardize,
    Raw,
}

/// Solver diagnostics carried by the model so they survive in the model file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
    pub dual_objective: f64,
    pub duality_gap: f64,
    /// Max spread of the per-support-vector radius estimates.
    pub radius_spread: f64,
}

/// A trained data description.
#[derive(Debug, Clone)]
pub struct LpSvddModel {
    /// Training points with α above threshold, preprocessed coordinates.
    pub support_points: Array2<f64>,
    /// α_i·y_i for each support point.
    pub weights: Array1<f64>,
    /// May be negative in degenerate fits; the decision rule still works.
    pub squared_radius: f64,
    /// (α⊙y)ᵀK(α⊙y), the squared norm of the description center.
    pub center_norm_sq: f64,
    pub p: f64,
    pub c1: f64,
    pub c2: f64,
    pub kernel: KernelSpec,
    pub preprocessing: Preprocessing,
    pub support_epsilon: f64,
    pub diagnostics: FitDiagnostics,
}

/// Per-fit detail beyond the model itself.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub dual: DualSolution,
    pub slacks: Array1<f64>,
    pub primal_objective: f64,
    pub duality_gap: f64,
    pub radius_spread: f64,
}

/// Train with the standard preprocessing pipeline.
pub fn fit(
    train: &Dataset,
    p: f64,
    c1: f64,
    c2: f64,
    kernel: KernelSpec,
    config: &SolverConfig,
) -> Result<(LpSvddModel, FitReport), ModelError> {
    fit_with_preprocessing(train, p, c1, c2, kernel, config, PreprocessingMode::Standardize)
}

pub fn fit_with_preprocessing(
    train: &Dataset,
    p: f64,
    c1: f64,
    c2: f64,
    kernel: KernelSpec,
    config: &SolverConfig,
    mode: PreprocessingMode,
) -> Result<(LpSvddModel, FitReport), ModelError> {
    if train.n_positives() == 0 {
        return Err(ModelError::NoPositiveSamples);
    }
    let preprocessing = match mode {
        PreprocessingMode::Standardize => {
            Preprocessing::Standardize(fit_standardizer(&train.positives())?)
        }
        PreprocessingMode::Raw => Preprocessing::Raw,
    };
    let features = preprocessing.apply(train.features())?;
    let gram = kernel_matrix(features.view(), &kernel)?;
    let problem = DualProblem::new(gram, train.labels(), p, c1, c2)?;
    let solution = if p > 1.0 {
        solve(&problem, config, None)?
    } else {
        p1_solve(&problem, config)?
    };
    let alpha = solution.alpha_array();
    let y = train.labels_f64();
    let gram = problem.kernel();

    let weighted = &alpha * &y;
    let kw = gram.values().dot(&weighted);
    let center_norm_sq = weighted.dot(&kw);
    // f(x_j) over the training set, reusing the Gram matrix.
    let f_train =
        Array1::from_shape_fn(train.n(), |j| gram.values()[[j, j]] - 2.0 * kw[j] + center_norm_sq);

    let max_alpha = alpha.iter().cloned().fold(0.0, f64::max);
    let support_epsilon = 1e-6 * max_alpha;
    let support: Vec<usize> = (0..train.n())
        .filter(|&i| alpha[i] > support_epsilon)
        .collect();
    if support.is_empty() {
        return Err(ModelError::NoSupportVectors);
    }

    let (slacks, squared_radius, radius_spread) = if p > 1.0 {
        let slacks = recover_slacks(&alpha, &y, p, c1, c2)?;
        let (r2, spread) =
            radius_from_complementarity(&alpha, &slacks, &f_train, &y, support_epsilon)?;
        (slacks, r2, spread)
    } else {
        p1_radius_and_slacks(&alpha, &f_train, &y, c1, c2, &support)
    };

    let mut penalty = 0.0;
    for i in 0..train.n() {
        let c = if y[i] > 0.0 { c1 } else { c2 };
        penalty += c * slacks[i].powf(p);
    }
    let primal_objective = squared_radius + penalty;
    // Dual value in maximization form is the negated minimization objective.
    let duality_gap = primal_objective + solution.objective;

    let support_points = features.select(Axis(0), &support);
    let weights = Array1::from_shape_fn(support.len(), |k| weighted[support[k]]);

    let model = LpSvddModel {
        support_points,
        weights,
        squared_radius,
        center_norm_sq,
        p,
        c1,
        c2,
        kernel,
        preprocessing,
        support_epsilon,
        diagnostics: FitDiagnostics {
            iterations: solution.iterations,
            kkt_residual: solution.kkt_residual,
            converged: solution.converged,
            dual_objective: solution.objective,
            duality_gap,
            radius_spread,
        },
    };
    let report = FitReport {
        dual: solution,
        slacks,
        primal_objective,
        duality_gap,
        radius_spread,
    };
    Ok((model, report))
}

/// Slacks from the stationarity conditions, valid for p > 1:
/// ζ_i = (α_i / (c·p))^(1/(p−1)) with c chosen by label.
pub fn recover_slacks(
    alpha: &Array1<f64>,
    y: &Array1<f64>,
    p: f64,
    c1: f64,
    c2: f64,
) -> Result<Array1<f64>, ModelError> {
    if p <= 1.0 {
        return Err(ModelError::Solver(SolverError::RequiresPGreaterThanOne(p)));
    }
    let exponent = 1.0 / (p - 1.0);
    Ok(Array1::from_shape_fn(alpha.len(), |i| {
        let c = if y[i] > 0.0 { c1 } else { c2 };
        (alpha[i] / (c * p)).powf(exponent)
    }))
}

/// Squared radius from the support-vector complementarity identity
/// R²_j = f(x_j) − y_j·ζ_j, averaged over all multipliers above threshold.
/// Returns (mean, max spread).
pub fn radius_from_complementarity(
    alpha: &Array1<f64>,
    slacks: &Array1<f64>,
    f_train: &Array1<f64>,
    y: &Array1<f64>,
    support_epsilon: f64,
) -> Result<(f64, f64), ModelError> {
    let mut estimates = Vec::new();
    for j in 0..alpha.len() {
        if alpha[j] > support_epsilon {
            estimates.push(f_train[j] - y[j] * slacks[j]);
        }
    }
    if estimates.is_empty() {
        return Err(ModelError::NoSupportVectors);
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let max = estimates.iter().cloned().fold(f64::MIN, f64::max);
    let min = estimates.iter().cloned().fold(f64::MAX, f64::min);
    Ok((mean, max - min))
}

/// p = 1 recovery: the radius comes from support vectors strictly inside the
/// box (their slack is zero), then slacks follow from the primal constraints.
/// With every multiplier at its cap the radius falls back to the mean over
/// all support vectors.
fn p1_radius_and_slacks(
    alpha: &Array1<f64>,
    f_train: &Array1<f64>,
    y: &Array1<f64>,
    c1: f64,
    c2: f64,
    support: &[usize],
) -> (Array1<f64>, f64, f64) {
    let cap = |i: usize| if y[i] > 0.0 { c1 } else { c2 };
    let free: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&i| alpha[i] < cap(i) * (1.0 - 1e-6))
        .collect();
    let basis = if free.is_empty() { support } else { &free[..] };
    let values: Vec<f64> = basis.iter().map(|&j| f_train[j]).collect();
    let r2 = values.iter().sum::<f64>() / values.len() as f64;
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let slacks = Array1::from_shape_fn(alpha.len(), |i| {
        if y[i] > 0.0 {
            (f_train[i] - r2).max(0.0)
        } else {
            (r2 - f_train[i]).max(0.0)
        }
    });
    (slacks, r2, max - min)
}

impl LpSvddModel {
    pub fn dim(&self) -> usize {
        self.support_points.ncols()
    }

    pub fn support_count(&self) -> usize {
        self.support_points.nrows()
    }

    /// Distance of a raw input to the description center in feature space:
    /// f(z) = κ(z,z) − 2·Σ_i w_i·κ(z, s_i) + ‖center‖². Higher is more
    /// anomalous. The stored preprocessing is applied exactly once, here.
    pub fn score(&self, z: ArrayView1<'_, f64>) -> Result<f64, ModelError> {
        if let Some(expected) = self.preprocessing.dim() {
            if z.len() != expected {
                return Err(ModelError::DimensionMismatch {
                    expected,
                    got: z.len(),
                });
            }
        }
        let z = self.preprocessing.apply_row(z)?;
        if z.len() != self.dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        let kzz = kernel_eval(z.view(), z.view(), &self.kernel)?;
        let mut cross = 0.0;
        for (i, s) in self.support_points.outer_iter().enumerate() {
            cross += self.weights[i] * kernel_eval(z.view(), s, &self.kernel)?;
        }
        Ok(kzz - 2.0 * cross + self.center_norm_sq)
    }

    pub fn scores(&self, data: &Dataset) -> Result<Vec<f64>, ModelError> {
        data.features()
            .outer_iter()
            .map(|row| self.score(row))
            .collect()
    }

    /// +1 (target) when f(z) ≤ R² + margin, −1 (novel) otherwise. The
    /// boundary itself counts as target.
    pub fn predict(&self, z: ArrayView1<'_, f64>, margin: f64) -> Result<i8, ModelError> {
        let score = self.score(z)?;
        Ok(if score <= self.squared_radius + margin {
            1
        } else {
            -1
        })
    }

    /// Write the model as versioned JSON, atomically (temp file + rename).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let path = path.as_ref();
        let file = ModelFile::from(self);
        let payload = serde_json::to_string_pretty(&file)
            .map_err(|e| ModelError::Format(e.to_string()))?;
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))
            .map_err(|e| io_error(path, e))?;
        use std::io::Write;
        tmp.write_all(payload.as_bytes())
            .and_then(|_| tmp.write_all(b"\n"))
            .map_err(|e| io_error(path, e))?;
        tmp.persist(path).map_err(|e| io_error(path, e.error))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| ModelError::Format(e.to_string()))?;
        let version = value
            .get("format_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| ModelError::Format("missing field `format_version`".to_string()))?;
        if version != u64::from(MODEL_FORMAT_VERSION) {
            return Err(ModelError::UnsupportedVersion(version));
        }
        let file: ModelFile =
            serde_json::from_value(value).map_err(|e| ModelError::Format(e.to_string()))?;
        file.try_into()
    }
}

fn io_error(path: &Path, source: std::io::Error) -> ModelError {
    ModelError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum PreprocessingFile {
    Raw,
    Standardize { mean: Vec<f64>, std: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    kernel: KernelSpec,
    preprocessing: PreprocessingFile,
    p: f64,
    c1: f64,
    c2: f64,
    support_points: Vec<Vec<f64>>,
    weights: Vec<f64>,
    squared_radius: f64,
    center_norm_sq: f64,
    support_epsilon: f64,
    diagnostics: FitDiagnostics,
}

impl From<&LpSvddModel> for ModelFile {
    fn from(m: &LpSvddModel) -> Self {
        ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            kernel: m.kernel,
            preprocessing: match &m.preprocessing {
                Preprocessing::Raw => PreprocessingFile::Raw,
                Preprocessing::Standardize(p) => PreprocessingFile::Standardize {
                    mean: p.mean.to_vec(),
                    std: p.std.to_vec(),
                },
            },
            p: m.p,
            c1: m.c1,
            c2: m.c2,
            support_points: m
                .support_points
                .outer_iter()
                .map(|row| row.to_vec())
                .collect(),
            weights: m.weights.to_vec(),
            squared_radius: m.squared_radius,
            center_norm_sq: m.center_norm_sq,
            support_epsilon: m.support_epsilon,
            diagnostics: m.diagnostics.clone(),
        }
    }
}

impl TryFrom<ModelFile> for LpSvddModel {
    type Error = ModelError;

    fn try_from(f: ModelFile) -> Result<Self, ModelError> {
        let rows = f.support_points.len();
        if rows == 0 {
            return Err(ModelError::Format("no support points".to_string()));
        }
        let dim = f.support_points[0].len();
        if f.support_points.iter().any(|r| r.len() != dim) {
            return Err(ModelError::Format("ragged support points".to_string()));
        }
        if f.weights.len() != rows {
            return Err(ModelError::Format(format!(
                "{} weights for {} support points",
                f.weights.len(),
                rows
            )));
        }
        let flat: Vec<f64> = f.support_points.into_iter().flatten().collect();
        let support_points = Array2::from_shape_vec((rows, dim), flat)
            .map_err(|e| ModelError::Format(e.to_string()))?;
        let preprocessing = match f.preprocessing {
            PreprocessingFile::Raw => Preprocessing::Raw,
            PreprocessingFile::Standardize { mean, std } => {
                if mean.len() != dim || std.len() != dim {
                    return Err(ModelError::Format(
                        "preprocessing dimensions do not match support points".to_string(),
                    ));
                }
                Preprocessing::Standardize(StandardizationParams {
                    mean: Array1::from_vec(mean),
                    std: Array1::from_vec(std),
                })
            }
        };
        Ok(LpSvddModel {
            support_points,
            weights: Array1::from_vec(f.weights),
            squared_radius: f.squared_radius,
            center_norm_sq: f.center_norm_sq,
            p: f.p,
            c1: f.c1,
            c2: f.c2,
            kernel: f.kernel,
            preprocessing,
            support_epsilon: f.support_epsilon,
            diagnostics: f.diagnostics,
        })
    }
}

/// Evaluate the dual objective of a fitted problem; exposed for gap checks.
pub fn dual_objective_of(
    train: &Dataset,
    model: &LpSvddModel,
    alpha: &Array1<f64>,
) -> Result<f64, ModelError> {
    let features = model.preprocessing.apply(train.features())?;
    let gram = kernel_matrix(features.view(), &model.kernel)?;
    let problem = DualProblem::new(gram, train.labels(), model.p, model.c1, model.c2)?;
    Ok(dual_objective(alpha, &problem)?)
}
