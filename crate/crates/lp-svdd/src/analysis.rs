//! Evaluation and experiment protocol: ROC/AUC, validation-set grid search,
//! seeded multi-trial runs, average ranking, and generalization-bound
//! calculators.

use ndarray::Array2;
use rayon::prelude::*;
use thiserror::Error;

use crate::data::{three_way_split, DataError, Dataset};
use crate::kernel::{width_heuristic, KernelError, KernelKind, KernelSpec};
use crate::model::{fit, FitReport, LpSvddModel, ModelError};
use crate::solver::SolverConfig;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("scores contain only one class; AUC needs both targets and anomalies")]
    SingleClass,
    #[error("scores and labels have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("score at index {0} is not finite")]
    NonFiniteScore(usize),
    #[error("hyperparameter grid is empty")]
    EmptyGrid,
    #[error("ranking table is empty")]
    EmptyTable,
    #[error("{0}")]
    BadArgument(String),
    #[error("every grid cell failed; last error: {0}")]
    AllCellsFailed(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// ROC curve and its area. The curve runs over all distinct score
/// thresholds; `tpr`/`fpr` carry a leading (0, 0) so both sweep 0 → 1.
///
/// Orientation: higher score = more anomalous, and the ROC "positive" is the
/// target class, so a point is called target when its score is ≤ threshold.
#[derive(Debug, Clone)]
pub struct RocResult {
    pub auc: f64,
    pub thresholds: Vec<f64>,
    pub tpr: Vec<f64>,
    pub fpr: Vec<f64>,
}

/// Trapezoidal AUC over the ROC curve; tied scores fall on one curve
/// segment, which gives them exactly half weight (the Mann–Whitney
/// convention).
pub fn roc_auc(scores: &[f64], labels: &[i8]) -> Result<RocResult, AnalysisError> {
    if scores.len() != labels.len() {
        return Err(AnalysisError::LengthMismatch(scores.len(), labels.len()));
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(AnalysisError::NonFiniteScore(i));
    }
    let n_target = labels.iter().filter(|&&l| l == 1).count();
    let n_anomaly = labels.len() - n_target;
    if n_target == 0 || n_anomaly == 0 {
        return Err(AnalysisError::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    let mut thresholds = Vec::new();
    let mut tpr = vec![0.0];
    let mut fpr = vec![0.0];
    let mut auc = 0.0;
    let mut targets_seen = 0usize;
    let mut anomalies_seen = 0usize;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        let mut j = i;
        while j < order.len() && scores[order[j]] == threshold {
            if labels[order[j]] == 1 {
                targets_seen += 1;
            } else {
                anomalies_seen += 1;
            }
            j += 1;
        }
        let t = targets_seen as f64 / n_target as f64;
        let f = anomalies_seen as f64 / n_anomaly as f64;
        let (t_prev, f_prev) = (*tpr.last().unwrap(), *fpr.last().unwrap());
        auc += (f - f_prev) * 0.5 * (t + t_prev);
        thresholds.push(threshold);
        tpr.push(t);
        fpr.push(f);
        i = j;
    }
    Ok(RocResult {
        auc,
        thresholds,
        tpr,
        fpr,
    })
}

/// Hyperparameter grid. Defaults follow the standard protocol:
/// p ∈ {32/31, 16/15, 8/7, 6/5, 4/3, 3/2, 2, 5/2, 5, 20} and
/// c ∈ {10⁻³, 10⁻², 10⁻¹, 1} for both penalty weights.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub p_values: Vec<f64>,
    pub c1_values: Vec<f64>,
    pub c2_values: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        let c = vec![1e-3, 1e-2, 1e-1, 1.0];
        GridSpec {
            p_values: vec![
                32.0 / 31.0,
                16.0 / 15.0,
                8.0 / 7.0,
                6.0 / 5.0,
                4.0 / 3.0,
                3.0 / 2.0,
                2.0,
                5.0 / 2.0,
                5.0,
                20.0,
            ],
            c1_values: c.clone(),
            c2_values: c,
        }
    }
}

impl GridSpec {
    pub fn single(p: f64, c1: f64, c2: f64) -> Self {
        GridSpec {
            p_values: vec![p],
            c1_values: vec![c1],
            c2_values: vec![c2],
        }
    }
}

/// Winning grid cell and its validation AUC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridChoice {
    pub p: f64,
    pub c1: f64,
    pub c2: f64,
    pub validation_auc: f64,
}

/// Fit one model per grid cell on `train`, evaluate AUC on `validation`,
/// return the argmax. Ties break to the smallest p, then c1, then c2.
/// Cells whose fit fails (e.g. an infeasible p = 1 box) are skipped.
pub fn grid_search(
    train: &Dataset,
    validation: &Dataset,
    grid: &GridSpec,
    kernel_kind: KernelKind,
    config: &SolverConfig,
) -> Result<GridChoice, AnalysisError> {
    if grid.p_values.is_empty() || grid.c1_values.is_empty() || grid.c2_values.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    if validation.n_positives() == 0 || validation.n_negatives() == 0 {
        return Err(AnalysisError::SingleClass);
    }
    let spec = kernel_spec_for(train, kernel_kind)?;

    // Without training negatives c2 is inert; evaluating one representative
    // (the tie-break winner) is equivalent to scanning them all.
    let c2_values: Vec<f64> = if train.n_negatives() == 0 {
        vec![grid.c2_values.iter().cloned().fold(f64::INFINITY, f64::min)]
    } else {
        grid.c2_values.clone()
    };

    let mut cells = Vec::new();
    for &p in &grid.p_values {
        for &c1 in &grid.c1_values {
            for &c2 in &c2_values {
                cells.push((p, c1, c2));
            }
        }
    }

    let evaluated: Vec<Result<GridChoice, String>> = cells
        .par_iter()
        .map(|&(p, c1, c2)| {
            let (model, _) =
                fit(train, p, c1, c2, spec, config).map_err(|e| e.to_string())?;
            let scores = anomaly_scores(&model, validation).map_err(|e| e.to_string())?;
            let roc = roc_auc(&scores, validation.labels()).map_err(|e| e.to_string())?;
            Ok(GridChoice {
                p,
                c1,
                c2,
                validation_auc: roc.auc,
            })
        })
        .collect();

    let mut best: Option<GridChoice> = None;
    let mut last_error = String::new();
    for result in evaluated {
        match result {
            Ok(candidate) => {
                let replace = match &best {
                    None => true,
                    Some(b) => {
                        candidate.validation_auc > b.validation_auc
                            || (candidate.validation_auc == b.validation_auc
                                && (candidate.p, candidate.c1, candidate.c2)
                                    < (b.p, b.c1, b.c2))
                    }
                };
                if replace {
                    best = Some(candidate);
                }
            }
            Err(e) => last_error = e,
        }
    }
    best.ok_or(AnalysisError::AllCellsFailed(last_error))
}

/// Anomaly scores relative to the description boundary: f(z) − R².
pub fn anomaly_scores(model: &LpSvddModel, data: &Dataset) -> Result<Vec<f64>, ModelError> {
    Ok(model
        .scores(data)?
        .into_iter()
        .map(|s| s - model.squared_radius)
        .collect())
}

fn kernel_spec_for(train: &Dataset, kind: KernelKind) -> Result<KernelSpec, AnalysisError> {
    match kind {
        KernelKind::Linear => Ok(KernelSpec::Linear),
        KernelKind::Gaussian => {
            // The heuristic runs on the same preprocessed coordinates the
            // Gram matrix will use.
            let params = crate::data::fit_standardizer(&train.positives())?;
            let features =
                crate::data::Preprocessing::Standardize(params).apply(train.features())?;
            Ok(KernelSpec::gaussian(width_heuristic(features.view())?)?)
        }
    }
}

/// Aggregate of a seeded multi-trial experiment.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub per_trial_auc: Vec<f64>,
    pub mean_auc: f64,
    /// Population standard deviation over trials.
    pub std_auc: f64,
    pub chosen_params: Vec<(f64, f64, f64)>,
    pub seeds: Vec<u64>,
}

/// Repeat split → tune on validation → refit → test-AUC, `trials` times with
/// seeds `base_seed + 1 ..= base_seed + trials`. With `use_negatives` false
/// the model trains on the positive part of the train split only.
#[allow(clippy::too_many_arguments)]
pub fn run_trials(
    data: &Dataset,
    trials: usize,
    ratios: [f64; 3],
    grid: &GridSpec,
    kernel_kind: KernelKind,
    config: &SolverConfig,
    base_seed: u64,
    use_negatives: bool,
) -> Result<TrialReport, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::BadArgument(
            "trials must be at least 1".to_string(),
        ));
    }
    let mut per_trial_auc = Vec::with_capacity(trials);
    let mut chosen_params = Vec::with_capacity(trials);
    let mut seeds = Vec::with_capacity(trials);
    for t in 1..=trials {
        let seed = base_seed + t as u64;
        let splits = three_way_split(data, ratios, seed)?;
        let train = if use_negatives {
            splits.train
        } else {
            splits.train.positives()
        };
        let choice = grid_search(&train, &splits.validation, grid, kernel_kind, config)?;
        let spec = kernel_spec_for(&train, kernel_kind)?;
        let (model, _) = fit(&train, choice.p, choice.c1, choice.c2, spec, config)?;
        let scores = anomaly_scores(&model, &splits.test)?;
        let roc = roc_auc(&scores, splits.test.labels())?;
        per_trial_auc.push(roc.auc);
        chosen_params.push((choice.p, choice.c1, choice.c2));
        seeds.push(seed);
    }
    let mean_auc = per_trial_auc.iter().sum::<f64>() / trials as f64;
    let var = per_trial_auc
        .iter()
        .map(|a| (a - mean_auc).powi(2))
        .sum::<f64>()
        / trials as f64;
    Ok(TrialReport {
        per_trial_auc,
        mean_auc,
        std_auc: var.sqrt(),
        chosen_params,
        seeds,
    })
}

/// Per-method mean rank over datasets. `auc_table` is methods × datasets;
/// within each dataset the best AUC ranks 1 and ties share the average of
/// the ranks they occupy.
pub fn average_rank(auc_table: &Array2<f64>) -> Result<Vec<f64>, AnalysisError> {
    let (methods, datasets) = auc_table.dim();
    if methods == 0 || datasets == 0 {
        return Err(AnalysisError::EmptyTable);
    }
    let mut totals = vec![0.0; methods];
    for d in 0..datasets {
        let column: Vec<f64> = (0..methods).map(|m| auc_table[[m, d]]).collect();
        let mut order: Vec<usize> = (0..methods).collect();
        order.sort_by(|&a, &b| column[b].partial_cmp(&column[a]).expect("finite AUCs"));
        let mut i = 0;
        while i < methods {
            let mut j = i;
            while j < methods && column[order[j]] == column[order[i]] {
                j += 1;
            }
            let shared = (i + 1 + j) as f64 / 2.0;
            for k in i..j {
                totals[order[k]] += shared;
            }
            i = j;
        }
    }
    Ok(totals.into_iter().map(|t| t / datasets as f64).collect())
}

/// Inputs to the error-probability bound calculator.
#[derive(Debug, Clone, Copy)]
pub struct BoundInputs {
    pub n: usize,
    pub p: f64,
    /// Margin parameter υ > 0.
    pub upsilon: f64,
    /// Confidence parameter Δ ∈ (0, 1).
    pub delta: f64,
    /// Bound on the weight norm ‖w‖₂.
    pub b: f64,
    /// √ of the kernel-value bound.
    pub b_kappa: f64,
    pub r_sq: f64,
    /// ‖ζ‖ₚᵖ of the training slacks.
    pub zeta_p_norm_p: f64,
    pub trace_k: Option<f64>,
}

impl BoundInputs {
    fn validate(&self) -> Result<(), AnalysisError> {
        if self.n == 0 {
            return Err(AnalysisError::BadArgument("n must be >= 1".to_string()));
        }
        if !(self.upsilon > 0.0) {
            return Err(AnalysisError::BadArgument(
                "margin upsilon must be positive".to_string(),
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(AnalysisError::BadArgument(
                "delta must lie in (0, 1)".to_string(),
            ));
        }
        if !(self.p >= 1.0) {
            return Err(AnalysisError::BadArgument("p must be >= 1".to_string()));
        }
        if self.b < 0.0 || !(self.b_kappa > 0.0) || self.zeta_p_norm_p < 0.0 {
            return Err(AnalysisError::BadArgument(
                "b, b_kappa, and the slack norm must be nonnegative".to_string(),
            ));
        }
        Ok(())
    }
}

/// Rademacher-complexity bounds for the kernel-linear class:
/// (2B/n)·√tr(K) and the data-independent 2B·B_κ/√n.
pub fn rademacher_bound(
    b: f64,
    n: usize,
    trace_k: f64,
    b_kappa: f64,
) -> Result<(f64, f64), AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::BadArgument("n must be >= 1".to_string()));
    }
    if b < 0.0 || trace_k < 0.0 || b_kappa < 0.0 {
        return Err(AnalysisError::BadArgument(
            "bound inputs must be nonnegative".to_string(),
        ));
    }
    let bound_trace = 2.0 * b / n as f64 * trace_k.sqrt();
    let bound_uniform = 2.0 * b * b_kappa / (n as f64).sqrt();
    Ok((bound_trace, bound_uniform))
}

/// Misclassification-probability bound
/// (1/(n·υᵖ))·‖ζ‖ₚᵖ + (4pBB_κ/(υᵖ√n))·(B² + 3B_κ² + R²)^(p−1)
///   + 3√(ln(2/Δ)/(2n)).
/// The value is reported as-is; it may exceed 1.
pub fn error_probability_bound(inputs: &BoundInputs) -> Result<f64, AnalysisError> {
    inputs.validate()?;
    let n = inputs.n as f64;
    let up = inputs.upsilon.powf(inputs.p);
    let term1 = inputs.zeta_p_norm_p / (n * up);
    let base = inputs.b * inputs.b + 3.0 * inputs.b_kappa * inputs.b_kappa + inputs.r_sq;
    let term2 =
        4.0 * inputs.p * inputs.b * inputs.b_kappa / (up * n.sqrt()) * base.powf(inputs.p - 1.0);
    let term3 = 3.0 * ((2.0 / inputs.delta).ln() / (2.0 * n)).sqrt();
    Ok(term1 + term2 + term3)
}

/// Assemble bound inputs from a fitted Gaussian-kernel model: B is the
/// center norm, B_κ = 1, and the slack norm comes from the fit report.
pub fn bound_inputs_from_fit(
    model: &LpSvddModel,
    report: &FitReport,
    upsilon: f64,
    delta: f64,
) -> BoundInputs {
    let n = report.slacks.len();
    let zeta_p_norm_p = report.slacks.iter().map(|z| z.powf(model.p)).sum();
    BoundInputs {
        n,
        p: model.p,
        upsilon,
        delta,
        b: model.center_norm_sq.sqrt(),
        b_kappa: 1.0,
        r_sq: model.squared_radius,
        zeta_p_norm_p,
        trace_k: Some(n as f64),
    }
}

/// One row per trial: trial, seed, p, c1, c2, test_auc.
pub fn write_trials_csv(
    report: &TrialReport,
    out: &mut impl std::io::Write,
) -> std::io::Result<()> {
    writeln!(out, "trial,seed,p,c1,c2,test_auc")?;
    for (i, auc) in report.per_trial_auc.iter().enumerate() {
        let (p, c1, c2) = report.chosen_params[i];
        writeln!(
            out,
            "{},{},{},{},{},{}",
            i + 1,
            report.seeds[i],
            p,
            c1,
            c2,
            auc
        )?;
    }
    Ok(())
}

/// One row per method: method, average_rank.
pub fn write_rank_csv(
    method_names: &[&str],
    ranks: &[f64],
    out: &mut impl std::io::Write,
) -> std::io::Result<()> {
    writeln!(out, "method,average_rank")?;
    for (name, rank) in method_names.iter().zip(ranks.iter()) {
        writeln!(out, "{name},{rank}")?;
    }
    Ok(())
}
