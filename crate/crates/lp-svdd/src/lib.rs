//! One-class classification with ℓp slack-norm support vector data
//! description.
//!
//! The description is the smallest hypersphere (in kernel feature space)
//! enclosing the target class, with boundary violations penalised through an
//! ℓp norm (p ≥ 1) on the slack variables instead of the classical linear
//! penalty. The dual of that problem carries sparsity-inducing ℓq-norm terms
//! (q = p/(p−1)) over the multipliers and stays convex for every p ≥ 1, so a
//! single projected-gradient solver covers the whole family; p = 1 falls
//! back to the classical box-constrained dual.
//!
//! Labelled negative samples, when present, refine the description: they are
//! pushed outside the sphere with their own penalty weight.
//!
//! # Modules
//!
//! - [`data`] — CSV ingestion, standardization, stratified splits
//! - [`kernel`] — Gaussian/linear kernels, bandwidth heuristic, Gram matrices
//! - [`solver`] — the convex dual and its projected-gradient solver
//! - [`model`] — fitting, slack/radius recovery, scoring, persistence
//! - [`analysis`] — AUC, grid search, trial protocol, generalization bounds
//! - [`cli`] — the `lp-svdd` command-line front end
//!
//! # Quick start
//!
//! ```
//! use lp_svdd::data::Dataset;
//! use lp_svdd::kernel::KernelSpec;
//! use lp_svdd::model::fit;
//! use lp_svdd::solver::SolverConfig;
//! use ndarray::array;
//!
//! let train = Dataset::new(
//!     array![[0.0, 0.1], [0.2, -0.1], [-0.1, 0.0], [0.1, 0.2]],
//!     vec![1, 1, 1, 1],
//!     None,
//! )?;
//! let kernel = KernelSpec::gaussian(0.8)?;
//! let (model, report) = fit(&train, 2.0, 1.0, 1.0, kernel, &SolverConfig::default())?;
//! assert!(report.dual.converged);
//! let score = model.score(array![5.0, 5.0].view())?;
//! assert!(score > model.squared_radius); // far from the blob: novel
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Runnable walkthroughs live in `examples/`; see the README for the list.

pub mod analysis;
pub mod cli;
pub mod data;
pub mod kernel;
pub mod model;
pub mod solver;

#[cfg(test)]
mod test_support;

pub use analysis::{
    average_rank, error_probability_bound, grid_search, rademacher_bound, roc_auc, run_trials,
    AnalysisError, BoundInputs, GridSpec, RocResult, TrialReport,
};
pub use data::{
    apply_standardizer, fit_standardizer, load_csv, three_way_split, DataError, DataSplits,
    Dataset, Preprocessing, StandardizationParams,
};
pub use kernel::{
    kernel_cross, kernel_eval, kernel_matrix, width_heuristic, KernelError, KernelKind,
    KernelMatrix, KernelSpec,
};
pub use model::{fit, FitReport, LpSvddModel, ModelError};
pub use solver::{
    dual_gradient, dual_objective, kkt_residual, p1_solve, project_feasible, solve, DualProblem,
    DualSolution, SolverConfig, SolverError,
};
