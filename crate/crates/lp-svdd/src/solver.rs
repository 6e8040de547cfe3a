//! Convex dual solver for hyperspherical data descriptions.
//!
//! For p > 1 the dual is
//!
//! ```text
//! min  C1·Σ_{y_i=+1} α_i^q + C2·Σ_{y_l=-1} α_l^q − Σ_i α_i y_i κ(x_i,x_i)
//!      + (α⊙y)ᵀ K (α⊙y)
//! s.t. α ≥ 0,  yᵀα = 1
//! ```
//!
//! with q = p/(p−1) and C = (c·p)^(−1/(p−1))·(1 − 1/p) per class. At p = 1
//! the dual-norm terms vanish and the classical box-constrained problem
//! (0 ≤ α_i ≤ c per class, same hyperplane) is solved instead.
//!
//! Both paths run projected gradient descent with Armijo backtracking. The
//! feasible-set projection solves α = clamp(v − λy, 0, cap) with λ found by
//! bisection on the nonincreasing map λ ↦ yᵀα(λ), then sharpened by an exact
//! solve for λ on the free set.

use ndarray::{Array1, ArrayView1};
use thiserror::Error;

use crate::kernel::KernelMatrix;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("operation requires p > 1, got {0}")]
    RequiresPGreaterThanOne(f64),
    #[error("operation requires p = 1, got {0}")]
    RequiresPOne(f64),
    #[error("p must be >= 1, got {0}")]
    BadP(f64),
    #[error("penalty weights must be positive, got c1={0}, c2={1}")]
    BadPenalty(f64, f64),
    #[error("dual coefficients overflow for p={p}, c={c}; choose a larger c or p")]
    CoefficientOverflow { p: f64, c: f64 },
    #[error("alpha has a negative entry at index {0}")]
    NegativeAlpha(usize),
    #[error("problem needs at least one positive label")]
    NoPositiveLabels,
    #[error("labels must be +1 or -1")]
    BadLabels,
    #[error("label vector length {0} does not match kernel size {1}")]
    LengthMismatch(usize, usize),
    #[error("p = 1 box is infeasible: c1 * n_positives = {0} < 1")]
    InfeasibleBox(f64),
}

/// Precomputed dual-norm data, present only for p > 1.
#[derive(Debug, Clone, Copy)]
struct NormCoefficients {
    q: f64,
    pos: f64,
    neg: f64,
}

/// The convex dual program: kernel matrix, ±1 labels, and hyperparameters.
#[derive(Debug, Clone)]
pub struct DualProblem {
    kernel: KernelMatrix,
    y: Array1<f64>,
    diag: Array1<f64>,
    p: f64,
    c1: f64,
    c2: f64,
    norm: Option<NormCoefficients>,
}

impl DualProblem {
    pub fn new(
        kernel: KernelMatrix,
        labels: &[i8],
        p: f64,
        c1: f64,
        c2: f64,
    ) -> Result<Self, SolverError> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(SolverError::BadP(p));
        }
        if !(c1 > 0.0) || !(c2 > 0.0) {
            return Err(SolverError::BadPenalty(c1, c2));
        }
        if labels.len() != kernel.n() {
            return Err(SolverError::LengthMismatch(labels.len(), kernel.n()));
        }
        if labels.iter().any(|&l| l != 1 && l != -1) {
            return Err(SolverError::BadLabels);
        }
        let n_pos = labels.iter().filter(|&&l| l == 1).count();
        if n_pos == 0 {
            return Err(SolverError::NoPositiveLabels);
        }
        let norm = if p > 1.0 {
            let q = p / (p - 1.0);
            let pos = norm_coefficient(c1, p).ok_or(SolverError::CoefficientOverflow { p, c: c1 })?;
            let neg = norm_coefficient(c2, p).ok_or(SolverError::CoefficientOverflow { p, c: c2 })?;
            Some(NormCoefficients { q, pos, neg })
        } else {
            if c1 * (n_pos as f64) < 1.0 {
                return Err(SolverError::InfeasibleBox(c1 * n_pos as f64));
            }
            None
        };
        let y: Array1<f64> = labels.iter().map(|&l| f64::from(l)).collect();
        let diag = kernel.diagonal();
        Ok(Self {
            kernel,
            y,
            diag,
            p,
            c1,
            c2,
            norm,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn labels(&self) -> ArrayView1<'_, f64> {
        self.y.view()
    }

    pub fn kernel(&self) -> &KernelMatrix {
        &self.kernel
    }

    pub fn diag(&self) -> ArrayView1<'_, f64> {
        self.diag.view()
    }

    fn n_positives(&self) -> usize {
        self.y.iter().filter(|&&v| v > 0.0).count()
    }

    /// Box caps of the feasible set: finite per class for p = 1, infinite
    /// otherwise.
    fn caps(&self) -> (f64, f64) {
        if self.norm.is_some() {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (self.c1, self.c2)
        }
    }

    /// K·(α⊙y), the workhorse of both objective and gradient.
    fn kernel_weighted(&self, alpha: &Array1<f64>) -> Array1<f64> {
        let w = alpha * &self.y;
        self.kernel.values().dot(&w)
    }

    fn uniform_start(&self) -> Array1<f64> {
        let n_pos = self.n_positives() as f64;
        self.y.mapv(|v| if v > 0.0 { 1.0 / n_pos } else { 0.0 })
    }
}

/// (c·p)^(−1/(p−1)) · (1 − 1/p), the dual-norm weight; `None` on overflow.
fn norm_coefficient(c: f64, p: f64) -> Option<f64> {
    let value = (c * p).powf(-1.0 / (p - 1.0)) * (1.0 - 1.0 / p);
    value.is_finite().then_some(value)
}

/// Multiplier vector with convergence diagnostics.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    /// Final value in minimization form.
    pub objective: f64,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
}

impl DualSolution {
    pub fn alpha_array(&self) -> Array1<f64> {
        Array1::from_vec(self.alpha.clone())
    }
}

/// Stopping rules and line-search knobs for the projected-gradient loop.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Relative objective-change threshold.
    pub objective_tolerance: f64,
    pub kkt_tolerance: f64,
    pub initial_step: f64,
    pub backtracking_factor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            objective_tolerance: 1e-10,
            kkt_tolerance: 1e-6,
            initial_step: 1.0,
            backtracking_factor: 0.5,
        }
    }
}

/// Dual objective in minimization form, valid for p > 1.
pub fn dual_objective(alpha: &Array1<f64>, prob: &DualProblem) -> Result<f64, SolverError> {
    let norm = prob
        .norm
        .ok_or(SolverError::RequiresPGreaterThanOne(prob.p))?;
    check_nonnegative(alpha, prob.n())?;
    let kw = prob.kernel_weighted(alpha);
    let mut value = 0.0;
    for i in 0..prob.n() {
        let coeff = if prob.y[i] > 0.0 { norm.pos } else { norm.neg };
        value += coeff * alpha[i].powf(norm.q);
        value -= alpha[i] * prob.y[i] * prob.diag[i];
        value += alpha[i] * prob.y[i] * kw[i];
    }
    Ok(value)
}

/// Closed-form gradient of [`dual_objective`]. The norm term uses the
/// one-sided derivative 0 at α_i = 0 (valid for q > 1).
pub fn dual_gradient(alpha: &Array1<f64>, prob: &DualProblem) -> Result<Array1<f64>, SolverError> {
    let norm = prob
        .norm
        .ok_or(SolverError::RequiresPGreaterThanOne(prob.p))?;
    check_nonnegative(alpha, prob.n())?;
    let kw = prob.kernel_weighted(alpha);
    let mut grad = Array1::zeros(prob.n());
    for i in 0..prob.n() {
        let coeff = if prob.y[i] > 0.0 { norm.pos } else { norm.neg };
        let norm_term = if alpha[i] > 0.0 {
            coeff * norm.q * alpha[i].powf(norm.q - 1.0)
        } else {
            0.0
        };
        grad[i] = norm_term - prob.y[i] * prob.diag[i] + 2.0 * prob.y[i] * kw[i];
    }
    Ok(grad)
}

fn check_nonnegative(alpha: &Array1<f64>, n: usize) -> Result<(), SolverError> {
    if alpha.len() != n {
        return Err(SolverError::LengthMismatch(alpha.len(), n));
    }
    if let Some(i) = alpha.iter().position(|&a| a < 0.0) {
        return Err(SolverError::NegativeAlpha(i));
    }
    Ok(())
}

/// Euclidean projection onto {α ≥ 0, yᵀα = 1}.
pub fn project_feasible(v: &Array1<f64>, y: &Array1<f64>) -> Array1<f64> {
    project_capped(v, y, f64::INFINITY, f64::INFINITY)
}

/// Euclidean projection onto {0 ≤ α ≤ cap(label), yᵀα = 1}.
///
/// α(λ) = clamp(v − λy, 0, cap) with yᵀα(λ) nonincreasing in λ; bisection
/// brackets the root and an exact λ-solve on the resulting free set removes
/// the residual bisection error.
fn project_capped(v: &Array1<f64>, y: &Array1<f64>, cap_pos: f64, cap_neg: f64) -> Array1<f64> {
    let n = v.len();
    assert!(
        y.iter().any(|&l| l > 0.0),
        "projection target {{α ≥ 0, yᵀα = 1}} needs at least one positive label"
    );
    let cap = |i: usize| if y[i] > 0.0 { cap_pos } else { cap_neg };
    let alpha_at = |lambda: f64| -> Array1<f64> {
        Array1::from_shape_fn(n, |i| (v[i] - lambda * y[i]).clamp(0.0, cap(i)))
    };
    let constraint = |lambda: f64| -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for i in 0..n {
            let term = y[i] * (v[i] - lambda * y[i]).clamp(0.0, cap(i));
            let t = sum + term;
            comp += if sum.abs() >= term.abs() {
                (sum - t) + term
            } else {
                (term - t) + sum
            };
            sum = t;
        }
        sum + comp
    };

    // Bracket: below `lo` every positive coordinate carries at least
    // min(cap_pos, 1) and negatives are zero, so yᵀα ≥ 1 whenever the set is
    // nonempty; above `hi` all positive coordinates are zero, so yᵀα ≤ 0.
    let pos_target = cap_pos.min(1.0);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        if y[i] > 0.0 {
            lo = lo.min(v[i] - pos_target);
            hi = hi.max(v[i]);
        } else {
            lo = lo.min(-v[i]);
        }
    }
    lo -= 1.0;
    hi += 1.0;

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = constraint(mid);
        if (g - 1.0).abs() <= 1e-14 {
            lo = mid;
            hi = mid;
            break;
        }
        if g > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
            break;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let rough = alpha_at(lambda);

    // Exact λ on the free set; fall back to the bisection value whenever the
    // active pattern is not self-consistent.
    let mut free_sum_vy = 0.0;
    let mut clamped_sum = 0.0;
    let mut free_count = 0usize;
    for i in 0..n {
        let raw = v[i] - lambda * y[i];
        if raw > 0.0 && raw < cap(i) {
            free_sum_vy += y[i] * v[i];
            free_count += 1;
        } else if raw >= cap(i) {
            clamped_sum += y[i] * cap(i);
        }
    }
    if free_count > 0 {
        let exact = (free_sum_vy + clamped_sum - 1.0) / free_count as f64;
        let polished = alpha_at(exact);
        let mut consistent = true;
        for i in 0..n {
            let raw_old = v[i] - lambda * y[i];
            let raw_new = v[i] - exact * y[i];
            let was_free = raw_old > 0.0 && raw_old < cap(i);
            let is_free = raw_new > 0.0 && raw_new < cap(i);
            if was_free != is_free {
                consistent = false;
                break;
            }
        }
        if consistent && (dot_labels(&polished, y) - 1.0).abs() <= 1e-12 {
            return polished;
        }
    }
    rough
}

fn dot_labels(alpha: &Array1<f64>, y: &Array1<f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (a, yi) in alpha.iter().zip(y.iter()) {
        let term = a * yi;
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// Fixed-point residual ‖α − P(α − ∇f(α))‖∞ of the projected-gradient map
/// with unit step, using the problem's own feasible set.
pub fn kkt_residual(alpha: &Array1<f64>, prob: &DualProblem) -> f64 {
    let grad = match prob.norm {
        Some(_) => dual_gradient(alpha, prob).expect("feasible alpha"),
        None => p1_gradient(alpha, prob),
    };
    let (cap_pos, cap_neg) = prob.caps();
    let stepped = alpha - &grad;
    let projected = project_capped(&stepped, &prob.y, cap_pos, cap_neg);
    alpha
        .iter()
        .zip(projected.iter())
        .map(|(a, p)| (a - p).abs())
        .fold(0.0, f64::max)
}

/// p = 1 objective in minimization form: (α⊙y)ᵀK(α⊙y) − Σ α_i y_i κ(x_i,x_i).
fn p1_objective(alpha: &Array1<f64>, prob: &DualProblem) -> f64 {
    let kw = prob.kernel_weighted(alpha);
    let mut value = 0.0;
    for i in 0..prob.n() {
        value += alpha[i] * prob.y[i] * (kw[i] - prob.diag[i]);
    }
    value
}

fn p1_gradient(alpha: &Array1<f64>, prob: &DualProblem) -> Array1<f64> {
    let kw = prob.kernel_weighted(alpha);
    Array1::from_shape_fn(prob.n(), |i| prob.y[i] * (2.0 * kw[i] - prob.diag[i]))
}

/// Solve the p > 1 dual by projected gradient descent with backtracking.
///
/// Every accepted iterate is feasible and the objective is nonincreasing
/// across accepted steps. Termination: relative objective change below
/// `objective_tolerance` with KKT residual below `kkt_tolerance` (converged),
/// or `max_iterations`, or a numerically stalled line search.
pub fn solve(
    prob: &DualProblem,
    config: &SolverConfig,
    alpha0: Option<&Array1<f64>>,
) -> Result<DualSolution, SolverError> {
    if prob.norm.is_none() {
        return Err(SolverError::RequiresPGreaterThanOne(prob.p));
    }
    let start = match alpha0 {
        Some(a) => project_feasible(a, &prob.y),
        None => prob.uniform_start(),
    };
    descend(
        prob,
        config,
        start,
        &|a| dual_objective(a, prob).expect("iterates stay nonnegative"),
        &|a| dual_gradient(a, prob).expect("iterates stay nonnegative"),
    )
}

/// Solve the p = 1 (classical box-constrained) dual.
pub fn p1_solve(prob: &DualProblem, config: &SolverConfig) -> Result<DualSolution, SolverError> {
    if prob.norm.is_some() {
        return Err(SolverError::RequiresPOne(prob.p));
    }
    let start = prob.uniform_start();
    descend(
        prob,
        config,
        start,
        &|a| p1_objective(a, prob),
        &|a| p1_gradient(a, prob),
    )
}

fn descend(
    prob: &DualProblem,
    config: &SolverConfig,
    start: Array1<f64>,
    objective: &dyn Fn(&Array1<f64>) -> f64,
    gradient: &dyn Fn(&Array1<f64>) -> Array1<f64>,
) -> Result<DualSolution, SolverError> {
    let (cap_pos, cap_neg) = prob.caps();
    let project = |v: &Array1<f64>| project_capped(v, &prob.y, cap_pos, cap_neg);

    let mut x = start;
    let mut fx = objective(&x);
    let mut warm_step = config.initial_step;
    let mut iterations = 0usize;
    let mut converged = false;
    let mut stagnant = 0usize;

    for _ in 0..config.max_iterations {
        let grad = gradient(&x);
        let mut t = warm_step;
        let mut accepted: Option<(Array1<f64>, f64)> = None;
        // Enough halvings to fall from any warm step to a no-op step; a
        // line search that cannot accept within the budget has hit the
        // floating-point floor.
        for _ in 0..2000 {
            if t <= 1e-300 {
                break;
            }
            let trial = project(&(&x - &(t * &grad)));
            // Projections of absurdly remote points lose the hyperplane to
            // rounding; treat those trials as failed and shrink the step.
            if (dot_labels(&trial, &prob.y) - 1.0).abs() > 1e-12 {
                t *= config.backtracking_factor;
                continue;
            }
            let ft = objective(&trial);
            let descent = grad.dot(&(&trial - &x));
            if ft <= fx + 1e-4 * descent {
                accepted = Some((trial, ft));
                break;
            }
            t *= config.backtracking_factor;
        }
        let Some((next, fnext)) = accepted else {
            break;
        };
        iterations += 1;
        let rel_change = (fx - fnext).abs() / fx.abs().max(1.0);
        x = next;
        fx = fnext;
        warm_step = t / config.backtracking_factor;
        if rel_change < config.objective_tolerance {
            if kkt_residual(&x, prob) < config.kkt_tolerance {
                converged = true;
                break;
            }
            stagnant += 1;
            // The objective has flattened but the residual will not drop
            // (typically extreme dual-norm scaling); stop burning iterations.
            if stagnant >= 1000 {
                break;
            }
        } else {
            stagnant = 0;
        }
    }

    let kkt = kkt_residual(&x, prob);
    Ok(DualSolution {
        alpha: x.to_vec(),
        objective: fx,
        iterations,
        kkt_residual: kkt,
        converged: converged && kkt < config.kkt_tolerance,
    })
}
