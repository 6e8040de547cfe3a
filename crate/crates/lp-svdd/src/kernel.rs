//! Kernel functions, the pairwise-distance bandwidth heuristic, and dense
//! Gram-matrix construction.

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("gaussian width must be positive, got {0}")]
    NonPositiveWidth(f64),
    #[error("width heuristic needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("all points are identical; pairwise distances are zero")]
    DegeneratePoints,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Kernel family, before a concrete width is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Gaussian,
    Linear,
}

impl std::str::FromStr for KernelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gaussian" => Ok(KernelKind::Gaussian),
            "linear" => Ok(KernelKind::Linear),
            other => Err(format!("unknown kernel {other:?} (gaussian|linear)")),
        }
    }
}

/// Kernel choice. The Gaussian kernel is exp(−‖x−z‖² / (2·width²)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    Gaussian { width: f64 },
    Linear,
}

impl KernelSpec {
    pub fn gaussian(width: f64) -> Result<Self, KernelError> {
        if width > 0.0 && width.is_finite() {
            Ok(KernelSpec::Gaussian { width })
        } else {
            Err(KernelError::NonPositiveWidth(width))
        }
    }

    /// Feature-space images have unit length exactly when the diagonal of
    /// the Gram matrix is all ones.
    pub fn has_unit_diagonal(&self) -> bool {
        matches!(self, KernelSpec::Gaussian { .. })
    }
}

/// Dense symmetric Gram matrix together with the kernel that produced it.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    values: Array2<f64>,
    spec: KernelSpec,
}

impl KernelMatrix {
    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn diagonal(&self) -> ndarray::Array1<f64> {
        self.values.diag().to_owned()
    }
}

/// Half of the mean pairwise Euclidean distance over all unordered pairs
/// (self-pairs excluded).
pub fn width_heuristic(points: ArrayView2<'_, f64>) -> Result<f64, KernelError> {
    let n = points.nrows();
    if n < 2 {
        return Err(KernelError::TooFewPoints(n));
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += squared_distance(points.row(i), points.row(j)).sqrt();
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let width = 0.5 * sum / pairs;
    if width > 0.0 {
        Ok(width)
    } else {
        Err(KernelError::DegeneratePoints)
    }
}

fn squared_distance(x: ArrayView1<'_, f64>, z: ArrayView1<'_, f64>) -> f64 {
    x.iter().zip(z.iter()).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Evaluate the kernel at a single pair of points.
pub fn kernel_eval(
    x: ArrayView1<'_, f64>,
    z: ArrayView1<'_, f64>,
    spec: &KernelSpec,
) -> Result<f64, KernelError> {
    if x.len() != z.len() {
        return Err(KernelError::DimensionMismatch(x.len(), z.len()));
    }
    Ok(match spec {
        KernelSpec::Gaussian { width } => {
            (-squared_distance(x, z) / (2.0 * width * width)).exp()
        }
        KernelSpec::Linear => x.dot(&z),
    })
}

/// Gram matrix of a point set. Each unordered pair is evaluated once and
/// mirrored so the result is symmetric exactly as computed; the Gaussian
/// diagonal is exactly 1.
pub fn kernel_matrix(
    points: ArrayView2<'_, f64>,
    spec: &KernelSpec,
) -> Result<KernelMatrix, KernelError> {
    if let KernelSpec::Gaussian { width } = spec {
        if !(*width > 0.0) {
            return Err(KernelError::NonPositiveWidth(*width));
        }
    }
    let n = points.nrows();
    let mut values = Array2::zeros((n, n));
    for i in 0..n {
        values[[i, i]] = kernel_eval(points.row(i), points.row(i), spec)?;
        for j in (i + 1)..n {
            let k = kernel_eval(points.row(i), points.row(j), spec)?;
            values[[i, j]] = k;
            values[[j, i]] = k;
        }
    }
    Ok(KernelMatrix {
        values,
        spec: *spec,
    })
}

/// Cross-kernel block: entry `[a][i]` is κ(query_a, train_i).
pub fn kernel_cross(
    train: ArrayView2<'_, f64>,
    queries: ArrayView2<'_, f64>,
    spec: &KernelSpec,
) -> Result<Array2<f64>, KernelError> {
    if queries.nrows() > 0 && train.ncols() != queries.ncols() {
        return Err(KernelError::DimensionMismatch(
            train.ncols(),
            queries.ncols(),
        ));
    }
    let mut values = Array2::zeros((queries.nrows(), train.nrows()));
    for a in 0..queries.nrows() {
        for i in 0..train.nrows() {
            values[[a, i]] = kernel_eval(queries.row(a), train.row(i), spec)?;
        }
    }
    Ok(values)
}
