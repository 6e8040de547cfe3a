//! Dataset ingestion, preprocessing, and seeded three-way splitting.
//!
//! A [`Dataset`] is a dense feature matrix with ±1 labels (+1 = target,
//! −1 = anomaly). Preprocessing follows the usual one-class recipe: fit a
//! per-feature standardizer on the positive training samples, apply it
//! everywhere, then rescale each row to unit Euclidean length.

use std::fmt;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv parse error: {0}")]
    Csv(String),
    #[error("row {row}, column {column}: expected a finite number, got {value:?}")]
    BadCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: label must be +1 or -1, got {value:?}")]
    BadLabel { row: usize, value: String },
    #[error("row {row}: expected {expected} fields, got {got}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("label column {0:?} not found")]
    MissingLabelColumn(String),
    #[error("dataset is empty")]
    Empty,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected only positive-labeled rows")]
    NotAllPositive,
    #[error("split ratios must be positive and sum to 1, got {0:?}")]
    BadRatios([f64; 3]),
    #[error("standard deviation must be positive, got {0}")]
    NonPositiveStd(f64),
    #[error("class {label:+} has only {count} members; need at least 3 to split")]
    ClassTooSmall { label: i8, count: usize },
    #[error("feature matrix contains a non-finite value at row {0}")]
    NonFinite(usize),
}

/// Feature matrix with ±1 labels. Rows are samples.
#[derive(Debug, Clone)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Vec<i8>,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(
        features: Array2<f64>,
        labels: Vec<i8>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self, DataError> {
        if features.nrows() == 0 || features.ncols() == 0 {
            return Err(DataError::Empty);
        }
        if labels.len() != features.nrows() {
            return Err(DataError::DimensionMismatch {
                expected: features.nrows(),
                got: labels.len(),
            });
        }
        for (i, row) in features.outer_iter().enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(DataError::NonFinite(i + 1));
            }
        }
        if let Some(i) = labels.iter().position(|l| *l != 1 && *l != -1) {
            return Err(DataError::BadLabel {
                row: i + 1,
                value: labels[i].to_string(),
            });
        }
        Ok(Self {
            features,
            labels,
            feature_names,
        })
    }

    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    /// Labels as ±1.0 reals, the form the dual problem consumes.
    pub fn labels_f64(&self) -> Array1<f64> {
        self.labels.iter().map(|&l| f64::from(l)).collect()
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn n_positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn n_negatives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == -1).count()
    }

    /// Row subset in the given index order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let features = self.features.select(Axis(0), indices);
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Dataset {
            features,
            labels,
            feature_names: self.feature_names.clone(),
        }
    }

    /// The +1-labeled rows only.
    pub fn positives(&self) -> Dataset {
        let idx: Vec<usize> = (0..self.n()).filter(|&i| self.labels[i] == 1).collect();
        self.subset(&idx)
    }
}

/// Per-feature mean and standard deviation fitted on positive training data.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizationParams {
    pub mean: Array1<f64>,
    pub std: Array1<f64>,
}

/// Feature transform stored inside a fitted model.
///
/// `Standardize` is the full pipeline (center, scale, unit-normalize rows);
/// `Raw` leaves features untouched, which keeps low-dimensional geometry
/// intact for boundary visualisation.
#[derive(Debug, Clone)]
pub enum Preprocessing {
    Raw,
    Standardize(StandardizationParams),
}

impl Preprocessing {
    pub fn dim(&self) -> Option<usize> {
        match self {
            Preprocessing::Raw => None,
            Preprocessing::Standardize(p) => Some(p.mean.len()),
        }
    }

    pub fn apply(&self, features: ArrayView2<'_, f64>) -> Result<Array2<f64>, DataError> {
        match self {
            Preprocessing::Raw => Ok(features.to_owned()),
            Preprocessing::Standardize(params) => {
                let standardized = standardize_features(features, params)?;
                Ok(unit_normalize_rows(standardized))
            }
        }
    }

    pub fn apply_row(&self, row: ArrayView1<'_, f64>) -> Result<Array1<f64>, DataError> {
        let as_matrix = row.insert_axis(Axis(0));
        let out = self.apply(as_matrix)?;
        Ok(out.row(0).to_owned())
    }
}

/// Stratified train/validation/test partition produced by [`three_way_split`].
#[derive(Debug, Clone)]
pub struct DataSplits {
    pub train: Dataset,
    pub validation: Dataset,
    pub test: Dataset,
    pub seed: u64,
}

/// How to locate the label column in a CSV header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl Default for LabelColumn {
    fn default() -> Self {
        LabelColumn::Name("label".to_string())
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelColumn::Name(n) => write!(f, "{n}"),
            LabelColumn::Index(i) => write!(f, "#{i}"),
        }
    }
}

/// Load a headered CSV with one ±1 label column; all other columns are
/// features, kept in file order. Data rows are reported 1-based in errors.
pub fn load_csv(path: impl AsRef<Path>, label_column: &LabelColumn) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => DataError::Io {
                path: path.display().to_string(),
                source: std::io::Error::new(std::io::ErrorKind::Other, e.to_string()),
            },
            _ => DataError::Csv(e.to_string()),
        })?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| DataError::Csv(e.to_string()))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let label_idx = match label_column {
        LabelColumn::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::MissingLabelColumn(name.clone()))?,
        LabelColumn::Index(i) => {
            if *i >= headers.len() {
                return Err(DataError::MissingLabelColumn(label_column.to_string()));
            }
            *i
        }
    };
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut rows: Vec<f64> = Vec::new();
    let mut labels: Vec<i8> = Vec::new();
    let mut n_rows = 0usize;
    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 1;
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        if record.len() != headers.len() {
            return Err(DataError::RaggedRow {
                row,
                expected: headers.len(),
                got: record.len(),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            if col == label_idx {
                labels.push(parse_label(cell, row)?);
            } else {
                let value: f64 = cell.parse().map_err(|_| DataError::BadCell {
                    row,
                    column: headers[col].clone(),
                    value: cell.to_string(),
                })?;
                if !value.is_finite() {
                    return Err(DataError::BadCell {
                        row,
                        column: headers[col].clone(),
                        value: cell.to_string(),
                    });
                }
                rows.push(value);
            }
        }
        n_rows += 1;
    }
    if n_rows == 0 {
        return Err(DataError::Empty);
    }
    let dim = headers.len() - 1;
    let features = Array2::from_shape_vec((n_rows, dim), rows)
        .map_err(|e| DataError::Csv(e.to_string()))?;
    Dataset::new(features, labels, Some(feature_names))
}

fn parse_label(cell: &str, row: usize) -> Result<i8, DataError> {
    match cell.trim().parse::<f64>() {
        Ok(v) if v == 1.0 => Ok(1),
        Ok(v) if v == -1.0 => Ok(-1),
        _ => Err(DataError::BadLabel {
            row,
            value: cell.to_string(),
        }),
    }
}

/// Per-feature mean and population standard deviation of a positives-only
/// dataset. Zero-variance features get std 1 so the transform stays defined.
pub fn fit_standardizer(positives: &Dataset) -> Result<StandardizationParams, DataError> {
    if positives.labels().iter().any(|&l| l != 1) {
        return Err(DataError::NotAllPositive);
    }
    let x = positives.features();
    let n = x.nrows() as f64;
    let mean = x.mean_axis(Axis(0)).ok_or(DataError::Empty)?;
    let mut std = Array1::zeros(x.ncols());
    for j in 0..x.ncols() {
        let var = x.column(j).iter().map(|v| (v - mean[j]).powi(2)).sum::<f64>() / n;
        let s = var.sqrt();
        std[j] = if s > 0.0 { s } else { 1.0 };
    }
    Ok(StandardizationParams { mean, std })
}

/// Center and scale features without the unit-norm step. Exposed so the
/// intermediate of the full pipeline can be inspected.
pub fn standardize_features(
    features: ArrayView2<'_, f64>,
    params: &StandardizationParams,
) -> Result<Array2<f64>, DataError> {
    if features.ncols() != params.mean.len() {
        return Err(DataError::DimensionMismatch {
            expected: params.mean.len(),
            got: features.ncols(),
        });
    }
    let mut out = features.to_owned();
    for mut row in out.outer_iter_mut() {
        for j in 0..row.len() {
            row[j] = (row[j] - params.mean[j]) / params.std[j];
        }
    }
    Ok(out)
}

/// Rescale each row to unit Euclidean length; all-zero rows are left as-is.
pub fn unit_normalize_rows(mut features: Array2<f64>) -> Array2<f64> {
    for mut row in features.outer_iter_mut() {
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.mapv_inplace(|v| v / norm);
        }
    }
    features
}

/// Standardize then unit-normalize each row.
pub fn apply_standardizer(
    data: &Dataset,
    params: &StandardizationParams,
) -> Result<Dataset, DataError> {
    let standardized = standardize_features(data.features(), params)?;
    let normalized = unit_normalize_rows(standardized);
    Dataset::new(
        normalized,
        data.labels().to_vec(),
        data.feature_names().map(|n| n.to_vec()),
    )
}

/// Stratified three-way split with a seeded deterministic shuffle.
///
/// Each class is shuffled and partitioned independently; subset sizes are
/// floors of `n_class * ratio` with the remainder handed out by largest
/// fractional part (ties to the earlier subset).
pub fn three_way_split(
    data: &Dataset,
    ratios: [f64; 3],
    seed: u64,
) -> Result<DataSplits, DataError> {
    if ratios.iter().any(|&r| r <= 0.0) || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(DataError::BadRatios(ratios));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for &label in &[1i8, -1i8] {
        let mut idx: Vec<usize> = (0..data.n()).filter(|&i| data.labels()[i] == label).collect();
        if idx.is_empty() {
            continue;
        }
        if idx.len() < 3 {
            return Err(DataError::ClassTooSmall {
                label,
                count: idx.len(),
            });
        }
        idx.shuffle(&mut rng);
        let sizes = floor_then_distribute(idx.len(), ratios);
        let mut start = 0;
        for (part, &size) in parts.iter_mut().zip(sizes.iter()) {
            part.extend_from_slice(&idx[start..start + size]);
            start += size;
        }
    }
    for part in parts.iter_mut() {
        part.sort_unstable();
    }
    let [train_idx, val_idx, test_idx] = parts;
    Ok(DataSplits {
        train: data.subset(&train_idx),
        validation: data.subset(&val_idx),
        test: data.subset(&test_idx),
        seed,
    })
}

fn floor_then_distribute(n: usize, ratios: [f64; 3]) -> [usize; 3] {
    let mut sizes = [0usize; 3];
    let mut fracs = [0.0f64; 3];
    let mut assigned = 0usize;
    for k in 0..3 {
        let exact = n as f64 * ratios[k];
        sizes[k] = exact.floor() as usize;
        fracs[k] = exact - exact.floor();
        assigned += sizes[k];
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| fracs[b].partial_cmp(&fracs[a]).unwrap().then(a.cmp(&b)));
    for k in 0..(n - assigned) {
        sizes[order[k % 3]] += 1;
    }
    sizes
}

/// Seeded 2-D Gaussian sample with all labels +1, `mean` and `std` applied
/// to both coordinates.
pub fn synth_gaussian_2d(n: usize, mean: f64, std: f64, seed: u64) -> Result<Dataset, DataError> {
    if n == 0 {
        return Err(DataError::Empty);
    }
    if std <= 0.0 {
        return Err(DataError::NonPositiveStd(std));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(mean, std).expect("std is positive");
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..n {
        values.push(normal.sample(&mut rng));
        values.push(normal.sample(&mut rng));
    }
    let features = Array2::from_shape_vec((n, 2), values).expect("shape matches");
    Dataset::new(
        features,
        vec![1; n],
        Some(vec!["x".to_string(), "y".to_string()]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use std::io::Write;

    fn write_temp_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn load_csv_parses_features_and_labels() {
        let f = write_temp_csv("f1,f2,label\n0.1,0.2,1\n0.3,0.4,-1\n");
        let ds = load_csv(f.path(), &LabelColumn::default()).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.labels(), &[1, -1]);
        assert_eq!(ds.features()[[1, 0]], 0.3);
        assert_eq!(ds.feature_names().unwrap(), &["f1", "f2"]);
    }

    #[test]
    fn load_csv_reports_bad_cell_position() {
        let f = write_temp_csv("f1,f2,label\n0.1,abc,1\n");
        let err = load_csv(f.path(), &LabelColumn::default()).unwrap_err();
        match err {
            DataError::BadCell { row, column, .. } => {
                assert_eq!(row, 1);
                assert_eq!(column, "f2");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_csv_rejects_zero_label() {
        let f = write_temp_csv("f1,label\n0.1,0\n");
        let err = load_csv(f.path(), &LabelColumn::default()).unwrap_err();
        assert!(err.to_string().contains("+1 or -1"), "{err}");
    }

    #[test]
    fn load_csv_accepts_plus_one_spelling() {
        let f = write_temp_csv("f1,label\n0.5,+1\n0.6,-1\n");
        let ds = load_csv(f.path(), &LabelColumn::default()).unwrap();
        assert_eq!(ds.labels(), &[1, -1]);
    }

    #[test]
    fn load_csv_rejects_ragged_rows() {
        let f = write_temp_csv("f1,f2,label\n0.1,0.2,1\n0.3,1\n");
        let err = load_csv(f.path(), &LabelColumn::default()).unwrap_err();
        assert!(matches!(err, DataError::RaggedRow { row: 2, .. }), "{err}");
    }

    #[test]
    fn load_csv_missing_file() {
        let err = load_csv("/nonexistent/x.csv", &LabelColumn::default()).unwrap_err();
        assert!(matches!(err, DataError::Io { .. }));
    }

    #[test]
    fn load_csv_by_index() {
        let f = write_temp_csv("y,f1\n1,0.5\n-1,0.6\n");
        let ds = load_csv(f.path(), &LabelColumn::Index(0)).unwrap();
        assert_eq!(ds.labels(), &[1, -1]);
        assert_eq!(ds.features()[[0, 0]], 0.5);
    }

    fn positives(features: Array2<f64>) -> Dataset {
        let n = features.nrows();
        Dataset::new(features, vec![1; n], None).unwrap()
    }

    #[test]
    fn standardizer_mean_and_population_std() {
        let ds = positives(array![[0.0, 0.0], [2.0, 2.0]]);
        let p = fit_standardizer(&ds).unwrap();
        assert_eq!(p.mean, array![1.0, 1.0]);
        assert_eq!(p.std, array![1.0, 1.0]);
    }

    #[test]
    fn standardizer_zero_variance_guard() {
        let ds = positives(array![[5.0], [5.0]]);
        let p = fit_standardizer(&ds).unwrap();
        assert_eq!(p.mean, array![5.0]);
        assert_eq!(p.std, array![1.0]);
    }

    #[test]
    fn standardizer_single_row() {
        let ds = positives(array![[3.0, 7.0]]);
        let p = fit_standardizer(&ds).unwrap();
        assert_eq!(p.mean, array![3.0, 7.0]);
        assert_eq!(p.std, array![1.0, 1.0]);
    }

    #[test]
    fn standardizer_rejects_negatives() {
        let ds = Dataset::new(array![[1.0], [2.0]], vec![1, -1], None).unwrap();
        assert!(matches!(
            fit_standardizer(&ds),
            Err(DataError::NotAllPositive)
        ));
    }

    #[test]
    fn apply_standardizer_unit_norm() {
        let ds = positives(array![[3.0, 4.0]]);
        let params = StandardizationParams {
            mean: array![0.0, 0.0],
            std: array![1.0, 1.0],
        };
        let out = apply_standardizer(&ds, &params).unwrap();
        assert!((out.features()[[0, 0]] - 0.6).abs() < 1e-15);
        assert!((out.features()[[0, 1]] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn apply_standardizer_zero_row_kept() {
        let ds = positives(array![[1.0, 2.0]]);
        let params = StandardizationParams {
            mean: array![1.0, 2.0],
            std: array![1.0, 1.0],
        };
        let out = apply_standardizer(&ds, &params).unwrap();
        assert_eq!(out.features()[[0, 0]], 0.0);
        assert_eq!(out.features()[[0, 1]], 0.0);
    }

    #[test]
    fn apply_standardizer_identity_case() {
        let ds = positives(array![[2.0, 0.0]]);
        let params = StandardizationParams {
            mean: array![0.0, 0.0],
            std: array![2.0, 1.0],
        };
        let out = apply_standardizer(&ds, &params).unwrap();
        assert_eq!(out.features()[[0, 0]], 1.0);
        assert_eq!(out.features()[[0, 1]], 0.0);
    }

    #[test]
    fn apply_standardizer_dim_mismatch() {
        let ds = positives(array![[1.0, 2.0, 3.0]]);
        let params = StandardizationParams {
            mean: array![0.0],
            std: array![1.0],
        };
        assert!(matches!(
            apply_standardizer(&ds, &params),
            Err(DataError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn standardized_positives_have_zero_mean_before_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let normal = Normal::new(3.0, 2.5).unwrap();
        let values: Vec<f64> = (0..40 * 3).map(|_| normal.sample(&mut rng)).collect();
        let ds = positives(Array2::from_shape_vec((40, 3), values).unwrap());
        let params = fit_standardizer(&ds).unwrap();
        let standardized = standardize_features(ds.features(), &params).unwrap();
        let mean = standardized.mean_axis(Axis(0)).unwrap();
        for v in mean.iter() {
            assert!(v.abs() < 1e-10, "residual mean {v}");
        }
    }

    #[test]
    fn split_sizes_and_determinism() {
        let ds = positives(Array2::from_shape_fn((10, 2), |(i, j)| (i * 2 + j) as f64));
        let s1 = three_way_split(&ds, [0.4, 0.3, 0.3], 7).unwrap();
        assert_eq!(s1.train.n(), 4);
        assert_eq!(s1.validation.n(), 3);
        assert_eq!(s1.test.n(), 3);
        let s2 = three_way_split(&ds, [0.4, 0.3, 0.3], 7).unwrap();
        assert_eq!(s1.train.features(), s2.train.features());
        assert_eq!(s1.test.features(), s2.test.features());
    }

    #[test]
    fn split_rejects_bad_ratios() {
        let ds = positives(Array2::zeros((10, 1)) + 1.0);
        assert!(matches!(
            three_way_split(&ds, [0.5, 0.5, 0.5], 1),
            Err(DataError::BadRatios(_))
        ));
    }

    #[test]
    fn split_rejects_tiny_class() {
        let ds = Dataset::new(
            array![[1.0], [2.0], [3.0], [4.0], [5.0]],
            vec![1, 1, 1, -1, -1],
            None,
        )
        .unwrap();
        assert!(matches!(
            three_way_split(&ds, [0.4, 0.3, 0.3], 1),
            Err(DataError::ClassTooSmall { label: -1, count: 2 })
        ));
    }

    #[test]
    fn split_is_a_stratified_partition() {
        let n_pos = 23;
        let n_neg = 11;
        let features = Array2::from_shape_fn((n_pos + n_neg, 2), |(i, j)| (i + j) as f64);
        let mut labels = vec![1i8; n_pos];
        labels.extend(vec![-1i8; n_neg]);
        let ds = Dataset::new(features, labels, None).unwrap();
        for seed in 0..20u64 {
            let s = three_way_split(&ds, [0.4, 0.3, 0.3], seed).unwrap();
            let total = s.train.n() + s.validation.n() + s.test.n();
            assert_eq!(total, ds.n());
            // Partition: every original row appears exactly once.
            let mut seen = vec![0usize; ds.n()];
            for part in [&s.train, &s.validation, &s.test] {
                for row in part.features().outer_iter() {
                    let i = (0..ds.n())
                        .find(|&i| ds.features().row(i) == row)
                        .expect("row comes from the source dataset");
                    seen[i] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
            // Per-class proportions stay within 1/n_class of the ratios.
            for (part, ratio) in [(&s.train, 0.4), (&s.validation, 0.3), (&s.test, 0.3)] {
                let pos = part.n_positives() as f64;
                let neg = part.n_negatives() as f64;
                assert!((pos / n_pos as f64 - ratio).abs() < 1.0 / n_pos as f64 + 1e-12);
                assert!((neg / n_neg as f64 - ratio).abs() < 1.0 / n_neg as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn synth_is_deterministic() {
        let a = synth_gaussian_2d(50, 2.0, 3.0, 9).unwrap();
        let b = synth_gaussian_2d(50, 2.0, 3.0, 9).unwrap();
        assert_eq!(a.features(), b.features());
        assert!(a.labels().iter().all(|&l| l == 1));
    }

    proptest::proptest! {
        #[test]
        fn normalized_rows_have_unit_norm(rows in proptest::collection::vec(
            proptest::collection::vec(-50.0f64..50.0, 3), 1..8)) {
            let n = rows.len();
            let flat: Vec<f64> = rows.into_iter().flatten().collect();
            let m = unit_normalize_rows(Array2::from_shape_vec((n, 3), flat).unwrap());
            for row in m.outer_iter() {
                let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 0.0 {
                    proptest::prop_assert!((norm - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
