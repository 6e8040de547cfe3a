//! Shared numeric oracles for the integration tests. Everything here is
//! deliberately independent of the library's solver path: dense linear
//! algebra from scratch, brute-force enumeration, and pairwise statistics.

#![allow(dead_code)]

use ndarray::{Array1, Array2};

/// Deterministic xorshift stream for test data.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.wrapping_mul(0x9E3779B97F4A7C15) | 1)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    /// Uniform in [-scale, scale).
    pub fn uniform(&mut self, scale: f64) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 * scale - scale
    }

    /// Uniform in [0, scale).
    pub fn positive(&mut self, scale: f64) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * scale
    }
}

/// Solve A·x = b by Gaussian elimination with partial pivoting.
/// Returns None when the system is numerically singular.
pub fn solve_dense(a: &Array2<f64>, b: &Array1<f64>) -> Option<Array1<f64>> {
    let n = b.len();
    let mut m = a.clone();
    let mut rhs = b.clone();
    for col in 0..n {
        let mut pivot = col;
        for row in (col + 1)..n {
            if m[[row, col]].abs() > m[[pivot, col]].abs() {
                pivot = row;
            }
        }
        if m[[pivot, col]].abs() < 1e-12 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                let tmp = m[[col, k]];
                m[[col, k]] = m[[pivot, k]];
                m[[pivot, k]] = tmp;
            }
            rhs.swap(col, pivot);
        }
        for row in (col + 1)..n {
            let factor = m[[row, col]] / m[[col, col]];
            for k in col..n {
                m[[row, k]] -= factor * m[[col, k]];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = Array1::zeros(n);
    for row in (0..n).rev() {
        let mut value = rhs[row];
        for k in (row + 1)..n {
            value -= m[[row, k]] * x[k];
        }
        x[row] = value / m[[row, row]];
    }
    Some(x)
}

/// Minimization objective of the p = 1 dual:
/// f(α) = (α⊙y)ᵀK(α⊙y) − Σ α_i y_i K_ii.
pub fn p1_objective(alpha: &Array1<f64>, k: &Array2<f64>, y: &Array1<f64>) -> f64 {
    let w = alpha * y;
    let kw = k.dot(&w);
    let mut value = w.dot(&kw);
    for i in 0..alpha.len() {
        value -= alpha[i] * y[i] * k[[i, i]];
    }
    value
}

/// Brute-force global minimizer of the p = 1 dual over
/// {0 ≤ α_i ≤ cap_i, yᵀα = 1} by enumerating every lower/upper/free
/// pattern and solving the stationarity system on the free set.
///
/// Every pattern whose candidate lands inside the box is collected; the
/// optimum is the feasible candidate with the smallest objective (the true
/// optimum's own pattern always produces it, and no feasible point beats
/// the global minimum).
pub fn p1_active_set_oracle(
    k: &Array2<f64>,
    y: &Array1<f64>,
    caps: &Array1<f64>,
) -> (Array1<f64>, f64) {
    let n = y.len();
    assert!(n <= 12, "pattern enumeration is 3^n");
    let mut best: Option<(Array1<f64>, f64)> = None;
    let patterns = 3usize.pow(n as u32);
    for code in 0..patterns {
        let mut digits = Vec::with_capacity(n);
        let mut rest = code;
        for _ in 0..n {
            digits.push(rest % 3); // 0 = at lower bound, 1 = at cap, 2 = free
            rest /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| digits[i] == 2).collect();
        let mut alpha: Array1<f64> = Array1::zeros(n);
        let mut fixed_wsum = 0.0; // Σ_clamped y_j·α_j
        for i in 0..n {
            if digits[i] == 1 {
                alpha[i] = caps[i];
                fixed_wsum += y[i] * caps[i];
            }
        }
        if free.is_empty() {
            if (fixed_wsum - 1.0).abs() <= 1e-9 {
                let value = p1_objective(&alpha, k, y);
                if best.as_ref().map_or(true, |(_, b)| value < *b) {
                    best = Some((alpha, value));
                }
            }
            continue;
        }
        // Stationarity on the free set in β_j = y_j·α_j coordinates:
        //   2·Σ_{j free} K_ij β_j + λ = K_ii − 2·Σ_{j capped} K_ij β_j
        // plus the constraint Σ_{j free} β_j = 1 − Σ_capped β_j.
        let m = free.len();
        let mut system: Array2<f64> = Array2::zeros((m + 1, m + 1));
        let mut rhs: Array1<f64> = Array1::zeros(m + 1);
        for (row, &i) in free.iter().enumerate() {
            for (col, &j) in free.iter().enumerate() {
                system[[row, col]] = 2.0 * k[[i, j]];
            }
            system[[row, m]] = 1.0;
            let mut b = k[[i, i]];
            for j in 0..n {
                if digits[j] == 1 {
                    b -= 2.0 * k[[i, j]] * y[j] * caps[j];
                }
            }
            rhs[row] = b;
        }
        for col in 0..m {
            system[[m, col]] = 1.0;
        }
        rhs[m] = 1.0 - fixed_wsum;
        let Some(solution) = solve_dense(&system, &rhs) else {
            continue;
        };
        let mut feasible = true;
        for (idx, &i) in free.iter().enumerate() {
            let a = y[i] * solution[idx];
            if a < -1e-9 || a > caps[i] + 1e-9 {
                feasible = false;
                break;
            }
            alpha[i] = a.clamp(0.0, caps[i]);
        }
        if !feasible {
            continue;
        }
        let value = p1_objective(&alpha, k, y);
        if best.as_ref().map_or(true, |(_, b)| value < *b) {
            best = Some((alpha, value));
        }
    }
    best.expect("feasible pattern exists when c1·n_pos >= 1")
}

/// Exhaustive-then-refined lattice minimization over the unit simplex,
/// finishing on the 1e-3 lattice. Stage one scans the whole simplex at step
/// 0.05; each refinement re-scans a generous box (±3 previous steps) around
/// the incumbent on a finer lattice. Sound for the convex objectives it is
/// used on; the caller's two-sided tolerance catches a missed basin anyway.
pub fn simplex_grid_min(f: &dyn Fn(&Array1<f64>) -> f64, n: usize) -> f64 {
    // (lattice denominator, search radius in lattice units; None = full scan)
    let stages: [(usize, Option<usize>); 4] =
        [(20, None), (100, Some(15)), (500, Some(15)), (1000, Some(6))];
    let mut incumbent: Option<(Vec<usize>, usize, f64)> = None;
    for (total, radius) in stages {
        let (lo, hi): (Vec<usize>, Vec<usize>) = match (&incumbent, radius) {
            (Some((units, prev_total, _)), Some(r)) => {
                let scale = total / prev_total;
                let centers: Vec<usize> = units.iter().map(|&u| u * scale).collect();
                (
                    centers.iter().map(|&c| c.saturating_sub(r)).collect(),
                    centers.iter().map(|&c| (c + r).min(total)).collect(),
                )
            }
            _ => (vec![0; n], vec![total; n]),
        };
        let mut best_units = Vec::new();
        let mut best_value = f64::INFINITY;
        let mut current = Vec::with_capacity(n);
        enumerate_compositions(&lo, &hi, total, 0, &mut current, &mut |units| {
            let alpha = Array1::from_iter(units.iter().map(|&u| u as f64 / total as f64));
            let value = f(&alpha);
            if value < best_value {
                best_value = value;
                best_units = units.to_vec();
            }
        });
        assert!(best_value.is_finite(), "grid stage found no lattice point");
        incumbent = Some((best_units, total, best_value));
    }
    incumbent.unwrap().2
}

/// Visit every integer vector with lo ≤ u ≤ hi (elementwise) and Σu = total.
fn enumerate_compositions(
    lo: &[usize],
    hi: &[usize],
    remaining: usize,
    idx: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    let n = lo.len();
    if idx == n - 1 {
        if remaining >= lo[idx] && remaining <= hi[idx] {
            current.push(remaining);
            visit(current);
            current.pop();
        }
        return;
    }
    let suffix_lo: usize = lo[idx + 1..].iter().sum();
    let suffix_hi: usize = hi[idx + 1..].iter().sum();
    let from = lo[idx].max(remaining.saturating_sub(suffix_hi));
    let to = hi[idx].min(remaining.saturating_sub(suffix_lo));
    if from > to {
        return;
    }
    for u in from..=to {
        current.push(u);
        enumerate_compositions(lo, hi, remaining - u, idx + 1, current, visit);
        current.pop();
    }
}

/// O(n²) Mann–Whitney statistic: P(target scores below anomaly) with ties
/// counting one half.
pub fn mann_whitney(scores: &[f64], labels: &[i8]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for i in 0..scores.len() {
        for j in 0..scores.len() {
            if labels[i] == 1 && labels[j] == -1 {
                pairs += 1.0;
                if scores[i] < scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}
