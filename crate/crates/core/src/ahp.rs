//! Analytic hierarchy process primitives.
//!
//! Alternatives and criteria are compared through positive reciprocal
//! matrices. When every entry is a ratio of one score vector the matrix is
//! ideally consistent (`M[i][j] == M[i][s] * M[s][j]`), every column
//! normalizes to the same vector, and that vector is just the normalized
//! score vector. [`weights_from_scores`] and [`criteria_weights`] use those
//! closed forms directly. The full-matrix route ([`matrix_from_scores`] then
//! [`normalize_weights`]) is kept for checking consistency and for hand-filled
//! matrices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for algebraic identities (reciprocity, unit sums).
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
/// Eigenvalue change below which power iteration stops.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
pub const EIGEN_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AhpError {
    #[error("score vector is empty")]
    EmptyScores,
    #[error("score {value} at position {index} is not strictly positive")]
    NonPositiveScore { index: usize, value: f64 },
    #[error("criterion `{id}` has non-positive preference {value}")]
    NonPositivePreference { id: String, value: f64 },
    #[error("first criterion `{id}` must have preference 1, found {value}")]
    FirstPreferenceNotUnit { id: String, value: f64 },
    #[error("no criteria given")]
    NoCriteria,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid pairwise matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("consistency index needs k >= 2, found k = {0}")]
    DimensionTooSmall(usize),
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
}

/// Whether a larger raw score makes an alternative less (cost) or more
/// (benefit) preferable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Cost,
    Benefit,
}

/// Strictly positive per-alternative quantities. Zero-valued raw counts must
/// be offset by the caller before construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(values: Vec<f64>) -> Result<Self, AhpError> {
        if values.is_empty() {
            return Err(AhpError::EmptyScores);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(AhpError::NonPositiveScore { index, value });
        }
        Ok(Self(values))
    }

    pub fn from_counts(counts: &[usize]) -> Result<Self, AhpError> {
        Self::new(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Non-negative priorities summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Accepts values whose sum is within `1e-9` of one; inputs built by long
    /// accumulations may drift past the tighter identity tolerance.
    pub fn new(values: Vec<f64>) -> Result<Self, AhpError> {
        if values.is_empty() {
            return Err(AhpError::InvalidWeights("empty".into()));
        }
        if values.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(AhpError::InvalidWeights(format!(
                "negative or non-finite entry in {values:?}"
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(AhpError::InvalidWeights(format!("sum is {sum}")));
        }
        Ok(Self(values))
    }

    fn normalized(values: Vec<f64>) -> Self {
        let total: f64 = values.iter().sum();
        Self(values.into_iter().map(|v| v / total).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A `k × k` positive reciprocal matrix; `get(i, j)` is how many times factor
/// `i` is more significant than factor `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairwiseMatrix {
    k: usize,
    entries: Vec<f64>,
}

impl PairwiseMatrix {
    /// Validates positivity, a unit diagonal and reciprocity within
    /// [`IDENTITY_TOLERANCE`] (relative).
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, AhpError> {
        let k = rows.len();
        if k == 0 {
            return Err(AhpError::InvalidMatrix("empty".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(AhpError::DimensionMismatch {
                expected: k,
                found: bad.len(),
            });
        }
        let m = Self {
            k,
            entries: rows.into_iter().flatten().collect(),
        };
        for i in 0..k {
            if m.get(i, i) != 1.0 {
                return Err(AhpError::InvalidMatrix(format!(
                    "diagonal entry ({i},{i}) is {}",
                    m.get(i, i)
                )));
            }
            for j in 0..k {
                let v = m.get(i, j);
                if !(v.is_finite() && v > 0.0) {
                    return Err(AhpError::InvalidMatrix(format!(
                        "entry ({i},{j}) = {v} is not positive"
                    )));
                }
                if (v * m.get(j, i) - 1.0).abs() > IDENTITY_TOLERANCE {
                    return Err(AhpError::InvalidMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) are not reciprocal"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Completes a matrix from its first row, `M[i][j] = M[0][j] / M[0][i]`.
    /// The result is ideally consistent.
    pub fn from_first_row(first_row: &[f64]) -> Result<Self, AhpError> {
        let k = first_row.len();
        if k == 0 {
            return Err(AhpError::InvalidMatrix("empty".into()));
        }
        if first_row[0] != 1.0 {
            return Err(AhpError::InvalidMatrix(
                "first row must start with 1".into(),
            ));
        }
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                entries.push(if i == j {
                    1.0
                } else {
                    first_row[j] / first_row[i]
                });
            }
        }
        let m = Self { k, entries };
        m.check_positive()?;
        Ok(m)
    }

    fn check_positive(&self) -> Result<(), AhpError> {
        match self
            .entries
            .iter()
            .position(|v| !(v.is_finite() && *v > 0.0))
        {
            Some(p) => Err(AhpError::InvalidMatrix(format!(
                "entry ({},{}) is not positive",
                p / self.k,
                p % self.k
            ))),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.k + j]
    }

    /// Column `j` divided by its sum.
    pub fn normalized_column(&self, j: usize) -> Vec<f64> {
        let total: f64 = (0..self.k).map(|i| self.get(i, j)).sum();
        (0..self.k).map(|i| self.get(i, j) / total).collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.k).map(<[f64]>::to_vec).collect()
    }
}

/// Ratio matrix of a score vector: `v[j] / v[i]` for cost scores (smaller is
/// better), `v[i] / v[j]` for benefit scores.
pub fn matrix_from_scores(
    scores: &ScoreVector,
    orientation: Orientation,
) -> Result<PairwiseMatrix, AhpError> {
    let v = scores.values();
    if v.is_empty() {
        return Err(AhpError::EmptyScores);
    }
    let k = v.len();
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            entries.push(match (i == j, orientation) {
                (true, _) => 1.0,
                (false, Orientation::Cost) => v[j] / v[i],
                (false, Orientation::Benefit) => v[i] / v[j],
            });
        }
    }
    Ok(PairwiseMatrix { k, entries })
}

/// Normalizes each column to sum to one, then averages each row.
pub fn normalize_weights(matrix: &PairwiseMatrix) -> WeightVector {
    let k = matrix.dim();
    let mut acc = vec![0.0; k];
    for j in 0..k {
        for (a, c) in acc.iter_mut().zip(matrix.normalized_column(j)) {
            *a += c;
        }
    }
    WeightVector::normalized(acc.into_iter().map(|s| s / k as f64).collect())
}

/// Closed-form priorities of an ideally consistent ratio matrix: the
/// normalized reciprocal scores (cost) or normalized scores (benefit).
pub fn weights_from_scores(
    scores: &ScoreVector,
    orientation: Orientation,
) -> Result<WeightVector, AhpError> {
    if scores.is_empty() {
        return Err(AhpError::EmptyScores);
    }
    let raw: Vec<f64> = match orientation {
        Orientation::Cost => scores.values().iter().map(|v| 1.0 / v).collect(),
        Orientation::Benefit => scores.values().to_vec(),
    };
    Ok(WeightVector::normalized(raw))
}

/// One criterion at the criteria level. `first_row_preference` is the
/// criteria matrix entry comparing the first criterion against this one, so
/// the first criterion itself always carries 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionSpec {
    pub id: String,
    pub orientation: Orientation,
    pub first_row_preference: f64,
}

impl CriterionSpec {
    pub fn new(id: impl Into<String>, orientation: Orientation, first_row_preference: f64) -> Self {
        Self {
            id: id.into(),
            orientation,
            first_row_preference,
        }
    }
}

fn check_specs(specs: &[CriterionSpec]) -> Result<(), AhpError> {
    let first = specs.first().ok_or(AhpError::NoCriteria)?;
    if let Some(bad) = specs
        .iter()
        .find(|c| !(c.first_row_preference.is_finite() && c.first_row_preference > 0.0))
    {
        return Err(AhpError::NonPositivePreference {
            id: bad.id.clone(),
            value: bad.first_row_preference,
        });
    }
    if first.first_row_preference != 1.0 {
        return Err(AhpError::FirstPreferenceNotUnit {
            id: first.id.clone(),
            value: first.first_row_preference,
        });
    }
    Ok(())
}

/// Criteria matrix filled from its first row (see [`PairwiseMatrix::from_first_row`]).
pub fn criteria_matrix(specs: &[CriterionSpec]) -> Result<PairwiseMatrix, AhpError> {
    check_specs(specs)?;
    let row: Vec<f64> = specs.iter().map(|c| c.first_row_preference).collect();
    PairwiseMatrix::from_first_row(&row)
}

/// Criteria-level weights from first-row preferences `t`:
/// `w[i] = (1 / t[i]) / Σ (1 / t[s])`, the normalized first column of the
/// completed criteria matrix.
pub fn criteria_weights(specs: &[CriterionSpec]) -> Result<WeightVector, AhpError> {
    check_specs(specs)?;
    Ok(WeightVector::normalized(
        specs.iter().map(|c| 1.0 / c.first_row_preference).collect(),
    ))
}

/// True iff `|M[i][s]·M[s][j] − M[i][j]| ≤ tol·M[i][j]` for every triple.
pub fn ideal_consistency_check(matrix: &PairwiseMatrix, tol: f64) -> bool {
    let k = matrix.dim();
    (0..k).all(|i| {
        (0..k).all(|s| {
            (0..k).all(|j| {
                let direct = matrix.get(i, j);
                (matrix.get(i, s) * matrix.get(s, j) - direct).abs() <= tol * direct
            })
        })
    })
}

/// Principal eigenvalue by power iteration from the uniform vector.
pub fn principal_eigenvalue(matrix: &PairwiseMatrix) -> Result<f64, AhpError> {
    let k = matrix.dim();
    let mut x = vec![1.0 / k as f64; k];
    let mut lambda = f64::NAN;
    for _ in 0..EIGEN_MAX_ITERATIONS {
        let y: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| matrix.get(i, j) * x[j]).sum())
            .collect();
        // x sums to one, so the growth factor is the sum of y.
        let next: f64 = y.iter().sum();
        x = y.into_iter().map(|v| v / next).collect();
        if (next - lambda).abs() < EIGEN_TOLERANCE {
            return Ok(next);
        }
        lambda = next;
    }
    Err(AhpError::NoConvergence(EIGEN_MAX_ITERATIONS))
}

/// `(λ_max − k) / (k − 1)`; zero (up to rounding) for ideally consistent
/// matrices and positive otherwise. A diagnostic only: no threshold applies.
pub fn consistency_index(matrix: &PairwiseMatrix) -> Result<f64, AhpError> {
    let k = matrix.dim();
    if k < 2 {
        return Err(AhpError::DimensionTooSmall(k));
    }
    let lambda = principal_eigenvalue(matrix)?;
    Ok((lambda - k as f64) / (k as f64 - 1.0))
}

/// Weighted sum of per-criterion alternative weights,
/// `score[i] = Σ_c criteria[c] · alternatives[c][i]`, rescaled to sum to one.
pub fn combine(
    criteria: &WeightVector,
    alternatives: &[WeightVector],
) -> Result<WeightVector, AhpError> {
    if alternatives.len() != criteria.len() {
        return Err(AhpError::DimensionMismatch {
            expected: criteria.len(),
            found: alternatives.len(),
        });
    }
    let k = alternatives.first().map_or(0, WeightVector::len);
    if let Some(bad) = alternatives.iter().find(|a| a.len() != k) {
        return Err(AhpError::DimensionMismatch {
            expected: k,
            found: bad.len(),
        });
    }
    let mut scores = vec![0.0; k];
    for (w, alt) in criteria.values().iter().zip(alternatives) {
        for (s, a) in scores.iter_mut().zip(alt.values()) {
            *s += w * a;
        }
    }
    // Rounding can push the sum (and a lone alternative) a few ulps past one.
    Ok(WeightVector::normalized(scores))
}
