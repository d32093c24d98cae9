//! Dense symmetric-positive-definite linear algebra at desk scale: Cholesky
//! factorization, triangular solves, Schur complements, and squared
//! Mahalanobis distances.
//!
//! Vectors are plain `f64` slices. Matrices are square and row-major.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative asymmetry absorbed by silent symmetrization; larger asymmetry is
/// rejected as user error.
const SYMMETRY_REL_TOL: f64 = 1e-8;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from nested rows; every row must have length `rows.len()` and
    /// every entry must be finite.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidParameter {
                    field: "matrix",
                    reason: format!("row {i} has length {}, expected {dim}", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidParameter {
                        field: "matrix",
                        reason: format!("entry ({i},{j}) is not finite"),
                    });
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim, "matvec dimension");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Entrywise scaling.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Submatrix picked by row and column index lists (equal lengths).
    pub(crate) fn gather(&self, rows: &[usize], cols: &[usize]) -> Self {
        debug_assert_eq!(rows.len(), cols.len());
        let mut out = Self::zeros(rows.len());
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                out.set(r, c, self.get(i, j));
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

// Serializes as nested row arrays, matching the JSON document formats.
impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Self::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// Entries of `v` at the given indices, in index-list order.
pub(crate) fn gather_vec(v: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| v[i]).collect()
}

/// Lower-triangular Cholesky factor with its cached log-determinant.
#[derive(Debug, Clone)]
pub struct SPDFactor {
    lower: SquareMatrix,
    log_det: f64,
}

impl SPDFactor {
    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    /// The lower-triangular factor L with L·Lᵀ equal to the source matrix.
    pub fn lower(&self) -> &SquareMatrix {
        &self.lower
    }

    /// log |L·Lᵀ| = 2·Σᵢ log Lᵢᵢ.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// Solves L·y = b.
    // Indexed loops mirror the triangular recurrences.
    #[allow(clippy::needless_range_loop)]
    pub fn forward_sub(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "forward substitution dimension");
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.lower.get(i, k) * y[k];
            }
            y[i] = s / self.lower.get(i, i);
        }
        y
    }

    /// Solves Lᵀ·x = y.
    #[allow(clippy::needless_range_loop)]
    pub fn backward_sub(&self, y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(y.len(), n, "backward substitution dimension");
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.lower.get(k, i) * x[k];
            }
            x[i] = s / self.lower.get(i, i);
        }
        x
    }

    /// Product L·v.
    pub fn mul_lower(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "lower-factor product dimension");
        (0..n)
            .map(|i| (0..=i).map(|k| self.lower.get(i, k) * v[k]).sum())
            .collect()
    }
}

/// Cholesky factorization of a symmetric positive-definite matrix.
///
/// Asymmetry within [`SYMMETRY_REL_TOL`] of the largest entry is averaged
/// away before factoring; anything larger is rejected. No pivoting: inputs
/// are desk-scale and conditioning is enforced by the positivity check.
pub fn cholesky(m: &SquareMatrix) -> Result<SPDFactor> {
    let n = m.dim();
    let scale = m.max_abs();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m.get(i, j) - m.get(j, i)).abs());
        }
    }
    if worst > SYMMETRY_REL_TOL * scale {
        return Err(Error::NotSymmetric);
    }
    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m.get(i, j) + m.get(j, i));
            a.set(i, j, avg);
            a.set(j, i, avg);
        }
    }

    let mut lower = SquareMatrix::zeros(n);
    let mut log_det = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= lower.get(i, k) * lower.get(j, k);
            }
            if i == j {
                // Rejects non-positive, NaN, and infinite pivots.
                if !s.is_finite() || s <= 0.0 {
                    return Err(Error::NotPositiveDefinite);
                }
                let l = s.sqrt();
                lower.set(i, i, l);
                log_det += 2.0 * l.ln();
            } else {
                lower.set(i, j, s / lower.get(j, j));
            }
        }
    }
    Ok(SPDFactor { lower, log_det })
}

/// Solves (L·Lᵀ)·y = b.
pub fn solve_spd(f: &SPDFactor, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: b.len(),
        });
    }
    Ok(f.backward_sub(&f.forward_sub(b)))
}

/// Split of the coordinates {0..dim−1} into an observed block and a free
/// block. The observed block keeps caller order and may be empty
/// (conditioning on nothing is the identity); the free block is the
/// ascending complement and must be nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    dim: usize,
    block1: Vec<usize>,
    block2: Vec<usize>,
}

impl Partition {
    pub fn new(dim: usize, observed: &[usize]) -> Result<Self> {
        let mut taken = vec![false; dim];
        for &i in observed {
            if i >= dim {
                return Err(Error::InvalidPartition(format!(
                    "index {i} out of range for dimension {dim}"
                )));
            }
            if taken[i] {
                return Err(Error::InvalidPartition(format!("duplicate index {i}")));
            }
            taken[i] = true;
        }
        let block2: Vec<usize> = (0..dim).filter(|&i| !taken[i]).collect();
        if block2.is_empty() {
            return Err(Error::InvalidPartition(
                "free block is empty; at least one coordinate must remain".into(),
            ));
        }
        Ok(Self {
            dim,
            block1: observed.to_vec(),
            block2,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Observed coordinates, in construction order.
    pub fn block1(&self) -> &[usize] {
        &self.block1
    }

    /// Free coordinates, ascending.
    pub fn block2(&self) -> &[usize] {
        &self.block2
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.dim,
            });
        }
        Ok(())
    }
}

/// Schur complement of the observed block: Σ₂₂ − Σ₂₁·Σ₁₁⁻¹·Σ₁₂, itself
/// symmetric positive-definite. With an empty observed block this is Σ₂₂.
pub fn schur_complement(sigma: &SquareMatrix, part: &Partition) -> Result<SquareMatrix> {
    part.check_dim(sigma.dim())?;
    let b1 = part.block1();
    let b2 = part.block2();
    let mut s = sigma.gather(b2, b2);
    if b1.is_empty() {
        return Ok(s);
    }
    let f11 = cholesky(&sigma.gather(b1, b1))?;
    // Σ₁₁⁻¹·Σ₁₂, one free-block column at a time.
    let solved: Vec<Vec<f64>> = b2
        .iter()
        .map(|&j| {
            let col: Vec<f64> = b1.iter().map(|&i| sigma.get(i, j)).collect();
            solve_spd(&f11, &col)
        })
        .collect::<Result<_>>()?;
    for (r, &i) in b2.iter().enumerate() {
        let row: Vec<f64> = b1.iter().map(|&j| sigma.get(i, j)).collect();
        for (c, col) in solved.iter().enumerate() {
            let dot: f64 = row.iter().zip(col).map(|(a, b)| a * b).sum();
            s.set(r, c, s.get(r, c) - dot);
        }
    }
    Ok(s)
}

/// Squared Mahalanobis distance (x−μ)ᵀ·(L·Lᵀ)⁻¹·(x−μ), computed as the
/// squared norm of L⁻¹(x−μ). Nonnegative; zero exactly when x = μ.
pub fn mahalanobis_sq(x: &[f64], mu: &[f64], f: &SPDFactor) -> Result<f64> {
    if x.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: x.len(),
        });
    }
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        });
    }
    let diff: Vec<f64> = x.iter().zip(mu).map(|(a, b)| a - b).collect();
    let y = f.forward_sub(&diff);
    Ok(y.iter().map(|v| v * v).sum())
}
