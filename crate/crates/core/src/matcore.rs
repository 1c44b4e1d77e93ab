//! Dense real-matrix kernels.
//!
//! Row-major storage, `data[i * cols + j] = M[i, j]`. Everything else in the
//! crate is built on these routines: the unpivoted LDU factorization whose
//! elimination order carries chordal structure, a partially pivoted LU used
//! for inversion and log-determinants, and singular-value based rank.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A pivot is treated as zero when it is below this fraction of the largest
/// absolute entry of the matrix being factored.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major data, rejecting empty shapes,
    /// length mismatches and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimensions(format!("{rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidDimensions(format!(
                "{rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// # Panics
    /// Panics on ragged or empty input, or non-finite entries.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        assert!(!rows.is_empty(), "no rows");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(rows.len(), cols, data).expect("valid matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.cols, other.cols),
                got: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0.0;
                for k in 0..self.cols {
                    acc += self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entrywise difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Principal submatrix on `idx`.
    pub fn principal(&self, idx: &[usize]) -> Self {
        self.submatrix(idx, idx)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    /// # Panics
    /// Panics on incompatible shapes; use [`DenseMatrix::matmul`] to get an error instead.
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs).expect("incompatible shapes")
    }
}

fn zip_with(a: &DenseMatrix, b: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> DenseMatrix {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "shape mismatch {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
    DenseMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;

    fn neg(self) -> DenseMatrix {
        self.scale(-1.0)
    }
}

/// `M = L·D·U` with unit-triangular `L`, `U` and diagonal `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct LduFactors {
    pub l: DenseMatrix,
    pub d: DenseMatrix,
    pub u: DenseMatrix,
}

impl LduFactors {
    pub fn pivots(&self) -> Vec<f64> {
        self.d.diagonal()
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        &(&self.l * &self.d) * &self.u
    }
}

/// Gaussian elimination in the given row/column order, without pivoting.
///
/// Row exchanges would destroy the elimination order, so a vanishing pivot is
/// reported as [`Error::SingularPivot`] rather than worked around.
pub fn ldu_factor(m: &DenseMatrix) -> Result<LduFactors> {
    let n = m.require_square()?;
    let threshold = PIVOT_TOL * m.max_abs();
    let mut work = m.clone();
    let mut l = DenseMatrix::identity(n);
    let mut u = DenseMatrix::identity(n);
    let mut d = DenseMatrix::zeros(n, n);
    for k in 0..n {
        let pivot = work[(k, k)];
        if pivot.abs() <= threshold {
            return Err(Error::SingularPivot(k));
        }
        d[(k, k)] = pivot;
        for i in k + 1..n {
            l[(i, k)] = work[(i, k)] / pivot;
            u[(k, i)] = work[(k, i)] / pivot;
        }
        for i in k + 1..n {
            let lik = work[(i, k)] / pivot;
            if lik == 0.0 {
                continue;
            }
            for j in k + 1..n {
                work[(i, j)] -= lik * work[(k, j)];
            }
        }
    }
    Ok(LduFactors { l, d, u })
}

/// Partially pivoted LU, packed: unit-lower multipliers below the diagonal,
/// `U` on and above it.
struct PivotedLu {
    lu: DenseMatrix,
    perm: Vec<usize>,
    sign: f64,
}

fn pivoted_lu(m: &DenseMatrix) -> Result<PivotedLu> {
    let n = m.require_square()?;
    let threshold = PIVOT_TOL * m.max_abs();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= threshold {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                lu[(i, j)] -= f * lu[(k, j)];
            }
        }
    }
    Ok(PivotedLu { lu, perm, sign })
}

impl PivotedLu {
    fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.perm.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let acc: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= acc;
        }
        for i in (0..n).rev() {
            let acc: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - acc) / self.lu[(i, i)];
        }
        b.copy_from_slice(&x);
    }
}

fn norm_one(m: &DenseMatrix) -> f64 {
    (0..m.cols)
        .map(|j| (0..m.rows).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse by pivoted LU. Fails with [`Error::Singular`] on a vanishing pivot
/// or when the 1-norm condition number exceeds `1 / PIVOT_TOL`.
pub fn invert(m: &DenseMatrix) -> Result<DenseMatrix> {
    let lu = pivoted_lu(m)?;
    let n = m.rows;
    let mut inv = DenseMatrix::zeros(n, n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = 0.0);
        col[j] = 1.0;
        lu.solve_in_place(&mut col);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    if norm_one(m) * norm_one(&inv) > 1.0 / PIVOT_TOL {
        return Err(Error::Singular);
    }
    Ok(inv)
}

/// Solves `M x = b`.
pub fn solve(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: (m.rows, 1),
            got: (b.len(), 1),
        });
    }
    let lu = pivoted_lu(m)?;
    let mut x = b.to_vec();
    lu.solve_in_place(&mut x);
    Ok(x)
}

/// `log det M` as the sum of log pivot magnitudes; the determinant must be positive.
pub fn logdet(m: &DenseMatrix) -> Result<f64> {
    let lu = pivoted_lu(m).map_err(|e| match e {
        Error::Singular => Error::NonPositiveDeterminant,
        other => other,
    })?;
    let mut sign = lu.sign;
    let mut sum = 0.0;
    for k in 0..m.rows {
        let p = lu.lu[(k, k)];
        if p < 0.0 {
            sign = -sign;
        }
        sum += p.abs().ln();
    }
    if sign > 0.0 {
        Ok(sum)
    } else {
        Err(Error::NonPositiveDeterminant)
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let na = nalgebra::DMatrix::from_row_slice(m.rows, m.cols, &m.data);
    let mut sv: Vec<f64> = na.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `tol` times the largest one.
pub fn numerical_rank(m: &DenseMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * largest).count()
}
