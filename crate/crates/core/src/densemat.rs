//! Dense symmetric matrix kernels: Cholesky factorization and inversion,
//! the Perron eigenpair of a nonnegative matrix, the smallest eigenvalue of a
//! symmetric matrix, and the doubly-nonnegative test.
//!
//! Storage is row-major `Vec<f64>`. Sizes of interest are a few hundred rows
//! at most, so every kernel is a straightforward O(n³) loop.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{is_connected, UGraph};
use crate::tol::Tolerances;

/// General real square matrix. Used for parsed input that has not yet been
/// shown to be symmetric, and for non-symmetric fixtures.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    /// `max |a_ij - a_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(DenseMatrix {
            n: self.n,
            data: matmul_raw(self.n, &self.data, &other.data),
        })
    }

    /// Gauss-Jordan inversion with partial pivoting. Works for any
    /// nonsingular matrix, symmetric or not.
    pub fn lu_invert(&self) -> Result<DenseMatrix> {
        let n = self.n;
        let mut work = self.data.clone();
        let mut inv = DenseMatrix::identity(n).data;
        let scale = self.max_abs();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&a, &b| work[a * n + col].abs().total_cmp(&work[b * n + col].abs()))
                .expect("non-empty pivot range");
            let pivot = work[pivot_row * n + col];
            if pivot.abs() <= f64::EPSILON * scale * n as f64 || !pivot.is_finite() {
                return Err(Error::Singular { column: col });
            }
            if pivot_row != col {
                for k in 0..n {
                    work.swap(pivot_row * n + k, col * n + k);
                    inv.swap(pivot_row * n + k, col * n + k);
                }
            }
            for k in 0..n {
                work[col * n + k] /= pivot;
                inv[col * n + k] /= pivot;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = work[row * n + col];
                if factor == 0.0 {
                    continue;
                }
                for k in 0..n {
                    work[row * n + k] -= factor * work[col * n + k];
                    inv[row * n + k] -= factor * inv[col * n + k];
                }
            }
        }
        Ok(DenseMatrix { n, data: inv })
    }
}

/// Dense real symmetric matrix. Symmetry holds exactly for the stored data.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Accepts `a` if its asymmetry is at most `1e-12 * max|a_ij|` and averages
    /// the two triangles; rejects it otherwise.
    pub fn from_dense(a: DenseMatrix) -> Result<Self> {
        let allowed = 1e-12 * a.max_abs();
        let asymmetry = a.max_asymmetry();
        if asymmetry > allowed || asymmetry.is_nan() {
            return Err(Error::Asymmetric { asymmetry, allowed });
        }
        let DenseMatrix { n, mut data } = a;
        for i in 0..n {
            for j in i + 1..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_dense(DenseMatrix::from_rows(rows)?)
    }

    /// Builds a matrix from the upper triangle `f(i, j)`, `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                data[i * n + j] = x;
                data[j * n + i] = x;
            }
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: self.data.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// Principal submatrix on `indices` (in the given order).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |i, j| self.get(indices[i], indices[j]))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &SymMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        DenseMatrix {
            n: self.n,
            data: matmul_raw(self.n, &self.data, &other.data),
        }
    }

    /// `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn max_abs(data: &[f64]) -> f64 {
    data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn matmul_raw(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        Self::factor_with(a, &Tolerances::default())
    }

    pub fn factor_with(a: &SymMatrix, tol: &Tolerances) -> Result<Self> {
        let max_diag = (0..a.n).map(|i| a.get(i, i)).fold(0.0f64, f64::max);
        let floor = tol.pivot_rel * max_diag;
        match cholesky_raw(a, 0.0, floor) {
            Ok(lower) => Ok(Self { n: a.n, lower }),
            Err((row, pivot)) => Err(Error::NotPositiveDefinite { row, pivot, floor }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `L[i][j]`, zero above the diagonal.
    pub fn l(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.n + j]
    }

    /// `A⁻¹ = L⁻ᵀ L⁻¹`.
    pub fn inverse(&self) -> SymMatrix {
        let n = self.n;
        let l = &self.lower;
        // Column-by-column forward substitution for L⁻¹.
        let mut linv = vec![0.0; n * n];
        for j in 0..n {
            linv[j * n + j] = 1.0 / l[j * n + j];
            for i in j + 1..n {
                let mut s = 0.0;
                for k in j..i {
                    s += l[i * n + k] * linv[k * n + j];
                }
                linv[i * n + j] = -s / l[i * n + i];
            }
        }
        SymMatrix::from_fn(n, |i, j| {
            (j..n).map(|k| linv[k * n + i] * linv[k * n + j]).sum()
        })
    }
}

/// Cholesky of `A - shift·I`. On failure returns the offending row and pivot.
fn cholesky_raw(a: &SymMatrix, shift: f64, floor: f64) -> Result<Vec<f64>, (usize, f64)> {
    let n = a.n;
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j) - shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= floor || d.is_nan() {
            return Err((j, d));
        }
        let ljj = d.sqrt();
        l[j * n + j] = ljj;
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(l)
}

/// Inverse of a symmetric positive definite matrix via its Cholesky factor.
pub fn cholesky_invert(a: &SymMatrix) -> Result<SymMatrix> {
    cholesky_invert_with(a, &Tolerances::default())
}

pub fn cholesky_invert_with(a: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
    Ok(Cholesky::factor_with(a, tol)?.inverse())
}

/// `max |A·X − I|`.
pub fn inversion_residual(a: &SymMatrix, x: &SymMatrix) -> f64 {
    let prod = a.matmul(x);
    let n = a.n;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod.get(i, j) - target).abs());
        }
    }
    worst
}

/// Eigenvalue with a unit eigenvector whose first nonzero component is positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Dominant eigenpair of a nonnegative irreducible matrix with positive
/// diagonal, by power iteration from the all-ones vector.
pub fn perron_eigenpair(a: &SymMatrix) -> Result<EigenPair> {
    perron_eigenpair_with(a, &Tolerances::default())
}

pub fn perron_eigenpair_with(a: &SymMatrix, tol: &Tolerances) -> Result<EigenPair> {
    let n = a.n;
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut residual = f64::INFINITY;
    for _ in 0..tol.max_iters {
        let w = a.mul_vec(&v);
        let lambda: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        residual = norm(&w.iter().zip(&v).map(|(wi, vi)| wi - lambda * vi).collect::<Vec<_>>());
        if residual <= tol.eig * lambda.abs() {
            return Ok(EigenPair {
                value: lambda,
                vector: canonical_sign(v),
            });
        }
        let wn = norm(&w);
        if wn == 0.0 || !wn.is_finite() {
            break;
        }
        v = w.into_iter().map(|x| x / wn).collect();
    }
    Err(Error::NotConverged {
        iterations: tol.max_iters,
        residual,
    })
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn canonical_sign(mut v: Vec<f64>) -> Vec<f64> {
    if let Some(first) = v.iter().copied().find(|x| *x != 0.0) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    v
}

/// Smallest eigenvalue of a symmetric matrix by bisection on the success of
/// an unpivoted Cholesky factorization of `A − t·I`.
pub fn min_eigenvalue(a: &SymMatrix) -> Result<f64> {
    min_eigenvalue_with(a, &Tolerances::default())
}

pub fn min_eigenvalue_with(a: &SymMatrix, tol: &Tolerances) -> Result<f64> {
    let n = a.n;
    let scale = a.max_abs();
    if !scale.is_finite() {
        return Err(Error::NotConverged {
            iterations: 0,
            residual: f64::NAN,
        });
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    // Gershgorin lower bound, and the smallest diagonal as upper bound.
    let mut lo = f64::INFINITY;
    let mut hi = f64::INFINITY;
    for i in 0..n {
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| a.get(i, j).abs()).sum();
        lo = lo.min(a.get(i, i) - radius);
        hi = hi.min(a.get(i, i));
    }
    let resolution = 8.0 * f64::EPSILON * scale * n as f64;
    let target = 0.01 * tol.eig;
    for _ in 0..tol.max_iters {
        if hi - lo <= target * lo.abs().max(hi.abs()) || hi - lo <= resolution {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if cholesky_raw(a, mid, 0.0).is_ok() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NotConverged {
        iterations: tol.max_iters,
        residual: hi - lo,
    })
}

/// Outcome of the doubly-nonnegative test for an invertible irreducible
/// candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DnVerdict {
    pub is_symmetric: bool,
    pub is_entrywise_nonneg: bool,
    pub is_positive_definite: bool,
    pub is_irreducible: bool,
    pub min_eigenvalue: f64,
    /// Most negative entry, or `0.0` if there is none.
    pub worst_negative_entry: f64,
}

impl DnVerdict {
    pub fn passes(&self) -> bool {
        self.is_symmetric && self.is_entrywise_nonneg && self.is_positive_definite && self.is_irreducible
    }
}

pub fn verify_doubly_nonnegative(a: &SymMatrix) -> DnVerdict {
    verify_doubly_nonnegative_with(a, &Tolerances::default())
}

pub fn verify_doubly_nonnegative_with(a: &SymMatrix, tol: &Tolerances) -> DnVerdict {
    let zero = tol.zero_abs(a.max_abs());
    let worst_negative_entry = a.min_entry().min(0.0);
    DnVerdict {
        is_symmetric: a.to_dense().max_asymmetry() == 0.0,
        is_entrywise_nonneg: worst_negative_entry >= -zero,
        is_positive_definite: Cholesky::factor_with(a, tol).is_ok(),
        is_irreducible: is_connected(&matrix_graph_with(a, tol)).connected,
        min_eigenvalue: min_eigenvalue_with(a, tol).unwrap_or(f64::NAN),
        worst_negative_entry,
    }
}

/// Doubly-nonnegative test for raw square input. An asymmetric matrix fails
/// `is_symmetric` and `is_positive_definite`; the remaining fields describe
/// its symmetric part.
pub fn verify_dense(a: &DenseMatrix, tol: &Tolerances) -> DnVerdict {
    match SymMatrix::from_dense(a.clone()) {
        Ok(sym) => verify_doubly_nonnegative_with(&sym, tol),
        Err(_) => {
            let sym_part = SymMatrix::from_fn(a.n, |i, j| 0.5 * (a.get(i, j) + a.get(j, i)));
            let zero = tol.zero_abs(a.max_abs());
            let worst_negative_entry = a.data.iter().copied().fold(0.0, f64::min);
            DnVerdict {
                is_symmetric: false,
                is_entrywise_nonneg: worst_negative_entry >= -zero,
                is_positive_definite: false,
                is_irreducible: is_connected(&matrix_graph_with(&sym_part, tol)).connected,
                min_eigenvalue: min_eigenvalue_with(&sym_part, tol).unwrap_or(f64::NAN),
                worst_negative_entry,
            }
        }
    }
}

/// Graph with an edge `{i, j}` wherever `a_ij` is significantly positive.
pub fn matrix_graph(a: &SymMatrix) -> UGraph {
    matrix_graph_with(a, &Tolerances::default())
}

pub fn matrix_graph_with(a: &SymMatrix, tol: &Tolerances) -> UGraph {
    let zero = tol.zero_abs(a.max_abs());
    let mut g = UGraph::new(a.n);
    for i in 0..a.n {
        for j in i + 1..a.n {
            if a.get(i, j) > zero {
                g.add_edge(i, j).expect("indices in range");
            }
        }
    }
    g
}
