//! Small dense matrices over either backend.
//!
//! Exact scalars use Gaussian elimination and congruence diagonalization;
//! floats go through nalgebra's SVD and symmetric eigendecomposition with a
//! threshold relative to the largest singular value or eigenvalue.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::scalar::{max_abs, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Inertia of a symmetric form, ordered as (null, positive, negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignatureTriple {
    pub n0: usize,
    pub nplus: usize,
    pub nminus: usize,
}

impl SignatureTriple {
    pub const fn new(n0: usize, nplus: usize, nminus: usize) -> Self {
        Self { n0, nplus, nminus }
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.n0, self.nplus, self.nminus]
    }
}

impl fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n0, self.nplus, self.nminus)
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.as_f64())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() {
                    acc += self[(i, k)].clone() * &other[(k, j)];
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += a.clone() * b;
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Entrywise comparison; exact equality on rationals.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| (a.clone() - b.clone()).negligible(scale, tol))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).as_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols && self.approx_eq(&self.transpose(), tol)
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.rows.min(self.cols) {
            acc += &self[(i, i)];
        }
        acc
    }

    /// Determinant by elimination with partial pivoting.
    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = pivot_row(&a, c, c) else {
                return S::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det = det * &piv;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let factor = a[(r, c)].clone() / piv.clone();
                for k in c..n {
                    let delta = factor.clone() * &a[(c, k)];
                    a[(r, k)] -= delta;
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan; `None` when a pivot vanishes (exactly, or
    /// below `1e-14` of the entry scale for floats).
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = pivot_row(&a, c, c)?;
            if a[(p, c)].negligible(scale, 1e-14) {
                return None;
            }
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a[(c, c)].clone();
            for k in 0..n {
                a[(c, k)] = a[(c, k)].clone() / piv.clone();
                inv[(c, k)] = inv[(c, k)].clone() / piv.clone();
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let factor = a[(r, c)].clone();
                for k in 0..n {
                    let da = factor.clone() * &a[(c, k)];
                    a[(r, k)] -= da;
                    let di = factor.clone() * &inv[(c, k)];
                    inv[(r, k)] -= di;
                }
            }
        }
        Some(inv)
    }

    /// Numerical rank. `tol` is relative to the largest singular value and
    /// is ignored by exact backends.
    pub fn rank(&self, tol: f64) -> usize {
        if S::EXACT {
            self.rref().1.len()
        } else {
            let m = to_nalgebra(self);
            let sv = m.singular_values();
            let smax = sv.iter().cloned().fold(0.0, f64::max);
            if smax == 0.0 {
                return 0;
            }
            sv.iter().filter(|s| **s > tol * smax).count()
        }
    }

    /// Basis of the right null space.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<S>> {
        if S::EXACT {
            let (r, pivots) = self.rref();
            let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
            free.iter()
                .map(|&f| {
                    let mut v = vec![S::zero(); self.cols];
                    v[f] = S::one();
                    for (row, &pc) in pivots.iter().enumerate() {
                        v[pc] = -r[(row, f)].clone();
                    }
                    v
                })
                .collect()
        } else {
            // Eigenvectors of M^T M with small eigenvalues span the kernel.
            let m = to_nalgebra(self);
            let gram = m.transpose() * &m;
            let eig = gram.symmetric_eigen();
            let emax = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
            // Eigenvalues of the Gram matrix are squared singular values.
            let thresh = if emax == 0.0 { 0.0 } else { (tol * emax.sqrt()).powi(2) };
            (0..self.cols)
                .filter(|&k| eig.eigenvalues[k].abs() <= thresh)
                .map(|k| eig.eigenvectors.column(k).iter().map(|x| S::real(*x)).collect())
                .collect()
        }
    }

    /// Reduced row echelon form and pivot columns. Exact backends only make
    /// sense here; floats use a fixed tiny pivot cut-off.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = pivot_row(&a, row, c) else {
                continue;
            };
            if a[(p, c)].negligible(scale, 1e-12) {
                continue;
            }
            a.swap_rows(p, row);
            let piv = a[(row, c)].clone();
            for k in 0..self.cols {
                a[(row, k)] = a[(row, k)].clone() / piv.clone();
            }
            for r in 0..self.rows {
                if r == row || a[(r, c)].is_zero() {
                    continue;
                }
                let factor = a[(r, c)].clone();
                for k in 0..self.cols {
                    let d = factor.clone() * &a[(row, k)];
                    a[(r, k)] -= d;
                }
            }
            pivots.push(c);
            row += 1;
        }
        (a, pivots)
    }

    /// Solve `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        let inv = self.inverse()?;
        Some(inv.mul_vec(b))
    }

    /// Inertia of a symmetric matrix as (null, positive, negative).
    ///
    /// Exact: symmetric Gaussian elimination (congruence). Floats: eigenvalues
    /// with `|lambda| <= tol * max|lambda|` counted as null.
    pub fn inertia(&self, tol: f64) -> SignatureTriple {
        assert_eq!(self.rows, self.cols, "inertia of non-square matrix");
        if S::EXACT {
            congruence_inertia(self.clone())
        } else {
            let eig = to_nalgebra(self).symmetric_eigen();
            let emax = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
            let mut sig = SignatureTriple::new(0, 0, 0);
            for &l in eig.eigenvalues.iter() {
                if emax == 0.0 || l.abs() <= tol * emax {
                    sig.n0 += 1;
                } else if l > 0.0 {
                    sig.nplus += 1;
                } else {
                    sig.nminus += 1;
                }
            }
            sig
        }
    }

    /// Leading principal minors, used for Sylvester's criterion.
    pub fn leading_minors(&self) -> Vec<S> {
        (1..=self.rows)
            .map(|k| Self::from_fn(k, k, |i, j| self[(i, j)].clone()).det())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }
}

/// Largest-magnitude pivot at or below `start` in column `c`; first nonzero
/// for exact backends (cheaper, and any nonzero pivot is exact).
fn pivot_row<S: Scalar>(a: &Matrix<S>, start: usize, c: usize) -> Option<usize> {
    if S::EXACT {
        (start..a.rows).find(|&r| !a[(r, c)].is_zero())
    } else {
        let best = (start..a.rows).max_by(|&x, &y| a[(x, c)].as_f64().abs().total_cmp(&a[(y, c)].as_f64().abs()))?;
        (!a[(best, c)].is_zero()).then_some(best)
    }
}

fn to_nalgebra<S: Scalar>(m: &Matrix<S>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| m[(i, j)].as_f64())
}

fn congruence_inertia<S: Scalar>(mut a: Matrix<S>) -> SignatureTriple {
    let n = a.rows;
    let mut sig = SignatureTriple::new(0, 0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // Find a nonzero diagonal pivot; otherwise manufacture one from an
        // off-diagonal entry via e_i <- e_i + e_j.
        let diag = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[(i, j)].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else {
                    sig.n0 += active.len();
                    break;
                };
                for k in 0..n {
                    let v = a[(j, k)].clone();
                    a[(i, k)] += v;
                }
                for k in 0..n {
                    let v = a[(k, j)].clone();
                    a[(k, i)] += v;
                }
                i
            }
        };
        let piv = a[(p, p)].clone();
        if piv.is_positive() {
            sig.nplus += 1;
        } else {
            sig.nminus += 1;
        }
        active.retain(|&i| i != p);
        for &r in &active {
            if a[(r, p)].is_zero() {
                continue;
            }
            let factor = a[(r, p)].clone() / piv.clone();
            for &c in &active {
                let d = factor.clone() * &a[(p, c)];
                a[(r, c)] -= d;
            }
            a[(r, p)] = S::zero();
        }
        for &c in &active {
            a[(p, c)] = S::zero();
        }
    }
    sig
}
