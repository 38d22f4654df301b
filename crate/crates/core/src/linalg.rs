//! Small dense symmetric matrices.
//!
//! `SymMatrix` keeps its entries exactly symmetric: every constructor either
//! checks symmetry or mirrors the lower triangle. General square products
//! (which need not be symmetric) use the plain [`Matrix`] alias.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn zeros(m: usize) -> Self {
        SymMatrix(Matrix::zeros(m, m))
    }

    pub fn identity(m: usize) -> Self {
        SymMatrix(Matrix::identity(m, m))
    }

    /// 1×1 matrix holding `x`.
    pub fn scalar(x: f64) -> Self {
        SymMatrix(Matrix::from_element(1, 1, x))
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        SymMatrix(Matrix::from_diagonal(&Vector::from_column_slice(entries)))
    }

    /// Builds from rows; entries must be exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::invalid("matrix must have at least one row"));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::invalid(format!("matrix must be square ({m} rows)")));
        }
        let mat = Matrix::from_fn(m, m, |i, j| rows[i][j]);
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        for i in 0..m {
            for j in 0..i {
                if mat[(i, j)] != mat[(j, i)] {
                    return Err(Error::invalid(format!(
                        "matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(SymMatrix(mat))
    }

    /// Builds from the lower triangle `f(i, j)`, `j <= i`.
    pub fn from_lower(m: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut mat = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = f(i, j);
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
        SymMatrix(mat)
    }

    /// Symmetric part `(M + Mᵀ)/2` of a square matrix.
    pub fn symmetrize(m: &Matrix) -> Self {
        let n = m.nrows();
        Self::from_lower(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    /// Accepts `m` if its asymmetry is within `tol` relative to its largest entry.
    pub fn try_from_matrix(m: &Matrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid("matrix must be square"));
        }
        let asym = asymmetry(m);
        let scale = max_abs(m).max(f64::MIN_POSITIVE);
        if asym > tol * scale {
            return Err(Error::invalid(format!(
                "matrix is not symmetric (asymmetry {asym:e})"
            )));
        }
        Ok(Self::symmetrize(m))
    }

    pub fn rank(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let m = self.rank();
        (0..m).map(|i| (0..m).map(|j| self.0[(i, j)]).collect()).collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        SymMatrix(&self.0 * c)
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        SymMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &SymMatrix) -> Self {
        SymMatrix(&self.0 - &other.0)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        quad_form(&self.0, v)
    }

    /// Cholesky factor `L` with `M = L Lᵀ`.
    pub fn cholesky(&self) -> Result<Cholesky> {
        let m = self.rank();
        let a = &self.0;
        let mut l = Matrix::zeros(m, m);
        for j in 0..m {
            let mut d = a[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::SingularMatrix { minor: j + 1 });
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in j + 1..m {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Cholesky { l })
    }

    pub fn is_spd(&self) -> bool {
        self.cholesky().is_ok()
    }

    /// Inverse of a symmetric positive definite matrix.
    pub fn spd_inverse(&self) -> Result<SymMatrix> {
        let chol = self.cholesky()?;
        let inv = chol.solve(&Matrix::identity(self.rank(), self.rank()));
        Ok(SymMatrix::symmetrize(&inv))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Spectral condition number; infinite when the matrix is singular.
    pub fn condition_number(&self) -> f64 {
        let ev = self.eigenvalues();
        let lo = ev.iter().fold(f64::INFINITY, |a, &b| a.min(b.abs()));
        let hi = ev.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SymMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Lower-triangular Cholesky factor.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    pub fn factor(&self) -> &Matrix {
        &self.l
    }

    /// Solves `L Lᵀ X = B` column by column.
    pub fn solve(&self, b: &Matrix) -> Matrix {
        let mut x = b.clone();
        for c in 0..b.ncols() {
            let mut col: Vec<f64> = (0..b.nrows()).map(|r| b[(r, c)]).collect();
            self.solve_in_place(&mut col);
            for (r, v) in col.into_iter().enumerate() {
                x[(r, c)] = v;
            }
        }
        x
    }

    pub fn solve_vector(&self, b: &Vector) -> Vector {
        let mut col: Vec<f64> = b.iter().copied().collect();
        self.solve_in_place(&mut col);
        Vector::from_vec(col)
    }

    /// Solves `X L Lᵀ = B`, i.e. `X = B M⁻¹`.
    pub fn solve_right(&self, b: &Matrix) -> Matrix {
        self.solve(&b.transpose()).transpose()
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let l = &self.l;
        let m = x.len();
        for i in 0..m {
            let mut s = x[i];
            for k in 0..i {
                s -= l[(i, k)] * x[k];
            }
            x[i] = s / l[(i, i)];
        }
        for i in (0..m).rev() {
            let mut s = x[i];
            for k in i + 1..m {
                s -= l[(k, i)] * x[k];
            }
            x[i] = s / l[(i, i)];
        }
    }
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |a, &b| a.max(b.abs()))
}

pub fn asymmetry(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn quad_form(m: &Matrix, v: &[f64]) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += m[(i, j)] * v[j];
        }
        acc += v[i] * row;
    }
    acc
}

/// `acc += a * b` without allocating; loops run in a fixed order.
pub fn mul_add_into(acc: &mut Matrix, a: &Matrix, b: &Matrix) {
    let (r, k, c) = (a.nrows(), a.ncols(), b.ncols());
    for i in 0..r {
        for j in 0..c {
            let mut s = 0.0;
            for l in 0..k {
                s += a[(i, l)] * b[(l, j)];
            }
            acc[(i, j)] += s;
        }
    }
}

/// `acc += a * v` for a vector `v`.
pub fn mul_add_vec_into(acc: &mut Vector, a: &Matrix, v: &Vector) {
    for i in 0..a.nrows() {
        let mut s = 0.0;
        for l in 0..a.ncols() {
            s += a[(i, l)] * v[l];
        }
        acc[i] += s;
    }
}
