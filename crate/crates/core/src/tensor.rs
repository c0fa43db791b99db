//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are stored row-major with no sparsity. Qubit 1 is the most
//! significant bit of a basis index, so `kron_all(&[a1, a2, ..., am])` applies
//! `a_j` to qubit `j`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest row or column count any constructed matrix may reach by default.
pub const DEFAULT_MAX_DIM: usize = 1 << 12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_finite(entries: &[Complex64]) -> Result<()> {
    match entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(pos) => Err(Error::NonFinite(pos)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        check_finite(&entries)?;
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Convenience for literal matrices with real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, entries: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![ONE; n])
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn pauli_x() -> Self {
        Self { rows: 2, cols: 2, entries: vec![ZERO, ONE, ONE, ZERO] }
    }

    pub fn pauli_y() -> Self {
        Self { rows: 2, cols: 2, entries: vec![ZERO, -I, I, ZERO] }
    }

    pub fn pauli_z() -> Self {
        Self { rows: 2, cols: 2, entries: vec![ONE, ZERO, ZERO, -ONE] }
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

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self[(row, col)]
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::Shape(format!(
                "cannot apply {}x{} matrix to vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let entries = self
            .entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v.entries()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(ComplexVector { entries })
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::Shape("trace of a non-square matrix".into()));
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Largest entrywise modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_norm())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&dagger(self)).is_ok_and(|d| d <= tol)
    }

    /// Smallest eigenvalue of a Hermitian matrix. The strict lower triangle
    /// is ignored, so callers should check Hermiticity first.
    pub fn min_eigenvalue_hermitian(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::Shape("eigenvalues of a non-square matrix".into()));
        }
        let eig = self.to_nalgebra().symmetric_eigenvalues();
        Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a shape mismatch; use [`ComplexMatrix::matmul`] to get an error instead.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix shapes do not agree")
    }
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Debug text format: one row per line, tab-separated `re+imi` entries.
impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks_exact(self.cols) {
            let line: Vec<String> = row.iter().map(|&z| fmt_complex(z)).collect();
            writeln!(f, "{}", line.join("\t"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Shape("empty vector".into()));
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { entries: self.entries.iter().map(Complex64::conj).collect() }
    }

    /// Conjugate-linear in `self`: returns `Σ conj(self_x) * other_x`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("inner product of dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| a * b))
            .collect();
        Self { entries }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

/// Kronecker product with the default size cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, DEFAULT_MAX_DIM)
}

pub fn kron_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max_dim: usize) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows).filter(|&r| r <= max_dim);
    let cols = a.cols.checked_mul(b.cols).filter(|&c| c <= max_dim);
    let (Some(rows), Some(cols)) = (rows, cols) else {
        let dim = a.rows.saturating_mul(b.rows).max(a.cols.saturating_mul(b.cols));
        return Err(Error::SizeLimit { dim, max: max_dim });
    };
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            for ib in 0..b.rows {
                let r = ia * b.rows + ib;
                for jb in 0..b.cols {
                    out[(r, ja * b.cols + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    Ok(out)
}

/// Left-to-right Kronecker product of a non-empty sequence.
pub fn kron_all(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Domain("Kronecker product of an empty sequence".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| kron(&acc, f))
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

/// True iff every entry of `a† a - I` has modulus at most `tol`.
pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::Shape(format!("unitarity of a {}x{} matrix", a.rows, a.cols)));
    }
    let gram = dagger(a).matmul(a)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(a.rows))? <= tol)
}
