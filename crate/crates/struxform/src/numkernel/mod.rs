//! Dense complex linear algebra and FFT primitives.

mod dense;
mod factor;
mod fft;
pub mod tally;

use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use crate::error::{check_dim, Result, StruxError};

pub use dense::{dense_matvec, dense_solve, LuFactors};
pub use factor::{norm2_estimate, numerical_rank, truncated_factor, TruncatedFactorization};
pub use fft::{dft, dft_in_place, idft, idft_in_place, is_power_of_two, root_of_unity};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A finite complex vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    /// Wraps `entries`, rejecting NaN or infinite values.
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self(entries))
        } else {
            Err(StruxError::NonFinite("vector"))
        }
    }

    pub(crate) fn raw(entries: Vec<C64>) -> Self {
        Self(entries)
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![ZERO; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![ONE; n])
    }

    /// The `i`-th coordinate vector of length `n` (0-based).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![ZERO; n];
        v[i] = ONE;
        Self(v)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.0
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Entries in reverse order (the action of the reflection matrix).
    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self(self.0.iter().map(|z| z * alpha).collect())
    }

    pub fn hadamard(&self, other: &[C64]) -> Self {
        Self(self.0.iter().zip(other).map(|(a, b)| a * b).collect())
    }

    pub fn axpy(&mut self, alpha: C64, other: &[C64]) {
        for (a, b) in self.0.iter_mut().zip(other) {
            *a += alpha * b;
        }
    }

    pub fn sub(&self, other: &[C64]) -> Self {
        Self(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }
}

impl Deref for ComplexVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl DerefMut for ComplexVector {
    fn deref_mut(&mut self) -> &mut [C64] {
        &mut self.0
    }
}

impl FromIterator<C64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

pub(crate) fn norm2(v: &[C64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

/// Relative 2-norm distance `‖a − b‖ / ‖b‖` (absolute when `b` vanishes).
pub fn rel_err(a: &[C64], b: &[C64]) -> f64 {
    let diff: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let nb = norm2(b);
    let nd = norm2(&diff);
    if nb == 0.0 {
        nd
    } else {
        nd / nb
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        check_dim("matrix data", rows * cols, data.len())?;
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(StruxError::NonFinite("matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[&[C64]]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn diag(d: &[C64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { ZERO })
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, &z) in v.iter().enumerate() {
            self.set(i, j, z);
        }
    }

    /// Plain (non-conjugating) transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        check_dim("matmul", self.cols, other.rows)?;
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = out.row_mut(i);
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        tally::add((self.rows * self.cols * other.cols) as u64);
        Ok(out)
    }

    /// `self · otherᵀ`, the product appearing in every generator `F Gᵀ`.
    pub fn mul_transpose(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        check_dim("mul_transpose", self.cols, other.cols)?;
        let out = DenseMatrix::from_fn(self.rows, other.rows, |i, j| {
            self.row(i).iter().zip(other.row(j)).map(|(a, b)| a * b).sum()
        });
        tally::add((self.rows * self.cols * other.rows) as u64);
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<ComplexVector> {
        check_dim("matvec", self.cols, v.len())?;
        tally::add((self.rows * self.cols) as u64);
        Ok(ComplexVector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// `selfᵀ · v` without forming the transpose.
    pub fn matvec_transpose(&self, v: &[C64]) -> Result<ComplexVector> {
        check_dim("matvec_transpose", self.rows, v.len())?;
        let mut out = vec![ZERO; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        tally::add((self.rows * self.cols) as u64);
        Ok(ComplexVector(out))
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(C64, C64) -> C64) -> Result<DenseMatrix> {
        check_dim("elementwise rows", self.rows, other.rows)?;
        check_dim("elementwise cols", self.cols, other.cols)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, alpha: C64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hcat(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        check_dim("hcat", self.rows, other.rows)?;
        let cols = self.cols + other.cols;
        Ok(DenseMatrix::from_fn(self.rows, cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// The leading `k` columns.
    pub fn take_columns(&self, k: usize) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, k, |i, j| self.get(i, j))
    }

    /// Rows permuted so that row `r` of the result is row `perm[r]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(perm.len(), self.cols, |i, j| self.get(perm[i], j))
    }

    /// Matrix with every column transformed by `f`.
    pub fn map_columns(
        &self,
        out_rows: usize,
        mut f: impl FnMut(&ComplexVector) -> Result<ComplexVector>,
    ) -> Result<DenseMatrix> {
        let mut out = DenseMatrix::zeros(out_rows, self.cols);
        for j in 0..self.cols {
            let c = f(&self.column(j))?;
            check_dim("map_columns", out_rows, c.len())?;
            out.set_column(j, &c);
        }
        Ok(out)
    }
}
