use super::{norm2_estimate, tally, ComplexVector, DenseMatrix, C64, ZERO};
use crate::error::{check_dim, Result, StruxError};

/// `M·v` by direct summation.
pub fn dense_matvec(m: &DenseMatrix, v: &[C64]) -> Result<ComplexVector> {
    m.matvec(v)
}

/// Solves `M·x = b` by partially pivoted elimination.
pub fn dense_solve(m: &DenseMatrix, b: &[C64]) -> Result<ComplexVector> {
    LuFactors::new(m)?.solve(b)
}

/// LU factors `P·M = L·U` of a square matrix.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: DenseMatrix,
    perm: Vec<usize>,
    sign_flips: usize,
}

impl LuFactors {
    /// Factors `m`; fails when a pivot falls below `n·ε·‖M‖`.
    pub fn new(m: &DenseMatrix) -> Result<Self> {
        let threshold = m.rows() as f64 * f64::EPSILON * norm2_estimate(m);
        Self::with_threshold(m, threshold)
    }

    /// Factors `m`, failing only when a pivot is at most `threshold`.
    pub(crate) fn with_threshold(m: &DenseMatrix, threshold: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(StruxError::DimensionMismatch {
                context: "LU requires a square matrix",
                expected: m.rows(),
                found: m.cols(),
            });
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0;
        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|i| (i, lu.get(i, k).norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs <= threshold || pivot_abs == 0.0 {
                return Err(StruxError::SingularMatrix {
                    pivot: pivot_abs,
                    threshold,
                });
            }
            if p != k {
                for j in 0..n {
                    let t = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, t);
                }
                perm.swap(k, p);
                sign_flips += 1;
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let l = lu.get(i, k) / pivot;
                lu.set(i, k, l);
                if l == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let v = lu.get(i, j) - l * lu.get(k, j);
                    lu.set(i, j, v);
                }
            }
            tally::add(((n - k) * (n - k)) as u64);
        }
        Ok(Self {
            n,
            lu,
            perm,
            sign_flips,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `M·x = b`.
    pub fn solve(&self, b: &[C64]) -> Result<ComplexVector> {
        check_dim("LU solve", self.n, b.len())?;
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu.get(i, j) * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu.get(i, j) * x[j];
            }
            x[i] = acc / self.lu.get(i, i);
        }
        tally::add((n * n) as u64);
        ComplexVector::new(x)
    }

    /// Solves `Mᵀ·x = b` (plain transpose).
    pub fn solve_transpose(&self, b: &[C64]) -> Result<ComplexVector> {
        check_dim("LU transpose solve", self.n, b.len())?;
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu.get(j, i) * y[j];
            }
            y[i] = acc / self.lu.get(i, i);
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu.get(j, i) * y[j];
            }
            y[i] = acc;
        }
        let mut x = vec![ZERO; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        tally::add((n * n) as u64);
        ComplexVector::new(x)
    }

    pub fn determinant(&self) -> C64 {
        let mut d: C64 = (0..self.n).map(|i| self.lu.get(i, i)).product();
        if self.sign_flips % 2 == 1 {
            d = -d;
        }
        d
    }

    /// Dense inverse, column by column.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.n;
        let mut out = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let c = self.solve(&ComplexVector::basis(n, j))?;
            out.set_column(j, &c);
        }
        Ok(out)
    }
}
