use crate::error::{check_dim, Result, StruxError};
use crate::numkernel::{root_of_unity, ComplexVector, DenseMatrix, C64, ONE};

/// `T = (t_{i−j})` given by its first column and first row.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec {
    pub first_col: ComplexVector,
    pub first_row: ComplexVector,
}

impl ToeplitzSpec {
    pub fn new(first_col: ComplexVector, first_row: ComplexVector) -> Result<Self> {
        check_dim("toeplitz row/column", first_col.len(), first_row.len())?;
        if first_col.is_empty() {
            return Err(StruxError::InvalidInput("empty Toeplitz matrix".into()));
        }
        let (a, b) = (first_col[0], first_row[0]);
        if (a - b).norm() > 1e-12 * a.norm().max(b.norm()).max(1.0) {
            return Err(StruxError::InvalidInput(
                "first row and column disagree on the diagonal".into(),
            ));
        }
        Ok(Self {
            first_col,
            first_row,
        })
    }

    pub fn dim(&self) -> usize {
        self.first_col.len()
    }

    /// Entry `t_k` for `k = i − j` in `−(n−1)..n`.
    pub fn diagonal_value(&self, k: isize) -> C64 {
        if k >= 0 {
            self.first_col[k as usize]
        } else {
            self.first_row[(-k) as usize]
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        DenseMatrix::from_fn(n, n, |i, j| self.diagonal_value(i as isize - j as isize))
    }

    /// `Tᵀ`, again Toeplitz.
    pub fn transposed(&self) -> Self {
        Self {
            first_col: self.first_row.clone(),
            first_row: self.first_col.clone(),
        }
    }
}

/// `H = (h_{i+j})` given by its `2n − 1` anti-diagonal values.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSpec {
    pub skew_diagonal_values: ComplexVector,
}

impl HankelSpec {
    pub fn new(values: ComplexVector) -> Result<Self> {
        if values.len() % 2 == 0 {
            return Err(StruxError::InvalidInput(
                "Hankel matrices need an odd number of anti-diagonal values".into(),
            ));
        }
        Ok(Self {
            skew_diagonal_values: values,
        })
    }

    pub fn dim(&self) -> usize {
        (self.skew_diagonal_values.len() + 1) / 2
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        DenseMatrix::from_fn(n, n, |i, j| self.skew_diagonal_values[i + j])
    }

    /// The Toeplitz matrix `T` with `H = J·T`.
    pub fn reflected_toeplitz(&self) -> ToeplitzSpec {
        let n = self.dim();
        let h = &self.skew_diagonal_values;
        ToeplitzSpec {
            first_col: (0..n).map(|i| h[n - 1 - i]).collect(),
            first_row: (0..n).map(|j| h[n - 1 + j]).collect(),
        }
    }
}

/// `V_s = (s_i^j)`, optionally transposed.
#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeSpec {
    pub knots: ComplexVector,
    pub transposed: bool,
}

impl VandermondeSpec {
    pub fn new(knots: ComplexVector, transposed: bool) -> Self {
        Self { knots, transposed }
    }

    pub fn dim(&self) -> usize {
        self.knots.len()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let v = vandermonde_dense(&self.knots);
        if self.transposed {
            v.transpose()
        } else {
            v
        }
    }
}

/// Dense `(s_i^j)` with powers built by repeated multiplication.
pub fn vandermonde_dense(knots: &[C64]) -> DenseMatrix {
    let n = knots.len();
    let mut out = DenseMatrix::zeros(n, n);
    for (i, &s) in knots.iter().enumerate() {
        let mut p = ONE;
        for j in 0..n {
            out.set(i, j, p);
            p *= s;
        }
    }
    out
}

/// `C_{s,t} = (1/(s_i − t_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchySpec {
    pub row_knots: ComplexVector,
    pub col_knots: ComplexVector,
}

impl CauchySpec {
    /// Validates that row knots avoid column knots and that each family is distinct.
    pub fn new(row_knots: ComplexVector, col_knots: ComplexVector) -> Result<Self> {
        for (i, s) in row_knots.iter().enumerate() {
            for (j, t) in col_knots.iter().enumerate() {
                if s == t {
                    return Err(StruxError::KnotCollision { row: i, col: j });
                }
            }
        }
        check_distinct(&row_knots, "row knots")?;
        check_distinct(&col_knots, "column knots")?;
        Ok(Self {
            row_knots,
            col_knots,
        })
    }

    /// Cauchy matrix whose columns sit on the grid `f·ω_n^j`.
    pub fn cv(row_knots: ComplexVector, f: C64) -> Result<Self> {
        let n = row_knots.len();
        Self::new(row_knots, dft_grid(n, f))
    }

    pub fn rows(&self) -> usize {
        self.row_knots.len()
    }

    pub fn cols(&self) -> usize {
        self.col_knots.len()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows(), self.cols(), |i, j| {
            ONE / (self.row_knots[i] - self.col_knots[j])
        })
    }

    /// `f` with `t_j = f·ω_n^j` and `|f| = 1`, detected to within `1e-9`.
    pub fn cv_scale(&self) -> Result<C64> {
        let n = self.cols();
        if n == 0 {
            return Err(StruxError::NotCvMatrix { deviation: f64::INFINITY });
        }
        let f = self.col_knots[0];
        let mut deviation = (f.norm() - 1.0).abs();
        for j in 0..n {
            let expect = f * root_of_unity(n, j as i64);
            deviation = deviation.max((self.col_knots[j] - expect).norm());
        }
        if deviation > 1e-9 {
            Err(StruxError::NotCvMatrix { deviation })
        } else {
            Ok(f / f.norm())
        }
    }
}

/// Dense Cauchy matrix, validating knot separation.
pub fn cauchy_dense(c: &CauchySpec) -> Result<DenseMatrix> {
    let spec = CauchySpec::new(c.row_knots.clone(), c.col_knots.clone())?;
    Ok(spec.to_dense())
}

/// `f·ω_n^j` for `j = 0..n`.
pub fn dft_grid(n: usize, f: C64) -> ComplexVector {
    (0..n).map(|j| f * root_of_unity(n, j as i64)).collect()
}

pub(crate) fn check_distinct(knots: &[C64], what: &str) -> Result<()> {
    let mut sorted: Vec<(f64, f64, usize)> = knots.iter().enumerate().map(|(i, z)| (z.re, z.im, i)).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            return Err(StruxError::DegenerateKnots(format!(
                "{what} {} and {} coincide",
                w[0].2, w[1].2
            )));
        }
    }
    Ok(())
}

/// `Z_f(v) = Σ v_i Z_f^{i−1}`, the `f`-circulant with first column `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct FCirculantSpec {
    pub f: C64,
    pub first_col: ComplexVector,
}

impl FCirculantSpec {
    pub fn new(f: C64, first_col: ComplexVector) -> Self {
        Self { f, first_col }
    }

    pub fn dim(&self) -> usize {
        self.first_col.len()
    }

    /// The same matrix as a general Toeplitz carrier.
    pub fn as_toeplitz(&self) -> ToeplitzSpec {
        let n = self.dim();
        let v = &self.first_col;
        let first_row = (0..n)
            .map(|j| if j == 0 { v[0] } else { self.f * v[n - j] })
            .collect();
        ToeplitzSpec {
            first_col: v.clone(),
            first_row,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        self.as_toeplitz().to_dense()
    }
}
