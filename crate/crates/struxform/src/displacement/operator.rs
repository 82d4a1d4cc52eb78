use crate::error::{check_dim, Result};
use crate::numkernel::{ComplexVector, DenseMatrix, C64};

/// Operator matrix kept in symbolic form.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    /// `Z_f`: down-shift with `f` wrapped into the top-right corner.
    UnitCirculantShift(C64),
    /// `Z_fᵀ`.
    UnitCirculantShiftTransposed(C64),
    /// `D_s = diag(s)`.
    Diagonal(ComplexVector),
}

impl OperatorSpec {
    pub fn shift(f: C64) -> Self {
        Self::UnitCirculantShift(f)
    }

    pub fn shift_t(f: C64) -> Self {
        Self::UnitCirculantShiftTransposed(f)
    }

    pub fn diag(knots: ComplexVector) -> Self {
        Self::Diagonal(knots)
    }

    pub fn transpose(&self) -> Self {
        match self {
            Self::UnitCirculantShift(f) => Self::UnitCirculantShiftTransposed(*f),
            Self::UnitCirculantShiftTransposed(f) => Self::UnitCirculantShift(*f),
            Self::Diagonal(s) => Self::Diagonal(s.clone()),
        }
    }

    /// Wrap scalar of a shift operator.
    pub fn scalar(&self) -> Option<C64> {
        match self {
            Self::UnitCirculantShift(f) | Self::UnitCirculantShiftTransposed(f) => Some(*f),
            Self::Diagonal(_) => None,
        }
    }

    pub fn knots(&self) -> Option<&ComplexVector> {
        match self {
            Self::Diagonal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Self::Diagonal(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::UnitCirculantShift(_) => "Zf",
            Self::UnitCirculantShiftTransposed(_) => "ZfT",
            Self::Diagonal(_) => "Diag",
        }
    }

    /// Checks that the operator can act on vectors of length `n`.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            Self::Diagonal(s) => check_dim("diagonal operator", s.len(), n),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Result<ComplexVector> {
        operator_apply(self, v)
    }

    pub fn apply_transpose(&self, v: &[C64]) -> Result<ComplexVector> {
        operator_apply(&self.transpose(), v)
    }

    /// Dense form, for oracles.
    pub fn to_dense(&self, n: usize) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let col = self
                .apply(&ComplexVector::basis(n, j))
                .expect("operator dimension");
            out.set_column(j, &col);
        }
        out
    }
}

/// Applies a symbolic operator in `O(n)`.
pub fn operator_apply(op: &OperatorSpec, v: &[C64]) -> Result<ComplexVector> {
    let n = v.len();
    op.check_dim(n)?;
    if n == 0 {
        return Ok(ComplexVector::zeros(0));
    }
    let out: Vec<C64> = match op {
        OperatorSpec::UnitCirculantShift(f) => {
            let mut out = Vec::with_capacity(n);
            out.push(f * v[n - 1]);
            out.extend_from_slice(&v[..n - 1]);
            out
        }
        OperatorSpec::UnitCirculantShiftTransposed(f) => {
            let mut out: Vec<C64> = v[1..].to_vec();
            out.push(f * v[0]);
            out
        }
        OperatorSpec::Diagonal(s) => s.iter().zip(v).map(|(a, b)| a * b).collect(),
    };
    Ok(ComplexVector::raw(out))
}
