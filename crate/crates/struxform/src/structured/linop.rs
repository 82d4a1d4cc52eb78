use std::fmt;
use std::sync::Arc;

use super::fast::{
    dft_vandermonde_matvec, dft_vandermonde_matvec_transpose, f_circulant_matvec,
    f_circulant_matvec_transpose, toeplitz_matvec,
};
use super::poly::{multipoint_eval_tree, weighted_power_sums};
use super::{CauchySpec, FCirculantSpec, ToeplitzSpec};
use crate::dense_limit;
use crate::displacement::MatVecHandle;
use crate::error::{check_dim, Result};
use crate::numkernel::{tally, ComplexVector, DenseMatrix, LuFactors, C64, ONE, ZERO};

/// A matrix given by its action, composed from structured factors.
#[derive(Clone)]
pub enum LinearOp {
    Identity(usize),
    /// The reflection `J`.
    Reverse(usize),
    Diagonal(ComplexVector),
    FCirculant(FCirculantSpec),
    FCirculantTransposed(FCirculantSpec),
    Toeplitz(ToeplitzSpec),
    /// `V_s = (s_i^j)`.
    Vandermonde(ComplexVector),
    VandermondeTransposed(ComplexVector),
    /// `V_f` on the grid `f·ω_n^i`, its inverse, or their transposes.
    DftVandermonde {
        f: C64,
        n: usize,
        inverse: bool,
        transposed: bool,
    },
    Cauchy(CauchySpec),
    CauchyTransposed(CauchySpec),
    Dense(Arc<DenseMatrix>),
    DenseTransposed(Arc<DenseMatrix>),
    Solve(Arc<LuFactors>),
    SolveTransposed(Arc<LuFactors>),
    Handle(Arc<dyn MatVecHandle>),
    HandleTransposed(Arc<dyn MatVecHandle>),
    Scaled(C64, Arc<LinearOp>),
    /// `A·B·C…`, applied right to left.
    Product(Vec<LinearOp>),
    Sum(Vec<LinearOp>),
}

impl fmt::Debug for LinearOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Product(ops) => f.debug_tuple("Product").field(ops).finish(),
            Self::Sum(ops) => f.debug_tuple("Sum").field(ops).finish(),
            Self::Scaled(a, op) => f.debug_tuple("Scaled").field(a).field(op).finish(),
            other => write!(f, "{}(n={})", other.name(), other.dim()),
        }
    }
}

impl LinearOp {
    fn name(&self) -> &'static str {
        match self {
            Self::Identity(_) => "Identity",
            Self::Reverse(_) => "Reverse",
            Self::Diagonal(_) => "Diagonal",
            Self::FCirculant(_) => "FCirculant",
            Self::FCirculantTransposed(_) => "FCirculantT",
            Self::Toeplitz(_) => "Toeplitz",
            Self::Vandermonde(_) => "Vandermonde",
            Self::VandermondeTransposed(_) => "VandermondeT",
            Self::DftVandermonde { .. } => "DftVandermonde",
            Self::Cauchy(_) => "Cauchy",
            Self::CauchyTransposed(_) => "CauchyT",
            Self::Dense(_) => "Dense",
            Self::DenseTransposed(_) => "DenseT",
            Self::Solve(_) => "Solve",
            Self::SolveTransposed(_) => "SolveT",
            Self::Handle(_) => "Handle",
            Self::HandleTransposed(_) => "HandleT",
            Self::Scaled(..) => "Scaled",
            Self::Product(_) => "Product",
            Self::Sum(_) => "Sum",
        }
    }

    pub fn dense(m: DenseMatrix) -> Self {
        Self::Dense(Arc::new(m))
    }

    pub fn scaled(alpha: C64, op: LinearOp) -> Self {
        Self::Scaled(alpha, Arc::new(op))
    }

    /// Row count (operators are square unless built from rectangular parts).
    pub fn dim(&self) -> usize {
        match self {
            Self::Identity(n) | Self::Reverse(n) => *n,
            Self::Diagonal(d) => d.len(),
            Self::FCirculant(c) | Self::FCirculantTransposed(c) => c.dim(),
            Self::Toeplitz(t) => t.dim(),
            Self::Vandermonde(s) | Self::VandermondeTransposed(s) => s.len(),
            Self::DftVandermonde { n, .. } => *n,
            Self::Cauchy(c) => c.rows(),
            Self::CauchyTransposed(c) => c.cols(),
            Self::Dense(m) => m.rows(),
            Self::DenseTransposed(m) => m.cols(),
            Self::Solve(lu) | Self::SolveTransposed(lu) => lu.dim(),
            Self::Handle(h) | Self::HandleTransposed(h) => h.dim(),
            Self::Scaled(_, op) => op.dim(),
            Self::Product(ops) | Self::Sum(ops) => ops.first().map_or(0, |o| o.dim()),
        }
    }

    pub fn apply(&self, x: &[C64]) -> Result<ComplexVector> {
        match self {
            Self::Identity(n) => {
                check_dim("identity", *n, x.len())?;
                Ok(ComplexVector::raw(x.to_vec()))
            }
            Self::Reverse(n) => {
                check_dim("reverse", *n, x.len())?;
                Ok(ComplexVector::raw(x.iter().rev().copied().collect()))
            }
            Self::Diagonal(d) => {
                check_dim("diagonal", d.len(), x.len())?;
                tally::add(d.len() as u64);
                Ok(d.hadamard(x))
            }
            Self::FCirculant(c) => f_circulant_matvec(c, x),
            Self::FCirculantTransposed(c) => f_circulant_matvec_transpose(c, x),
            Self::Toeplitz(t) => toeplitz_matvec(t, x),
            Self::Vandermonde(s) => vandermonde_apply(s, x),
            Self::VandermondeTransposed(s) => vandermonde_apply_transpose(s, x),
            Self::DftVandermonde {
                f,
                n,
                inverse,
                transposed,
            } => {
                check_dim("dft vandermonde", *n, x.len())?;
                if *transposed {
                    dft_vandermonde_matvec_transpose(*f, x, *inverse)
                } else {
                    dft_vandermonde_matvec(*f, x, *inverse)
                }
            }
            Self::Cauchy(c) => cauchy_apply(&c.row_knots, &c.col_knots, x, false),
            Self::CauchyTransposed(c) => cauchy_apply(&c.row_knots, &c.col_knots, x, true),
            Self::Dense(m) => m.matvec(x),
            Self::DenseTransposed(m) => m.matvec_transpose(x),
            Self::Solve(lu) => lu.solve(x),
            Self::SolveTransposed(lu) => lu.solve_transpose(x),
            Self::Handle(h) => h.apply(x),
            Self::HandleTransposed(h) => h.apply_transpose(x),
            Self::Scaled(a, op) => {
                let y = op.apply(x)?;
                tally::add(y.len() as u64);
                Ok(y.scaled(*a))
            }
            Self::Product(ops) => {
                let mut v = ComplexVector::raw(x.to_vec());
                for op in ops.iter().rev() {
                    v = op.apply(&v)?;
                }
                Ok(v)
            }
            Self::Sum(ops) => {
                let mut acc = ComplexVector::zeros(self.dim());
                for op in ops {
                    let y = op.apply(x)?;
                    check_dim("sum of operators", acc.len(), y.len())?;
                    acc.axpy(ONE, &y);
                }
                Ok(acc)
            }
        }
    }

    /// Structural (plain) transpose.
    pub fn transpose(&self) -> LinearOp {
        match self {
            Self::Identity(n) => Self::Identity(*n),
            Self::Reverse(n) => Self::Reverse(*n),
            Self::Diagonal(d) => Self::Diagonal(d.clone()),
            Self::FCirculant(c) => Self::FCirculantTransposed(c.clone()),
            Self::FCirculantTransposed(c) => Self::FCirculant(c.clone()),
            Self::Toeplitz(t) => Self::Toeplitz(t.transposed()),
            Self::Vandermonde(s) => Self::VandermondeTransposed(s.clone()),
            Self::VandermondeTransposed(s) => Self::Vandermonde(s.clone()),
            Self::DftVandermonde {
                f,
                n,
                inverse,
                transposed,
            } => Self::DftVandermonde {
                f: *f,
                n: *n,
                inverse: *inverse,
                transposed: !*transposed,
            },
            Self::Cauchy(c) => Self::CauchyTransposed(c.clone()),
            Self::CauchyTransposed(c) => Self::Cauchy(c.clone()),
            Self::Dense(m) => Self::DenseTransposed(m.clone()),
            Self::DenseTransposed(m) => Self::Dense(m.clone()),
            Self::Solve(lu) => Self::SolveTransposed(lu.clone()),
            Self::SolveTransposed(lu) => Self::Solve(lu.clone()),
            Self::Handle(h) => Self::HandleTransposed(h.clone()),
            Self::HandleTransposed(h) => Self::Handle(h.clone()),
            Self::Scaled(a, op) => Self::Scaled(*a, Arc::new(op.transpose())),
            Self::Product(ops) => Self::Product(ops.iter().rev().map(|o| o.transpose()).collect()),
            Self::Sum(ops) => Self::Sum(ops.iter().map(|o| o.transpose()).collect()),
        }
    }

    /// Dense form by applying the operator to coordinate vectors.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let c = self.apply(&ComplexVector::basis(n, j))?;
            check_dim("dense columns", n, c.len())?;
            out.set_column(j, &c);
        }
        Ok(out)
    }
}

impl MatVecHandle for LinearOp {
    fn dim(&self) -> usize {
        LinearOp::dim(self)
    }
    fn apply(&self, x: &[C64]) -> Result<ComplexVector> {
        LinearOp::apply(self, x)
    }
    fn apply_transpose(&self, x: &[C64]) -> Result<ComplexVector> {
        self.transpose().apply(x)
    }
}

fn vandermonde_apply(s: &[C64], x: &[C64]) -> Result<ComplexVector> {
    check_dim("vandermonde", s.len(), x.len())?;
    if s.len() > dense_limit() {
        return Ok(ComplexVector::raw(multipoint_eval_tree(x, s)));
    }
    tally::add((s.len() * x.len()) as u64);
    Ok(s.iter()
        .map(|&si| x.iter().rev().fold(ZERO, |acc, &c| acc * si + c))
        .collect())
}

fn vandermonde_apply_transpose(s: &[C64], y: &[C64]) -> Result<ComplexVector> {
    check_dim("transposed vandermonde", s.len(), y.len())?;
    let n = s.len();
    if n > dense_limit() {
        return Ok(ComplexVector::raw(weighted_power_sums(y, s, n)));
    }
    let mut out = vec![ZERO; n];
    for (&si, &yi) in s.iter().zip(y) {
        let mut p = yi;
        for o in out.iter_mut() {
            *o += p;
            p *= si;
        }
    }
    tally::add((n * n) as u64);
    Ok(ComplexVector::raw(out))
}

/// Direct kernel summation `Σ_j x_j / (s_i − t_j)` (or the transposed sum).
pub(crate) fn cauchy_apply(s: &[C64], t: &[C64], x: &[C64], transposed: bool) -> Result<ComplexVector> {
    if transposed {
        check_dim("transposed cauchy", s.len(), x.len())?;
        tally::add((s.len() * t.len()) as u64);
        Ok(t.iter()
            .map(|&tj| s.iter().zip(x).map(|(&si, &xi)| xi / (si - tj)).sum())
            .collect())
    } else {
        check_dim("cauchy", t.len(), x.len())?;
        tally::add((s.len() * t.len()) as u64);
        Ok(s.iter()
            .map(|&si| t.iter().zip(x).map(|(&tj, &xj)| xj / (si - tj)).sum())
            .collect())
    }
}
