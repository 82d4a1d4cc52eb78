use super::{CauchySpec, FCirculantSpec, LinearOp};
use crate::dense_limit;
use crate::displacement::{gen_transpose, DisplacementGenerator, OperatorSpec};
use crate::error::{Result, StruxError};
use crate::numkernel::{ComplexVector, DenseMatrix, C64, ONE, ZERO};

/// Structure class whose operator pattern a generator is expected to carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructVariant {
    /// `(Z_e, Z_f)` or `(Z_eᵀ, Z_fᵀ)`.
    T,
    /// `(Z_e, Z_fᵀ)` or `(Z_eᵀ, Z_f)`.
    H,
    /// `(D_s, Z_e)`.
    V,
    /// `(Z_eᵀ, D_s)`.
    VT,
    /// `(D_s, D_t)`.
    C,
}

impl ReconstructVariant {
    pub fn matches(self, a: &OperatorSpec, b: &OperatorSpec) -> bool {
        use OperatorSpec::*;
        matches!(
            (self, a, b),
            (Self::T, UnitCirculantShift(_), UnitCirculantShift(_))
                | (Self::T, UnitCirculantShiftTransposed(_), UnitCirculantShiftTransposed(_))
                | (Self::H, UnitCirculantShift(_), UnitCirculantShiftTransposed(_))
                | (Self::H, UnitCirculantShiftTransposed(_), UnitCirculantShift(_))
                | (Self::V, Diagonal(_), UnitCirculantShift(_))
                | (Self::VT, UnitCirculantShiftTransposed(_), Diagonal(_))
                | (Self::C, Diagonal(_), Diagonal(_))
        )
    }
}

/// A matrix recovered from its generator: dense for small orders, always as an action.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub dense: Option<DenseMatrix>,
    pub action: LinearOp,
}

/// Recovers the matrix a generator represents, checking the operator pattern.
pub fn reconstruct(g: &DisplacementGenerator, variant: ReconstructVariant) -> Result<Reconstruction> {
    if !variant.matches(&g.a, &g.b) {
        return Err(StruxError::OperatorMismatch(format!(
            "operators ({}, {}) do not fit variant {:?}",
            g.a.label(),
            g.b.label(),
            variant
        )));
    }
    let action = generator_action(g)?;
    let dense = if g.dim() <= dense_limit() {
        Some(action.to_dense()?)
    } else {
        None
    };
    Ok(Reconstruction { dense, action })
}

/// The action of the matrix represented by `g`, for any pair of operator kinds.
pub fn generator_action(g: &DisplacementGenerator) -> Result<LinearOp> {
    use OperatorSpec::*;
    let n = g.dim();
    let rev = LinearOp::Reverse(n);
    match (&g.a, &g.b) {
        (UnitCirculantShift(e), UnitCirculantShift(f)) => {
            shift_pair_action(*e, *f, &g.f_factor, &g.g_factor)
        }
        (UnitCirculantShiftTransposed(_), UnitCirculantShiftTransposed(_))
        | (UnitCirculantShiftTransposed(_), Diagonal(_))
        | (UnitCirculantShift(_), Diagonal(_)) => Ok(generator_action(&gen_transpose(g))?.transpose()),
        (UnitCirculantShift(e), UnitCirculantShiftTransposed(f)) => {
            let inner = shift_pair_action(*e, *f, &g.f_factor, &reverse_rows(&g.g_factor))?;
            Ok(LinearOp::Product(vec![inner, rev]))
        }
        (UnitCirculantShiftTransposed(e), UnitCirculantShift(f)) => {
            let inner = shift_pair_action(*e, *f, &reverse_rows(&g.f_factor), &g.g_factor)?;
            Ok(LinearOp::Product(vec![rev, inner]))
        }
        (Diagonal(s), UnitCirculantShift(e)) => {
            vandermonde_like_action(s, *e, &g.f_factor, &g.g_factor)
        }
        (Diagonal(s), UnitCirculantShiftTransposed(e)) => {
            let inner = vandermonde_like_action(s, *e, &g.f_factor, &reverse_rows(&g.g_factor))?;
            Ok(LinearOp::Product(vec![inner, rev]))
        }
        (Diagonal(s), Diagonal(t)) => cauchy_like_action(s, t, &g.f_factor, &g.g_factor),
    }
}

pub(crate) fn reverse_rows(m: &DenseMatrix) -> DenseMatrix {
    let n = m.rows();
    DenseMatrix::from_fn(n, m.cols(), |i, j| m.get(n - 1 - i, j))
}

fn zero_op(n: usize) -> LinearOp {
    LinearOp::scaled(ZERO, LinearOp::Identity(n))
}

/// `(e − f)·M = Σ_j Z_e(f_j)·Z_f(J g_j)`.
fn shift_pair_action(e: C64, f: C64, ff: &DenseMatrix, gg: &DenseMatrix) -> Result<LinearOp> {
    let n = ff.rows();
    let gap = e - f;
    if gap.norm() <= 1e-14 * e.norm().max(f.norm()).max(1.0) {
        return Err(StruxError::DegenerateOperator(format!(
            "shift scalars coincide (e = f = {e})"
        )));
    }
    if ff.cols() == 0 {
        return Ok(zero_op(n));
    }
    let terms = (0..ff.cols())
        .map(|j| {
            LinearOp::Product(vec![
                LinearOp::FCirculant(FCirculantSpec::new(e, ff.column(j))),
                LinearOp::FCirculant(FCirculantSpec::new(f, gg.column(j).reversed())),
            ])
        })
        .collect();
    Ok(LinearOp::scaled(ONE / gap, LinearOp::Sum(terms)))
}

/// `M = diag(1/(s_iⁿ − e))·Σ_j diag(f_j)·V_s·Z_e(J g_j)`.
fn vandermonde_like_action(s: &ComplexVector, e: C64, ff: &DenseMatrix, gg: &DenseMatrix) -> Result<LinearOp> {
    let n = s.len();
    let scale: Vec<C64> = s.iter().map(|&si| si.powu(n as u32) - e).collect();
    let floor = 1e-14 * scale.iter().fold(e.norm().max(1.0), |m, z| m.max(z.norm()));
    if let Some(i) = scale.iter().position(|z| z.norm() <= floor) {
        return Err(StruxError::DegenerateOperator(format!(
            "knot {i} satisfies s^n = e"
        )));
    }
    if ff.cols() == 0 {
        return Ok(zero_op(n));
    }
    let terms = (0..ff.cols())
        .map(|j| {
            let d: ComplexVector = ff.column(j).iter().zip(&scale).map(|(a, b)| a / b).collect();
            LinearOp::Product(vec![
                LinearOp::Diagonal(d),
                LinearOp::Vandermonde(s.clone()),
                LinearOp::FCirculant(FCirculantSpec::new(e, gg.column(j).reversed())),
            ])
        })
        .collect();
    Ok(LinearOp::Sum(terms))
}

/// `M = Σ_j diag(f_j)·C_{s,t}·diag(g_j)`.
fn cauchy_like_action(s: &ComplexVector, t: &ComplexVector, ff: &DenseMatrix, gg: &DenseMatrix) -> Result<LinearOp> {
    let n = s.len();
    for (i, si) in s.iter().enumerate() {
        if let Some(j) = t.iter().position(|tj| tj == si) {
            return Err(StruxError::KnotCollision { row: i, col: j });
        }
    }
    if ff.cols() == 0 {
        return Ok(zero_op(n));
    }
    let c = CauchySpec {
        row_knots: s.clone(),
        col_knots: t.clone(),
    };
    let terms = (0..ff.cols())
        .map(|j| {
            LinearOp::Product(vec![
                LinearOp::Diagonal(ff.column(j)),
                LinearOp::Cauchy(c.clone()),
                LinearOp::Diagonal(gg.column(j)),
            ])
        })
        .collect();
    Ok(LinearOp::Sum(terms))
}
