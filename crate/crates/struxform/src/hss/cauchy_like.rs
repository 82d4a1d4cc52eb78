use super::approx::{build_cv_hss, CvHssApprox};
use super::solve::{structured_solve, SolveOutcome, Weights};
use crate::displacement::{DisplacementGenerator, OperatorSpec};
use crate::error::{check_dim, Result, StruxError};
use crate::numkernel::{ComplexVector, DenseMatrix, C64, ZERO};
use crate::structured::CauchySpec;

/// `M = Σ_j diag(F_j)·C·diag(G_j)` with `C` approximated by sectors.
#[derive(Debug, Clone)]
pub struct CauchyLikeHss {
    pub base: CvHssApprox,
    pub f_factor: DenseMatrix,
    pub g_factor: DenseMatrix,
}

/// Approximation of a Cauchy-like matrix over `(D_s, D_t)` with `t` a scaled
/// root-of-unity grid.
pub fn cauchy_like_hss(g: &DisplacementGenerator, b: u32, h: Option<usize>) -> Result<CauchyLikeHss> {
    let (OperatorSpec::Diagonal(s), OperatorSpec::Diagonal(t)) = (&g.a, &g.b) else {
        return Err(StruxError::OperatorMismatch("expected a generator over (D_s, D_t)".into()));
    };
    let spec = CauchySpec::new(s.clone(), t.clone())?;
    Ok(CauchyLikeHss {
        base: build_cv_hss(&spec, b, h)?,
        f_factor: g.f_factor.clone(),
        g_factor: g.g_factor.clone(),
    })
}

impl CauchyLikeHss {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn len(&self) -> usize {
        self.f_factor.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `d·‖F‖·‖G‖`, the factor by which the CV error bound grows.
    pub fn error_scale(&self) -> f64 {
        self.len() as f64 * self.f_factor.frobenius_norm() * self.g_factor.frobenius_norm()
    }

    pub fn offdiag_rank(&self) -> usize {
        self.len() * self.base.offdiag_rank()
    }

    pub fn matvec(&self, x: &[C64]) -> Result<ComplexVector> {
        check_dim("Cauchy-like matvec", self.dim(), x.len())?;
        let mut y = vec![ZERO; self.dim()];
        for j in 0..self.len() {
            let gx: Vec<C64> = x.iter().enumerate().map(|(l, v)| v * self.g_factor.get(l, j)).collect();
            let cx = self.base.matvec(&gx)?;
            for (i, v) in cx.iter().enumerate() {
                y[i] += self.f_factor.get(i, j) * v;
            }
        }
        Ok(ComplexVector::raw(y))
    }

    /// Exact dense matrix from the knots and factors.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let part = &self.base.partition;
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let s = part.row_knots[i];
            for l in 0..n {
                let w: C64 = self.f_factor.row(i).iter().zip(self.g_factor.row(l)).map(|(a, b)| a * b).sum();
                let t = part.col_knot(l);
                if s == t {
                    return Err(StruxError::KnotCollision { row: i, col: l });
                }
                out.set(i, l, w / (s - t));
            }
        }
        Ok(out)
    }

    pub fn solve(&self, rhs: &[C64]) -> Result<SolveOutcome> {
        let weights = Weights {
            f: &self.f_factor,
            g: &self.g_factor,
        };
        structured_solve(&self.base, Some(weights), &|x| self.matvec(x), &|| self.to_dense(), rhs)
    }
}
