use super::{MatVecHandle, OperatorSpec, SolveHandle};
use crate::error::{check_dim, Result, StruxError};
use crate::numkernel::{numerical_rank, truncated_factor, DenseMatrix, C64};

/// Relative tolerance applied automatically after additions, products and transforms.
pub const DEFAULT_RECOMPRESS_TOL: f64 = 1e-12;
/// Relative tolerance for deciding displacement rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `(A, B, F, G)` with `A·M − M·B = F·Gᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementGenerator {
    pub a: OperatorSpec,
    pub b: OperatorSpec,
    pub f_factor: DenseMatrix,
    pub g_factor: DenseMatrix,
}

impl DisplacementGenerator {
    pub fn new(
        a: OperatorSpec,
        b: OperatorSpec,
        f_factor: DenseMatrix,
        g_factor: DenseMatrix,
    ) -> Result<Self> {
        let n = f_factor.rows();
        check_dim("generator rows", n, g_factor.rows())?;
        check_dim("generator length", f_factor.cols(), g_factor.cols())?;
        a.check_dim(n)?;
        b.check_dim(n)?;
        Ok(Self {
            a,
            b,
            f_factor,
            g_factor,
        })
    }

    /// Exact generator of `M` read off from its dense displacement.
    pub fn from_dense(m: &DenseMatrix, a: OperatorSpec, b: OperatorSpec, tol: f64) -> Result<Self> {
        let disp = displacement_of(m, &a, &b)?;
        let fac = truncated_factor(&disp, tol);
        Self::new(a, b, fac.left, fac.right)
    }

    pub fn dim(&self) -> usize {
        self.f_factor.rows()
    }

    /// Generator length `d`.
    pub fn len(&self) -> usize {
        self.f_factor.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The displacement `F·Gᵀ` in dense form.
    pub fn displacement(&self) -> DenseMatrix {
        self.f_factor
            .mul_transpose(&self.g_factor)
            .expect("generator factors share length")
    }

    /// `‖A·M − M·B − F·Gᵀ‖_F` for a candidate dense `M`.
    pub fn residual(&self, m: &DenseMatrix) -> Result<f64> {
        let disp = displacement_of(m, &self.a, &self.b)?;
        Ok(disp.sub(&self.displacement())?.frobenius_norm())
    }
}

/// `A·M − M·B` through the symbolic operator actions.
pub fn displacement_of(m: &DenseMatrix, a: &OperatorSpec, b: &OperatorSpec) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(StruxError::DimensionMismatch {
            context: "displacement of a non-square matrix",
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let n = m.rows();
    a.check_dim(n)?;
    b.check_dim(n)?;
    let am = m.map_columns(n, |c| a.apply(c))?;
    let bt = b.transpose();
    let mut mb = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let r = bt.apply(m.row(i))?;
        mb.row_mut(i).copy_from_slice(&r);
    }
    am.sub(&mb)
}

/// Numerical rank of `A·M − M·B` at relative tolerance `tol`.
pub fn displacement_rank(m: &DenseMatrix, a: &OperatorSpec, b: &OperatorSpec, tol: f64) -> Result<usize> {
    Ok(numerical_rank(&displacement_of(m, a, b)?, tol))
}

fn same_operator(x: &OperatorSpec, y: &OperatorSpec) -> bool {
    x == y
}

/// Generator of `α·M + β·N` from generators of `M` and `N` over the same operators.
pub fn gen_scale_add(
    alpha: C64,
    g1: &DisplacementGenerator,
    beta: C64,
    g2: &DisplacementGenerator,
) -> Result<DisplacementGenerator> {
    if !same_operator(&g1.a, &g2.a) || !same_operator(&g1.b, &g2.b) {
        return Err(StruxError::OperatorMismatch(
            "summands must share both operators".into(),
        ));
    }
    check_dim("generator sizes", g1.dim(), g2.dim())?;
    let f = g1.f_factor.scale(alpha).hcat(&g2.f_factor.scale(beta))?;
    let g = g1.g_factor.hcat(&g2.g_factor)?;
    let raw = DisplacementGenerator::new(g1.a.clone(), g1.b.clone(), f, g)?;
    Ok(recompress(&raw, DEFAULT_RECOMPRESS_TOL))
}

/// Generator of `Mᵀ` over `(Bᵀ, Aᵀ)`: `F' = −G`, `G' = F`.
pub fn gen_transpose(g: &DisplacementGenerator) -> DisplacementGenerator {
    DisplacementGenerator {
        a: g.b.transpose(),
        b: g.a.transpose(),
        f_factor: g.g_factor.scale(C64::new(-1.0, 0.0)),
        g_factor: g.f_factor.clone(),
    }
}

/// Generator of `M·N` over `(A, C)` given generators over `(A, B)` and `(B, C)`.
pub fn gen_product(
    g_m: &DisplacementGenerator,
    m_action: &dyn MatVecHandle,
    g_n: &DisplacementGenerator,
    n_action: &dyn MatVecHandle,
) -> Result<DisplacementGenerator> {
    if !same_operator(&g_m.b, &g_n.a) {
        return Err(StruxError::OperatorMismatch(format!(
            "middle operators differ: {} vs {}",
            g_m.b.label(),
            g_n.a.label()
        )));
    }
    let n = g_m.dim();
    check_dim("product sizes", n, g_n.dim())?;
    check_dim("left action size", n, m_action.dim())?;
    check_dim("right action size", n, n_action.dim())?;
    let m_fn = g_n.f_factor.map_columns(n, |c| m_action.apply(c))?;
    let nt_gm = g_m.g_factor.map_columns(n, |c| n_action.apply_transpose(c))?;
    let raw = DisplacementGenerator::new(
        g_m.a.clone(),
        g_n.b.clone(),
        g_m.f_factor.hcat(&m_fn)?,
        nt_gm.hcat(&g_n.g_factor)?,
    )?;
    Ok(recompress(&raw, DEFAULT_RECOMPRESS_TOL))
}

/// Generator of `M⁻¹` over `(B, A)`: `F' = −M⁻¹F`, `G' = M⁻ᵀG`.
pub fn gen_inverse(g: &DisplacementGenerator, solver: &dyn SolveHandle) -> Result<DisplacementGenerator> {
    let n = g.dim();
    check_dim("solver size", n, solver.dim())?;
    let f = g
        .f_factor
        .map_columns(n, |c| Ok(solver.solve(c)?.scaled(C64::new(-1.0, 0.0))))?;
    let gg = g.g_factor.map_columns(n, |c| solver.solve_transpose(c))?;
    DisplacementGenerator::new(g.b.clone(), g.a.clone(), f, gg)
}

/// Shortens a generator to the `tol`-rank of its displacement in `O(l²n)`.
pub fn recompress(g: &DisplacementGenerator, tol: f64) -> DisplacementGenerator {
    let n = g.dim();
    if g.is_empty() {
        return g.clone();
    }
    let qf = truncated_factor(&g.f_factor, 0.0);
    let qg = truncated_factor(&g.g_factor, 0.0);
    let core = qf
        .right
        .transpose()
        .matmul(&qg.right)
        .expect("core dimensions");
    let cf = truncated_factor(&core, tol);
    if cf.rank() >= g.len() {
        return g.clone();
    }
    let f = qf.left.matmul(&cf.left).expect("left basis");
    let gg = qg.left.matmul(&cf.right).expect("right basis");
    debug_assert_eq!(f.rows(), n);
    DisplacementGenerator {
        a: g.a.clone(),
        b: g.b.clone(),
        f_factor: f,
        g_factor: gg,
    }
}

