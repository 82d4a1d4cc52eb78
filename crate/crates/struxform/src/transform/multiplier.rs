use crate::displacement::{recompress, DisplacementGenerator, OperatorSpec, DEFAULT_RECOMPRESS_TOL};
use crate::error::Result;
use crate::numkernel::{ComplexVector, DenseMatrix, C64};
use crate::structured::{CauchySpec, LinearOp};

/// A canonical multiplier `P` (left) or `N` (right) with its operator identity.
///
/// Left: `to·P − P·from = x·yᵀ`. Right: `from·N − N·to = x·yᵀ`. A missing
/// pair means the identity holds exactly with a zero right-hand side.
#[derive(Debug, Clone)]
pub struct Multiplier {
    pub label: String,
    pub op: LinearOp,
    pub from: OperatorSpec,
    pub to: OperatorSpec,
    pub term: Option<(ComplexVector, ComplexVector)>,
}

/// `s_iⁿ − e`.
pub(crate) fn power_gap(knots: &[C64], e: C64) -> ComplexVector {
    let n = knots.len();
    knots.iter().map(|&s| s.powu(n as u32) - e).collect()
}

fn unit(n: usize, i: usize) -> ComplexVector {
    ComplexVector::basis(n, i)
}

fn neg(v: ComplexVector) -> ComplexVector {
    v.scaled(C64::new(-1.0, 0.0))
}

/// `V_s`, using the DFT form when the knots are a scaled root-of-unity grid.
pub(crate) fn vandermonde_op(knots: &ComplexVector, grid_scale: Option<C64>) -> LinearOp {
    match grid_scale {
        Some(f) => LinearOp::DftVandermonde {
            f,
            n: knots.len(),
            inverse: false,
            transposed: false,
        },
        None => LinearOp::Vandermonde(knots.clone()),
    }
}

impl Multiplier {
    /// `J` swapping a shift and its transpose on either side.
    pub fn reflect(from: &OperatorSpec, n: usize) -> Self {
        Self {
            label: "J".into(),
            op: LinearOp::Reverse(n),
            from: from.clone(),
            to: from.transpose(),
            term: None,
        }
    }

    /// Left `V_s`: `Z_e → D_s`.
    pub fn left_vandermonde(e: C64, s: &ComplexVector, grid: Option<C64>) -> Self {
        let n = s.len();
        Self {
            label: "V_s".into(),
            op: vandermonde_op(s, grid),
            from: OperatorSpec::shift(e),
            to: OperatorSpec::diag(s.clone()),
            term: Some((power_gap(s, e), unit(n, n - 1))),
        }
    }

    /// Left `V_s·J`: `Z_eᵀ → D_s`.
    pub fn left_vandermonde_reflected(e: C64, s: &ComplexVector, grid: Option<C64>) -> Self {
        let n = s.len();
        Self {
            label: "V_s J".into(),
            op: LinearOp::Product(vec![vandermonde_op(s, grid), LinearOp::Reverse(n)]),
            from: OperatorSpec::shift_t(e),
            to: OperatorSpec::diag(s.clone()),
            term: Some((power_gap(s, e), unit(n, 0))),
        }
    }

    /// Left `V_sᵀ`: `D_s → Z_eᵀ`.
    pub fn left_vandermonde_t(s: &ComplexVector, e: C64, grid: Option<C64>) -> Self {
        let n = s.len();
        Self {
            label: "V_s^T".into(),
            op: vandermonde_op(s, grid).transpose(),
            from: OperatorSpec::diag(s.clone()),
            to: OperatorSpec::shift_t(e),
            term: Some((neg(unit(n, n - 1)), power_gap(s, e))),
        }
    }

    /// Left `J·V_sᵀ`: `D_s → Z_e`.
    pub fn left_reflected_vandermonde_t(s: &ComplexVector, e: C64, grid: Option<C64>) -> Self {
        let n = s.len();
        Self {
            label: "J V_s^T".into(),
            op: LinearOp::Product(vec![LinearOp::Reverse(n), vandermonde_op(s, grid).transpose()]),
            from: OperatorSpec::diag(s.clone()),
            to: OperatorSpec::shift(e),
            term: Some((neg(unit(n, 0)), power_gap(s, e))),
        }
    }

    /// Left `C_{t,s}`: `D_s → D_t`.
    pub fn left_cauchy(s: &ComplexVector, t: &ComplexVector) -> Result<Self> {
        let n = s.len();
        let c = CauchySpec::new(t.clone(), s.clone())?;
        Ok(Self {
            label: "C_{t,s}".into(),
            op: LinearOp::Cauchy(c),
            from: OperatorSpec::diag(s.clone()),
            to: OperatorSpec::diag(t.clone()),
            term: Some((ComplexVector::ones(n), ComplexVector::ones(n))),
        })
    }

    /// Right `J·V_tᵀ`: `Z_f → D_t`.
    pub fn right_reflected_vandermonde_t(f: C64, t: &ComplexVector, grid: Option<C64>) -> Self {
        let n = t.len();
        Self {
            label: "J V_t^T".into(),
            op: LinearOp::Product(vec![LinearOp::Reverse(n), vandermonde_op(t, grid).transpose()]),
            from: OperatorSpec::shift(f),
            to: OperatorSpec::diag(t.clone()),
            term: Some((neg(unit(n, 0)), power_gap(t, f))),
        }
    }

    /// Right `V_tᵀ`: `Z_fᵀ → D_t`.
    pub fn right_vandermonde_t(f: C64, t: &ComplexVector, grid: Option<C64>) -> Self {
        let n = t.len();
        Self {
            label: "V_t^T".into(),
            op: vandermonde_op(t, grid).transpose(),
            from: OperatorSpec::shift_t(f),
            to: OperatorSpec::diag(t.clone()),
            term: Some((neg(unit(n, n - 1)), power_gap(t, f))),
        }
    }

    /// Right `V_t`: `D_t → Z_e`.
    pub fn right_vandermonde(t: &ComplexVector, e: C64, grid: Option<C64>) -> Self {
        let n = t.len();
        Self {
            label: "V_t".into(),
            op: vandermonde_op(t, grid),
            from: OperatorSpec::diag(t.clone()),
            to: OperatorSpec::shift(e),
            term: Some((power_gap(t, e), unit(n, n - 1))),
        }
    }

    /// Right `V_t·J`: `D_t → Z_eᵀ`.
    pub fn right_vandermonde_reflected(t: &ComplexVector, e: C64, grid: Option<C64>) -> Self {
        let n = t.len();
        Self {
            label: "V_t J".into(),
            op: LinearOp::Product(vec![vandermonde_op(t, grid), LinearOp::Reverse(n)]),
            from: OperatorSpec::diag(t.clone()),
            to: OperatorSpec::shift_t(e),
            term: Some((power_gap(t, e), unit(n, 0))),
        }
    }

    /// Right `C_{s,t}`: `D_s → D_t`.
    pub fn right_cauchy(s: &ComplexVector, t: &ComplexVector) -> Result<Self> {
        let n = s.len();
        let c = CauchySpec::new(s.clone(), t.clone())?;
        Ok(Self {
            label: "C_{s,t}".into(),
            op: LinearOp::Cauchy(c),
            from: OperatorSpec::diag(s.clone()),
            to: OperatorSpec::diag(t.clone()),
            term: Some((ComplexVector::ones(n), ComplexVector::ones(n))),
        })
    }

    /// Whether the rank-one term is present (it may still vanish numerically).
    pub fn adds_column(&self) -> bool {
        self.term.is_some()
    }

    /// Whether the rank-one term is identically zero up to roundoff.
    pub fn term_vanishes(&self) -> bool {
        match &self.term {
            None => true,
            Some((x, y)) => {
                let scale = 1e-12 * (1.0 + x.max_abs()) * (1.0 + y.max_abs());
                x.max_abs() * y.max_abs() <= scale
            }
        }
    }
}

fn column(v: &[C64]) -> DenseMatrix {
    DenseMatrix::from_columns(v.len(), &[v])
}

/// Generator and action of `P·M` from those of `M`.
pub fn apply_left(
    g: &DisplacementGenerator,
    m: &LinearOp,
    p: &Multiplier,
) -> Result<(DisplacementGenerator, LinearOp)> {
    check_operator(&g.a, &p.from, "left multiplier")?;
    let n = g.dim();
    let mut f = g.f_factor.map_columns(n, |c| p.op.apply(c))?;
    let mut gg = g.g_factor.clone();
    if let Some((x, y)) = &p.term {
        let mty = m.transpose().apply(y)?;
        f = f.hcat(&column(x))?;
        gg = gg.hcat(&column(&mty))?;
    }
    let out = DisplacementGenerator::new(p.to.clone(), g.b.clone(), f, gg)?;
    let action = LinearOp::Product(vec![p.op.clone(), m.clone()]);
    Ok((recompress(&out, DEFAULT_RECOMPRESS_TOL), action))
}

/// Generator and action of `M·N` from those of `M`.
pub fn apply_right(
    g: &DisplacementGenerator,
    m: &LinearOp,
    nmul: &Multiplier,
) -> Result<(DisplacementGenerator, LinearOp)> {
    check_operator(&g.b, &nmul.from, "right multiplier")?;
    let n = g.dim();
    let nt = nmul.op.transpose();
    let mut f = g.f_factor.clone();
    let mut gg = g.g_factor.map_columns(n, |c| nt.apply(c))?;
    if let Some((x, y)) = &nmul.term {
        let mx = m.apply(x)?;
        f = f.hcat(&column(&mx))?;
        gg = gg.hcat(&column(y))?;
    }
    let out = DisplacementGenerator::new(g.a.clone(), nmul.to.clone(), f, gg)?;
    let action = LinearOp::Product(vec![m.clone(), nmul.op.clone()]);
    Ok((recompress(&out, DEFAULT_RECOMPRESS_TOL), action))
}

fn check_operator(actual: &OperatorSpec, expected: &OperatorSpec, what: &str) -> Result<()> {
    if actual == expected {
        Ok(())
    } else {
        Err(crate::error::StruxError::OperatorMismatch(format!(
            "{what} expects {} but generator has {}",
            expected.label(),
            actual.label()
        )))
    }
}
