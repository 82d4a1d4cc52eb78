use super::{execute_plan, plan_with_order, PlanParams, StructureClass, Transformed};
use crate::displacement::{recompress, DisplacementGenerator, OperatorSpec, DEFAULT_RECOMPRESS_TOL};
use crate::error::{Result, StruxError};
use crate::numkernel::{root_of_unity, ComplexVector, C64, ONE};
use crate::structured::LinearOp;

fn run(
    source: StructureClass,
    target: StructureClass,
    g: &DisplacementGenerator,
    m: &LinearOp,
    params: &PlanParams,
) -> Result<Transformed> {
    let plan = plan_with_order(source, target, &g.a, &g.b, params, g.dim())?;
    execute_plan(&plan, g, m)
}

fn class_of(g: &DisplacementGenerator) -> Result<StructureClass> {
    StructureClass::of(&g.a, &g.b).ok_or_else(|| {
        StruxError::OperatorMismatch(format!("unsupported pair ({}, {})", g.a.label(), g.b.label()))
    })
}

/// Toeplitz-like to Hankel-like by reflecting the rows.
pub fn toeplitz_to_hankel(g: &DisplacementGenerator, m: &LinearOp) -> Result<Transformed> {
    run(StructureClass::T, StructureClass::H, g, m, &PlanParams::default())
}

/// Hankel-like (either orientation) to Toeplitz-like.
pub fn hankel_to_toeplitz(g: &DisplacementGenerator, m: &LinearOp) -> Result<Transformed> {
    run(StructureClass::H, StructureClass::T, g, m, &PlanParams::default())
}

/// Toeplitz-like to Vandermonde-like with the given row knots.
pub fn toeplitz_to_vandermonde(
    g: &DisplacementGenerator,
    m: &LinearOp,
    knots: Option<ComplexVector>,
) -> Result<Transformed> {
    let params = PlanParams {
        row_knots: knots,
        ..PlanParams::default()
    };
    run(StructureClass::T, StructureClass::V, g, m, &params)
}

/// Vandermonde-like to Hankel-like with an optional new row scalar.
pub fn vandermonde_to_hankel(
    g: &DisplacementGenerator,
    m: &LinearOp,
    scalar: Option<C64>,
) -> Result<Transformed> {
    let params = PlanParams {
        row_scalar: scalar,
        ..PlanParams::default()
    };
    run(StructureClass::V, StructureClass::H, g, m, &params)
}

/// Vandermonde-like to Toeplitz-like with an optional new row scalar.
pub fn vandermonde_to_toeplitz(
    g: &DisplacementGenerator,
    m: &LinearOp,
    scalar: Option<C64>,
) -> Result<Transformed> {
    let params = PlanParams {
        row_scalar: scalar,
        ..PlanParams::default()
    };
    run(StructureClass::V, StructureClass::T, g, m, &params)
}

/// Vandermonde-like to Cauchy-like with the given column knots.
pub fn vandermonde_to_cauchy(
    g: &DisplacementGenerator,
    m: &LinearOp,
    knots: Option<ComplexVector>,
) -> Result<Transformed> {
    let params = PlanParams {
        col_knots: knots,
        ..PlanParams::default()
    };
    run(StructureClass::V, StructureClass::C, g, m, &params)
}

/// Cauchy-like to Vandermonde-like with an optional new column scalar.
pub fn cauchy_to_vandermonde(
    g: &DisplacementGenerator,
    m: &LinearOp,
    scalar: Option<C64>,
) -> Result<Transformed> {
    let params = PlanParams {
        col_scalar: scalar,
        ..PlanParams::default()
    };
    run(StructureClass::C, StructureClass::V, g, m, &params)
}

/// Which knot set of a Cauchy-like generator to replace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReknotSide {
    Rows,
    Columns,
}

/// Moves a Cauchy-like generator to new row or column knots.
pub fn cauchy_reknot(
    g: &DisplacementGenerator,
    m: &LinearOp,
    side: ReknotSide,
    knots: ComplexVector,
) -> Result<Transformed> {
    if class_of(g)? != StructureClass::C {
        return Err(StruxError::OperatorMismatch("reknotting needs a Cauchy-like generator".into()));
    }
    let params = match side {
        ReknotSide::Rows => PlanParams {
            row_knots: Some(knots),
            ..PlanParams::default()
        },
        ReknotSide::Columns => PlanParams {
            col_knots: Some(knots),
            ..PlanParams::default()
        },
    };
    run(StructureClass::C, StructureClass::C, g, m, &params)
}

/// `C = Ω·M·D₀·Ω⁻¹` for `M` Toeplitz-like over `(Z₁, Z₋₁)`, with
/// `D₀ = diag(ω_{2n}^j)`.
///
/// The result is Cauchy-like over `(D_s, D_t)` with `s_i = ωⁱ` and
/// `t_j = ω_{2n}⁻¹·ω^j`, and keeps the generator length.
pub fn toeplitz_to_cauchy_dft(g: &DisplacementGenerator, m: &LinearOp) -> Result<Transformed> {
    let n = g.dim();
    if g.a != OperatorSpec::shift(ONE) || g.b != OperatorSpec::shift(-ONE) {
        return Err(StruxError::OperatorMismatch(
            "the DFT map needs a generator over (Z_1, Z_-1)".into(),
        ));
    }
    let omega = LinearOp::DftVandermonde {
        f: ONE,
        n,
        inverse: false,
        transposed: false,
    };
    let omega_inv = LinearOp::DftVandermonde {
        f: ONE,
        n,
        inverse: true,
        transposed: false,
    };
    let d0: ComplexVector = (0..n).map(|j| root_of_unity(2 * n, j as i64)).collect();
    let f_new = g.f_factor.map_columns(n, |c| omega.apply(c))?;
    let g_new = g
        .g_factor
        .map_columns(n, |c| omega_inv.apply(&c.hadamard(&d0)))?;
    let s: ComplexVector = (0..n).map(|i| root_of_unity(n, i as i64)).collect();
    let t: ComplexVector = (0..n)
        .map(|j| root_of_unity(2 * n, -1) * root_of_unity(n, j as i64))
        .collect();
    let generator = DisplacementGenerator::new(
        OperatorSpec::diag(s),
        OperatorSpec::diag(t),
        f_new,
        g_new,
    )?;
    let action = LinearOp::Product(vec![omega, m.clone(), LinearOp::Diagonal(d0), omega_inv]);
    Ok(Transformed {
        generator: recompress(&generator, DEFAULT_RECOMPRESS_TOL),
        action,
    })
}
