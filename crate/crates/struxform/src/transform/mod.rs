//! Generator-level maps `M ↦ P·M·N` between the Toeplitz, Hankel,
//! Vandermonde, transposed-Vandermonde and Cauchy classes.
//!
//! Each map is a left and/or right multiplication by a canonical multiplier
//! whose own displacement has rank at most one. The generator of the product
//! is assembled from the generator of `M`, the multiplier, and the action of
//! `M` on one extra vector. Multipliers on a scaled root-of-unity grid make
//! the extra column vanish, so those steps keep the length unchanged.

mod multiplier;
mod primitives;

pub use multiplier::{apply_left, apply_right, Multiplier};
pub use primitives::{
    cauchy_reknot, cauchy_to_vandermonde, hankel_to_toeplitz, toeplitz_to_cauchy_dft,
    toeplitz_to_hankel, toeplitz_to_vandermonde, vandermonde_to_cauchy, vandermonde_to_hankel,
    vandermonde_to_toeplitz, ReknotSide,
};

use crate::displacement::{DisplacementGenerator, OperatorSpec};
use crate::error::{Result, StruxError};
use crate::numkernel::{root_of_unity, ComplexVector, C64, ONE, ZERO};
use crate::structured::{dft_grid, LinearOp};

/// The five structure classes connected by transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureClass {
    T,
    H,
    V,
    VT,
    C,
}

impl StructureClass {
    pub const ALL: [StructureClass; 5] = [Self::T, Self::H, Self::V, Self::VT, Self::C];

    /// Class implied by an operator pair, if it is one of the five.
    pub fn of(a: &OperatorSpec, b: &OperatorSpec) -> Option<Self> {
        match (Kind::of(a), Kind::of(b)) {
            (Kind::Z, Kind::Z) | (Kind::ZT, Kind::ZT) => Some(Self::T),
            (Kind::ZT, Kind::Z) | (Kind::Z, Kind::ZT) => Some(Self::H),
            (Kind::D, Kind::Z) => Some(Self::V),
            (Kind::ZT, Kind::D) => Some(Self::VT),
            (Kind::D, Kind::D) => Some(Self::C),
            _ => None,
        }
    }

    fn pattern(self) -> (Kind, Kind) {
        match self {
            Self::T => (Kind::Z, Kind::Z),
            Self::H => (Kind::ZT, Kind::Z),
            Self::V => (Kind::D, Kind::Z),
            Self::VT => (Kind::ZT, Kind::D),
            Self::C => (Kind::D, Kind::D),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::T => "T",
            Self::H => "H",
            Self::V => "V",
            Self::VT => "VT",
            Self::C => "C",
        }
    }
}

impl std::str::FromStr for StructureClass {
    type Err = StruxError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T" | "TOEPLITZ" => Ok(Self::T),
            "H" | "HANKEL" => Ok(Self::H),
            "V" | "VANDERMONDE" => Ok(Self::V),
            "VT" | "VANDERMONDE_T" => Ok(Self::VT),
            "C" | "CAUCHY" => Ok(Self::C),
            other => Err(StruxError::InvalidInput(format!("unknown class {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Z,
    ZT,
    D,
}

impl Kind {
    fn of(op: &OperatorSpec) -> Self {
        match op {
            OperatorSpec::UnitCirculantShift(_) => Kind::Z,
            OperatorSpec::UnitCirculantShiftTransposed(_) => Kind::ZT,
            OperatorSpec::Diagonal(_) => Kind::D,
        }
    }
}

/// Optional knots and scalars for the operators a plan introduces.
#[derive(Debug, Clone)]
pub struct PlanParams {
    pub row_knots: Option<ComplexVector>,
    pub col_knots: Option<ComplexVector>,
    pub row_scalar: Option<C64>,
    pub col_scalar: Option<C64>,
    /// Prefer root-of-unity grids matched to the existing shift scalars.
    pub prefer_dft: bool,
}

impl Default for PlanParams {
    fn default() -> Self {
        Self {
            row_knots: None,
            col_knots: None,
            row_scalar: None,
            col_scalar: None,
            prefer_dft: true,
        }
    }
}

/// One stage of a plan.
#[derive(Debug, Clone)]
pub enum PlanStep {
    Left(Multiplier),
    Right(Multiplier),
    /// `M ↦ Ω·M·D₀·Ω⁻¹` for generators over `(Z₁, Z₋₁)`.
    DftToeplitzToCauchy,
}

impl PlanStep {
    pub fn label(&self) -> String {
        match self {
            Self::Left(m) => format!("left {}", m.label),
            Self::Right(m) => format!("right {}", m.label),
            Self::DftToeplitzToCauchy => "Omega . D0 Omega^-1".into(),
        }
    }
}

/// A composition of canonical multipliers realizing `source → target`.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    pub source: StructureClass,
    pub target: StructureClass,
    pub steps: Vec<PlanStep>,
    /// Worst-case length growth for the class pair.
    pub growth_bound: usize,
    /// Growth expected for these parameters (vanishing terms excluded).
    pub predicted_growth: usize,
    /// Scalar normalization applied by the multipliers (`1` unless DFT-based).
    pub normalization: C64,
    pub scalars: Vec<(String, C64)>,
}

/// Result of a transform: the new generator and the action of `P·M·N`.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub generator: DisplacementGenerator,
    pub action: LinearOp,
}

/// Worst-case growth for an ordered class pair.
pub fn growth_bound(source: StructureClass, target: StructureClass) -> usize {
    let (sa, sb) = source.pattern();
    let (ta, tb) = target.pattern();
    side_cost(sa, ta) + side_cost(sb, tb)
}

fn side_cost(from: Kind, to: Kind) -> usize {
    match (from, to) {
        (Kind::D, Kind::D) => 0,
        (Kind::D, _) | (_, Kind::D) => 1,
        _ => 0,
    }
}

/// Scaled root-of-unity grid scale `σ` with `knots_j = σ·ω^j`, if any.
pub fn grid_scale(knots: &[C64]) -> Option<C64> {
    let n = knots.len();
    let sigma = *knots.first()?;
    if sigma == ZERO {
        return None;
    }
    let tol = 1e-12 * sigma.norm();
    (0..n)
        .all(|j| (knots[j] - sigma * root_of_unity(n, j as i64)).norm() <= tol)
        .then_some(sigma)
}

/// Unit scalar `z` maximizing `min_i |p_i − z|` over `candidates` equispaced angles.
pub fn choose_unit_scalar(points: &[C64], candidates: usize) -> (C64, f64) {
    let mut best = (ONE, -1.0);
    for k in 0..candidates.max(1) {
        let z = root_of_unity(candidates.max(1), k as i64)
            * C64::from_polar(1.0, std::f64::consts::PI / candidates.max(1) as f64);
        let mut margin = f64::INFINITY;
        for p in points {
            margin = margin.min((p - z).norm());
            if margin <= best.1 {
                break;
            }
        }
        if margin > best.1 {
            best = (z, margin);
        }
    }
    best
}

fn principal_root(e: C64, n: usize) -> C64 {
    if e == ZERO {
        ONE
    } else {
        e.powf(1.0 / n as f64)
    }
}

fn pow_n(knots: &[C64]) -> Vec<C64> {
    let n = knots.len() as u32;
    knots.iter().map(|s| s.powu(n)).collect()
}

/// Picks a scalar for a new shift operator that keeps the output reconstructible.
fn pick_scalar(
    requested: Option<C64>,
    preferred: Option<C64>,
    other_side: &OperatorSpec,
    n: usize,
) -> C64 {
    if let Some(z) = requested {
        return z;
    }
    let ok = |z: C64| match other_side {
        OperatorSpec::Diagonal(s) => pow_n(s).iter().all(|p| (p - z).norm() > 1e-8),
        other => other.scalar().is_some_and(|f| (f - z).norm() > 1e-8),
    };
    if let Some(z) = preferred.filter(|&z| ok(z)) {
        return z;
    }
    match other_side {
        OperatorSpec::Diagonal(s) => choose_unit_scalar(&pow_n(s), 4 * n).0,
        other => {
            let f = other.scalar().unwrap_or(ZERO);
            if f == ZERO {
                ONE
            } else {
                -f
            }
        }
    }
}

/// Builds a plan mapping a generator over `(a, b)` in class `source` to class `target`.
pub fn plan_transform(
    source: StructureClass,
    target: StructureClass,
    a: &OperatorSpec,
    b: &OperatorSpec,
    params: &PlanParams,
) -> Result<TransformPlan> {
    let n = match (a.knots(), b.knots()) {
        (Some(s), _) | (_, Some(s)) => s.len(),
        _ => params
            .row_knots
            .as_ref()
            .or(params.col_knots.as_ref())
            .map(|k| k.len())
            .ok_or_else(|| StruxError::InvalidInput("plan needs the matrix order".into()))?,
    };
    plan_with_order(source, target, a, b, params, n)
}

/// As [`plan_transform`], with the order supplied explicitly.
pub fn plan_with_order(
    source: StructureClass,
    target: StructureClass,
    a: &OperatorSpec,
    b: &OperatorSpec,
    params: &PlanParams,
    n: usize,
) -> Result<TransformPlan> {
    if StructureClass::of(a, b) != Some(source) {
        return Err(StruxError::OperatorMismatch(format!(
            "operators ({}, {}) are not of class {}",
            a.label(),
            b.label(),
            source.name()
        )));
    }
    let bound = growth_bound(source, target);
    let mut scalars = Vec::new();
    let dft_special = source == StructureClass::T
        && target == StructureClass::C
        && params.prefer_dft
        && params.row_knots.is_none()
        && params.col_knots.is_none()
        && *a == OperatorSpec::shift(ONE)
        && *b == OperatorSpec::shift(-ONE);
    if dft_special {
        return Ok(TransformPlan {
            source,
            target,
            steps: vec![PlanStep::DftToeplitzToCauchy],
            growth_bound: bound,
            predicted_growth: 0,
            normalization: C64::new(1.0 / n as f64, 0.0),
            scalars,
        });
    }
    let (ta, tb) = target.pattern();
    let (ka, kb) = (Kind::of(a), Kind::of(b));

    // Default grids for rows and columns sit half a step apart.
    let grid_knots = |given: &Option<ComplexVector>, scalar: C64, half_step: bool| -> (ComplexVector, Option<C64>) {
        match given {
            Some(k) => (k.clone(), grid_scale(k)),
            None => {
                let sigma = if params.prefer_dft {
                    principal_root(scalar, n)
                } else if half_step {
                    C64::from_polar(1.0, 0.5 + std::f64::consts::PI / n as f64)
                } else {
                    C64::from_polar(1.0, 0.5)
                };
                (dft_grid(n, sigma), Some(sigma))
            }
        }
    };

    // Final operators on each side, fixing knots first and scalars second.
    let mut new_a: Option<OperatorSpec> = match (ka, ta) {
        (x, y) if x == y => None,
        (Kind::Z, Kind::ZT) | (Kind::ZT, Kind::Z) => Some(a.transpose()),
        (_, Kind::D) => {
            let (s, _) = grid_knots(&params.row_knots, a.scalar().unwrap_or(ZERO), false);
            Some(OperatorSpec::diag(s))
        }
        _ => None,
    };
    let mut new_b: Option<OperatorSpec> = match (kb, tb) {
        (x, y) if x == y => None,
        (Kind::Z, Kind::ZT) | (Kind::ZT, Kind::Z) => Some(b.transpose()),
        (_, Kind::D) => {
            let (t, _) = grid_knots(&params.col_knots, b.scalar().unwrap_or(ZERO), true);
            Some(OperatorSpec::diag(t))
        }
        _ => None,
    };
    if ka == Kind::D && ta == Kind::D {
        if let Some(k) = &params.row_knots {
            new_a = Some(OperatorSpec::diag(k.clone()));
        }
    }
    if kb == Kind::D && tb == Kind::D {
        if let Some(k) = &params.col_knots {
            new_b = Some(OperatorSpec::diag(k.clone()));
        }
    }
    let a_needs_scalar = ka == Kind::D && ta != Kind::D;
    let b_needs_scalar = kb == Kind::D && tb != Kind::D;
    let grid_power = |op: &OperatorSpec| {
        op.knots()
            .and_then(|k| grid_scale(k))
            .map(|sig| sig.powu(n as u32))
            .filter(|_| params.prefer_dft)
    };
    if a_needs_scalar {
        let other = new_b.clone().unwrap_or_else(|| b.clone());
        let other = if b_needs_scalar { OperatorSpec::shift(ZERO) } else { other };
        let e = pick_scalar(params.row_scalar, grid_power(a), &other, n);
        scalars.push(("row_scalar".into(), e));
        new_a = Some(match ta {
            Kind::Z => OperatorSpec::shift(e),
            _ => OperatorSpec::shift_t(e),
        });
    }
    if b_needs_scalar {
        let other = new_a.clone().unwrap_or_else(|| a.clone());
        let f = pick_scalar(params.col_scalar, grid_power(b), &other, n);
        scalars.push(("col_scalar".into(), f));
        new_b = Some(match tb {
            Kind::Z => OperatorSpec::shift(f),
            _ => OperatorSpec::shift_t(f),
        });
    }

    let mut steps = Vec::new();
    if let Some(to) = &new_a {
        steps.push(PlanStep::Left(left_multiplier(a, to, n)?));
    }
    if let Some(to) = &new_b {
        steps.push(PlanStep::Right(right_multiplier(b, to, n)?));
    }
    let predicted = steps
        .iter()
        .filter(|s| match s {
            PlanStep::Left(m) | PlanStep::Right(m) => !m.term_vanishes(),
            PlanStep::DftToeplitzToCauchy => false,
        })
        .count();
    Ok(TransformPlan {
        source,
        target,
        steps,
        growth_bound: bound.max(predicted),
        predicted_growth: predicted,
        normalization: ONE,
        scalars,
    })
}

fn left_multiplier(from: &OperatorSpec, to: &OperatorSpec, n: usize) -> Result<Multiplier> {
    use OperatorSpec::*;
    Ok(match (from, to) {
        (UnitCirculantShift(_), UnitCirculantShiftTransposed(_))
        | (UnitCirculantShiftTransposed(_), UnitCirculantShift(_)) => Multiplier::reflect(from, n),
        (UnitCirculantShift(e), Diagonal(s)) => Multiplier::left_vandermonde(*e, s, grid_scale(s)),
        (UnitCirculantShiftTransposed(e), Diagonal(s)) => {
            Multiplier::left_vandermonde_reflected(*e, s, grid_scale(s))
        }
        (Diagonal(s), UnitCirculantShiftTransposed(e)) => {
            Multiplier::left_vandermonde_t(s, *e, grid_scale(s))
        }
        (Diagonal(s), UnitCirculantShift(e)) => {
            Multiplier::left_reflected_vandermonde_t(s, *e, grid_scale(s))
        }
        (Diagonal(s), Diagonal(t)) => Multiplier::left_cauchy(s, t)?,
        _ => {
            return Err(StruxError::OperatorMismatch(format!(
                "no left multiplier from {} to {}",
                from.label(),
                to.label()
            )))
        }
    })
}

fn right_multiplier(from: &OperatorSpec, to: &OperatorSpec, n: usize) -> Result<Multiplier> {
    use OperatorSpec::*;
    Ok(match (from, to) {
        (UnitCirculantShift(_), UnitCirculantShiftTransposed(_))
        | (UnitCirculantShiftTransposed(_), UnitCirculantShift(_)) => Multiplier::reflect(from, n),
        (UnitCirculantShift(f), Diagonal(t)) => {
            Multiplier::right_reflected_vandermonde_t(*f, t, grid_scale(t))
        }
        (UnitCirculantShiftTransposed(f), Diagonal(t)) => {
            Multiplier::right_vandermonde_t(*f, t, grid_scale(t))
        }
        (Diagonal(t), UnitCirculantShift(e)) => Multiplier::right_vandermonde(t, *e, grid_scale(t)),
        (Diagonal(t), UnitCirculantShiftTransposed(e)) => {
            Multiplier::right_vandermonde_reflected(t, *e, grid_scale(t))
        }
        (Diagonal(s), Diagonal(t)) => Multiplier::right_cauchy(s, t)?,
        _ => {
            return Err(StruxError::OperatorMismatch(format!(
                "no right multiplier from {} to {}",
                from.label(),
                to.label()
            )))
        }
    })
}

/// Runs a plan on a generator with the action of the matrix it represents.
pub fn execute_plan(plan: &TransformPlan, g: &DisplacementGenerator, m: &LinearOp) -> Result<Transformed> {
    let mut cur = Transformed {
        generator: g.clone(),
        action: m.clone(),
    };
    for step in &plan.steps {
        cur = match step {
            PlanStep::Left(p) => {
                let (generator, action) = apply_left(&cur.generator, &cur.action, p)?;
                Transformed { generator, action }
            }
            PlanStep::Right(q) => {
                let (generator, action) = apply_right(&cur.generator, &cur.action, q)?;
                Transformed { generator, action }
            }
            PlanStep::DftToeplitzToCauchy => toeplitz_to_cauchy_dft(&cur.generator, &cur.action)?,
        };
    }
    Ok(cur)
}
