//! Polynomial and Cauchy operations built on the CV machinery: stable
//! Vandermonde products, multipoint evaluation, interpolation, rational
//! evaluation, and Cauchy-like solves.

mod bench;

pub use bench::{run_bench, BenchMethod, BenchReport, BenchTask};

use crate::displacement::{DisplacementGenerator, OperatorSpec};
use crate::error::{check_dim, Result, StruxError};
use crate::hss::fmm::CvFmm;
use crate::hss::{
    build_cv_hss, build_two_level, cauchy_like_hss, cv_solve_detailed, two_level_sector_size, SolvePath,
};
use crate::numkernel::{dft, idft, norm2_estimate, root_of_unity, ComplexVector, DenseMatrix, LuFactors, C64, ONE};
use crate::structured::{cauchy_apply, check_distinct, dft_grid, vandermonde_dense, CauchySpec};
use crate::transform::{choose_unit_scalar, grid_scale};

/// Evaluation or interpolation request.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialJob {
    pub values: ComplexVector,
    pub knots: ComplexVector,
    pub bits: u32,
    pub mode: JobMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JobMode {
    Eval,
    Interp,
}

/// Interpolated coefficients with conditioning diagnostics.
#[derive(Debug, Clone)]
pub struct Interpolation {
    pub coefficients: ComplexVector,
    /// Estimate of `κ(V_s)`; dense when `n` is within the dense limit.
    pub condition_estimate: f64,
    /// `‖C⁻¹‖/‖C‖`-style amplification of the CV solve, estimated the same way.
    pub amplification: f64,
    pub warning: Option<String>,
    pub path: SolvePath,
}

/// Extra accuracy bits absorbing the diagonal scalings: `⌈log₂(3n√n)⌉`.
pub fn boost_bits(n: usize) -> u32 {
    (3.0 * (n.max(1) as f64).powf(1.5)).log2().ceil() as u32
}

/// Unit `f` with `fⁿ` as far as possible from every `s_iⁿ`; returns `(f, margin)`.
pub fn choose_f(s: &[C64]) -> (C64, f64) {
    let n = s.len().max(1);
    let powers: Vec<C64> = s.iter().map(|z| z.powu(n as u32)).collect();
    let (z, margin) = choose_unit_scalar(&powers, 4 * n);
    (C64::from_polar(1.0, z.arg() / n as f64), margin)
}

/// `C·x` for a CV matrix through nested expansions, to `b` bits.
pub fn cv_matvec(spec: &CauchySpec, x: &[C64], b: u32) -> Result<ComplexVector> {
    let f = spec.cv_scale()?;
    check_dim("cv matvec", spec.cols(), x.len())?;
    CvFmm::new(&spec.row_knots, f, b)?.apply(x)
}

/// `Cᵀ·x` for a CV matrix through the sector approximation.
pub fn cv_matvec_transpose(spec: &CauchySpec, x: &[C64], b: u32) -> Result<ComplexVector> {
    build_cv_hss(spec, b, None)?.matvec_transpose(x)
}

/// `(sⁿ − fⁿ)/f^{n−1}` for each knot.
fn row_scaling(s: &[C64], f: C64) -> Vec<C64> {
    let n = s.len() as u32;
    let fnn = f.powu(n);
    let fn1 = f.powu(n.saturating_sub(1));
    s.iter().map(|z| (z.powu(n) - fnn) / fn1).collect()
}

/// `V_s·x` through one CV product, diagonal scalings, and one DFT.
pub fn vandermonde_matvec_stable(s: &ComplexVector, x: &[C64], b: u32) -> Result<ComplexVector> {
    let n = s.len();
    check_dim("vandermonde matvec", n, x.len())?;
    if n == 0 {
        return Ok(ComplexVector::zeros(0));
    }
    let (f, _) = choose_f(s);
    let scaled: Vec<C64> = x.iter().enumerate().map(|(k, v)| v * f.powu(k as u32)).collect();
    let w: Vec<C64> = dft(&scaled)
        .iter()
        .enumerate()
        .map(|(j, v)| v * root_of_unity(n, j as i64) / n as f64)
        .collect();
    let spec = CauchySpec::cv(s.clone(), f)?;
    let cw = cv_matvec(&spec, &w, b + boost_bits(n))?;
    let d = row_scaling(s, f);
    Ok(ComplexVector::raw(cw.iter().zip(&d).map(|(a, b)| a * b).collect()))
}

/// Values of the polynomial with coefficients `p` at the knots.
pub fn multipoint_eval(p: &ComplexVector, knots: &ComplexVector, b: u32) -> Result<ComplexVector> {
    vandermonde_matvec_stable(knots, p, b)
}

fn dense_condition(m: &DenseMatrix) -> Result<f64> {
    let inv = LuFactors::new(m)?.inverse()?;
    Ok(norm2_estimate(m) * norm2_estimate(&inv))
}

/// Coefficients `p` with `V_s·p = v`, solved through the CV transform.
pub fn interpolate(values: &ComplexVector, knots: &ComplexVector, b: u32) -> Result<Interpolation> {
    let n = knots.len();
    check_dim("interpolation values", n, values.len())?;
    check_distinct(knots, "interpolation knots")?;
    if n == 0 {
        return Err(StruxError::InvalidInput("no interpolation knots".into()));
    }
    let (f, _) = choose_f(knots);
    let d = row_scaling(knots, f);
    let rhs: Vec<C64> = values.iter().zip(&d).map(|(v, s)| v / s).collect();
    let spec = CauchySpec::cv(knots.clone(), f)?;
    let bits = b + boost_bits(n);
    let approx = build_two_level(&spec, bits)?;
    let outcome = cv_solve_detailed(&approx, &rhs)?;
    let y: Vec<C64> = outcome
        .x
        .iter()
        .enumerate()
        .map(|(j, v)| v * root_of_unity(n, -(j as i64)) * n as f64)
        .collect();
    let p: Vec<C64> = idft(&y)
        .iter()
        .enumerate()
        .map(|(k, v)| v / f.powu(k as u32))
        .collect();
    let coefficients = ComplexVector::new(p)?;
    let (condition_estimate, amplification) = if n <= crate::dense_limit() {
        let c = spec.to_dense();
        let kc = dense_condition(&c)?;
        let nc = norm2_estimate(&c);
        (dense_condition(&vandermonde_dense(knots))?, kc / (nc * nc))
    } else {
        let vnorm = (knots.iter().map(|z| (0..n).map(|k| z.norm().powi(2 * k as i32)).sum::<f64>()).sum::<f64>()).sqrt();
        let ratio = coefficients.norm2() / values.norm2().max(f64::MIN_POSITIVE);
        (vnorm / (n as f64).sqrt() * ratio, f64::NAN)
    };
    let limit = 1.0 / (n as f64 * 2f64.powi(-(b as i32)));
    let warning = (condition_estimate > limit).then(|| {
        format!("ill-conditioned knots: estimated condition {condition_estimate:.3e} exceeds {limit:.3e}")
    });
    Ok(Interpolation {
        coefficients,
        condition_estimate,
        amplification,
        warning,
        path: outcome.path,
    })
}

/// Coefficients of `∏(x − t_i) − xⁿ` by interpolating `−t_iⁿ`.
pub fn monic_from_roots(t: &ComplexVector, b: u32) -> Result<ComplexVector> {
    let n = t.len() as u32;
    let values: ComplexVector = t.iter().map(|z| -z.powu(n)).collect();
    interpolate(&values, t, b).map(|r| r.coefficients)
}

/// `v_i = Σ_j u_j/(s_i − t_j)`.
///
/// Poles on a scaled root-of-unity grid use [`cv_matvec`]; general poles go
/// through `C = diag(1/τ(s))·V_s·V_t⁻¹·diag(τ'(t))` with `τ(x) = ∏(x − t_j)`.
pub fn rational_eval(u: &ComplexVector, t: &ComplexVector, s: &ComplexVector, b: u32) -> Result<ComplexVector> {
    check_dim("rational evaluation", t.len(), u.len())?;
    check_distinct(t, "poles")?;
    for (i, &si) in s.iter().enumerate() {
        if let Some(j) = t.iter().position(|&tj| tj == si) {
            return Err(StruxError::KnotCollision { row: i, col: j });
        }
    }
    if s.is_empty() || t.is_empty() {
        return Ok(ComplexVector::zeros(s.len()));
    }
    if let Some(sigma) = grid_scale(t).filter(|z| (z.norm() - 1.0).abs() < 1e-12) {
        let spec = CauchySpec::cv(s.clone(), sigma)?;
        return cv_matvec(&spec, u, b);
    }
    if s.len() != t.len() {
        return Err(StruxError::InvalidInput("general poles need as many targets as poles".into()));
    }
    let dtau: Vec<C64> = (0..t.len())
        .map(|j| (0..t.len()).filter(|&k| k != j).map(|k| t[j] - t[k]).product())
        .collect();
    let weighted: ComplexVector = u.iter().zip(&dtau).map(|(a, b)| a * b).collect();
    let q = interpolate(&weighted, t, b)?.coefficients;
    let vals = vandermonde_matvec_stable(s, &q, b)?;
    let tau_s: Vec<C64> = s.iter().map(|&z| t.iter().map(|&tj| z - tj).product()).collect();
    crate::numkernel::tally::add((s.len() * t.len()) as u64);
    Ok(ComplexVector::raw(vals.iter().zip(&tau_s).map(|(v, d)| v / d).collect()))
}

/// Solves `M·x = rhs` for `M` Cauchy-like over `(D_s, D_t)` via
/// `P = M·C_{t,u}` with `u` a unit root-of-unity grid, then `x = C_{t,u}·y`.
pub fn cauchy_like_solve(g: &DisplacementGenerator, rhs: &[C64], b: u32) -> Result<ComplexVector> {
    let (OperatorSpec::Diagonal(s), OperatorSpec::Diagonal(t)) = (&g.a, &g.b) else {
        return Err(StruxError::OperatorMismatch("expected a generator over (D_s, D_t)".into()));
    };
    let n = g.dim();
    check_dim("Cauchy-like solve", n, rhs.len())?;
    let m_spec = CauchySpec::new(s.clone(), t.clone())?;
    let mut both: Vec<C64> = s.to_vec();
    both.extend(t.iter().copied());
    let powers: Vec<C64> = both.iter().map(|z| z.powu(n as u32)).collect();
    let (en, margin) = choose_unit_scalar(&powers, 8 * n);
    if margin <= 1e-12 {
        return Err(StruxError::DegenerateKnots("no grid separated from both knot sets".into()));
    }
    let e = C64::from_polar(1.0, en.arg() / n as f64);
    let u = dft_grid(n, e);

    // M·1 = Σ_j diag(F_j)·C_{s,t}·G_j.
    let bits = b + boost_bits(n);
    let mut m_ones = vec![C64::new(0.0, 0.0); n];
    for j in 0..g.len() {
        let cg = cauchy_apply(&m_spec.row_knots, &m_spec.col_knots, &g.g_factor.column(j), false)?;
        for i in 0..n {
            m_ones[i] += g.f_factor.get(i, j) * cg[i];
        }
    }
    let ctu = CauchySpec::cv(t.clone(), e)?;
    let ctu_hss = build_cv_hss(&ctu, bits, None)?;
    let ctg = g.g_factor.map_columns(n, |c| ctu_hss.matvec_transpose(c))?;
    let ones = DenseMatrix::from_columns(n, &[&vec![ONE; n]]);
    let f_p = g.f_factor.hcat(&DenseMatrix::from_columns(n, &[&m_ones]))?;
    let g_p = ctg.hcat(&ones)?;
    let p = DisplacementGenerator::new(OperatorSpec::diag(s.clone()), OperatorSpec::diag(u), f_p, g_p)?;
    let approx = cauchy_like_hss(&p, bits, Some(two_level_sector_size(n)))?;
    let y = approx.solve(rhs)?.x;
    cv_matvec(&ctu, &y, bits)
}
