use std::collections::BTreeMap;

use super::approx::CvHssApprox;
use crate::error::{check_dim, Result, StruxError};
use crate::numkernel::{norm2, tally, ComplexVector, DenseMatrix, LuFactors, C64, ONE, ZERO};

/// A row of a banded matrix: entries `start..start + vals.len()`.
#[derive(Debug, Clone)]
struct BandRow {
    start: usize,
    vals: Vec<C64>,
}

impl BandRow {
    fn get(&self, c: usize) -> C64 {
        c.checked_sub(self.start)
            .and_then(|i| self.vals.get(i).copied())
            .unwrap_or(ZERO)
    }
}

#[derive(Debug, Clone)]
struct Step {
    pivot: usize,
    elim: Vec<(usize, C64)>,
}

/// LU factors of a banded matrix with partial pivoting.
#[derive(Debug, Clone)]
struct BandedLu {
    upper: Vec<BandRow>,
    steps: Vec<Step>,
}

impl BandedLu {
    /// Rows must be ordered by nondecreasing `start`.
    fn factor(mut rows: Vec<BandRow>, threshold: f64) -> Result<Self> {
        let n = rows.len();
        let mut steps = Vec::with_capacity(n);
        let mut active = 0;
        for c in 0..n {
            while active < n && rows[active].start <= c {
                active += 1;
            }
            let (mut p, mut best) = (c, -1.0);
            for (r, row) in rows.iter().enumerate().take(active).skip(c) {
                let v = row.get(c).norm();
                if v > best {
                    (p, best) = (r, v);
                }
            }
            if active <= c || best <= threshold {
                return Err(StruxError::SigmaSingular);
            }
            rows.swap(c, p);
            let (head, tail) = rows.split_at_mut(c + 1);
            let piv = &head[c];
            let d = piv.get(c);
            let mut elim = Vec::with_capacity(active - c - 1);
            for (off, row) in tail[..active - c - 1].iter_mut().enumerate() {
                let mult = row.get(c) / d;
                let shift = c - row.start;
                if row.vals.len() < piv.vals.len() + shift {
                    row.vals.resize(piv.vals.len() + shift, ZERO);
                }
                if mult != ZERO {
                    for (i, v) in piv.vals.iter().enumerate().skip(1) {
                        row.vals[shift + i] -= mult * v;
                    }
                    tally::add(piv.vals.len() as u64);
                }
                row.vals.drain(..=shift);
                row.start = c + 1;
                elim.push((c + 1 + off, mult));
            }
            steps.push(Step { pivot: p, elim });
        }
        Ok(Self { upper: rows, steps })
    }

    fn solve_in_place(&self, b: &mut [C64]) {
        for (c, step) in self.steps.iter().enumerate() {
            b.swap(c, step.pivot);
            let bc = b[c];
            for &(r, mult) in &step.elim {
                b[r] -= mult * bc;
            }
        }
        for c in (0..b.len()).rev() {
            let row = &self.upper[c];
            let mut acc = b[c];
            for (i, v) in row.vals.iter().enumerate().skip(1) {
                acc -= v * b[c + i];
            }
            b[c] = acc / row.vals[0];
            tally::add(row.vals.len() as u64 + self.steps[c].elim.len() as u64);
        }
    }
}

/// Column weights turning `C` into the Cauchy-like `Σ_j diag(F_j)·C·diag(G_j)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Weights<'a> {
    pub f: &'a DenseMatrix,
    pub g: &'a DenseMatrix,
}

impl Weights<'_> {
    fn entry(&self, row: usize, col: usize) -> C64 {
        self.f.row(row).iter().zip(self.g.row(col)).map(|(a, b)| a * b).sum()
    }
}

/// `PM = S + U·Wᵀ` with `S` banded.
struct Splitting {
    band: Vec<BandRow>,
    u: DenseMatrix,
    w: DenseMatrix,
    norm: f64,
}

fn band_window(a: &CvHssApprox, p: usize) -> (usize, usize) {
    let part = &a.partition;
    let j = part.sector_of_row[part.row_permutation[p]];
    let lo = j.saturating_sub(1) * part.h;
    let hi = ((j + 2) * part.h).min(part.n);
    (lo, hi)
}

fn split(a: &CvHssApprox, weights: Option<Weights>) -> Result<Splitting> {
    let part = &a.partition;
    let n = part.n;
    let perm = &part.row_permutation;
    let mut band: Vec<BandRow> = (0..n)
        .map(|p| {
            let (lo, hi) = band_window(a, p);
            BandRow {
                start: lo,
                vals: vec![ZERO; hi - lo],
            }
        })
        .collect();
    let mut extra: BTreeMap<usize, Vec<(usize, C64)>> = BTreeMap::new();
    let mut sq = 0.0;
    for blk in &a.sigma_blocks {
        for (i, &p) in blk.rows.iter().enumerate() {
            let row = &mut band[p];
            for (j, &l) in blk.cols.iter().enumerate() {
                let mut v = blk.data.get(i, j);
                if let Some(w) = weights {
                    v *= w.entry(perm[p], l);
                }
                sq += v.norm_sqr();
                if l >= row.start && l < row.start + row.vals.len() {
                    row.vals[l - row.start] += v;
                } else {
                    extra.entry(p).or_default().push((l, v));
                }
            }
        }
    }
    let d = weights.map_or(1, |w| w.f.cols());
    let rank = a.offdiag_blocks.iter().map(|b| b.rank() * d).sum::<usize>() + extra.len();
    let mut u = DenseMatrix::zeros(n, rank);
    let mut w = DenseMatrix::zeros(n, rank);
    let mut col = 0;
    for blk in &a.offdiag_blocks {
        for j in 0..d {
            for m in 0..blk.rank() {
                for (i, &p) in blk.rows.iter().enumerate() {
                    let scale = weights.map_or(ONE, |wt| wt.f.get(perm[p], j));
                    u.set(p, col, blk.left.get(i, m) * scale);
                }
                for (i, l) in (blk.col_start..blk.col_end).enumerate() {
                    let scale = weights.map_or(ONE, |wt| wt.g.get(l, j));
                    w.set(l, col, blk.right.get(i, m) * scale);
                }
                col += 1;
            }
        }
    }
    for (p, entries) in extra {
        u.set(p, col, ONE);
        for (l, v) in entries {
            w.set(l, col, w.get(l, col) + v);
        }
        col += 1;
    }
    Ok(Splitting {
        band,
        u,
        w,
        norm: sq.sqrt(),
    })
}

/// How a solve was carried out.
#[derive(Debug, Clone, PartialEq)]
pub enum SolvePath {
    /// Banded factorization with a low-rank correction.
    Woodbury { correction_rank: usize },
    /// Dense factorization after the structured path failed.
    DenseFallback { reason: String },
}

/// Solution with the path taken.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub x: ComplexVector,
    pub path: SolvePath,
}

/// Refinement steps after the first solve.
const MAX_REFINEMENT: usize = 4;
/// Largest relative residual, against the approximation, accepted from the structured path.
const RESIDUAL_LIMIT: f64 = 1e-6;

struct WoodburySolver {
    lu: BandedLu,
    z: DenseMatrix,
    w: DenseMatrix,
    core: LuFactors,
}

impl WoodburySolver {
    fn new(s: Splitting) -> Result<Self> {
        let n = s.band.len();
        let threshold = n as f64 * f64::EPSILON * s.norm;
        let lu = BandedLu::factor(s.band, threshold)?;
        let z = s.u.map_columns(n, |c| {
            let mut v = c.to_vec();
            lu.solve_in_place(&mut v);
            Ok(ComplexVector::raw(v))
        })?;
        let r = z.cols();
        let mut core = s.w.transpose().matmul(&z)?;
        for i in 0..r {
            core.set(i, i, core.get(i, i) + ONE);
        }
        let core = if r == 0 {
            LuFactors::new(&DenseMatrix::identity(1))?
        } else {
            // Small core pivots are left to the refinement steps.
            LuFactors::with_threshold(&core, f64::MIN_POSITIVE).map_err(|_| StruxError::SingularCore)?
        };
        Ok(Self { lu, z, w: s.w, core })
    }

    fn solve(&self, rhs: &[C64]) -> Result<ComplexVector> {
        let mut y = rhs.to_vec();
        self.lu.solve_in_place(&mut y);
        if self.z.cols() == 0 {
            return Ok(ComplexVector::raw(y));
        }
        let v = self.w.matvec_transpose(&y)?;
        let q = self.core.solve(&v)?;
        let corr = self.z.matvec(&q)?;
        Ok(ComplexVector::raw(y.iter().zip(corr.iter()).map(|(a, b)| a - b).collect()))
    }
}

/// Solves `M·x = rhs` for `M = C` or its Cauchy-like weighting, using the
/// approximation's matvec for one step of refinement.
pub(crate) fn structured_solve(
    a: &CvHssApprox,
    weights: Option<Weights>,
    matvec: &dyn Fn(&[C64]) -> Result<ComplexVector>,
    exact: &dyn Fn() -> Result<DenseMatrix>,
    rhs: &[C64],
) -> Result<SolveOutcome> {
    let n = a.dim();
    check_dim("structured solve", n, rhs.len())?;
    let perm = &a.partition.row_permutation;
    let permute = |v: &[C64]| -> Vec<C64> { perm.iter().map(|&r| v[r]).collect() };
    let attempt = split(a, weights).and_then(WoodburySolver::new);
    match attempt {
        Ok(solver) => {
            let rank = solver.z.cols();
            let rhs_norm = norm2(rhs).max(f64::MIN_POSITIVE);
            let mut x = solver.solve(&permute(rhs))?;
            let mut r = ComplexVector::raw(rhs.to_vec()).sub(&matvec(&x)?);
            let mut res = r.norm2() / rhs_norm;
            // One refinement step always; more while each step at least halves the residual.
            for step in 0..MAX_REFINEMENT {
                let mut next = x.clone();
                next.axpy(ONE, &solver.solve(&permute(&r))?);
                let next_r = ComplexVector::raw(rhs.to_vec()).sub(&matvec(&next)?);
                let next_res = next_r.norm2() / rhs_norm;
                if step > 0 && !(next_res < 0.5 * res) {
                    break;
                }
                (x, r, res) = (next, next_r, next_res);
            }
            if res <= RESIDUAL_LIMIT && x.iter().all(|v| v.is_finite()) {
                return Ok(SolveOutcome {
                    x,
                    path: SolvePath::Woodbury { correction_rank: rank },
                });
            }
            fallback(n, StruxError::Unconverged { residual: res }, exact, rhs)
        }
        Err(err @ (StruxError::SigmaSingular | StruxError::SingularCore)) => fallback(n, err, exact, rhs),
        Err(other) => Err(other),
    }
}

fn fallback(
    n: usize,
    reason: StruxError,
    exact: &dyn Fn() -> Result<DenseMatrix>,
    rhs: &[C64],
) -> Result<SolveOutcome> {
    if n > crate::dense_limit() {
        return Err(reason);
    }
    let lu = LuFactors::new(&exact()?)?;
    Ok(SolveOutcome {
        x: lu.solve(rhs)?,
        path: SolvePath::DenseFallback {
            reason: reason.to_string(),
        },
    })
}

/// Solves `C·x = rhs` through the sector approximation.
pub fn cv_solve(a: &CvHssApprox, rhs: &[C64]) -> Result<ComplexVector> {
    cv_solve_detailed(a, rhs).map(|o| o.x)
}

pub fn cv_solve_detailed(a: &CvHssApprox, rhs: &[C64]) -> Result<SolveOutcome> {
    let exact = || {
        let pc = a.exact_permuted()?;
        let mut c = DenseMatrix::zeros(a.dim(), a.dim());
        for (p, &r) in a.partition.row_permutation.iter().enumerate() {
            c.row_mut(r).copy_from_slice(pc.row(p));
        }
        Ok(c)
    };
    structured_solve(a, None, &|x| a.matvec(x), &exact, rhs)
}
