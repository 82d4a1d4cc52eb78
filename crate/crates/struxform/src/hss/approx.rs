use super::lowrank::{entry_bound, expansion, separation, LowRankBlock};
use super::partition::SectorPartition;
use crate::error::{check_dim, Result, StruxError};
use crate::numkernel::{tally, ComplexVector, DenseMatrix, C64, ZERO};
use crate::structured::CauchySpec;

/// Rows whose separation ratio from a distant sector exceeds this are stored exactly.
const MAX_THETA: f64 = 0.75;

/// An exactly stored block of `PC` on scattered rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaBlock {
    /// Permuted row positions.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub data: DenseMatrix,
}

/// `PC = Σ + Ĉ + E` for a CV matrix `C`: `Σ` holds each row sector against
/// its neighboring column sectors, `Ĉ` holds one truncated expansion per
/// column sector for the remaining rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CvHssApprox {
    pub partition: SectorPartition,
    pub sigma_blocks: Vec<SigmaBlock>,
    pub offdiag_blocks: Vec<LowRankBlock>,
    /// Series order from the accuracy target; blocks may use fewer terms.
    pub k: usize,
    pub b: u32,
    /// Entrywise truncation target for the blocks.
    pub tolerance: f64,
    /// `n³·2^{2−k}/h`.
    pub theoretical_error_bound: f64,
    /// Frobenius bound on the truncation error from the per-block bounds.
    pub truncation_bound: f64,
}

/// Flat sector approximation with about `√(n log n)` knots per sector.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelApprox(pub CvHssApprox);

impl std::ops::Deref for TwoLevelApprox {
    type Target = CvHssApprox;
    fn deref(&self) -> &CvHssApprox {
        &self.0
    }
}

fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

/// `max(1, ⌈2·log₂ n⌉)`.
pub fn auto_sector_size(n: usize) -> usize {
    ((2.0 * log2(n)).ceil() as usize).max(1)
}

/// `⌈√(n·log₂ n)⌉`.
pub fn two_level_sector_size(n: usize) -> usize {
    ((n as f64 * log2(n)).sqrt().ceil() as usize).max(1)
}

/// `⌈3(b+2)·log₂ n⌉`.
pub fn series_order(n: usize, b: u32) -> usize {
    ((3.0 * (b as f64 + 2.0) * log2(n)).ceil() as usize).max(1)
}

/// Smallest order meeting `tol` for a block with ratio `theta` and distance `delta`.
fn block_order(theta: f64, delta: f64, tol: f64, cap: usize) -> usize {
    if theta == 0.0 {
        return 1;
    }
    let need = ((tol * (1.0 - theta) * delta).ln() / theta.ln()).ceil();
    if need.is_finite() {
        (need.max(1.0) as usize).min(cap)
    } else {
        cap
    }
}

fn cauchy_entry(s: C64, t: C64, row: usize, col: usize) -> Result<C64> {
    if s == t {
        return Err(StruxError::KnotCollision { row, col });
    }
    Ok(1.0 / (s - t))
}

/// Frobenius norm of `C` restricted to the five nearest columns of each row.
fn near_norm(part: &SectorPartition) -> f64 {
    let n = part.n;
    let mut sum = 0.0;
    for &s in part.row_knots.iter() {
        let phi = super::partition::relative_angle(s, part.f);
        let l0 = (phi * n as f64 / std::f64::consts::TAU).round() as i64;
        let mut seen = Vec::with_capacity(5);
        for d in -2..=2 {
            let l = (l0 + d).rem_euclid(n as i64) as usize;
            if !seen.contains(&l) {
                seen.push(l);
                let t = part.col_knot(l);
                if s != t {
                    sum += (1.0 / (s - t)).norm_sqr();
                }
            }
        }
    }
    sum.sqrt()
}

/// Builds the sector approximation of a CV matrix to `b` bits.
pub fn build_cv_hss(spec: &CauchySpec, b: u32, h: Option<usize>) -> Result<CvHssApprox> {
    let f = spec.cv_scale()?;
    let n = spec.rows();
    let h = h.unwrap_or_else(|| auto_sector_size(n));
    let part = SectorPartition::new(&spec.row_knots, f, h);
    let k_cap = series_order(n, b);
    let tolerance = 2f64.powi(-(b as i32) - 2) * near_norm(&part) / (n as f64).powf(1.5);

    let mut sigma_blocks = Vec::new();
    for j in 0..part.g {
        let rows: Vec<usize> = part.row_positions(j).collect();
        if rows.is_empty() {
            continue;
        }
        let cols: Vec<usize> = part.neighbors(j).into_iter().flat_map(|k| part.col_range(k)).collect();
        sigma_blocks.push(exact_block(&part, rows, cols)?);
    }

    let mut offdiag_blocks = Vec::new();
    let mut sq_bound = 0.0;
    for k in 0..part.g {
        let cols = part.col_range(k);
        let t: Vec<C64> = cols.clone().map(|l| part.col_knot(l)).collect();
        let c = part.centers[k];
        let rho = t.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
        let (mut far, mut close) = (Vec::new(), Vec::new());
        for j in (0..part.g).filter(|&j| !part.are_neighbors(j, k)) {
            for p in part.row_positions(j) {
                if rho < MAX_THETA * (part.row_knot(p) - c).norm() {
                    far.push(p);
                } else {
                    close.push(p);
                }
            }
        }
        if !close.is_empty() {
            sigma_blocks.push(exact_block(&part, close, cols.clone().collect())?);
        }
        if far.is_empty() {
            continue;
        }
        let s: Vec<C64> = far.iter().map(|&p| part.row_knot(p)).collect();
        let (theta, delta) = separation(&s, &t, c);
        let order = block_order(theta, delta, tolerance, k_cap);
        let mut block = expansion(&s, &t, c, order, theta, delta);
        sq_bound += (far.len() * t.len()) as f64 * entry_bound(theta, delta, order).powi(2);
        block.rows = far;
        block.col_start = cols.start;
        block.col_end = cols.end;
        offdiag_blocks.push(block);
    }
    let theoretical_error_bound = (n as f64).powi(3) * 2f64.powf(2.0 - k_cap as f64) / h as f64;
    Ok(CvHssApprox {
        partition: part,
        sigma_blocks,
        offdiag_blocks,
        k: k_cap,
        b,
        tolerance,
        theoretical_error_bound,
        truncation_bound: sq_bound.sqrt(),
    })
}

fn exact_block(part: &SectorPartition, rows: Vec<usize>, cols: Vec<usize>) -> Result<SigmaBlock> {
    let mut data = DenseMatrix::zeros(rows.len(), cols.len());
    for (a, &p) in rows.iter().enumerate() {
        let s = part.row_knot(p);
        for (bcol, &l) in cols.iter().enumerate() {
            data.set(a, bcol, cauchy_entry(s, part.col_knot(l), part.row_permutation[p], l)?);
        }
    }
    Ok(SigmaBlock { rows, cols, data })
}

/// Flat approximation with the two-level sector size.
pub fn build_two_level(spec: &CauchySpec, b: u32) -> Result<TwoLevelApprox> {
    let n = spec.rows();
    build_cv_hss(spec, b, Some(two_level_sector_size(n))).map(TwoLevelApprox)
}

impl CvHssApprox {
    pub fn dim(&self) -> usize {
        self.partition.n
    }

    /// Column count of all off-diagonal factors.
    pub fn offdiag_rank(&self) -> usize {
        self.offdiag_blocks.iter().map(LowRankBlock::rank).sum()
    }

    pub fn sigma_entries(&self) -> usize {
        self.sigma_blocks.iter().map(|b| b.rows.len() * b.cols.len()).sum()
    }

    /// `(Σ + Ĉ)·x` in permuted row order.
    pub fn matvec_permuted(&self, x: &[C64]) -> Result<ComplexVector> {
        check_dim("hss matvec", self.dim(), x.len())?;
        let mut y = vec![ZERO; self.dim()];
        for blk in &self.sigma_blocks {
            for (a, &p) in blk.rows.iter().enumerate() {
                let row = blk.data.row(a);
                y[p] += row.iter().zip(&blk.cols).map(|(v, &l)| v * x[l]).sum::<C64>();
            }
            tally::add((blk.rows.len() * blk.cols.len()) as u64);
        }
        for blk in &self.offdiag_blocks {
            let w = blk.right.matvec_transpose(&x[blk.col_start..blk.col_end])?;
            let v = blk.left.matvec(&w)?;
            for (a, &p) in blk.rows.iter().enumerate() {
                y[p] += v[a];
            }
        }
        Ok(ComplexVector::raw(y))
    }

    /// Approximates `C·x` in the original row order.
    pub fn matvec(&self, x: &[C64]) -> Result<ComplexVector> {
        let yp = self.matvec_permuted(x)?;
        let mut y = vec![ZERO; self.dim()];
        for (p, &r) in self.partition.row_permutation.iter().enumerate() {
            y[r] = yp[p];
        }
        Ok(ComplexVector::raw(y))
    }

    /// Approximates `Cᵀ·x` with `x` in the original row order.
    pub fn matvec_transpose(&self, x: &[C64]) -> Result<ComplexVector> {
        check_dim("hss transposed matvec", self.dim(), x.len())?;
        let xp: Vec<C64> = self.partition.row_permutation.iter().map(|&r| x[r]).collect();
        let mut y = vec![ZERO; self.dim()];
        for blk in &self.sigma_blocks {
            for (a, &p) in blk.rows.iter().enumerate() {
                for (v, &l) in blk.data.row(a).iter().zip(&blk.cols) {
                    y[l] += v * xp[p];
                }
            }
            tally::add((blk.rows.len() * blk.cols.len()) as u64);
        }
        for blk in &self.offdiag_blocks {
            let xs: Vec<C64> = blk.rows.iter().map(|&p| xp[p]).collect();
            let w = blk.left.matvec_transpose(&xs)?;
            let v = blk.right.matvec(&w)?;
            for (a, l) in (blk.col_start..blk.col_end).enumerate() {
                y[l] += v[a];
            }
        }
        Ok(ComplexVector::raw(y))
    }

    /// Dense `Σ + Ĉ` in permuted row order.
    pub fn to_dense_permuted(&self) -> Result<DenseMatrix> {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        for blk in &self.sigma_blocks {
            for (a, &p) in blk.rows.iter().enumerate() {
                for (bcol, &l) in blk.cols.iter().enumerate() {
                    out.set(p, l, out.get(p, l) + blk.data.get(a, bcol));
                }
            }
        }
        for blk in &self.offdiag_blocks {
            let prod = blk.left.mul_transpose(&blk.right)?;
            for (a, &p) in blk.rows.iter().enumerate() {
                for (bcol, l) in (blk.col_start..blk.col_end).enumerate() {
                    out.set(p, l, out.get(p, l) + prod.get(a, bcol));
                }
            }
        }
        Ok(out)
    }

    /// Exact `PC` from the stored knots.
    pub fn exact_permuted(&self) -> Result<DenseMatrix> {
        let part = &self.partition;
        let mut out = DenseMatrix::zeros(part.n, part.n);
        for p in 0..part.n {
            for l in 0..part.n {
                out.set(p, l, cauchy_entry(part.row_knot(p), part.col_knot(l), part.row_permutation[p], l)?);
            }
        }
        Ok(out)
    }

    /// Dense `E = PC − Σ − Ĉ`.
    pub fn error_matrix(&self) -> Result<DenseMatrix> {
        self.exact_permuted()?.sub(&self.to_dense_permuted()?)
    }
}

pub fn hss_matvec(a: &CvHssApprox, x: &[C64]) -> Result<ComplexVector> {
    a.matvec(x)
}

pub fn two_level_matvec(spec: &CauchySpec, x: &[C64], b: u32) -> Result<ComplexVector> {
    build_two_level(spec, b)?.matvec(x)
}
