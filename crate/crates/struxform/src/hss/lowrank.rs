use crate::error::{Result, StruxError};
use crate::numkernel::{tally, ComplexVector, DenseMatrix, C64};

/// Truncated expansion of `1/(s − t)` about a center `c`.
///
/// `left[i][m] = ρᵐ/(s_i − c)^{m+1}` and `right[j][m] = ((t_j − c)/ρ)ᵐ` for
/// `m < k`, with `ρ = max|t_j − c|` keeping both factors bounded.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankBlock {
    /// Permuted row positions covered by the block.
    pub rows: Vec<usize>,
    pub col_start: usize,
    pub col_end: usize,
    pub left: DenseMatrix,
    pub right: DenseMatrix,
    pub k: usize,
    pub center: C64,
    /// `max|t − c| / min|s − c|`.
    pub theta: f64,
    /// `min|s − c|`.
    pub delta: f64,
}

impl LowRankBlock {
    /// Bound on every entry of the truncation error.
    pub fn entry_bound(&self) -> f64 {
        entry_bound(self.theta, self.delta, self.k)
    }

    pub fn rank(&self) -> usize {
        self.left.cols()
    }
}

pub(crate) fn entry_bound(theta: f64, delta: f64, k: usize) -> f64 {
    if theta == 0.0 {
        0.0
    } else {
        theta.powi(k as i32) / ((1.0 - theta) * delta)
    }
}

/// Separation ratio and distance of `s` from `c` relative to `t`.
pub fn separation(s: &[C64], t: &[C64], c: C64) -> (f64, f64) {
    let rho = t.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    let delta = s.iter().map(|z| (z - c).norm()).fold(f64::INFINITY, f64::min);
    (rho / delta, delta)
}

/// Expansion factors of the Cauchy block `1/(s_i − t_j)` about `c` with `k` terms.
pub fn separated_factors(s: &ComplexVector, t: &ComplexVector, c: C64, k: usize) -> Result<LowRankBlock> {
    let (theta, delta) = separation(s, t, c);
    if !(theta < 1.0) {
        return Err(StruxError::SeparationViolation { ratio: theta });
    }
    let mut block = expansion(s, t, c, k.max(1), theta, delta);
    block.rows = (0..s.len()).collect();
    block.col_end = t.len();
    Ok(block)
}

pub(crate) fn expansion(s: &[C64], t: &[C64], c: C64, k: usize, theta: f64, delta: f64) -> LowRankBlock {
    let rho = t.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    let rho = if rho > 0.0 { rho } else { 1.0 };
    let mut left = DenseMatrix::zeros(s.len(), k);
    for (i, &si) in s.iter().enumerate() {
        let q = C64::new(rho, 0.0) / (si - c);
        let mut term = 1.0 / (si - c);
        for m in 0..k {
            left.set(i, m, term);
            term *= q;
        }
    }
    let mut right = DenseMatrix::zeros(t.len(), k);
    for (j, &tj) in t.iter().enumerate() {
        let q = (tj - c) / rho;
        let mut term = C64::new(1.0, 0.0);
        for m in 0..k {
            right.set(j, m, term);
            term *= q;
        }
    }
    tally::add((k * (s.len() + t.len())) as u64);
    LowRankBlock {
        rows: Vec::new(),
        col_start: 0,
        col_end: 0,
        left,
        right,
        k,
        center: c,
        theta,
        delta,
    }
}
