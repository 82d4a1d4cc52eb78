use super::{norm2, tally, DenseMatrix, C64, ZERO};

/// `M ≈ left · rightᵀ` with `left` of orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFactorization {
    pub left: DenseMatrix,
    pub right: DenseMatrix,
    pub tolerance: f64,
    pub residual_norm: f64,
}

impl TruncatedFactorization {
    pub fn rank(&self) -> usize {
        self.left.cols()
    }
}

/// Column-pivoted Householder QR stopped once the trailing block's
/// Frobenius norm drops to `tol·‖M‖` (spectral estimate).
pub fn truncated_factor(m: &DenseMatrix, tol: f64) -> TruncatedFactorization {
    let (rows, cols) = (m.rows(), m.cols());
    let cutoff = tol.max(0.0) * norm2_estimate(m);
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut reflectors: Vec<(Vec<C64>, f64)> = Vec::new();
    let mut residual = 0.0;
    let steps = rows.min(cols);
    let mut rank = steps;
    for k in 0..steps {
        let norms: Vec<f64> = (k..cols)
            .map(|j| norm2(&(k..rows).map(|i| a.get(i, j)).collect::<Vec<_>>()))
            .collect();
        let tail = norm2(&norms.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
        if tail <= cutoff {
            rank = k;
            residual = tail;
            break;
        }
        let p = k + norms
            .iter()
            .enumerate()
            .fold((0, -1.0), |b, (i, &x)| if x > b.1 { (i, x) } else { b })
            .0;
        if p != k {
            for i in 0..rows {
                let t = a.get(i, k);
                a.set(i, k, a.get(i, p));
                a.set(i, p, t);
            }
            perm.swap(k, p);
        }
        let mut v: Vec<C64> = (k..rows).map(|i| a.get(i, k)).collect();
        let xnorm = norm2(&v);
        let phase = if v[0] == ZERO { C64::new(1.0, 0.0) } else { v[0] / v[0].norm() };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let beta: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if beta > 0.0 {
            for j in k..cols {
                let w: C64 = v
                    .iter()
                    .enumerate()
                    .map(|(t, vi)| vi.conj() * a.get(k + t, j))
                    .sum();
                let s = w * (2.0 / beta);
                for (t, vi) in v.iter().enumerate() {
                    let val = a.get(k + t, j) - s * vi;
                    a.set(k + t, j, val);
                }
            }
        }
        tally::add((2 * (rows - k) * (cols - k)) as u64);
        reflectors.push((v, beta));
    }

    let mut left = DenseMatrix::zeros(rows, rank);
    for j in 0..rank {
        left.set(j, j, C64::new(1.0, 0.0));
    }
    for k in (0..rank).rev() {
        let (v, beta) = &reflectors[k];
        if *beta == 0.0 {
            continue;
        }
        for j in 0..rank {
            let w: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi.conj() * left.get(k + t, j))
                .sum();
            let s = w * (2.0 / beta);
            for (t, vi) in v.iter().enumerate() {
                let val = left.get(k + t, j) - s * vi;
                left.set(k + t, j, val);
            }
        }
    }
    let mut right = DenseMatrix::zeros(cols, rank);
    for i in 0..rank {
        for j in i..cols {
            right.set(perm[j], i, a.get(i, j));
        }
    }
    TruncatedFactorization {
        left,
        right,
        tolerance: tol,
        residual_norm: residual,
    }
}

/// The `tol`-rank revealed by [`truncated_factor`].
pub fn numerical_rank(m: &DenseMatrix, tol: f64) -> usize {
    truncated_factor(m, tol).rank()
}

/// Spectral norm estimate by power iteration on `MᴴM`.
pub fn norm2_estimate(m: &DenseMatrix) -> f64 {
    let cols = m.cols();
    if cols == 0 || m.rows() == 0 {
        return 0.0;
    }
    let col_max = (0..cols)
        .map(|j| m.column(j).norm2())
        .fold(0.0f64, f64::max);
    if col_max == 0.0 {
        return 0.0;
    }
    let mut v: Vec<C64> = (0..cols)
        .map(|j| {
            let t = j as f64;
            C64::new(1.0 + 0.5 * (0.7 * t).sin(), 0.3 * (1.3 * t).cos())
        })
        .collect();
    let mut estimate = 0.0;
    for _ in 0..50 {
        let nv = norm2(&v);
        for z in v.iter_mut() {
            *z /= nv;
        }
        let w = m.matvec(&v).expect("square dims");
        let next = norm2(&w);
        let back: Vec<C64> = {
            let conj: Vec<C64> = w.iter().map(|z| z.conj()).collect();
            m.matvec_transpose(&conj)
                .expect("dims")
                .iter()
                .map(|z| z.conj())
                .collect()
        };
        let stagnated = estimate > 0.0 && (next - estimate).abs() <= 1e-6 * next;
        estimate = next;
        if stagnated || norm2(&back) == 0.0 {
            break;
        }
        v = back;
    }
    estimate.max(col_max)
}
