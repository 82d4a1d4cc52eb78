use super::approx::{CvHssApprox, SigmaBlock};
use super::lowrank::LowRankBlock;
use super::partition::SectorPartition;
use crate::error::{Result, StruxError};
use crate::numkernel::{ComplexVector, DenseMatrix, C64};

pub const MAGIC: &[u8; 6] = b"CVHSS1";

struct Writer(Vec<u8>);

impl Writer {
    fn u64(&mut self, v: usize) {
        self.0.extend_from_slice(&(v as u64).to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn c64(&mut self, v: C64) {
        self.f64(v.re);
        self.f64(v.im);
    }
    fn indices(&mut self, v: &[usize]) {
        self.u64(v.len());
        v.iter().for_each(|&i| self.u64(i));
    }
    fn complexes(&mut self, v: &[C64]) {
        self.u64(v.len());
        v.iter().for_each(|&z| self.c64(z));
    }
    fn matrix(&mut self, m: &DenseMatrix) {
        self.u64(m.rows());
        self.u64(m.cols());
        m.data().iter().for_each(|&z| self.c64(z));
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, len: usize) -> Result<&[u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| StruxError::Format("truncated approximation file".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }
    fn u64(&mut self) -> Result<usize> {
        let v = u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes"));
        usize::try_from(v).map_err(|_| StruxError::Format("length overflow".into()))
    }
    fn len(&mut self, per_item: usize) -> Result<usize> {
        let n = self.u64()?;
        if n.saturating_mul(per_item) > self.bytes.len() - self.pos {
            return Err(StruxError::Format("declared length exceeds file size".into()));
        }
        Ok(n)
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn c64(&mut self) -> Result<C64> {
        Ok(C64::new(self.f64()?, self.f64()?))
    }
    fn indices(&mut self, bound: usize) -> Result<Vec<usize>> {
        let n = self.len(8)?;
        let v = (0..n).map(|_| self.u64()).collect::<Result<Vec<_>>>()?;
        if v.iter().any(|&i| i >= bound) {
            return Err(StruxError::Format("index out of range".into()));
        }
        Ok(v)
    }
    fn complexes(&mut self) -> Result<Vec<C64>> {
        let n = self.len(16)?;
        (0..n).map(|_| self.c64()).collect()
    }
    fn matrix(&mut self) -> Result<DenseMatrix> {
        let rows = self.u64()?;
        let cols = self.u64()?;
        let count = rows.saturating_mul(cols);
        if count.saturating_mul(16) > self.bytes.len() - self.pos {
            return Err(StruxError::Format("declared matrix exceeds file size".into()));
        }
        let data = (0..count).map(|_| self.c64()).collect::<Result<Vec<_>>>()?;
        DenseMatrix::new(rows, cols, data)
    }
}

/// Little-endian binary encoding, bit-exact on round trip.
pub fn to_bytes(a: &CvHssApprox) -> Vec<u8> {
    let p = &a.partition;
    let mut w = Writer(MAGIC.to_vec());
    for v in [p.n, p.g, p.h, a.k, a.b as usize] {
        w.u64(v);
    }
    w.c64(p.f);
    for v in [a.tolerance, a.theoretical_error_bound, a.truncation_bound, p.margin] {
        w.f64(v);
    }
    w.indices(&p.row_permutation);
    w.complexes(&p.row_knots);
    w.indices(&p.sector_of_row);
    w.indices(&p.sector_of_col);
    w.indices(&p.row_starts);
    w.complexes(&p.centers);
    w.u64(a.sigma_blocks.len());
    for blk in &a.sigma_blocks {
        w.indices(&blk.rows);
        w.indices(&blk.cols);
        w.matrix(&blk.data);
    }
    w.u64(a.offdiag_blocks.len());
    for blk in &a.offdiag_blocks {
        w.indices(&blk.rows);
        w.u64(blk.col_start);
        w.u64(blk.col_end);
        w.u64(blk.k);
        w.c64(blk.center);
        w.f64(blk.theta);
        w.f64(blk.delta);
        w.matrix(&blk.left);
        w.matrix(&blk.right);
    }
    w.0
}

pub fn from_bytes(bytes: &[u8]) -> Result<CvHssApprox> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(StruxError::Format("missing CVHSS1 header".into()));
    }
    let mut r = Reader {
        bytes,
        pos: MAGIC.len(),
    };
    let (n, g, h, k) = (r.u64()?, r.u64()?, r.u64()?, r.u64()?);
    let b = u32::try_from(r.u64()?).map_err(|_| StruxError::Format("bits overflow".into()))?;
    let f = r.c64()?;
    let (tolerance, theoretical_error_bound, truncation_bound, margin) = (r.f64()?, r.f64()?, r.f64()?, r.f64()?);
    let row_permutation = r.indices(n)?;
    let row_knots = ComplexVector::new(r.complexes()?)?;
    let sector_of_row = r.indices(g)?;
    let sector_of_col = r.indices(g)?;
    let row_starts = r.indices(n + 1)?;
    let centers = ComplexVector::new(r.complexes()?)?;
    if row_permutation.len() != n || row_knots.len() != n || row_starts.len() != g + 1 || centers.len() != g {
        return Err(StruxError::Format("inconsistent partition sizes".into()));
    }
    let partition = SectorPartition {
        n,
        g,
        h,
        f,
        row_knots,
        row_permutation,
        sector_of_row,
        sector_of_col,
        row_starts,
        centers,
        margin,
    };
    let count = r.len(24)?;
    let mut sigma_blocks = Vec::with_capacity(count);
    for _ in 0..count {
        let rows = r.indices(n)?;
        let cols = r.indices(n)?;
        let data = r.matrix()?;
        if data.rows() != rows.len() || data.cols() != cols.len() {
            return Err(StruxError::Format("sigma block shape mismatch".into()));
        }
        sigma_blocks.push(SigmaBlock { rows, cols, data });
    }
    let count = r.len(48)?;
    let mut offdiag_blocks = Vec::with_capacity(count);
    for _ in 0..count {
        let rows = r.indices(n)?;
        let (col_start, col_end, k) = (r.u64()?, r.u64()?, r.u64()?);
        let center = r.c64()?;
        let (theta, delta) = (r.f64()?, r.f64()?);
        let left = r.matrix()?;
        let right = r.matrix()?;
        if col_start > col_end
            || col_end > n
            || left.rows() != rows.len()
            || right.rows() != col_end - col_start
            || left.cols() != right.cols()
        {
            return Err(StruxError::Format("low-rank block shape mismatch".into()));
        }
        offdiag_blocks.push(LowRankBlock {
            rows,
            col_start,
            col_end,
            left,
            right,
            k,
            center,
            theta,
            delta,
        });
    }
    if r.pos != bytes.len() {
        return Err(StruxError::Format("trailing bytes after approximation".into()));
    }
    Ok(CvHssApprox {
        partition,
        sigma_blocks,
        offdiag_blocks,
        k,
        b,
        tolerance,
        theoretical_error_bound,
        truncation_bound,
    })
}
