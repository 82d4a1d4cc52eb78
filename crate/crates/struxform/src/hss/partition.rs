use std::f64::consts::TAU;
use std::ops::Range;

use crate::numkernel::{ComplexVector, C64};

/// Angular sectors of a CV matrix with column knots `f·ωʲ`.
///
/// Rows are reordered by argument relative to `f`; row sector `j` holds the
/// knots whose argument falls in `[jh, (j+1)h)·2π/n`, column sector `j`
/// holds columns `jh..min((j+1)h, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorPartition {
    pub n: usize,
    pub g: usize,
    pub h: usize,
    /// Column grid scale: `t_j = f·ωʲ`.
    pub f: C64,
    pub row_knots: ComplexVector,
    /// `row_permutation[p]` is the original row placed at position `p`.
    pub row_permutation: Vec<usize>,
    pub sector_of_row: Vec<usize>,
    pub sector_of_col: Vec<usize>,
    /// Positions `row_starts[j]..row_starts[j+1]` form row sector `j`.
    pub row_starts: Vec<usize>,
    pub centers: ComplexVector,
    /// Smallest distance from any center to the row knots.
    pub margin: f64,
}

/// Argument of `z` relative to `f`, in `[0, 2π)`.
pub(crate) fn relative_angle(z: C64, f: C64) -> f64 {
    if z == C64::new(0.0, 0.0) {
        return 0.0;
    }
    let a = (z / f).arg();
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Sector index of the grid step containing angle `phi`.
fn sector_of_angle(phi: f64, n: usize, h: usize) -> usize {
    let step = ((phi * n as f64 / TAU).floor() as usize).min(n - 1);
    step / h
}

impl SectorPartition {
    pub fn new(s: &ComplexVector, f: C64, h: usize) -> Self {
        let n = s.len();
        let h = h.clamp(1, n.max(1));
        let g = n.div_ceil(h);
        let angles: Vec<f64> = s.iter().map(|&z| relative_angle(z, f)).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]).then(a.cmp(&b)));
        let sector_of_row: Vec<usize> = angles.iter().map(|&a| sector_of_angle(a, n, h)).collect();
        let sector_of_col: Vec<usize> = (0..n).map(|l| l / h).collect();
        let mut row_starts = vec![0; g + 1];
        for &r in &perm {
            row_starts[sector_of_row[r] + 1] += 1;
        }
        for j in 0..g {
            row_starts[j + 1] += row_starts[j];
        }
        let mut part = Self {
            n,
            g,
            h,
            f,
            row_knots: s.clone(),
            row_permutation: perm,
            sector_of_row,
            sector_of_col,
            row_starts,
            centers: ComplexVector::zeros(g),
            margin: f64::INFINITY,
        };
        part.place_centers();
        part
    }

    pub fn col_range(&self, j: usize) -> Range<usize> {
        j * self.h..((j + 1) * self.h).min(self.n)
    }

    pub fn row_positions(&self, j: usize) -> Range<usize> {
        self.row_starts[j]..self.row_starts[j + 1]
    }

    /// Knot at permuted position `p`.
    pub fn row_knot(&self, p: usize) -> C64 {
        self.row_knots[self.row_permutation[p]]
    }

    pub fn col_knot(&self, l: usize) -> C64 {
        self.f * crate::numkernel::root_of_unity(self.n, l as i64)
    }

    /// Sectors whose interactions with `j` are stored exactly.
    pub fn neighbors(&self, j: usize) -> Vec<usize> {
        let mut out = vec![j];
        if self.g > 1 {
            out.push((j + self.g - 1) % self.g);
            out.push((j + 1) % self.g);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn are_neighbors(&self, j: usize, k: usize) -> bool {
        let d = j.abs_diff(k);
        d <= 1 || d == self.g - 1
    }

    /// Picks each center on the middle half of its sector's arc, maximizing
    /// the distance to nearby row knots over `4h` candidate angles. Ties go
    /// to the candidate nearest the middle of the arc.
    fn place_centers(&mut self) {
        let radius = self.f.norm();
        let base = self.f.arg();
        let step = TAU / self.n as f64;
        let candidates = 4 * self.h;
        let mut margin = f64::INFINITY;
        for j in 0..self.g {
            let cols = self.col_range(j);
            let width = cols.len() as f64;
            let lo = cols.start as f64 + width / 4.0;
            let hi = cols.start as f64 + 3.0 * width / 4.0;
            let nearby: Vec<C64> = self
                .neighbors(j)
                .into_iter()
                .flat_map(|k| self.row_positions(k))
                .map(|p| self.row_knot(p))
                .collect();
            let mut best = (C64::from_polar(radius, base + step * (lo + hi) / 2.0), -1.0);
            let mut best_frac = f64::INFINITY;
            for c in 0..candidates {
                let frac = if candidates == 1 { 0.5 } else { c as f64 / (candidates - 1) as f64 };
                let z = C64::from_polar(radius, base + step * (lo + frac * (hi - lo)));
                let d = nearby.iter().map(|s| (s - z).norm()).fold(f64::INFINITY, f64::min);
                let tie = (d - best.1).abs() <= 1e-12 * (1.0 + best.1);
                let nearer_middle = (frac - 0.5).abs() < (best_frac - 0.5).abs();
                if (d > best.1 && !tie) || (tie && nearer_middle) {
                    best = (z, d);
                    best_frac = frac;
                }
            }
            self.centers[j] = best.0;
            let full = self
                .row_knots
                .iter()
                .map(|s| (s - best.0).norm())
                .fold(f64::INFINITY, f64::min);
            margin = margin.min(full);
        }
        self.margin = margin;
    }
}

/// Partition of `s` against the grid `f·ωʲ` with `h` columns per sector.
pub fn sector_partition(s: &ComplexVector, f: C64, h: usize) -> SectorPartition {
    SectorPartition::new(s, f, h)
}
