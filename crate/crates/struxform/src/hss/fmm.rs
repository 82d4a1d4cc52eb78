//! Nested expansions for `y_i = Σ_j x_j/(s_i − f·ωʲ)` over a binary tree of
//! angular source boxes.
//!
//! Multipole coefficients are formed at the leaves and merged upward; local
//! coefficients are passed downward from well-separated boxes at each level.
//! A target uses the local expansion of the deepest box whose disk contains
//! it, and handles the neighbors of that box by multipole evaluation where
//! separated and direct summation at the leaves otherwise.

use std::f64::consts::TAU;

use crate::error::{check_dim, Result, StruxError};
use crate::numkernel::{root_of_unity, tally, ComplexVector, C64, ONE, ZERO};

/// Coarsest level of the tree; it has eight boxes.
const TOP: usize = 3;
/// Leaf boxes hold about this many sources per expansion term.
const LEAF_PER_ORDER: f64 = 1.5;
/// Multipole evaluation is used when `ρ/|s − c|` is at most this.
const M2P_RATIO: f64 = 0.5;

#[derive(Debug, Clone)]
struct Level {
    lo: Vec<usize>,
    centers: Vec<C64>,
    radii: Vec<f64>,
}

impl Level {
    fn boxes(&self) -> usize {
        self.centers.len()
    }

    fn range(&self, b: usize) -> std::ops::Range<usize> {
        self.lo[b]..self.lo[b + 1]
    }

    fn neighbors(&self, b: usize) -> [usize; 3] {
        let m = self.boxes();
        [(b + m - 1) % m, b, (b + 1) % m]
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        let d = a.abs_diff(b);
        d <= 1 || d == self.boxes() - 1
    }
}

#[derive(Debug, Clone, Copy)]
enum Home {
    /// Deepest tree level and box whose disk contains the target.
    Box(usize, usize),
    /// Outside every top-level disk.
    Far,
    Direct,
}

/// Precomputed tree for one set of targets and one source grid.
#[derive(Debug, Clone)]
pub struct CvFmm {
    n: usize,
    f: C64,
    targets: Vec<C64>,
    levels: Vec<Level>,
    homes: Vec<Home>,
    order: usize,
    binom: Vec<Vec<f64>>,
    pub separation: f64,
}

fn binomials(m: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0]];
    for i in 1..=m {
        let prev = &out[i - 1];
        let mut row = vec![1.0; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        out.push(row);
    }
    out
}

/// Expansion order for `b` bits at separation ratio `theta`.
pub fn expansion_order(b: u32, theta: f64) -> usize {
    let bits = b as f64 + 6.0;
    (bits / (1.0 / theta).log2()).ceil() as usize
}

impl CvFmm {
    pub fn new(targets: &[C64], f: C64, b: u32) -> Result<Self> {
        let n = targets.len();
        if f == ZERO || !f.is_finite() {
            return Err(StruxError::InvalidInput("grid scale must be finite and nonzero".into()));
        }
        let source = |j: usize| f * root_of_unity(n, j as i64);
        let top_theta = 0.62;
        let order = expansion_order(b, top_theta);
        let leaf_size = (LEAF_PER_ORDER * order as f64).max(8.0);
        let direct = n < 4 * order.max(16);
        let depth = if direct {
            TOP
        } else {
            ((n as f64 / leaf_size).log2().round() as usize).clamp(TOP, n.ilog2() as usize)
        };
        let mut levels = Vec::new();
        for lev in TOP..=depth {
            let m = 1usize << lev;
            let lo: Vec<usize> = (0..=m).map(|b| b * n / m).collect();
            let mut centers = Vec::with_capacity(m);
            let mut radii = Vec::with_capacity(m);
            for b in 0..m {
                let (a, z) = (lo[b], lo[b + 1].max(lo[b] + 1) - 1);
                let mid = (a + z) as f64 / 2.0;
                let c = C64::from_polar(f.norm(), f.arg() + TAU * mid / n as f64);
                let r = (source(a % n) - c).norm().max((source(z % n) - c).norm());
                centers.push(c);
                radii.push(r.max(f64::MIN_POSITIVE));
            }
            levels.push(Level { lo, centers, radii });
        }
        let mut separation: f64 = 0.0;
        for (li, level) in levels.iter().enumerate() {
            for b in 0..level.boxes() {
                for s in interaction_list(&levels, li, b) {
                    let d = (level.centers[s] - level.centers[b]).norm();
                    separation = separation.max((level.radii[s] + level.radii[b]) / d);
                }
            }
        }
        let order = if direct { order } else { expansion_order(b, separation.max(0.5)) };
        let homes = targets
            .iter()
            .map(|&s| if direct { Home::Direct } else { home_of(&levels, n, f, s) })
            .collect();
        Ok(Self {
            n,
            f,
            targets: targets.to_vec(),
            levels,
            homes,
            order,
            binom: binomials(2 * order + 1),
            separation,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn depth(&self) -> usize {
        TOP + self.levels.len() - 1
    }

    pub fn is_direct(&self) -> bool {
        self.homes.iter().all(|h| matches!(h, Home::Direct))
    }

    fn source(&self, j: usize) -> C64 {
        self.f * root_of_unity(self.n, j as i64)
    }

    pub fn apply(&self, x: &[C64]) -> Result<ComplexVector> {
        check_dim("cv fmm", self.n, x.len())?;
        let sources: Vec<C64> = (0..self.n).map(|j| self.source(j)).collect();
        if self.is_direct() {
            return direct_sum(&self.targets, &sources, x);
        }
        let multipoles = self.upward(&sources, x);
        let locals = self.downward(&multipoles);
        let mut y = Vec::with_capacity(self.n);
        for (i, (&s, home)) in self.targets.iter().zip(&self.homes).enumerate() {
            let v = match *home {
                Home::Box(li, b) => {
                    let level = &self.levels[li];
                    let mut acc = eval_local(&locals[li][b], level.centers[b], level.radii[b], s);
                    for nb in level.neighbors(b) {
                        acc += self.near(&multipoles, &sources, x, li, nb, s, i)?;
                    }
                    acc
                }
                Home::Far => {
                    let mut acc = ZERO;
                    for b in 0..self.levels[0].boxes() {
                        acc += self.near(&multipoles, &sources, x, 0, b, s, i)?;
                    }
                    acc
                }
                Home::Direct => unreachable!("direct plans return early"),
            };
            y.push(v);
        }
        Ok(ComplexVector::raw(y))
    }

    fn upward(&self, sources: &[C64], x: &[C64]) -> Vec<Vec<Vec<C64>>> {
        let p = self.order;
        let deepest = self.levels.len() - 1;
        let mut out: Vec<Vec<Vec<C64>>> = self.levels.iter().map(|l| vec![Vec::new(); l.boxes()]).collect();
        let leaf = &self.levels[deepest];
        for b in 0..leaf.boxes() {
            let (c, rho) = (leaf.centers[b], leaf.radii[b]);
            let mut coef = vec![ZERO; p];
            for j in leaf.range(b) {
                let q = (sources[j] - c) / rho;
                let mut term = x[j];
                for a in coef.iter_mut() {
                    *a += term;
                    term *= q;
                }
            }
            tally::add((leaf.range(b).len() * p) as u64);
            out[deepest][b] = coef;
        }
        for li in (0..deepest).rev() {
            let (parent, child) = (&self.levels[li], &self.levels[li + 1]);
            for b in 0..parent.boxes() {
                let mut coef = vec![ZERO; p];
                for cb in [2 * b, 2 * b + 1] {
                    let d = (child.centers[cb] - parent.centers[b]) / parent.radii[b];
                    let scale = child.radii[cb] / parent.radii[b];
                    let src = &out[li + 1][cb];
                    let dpow = powers(d, p);
                    let spow = powers(C64::new(scale, 0.0), p);
                    for m in 0..p {
                        let mut acc = ZERO;
                        for q in 0..=m {
                            acc += self.binom[m][q] * dpow[m - q] * spow[q] * src[q];
                        }
                        coef[m] += acc;
                    }
                    tally::add((p * (p + 1) / 2) as u64);
                }
                out[li][b] = coef;
            }
        }
        out
    }

    fn downward(&self, multipoles: &[Vec<Vec<C64>>]) -> Vec<Vec<Vec<C64>>> {
        let p = self.order;
        let mut out: Vec<Vec<Vec<C64>>> = Vec::with_capacity(self.levels.len());
        for (li, level) in self.levels.iter().enumerate() {
            let mut row = Vec::with_capacity(level.boxes());
            for b in 0..level.boxes() {
                let mut coef = if li == 0 {
                    vec![ZERO; p]
                } else {
                    let parent = &self.levels[li - 1];
                    let pb = b / 2;
                    self.local_shift(&out[li - 1][pb], parent.centers[pb], parent.radii[pb], level.centers[b], level.radii[b])
                };
                for s in interaction_list(&self.levels, li, b) {
                    self.multipole_to_local(
                        &multipoles[li][s],
                        level.centers[s],
                        level.radii[s],
                        level.centers[b],
                        level.radii[b],
                        &mut coef,
                    );
                }
                row.push(coef);
            }
            out.push(row);
        }
        out
    }

    fn multipole_to_local(&self, a: &[C64], cs: C64, rs: f64, cb: C64, rb: f64, out: &mut [C64]) {
        let p = self.order;
        let d = cb - cs;
        let u = powers(C64::new(rs, 0.0) / d, p);
        let v = powers(-C64::new(rb, 0.0) / d, p);
        let inv = ONE / d;
        for l in 0..p {
            let mut acc = ZERO;
            for m in 0..p {
                acc += self.binom[m + l][l] * a[m] * u[m];
            }
            out[l] += acc * v[l] * inv;
        }
        tally::add((p * p) as u64);
    }

    fn local_shift(&self, b: &[C64], cp: C64, rp: f64, cc: C64, rc: f64) -> Vec<C64> {
        let p = self.order;
        let d = powers((cc - cp) / rp, p);
        let scale = powers(C64::new(rc / rp, 0.0), p);
        let mut out = vec![ZERO; p];
        for (q, o) in out.iter_mut().enumerate() {
            let mut acc = ZERO;
            for l in q..p {
                acc += self.binom[l][q] * b[l] * d[l - q];
            }
            *o = acc * scale[q];
        }
        tally::add((p * (p + 1) / 2) as u64);
        out
    }

    /// Contribution of box `b` at level `li`, refined until separated or direct.
    #[allow(clippy::too_many_arguments)]
    fn near(
        &self,
        multipoles: &[Vec<Vec<C64>>],
        sources: &[C64],
        x: &[C64],
        li: usize,
        b: usize,
        s: C64,
        row: usize,
    ) -> Result<C64> {
        let level = &self.levels[li];
        let (c, rho) = (level.centers[b], level.radii[b]);
        let dist = (s - c).norm();
        if rho <= M2P_RATIO * dist {
            return Ok(eval_multipole(&multipoles[li][b], c, rho, s));
        }
        if li + 1 == self.levels.len() {
            let mut acc = ZERO;
            for j in level.range(b) {
                if s == sources[j] {
                    return Err(StruxError::KnotCollision { row, col: j });
                }
                acc += x[j] / (s - sources[j]);
            }
            tally::add(level.range(b).len() as u64);
            return Ok(acc);
        }
        Ok(self.near(multipoles, sources, x, li + 1, 2 * b, s, row)?
            + self.near(multipoles, sources, x, li + 1, 2 * b + 1, s, row)?)
    }
}

fn powers(z: C64, p: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(p);
    let mut t = ONE;
    for _ in 0..p {
        out.push(t);
        t *= z;
    }
    out
}

fn eval_multipole(a: &[C64], c: C64, rho: f64, s: C64) -> C64 {
    let inv = ONE / (s - c);
    let u = inv * rho;
    let mut acc = ZERO;
    for coef in a.iter().rev() {
        acc = acc * u + coef;
    }
    tally::add(a.len() as u64);
    acc * inv
}

fn eval_local(b: &[C64], c: C64, r: f64, s: C64) -> C64 {
    let w = (s - c) / r;
    let mut acc = ZERO;
    for coef in b.iter().rev() {
        acc = acc * w + coef;
    }
    tally::add(b.len() as u64);
    acc
}

/// Boxes at level `li` that are not adjacent to `b` but whose parents are
/// adjacent to `b`'s parent; every non-adjacent box at the top level.
fn interaction_list(levels: &[Level], li: usize, b: usize) -> Vec<usize> {
    let level = &levels[li];
    if li == 0 {
        return (0..level.boxes()).filter(|&s| !level.adjacent(s, b)).collect();
    }
    let parent = &levels[li - 1];
    parent
        .neighbors(b / 2)
        .into_iter()
        .flat_map(|pb| [2 * pb, 2 * pb + 1])
        .filter(|&s| !level.adjacent(s, b))
        .collect()
}

fn box_of(level: &Level, l: usize) -> usize {
    let m = level.boxes();
    let n = *level.lo.last().expect("nonempty level");
    let mut b = (l * m / n).min(m - 1);
    while level.lo[b] > l {
        b -= 1;
    }
    while level.lo[b + 1] <= l {
        b += 1;
    }
    b
}

fn home_of(levels: &[Level], n: usize, f: C64, s: C64) -> Home {
    let phi = super::partition::relative_angle(s, f);
    let l = ((phi * n as f64 / TAU).round() as usize) % n;
    let mut home = Home::Far;
    for (li, level) in levels.iter().enumerate() {
        let b = box_of(level, l);
        if (s - level.centers[b]).norm() <= level.radii[b] {
            home = Home::Box(li, b);
        } else {
            break;
        }
    }
    home
}

/// `y_i = Σ_j x_j/(s_i − t_j)` by direct summation.
pub fn direct_sum(targets: &[C64], sources: &[C64], x: &[C64]) -> Result<ComplexVector> {
    check_dim("direct Cauchy sum", sources.len(), x.len())?;
    let mut y = Vec::with_capacity(targets.len());
    for (i, &s) in targets.iter().enumerate() {
        let mut acc = ZERO;
        for (j, (&t, &v)) in sources.iter().zip(x).enumerate() {
            if s == t {
                return Err(StruxError::KnotCollision { row: i, col: j });
            }
            acc += v / (s - t);
        }
        y.push(acc);
    }
    tally::add((targets.len() * sources.len()) as u64);
    Ok(ComplexVector::raw(y))
}
