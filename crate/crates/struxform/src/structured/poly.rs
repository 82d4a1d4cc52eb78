//! Dense polynomial arithmetic and product-tree multipoint evaluation.
//!
//! Coefficients are stored in ascending order. The tree-based routines run in
//! `O(n log² n)` but are numerically unstable for knots far from the unit
//! circle; they serve as the classical baseline.

use super::fast::cyclic_convolve;
use crate::numkernel::{tally, C64, ONE, ZERO};

const CLASSICAL_CUTOFF: usize = 32;

pub fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= CLASSICAL_CUTOFF {
        let mut out = vec![ZERO; len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        tally::add((a.len() * b.len()) as u64);
        return out;
    }
    let size = len.next_power_of_two();
    let mut fa = vec![ZERO; size];
    fa[..a.len()].copy_from_slice(a);
    let mut fb = vec![ZERO; size];
    fb[..b.len()].copy_from_slice(b);
    cyclic_convolve(&mut fa, fb);
    fa.truncate(len);
    fa
}

/// Inverse of the power series `a` modulo `x^m` by Newton iteration.
pub fn series_inverse(a: &[C64], m: usize) -> Vec<C64> {
    let mut g = vec![ONE / a[0]];
    let mut k = 1;
    while k < m {
        k = (2 * k).min(m);
        let a_trunc = &a[..a.len().min(k)];
        let mut ag = poly_mul(a_trunc, &g);
        ag.truncate(k);
        for z in ag.iter_mut() {
            *z = -*z;
        }
        ag[0] += C64::new(2.0, 0.0);
        let mut next = poly_mul(&g, &ag);
        next.truncate(k);
        g = next;
    }
    g.resize(m, ZERO);
    g
}

/// Remainder of `a` modulo the monic polynomial `b`.
pub fn poly_rem(a: &[C64], b: &[C64]) -> Vec<C64> {
    let db = b.len() - 1;
    if a.len() <= db {
        return a.to_vec();
    }
    if db < CLASSICAL_CUTOFF {
        let mut r = a.to_vec();
        for k in (db..r.len()).rev() {
            let q = r[k];
            if q == ZERO {
                continue;
            }
            for j in 0..=db {
                r[k - db + j] -= q * b[j];
            }
        }
        tally::add(((a.len() - db) * (db + 1)) as u64);
        r.truncate(db);
        return r;
    }
    let m = a.len() - db;
    let rev_a: Vec<C64> = a.iter().rev().copied().collect();
    let rev_b: Vec<C64> = b.iter().rev().copied().collect();
    let inv = series_inverse(&rev_b, m);
    let mut q_rev = poly_mul(&rev_a[..m.min(rev_a.len())], &inv);
    q_rev.truncate(m);
    let q: Vec<C64> = q_rev.into_iter().rev().collect();
    let bq = poly_mul(b, &q);
    let mut r: Vec<C64> = a[..db].iter().zip(&bq).map(|(x, y)| x - y).collect();
    r.resize(db, ZERO);
    r
}

struct Node {
    lo: usize,
    hi: usize,
    poly: Vec<C64>,
    children: Option<(usize, usize)>,
}

/// Tree of the products `∏ (x − s_i)` over dyadic index ranges.
pub struct SubproductTree {
    nodes: Vec<Node>,
    root: usize,
}

impl SubproductTree {
    pub fn new(points: &[C64]) -> Self {
        let mut nodes = Vec::with_capacity(2 * points.len());
        let root = Self::build(points, 0, points.len(), &mut nodes);
        Self { nodes, root }
    }

    fn build(points: &[C64], lo: usize, hi: usize, nodes: &mut Vec<Node>) -> usize {
        if hi - lo == 1 {
            nodes.push(Node {
                lo,
                hi,
                poly: vec![-points[lo], ONE],
                children: None,
            });
            return nodes.len() - 1;
        }
        let mid = (lo + hi) / 2;
        let l = Self::build(points, lo, mid, nodes);
        let r = Self::build(points, mid, hi, nodes);
        let poly = poly_mul(&nodes[l].poly, &nodes[r].poly);
        nodes.push(Node {
            lo,
            hi,
            poly,
            children: Some((l, r)),
        });
        nodes.len() - 1
    }

    /// Coefficients of `∏ (x − s_i)`.
    pub fn root_poly(&self) -> &[C64] {
        &self.nodes[self.root].poly
    }

    /// `p(s_i)` for every point by remaindering down the tree.
    pub fn evaluate(&self, p: &[C64]) -> Vec<C64> {
        let n = self.nodes[self.root].hi;
        let mut out = vec![ZERO; n];
        let r = poly_rem(p, &self.nodes[self.root].poly);
        self.descend(self.root, r, &mut out);
        out
    }

    fn descend(&self, idx: usize, r: Vec<C64>, out: &mut [C64]) {
        let node = &self.nodes[idx];
        match node.children {
            None => out[node.lo] = r.first().copied().unwrap_or(ZERO),
            Some((l, rr)) => {
                let left = poly_rem(&r, &self.nodes[l].poly);
                let right = poly_rem(&r, &self.nodes[rr].poly);
                self.descend(l, left, out);
                self.descend(rr, right, out);
            }
        }
    }
}

/// `(p(s_i))_i` through the product tree.
pub fn multipoint_eval_tree(p: &[C64], points: &[C64]) -> Vec<C64> {
    if points.is_empty() {
        return Vec::new();
    }
    SubproductTree::new(points).evaluate(p)
}

/// `(Σ_i y_i s_i^j)_{j<m}` as the series of `Σ_i y_i / (1 − s_i x)`.
pub fn weighted_power_sums(y: &[C64], points: &[C64], m: usize) -> Vec<C64> {
    if points.is_empty() {
        return vec![ZERO; m];
    }
    let (num, den) = rational_sum(y, points, 0, points.len());
    let inv = series_inverse(&den, m);
    let mut out = poly_mul(&num, &inv);
    out.resize(m, ZERO);
    out.truncate(m);
    out
}

fn rational_sum(y: &[C64], points: &[C64], lo: usize, hi: usize) -> (Vec<C64>, Vec<C64>) {
    if hi - lo == 1 {
        return (vec![y[lo]], vec![ONE, -points[lo]]);
    }
    let mid = (lo + hi) / 2;
    let (n1, d1) = rational_sum(y, points, lo, mid);
    let (n2, d2) = rational_sum(y, points, mid, hi);
    let a = poly_mul(&n1, &d2);
    let b = poly_mul(&n2, &d1);
    let mut num = vec![ZERO; a.len().max(b.len())];
    for (i, z) in a.iter().enumerate() {
        num[i] += z;
    }
    for (i, z) in b.iter().enumerate() {
        num[i] += z;
    }
    (num, poly_mul(&d1, &d2))
}

/// Horner evaluation of `p` at `x`.
pub fn horner(p: &[C64], x: C64) -> C64 {
    p.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
}
