//! Seeded generators for reproducible test and benchmark instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numkernel::{root_of_unity, ComplexVector, DenseMatrix, C64};

/// Deterministic instance generator.
pub struct InstanceRng(ChaCha8Rng);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    /// Complex number with independent uniform parts in `[-1, 1)`.
    pub fn complex(&mut self) -> C64 {
        C64::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0))
    }

    pub fn unit(&mut self) -> C64 {
        C64::from_polar(1.0, self.uniform(0.0, std::f64::consts::TAU))
    }

    pub fn vector(&mut self, n: usize) -> ComplexVector {
        (0..n).map(|_| self.complex()).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| self.complex())
    }

    /// Knots uniform in the annulus `r_lo ≤ |z| ≤ r_hi`.
    pub fn annulus(&mut self, n: usize, r_lo: f64, r_hi: f64) -> ComplexVector {
        (0..n)
            .map(|_| {
                let r = self.uniform(r_lo, r_hi);
                C64::from_polar(r, self.uniform(0.0, std::f64::consts::TAU))
            })
            .collect()
    }

    /// Knots near the `n`-th roots of unity: angular jitter up to `jitter`
    /// grid steps and moduli in `[1 − radial, 1 + radial]`.
    pub fn perturbed_circle(&mut self, n: usize, radial: f64, jitter: f64) -> ComplexVector {
        (0..n)
            .map(|i| {
                let r = 1.0 + self.uniform(-radial, radial);
                let shift = self.uniform(-jitter, jitter);
                let base = root_of_unity(n, i as i64);
                let angle = base.arg() + shift * std::f64::consts::TAU / n as f64;
                C64::from_polar(r, angle)
            })
            .collect()
    }

    /// Knots in the unit disk.
    pub fn disk(&mut self, n: usize) -> ComplexVector {
        self.annulus(n, 0.0, 1.0)
    }
}
