//! Symbolic operator matrices, Sylvester displacements and generator algebra.

mod generator;
mod operator;

pub use generator::{
    displacement_of, displacement_rank, gen_inverse, gen_product, gen_scale_add, gen_transpose,
    recompress, DisplacementGenerator, DEFAULT_RANK_TOL, DEFAULT_RECOMPRESS_TOL,
};
pub use operator::{operator_apply, OperatorSpec};

use crate::error::Result;
use crate::numkernel::{ComplexVector, DenseMatrix, LuFactors, C64};

/// Access to `x ↦ M·x` and `x ↦ Mᵀ·x` for a matrix that may never be formed.
pub trait MatVecHandle: Send + Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Result<ComplexVector>;
    fn apply_transpose(&self, x: &[C64]) -> Result<ComplexVector>;
}

/// Access to `y ↦ M⁻¹·y` and `y ↦ M⁻ᵀ·y`.
pub trait SolveHandle: Send + Sync {
    fn dim(&self) -> usize;
    fn solve(&self, y: &[C64]) -> Result<ComplexVector>;
    fn solve_transpose(&self, y: &[C64]) -> Result<ComplexVector>;
}

impl MatVecHandle for DenseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn apply(&self, x: &[C64]) -> Result<ComplexVector> {
        self.matvec(x)
    }
    fn apply_transpose(&self, x: &[C64]) -> Result<ComplexVector> {
        self.matvec_transpose(x)
    }
}

impl SolveHandle for LuFactors {
    fn dim(&self) -> usize {
        LuFactors::dim(self)
    }
    fn solve(&self, y: &[C64]) -> Result<ComplexVector> {
        LuFactors::solve(self, y)
    }
    fn solve_transpose(&self, y: &[C64]) -> Result<ComplexVector> {
        LuFactors::solve_transpose(self, y)
    }
}
