//! Structured-matrix carriers, fast matvecs, and generator reconstruction.

mod fast;
mod linop;
pub mod poly;
mod reconstruct;
mod specs;

pub use fast::{
    dft_vandermonde_matvec, dft_vandermonde_matvec_transpose, f_circulant_matvec,
    f_circulant_matvec_transpose, hankel_matvec, toeplitz_matvec,
};
pub use linop::LinearOp;
pub use reconstruct::{generator_action, reconstruct, Reconstruction, ReconstructVariant};
pub use specs::{
    cauchy_dense, dft_grid, vandermonde_dense, CauchySpec, FCirculantSpec, HankelSpec,
    ToeplitzSpec, VandermondeSpec,
};

pub(crate) use linop::cauchy_apply;
pub(crate) use specs::check_distinct;

use crate::error::{check_dim, Result};
use crate::numkernel::{ComplexVector, C64};

/// `V_s·x` (or `V_sᵀ·x`) by the product-tree algorithm in `O(n log² n)`.
///
/// This is the classical fast route and loses accuracy quickly for knots off
/// the unit circle.
pub fn vandermonde_matvec_fast(v: &VandermondeSpec, x: &[C64]) -> Result<ComplexVector> {
    check_dim("vandermonde matvec", v.dim(), x.len())?;
    let out = if v.transposed {
        poly::weighted_power_sums(x, &v.knots, v.dim())
    } else {
        poly::multipoint_eval_tree(x, &v.knots)
    };
    ComplexVector::new(out)
}
