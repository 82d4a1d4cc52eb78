//! Structured matrices through displacement generators.
//!
//! The crate covers dense and FFT kernels ([`numkernel`]), symbolic operator
//! matrices and generator algebra ([`displacement`]), concrete Toeplitz,
//! Hankel, Vandermonde, Cauchy and f-circulant carriers ([`structured`]),
//! generator-level maps between structure classes ([`transform`]),
//! sector-partitioned low-rank approximation of Cauchy matrices on a DFT grid
//! ([`hss`]), and the user-level polynomial and solver routines ([`polytool`]).

pub mod displacement;
pub mod error;
pub mod hss;
pub mod json;
pub mod numkernel;
pub mod polytool;
pub mod random;
pub mod structured;
pub mod transform;

pub use num_complex::Complex64;

pub use displacement::{DisplacementGenerator, MatVecHandle, OperatorSpec, SolveHandle};
pub use error::{Result, StruxError};

pub use numkernel::{tally, ComplexVector, DenseMatrix, TruncatedFactorization};
pub use structured::{
    CauchySpec, FCirculantSpec, HankelSpec, LinearOp, ToeplitzSpec, VandermondeSpec,
};
pub use hss::{CvHssApprox, LowRankBlock, SectorPartition};
pub use transform::{StructureClass, TransformPlan, Transformed};

/// Default cap on sizes for which dense forms and dense oracles are produced.
pub const DEFAULT_DENSE_LIMIT: usize = 512;

/// Dense-size cap, overridable through `STRUXFORM_DENSE_LIMIT`.
pub fn dense_limit() -> usize {
    std::env::var("STRUXFORM_DENSE_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_LIMIT)
}
