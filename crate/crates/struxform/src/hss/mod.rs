//! Sector decomposition of CV matrices `C = (1/(s_i − f·ωʲ))`.
//!
//! Rows are ordered by argument and grouped into `g` sectors of `h` columns.
//! Interactions between neighboring sectors are stored exactly; every other
//! column sector is expanded about a center on its arc, giving `PC = Σ + Ĉ + E`.
//! The [`fmm`] submodule nests those expansions over a binary sector tree for
//! near-linear matvecs.

mod approx;
mod cauchy_like;
pub mod fmm;
mod lowrank;
mod partition;
mod serialize;
mod solve;

pub use approx::{
    auto_sector_size, build_cv_hss, build_two_level, hss_matvec, series_order, two_level_matvec,
    two_level_sector_size, CvHssApprox, SigmaBlock, TwoLevelApprox,
};
pub use cauchy_like::{cauchy_like_hss, CauchyLikeHss};
pub use lowrank::{separated_factors, separation, LowRankBlock};
pub use partition::{sector_partition, SectorPartition};
pub use serialize::{from_bytes, to_bytes, MAGIC};
pub use solve::{cv_solve, cv_solve_detailed, SolveOutcome, SolvePath};
