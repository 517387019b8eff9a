//! Rank/select primitives. All public positions are 1-based and `rank(p)`
//! counts over `[1..p]` inclusive.

mod dense;
mod intvec;
mod sparse;
mod wavelet;

pub use dense::DenseBV;
pub use intvec::{bits_for, ceil_log2, IntVec};
pub use sparse::SparseBV;
pub use wavelet::RunHeadSeq;
