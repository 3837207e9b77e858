//! Operator matrices, Moore–Penrose inverses, harmonic spaces and Hodge numbers.

mod assemble;
mod gram;
mod harmonic;
mod hodge;
mod pinv;
mod svd;

pub use assemble::{assemble, assemble_with, LinearOperatorMatrix, Operator};
pub use gram::space_gram;
pub use harmonic::{harmonic_space, harmonic_space_of, DelbarPair, HarmonicSpace};
pub use hodge::{hodge_table, hodge_table_with, row_dims, HodgeTable, RowDims};
pub use pinv::{default_rel_tol, moore_penrose, penrose_residuals, pinv_scaled, pinv_weighted, PseudoInverse, SpectralGap};
pub(crate) use svd::EmbeddedSvd;
