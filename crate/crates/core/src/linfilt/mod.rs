//! Exact linear algebra: scalars, matrices, subspaces and filtrations.

pub mod filtration;
pub mod matrix;
pub mod scalar;
pub mod subspace;

pub use filtration::{convolve, DecFiltration, IncFiltration};
pub use matrix::ExactMat;
pub use scalar::{rat, ExactScalar, Rat};
pub use subspace::{Quotient, Subspace};
