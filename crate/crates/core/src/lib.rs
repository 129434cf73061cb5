//! Exact calculus for one-parameter-family degenerations of Hodge structures
//! and their Frobenius-module counterparts.
//!
//! Everything here is exact: scalars are Gaussian rationals, series live in
//! truncated polynomial rings over a Laurent ring in the formal period `τ`
//! (a stand-in for 2πi), and every check is an identity of such objects.
//! Floating point appears only in the optional numeric evaluation helpers.
//!
//! The crate is organised in layers:
//!
//! * [`linfilt`] — exact matrices, subspaces in canonical echelon form, and
//!   the calculus of (de|in)creasing filtrations (sum, intersection,
//!   convolution, duals, graded pieces).
//! * [`qseries`] — truncated multivariate `q`-series with `τ`-Laurent
//!   coefficients, log-symbol extensions, and matrix series with exact
//!   exponential/logarithm for nilpotent arguments.
//! * [`hodge`] — mixed Hodge structures: the canonical bigrading, weight
//!   filtrations of nilpotent maps (absolute, centered, relative), and
//!   polarization checks.
//! * [`frobmod`] — graded Frobenius modules, classical and quantum
//!   potentials, and the deformed module structure they generate.
//! * [`amodel`] — the connection attached to a deformed module and the germ
//!   of the associated variation.
//! * [`degeneration`] — normal forms for period germs, horizontality, the
//!   Higgs field, and the induced opposite filtration.
//! * [`vhs2frob`] — the reverse direction: canonical coordinates, module and
//!   potential extraction from a germ, and weight-3 extension data.
//! * [`unfold`] — promotion of a module to a Frobenius algebra and the
//!   pointwise Frobenius-manifold checks for the unfolded product.
//!
//! All types are immutable after construction and freely shareable across
//! threads; operations are pure functions of their inputs.

pub mod amodel;
pub mod commands;
pub mod degeneration;
pub mod error;
pub mod fixtures;
pub mod frobmod;
pub mod hodge;
pub mod instance;
pub mod linfilt;
pub mod qseries;
pub mod report;
pub mod unfold;
pub mod vhs2frob;

pub use error::Error;
pub use report::{CheckItem, Location, Report};

/// Default total-degree truncation order for `q`-series.
///
/// Overridable per object; the CLI exposes it as `--order` and the
/// `HODGEFROB_ORDER` environment variable.
pub const DEFAULT_ORDER: u32 = 6;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
