//! From degenerating Hodge-theoretic germs back to Frobenius modules.
//!
//! The constructions in [`crate::amodel`] start from a graded module with a
//! potential and produce a germ.  This module inverts that arrow for germs
//! whose limit structure is diagonal and real-split:
//!
//! * [`canonical_coordinates`] rescales the disc coordinates by unit series
//!   so that the level `−1` part of the gauge function annihilates the
//!   marked block of the limit bigrading — the normalization that makes the
//!   remaining extractions well defined;
//! * [`extract_module`] reads the graded module, its pairing, and the
//!   classical actions off a normalized germ and a choice of real generator
//!   of the top piece;
//! * [`potential_from_germ`] recovers the deformation data itself, so that
//!   running the forward construction on the result reproduces the germ;
//! * [`extension_data_weight3`] packages the weight-3 case: canonical
//!   coordinates together with the triple couplings of the one-parameter
//!   family they frame.
//!
//! All of it is exact: coordinates, gauge functions, and couplings live in
//! the same truncated series rings as the forward direction, and the
//! round-trip tests compare them for equality rather than numerically.

mod canonical;
mod extension;
mod extract;

pub use canonical::{canonical_coordinates, CanonicalCoordinates};
pub use extension::{extension_data_weight3, ExtensionData};
pub use extract::{
    extract_module, gamma_minus2, potential_from_germ, quantum_action_from_germ,
    quantum_product_from_x, ExtractedModule,
};
