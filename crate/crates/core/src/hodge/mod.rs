//! Mixed Hodge structures over an exact coefficient field.
//!
//! The module provides the canonical bigrading of a filtration pair, purity
//! and polarization checks, and the monodromy weight filtration machinery
//! (single map, commuting cone, and relative over a base filtration).

mod mhs;
mod weight;

pub use mhs::{
    barphi, check_morphism_type, check_polarization, check_polarized_by, check_pure,
    deligne_bigrading, i_pow, is_hodge_tate, is_k_opposed, is_opposite,
    is_positive_definite_hermitian, is_split_real, verify_bigrading, Bigrading, Mhs,
};
pub use weight::{
    jordan_chains, relative_weight_filtration, verify_weight_axioms, weight_filtration,
    weight_filtration_cone,
};
