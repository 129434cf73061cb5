//! Degenerating variations of Hodge structure in canonical coordinates.
//!
//! Everything here works on a [`crate::amodel::VHSGerm`]: the induced
//! bigrading of the endomorphism algebra, gauge normal forms and the
//! logarithm of the period frame, the horizontality identity and the
//! Higgs field it produces, and the constant opposite filtration with its
//! convolution presentations and coordinate-change rigidity.

mod bigrading;
pub(crate) mod gauge;
mod higgs;
mod psi;

pub use bigrading::{g_bigrading, limit_bigrading, GBigrading};
pub use gauge::{gamma_from_gamma_minus1, gamma_normal_form, x_from_germ, XPresentation};
pub(crate) use gauge::{lift_sym_free, q_degree_part};
pub use higgs::{higgs_field, horizontality_check};
pub use psi::{coordinate_change, psi_convolution_check, psi_filtration};
