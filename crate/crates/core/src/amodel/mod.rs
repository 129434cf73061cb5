//! Quantum products as flat first-order systems, and the Hodge-theoretic
//! germs they induce.
//!
//! A graded Frobenius module with a quantum potential determines
//! connection matrices over the deformation space ([`ConnectionMatrix`]);
//! flatness, Griffiths transversality and pairing invariance are checked
//! as exact series identities.  [`build_vhs_germ`] packages the same data
//! as a variation-of-Hodge-structure germ, the object the degeneration
//! calculus operates on, and [`maximal_unipotency_check`] verifies the
//! limit structure has the mirror-symmetry shape.

mod connection;
mod germ;

pub use connection::{
    dubrovin_connection, flatness_check, pairing_flatness_check, transversality_check,
    ConnectionMatrix,
};
pub use germ::{build_vhs_germ, maximal_unipotency_check, module_filtration, VHSGerm};
