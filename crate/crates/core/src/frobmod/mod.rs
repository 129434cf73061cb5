//! Graded Frobenius-type modules and their potential deformations.
//!
//! [`module`] holds the linear-algebra side: graded spaces with a duality
//! pairing, the commuting degree-2 action, axiom validation, twisted
//! pairings, generation checks, and polarization.  [`potential`] holds the
//! function side: cubic classical potentials, q-series deformations, and
//! the deformed product with its order-by-order validation.

mod module;
mod potential;

pub use module::{
    apply_v2_polynomial, is_generated_by_v2, module_bigrading, polarizes, q_form,
    validate_module, FrobeniusModule, GenerationCertificate, GradedSpace, V2Polynomial,
};
pub use potential::{
    action_from_potential, classical_potential, potential_logseries, quantum_action,
    quantum_product, validate_quantum_potential, CubicForm, Potential,
};
