//! Built-in example data: small graded Frobenius modules and potentials.
//!
//! These are the recurring instances of the test suite and the `fixture`
//! source of the command-line interface.  Each constructor documents the
//! ring it models; all of them validate cleanly under
//! [`crate::frobmod::validate_module`].

use std::collections::BTreeMap;

use crate::frobmod::{FrobeniusModule, Potential};
use crate::linfilt::{ExactMat, ExactScalar};
use crate::qseries::QSeries;

/// Weight-3 module with Hodge numbers (1,1,1,1) and a single degree-2
/// generator `T₁` with `T₁∗T₁ = 5T₂`, `T₁∗T₂ = T₃` — the cohomology ring
/// of a quintic threefold with the classical triple intersection number 5.
pub fn quintic_module() -> FrobeniusModule {
    let b = ExactMat::from_int_rows(&[
        &[0, 0, 0, 1],
        &[0, 0, 1, 0],
        &[0, 1, 0, 0],
        &[1, 0, 0, 0],
    ]);
    let a1 = ExactMat::from_int_rows(&[
        &[0, 0, 0, 0],
        &[1, 0, 0, 0],
        &[0, 5, 0, 0],
        &[0, 0, 1, 0],
    ]);
    FrobeniusModule::new(3, &[1, 1, 1, 1], b, vec![a1], true).unwrap()
}

/// The simplest nonzero weight-3 deformation of [`quintic_module`]:
/// `φ_ħ = q₁`, truncated at `order`.
pub fn quintic_potential(order: u32) -> Potential {
    let m = quintic_module();
    Potential::weight3(m.space(), QSeries::var(1, order, 0)).unwrap()
}

/// The cohomology of P¹ × P³ in the basis 1, x, y, xy, y², xy², y³, xy³
/// (x from the line, y from the 3-space; x² = 0, y⁴ = 0).  Weight 4 with
/// two degree-2 generators, so deformations carry a labelled part.
pub fn p1_x_p3_module() -> FrobeniusModule {
    let mut b = ExactMat::zeros(8, 8);
    for (a, c) in [(0, 7), (1, 6), (2, 5), (3, 4)] {
        b.set(a, c, ExactScalar::one());
        b.set(c, a, ExactScalar::one());
    }
    // multiplication by x
    let mut ax = ExactMat::zeros(8, 8);
    for (img, src) in [(1, 0), (3, 2), (5, 4), (7, 6)] {
        ax.set(img, src, ExactScalar::one());
    }
    // multiplication by y
    let mut ay = ExactMat::zeros(8, 8);
    for (img, src) in [(2, 0), (3, 1), (4, 2), (5, 3), (6, 4), (7, 5)] {
        ay.set(img, src, ExactScalar::one());
    }
    FrobeniusModule::new(4, &[1, 2, 2, 2, 1], b, vec![ax, ay], true).unwrap()
}

/// A weight-4 deformation of [`p1_x_p3_module`] with a single linear part
/// on the degree-4 label `xy`: the coefficient series `f3` multiplies
/// `z₃` in the potential.  `f3 = q₁` keeps the deformed product
/// associative; `f3 = q₁q₂` breaks it at order 2.
pub fn p1_x_p3_potential(f3: QSeries) -> Potential {
    let m = p1_x_p3_module();
    let order = f3.order();
    let mut linear = BTreeMap::new();
    linear.insert(3usize, f3);
    Potential::with_parts(m.space(), order, linear, BTreeMap::new()).unwrap()
}

/// The cohomology of P¹ × P¹ in the basis 1, x, y, xy: weight 2, Hodge
/// numbers (1,2,1), two commuting degree-2 actions.
pub fn p1_x_p1_module() -> FrobeniusModule {
    let mut b = ExactMat::zeros(4, 4);
    for (a, c) in [(0, 3), (1, 2)] {
        b.set(a, c, ExactScalar::one());
        b.set(c, a, ExactScalar::one());
    }
    let mut ax = ExactMat::zeros(4, 4);
    for (img, src) in [(1, 0), (3, 2)] {
        ax.set(img, src, ExactScalar::one());
    }
    let mut ay = ExactMat::zeros(4, 4);
    for (img, src) in [(2, 0), (3, 1)] {
        ay.set(img, src, ExactScalar::one());
    }
    FrobeniusModule::new(2, &[1, 2, 1], b, vec![ax, ay], true).unwrap()
}

/// Weight-4 module with Hodge numbers (1,1,1,1,1) and one generator whose
/// action has the anharmonic profile 1, 7, 7, 1 along the subdiagonal.
pub fn weight4_chain_module() -> FrobeniusModule {
    let mut b = ExactMat::zeros(5, 5);
    for a in 0..5 {
        b.set(a, 4 - a, ExactScalar::one());
    }
    let mut a1 = ExactMat::zeros(5, 5);
    for (i, c) in [1i64, 7, 7, 1].iter().enumerate() {
        a1.set(i + 1, i, ExactScalar::from_int(*c));
    }
    FrobeniusModule::new(4, &[1, 1, 1, 1, 1], b, vec![a1], true).unwrap()
}

/// Weight-5 module with Hodge numbers (1,1,1,1,1,1) and one generator with
/// the symmetric profile 1, 2, 3, 2, 1 along the subdiagonal.
pub fn weight5_chain_module() -> FrobeniusModule {
    let mut b = ExactMat::zeros(6, 6);
    for a in 0..6 {
        b.set(a, 5 - a, ExactScalar::one());
    }
    let mut a1 = ExactMat::zeros(6, 6);
    for (i, c) in [1i64, 2, 3, 2, 1].iter().enumerate() {
        a1.set(i + 1, i, ExactScalar::from_int(*c));
    }
    FrobeniusModule::new(5, &[1, 1, 1, 1, 1, 1], b, vec![a1], true).unwrap()
}

/// A weight-5 deformation of [`weight5_chain_module`] exercising both
/// labelled parts a potential can carry: `f3` multiplies the degree-6
/// coordinate `z₃` and `f22` the square of the degree-4 coordinate `z₂`.
/// Both series must share an order and vanish at the origin.
pub fn weight5_chain_potential(f3: QSeries, f22: QSeries) -> Potential {
    let m = weight5_chain_module();
    let order = f3.order();
    let mut linear = BTreeMap::new();
    linear.insert(3usize, f3);
    let mut quadratic = BTreeMap::new();
    quadratic.insert((2usize, 2usize), f22);
    Potential::with_parts(m.space(), order, linear, quadratic).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobmod::validate_module;

    #[test]
    fn all_fixture_modules_validate() {
        for (name, m) in [
            ("quintic", quintic_module()),
            ("p1_x_p3", p1_x_p3_module()),
            ("p1_x_p1", p1_x_p1_module()),
            ("weight4_chain", weight4_chain_module()),
            ("weight5_chain", weight5_chain_module()),
        ] {
            let report = validate_module(&m);
            assert!(report.pass(), "{name}: {}", report.to_text());
        }
    }
}
