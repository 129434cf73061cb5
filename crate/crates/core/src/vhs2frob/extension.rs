//! Weight-3 package: canonical coordinates with their triple couplings.
//!
//! In weight 3 a normalized germ is the germ of a one-parameter variation
//! framed by its coordinate directions, and the full content of the
//! deformation is the family of triple couplings
//! `Y_{abc} = B((N_a + τθ_a Γ₋₁)(N_b + τθ_b Γ₋₁)(N_c + τθ_c Γ₋₁)·e, e)`.
//! [`extension_data_weight3`] normalizes the coordinates, extracts the
//! module, certifies the framing identities, and emits the couplings.

use crate::amodel::VHSGerm;
use crate::error::Error;
use crate::linfilt::{ExactMat, ExactScalar};
use crate::qseries::{CoeffScalar, MatrixSeries, QSeries};
use crate::report::{Location, Report};

use super::canonical::canonical_coordinates;
use super::extract::{extract_module, quantum_action_from_germ};

/// Canonical coordinates and triple couplings of a weight-3 germ.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    coordinates: Vec<QSeries>,
    yukawa: Vec<QSeries>,
    nvars: usize,
    report: Report,
}

impl ExtensionData {
    /// The canonical coordinate functions `f_j(q)·q_j`, expressed in the
    /// coordinates of the input germ.
    pub fn coordinates(&self) -> &[QSeries] {
        &self.coordinates
    }

    /// The triple coupling `Y_{abc}`, as a series in the canonical
    /// coordinates.  Indices run over the coordinate directions.
    pub fn yukawa(&self, a: usize, b: usize, c: usize) -> &QSeries {
        &self.yukawa[(a * self.nvars + b) * self.nvars + c]
    }

    /// Certificates for the framing identities of the normalized germ.
    pub fn report(&self) -> &Report {
        &self.report
    }
}

/// Normalize a weight-3 germ and read off its extension data.
///
/// `e` must be a real generator of the top piece of the limit bigrading.
/// The hypotheses of [`canonical_coordinates`] and [`extract_module`] are
/// enforced as errors; the report certifies, per coordinate direction,
/// that the deformed action on the generator is classical
/// (`theta-framing`) and that the level `−1` gauge term kills the marked
/// block (`extension-normal-form`).
pub fn extension_data_weight3(g: &VHSGerm, e: &[ExactScalar]) -> Result<ExtensionData, Error> {
    if g.weight() != 3 {
        return Err(Error::Unsupported(format!(
            "extension data is a weight-3 construction, the germ has weight {}",
            g.weight()
        )));
    }
    let cc = canonical_coordinates(g)?;
    let normalized = cc.germ();
    let ext = extract_module(normalized, e)?;
    let l = quantum_action_from_germ(normalized, &ext)?;
    let m = ext.module();
    let n = m.dim();
    let r = g.nvars();
    let order = g.order();
    let ctx = normalized.gamma().ctx().clone();

    let mut report = Report::new();
    for (j, lj) in l.iter().enumerate() {
        let got = MatrixSeries::from_fn(&ctx, n, 1, |i, _| lj.get(i, 0).clone());
        let expected =
            MatrixSeries::from_exact(&ctx, &ExactMat::col_vec(&m.a(j).column(0)));
        report.check_at(
            "theta-framing",
            got == expected,
            Location::Index(j as i64),
            "the deformed action on the generator is the classical one",
        );
    }
    let gm1 = normalized
        .endo_bigrading()
        .minus1_series(normalized.gamma());
    let marked = normalized.bigrading().piece(1, 1);
    report.check(
        "extension-normal-form",
        (&gm1 * &MatrixSeries::from_exact(&ctx, marked.basis())).is_zero(),
        "the level -1 gauge term kills the marked block",
    );

    let mut yukawa = Vec::with_capacity(r * r * r);
    for a in 0..r {
        for b in 0..r {
            let lab = &l[a] * &l[b];
            for c in 0..r {
                let prod = &lab * &l[c];
                let mut y = QSeries::zero(r, order);
                for i in 0..n {
                    let w = m.b().get(i, 0);
                    if w.is_zero() {
                        continue;
                    }
                    y = &y
                        + &prod
                            .get(i, 0)
                            .sym_free_part()
                            .scale(&CoeffScalar::from_scalar(w.clone()));
                }
                yukawa.push(y);
            }
        }
    }

    Ok(ExtensionData {
        coordinates: cc.coordinates(),
        yukawa,
        nvars: r,
        report,
    })
}
