//! Horizontality and the associated Higgs field.
//!
//! For a germ in normal form with `X = log(e^{Σℓ_jN_j}e^{Γ})`, Griffiths
//! horizontality of the period map is equivalent to the matrix identity
//! `e^{−X}·∂_j(e^X) = ∂_j X₋₁` for every coordinate, where `X₋₁` is the
//! level `−1` part of `X`.  When it holds, the coordinate fields
//! `∂_j X₋₁` commute and assemble into a flat Higgs-type structure; the
//! Higgs field itself is the conjugate `θ_j = e^X·(∂_j X₋₁)·e^{−X}`,
//! which agrees with `∂_j X₋₁` to leading level.

use super::gauge::x_from_germ;
use crate::amodel::VHSGerm;
use crate::error::Error;
use crate::qseries::MatrixSeries;
use crate::report::{Location, Report};

/// Verify the horizontality identity and the flatness of the level `−1`
/// coordinate fields.
pub fn horizontality_check(g: &VHSGerm) -> Report {
    let mut report = Report::new();
    let p = match x_from_germ(g) {
        Ok(p) => p,
        Err(e) => {
            report.check("gauge", false, format!("period frame logarithm unavailable: {e}"));
            return report;
        }
    };
    let (ex, exinv) = match (p.x().exp_nilpotent(), (-p.x()).exp_nilpotent()) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            report.check("gauge", false, "period frame logarithm fails to exponentiate");
            return report;
        }
    };
    report.check("gauge", true, "period frame logarithm lies in the lowering subalgebra");

    let r = g.nvars();
    let derivs: Vec<MatrixSeries> = (0..r).map(|j| p.x_minus1().derive_z(j)).collect();
    for (j, dj) in derivs.iter().enumerate() {
        let diff = &(&exinv * &ex.derive_z(j)) - dj;
        match diff.first_nonzero_q_order() {
            None => report.check_at(
                "horizontality",
                true,
                Location::Index(j as i64),
                "matches the level -1 derivative at every order",
            ),
            Some((d, i, k)) => report.check_at(
                "horizontality",
                false,
                Location::Index(j as i64),
                format!("first failure at q-order {d}, entry ({i}, {k})"),
            ),
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let comm = derivs[i].commutator(&derivs[j]);
            report.check_at(
                "higgs-wedge",
                comm.is_zero(),
                Location::Pair(i as i64, j as i64),
                match comm.first_nonzero_q_order() {
                    None => "coordinate fields commute".to_string(),
                    Some((d, a, b)) => {
                        format!("fields fail to commute at q-order {d}, entry ({a}, {b})")
                    }
                },
            );
            let mixed = &derivs[i].derive_z(j) - &derivs[j].derive_z(i);
            report.check_at(
                "closedness",
                mixed.is_zero(),
                Location::Pair(i as i64, j as i64),
                "mixed level -1 partials agree",
            );
        }
    }
    report
}

/// The Higgs field of a horizontal germ: one matrix per coordinate,
/// `θ_j = e^X·(∂_j X₋₁)·e^{−X}`, together with the certificate that each
/// `θ_j` deviates from `∂_j X₋₁` only at levels `≤ −2`.
pub fn higgs_field(g: &VHSGerm) -> Result<(Vec<MatrixSeries>, Report), Error> {
    let hor = horizontality_check(g);
    if !hor.pass() {
        let name = hor
            .first_failure()
            .map(|c| c.name.clone())
            .unwrap_or_default();
        return Err(Error::Precondition(format!(
            "horizontality fails at check '{name}'"
        )));
    }
    let p = x_from_germ(g)?;
    let ex = p.x().exp_nilpotent()?;
    let exinv = (-p.x()).exp_nilpotent()?;
    let gb = g.endo_bigrading();
    let mut thetas = Vec::with_capacity(g.nvars());
    let mut report = Report::new();
    for j in 0..g.nvars() {
        let dj = p.x_minus1().derive_z(j);
        let theta = &(&ex * &dj) * &exinv;
        let shallow = gb.project_series(&(&theta - &dj), |r, _| r >= -1);
        report.check_at(
            "leading-term",
            shallow.is_zero(),
            Location::Index(j as i64),
            "Higgs field agrees with the level -1 derivative up to deeper terms",
        );
        thetas.push(theta);
    }
    Ok((thetas, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::{build_vhs_germ, dubrovin_connection, VHSGerm};
    use crate::degeneration::lift_sym_free;
    use crate::fixtures;
    use crate::qseries::{LogCtx, QSeries};

    #[test]
    fn quintic_germ_is_horizontal() {
        let m = fixtures::quintic_module();
        let g = build_vhs_germ(&m, &fixtures::quintic_potential(5)).unwrap();
        let rep = horizontality_check(&g);
        assert!(rep.pass(), "{}", rep.to_text());
    }

    #[test]
    fn x_minus1_derivative_matches_the_quantum_connection() {
        // ∂₁X₋₁ is exactly the quantum connection matrix of the module the
        // germ came from: the two sides of the correspondence agree
        let m = fixtures::quintic_module();
        let pot = fixtures::quintic_potential(6);
        let g = build_vhs_germ(&m, &pot).unwrap();
        let p = x_from_germ(&g).unwrap();
        let d = p.x_minus1().derive_z(0);
        let conn = dubrovin_connection(&m, &pot).unwrap();
        let ctx = LogCtx::log_coords(1, 6);
        assert_eq!(d, lift_sym_free(&ctx, conn.matrix(0)));
    }

    #[test]
    fn perturbed_gauge_fails_horizontality_at_the_perturbation_order() {
        let m = fixtures::quintic_module();
        let g = build_vhs_germ(&m, &fixtures::quintic_potential(5)).unwrap();
        // add a stray level −2 term τ·q₁² to the gauge function
        let mut gamma = g.gamma().clone();
        let ctx = gamma.ctx().clone();
        let stray = crate::qseries::LogSeries::from_q(
            &ctx,
            QSeries::monomial(1, ctx.order, vec![2], crate::qseries::CoeffScalar::tau()),
        );
        gamma.set(2, 0, &gamma.get(2, 0).clone() + &stray);
        let bad = VHSGerm::new(
            3,
            g.f_inf().clone(),
            g.ns().to_vec(),
            g.pairing().clone(),
            gamma,
        )
        .unwrap();
        let rep = horizontality_check(&bad);
        let item = rep.item("horizontality").unwrap();
        assert!(!item.pass);
        assert!(item.detail.contains("q-order 2"), "{}", item.detail);
    }

    #[test]
    fn higgs_field_is_a_deep_conjugate() {
        let m = fixtures::quintic_module();
        let g = build_vhs_germ(&m, &fixtures::quintic_potential(5)).unwrap();
        let (thetas, rep) = higgs_field(&g).unwrap();
        assert!(rep.pass(), "{}", rep.to_text());
        let p = x_from_germ(&g).unwrap();
        let d = p.x_minus1().derive_z(0);
        // the conjugation is not trivial, but the deviation is deep
        assert_ne!(thetas[0], d);
        assert!(g
            .endo_bigrading()
            .project_series(&(&thetas[0] - &d), |r, _| r >= -1)
            .is_zero());
    }

    #[test]
    fn product_higgs_fields_commute() {
        let m = fixtures::p1_x_p3_module();
        let f3 = QSeries::var(2, 4, 0);
        let g = build_vhs_germ(&m, &fixtures::p1_x_p3_potential(f3)).unwrap();
        let (thetas, rep) = higgs_field(&g).unwrap();
        assert!(rep.pass());
        assert!(thetas[0].commutator(&thetas[1]).is_zero());
    }
}
