//! The opposite filtration attached to a degeneration germ.
//!
//! The partial sums `Ψ_p = ⊕_{a≤p} I^{a,b}` of the limit bigrading form
//! an increasing filtration that is opposite to the Hodge filtration at
//! every point of the punctured neighborhood — a constant, coordinate-free
//! companion to the varying `e^X·F_∞`.  It can also be computed without
//! the bigrading, as the convolution of the conjugate-dual limit
//! filtration with the monodromy weight filtration, and it is rigid: unit
//! rescalings of the coordinates change the gauge function but not `Ψ`.

use super::gauge::x_from_germ;
use crate::amodel::VHSGerm;
use crate::error::Error;
use crate::linfilt::{convolve, ExactMat, ExactScalar, IncFiltration, Subspace};
use crate::qseries::{total_degree, CoeffScalar, LogSeries, MatrixSeries, QSeries};
use crate::report::{Location, Report};

/// The partial-sum filtration of the limit bigrading, with a certificate
/// that it is opposite to the moving Hodge filtration: at each step the
/// dimensions are complementary and the concatenated frame
/// `[e^X·F^p | Ψ_{p−1}]` has unit determinant, so the two spans are
/// transverse at every order.
pub fn psi_filtration(g: &VHSGerm) -> (IncFiltration, Report) {
    let n = g.dim();
    let big = g.bigrading();
    let mut ps: Vec<i64> = big.support().iter().map(|&(p, _)| p).collect();
    ps.sort_unstable();
    ps.dedup();
    let values: Vec<(i64, Subspace)> = ps
        .iter()
        .map(|&p| (p, big.sum_where(|a, _| a <= p)))
        .collect();
    let psi = IncFiltration::from_values(n, values).expect("partial sums nest");

    let mut report = Report::new();
    let ex = x_from_germ(g).and_then(|p| p.x().exp_nilpotent());
    let ex = match ex {
        Ok(ex) => ex,
        Err(e) => {
            report.check("gauge", false, format!("period frame unavailable: {e}"));
            return (psi, report);
        }
    };
    let ctx = ex.ctx().clone();
    for (p, step) in g.f_inf().jumps() {
        let prev = psi.at(p - 1);
        if step.dim() + prev.dim() != n {
            report.check_at(
                "oppositeness",
                false,
                Location::Index(*p),
                format!(
                    "dimensions {} + {} do not fill the ambient {n}",
                    step.dim(),
                    prev.dim()
                ),
            );
            continue;
        }
        let moving = &ex * &MatrixSeries::from_exact(&ctx, step.basis());
        let frame = moving.hcat(&MatrixSeries::from_exact(&ctx, prev.basis()));
        let det = frame.det_berkowitz();
        // a series matrix is invertible at every point of the polydisc
        // exactly when the constant term of its determinant is a unit —
        // and that constant term must be symbol-free
        let mut const_part = CoeffScalar::zero();
        let mut sym_const = false;
        for (sym, f) in det.terms() {
            let c0 = f.coeff(&vec![0; ctx.nvars]);
            if c0.is_zero() {
                continue;
            }
            if total_degree(sym) == 0 {
                const_part = c0;
            } else {
                sym_const = true;
            }
        }
        let pass = !sym_const && const_part.is_unit();
        report.check_at(
            "oppositeness",
            pass,
            Location::Index(*p),
            if pass {
                "complementary dimensions and unit determinant".to_string()
            } else {
                "concatenated frame is singular at the origin".to_string()
            },
        );
    }
    (psi, report)
}

/// Check the two convolution presentations of the opposite filtration:
/// from the limit filtration itself, and from a translate of it along the
/// exponential of a positive combination of the monodromy logarithms
/// (whose filtration differs, but whose convolution does not).
pub fn psi_convolution_check(g: &VHSGerm) -> Report {
    let mut report = Report::new();
    let (psi, _) = psi_filtration(g);
    let rw = g.monodromy_weight();

    let limit = convolve(&g.f_inf().conj().dual(), rw);
    report.check(
        "limit-convolution",
        limit == psi,
        "conjugate-dual limit filtration convolved with the weight filtration",
    );

    let n = g.dim();
    let mut sum = ExactMat::zeros(n, n);
    for (j, nj) in g.ns().iter().enumerate() {
        sum = &sum + &nj.scale(&ExactScalar::from_int(j as i64 + 1));
    }
    let e = sum
        .exp_nilpotent()
        .expect("combinations of commuting nilpotents are nilpotent");
    let translated = g
        .f_inf()
        .apply(&e)
        .expect("an invertible map preserves nesting");
    let trans = convolve(&translated.conj().dual(), rw);
    report.check(
        "nilpotent-translate",
        trans == psi,
        "translated limit filtration gives the same convolution",
    );
    report
}

/// Transport a germ along the coordinate change `q̃_j = f_j(q)·q_j`.
///
/// Each `f_j` must be a unit (nonzero constant term); `log_consts[j]`
/// supplies the formal constant standing for `log f_j(0) / 2πi`, which
/// the caller chooses (zero whenever `f_j(0) = 1`).  The inverse
/// substitution is found by fixed-point iteration, the linear-logarithm
/// mismatch moves into the gauge factor, and the limit filtration is
/// translated by the constant part.  The resulting germ has the same
/// monodromy, pairing and opposite filtration.
pub fn coordinate_change(
    g: &VHSGerm,
    f: &[QSeries],
    log_consts: &[ExactScalar],
) -> Result<VHSGerm, Error> {
    let r = g.nvars();
    if f.len() != r || log_consts.len() != r {
        return Err(Error::ShapeMismatch(format!(
            "{} unit factors and {} logarithm constants for {r} coordinates",
            f.len(),
            log_consts.len()
        )));
    }
    let ctx = g.gamma().ctx().clone();
    let order = ctx.order;
    let n = g.dim();

    let mut units = Vec::with_capacity(r);
    let mut consts = Vec::with_capacity(r);
    for (j, fj) in f.iter().enumerate() {
        if fj.nvars() != r {
            return Err(Error::ShapeMismatch(format!(
                "unit factor {j} has {} variables, expected {r}",
                fj.nvars()
            )));
        }
        let fj = fj.truncate(order);
        let c = fj.constant_term().as_scalar().ok_or_else(|| {
            Error::Precondition(format!("unit factor {j} has a τ-dependent constant term"))
        })?;
        if c.is_zero() {
            return Err(Error::Precondition(format!(
                "unit factor {j} vanishes at the origin"
            )));
        }
        units.push(fj);
        consts.push(c);
    }

    // inverse substitution s_j(q̃) = q̃_j·g_j(q̃) by fixed-point iteration:
    // g_j = 1/(f_j ∘ s) stabilizes after the truncation order many rounds
    let mut gs: Vec<QSeries> = consts
        .iter()
        .map(|c| {
            QSeries::constant(
                r,
                order,
                CoeffScalar::from_scalar(c.inv().expect("nonzero scalar")),
            )
        })
        .collect();
    for _ in 0..=order {
        let s: Vec<QSeries> = (0..r)
            .map(|j| &QSeries::var(r, order, j) * &gs[j])
            .collect();
        gs = (0..r)
            .map(|j| {
                units[j]
                    .substitute(&s)
                    .inverse()
                    .expect("unit composed with an origin-preserving substitution")
            })
            .collect();
    }
    let subs: Vec<QSeries> = (0..r)
        .map(|j| &QSeries::var(r, order, j) * &gs[j])
        .collect();

    // μ_j = λ_j − log(c_j·g_j)/2πi, the full logarithm mismatch in the
    // new coordinates
    let mut mu = Vec::with_capacity(r);
    for j in 0..r {
        let ghat = gs[j].scale(&CoeffScalar::from_scalar(consts[j].clone()));
        let tau_inv_log = ghat
            .log_unit()
            .scale(&CoeffScalar::monomial(-1, ExactScalar::one()));
        let lambda = QSeries::constant(r, order, CoeffScalar::from_scalar(log_consts[j].clone()));
        mu.push(&lambda - &tau_inv_log);
    }

    // exp(Γ̃) = e^{−Σ_j μ_j N_j} · e^{Γ ∘ s} · e^{Σ_j λ_j N_j}
    let mut mu_n = MatrixSeries::zeros(&ctx, n, n);
    let mut lam_n = ExactMat::zeros(n, n);
    for j in 0..r {
        mu_n = &mu_n
            + &MatrixSeries::from_exact(&ctx, &g.ns()[j])
                .scale_series(&LogSeries::from_q(&ctx, mu[j].clone()));
        lam_n = &lam_n + &g.ns()[j].scale(&log_consts[j]);
    }
    let e_lam = lam_n.exp_nilpotent()?;
    let e_lam_inv = lam_n.scale(&ExactScalar::from_int(-1)).exp_nilpotent()?;
    let frame = &(&(-&mu_n).exp_nilpotent()? * &g.gamma().substitute_q(&subs).exp_nilpotent()?)
        * &MatrixSeries::from_exact(&ctx, &e_lam);
    let gamma_t = frame.log_unipotent()?;
    let f_t = g.f_inf().apply(&e_lam_inv)?;
    VHSGerm::new(
        g.weight(),
        f_t,
        g.ns().to_vec(),
        g.pairing().clone(),
        gamma_t,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::{build_vhs_germ, module_filtration, VHSGerm};
    use crate::fixtures;
    use crate::frobmod::q_form;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quintic_germ(order: u32) -> VHSGerm {
        let m = fixtures::quintic_module();
        build_vhs_germ(&m, &fixtures::quintic_potential(order)).unwrap()
    }

    #[test]
    fn hodge_tate_psi_is_the_weight_filtration() {
        let g = quintic_germ(4);
        let (psi, rep) = psi_filtration(&g);
        assert!(rep.pass(), "{}", rep.to_text());
        for p in 0..=3i64 {
            assert_eq!(psi.at(p), g.monodromy_weight().at(2 * p), "step {p}");
        }
    }

    #[test]
    fn product_psi_certificate_holds() {
        let m = fixtures::p1_x_p3_module();
        let f3 = QSeries::var(2, 4, 0);
        let g = build_vhs_germ(&m, &fixtures::p1_x_p3_potential(f3)).unwrap();
        let (_, rep) = psi_filtration(&g);
        assert!(rep.pass(), "{}", rep.to_text());
    }

    #[test]
    fn convolution_presentations_agree() {
        let g = quintic_germ(4);
        let rep = psi_convolution_check(&g);
        assert!(rep.pass(), "{}", rep.to_text());

        let m = fixtures::p1_x_p1_module();
        let orbit = VHSGerm::nilpotent_orbit(
            2,
            module_filtration(&m),
            vec![m.a(0).clone(), m.a(1).clone()],
            q_form(&m),
            4,
        )
        .unwrap();
        let rep = psi_convolution_check(&orbit);
        assert!(rep.pass(), "{}", rep.to_text());
    }

    #[test]
    fn weight_one_convolution_without_monodromy_weights() {
        // an undeformed weight-one structure: N = 0, F¹ spanned by e₀+i·e₁
        let f = crate::linfilt::DecFiltration::from_values(
            2,
            vec![
                (0, Subspace::full(2)),
                (
                    1,
                    Subspace::span(
                        2,
                        &ExactMat::from_fn(2, 1, |i, _| {
                            if i == 0 {
                                ExactScalar::one()
                            } else {
                                ExactScalar::i()
                            }
                        }),
                    ),
                ),
                (2, Subspace::zero(2)),
            ],
        )
        .unwrap();
        let q = ExactMat::from_int_rows(&[&[0, 1], &[-1, 0]]);
        let g = VHSGerm::nilpotent_orbit(1, f, vec![ExactMat::zeros(2, 2)], q, 3).unwrap();
        assert!(psi_convolution_check(&g).pass());
    }

    #[test]
    fn identity_change_is_the_identity() {
        let g = quintic_germ(4);
        let f1 = QSeries::one(1, 4);
        let h = coordinate_change(&g, &[f1], &[ExactScalar::zero()]).unwrap();
        assert_eq!(h.f_inf(), g.f_inf());
        assert_eq!(h.gamma(), g.gamma());
    }

    #[test]
    fn unit_rescaling_moves_the_gauge_but_not_psi() {
        let g = quintic_germ(4);
        let f1 = &QSeries::one(1, 4) + &QSeries::var(1, 4, 0);
        let h = coordinate_change(&g, &[f1], &[ExactScalar::zero()]).unwrap();
        assert_eq!(h.f_inf(), g.f_inf(), "constant part is trivial");
        assert_ne!(h.gamma(), g.gamma(), "gauge function must move");
        let (psi_g, _) = psi_filtration(&g);
        let (psi_h, _) = psi_filtration(&h);
        assert_eq!(psi_g, psi_h);
    }

    #[test]
    fn formal_log_constant_translates_the_flag_but_not_psi() {
        let g = quintic_germ(4);
        let f1 = QSeries::constant(1, 4, CoeffScalar::from_int(5));
        let lambda = ExactScalar::from_ratio(17, 5);
        let h = coordinate_change(&g, &[f1], &[lambda]).unwrap();
        assert_ne!(h.f_inf(), g.f_inf(), "flag must translate");
        let (psi_g, _) = psi_filtration(&g);
        let (psi_h, _) = psi_filtration(&h);
        assert_eq!(psi_g, psi_h);
    }

    #[test]
    fn psi_is_rigid_under_random_unit_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
        let g = quintic_germ(3);
        let (psi_g, _) = psi_filtration(&g);
        let m = fixtures::p1_x_p1_module();
        let orbit = VHSGerm::nilpotent_orbit(
            2,
            module_filtration(&m),
            vec![m.a(0).clone(), m.a(1).clone()],
            q_form(&m),
            3,
        )
        .unwrap();
        let (psi_o, _) = psi_filtration(&orbit);
        for round in 0..6 {
            let f1 = random_unit(&mut rng, 1, 3);
            let h = coordinate_change(&g, &[f1], &[ExactScalar::zero()]).unwrap();
            let (psi_h, _) = psi_filtration(&h);
            assert_eq!(psi_g, psi_h, "quintic round {round}");

            let fs = [random_unit(&mut rng, 2, 3), random_unit(&mut rng, 2, 3)];
            let h = coordinate_change(
                &orbit,
                &fs,
                &[ExactScalar::zero(), ExactScalar::zero()],
            )
            .unwrap();
            let (psi_h, _) = psi_filtration(&h);
            assert_eq!(psi_o, psi_h, "orbit round {round}");
        }
    }

    /// A random unit with constant term 1 and small integer coefficients.
    pub(crate) fn random_unit(rng: &mut impl Rng, nvars: usize, order: u32) -> QSeries {
        let mut f = QSeries::one(nvars, order);
        let mut exp = vec![0u16; nvars];
        loop {
            // iterate over all exponents of total degree 1..=order
            if !next_exponent(&mut exp, order) {
                break;
            }
            let c: i64 = rng.random_range(-2..=2);
            if c != 0 && total_degree(&exp) >= 1 {
                f.add_term(&exp, &CoeffScalar::from_int(c));
            }
        }
        f
    }

    fn next_exponent(exp: &mut Vec<u16>, order: u32) -> bool {
        for i in 0..exp.len() {
            exp[i] += 1;
            if total_degree(exp) <= order {
                return true;
            }
            exp[i] = 0;
        }
        false
    }
}
