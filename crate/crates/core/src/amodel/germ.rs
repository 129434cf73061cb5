//! Variation-of-Hodge-structure germs at a maximally unipotent point.
//!
//! A [`VHSGerm`] packages the limit data of a degenerating variation in
//! canonical coordinates: the limit Hodge filtration, the commuting real
//! nilpotent monodromy logarithms, a polarization form, and a gauge
//! function `Γ(q)` with values in the lowering part of the endomorphism
//! algebra and `Γ(0) = 0`.  The associated period map is
//! `exp(Σ_j ℓ_j N_j)·exp(Γ(q))·F_∞` with `ℓ_j = log q_j / 2πi`.
//!
//! The constructor validates the package; [`build_vhs_germ`] produces one
//! from a graded Frobenius module with a quantum potential, which is the
//! mirror-symmetry direction of the correspondence.

use crate::degeneration::{g_bigrading, gamma_from_gamma_minus1, limit_bigrading, GBigrading};
use crate::error::Error;
use crate::frobmod::{
    potential_logseries, q_form, validate_module, validate_quantum_potential, FrobeniusModule,
    Potential,
};
use crate::hodge::Bigrading;
use crate::linfilt::{DecFiltration, ExactMat, IncFiltration, Subspace};
use crate::qseries::{LogCtx, LogSeries, MatrixSeries};
use crate::report::{Location, Report};

/// The germ of a polarized variation of Hodge structure at a normal
/// crossing degeneration with unipotent monodromy, in canonical
/// coordinates.
#[derive(Clone)]
pub struct VHSGerm {
    weight: u32,
    f_inf: DecFiltration,
    ns: Vec<ExactMat>,
    q: ExactMat,
    gamma: MatrixSeries,
    rw: IncFiltration,
    bigrading: Bigrading,
    gb: GBigrading,
}

impl VHSGerm {
    /// Validate and package germ data.
    ///
    /// Checks: the `N_j` are real, nilpotent and commute; the pairing is
    /// real, nondegenerate, `(−1)^k`-symmetric and infinitesimally
    /// preserved by every `N_j`; the limit filtration pairs with the
    /// monodromy weight filtration into a mixed Hodge structure; and the
    /// gauge function vanishes at the origin and takes values in the
    /// lowering part of the induced endomorphism bigrading.
    pub fn new(
        weight: u32,
        f_inf: DecFiltration,
        ns: Vec<ExactMat>,
        q: ExactMat,
        gamma: MatrixSeries,
    ) -> Result<Self, Error> {
        let n = f_inf.ambient();
        if ns.is_empty() {
            return Err(Error::Precondition(
                "at least one monodromy logarithm is required".into(),
            ));
        }
        for (j, nj) in ns.iter().enumerate() {
            if nj.rows != n || nj.cols != n {
                return Err(Error::ShapeMismatch(format!(
                    "monodromy logarithm {j} is {}×{}, ambient dimension is {n}",
                    nj.rows, nj.cols
                )));
            }
            if nj.conj() != *nj {
                return Err(Error::Precondition(format!(
                    "monodromy logarithm {j} is not real"
                )));
            }
            if !nj.pow(n as u32).is_zero() {
                return Err(Error::NotNilpotent(format!("monodromy logarithm {j}")));
            }
            for (l, nl) in ns.iter().enumerate().skip(j + 1) {
                if !nj.commutator(nl).is_zero() {
                    return Err(Error::NonCommuting(format!(
                        "monodromy logarithms {j} and {l}"
                    )));
                }
            }
        }
        if q.rows != n || q.cols != n {
            return Err(Error::ShapeMismatch(format!(
                "pairing is {}×{}, ambient dimension is {n}",
                q.rows, q.cols
            )));
        }
        if q.conj() != q {
            return Err(Error::Precondition("pairing is not real".into()));
        }
        if q.inverse().is_err() {
            return Err(Error::Precondition("pairing is degenerate".into()));
        }
        let sign = if weight % 2 == 0 { 1 } else { -1 };
        if q.transpose() != q.scale(&crate::linfilt::ExactScalar::from_int(sign)) {
            return Err(Error::Precondition(format!(
                "pairing symmetry does not match weight {weight}"
            )));
        }
        for (j, nj) in ns.iter().enumerate() {
            if !(&(&nj.transpose() * &q) + &(&q * nj)).is_zero() {
                return Err(Error::Precondition(format!(
                    "pairing is not infinitesimally preserved by monodromy logarithm {j}"
                )));
            }
        }
        let ctx = gamma.ctx();
        if ctx.nsyms != 0 || ctx.nvars != ns.len() {
            return Err(Error::ShapeMismatch(format!(
                "gauge function has {} symbols and {} variables, expected 0 and {}",
                ctx.nsyms,
                ctx.nvars,
                ns.len()
            )));
        }
        if gamma.rows != n || gamma.cols != n {
            return Err(Error::ShapeMismatch(format!(
                "gauge function is {}×{}, ambient dimension is {n}",
                gamma.rows, gamma.cols
            )));
        }
        let vanishes = (0..n).all(|i| {
            (0..n).all(|j| gamma.get(i, j).sym_free_part().vanishes_at_origin())
        });
        if !vanishes {
            return Err(Error::Precondition(
                "gauge function does not vanish at the origin".into(),
            ));
        }
        let (rw, bigrading) = limit_bigrading(weight, &f_inf, &ns)?;
        let gb = g_bigrading(&bigrading)?;
        if !gb.is_neg_series(&gamma) {
            return Err(Error::Precondition(
                "gauge function has components outside the lowering part of the endomorphism algebra"
                    .into(),
            ));
        }
        Ok(VHSGerm {
            weight,
            f_inf,
            ns,
            q,
            gamma,
            rw,
            bigrading,
            gb,
        })
    }

    /// The germ of a pure nilpotent orbit: gauge function identically zero.
    pub fn nilpotent_orbit(
        weight: u32,
        f_inf: DecFiltration,
        ns: Vec<ExactMat>,
        q: ExactMat,
        order: u32,
    ) -> Result<Self, Error> {
        let n = f_inf.ambient();
        let ctx = LogCtx::pure_q(ns.len(), order);
        let gamma = MatrixSeries::zeros(&ctx, n, n);
        VHSGerm::new(weight, f_inf, ns, q, gamma)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.f_inf.ambient()
    }

    /// Number of degeneration parameters.
    pub fn nvars(&self) -> usize {
        self.ns.len()
    }

    /// Truncation order of the gauge function.
    pub fn order(&self) -> u32 {
        self.gamma.ctx().order
    }

    /// The limit Hodge filtration.
    pub fn f_inf(&self) -> &DecFiltration {
        &self.f_inf
    }

    /// The monodromy logarithms.
    pub fn ns(&self) -> &[ExactMat] {
        &self.ns
    }

    pub fn pairing(&self) -> &ExactMat {
        &self.q
    }

    /// The gauge function `Γ(q)`.
    pub fn gamma(&self) -> &MatrixSeries {
        &self.gamma
    }

    /// The monodromy weight filtration of `Σ_j N_j`, centered at the weight.
    pub fn monodromy_weight(&self) -> &IncFiltration {
        &self.rw
    }

    /// The canonical bigrading of the limit mixed Hodge structure.
    pub fn bigrading(&self) -> &Bigrading {
        &self.bigrading
    }

    /// The induced bigrading of the endomorphism algebra.
    pub fn endo_bigrading(&self) -> &GBigrading {
        &self.gb
    }
}

/// Check that the limit mixed Hodge structure is of the shape mirror
/// symmetry requires: Hodge–Tate with a one-dimensional top piece whose
/// monodromy images fill the next layer.
pub fn maximal_unipotency_check(g: &VHSGerm) -> Report {
    let k = g.weight() as i64;
    let r = g.nvars();
    let n = g.dim();
    let big = g.bigrading();
    let mut report = Report::new();

    let top = big.piece(k, k);
    report.check(
        "top-dimension",
        top.dim() == 1,
        format!("dim I^{{{k},{k}}} = {}", top.dim()),
    );
    let layer = big.piece(k - 1, k - 1);
    report.check(
        "framing-dimension",
        layer.dim() == r,
        format!(
            "dim I^{{{0},{0}}} = {1} against {r} degeneration parameters",
            k - 1,
            layer.dim()
        ),
    );
    for (p, q) in [(k, k - 1), (k - 2, k)] {
        let d = big.piece(p, q).dim();
        report.check_at(
            "off-diagonal",
            d == 0,
            Location::Pair(p, q),
            format!("dim I^{{{p},{q}}} = {d}"),
        );
    }
    let offender = big.support().into_iter().find(|&(p, q)| p < 0 || q < 0);
    match offender {
        Some((p, q)) => report.check_at(
            "range",
            false,
            Location::Pair(p, q),
            "bigrading piece with a negative index",
        ),
        None => report.check("range", true, "all bigrading indices are nonnegative"),
    }
    let mut img = ExactMat::zeros(n, 0);
    for nj in g.ns() {
        img = img.hcat(&(nj * top.basis()));
    }
    let span = Subspace::span(n, &img);
    report.check(
        "span",
        span.contains(&layer) && layer.contains(&span),
        format!(
            "monodromy images of the top piece span dimension {} of {}",
            span.dim(),
            layer.dim()
        ),
    );
    report
}

/// Build the variation germ attached to a graded Frobenius module with a
/// quantum potential.
///
/// The Hodge filtration collects the grading blocks from the deep end, the
/// monodromy logarithms are the classical actions, the pairing is the
/// graded-symmetric form, and the gauge function is reconstructed order by
/// order from its filtration-level `−1` part, which the potential's second
/// partials determine.  Components the reconstruction leaves free are set
/// to zero, which is the normalization canonical coordinates impose.
pub fn build_vhs_germ(m: &FrobeniusModule, p: &Potential) -> Result<VHSGerm, Error> {
    let axioms = validate_module(m);
    if !axioms.pass() {
        let name = axioms
            .first_failure()
            .map(|c| c.name.clone())
            .unwrap_or_default();
        return Err(Error::Precondition(format!(
            "module axioms fail at check '{name}'"
        )));
    }
    let quantum = validate_quantum_potential(m, p);
    if !quantum.pass() {
        let name = quantum
            .first_failure()
            .map(|c| c.name.clone())
            .unwrap_or_default();
        return Err(Error::Precondition(format!(
            "quantum potential fails at check '{name}'"
        )));
    }

    let space = m.space();
    let k = space.weight();
    let n = space.dim();
    let r = space.v2_rank();
    let order = p.order();

    let f_inf = module_filtration(m);
    let ns: Vec<ExactMat> = (0..r).map(|j| m.a(j).clone()).collect();
    let q = q_form(m);

    // level −1 part of the gauge function: second partials of the quantum
    // part of the potential, block by block
    let phi = potential_logseries(m, p)?;
    let ctx = LogCtx::pure_q(r, order);
    let mut h = MatrixSeries::zeros(&ctx, n, n);
    for a in 0..n {
        let da = space.degree(a);
        let phi_a = phi.derive_z(a);
        for c in space.labels_of_degree(da + 2) {
            let f = phi_a.derive_z(space.delta(c)).sym_free_part();
            h.set(c, a, LogSeries::from_q(&ctx, f));
        }
    }

    let gamma = gamma_from_gamma_minus1(k, &f_inf, &ns, &h)?;
    VHSGerm::new(k, f_inf, ns, q, gamma)
}

/// The coordinate filtration a graded module carries: step `a` collects the
/// blocks of degree ≤ `2(k − a)`.  Labels are grouped by degree, so every
/// step is a coordinate subspace.
pub fn module_filtration(m: &FrobeniusModule) -> DecFiltration {
    let space = m.space();
    let n = space.dim();
    let k = space.weight();
    let id = ExactMat::identity(n);
    let mut values = Vec::new();
    for a in 0..=(k as i64) {
        let cols: Vec<usize> = (0..n)
            .filter(|&l| space.degree(l) <= 2 * (k - a as u32))
            .collect();
        values.push((a, Subspace::span(n, &id.select_cols(&cols))));
    }
    values.push((k as i64 + 1, Subspace::zero(n)));
    DecFiltration::from_values(n, values).expect("degree blocks always nest")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linfilt::ExactScalar;
    use crate::qseries::QSeries;

    fn quintic_germ() -> VHSGerm {
        let m = fixtures::quintic_module();
        let p = fixtures::quintic_potential(6);
        build_vhs_germ(&m, &p).unwrap()
    }

    #[test]
    fn quintic_germ_has_hodge_tate_limit() {
        let g = quintic_germ();
        assert_eq!(g.weight(), 3);
        assert_eq!(g.dim(), 4);
        assert_eq!(g.nvars(), 1);
        for p in 0..=3i64 {
            assert_eq!(g.bigrading().piece(p, p).dim(), 1, "I^{{{p},{p}}}");
        }
        assert!(maximal_unipotency_check(&g).pass());
    }

    #[test]
    fn quintic_germ_gamma_is_exact() {
        // Γ = τ²q₁E₂₁ + τq₁E₂₀ − τq₁E₃₁ − 2q₁E₃₀, exactly: the governing
        // equation closes after finitely many terms for this module
        let g = quintic_germ();
        let gamma = g.gamma();
        let q1 = vec![1u16];
        let by_tau = |i: usize, j: usize| gamma.get(i, j).sym_free_part();
        assert_eq!(by_tau(2, 1).coeff(&q1).coeff(2), ExactScalar::from_int(1));
        assert_eq!(by_tau(2, 0).coeff(&q1).coeff(1), ExactScalar::from_int(1));
        assert_eq!(by_tau(3, 1).coeff(&q1).coeff(1), ExactScalar::from_int(-1));
        assert_eq!(by_tau(3, 0).coeff(&q1).coeff(0), ExactScalar::from_int(-2));
        // and nothing else: subtracting those four terms leaves zero
        let ctx = gamma.ctx().clone();
        let mut expected = MatrixSeries::zeros(&ctx, 4, 4);
        let q = QSeries::var(1, ctx.order, 0);
        let term = |tau_pow: i32, c: i64| {
            LogSeries::from_q(
                &ctx,
                q.scale(&crate::qseries::CoeffScalar::monomial(
                    tau_pow,
                    ExactScalar::from_int(c),
                )),
            )
        };
        expected.set(2, 1, term(2, 1));
        expected.set(2, 0, term(1, 1));
        expected.set(3, 1, term(1, -1));
        expected.set(3, 0, term(0, -2));
        assert_eq!(*gamma, expected);
    }

    #[test]
    fn product_fixture_builds_and_is_maximally_unipotent() {
        let m = fixtures::p1_x_p3_module();
        let f3 = QSeries::var(2, 5, 0); // q₁: one holomorphic instanton
        let p = fixtures::p1_x_p3_potential(f3);
        let g = build_vhs_germ(&m, &p).unwrap();
        assert_eq!(g.weight(), 4);
        assert_eq!(g.dim(), 8);
        assert_eq!(g.nvars(), 2);
        assert!(maximal_unipotency_check(&g).pass());
    }

    #[test]
    fn span_failure_is_detected() {
        // two parameters with the same monodromy logarithm: the framing
        // dimension matches but the images of the top piece span a line
        let m = fixtures::p1_x_p1_module();
        let sum = &(m.a(0).clone()) + m.a(1);
        let g = VHSGerm::nilpotent_orbit(
            2,
            module_filtration(&m),
            vec![sum.clone(), sum],
            q_form(&m),
            4,
        )
        .unwrap();
        let rep = maximal_unipotency_check(&g);
        assert!(!rep.pass());
        assert!(rep.item("framing-dimension").unwrap().pass);
        assert!(!rep.item("span").unwrap().pass);
    }

    #[test]
    fn weight_one_germ_fails_top_dimension() {
        // an elliptic-curve-type germ: I^{1,0} ⊕ I^{0,1} has no (k,k) line
        let f = DecFiltration::from_values(
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
        let zero = ExactMat::zeros(2, 2);
        let g = VHSGerm::nilpotent_orbit(1, f, vec![zero], q, 3).unwrap();
        let rep = maximal_unipotency_check(&g);
        assert!(!rep.item("top-dimension").unwrap().pass);
    }

    #[test]
    fn real_and_commuting_preconditions_are_enforced() {
        let m = fixtures::quintic_module();
        let f = module_filtration(&m);
        let q = q_form(&m);
        let mut complex_n = m.a(0).clone();
        complex_n.set(1, 0, ExactScalar::i());
        let err = VHSGerm::nilpotent_orbit(3, f.clone(), vec![complex_n], q.clone(), 3);
        assert!(matches!(err, Err(Error::Precondition(_))));

        let not_nilp = ExactMat::identity(4);
        let err = VHSGerm::nilpotent_orbit(3, f, vec![not_nilp], q, 3);
        assert!(matches!(err, Err(Error::NotNilpotent(_))));
    }
}
