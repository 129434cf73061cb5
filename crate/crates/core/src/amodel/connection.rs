//! The first-order system attached to a quantum product.
//!
//! Over the deformation space with coordinates `q_1, …, q_r`, small
//! quantum multiplication by the degree-two generators defines connection
//! matrices `L_j` acting on the cohomology frame: the flat-coordinate
//! derivative of a section is `θ_j + L_j` with `θ_j = τ·q_j ∂_{q_j}`.
//! Flatness of the whole system is exactly associativity plus the
//! divisor structure of the potential, and the residue of `L_j` at the
//! origin is the classical action — the monodromy logarithm the B-side
//! germ carries.

use crate::error::Error;
use crate::frobmod::{quantum_action, validate_module, validate_quantum_potential, FrobeniusModule, Potential};
use crate::linfilt::{DecFiltration, ExactMat};
use crate::qseries::MatrixSeries;
use crate::report::{Location, Report};

/// Connection matrices of a quantum product in the canonical frame: one
/// square series matrix per deformation coordinate.
#[derive(Clone, Debug)]
pub struct ConnectionMatrix {
    dim: usize,
    mats: Vec<MatrixSeries>,
}

impl ConnectionMatrix {
    /// Package raw connection matrices.  All must be square of one size,
    /// share a plain series context with one variable per matrix, and
    /// have nilpotent value at the origin (a simple pole after the
    /// `log q` substitution, with unipotent monodromy).
    pub fn from_parts(mats: Vec<MatrixSeries>) -> Result<Self, Error> {
        let r = mats.len();
        if r == 0 {
            return Err(Error::ShapeMismatch(
                "a connection needs at least one coordinate".into(),
            ));
        }
        let dim = mats[0].rows;
        for (j, m) in mats.iter().enumerate() {
            if m.rows != dim || m.cols != dim {
                return Err(Error::ShapeMismatch(format!(
                    "matrix {j} is {}×{}, expected {dim}×{dim}",
                    m.rows, m.cols
                )));
            }
            let ctx = m.ctx();
            if ctx.nsyms != 0 || ctx.nvars != r {
                return Err(Error::ShapeMismatch(format!(
                    "matrix {j} has {} symbols and {} variables, expected 0 and {r}",
                    ctx.nsyms, ctx.nvars
                )));
            }
        }
        for (j, m) in mats.iter().enumerate() {
            let origin = constant_part(m);
            let mut pow = MatrixSeries::identity(origin.ctx(), dim);
            let mut nilpotent = false;
            for _ in 0..dim {
                pow = &pow * &origin;
                if pow.is_zero() {
                    nilpotent = true;
                    break;
                }
            }
            if !nilpotent {
                return Err(Error::NotNilpotent(format!(
                    "value of connection matrix {j} at the origin"
                )));
            }
        }
        Ok(ConnectionMatrix { dim, mats })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of deformation coordinates.
    pub fn nvars(&self) -> usize {
        self.mats.len()
    }

    pub fn order(&self) -> u32 {
        self.mats[0].ctx().order
    }

    pub fn matrix(&self, j: usize) -> &MatrixSeries {
        &self.mats[j]
    }

    pub fn matrices(&self) -> &[MatrixSeries] {
        &self.mats
    }

    /// The residue at the origin: the `τ⁰` part of each matrix at `q = 0`.
    /// For a connection built from a validated module these are exactly
    /// the classical actions, and the only τ-power present.
    pub fn monodromy_logs(&self) -> Vec<ExactMat> {
        let r = self.nvars();
        self.mats
            .iter()
            .map(|m| {
                let mut by_tau = m.coeff_q_by_tau(&vec![0u16; r]);
                by_tau
                    .remove(&0)
                    .unwrap_or_else(|| ExactMat::zeros(self.dim, self.dim))
            })
            .collect()
    }
}

/// The τ-degree-0 part of each entry's value at `q = 0` is kept along with
/// every other τ-power: this is the full constant term as a series matrix.
fn constant_part(m: &MatrixSeries) -> MatrixSeries {
    crate::degeneration::q_degree_part(m, 0)
}

/// Build the connection of a quantum product, validating the module and
/// the potential first.
pub fn dubrovin_connection(
    m: &FrobeniusModule,
    p: &Potential,
) -> Result<ConnectionMatrix, Error> {
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
    ConnectionMatrix::from_parts(quantum_action(m, p)?)
}

/// Curvature of the system: `θ_j L_l − θ_l L_j + [L_j, L_l]` must vanish
/// for every pair.  One check item per pair; a failure reports the first
/// bad series order and entry.
pub fn flatness_check(c: &ConnectionMatrix) -> Report {
    let mut report = Report::new();
    let r = c.nvars();
    if r < 2 {
        report.check(
            "flatness",
            true,
            "single coordinate: no curvature components",
        );
        return report;
    }
    for j in 0..r {
        for l in (j + 1)..r {
            let curv = &(&c.mats[l].theta_tau(j) - &c.mats[j].theta_tau(l))
                + &c.mats[j].commutator(&c.mats[l]);
            match curv.first_nonzero_q_order() {
                None => report.check_at(
                    "flatness",
                    true,
                    Location::Pair(j as i64, l as i64),
                    "curvature component vanishes at every order",
                ),
                Some((d, a, b)) => report.check_at(
                    "flatness",
                    false,
                    Location::Order(d),
                    format!("pair ({j}, {l}): first curvature term at q-order {d}, entry ({a}, {b})"),
                ),
            }
        }
    }
    report
}

/// Griffiths transversality of a filtration against the connection:
/// `L_j·F^p ⊆ F^{p−1}` as series, one item per coordinate and level.
pub fn transversality_check(c: &ConnectionMatrix, f: &DecFiltration) -> Report {
    assert_eq!(f.ambient(), c.dim, "filtration ambient mismatch");
    let mut report = Report::new();
    let ctx = c.mats[0].ctx().clone();
    for j in 0..c.nvars() {
        for (p, step) in f.jumps() {
            let target = f.at(p - 1);
            // rows annihilating the target: image must pair to zero
            let ann = target.basis().transpose().kernel().transpose();
            if ann.rows == 0 {
                report.check_at(
                    "transversality",
                    true,
                    Location::Pair(j as i64, *p),
                    "target step is everything",
                );
                continue;
            }
            let prod = &(&MatrixSeries::from_exact(&ctx, &ann) * &c.mats[j])
                * &MatrixSeries::from_exact(&ctx, step.basis());
            match prod.first_nonzero_q_order() {
                None => report.check_at(
                    "transversality",
                    true,
                    Location::Pair(j as i64, *p),
                    "image lies one step down at every order",
                ),
                Some((d, _, _)) => report.check_at(
                    "transversality",
                    false,
                    Location::Pair(j as i64, *p),
                    format!("image escapes the next step at q-order {d}"),
                ),
            }
        }
    }
    report
}

/// The pairing is flat for the system: `Q·L_j + L_jᵀ·Q = 0` as series,
/// which is infinitesimal invariance in the canonical frame.
pub fn pairing_flatness_check(c: &ConnectionMatrix, q: &ExactMat) -> Report {
    let mut report = Report::new();
    let ctx = c.mats[0].ctx().clone();
    let qs = MatrixSeries::from_exact(&ctx, q);
    for (j, l) in c.mats.iter().enumerate() {
        let balance = &(&qs * l) + &(&l.transpose() * &qs);
        report.check_at(
            "pairing-flatness",
            balance.is_zero(),
            Location::Index(j as i64),
            match balance.first_nonzero_q_order() {
                None => "pairing is infinitesimally invariant".to_string(),
                Some((d, a, b)) => format!("invariance fails at q-order {d}, entry ({a}, {b})"),
            },
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::module_filtration;
    use crate::fixtures;
    use crate::frobmod::q_form;
    use crate::linfilt::{ExactScalar, Subspace};
    use crate::qseries::{CoeffScalar, LogCtx, LogSeries, QSeries};

    #[test]
    fn classical_connection_is_the_constant_action() {
        let m = fixtures::quintic_module();
        let p = crate::frobmod::Potential::zero(m.space(), 5);
        let c = dubrovin_connection(&m, &p).unwrap();
        let ctx = LogCtx::pure_q(1, 5);
        assert_eq!(*c.matrix(0), MatrixSeries::from_exact(&ctx, m.a(0)));
        assert_eq!(c.monodromy_logs()[0], *m.a(0));
    }

    #[test]
    fn quantum_connection_residue_is_the_classical_action() {
        let m = fixtures::quintic_module();
        let c = dubrovin_connection(&m, &fixtures::quintic_potential(6)).unwrap();
        // the full matrix differs from the constant action…
        let ctx = LogCtx::pure_q(1, 6);
        assert_ne!(*c.matrix(0), MatrixSeries::from_exact(&ctx, m.a(0)));
        // …while the residue at the origin is exactly it
        assert_eq!(c.monodromy_logs()[0], *m.a(0));
        // frozen deformation entry: (L₁)₂₁ = 5 + τ³q₁
        let entry = c.matrix(0).get(2, 1).sym_free_part();
        assert_eq!(entry.coeff(&[0]).coeff(0), ExactScalar::from_int(5));
        assert_eq!(entry.coeff(&[1]).coeff(3), ExactScalar::one());
    }

    #[test]
    fn two_variable_flatness_holds() {
        let m = fixtures::p1_x_p3_module();
        let f3 = QSeries::var(2, 4, 0);
        let c = dubrovin_connection(&m, &fixtures::p1_x_p3_potential(f3)).unwrap();
        let rep = flatness_check(&c);
        assert!(rep.pass(), "{}", rep.to_text());
    }

    #[test]
    fn single_variable_flatness_is_vacuous() {
        let m = fixtures::quintic_module();
        let c = dubrovin_connection(&m, &fixtures::quintic_potential(4)).unwrap();
        let rep = flatness_check(&c);
        assert!(rep.pass());
        assert_eq!(rep.items.len(), 1);
    }

    #[test]
    fn curvature_failure_reports_its_order() {
        let m = fixtures::p1_x_p3_module();
        let f3 = QSeries::var(2, 4, 0);
        let c = dubrovin_connection(&m, &fixtures::p1_x_p3_potential(f3)).unwrap();
        let ctx = LogCtx::pure_q(2, 4);
        // inject a stray q₁q₂ term into L₂ at entry (5, 1)
        let mut mats = c.matrices().to_vec();
        let stray = LogSeries::from_q(
            &ctx,
            QSeries::monomial(2, 4, vec![1, 1], CoeffScalar::from_int(1)),
        );
        let bumped = &mats[1].get(5, 1).clone() + &stray;
        mats[1].set(5, 1, bumped);
        let bad = ConnectionMatrix::from_parts(mats).unwrap();
        let rep = flatness_check(&bad);
        let item = rep.first_failure().expect("curvature must appear");
        assert_eq!(item.name, "flatness");
        assert_eq!(item.location, Some(Location::Order(2)));
    }

    #[test]
    fn transversality_holds_and_shifts_by_exactly_one() {
        let m = fixtures::quintic_module();
        let c = dubrovin_connection(&m, &fixtures::quintic_potential(5)).unwrap();
        let f = module_filtration(&m);
        assert!(transversality_check(&c, &f).pass());
        // the shift is exactly one: the action does not preserve the steps
        // themselves (F² is not L₁-stable)
        let step = f.at(2);
        let img = Subspace::span(4, &(m.a(0) * step.basis()));
        assert!(!step.contains(&img));
    }

    #[test]
    fn transversality_violation_is_located() {
        let m = fixtures::quintic_module();
        let c = dubrovin_connection(&m, &fixtures::quintic_potential(4)).unwrap();
        let ctx = LogCtx::pure_q(1, 4);
        // a q₁-proportional term dropping two steps maps F² past F¹
        let mut mats = c.matrices().to_vec();
        let stray = LogSeries::from_q(&ctx, QSeries::var(1, 4, 0));
        let bumped = &mats[0].get(3, 1).clone() + &stray;
        mats[0].set(3, 1, bumped);
        let bad = ConnectionMatrix::from_parts(mats).unwrap();
        let rep = transversality_check(&bad, &module_filtration(&m));
        assert!(!rep.pass());
        let item = rep.first_failure().unwrap();
        assert_eq!(item.name, "transversality");
        assert_eq!(item.location, Some(Location::Pair(0, 2)));
    }

    #[test]
    fn pairing_is_flat_for_the_quantum_connection() {
        let m = fixtures::quintic_module();
        let c = dubrovin_connection(&m, &fixtures::quintic_potential(5)).unwrap();
        assert!(pairing_flatness_check(&c, &q_form(&m)).pass());

        let m = fixtures::p1_x_p3_module();
        let f3 = QSeries::var(2, 4, 0);
        let c = dubrovin_connection(&m, &fixtures::p1_x_p3_potential(f3)).unwrap();
        let rep = pairing_flatness_check(&c, &q_form(&m));
        assert!(rep.pass(), "{}", rep.to_text());
    }

    #[test]
    fn invalid_potential_is_rejected_with_the_failing_check() {
        let m = fixtures::p1_x_p3_module();
        let f3 = &QSeries::var(2, 4, 0) * &QSeries::var(2, 4, 1);
        let err = dubrovin_connection(&m, &fixtures::p1_x_p3_potential(f3));
        match err {
            Err(Error::Precondition(msg)) => {
                assert!(msg.contains("quantum potential"), "{msg}");
            }
            other => panic!("expected a precondition failure, got {other:?}"),
        }
    }
}
