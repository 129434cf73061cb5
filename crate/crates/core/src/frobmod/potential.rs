//! Potential functions and the quantum product.
//!
//! The classical action is encoded by a cubic potential `φ_0` in the
//! coordinates dual to the adapted basis; the recovery goes through third
//! partials, and the normalization constants are chosen so that the round
//! trip action ↔ potential is exact.  A deformation adds a q-series part
//! whose shape depends on the weight: a single scalar series in weight 3,
//! and series-valued linear/quadratic coefficients in higher weight.  The
//! deformed action is again read off by differentiating the total
//! potential, with coordinate derivatives acting on the q-series through
//! `τ·θ` for the degree-2 coordinates.

use super::module::{FrobeniusModule, GradedSpace};
use crate::error::Error;
use crate::linfilt::{ExactMat, ExactScalar};
use crate::qseries::{CoeffScalar, LogCtx, LogSeries, MatrixSeries, QSeries};
use crate::report::{Location, Report};
use std::collections::BTreeMap;

/// A cubic polynomial with exact coefficients, stored per sorted monomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CubicForm {
    nvars: usize,
    terms: BTreeMap<[usize; 3], ExactScalar>,
}

impl CubicForm {
    pub fn new(nvars: usize) -> Self {
        CubicForm {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Add `c·z_i z_j z_l` (the coefficient of the monomial, not of an
    /// ordered triple).
    pub fn add(&mut self, i: usize, j: usize, l: usize, c: &ExactScalar) {
        assert!(i < self.nvars && j < self.nvars && l < self.nvars);
        let mut key = [i, j, l];
        key.sort_unstable();
        let entry = self.terms.entry(key).or_insert_with(ExactScalar::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Coefficient of the monomial `z_i z_j z_l`.
    pub fn coeff(&self, i: usize, j: usize, l: usize) -> ExactScalar {
        let mut key = [i, j, l];
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize; 3], &ExactScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `∂³ / ∂z_i ∂z_j ∂z_l` — a scalar, with the multiplicity of repeated
    /// indices accounted for.
    pub fn third_partial(&self, i: usize, j: usize, l: usize) -> ExactScalar {
        let mut key = [i, j, l];
        key.sort_unstable();
        let Some(c) = self.terms.get(&key) else {
            return ExactScalar::zero();
        };
        let mult: i64 = if key[0] == key[2] {
            6
        } else if key[0] == key[1] || key[1] == key[2] {
            2
        } else {
            1
        };
        c * &ExactScalar::from_int(mult)
    }
}

/// Normalization constant for the middle slot of the cubic sum; together
/// with the overall 1/12 it makes the potential ↔ action round trip exact.
fn slot_constant(k: u32, deg: u32) -> i64 {
    if k == 3 && deg == 2 {
        2
    } else if k != 3 && (deg == 2 || deg + 4 == 2 * k) {
        3
    } else {
        6
    }
}

/// The cubic potential of the classical action:
/// `φ_0 = Σ z_j z_a z_b · C(ã(a))/12 · B(T_j ∗ T_a, T_b)` with `j` running
/// over degree-2 labels and `a, b` over all labels.
pub fn classical_potential(m: &FrobeniusModule) -> CubicForm {
    let space = m.space();
    let n = space.dim();
    let k = space.weight();
    let mut phi = CubicForm::new(n);
    let twelfth = ExactScalar::from_rat(crate::linfilt::rat(1, 12));
    for (j, label) in space.v2_labels().enumerate() {
        // B(T_j ∗ T_a, T_b) = (A_jᵀ B)[a][b]
        let pairings = &m.a(j).transpose() * m.b();
        for a in 0..n {
            let c = ExactScalar::from_int(slot_constant(k, space.degree(a)));
            for b in 0..n {
                let v = pairings.get(a, b);
                if v.is_zero() {
                    continue;
                }
                phi.add(label, a, b, &(&(v * &c) * &twelfth));
            }
        }
    }
    phi
}

/// Recover the degree-2 action from a cubic potential:
/// the `T_c`-component of `T_j ∗ T_a` is `∂³φ / ∂z_j ∂z_a ∂z_{δ(c)}`,
/// with `c` restricted to the degree-`(ã(a)+2)` block.
pub fn action_from_potential(space: &GradedSpace, phi: &CubicForm) -> Vec<ExactMat> {
    let n = space.dim();
    let mut out = Vec::with_capacity(space.v2_rank());
    for j in space.v2_labels() {
        let mut a_j = ExactMat::zeros(n, n);
        for a in 0..n {
            for c in space.labels_of_degree(space.degree(a) + 2) {
                a_j.set(c, a, phi.third_partial(j, a, space.delta(c)));
            }
        }
        out.push(a_j);
    }
    out
}

/// A q-series deformation of the classical potential.
///
/// The admissible shape depends on the weight `k`:
/// weight ≤ 2 admits no deformation, weight 3 a single scalar series, and
/// weight ≥ 4 a linear part indexed by degree-(2k−4) labels plus a
/// quadratic part indexed by pairs of strictly intermediate labels with
/// degrees summing to 2k−2.  Every series must vanish at q = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    weight: u32,
    nvars: usize,
    order: u32,
    plain: Option<QSeries>,
    linear: BTreeMap<usize, QSeries>,
    quadratic: BTreeMap<(usize, usize), QSeries>,
}

impl Potential {
    pub fn zero(space: &GradedSpace, order: u32) -> Self {
        Potential {
            weight: space.weight(),
            nvars: space.v2_rank(),
            order,
            plain: None,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
        }
    }

    /// Weight-3 constructor: one plain series in the q-variables.
    pub fn weight3(space: &GradedSpace, phi: QSeries) -> Result<Self, Error> {
        if space.weight() != 3 {
            return Err(Error::Unsupported(format!(
                "a single scalar deformation exists only in weight 3, not {}",
                space.weight()
            )));
        }
        check_series(space, &phi)?;
        Ok(Potential {
            weight: 3,
            nvars: space.v2_rank(),
            order: phi.order(),
            plain: if phi.is_zero() { None } else { Some(phi) },
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
        })
    }

    /// Weight ≥ 4 constructor from labelled parts; empty parts are allowed
    /// in every weight and give the zero deformation.
    pub fn with_parts(
        space: &GradedSpace,
        order: u32,
        linear: BTreeMap<usize, QSeries>,
        quadratic: BTreeMap<(usize, usize), QSeries>,
    ) -> Result<Self, Error> {
        let k = space.weight();
        let nonzero =
            linear.values().any(|f| !f.is_zero()) || quadratic.values().any(|f| !f.is_zero());
        if k <= 3 && nonzero {
            return Err(Error::Unsupported(format!(
                "weight-{k} potentials have no labelled parts"
            )));
        }
        let mut lin = BTreeMap::new();
        for (a, f) in linear {
            if f.is_zero() {
                continue;
            }
            if space.degree(a) + 4 != 2 * k {
                return Err(Error::InvalidModule(format!(
                    "linear part label {a} must have degree {}, has {}",
                    2 * k - 4,
                    space.degree(a)
                )));
            }
            check_series(space, &f)?;
            lin.insert(a, f.truncate(order));
        }
        let mut quad = BTreeMap::new();
        for ((a, b), f) in quadratic {
            if f.is_zero() {
                continue;
            }
            let (da, db) = (space.degree(a), space.degree(b));
            if a > b || da + db + 2 != 2 * k || da <= 2 || db <= 2 {
                return Err(Error::InvalidModule(format!(
                    "quadratic part labels ({a}, {b}) must be ordered intermediate labels \
                     with degrees summing to {}",
                    2 * k - 2
                )));
            }
            check_series(space, &f)?;
            quad.insert((a, b), f.truncate(order));
        }
        Ok(Potential {
            weight: k,
            nvars: space.v2_rank(),
            order,
            plain: None,
            linear: lin,
            quadratic: quad,
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.plain.is_none() && self.linear.is_empty() && self.quadratic.is_empty()
    }

    pub fn plain(&self) -> Option<&QSeries> {
        self.plain.as_ref()
    }

    pub fn linear(&self) -> &BTreeMap<usize, QSeries> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), QSeries> {
        &self.quadratic
    }
}

fn check_series(space: &GradedSpace, f: &QSeries) -> Result<(), Error> {
    if f.nvars() != space.v2_rank() {
        return Err(Error::ShapeMismatch(format!(
            "deformation series has {} variables, V_2 has dimension {}",
            f.nvars(),
            space.v2_rank()
        )));
    }
    if !f.vanishes_at_origin() {
        return Err(Error::Precondition(
            "deformation series must vanish at q = 0".into(),
        ));
    }
    Ok(())
}

/// The total potential `φ_0 + φ_ħ` as a symbol series, in the context
/// where symbol `a` is the coordinate `z_a` and the degree-2 coordinates
/// are linked to the q-variables.
pub fn potential_logseries(m: &FrobeniusModule, p: &Potential) -> Result<LogSeries, Error> {
    let space = m.space();
    check_compat(m, p)?;
    let n = space.dim();
    let r = space.v2_rank();
    let v2 = space.v2_labels();
    let qlink = (0..n)
        .map(|a| {
            if v2.contains(&a) {
                Some(a - v2.start)
            } else {
                None
            }
        })
        .collect();
    let ctx = LogCtx::new(n, r, p.order(), qlink);
    let mut phi = LogSeries::zero(&ctx);
    for (key, c) in classical_potential(m).terms() {
        let mut exp = vec![0u16; n];
        for &i in key {
            exp[i] += 1;
        }
        phi = &phi
            + &LogSeries::monomial(
                &ctx,
                exp,
                QSeries::constant(r, p.order(), CoeffScalar::from_scalar(c.clone())),
            );
    }
    if let Some(f) = p.plain() {
        phi = &phi + &LogSeries::from_q(&ctx, f.clone());
    }
    for (&a, f) in p.linear() {
        let mut exp = vec![0u16; n];
        exp[a] = 1;
        phi = &phi + &LogSeries::monomial(&ctx, exp, f.clone());
    }
    for (&(a, b), f) in p.quadratic() {
        let mut exp = vec![0u16; n];
        exp[a] += 1;
        exp[b] += 1;
        phi = &phi + &LogSeries::monomial(&ctx, exp, f.clone());
    }
    Ok(phi)
}

fn check_compat(m: &FrobeniusModule, p: &Potential) -> Result<(), Error> {
    if p.weight() != m.space().weight() || p.nvars() != m.space().v2_rank() {
        return Err(Error::ShapeMismatch(format!(
            "potential shaped for weight {} with {} q-variables, module has weight {} \
             and dim V_2 = {}",
            p.weight(),
            p.nvars(),
            m.space().weight(),
            m.space().v2_rank()
        )));
    }
    Ok(())
}

/// The deformed product `T_j ·_q T_a` in coordinates: the `T_c`-component
/// is the third coordinate derivative `∂_j ∂_a ∂_{δ(c)}` of the total
/// potential, evaluated at z = 0, for `c` in the degree-`(ã(a)+2)` block.
pub fn quantum_product(
    m: &FrobeniusModule,
    p: &Potential,
    j: usize,
    a: usize,
) -> Result<Vec<QSeries>, Error> {
    let space = m.space();
    let n = space.dim();
    if j >= n || a >= n {
        return Err(Error::ShapeMismatch(format!(
            "labels ({j}, {a}) out of range for dimension {n}"
        )));
    }
    if space.degree(j) != 2 {
        return Err(Error::Unsupported(format!(
            "T_{j} has degree {}, the deformed product is defined for degree-2 labels",
            space.degree(j)
        )));
    }
    let phi = potential_logseries(m, p)?;
    let second = phi.derive_z(j).derive_z(a);
    let r = space.v2_rank();
    let mut out = vec![QSeries::zero(r, p.order()); n];
    for c in space.labels_of_degree(space.degree(a) + 2) {
        out[c] = second.derive_z(space.delta(c)).sym_free_part();
    }
    Ok(out)
}

/// All deformed action matrices at once, as q-series matrices (column `a`
/// of the `j`-th matrix is `T_j ·_q T_a`).
pub fn quantum_action(m: &FrobeniusModule, p: &Potential) -> Result<Vec<MatrixSeries>, Error> {
    let space = m.space();
    let n = space.dim();
    let r = space.v2_rank();
    let phi = potential_logseries(m, p)?;
    let ctx = LogCtx::pure_q(r, p.order());
    let mut out = Vec::with_capacity(r);
    for j in space.v2_labels() {
        let dj = phi.derive_z(j);
        let mut l = MatrixSeries::zeros(&ctx, n, n);
        for a in 0..n {
            let dja = dj.derive_z(a);
            for c in space.labels_of_degree(space.degree(a) + 2) {
                l.set(
                    c,
                    a,
                    LogSeries::from_q(&ctx, dja.derive_z(space.delta(c)).sym_free_part()),
                );
            }
        }
        out.push(l);
    }
    Ok(out)
}

/// Check that a deformation keeps the module axioms order by order: the
/// deformed action must preserve the unit, stay symmetric for `B`, reduce
/// to the classical action at q = 0, and commute (the associativity
/// constraint on the potential).  In weight 3 the shape of the potential
/// is the only requirement.
pub fn validate_quantum_potential(m: &FrobeniusModule, p: &Potential) -> Report {
    let mut report = Report::new();
    let space = m.space();
    let compatible = p.weight() == space.weight() && p.nvars() == space.v2_rank();
    report.check(
        "support",
        compatible,
        format!(
            "potential shaped for weight {} with {} q-variables",
            p.weight(),
            p.nvars()
        ),
    );
    if !compatible {
        return report;
    }
    if space.weight() <= 3 {
        report.check(
            "form",
            true,
            "scalar deformations impose no further constraints in weight ≤ 3",
        );
        return report;
    }
    let action = quantum_action(m, p).expect("compatibility already checked");
    let n = space.dim();
    let r = space.v2_rank();
    let v2_start = space.v2_labels().start;
    let ctx = action[0].ctx().clone();
    let zero_exp = vec![0u16; r];
    for (j, l) in action.iter().enumerate() {
        let label = v2_start + j;
        let by_tau = {
            let mut map = BTreeMap::new();
            for (tau, mat) in l.coeff_q_by_tau(&zero_exp) {
                if !mat.is_zero() {
                    map.insert(tau, mat);
                }
            }
            map
        };
        let classical_ok = by_tau.len() <= 1
            && by_tau.keys().all(|&t| t == 0)
            && by_tau
                .get(&0)
                .map_or(m.a(j).is_zero(), |mat| mat == m.a(j));
        report.check_at(
            "classical-limit",
            classical_ok,
            Location::Index(label as i64),
            format!("T_{label} ·_q reduces to the classical action at q = 0"),
        );
        let mut unit_ok = true;
        for row in 0..n {
            let got = l.get(row, 0).sym_free_part();
            let want = if row == label {
                QSeries::one(r, p.order())
            } else {
                QSeries::zero(r, p.order())
            };
            if got != want {
                unit_ok = false;
                break;
            }
        }
        report.check_at(
            "unit",
            unit_ok,
            Location::Index(label as i64),
            format!("T_{label} ·_q e = T_{label}"),
        );
    }
    let b_series = MatrixSeries::from_exact(&ctx, m.b());
    for (j, l) in action.iter().enumerate() {
        let label = v2_start + j;
        let diff = &(&l.transpose() * &b_series) - &(&b_series * l);
        match diff.first_nonzero_q_order() {
            None => report.check_at(
                "b-symmetry",
                true,
                Location::Index(label as i64),
                format!("B(T_{label} ·_q u, v) = B(u, T_{label} ·_q v)"),
            ),
            Some((order, row, col)) => report.check_at(
                "b-symmetry",
                false,
                Location::Order(order),
                format!(
                    "pairing symmetry for T_{label} fails at order {order}, entry ({row}, {col})"
                ),
            ),
        }
    }
    for j in 0..r {
        for l in j + 1..r {
            let (lab_j, lab_l) = (v2_start + j, v2_start + l);
            let comm = action[j].commutator(&action[l]);
            match comm.first_nonzero_q_order() {
                None => report.check_at(
                    "commutativity",
                    true,
                    Location::Pair(lab_j as i64, lab_l as i64),
                    format!("T_{lab_j} ·_q and T_{lab_l} ·_q commute"),
                ),
                Some((order, row, col)) => report.check_at(
                    "commutativity",
                    false,
                    Location::Order(order),
                    format!(
                        "deformed actions of T_{lab_j} and T_{lab_l} fail to commute at \
                         order {order}, entry ({row}, {col})"
                    ),
                ),
            }
        }
    }
    report
}
