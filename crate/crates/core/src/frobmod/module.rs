//! Graded modules with a distinguished degree-2 action.
//!
//! A module here is a graded space `V = V_0 ⊕ V_2 ⊕ … ⊕ V_{2k}` with a
//! perfect pairing `B` matching `V_{2p}` against `V_{2(k−p)}`, a unit
//! `e ∈ V_0`, and commuting degree-raising operators — one for each basis
//! vector of `V_2`.  The adapted basis is part of the contract: `B` must be
//! the permutation matrix of the duality involution δ, and the involution
//! is re-derived from `B` rather than taken on faith.

use crate::error::Error;
use crate::hodge::{check_polarized_by, Bigrading};
use crate::linfilt::{ExactMat, ExactScalar, Subspace};
use crate::report::{Location, Report};
use std::ops::Range;

/// Degree bookkeeping for an adapted basis `T_0, …, T_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    weight: u32,
    dims: Vec<usize>,
    degrees: Vec<u32>,
    delta: Vec<usize>,
}

impl GradedSpace {
    /// Build from the weight, the dimensions of `V_0, V_2, …, V_{2k}`, and
    /// the pairing matrix, whose permutation structure defines δ.
    pub fn new(weight: u32, dims: &[usize], b: &ExactMat) -> Result<Self, Error> {
        let k = weight as usize;
        if dims.len() != k + 1 {
            return Err(Error::InvalidModule(format!(
                "weight {weight} needs {} graded dimensions, got {}",
                k + 1,
                dims.len()
            )));
        }
        if dims[0] != 1 {
            return Err(Error::InvalidModule(format!(
                "V_0 must be spanned by the unit alone, got dim {}",
                dims[0]
            )));
        }
        for p in 0..=k {
            if dims[p] != dims[k - p] {
                return Err(Error::InvalidModule(format!(
                    "pairing needs dim V_{} = dim V_{}, got {} and {}",
                    2 * p,
                    2 * (k - p),
                    dims[p],
                    dims[k - p]
                )));
            }
        }
        let n: usize = dims.iter().sum();
        if (b.rows, b.cols) != (n, n) {
            return Err(Error::InvalidModule(format!(
                "pairing matrix is {}×{}, basis has {n} vectors",
                b.rows, b.cols
            )));
        }
        let mut degrees = Vec::with_capacity(n);
        for (p, &d) in dims.iter().enumerate() {
            degrees.extend(std::iter::repeat(2 * p as u32).take(d));
        }
        // δ from B: B(T_{δ(a)}, T_b) = δ_{ab} forces B to be the symmetric
        // permutation matrix of an involution
        let one = ExactScalar::one();
        let mut delta = vec![usize::MAX; n];
        for a in 0..n {
            for c in 0..n {
                let entry = b.get(a, c);
                if entry.is_zero() {
                    continue;
                }
                if *entry != one || delta[a] != usize::MAX {
                    return Err(Error::InvalidModule(format!(
                        "pairing matrix row {a} is not a 0/1 permutation row"
                    )));
                }
                delta[a] = c;
            }
            if delta[a] == usize::MAX {
                return Err(Error::InvalidModule(format!(
                    "pairing matrix row {a} is zero"
                )));
            }
        }
        for a in 0..n {
            if delta[delta[a]] != a {
                return Err(Error::InvalidModule(format!(
                    "pairing matrix is not symmetric at ({a}, {})",
                    delta[a]
                )));
            }
            if degrees[delta[a]] != 2 * weight - degrees[a] {
                return Err(Error::InvalidModule(format!(
                    "duality must send degree {} to {}, but δ({a}) = {} has degree {}",
                    degrees[a],
                    2 * weight - degrees[a],
                    delta[a],
                    degrees[delta[a]]
                )));
            }
        }
        Ok(GradedSpace {
            weight,
            dims: dims.to_vec(),
            degrees,
            delta,
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Total number of basis vectors (`m + 1`).
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `ã(a)`, the degree of the basis label `a`.
    pub fn degree(&self, a: usize) -> u32 {
        self.degrees[a]
    }

    pub fn delta(&self, a: usize) -> usize {
        self.delta[a]
    }

    /// Label range of the degree-`deg` block (empty for odd/overflowing
    /// degrees).
    pub fn labels_of_degree(&self, deg: u32) -> Range<usize> {
        if deg % 2 != 0 || deg > 2 * self.weight {
            return 0..0;
        }
        let p = (deg / 2) as usize;
        let start: usize = self.dims[..p].iter().sum();
        start..start + self.dims[p]
    }

    pub fn v2_labels(&self) -> Range<usize> {
        self.labels_of_degree(2)
    }

    /// `r`, the dimension of `V_2`.
    pub fn v2_rank(&self) -> usize {
        self.v2_labels().len()
    }

    /// The coordinate subspace spanned by the degree-`deg` block.
    pub fn block(&self, deg: u32) -> Subspace {
        let n = self.dim();
        let range = self.labels_of_degree(deg);
        let mut m = ExactMat::zeros(n, range.len());
        for (j, a) in range.enumerate() {
            m.set(a, j, ExactScalar::one());
        }
        Subspace::span(n, &m)
    }
}

/// A graded module with unit, pairing, and degree-2 action.
#[derive(Clone, Debug)]
pub struct FrobeniusModule {
    space: GradedSpace,
    b: ExactMat,
    action: Vec<ExactMat>,
    real: bool,
}

impl FrobeniusModule {
    /// Shape-level construction: the pairing must define a valid duality
    /// (hard error), while the unit/grading/symmetry/commutativity axioms
    /// are checked by [`validate_module`] so that violating instances can
    /// be represented and reported on.
    pub fn new(
        weight: u32,
        dims: &[usize],
        b: ExactMat,
        action: Vec<ExactMat>,
        real: bool,
    ) -> Result<Self, Error> {
        let space = GradedSpace::new(weight, dims, &b)?;
        let n = space.dim();
        let r = space.v2_rank();
        if action.len() != r {
            return Err(Error::ShapeMismatch(format!(
                "expected {r} action matrices (dim V_2), got {}",
                action.len()
            )));
        }
        for (j, a) in action.iter().enumerate() {
            if (a.rows, a.cols) != (n, n) {
                return Err(Error::ShapeMismatch(format!(
                    "action matrix {j} is {}×{}, expected {n}×{n}",
                    a.rows, a.cols
                )));
            }
        }
        Ok(FrobeniusModule {
            space,
            b,
            action,
            real,
        })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn b(&self) -> &ExactMat {
        &self.b
    }

    pub fn action(&self) -> &[ExactMat] {
        &self.action
    }

    /// Action matrix of the `j`-th degree-2 basis vector (`j` counts within
    /// `V_2`).
    pub fn a(&self, j: usize) -> &ExactMat {
        &self.action[j]
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The unit vector `e = T_0`.
    pub fn e_vec(&self) -> Vec<ExactScalar> {
        let mut e = vec![ExactScalar::zero(); self.dim()];
        e[0] = ExactScalar::one();
        e
    }

    /// `B(u, v)` for coordinate vectors.
    pub fn pair(&self, u: &[ExactScalar], v: &[ExactScalar]) -> ExactScalar {
        let m = &(&ExactMat::col_vec(u).transpose() * &self.b) * &ExactMat::col_vec(v);
        m.get(0, 0).clone()
    }

    /// The operator `L_w = Σ w_a A_a` for `w` supported in the degree-2
    /// block; other support is an error.
    pub fn v2_operator(&self, w: &[ExactScalar]) -> Result<ExactMat, Error> {
        let n = self.dim();
        if w.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "vector has {} entries, module dimension is {n}",
                w.len()
            )));
        }
        let v2 = self.space.v2_labels();
        for (a, c) in w.iter().enumerate() {
            if !c.is_zero() && !v2.contains(&a) {
                return Err(Error::Precondition(format!(
                    "vector has support at label {a} outside the degree-2 block"
                )));
            }
        }
        let mut l = ExactMat::zeros(n, n);
        for (j, a) in v2.clone().enumerate() {
            if !w[a].is_zero() {
                l = &l + &self.action[j].scale(&w[a]);
            }
        }
        Ok(l)
    }
}

/// The sign-twisted pairing `Q(T_a, T_b) = (−1)^{k + ã(a)/2} B(T_a, T_b)`.
pub fn q_form(m: &FrobeniusModule) -> ExactMat {
    let space = m.space();
    let n = space.dim();
    ExactMat::from_fn(n, n, |a, c| {
        let sign = (space.weight() + space.degree(a) / 2) % 2;
        let v = m.b().get(a, c).clone();
        if sign == 0 {
            v
        } else {
            -&v
        }
    })
}

/// The diagonal bigrading of the module: `I^{p,p}` is the degree-`2(k−p)`
/// block.
pub fn module_bigrading(m: &FrobeniusModule) -> Bigrading {
    let space = m.space();
    let k = space.weight() as i64;
    let mut i = Bigrading::new(space.dim());
    for p in 0..=k {
        i.insert(p, p, space.block((2 * (k - p)) as u32));
    }
    i
}

/// Full axiom check: unit, grading, pairing symmetry, commutativity,
/// blockwise nondegeneracy, infinitesimal invariance of the twisted
/// pairing, and (for real modules) reality of the data.
pub fn validate_module(m: &FrobeniusModule) -> Report {
    let space = m.space();
    let n = space.dim();
    let r = space.v2_rank();
    let v2_start = space.v2_labels().start;
    let mut report = Report::new();
    let e = ExactMat::col_vec(&m.e_vec());
    for j in 0..r {
        let label = v2_start + j;
        let img = m.a(j) * &e;
        let mut expected = ExactMat::zeros(n, 1);
        expected.set(label, 0, ExactScalar::one());
        report.check_at(
            "unit",
            img == expected,
            Location::Index(label as i64),
            format!("T_{label} ∗ e = T_{label}"),
        );
    }
    for j in 0..r {
        let label = v2_start + j;
        let mut offending = None;
        'scan: for a in 0..n {
            let target = space.degree(a) + 2;
            let range = space.labels_of_degree(target);
            for row in 0..n {
                if !range.contains(&row) && !m.a(j).get(row, a).is_zero() {
                    offending = Some((row, a));
                    break 'scan;
                }
            }
        }
        report.check_at(
            "grading",
            offending.is_none(),
            Location::Index(label as i64),
            match offending {
                None => format!("T_{label} raises degree by exactly 2"),
                Some((row, col)) => format!(
                    "action of T_{label} has an off-block entry at ({row}, {col})"
                ),
            },
        );
    }
    for j in 0..r {
        let label = v2_start + j;
        let diff = &(&m.a(j).transpose() * m.b()) - &(m.b() * m.a(j));
        let bad = first_nonzero(&diff);
        report.check_at(
            "b-symmetry",
            bad.is_none(),
            Location::Index(label as i64),
            match bad {
                None => format!("B(T_{label} ∗ u, v) = B(u, T_{label} ∗ v)"),
                Some((row, col)) => format!(
                    "pairing symmetry for T_{label} fails first at entry ({row}, {col})"
                ),
            },
        );
    }
    for j in 0..r {
        for l in j + 1..r {
            let comm = m.a(j).commutator(m.a(l));
            report.check_at(
                "commutativity",
                comm.is_zero(),
                Location::Pair((v2_start + j) as i64, (v2_start + l) as i64),
                format!("[L_{}, L_{}] = 0", v2_start + j, v2_start + l),
            );
        }
    }
    let k = space.weight();
    for p in 0..=k {
        let rows: Vec<usize> = space.labels_of_degree(2 * p).collect();
        let cols: Vec<usize> = space.labels_of_degree(2 * (k - p)).collect();
        let sub = ExactMat::from_fn(rows.len(), cols.len(), |i, j| {
            m.b().get(rows[i], cols[j]).clone()
        });
        report.check_at(
            "pairing",
            sub.rank() == rows.len(),
            Location::Index(p as i64),
            format!("B pairs V_{} with V_{} perfectly", 2 * p, 2 * (k - p)),
        );
    }
    let q = q_form(m);
    for j in 0..r {
        let label = v2_start + j;
        let skew = &(&m.a(j).transpose() * &q) + &(&q * m.a(j));
        report.check_at(
            "q-infinitesimal",
            skew.is_zero(),
            Location::Index(label as i64),
            format!("Q(T_{label} ∗ u, v) + Q(u, T_{label} ∗ v) = 0"),
        );
    }
    if m.is_real() {
        let all_real = m
            .action()
            .iter()
            .all(|a| (0..n).all(|i| (0..n).all(|c| a.get(i, c).is_real())));
        report.check(
            "real",
            all_real,
            "declared real structure: all action entries are real",
        );
    }
    report
}

fn first_nonzero(m: &ExactMat) -> Option<(usize, usize)> {
    for i in 0..m.rows {
        for j in 0..m.cols {
            if !m.get(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// A monomial in the degree-2 generators with an exact coefficient.
pub type V2Polynomial = Vec<(Vec<u16>, ExactScalar)>;

/// Outcome of the generation check.
#[derive(Clone, Debug)]
pub enum GenerationCertificate {
    /// For each basis label, a polynomial `P` in the degree-2 generators
    /// with `P ∗ e` equal to that basis vector.
    Spanning(Vec<V2Polynomial>),
    /// The first degree whose block is not reached.
    Deficient { degree: u32 },
}

fn monomials_of_degree(r: usize, d: u32) -> Vec<Vec<u16>> {
    if r == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut current = vec![0u16; r];
    fn rec(out: &mut Vec<Vec<u16>>, current: &mut Vec<u16>, pos: usize, left: u32) {
        if pos + 1 == current.len() {
            current[pos] = left as u16;
            out.push(current.clone());
            return;
        }
        for take in 0..=left {
            current[pos] = take as u16;
            rec(out, current, pos + 1, left - take);
        }
    }
    rec(&mut out, &mut current, 0, d);
    out
}

/// Whether iterated application of the degree-2 action to the unit spans
/// the module, with an explicit certificate either way.
pub fn is_generated_by_v2(m: &FrobeniusModule) -> (bool, GenerationCertificate) {
    let space = m.space();
    let n = space.dim();
    let r = space.v2_rank();
    let k = space.weight();
    // vectors A^β e by monomial, degree by degree
    let mut by_degree: Vec<Vec<(Vec<u16>, ExactMat)>> =
        vec![(vec![0u16; r], ExactMat::col_vec(&m.e_vec()))]
            .into_iter()
            .map(|x| vec![x])
            .collect();
    for p in 1..=k as usize {
        let mut level = Vec::new();
        for beta in monomials_of_degree(r, p as u32) {
            // reduce along the first active generator
            let j = beta.iter().position(|&x| x > 0).expect("degree ≥ 1");
            let mut prev = beta.clone();
            prev[j] -= 1;
            let prev_vec = by_degree[p - 1]
                .iter()
                .find(|(b, _)| *b == prev)
                .map(|(_, v)| v.clone())
                .expect("previous degree already computed");
            level.push((beta, m.a(j) * &prev_vec));
        }
        by_degree.push(level);
    }
    let mut witnesses: Vec<V2Polynomial> = vec![Vec::new(); n];
    for p in 0..=k as usize {
        let labels: Vec<usize> = space.labels_of_degree(2 * p as u32).collect();
        if labels.is_empty() {
            continue;
        }
        let level = &by_degree[p];
        let mut stack = ExactMat::zeros(n, level.len());
        for (c, (_, v)) in level.iter().enumerate() {
            for row in 0..n {
                stack.set(row, c, v.get(row, 0).clone());
            }
        }
        for &a in &labels {
            let mut target = ExactMat::zeros(n, 1);
            target.set(a, 0, ExactScalar::one());
            match stack.solve(&target) {
                Ok(x) => {
                    let mut poly = Vec::new();
                    for (c, (beta, _)) in level.iter().enumerate() {
                        let coeff = x.get(c, 0).clone();
                        if !coeff.is_zero() {
                            poly.push((beta.clone(), coeff));
                        }
                    }
                    witnesses[a] = poly;
                }
                Err(_) => {
                    return (
                        false,
                        GenerationCertificate::Deficient {
                            degree: 2 * p as u32,
                        },
                    );
                }
            }
        }
    }
    (true, GenerationCertificate::Spanning(witnesses))
}

/// Evaluate a degree-2 polynomial certificate on the unit: `P ∗ e`.
pub fn apply_v2_polynomial(m: &FrobeniusModule, poly: &V2Polynomial) -> Vec<ExactScalar> {
    let n = m.dim();
    let mut acc = ExactMat::zeros(n, 1);
    for (beta, coeff) in poly {
        let mut v = ExactMat::col_vec(&m.e_vec());
        for (j, &mult) in beta.iter().enumerate() {
            for _ in 0..mult {
                v = m.a(j) * &v;
            }
        }
        acc = &acc + &v.scale(coeff);
    }
    acc.column(0)
}

/// Whether the real degree-2 vector `w` polarizes the module: routed to
/// the Lefschetz/positivity check on the diagonal bigrading with the
/// operator `L_w` and the twisted pairing.
pub fn polarizes(m: &FrobeniusModule, w: &[ExactScalar]) -> Result<Report, Error> {
    if !m.is_real() {
        return Err(Error::Precondition(
            "polarization checks need a real module".into(),
        ));
    }
    if w.iter().any(|c| !c.is_real()) {
        return Err(Error::Precondition(
            "polarizing vector must be real".into(),
        ));
    }
    let l = m.v2_operator(w)?;
    check_polarized_by(&module_bigrading(m), &l, &q_form(m))
}
