//! Canonical disc coordinates at a maximally unipotent degeneration.
//!
//! Rescaling the coordinates by unit series, `q̃_j = f_j(q)·q_j` with
//! `f_j(0) = 1`, changes the level `−1` part of the gauge function by
//! `τ⁻¹ Σ_j log(g_j)·N_j` plus higher corrections, where the `g_j` are the
//! units of the inverse change.  When the limit bigrading is diagonal, the
//! `N_j` act injectively on the marked block `I^{1,1}`, so there is exactly
//! one choice of units making the level `−1` part annihilate that block.
//! [`canonical_coordinates`] finds it degree by degree: at each total
//! degree the remaining defect is a linear system over the monodromy
//! images of the marked block, solved exactly.

use std::collections::BTreeSet;

use crate::amodel::{maximal_unipotency_check, VHSGerm};
use crate::degeneration::coordinate_change;
use crate::error::Error;
use crate::hodge::{is_hodge_tate, is_split_real};
use crate::linfilt::{ExactMat, ExactScalar};
use crate::qseries::{total_degree, CoeffScalar, MatrixSeries, QSeries};

/// A germ together with the unit rescalings that normalized it.
///
/// The units are expressed in the coordinates of the *input* germ: the
/// canonical coordinates are `q̃_j = f_j(q)·q_j` with `f_j = units()[j]`,
/// and [`CanonicalCoordinates::germ`] is the input germ rewritten in them.
#[derive(Clone)]
pub struct CanonicalCoordinates {
    units: Vec<QSeries>,
    germ: VHSGerm,
}

impl std::fmt::Debug for CanonicalCoordinates {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CanonicalCoordinates[{} units, order {}]",
            self.units.len(),
            self.germ.order()
        )
    }
}

impl CanonicalCoordinates {
    /// The unit factors `f_j`, each with constant term 1.
    pub fn units(&self) -> &[QSeries] {
        &self.units
    }

    /// The canonical coordinate functions `f_j(q)·q_j` themselves.
    pub fn coordinates(&self) -> Vec<QSeries> {
        let r = self.units.len();
        self.units
            .iter()
            .enumerate()
            .map(|(j, f)| f * &QSeries::var(r, f.order(), j))
            .collect()
    }

    /// The germ in canonical coordinates.
    pub fn germ(&self) -> &VHSGerm {
        &self.germ
    }

    pub fn into_germ(self) -> VHSGerm {
        self.germ
    }
}

/// Normalize the disc coordinates of `g` so that the level `−1` part of
/// the gauge function kills the marked block `I^{1,1}`.
///
/// Requires the maximal unipotency conditions (one-dimensional top piece
/// framed by the logarithms) and a diagonal, real-split limit bigrading;
/// a germ failing either is rejected with a precondition error.  The
/// normalization with `f_j(0) = 1` is unique, so the operation is
/// idempotent: on an already normalized germ the units come back as 1 and
/// the germ is returned unchanged.
pub fn canonical_coordinates(g: &VHSGerm) -> Result<CanonicalCoordinates, Error> {
    let unip = maximal_unipotency_check(g);
    if !unip.pass() {
        let item = unip.first_failure().expect("failing report has a failure");
        return Err(Error::Precondition(format!(
            "not maximally unipotent: check `{}` fails",
            item.name
        )));
    }
    if !is_hodge_tate(g.bigrading()) {
        return Err(Error::Precondition(
            "the limit bigrading is not concentrated on the diagonal".into(),
        ));
    }
    if !is_split_real(g.bigrading()) {
        return Err(Error::Precondition(
            "the limit bigrading is not defined over the reals".into(),
        ));
    }

    let n = g.dim();
    let r = g.nvars();
    let order = g.order();
    let marked = g.bigrading().piece(1, 1);
    let t = marked.dim();
    let u_mat = marked.basis().clone();

    // One stacked coefficient matrix serves every degree: row (t·n + i),
    // column j holds component i of N_j applied to the t-th marked basis
    // vector.  Uniqueness of the normalization is exactly injectivity.
    let mut rows: Vec<Vec<ExactScalar>> = Vec::with_capacity(t * n);
    for tcol in 0..t {
        let u = ExactMat::col_vec(&u_mat.column(tcol));
        let images: Vec<ExactMat> = g.ns().iter().map(|nj| nj * &u).collect();
        for i in 0..n {
            rows.push((0..r).map(|j| images[j].get(i, 0).clone()).collect());
        }
    }
    if ExactMat::from_rows(rows.clone()).rank() < r {
        return Err(Error::Precondition(
            "the logarithms do not act injectively on the marked block, so \
             no coordinate normalization is determined"
                .into(),
        ));
    }

    let zeros = vec![ExactScalar::zero(); r];
    let mut units = vec![QSeries::one(r, order); r];
    for d in 1..=order {
        let current = coordinate_change(g, &units, &zeros)?;
        let gm1 = current.endo_bigrading().minus1_series(current.gamma());
        let ctx = gm1.ctx().clone();
        let defect = &gm1 * &MatrixSeries::from_exact(&ctx, &u_mat);

        let mut exps: BTreeSet<Vec<u16>> = BTreeSet::new();
        for e in defect.q_support() {
            if total_degree(&e) == d {
                exps.insert(e);
            }
        }
        let mut corr = vec![QSeries::zero(r, order); r];
        for beta in &exps {
            let mut rhs: Vec<CoeffScalar> = Vec::with_capacity(t * n);
            for tcol in 0..t {
                for i in 0..n {
                    // The defect enters the gauge function through τ⁻¹·log,
                    // so the system to cancel it carries one power of τ.
                    rhs.push(defect.get(i, tcol).sym_free_part().coeff(beta).mul_tau_pow(1));
                }
            }
            if rhs.iter().all(|c| c.is_zero()) {
                continue;
            }
            let w = solve_defect(&rows, &rhs, r, beta)?;
            for j in 0..r {
                if !w[j].is_zero() {
                    corr[j].add_term(beta, &w[j]);
                }
            }
        }
        if corr.iter().all(|c| c.is_zero()) {
            continue;
        }
        // Compose: the correction units live in the current coordinates,
        // so pull them back along the accumulated change before merging.
        let forward: Vec<QSeries> = (0..r)
            .map(|j| &units[j] * &QSeries::var(r, order, j))
            .collect();
        for j in 0..r {
            units[j] = &units[j] * &corr[j].exp().substitute(&forward);
        }
    }

    let trivial = units.iter().all(|f| *f == QSeries::one(r, order));
    let germ = if trivial {
        g.clone()
    } else {
        coordinate_change(g, &units, &zeros)?
    };
    let gm1 = germ.endo_bigrading().minus1_series(germ.gamma());
    let ctx = gm1.ctx().clone();
    if !(&gm1 * &MatrixSeries::from_exact(&ctx, &u_mat)).is_zero() {
        return Err(Error::Inconsistent(
            "a defect on the marked block survives the normalization".into(),
        ));
    }
    Ok(CanonicalCoordinates { units, germ })
}

/// Solve `Σ_j w_j·(N_j u) = rhs` over the stacked marked-block images.
/// The coefficient matrix is exact and of full column rank; the right-hand
/// side may carry powers of τ, so elimination scales it through the
/// coefficient ring.
fn solve_defect(
    rows: &[Vec<ExactScalar>],
    rhs: &[CoeffScalar],
    r: usize,
    beta: &[u16],
) -> Result<Vec<CoeffScalar>, Error> {
    let m = rows.len();
    let mut a: Vec<Vec<ExactScalar>> = rows.to_vec();
    let mut b: Vec<CoeffScalar> = rhs.to_vec();
    let mut pivot_row = vec![usize::MAX; r];
    let mut row = 0usize;
    for col in 0..r {
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].inv().expect("pivot is nonzero");
        for c in col..r {
            let v = &a[row][c] * &inv;
            a[row][c] = v;
        }
        let bv = &b[row] * &CoeffScalar::from_scalar(inv);
        b[row] = bv;
        let prow = a[row].clone();
        let pb = b[row].clone();
        for i in 0..m {
            if i == row || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for c in col..r {
                let v = &a[i][c] - &(&f * &prow[c]);
                a[i][c] = v;
            }
            let bv = &b[i] - &(&CoeffScalar::from_scalar(f) * &pb);
            b[i] = bv;
        }
        pivot_row[col] = row;
        row += 1;
    }
    let used: BTreeSet<usize> = pivot_row.iter().copied().collect();
    for (i, bi) in b.iter().enumerate() {
        if !used.contains(&i) && !bi.is_zero() {
            return Err(Error::Inconsistent(format!(
                "no unit rescaling cancels the marked-block defect at q^{beta:?}"
            )));
        }
    }
    Ok(pivot_row.iter().map(|&p| b[p].clone()).collect())
}
