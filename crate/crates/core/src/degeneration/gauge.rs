//! Gauge normal forms for period map germs.
//!
//! Near a normal crossing degeneration the period map lifts to
//! `e^{Σ_j ℓ_j N_j}·e^{Γ(q)}·F_∞` with `ℓ_j = log q_j / 2πi` and a unique
//! gauge function `Γ` valued in the lowering part `𝔤₋` of the limit
//! endomorphism bigrading, `Γ(0) = 0`.  This module extracts that normal
//! form from a raw period frame, packages the logarithm
//! `X = log(e^{Σℓ_jN_j}e^{Γ})` together with its level `−1` part, and —
//! in the converse direction — rebuilds all of `Γ` from the level `−1`
//! part alone by integrating the horizontality equation level by level.

use super::bigrading::{g_bigrading, limit_bigrading, GBigrading};
use crate::amodel::VHSGerm;
use crate::error::Error;
use crate::linfilt::{DecFiltration, ExactMat, Subspace};
use crate::qseries::{
    total_degree, CoeffScalar, LogCtx, LogSeries, MatrixSeries, QExp, QSeries,
};
use std::collections::BTreeSet;

/// The terms of a series matrix of exact total `q`-degree `d` (symbol
/// degrees are not counted).
pub(crate) fn q_degree_part(m: &MatrixSeries, d: u32) -> MatrixSeries {
    m.map(|e| {
        let ctx = e.ctx().clone();
        let mut out = LogSeries::zero(&ctx);
        for (sym, f) in e.terms() {
            let mut keep = QSeries::zero(ctx.nvars, ctx.order);
            for (exp, c) in f.terms() {
                if total_degree(exp) == d {
                    keep.add_term(exp, c);
                }
            }
            if !keep.is_zero() {
                out.add_term(sym, &keep);
            }
        }
        out
    })
}

/// Reinterpret a symbol-free series matrix in another context with the
/// same variables and order.
pub(crate) fn lift_sym_free(ctx: &LogCtx, m: &MatrixSeries) -> MatrixSeries {
    assert_eq!(ctx.nvars, m.ctx().nvars, "variable count mismatch");
    assert!(m.is_sym_free(), "series has symbol terms");
    MatrixSeries::from_fn(ctx, m.rows, m.cols, |i, j| {
        LogSeries::from_q(ctx, m.get(i, j).sym_free_part())
    })
}

/// Put a period frame into gauge normal form.
///
/// Given a frame `ψ(q)` whose columns at `q = 0` span the steps of the
/// limit filtration (deepest step first), produce the unique `𝔤₋`-valued
/// `Γ` with `Γ(0) = 0` and `e^{Γ(q)}·F_∞ = ψ(q)·F_∞` as filtration germs.
/// The peel is order by order: after dividing by the frame at the origin,
/// whatever lowering component remains at `q`-degree `d` is the degree-`d`
/// part of `Γ`, and the rest of the frame stabilizes the filtration.
pub fn gamma_normal_form(
    psi: &MatrixSeries,
    f_inf: &DecFiltration,
    gb: &GBigrading,
) -> Result<MatrixSeries, Error> {
    let n = f_inf.ambient();
    if psi.rows != n || psi.cols != n || gb.ambient() != n {
        return Err(Error::ShapeMismatch(format!(
            "period frame is {}×{}, ambient dimension is {n}",
            psi.rows, psi.cols
        )));
    }
    let ctx = psi.ctx().clone();
    if ctx.nsyms != 0 {
        return Err(Error::ShapeMismatch(
            "period frame must be a plain series matrix, without symbols".into(),
        ));
    }

    // the frame at the origin, which must be an exact matrix…
    let mut u0 = ExactMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = psi.get(i, j).sym_free_part().constant_term();
            match c.as_scalar() {
                Some(s) => u0.set(i, j, s),
                None => {
                    return Err(Error::Precondition(format!(
                        "period frame entry ({i}, {j}) has a τ-dependent value at the origin"
                    )))
                }
            }
        }
    }
    // …invertible…
    let u0inv = u0
        .inverse()
        .map_err(|_| Error::Precondition("period frame is singular at the origin".into()))?;
    // …and flag-adapted: the first dim F^p columns span F^p, deepest first
    let mut jumps: Vec<(i64, Subspace)> = f_inf.jumps().to_vec();
    jumps.sort_by(|a, b| b.0.cmp(&a.0));
    for (p, step) in &jumps {
        let cols: Vec<usize> = (0..step.dim()).collect();
        let span = Subspace::span(n, &u0.select_cols(&cols));
        if span != *step {
            return Err(Error::Precondition(format!(
                "the first {} frame columns at the origin do not span the filtration step at level {p}",
                step.dim()
            )));
        }
    }

    let t = psi * &MatrixSeries::from_exact(&ctx, &u0inv);
    let mut gamma = MatrixSeries::zeros(&ctx, n, n);
    for d in 1..=ctx.order {
        let reduced = &(-&gamma).exp_nilpotent()? * &t;
        let zd = q_degree_part(&reduced, d);
        gamma = &gamma + &gb.project_series(&zd, |r, _| r < 0);
    }
    Ok(gamma)
}

/// The logarithm of the period frame of a germ, with its level `−1` part.
#[derive(Clone)]
pub struct XPresentation {
    x: MatrixSeries,
    x_minus1: MatrixSeries,
}

impl XPresentation {
    /// `X = log(e^{Σ_j ℓ_j N_j}·e^{Γ})`, a `𝔤₋`-valued series in the
    /// log-coordinate context (symbol `j` is `ℓ_j`, linked to `q_j`).
    pub fn x(&self) -> &MatrixSeries {
        &self.x
    }

    /// The level `−1` part of `X`, which is `Σ_j ℓ_j N_j` plus the level
    /// `−1` part of `Γ`.
    pub fn x_minus1(&self) -> &MatrixSeries {
        &self.x_minus1
    }
}

/// Take the logarithm of a germ's period frame.
///
/// Requires each `N_j` to be of pure type `(−1, −1)` for the limit mixed
/// Hodge structure; then `X` lies in `𝔤₋` because the lowering
/// subalgebra is closed under brackets.
pub fn x_from_germ(g: &VHSGerm) -> Result<XPresentation, Error> {
    let n = g.dim();
    let gb = g.endo_bigrading();
    for (j, nj) in g.ns().iter().enumerate() {
        if gb.component(nj, -1, -1) != *nj {
            return Err(Error::Precondition(format!(
                "monodromy logarithm {j} is not of pure type (-1, -1) for the limit structure"
            )));
        }
    }
    let ctx = LogCtx::log_coords(g.nvars(), g.order());
    let gamma = lift_sym_free(&ctx, g.gamma());
    let mut lin = MatrixSeries::zeros(&ctx, n, n);
    for (j, nj) in g.ns().iter().enumerate() {
        lin = &lin + &MatrixSeries::from_exact(&ctx, nj).scale_series(&LogSeries::sym(&ctx, j));
    }
    let frame = &lin.exp_nilpotent()? * &gamma.exp_nilpotent()?;
    let x = frame.log_unipotent()?;
    if !gb.is_neg_series(&x) {
        return Err(Error::Inconsistent(
            "logarithm of the period frame leaves the lowering subalgebra".into(),
        ));
    }
    let x_minus1 = gb.minus1_series(&x);
    Ok(XPresentation { x, x_minus1 })
}

/// Rebuild the full gauge function from its level `−1` part.
///
/// Horizontality forces, at each level `r ≤ −2`, the equation
/// `τ·θ_j Γ^(r) = K_j^(r)` where `K_j^(r)` collects the contributions of
/// the levels already known.  Each `q`-monomial is integrated by dividing
/// by `τ·β_j`; a coordinate that cannot integrate a source term, or two
/// coordinates that disagree, is an obstruction, reported with the total
/// `q`-degree where integration fails.  Components not pinned by the
/// equation are set to zero, which is the canonical-coordinate
/// normalization.
pub fn gamma_from_gamma_minus1(
    weight: u32,
    f_inf: &DecFiltration,
    ns: &[ExactMat],
    gm1: &MatrixSeries,
) -> Result<MatrixSeries, Error> {
    let n = f_inf.ambient();
    let r = ns.len();
    let ctx = gm1.ctx().clone();
    if ctx.nsyms != 0 || ctx.nvars != r {
        return Err(Error::ShapeMismatch(format!(
            "level -1 data has {} symbols and {} variables, expected 0 and {r}",
            ctx.nsyms, ctx.nvars
        )));
    }
    if gm1.rows != n || gm1.cols != n {
        return Err(Error::ShapeMismatch(format!(
            "level -1 data is {}×{}, ambient dimension is {n}",
            gm1.rows, gm1.cols
        )));
    }
    let (_, big) = limit_bigrading(weight, f_inf, ns)?;
    let gb = g_bigrading(&big)?;
    if gb.level_series(gm1, -1) != *gm1 {
        return Err(Error::Precondition(
            "level -1 data has components at other levels".into(),
        ));
    }
    let at_origin = (0..n).any(|i| {
        (0..n).any(|j| !gm1.get(i, j).sym_free_part().vanishes_at_origin())
    });
    if at_origin {
        return Err(Error::Precondition(
            "level -1 data does not vanish at the origin".into(),
        ));
    }

    let ns_series: Vec<MatrixSeries> = ns
        .iter()
        .map(|nj| MatrixSeries::from_exact(&ctx, nj))
        .collect();
    // the right-hand side the full gauge function must reproduce
    let targets: Vec<MatrixSeries> = (0..r)
        .map(|j| &ns_series[j] + &gm1.theta_tau(j))
        .collect();
    let residual = |gamma: &MatrixSeries, j: usize| -> Result<MatrixSeries, Error> {
        let eg = gamma.exp_nilpotent()?;
        let eginv = (-gamma).exp_nilpotent()?;
        Ok(&(&(&(&eginv * &ns_series[j]) * &eg) + &(&eginv * &eg.theta_tau(j))) - &targets[j])
    };

    let mut gamma = gm1.clone();
    for level in (gb.min_level()..=-2).rev() {
        // source terms: what the known levels force at this one
        let mut sources: Vec<MatrixSeries> = Vec::with_capacity(r);
        for j in 0..r {
            sources.push(-&gb.level_series(&residual(&gamma, j)?, level));
        }
        let mut exps: BTreeSet<QExp> = BTreeSet::new();
        for k in &sources {
            exps.extend(k.q_support());
        }
        let mut entries: Vec<Vec<QSeries>> = vec![vec![QSeries::zero(r, ctx.order); n]; n];
        for beta in &exps {
            let order = total_degree(beta);
            let mut chosen: Option<(usize, Vec<Vec<CoeffScalar>>)> = None;
            for (j, k) in sources.iter().enumerate() {
                let coeffs: Vec<Vec<CoeffScalar>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|l| k.get(i, l).sym_free_part().coeff(beta))
                            .collect()
                    })
                    .collect();
                if beta[j] == 0 {
                    // this coordinate cannot integrate q^β: the source
                    // term must already be absent
                    if let Some((i, l)) = first_nonzero(&coeffs) {
                        return Err(Error::Obstruction {
                            order,
                            detail: format!(
                                "level {level}: coordinate {j} has a source term at q^{beta:?} \
                                 it cannot integrate, entry ({i}, {l})"
                            ),
                        });
                    }
                    continue;
                }
                let inv_j = CoeffScalar::from_ratio(1, beta[j] as i64);
                let candidate: Vec<Vec<CoeffScalar>> = coeffs
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|c| &c.mul_tau_pow(-1) * &inv_j)
                            .collect()
                    })
                    .collect();
                match &chosen {
                    None => chosen = Some((j, candidate)),
                    Some((j0, prev)) => {
                        if *prev != candidate {
                            return Err(Error::Obstruction {
                                order,
                                detail: format!(
                                    "level {level}: coordinates {j0} and {j} disagree at q^{beta:?}"
                                ),
                            });
                        }
                    }
                }
            }
            if let Some((_, cand)) = chosen {
                for i in 0..n {
                    for l in 0..n {
                        if !cand[i][l].is_zero() {
                            entries[i][l].add_term(beta, &cand[i][l]);
                        }
                    }
                }
            }
        }
        let mut part = MatrixSeries::zeros(&ctx, n, n);
        for i in 0..n {
            for l in 0..n {
                if !entries[i][l].is_zero() {
                    part.set(i, l, LogSeries::from_q(&ctx, entries[i][l].clone()));
                }
            }
        }
        gamma = &gamma + &part;
    }

    // the assembled gauge function must satisfy the full equation
    for j in 0..r {
        if let Some((order, i, l)) = residual(&gamma, j)?.first_nonzero_q_order() {
            return Err(Error::Obstruction {
                order,
                detail: format!(
                    "gauge equation residual for coordinate {j} at q-order {order}, entry ({i}, {l})"
                ),
            });
        }
    }
    Ok(gamma)
}

fn first_nonzero(m: &[Vec<CoeffScalar>]) -> Option<(usize, usize)> {
    for (i, row) in m.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            if !c.is_zero() {
                return Some((i, l));
            }
        }
    }
    None
}
