//! Reading module data and the deformation itself off a normalized germ.
//!
//! For a germ whose limit bigrading is diagonal and real-split, a real
//! generator `e` of the one-dimensional top piece determines a frame: `e`,
//! its monodromy images `N_j·e`, and bases of the lower diagonal pieces.
//! In that frame the limit data becomes a graded Frobenius module — the
//! pairing read backwards through the grading, the logarithms as the
//! classical degree-2 action — and the level `−1` part of the gauge
//! function stores the second coordinate derivatives of a potential, so
//! the deformation can be recovered term by term and checked by running
//! the forward construction on the result.

use std::collections::BTreeMap;

use crate::amodel::VHSGerm;
use crate::degeneration::gamma_from_gamma_minus1;
use crate::error::Error;
use crate::frobmod::{
    potential_logseries, validate_quantum_potential, FrobeniusModule, GradedSpace, Potential,
};
use crate::hodge::{is_hodge_tate, is_split_real};
use crate::linfilt::{ExactMat, ExactScalar, Subspace};
use crate::qseries::{CoeffScalar, LogSeries, MatrixSeries, QSeries};

/// The graded module read off a germ, together with the frame that
/// identifies the germ's ambient space with the module's coordinates.
#[derive(Clone, Debug)]
pub struct ExtractedModule {
    module: FrobeniusModule,
    frame: ExactMat,
    frame_inv: ExactMat,
}

impl ExtractedModule {
    pub fn module(&self) -> &FrobeniusModule {
        &self.module
    }

    /// Columns are the module basis vectors in germ coordinates: the
    /// generator, its monodromy images, then the lower diagonal pieces.
    pub fn frame(&self) -> &ExactMat {
        &self.frame
    }

    pub fn frame_inv(&self) -> &ExactMat {
        &self.frame_inv
    }

    pub fn into_module(self) -> FrobeniusModule {
        self.module
    }
}

/// Read the graded module off `g` using the real generator `e` of the top
/// piece of the limit bigrading.
///
/// The graded pieces are `V_{2p} = I^{k−p,k−p}`, the pairing is
/// `B(v, w) = (−1)^{k+deg(v)/2}·Q(v, w)`, and the classical action of the
/// degree-2 basis vector `T_j = N_j·e` is `N_j` itself.  The unit and
/// framing vectors are forced by `e`; the remaining pieces keep the
/// echelon bases of the diagonal pieces when those already pair in the
/// normalized 0/1 form the module type requires, and otherwise pass to
/// the `B`-dual bases of their partners.  Requires a diagonal,
/// real-split limit bigrading, a one-dimensional top piece spanned by
/// `e`, and framing pieces spanned by the monodromy images; the resulting
/// data is validated as a graded Frobenius module.
pub fn extract_module(g: &VHSGerm, e: &[ExactScalar]) -> Result<ExtractedModule, Error> {
    let n = g.dim();
    let r = g.nvars();
    let k = g.weight();
    if e.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "generator has {} entries, the germ has dimension {n}",
            e.len()
        )));
    }
    if e.iter().all(|c| c.is_zero()) {
        return Err(Error::Precondition("the generator must be nonzero".into()));
    }
    if e.iter().any(|c| !c.is_real()) {
        return Err(Error::Precondition("the generator must be real".into()));
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
    let ki = k as i64;
    let top = g.bigrading().piece(ki, ki);
    if top.dim() != 1 {
        return Err(Error::Precondition(format!(
            "the top piece has dimension {}, expected 1",
            top.dim()
        )));
    }
    if !top.contains_vec(e) {
        return Err(Error::Precondition(
            "the generator does not lie in the top piece".into(),
        ));
    }
    let framing = g.bigrading().piece(ki - 1, ki - 1);
    if framing.dim() != r {
        return Err(Error::Precondition(format!(
            "the piece below the top has dimension {}, expected one per logarithm ({r})",
            framing.dim()
        )));
    }

    // Initial bases, one block per degree: the unit and framing vectors
    // are forced, the rest start from the echelon bases of the pieces.
    let ku = k as usize;
    let mut blocks: Vec<Vec<Vec<ExactScalar>>> = Vec::with_capacity(ku + 1);
    blocks.push(vec![e.to_vec()]);
    let mut images = ExactMat::zeros(n, r);
    let mut framing_cols = Vec::with_capacity(r);
    for (j, nj) in g.ns().iter().enumerate() {
        let img = (nj * &ExactMat::col_vec(e)).column(0);
        if !framing.contains_vec(&img) {
            return Err(Error::Precondition(format!(
                "N_{j} does not carry the generator into the piece below the top"
            )));
        }
        for (i, c) in img.iter().enumerate() {
            images.set(i, j, c.clone());
        }
        framing_cols.push(img);
    }
    if k >= 1 {
        blocks.push(framing_cols);
    }
    if Subspace::span(n, &images).dim() != r {
        return Err(Error::Precondition(
            "the monodromy images of the generator do not span the piece below the top".into(),
        ));
    }
    for p in 2..=ki {
        blocks.push(g.bigrading().piece(ki - p, ki - p).basis().columns());
    }
    let dims: Vec<usize> = blocks.iter().map(|block| block.len()).collect();
    if dims.iter().sum::<usize>() != n {
        return Err(Error::Precondition(format!(
            "the diagonal pieces span dimension {}, the germ has dimension {n}",
            dims.iter().sum::<usize>()
        )));
    }

    // Duality normalization: rebase each free block to the B-dual of its
    // partner; blocks forced by the framing can only be checked.
    for p in 0..=ku / 2 {
        let q = ku - p;
        if p == q {
            normalize_middle_block(&mut blocks[p], p, k, g.pairing())?;
            continue;
        }
        if dims[p] != dims[q] {
            return Err(Error::Precondition(format!(
                "dual diagonal pieces have dimensions {} and {}",
                dims[p], dims[q]
            )));
        }
        let gram = cross_gram(&blocks[p], &blocks[q], p, k, g.pairing());
        if q >= 2 {
            if !is_unit_permutation(&gram) {
                let inv = gram.inverse().map_err(|_| {
                    Error::Precondition(format!(
                        "the pairing degenerates between the degree-{} and degree-{} pieces",
                        2 * p,
                        2 * q
                    ))
                })?;
                blocks[q] = rebase(&blocks[q], &inv);
            }
        } else if gram != ExactMat::identity(dims[p]) {
            return Err(Error::Precondition(
                "the pairing of the generator against its framing is not normalized".into(),
            ));
        }
    }

    let mut cols: Vec<Vec<ExactScalar>> = Vec::with_capacity(n);
    for block in &blocks {
        for col in block {
            cols.push(col.clone());
        }
    }
    let mut label_deg: Vec<u32> = Vec::with_capacity(n);
    for (p, &d) in dims.iter().enumerate() {
        label_deg.extend(std::iter::repeat(2 * p as u32).take(d));
    }

    let frame = ExactMat::from_cols(cols);
    let frame_inv = frame
        .inverse()
        .map_err(|_| Error::Precondition("the extracted frame is singular".into()))?;
    let gram = &(&frame.transpose() * g.pairing()) * &frame;
    let b = ExactMat::from_fn(n, n, |a, c| {
        let v = gram.get(a, c).clone();
        if (k as usize + label_deg[a] as usize / 2) % 2 == 1 {
            -&v
        } else {
            v
        }
    });
    let action: Vec<ExactMat> = g
        .ns()
        .iter()
        .map(|nj| &(&frame_inv * nj) * &frame)
        .collect();
    let module = FrobeniusModule::new(k, &dims, b, action, true)?;
    Ok(ExtractedModule {
        module,
        frame,
        frame_inv,
    })
}

/// The signed pairing matrix `B(x_a, y_b)` between two block bases, with
/// the row sign of the degree-`2p` block.
fn cross_gram(
    xs: &[Vec<ExactScalar>],
    ys: &[Vec<ExactScalar>],
    p: usize,
    k: u32,
    q: &ExactMat,
) -> ExactMat {
    let x = ExactMat::from_cols(xs.to_vec());
    let y = ExactMat::from_cols(ys.to_vec());
    let gram = &(&x.transpose() * q) * &y;
    if (k as usize + p) % 2 == 1 {
        gram.scale(&-&ExactScalar::one())
    } else {
        gram
    }
}

/// Replace a block basis by its image under a change-of-basis matrix.
fn rebase(cols: &[Vec<ExactScalar>], change: &ExactMat) -> Vec<Vec<ExactScalar>> {
    (&ExactMat::from_cols(cols.to_vec()) * change).columns()
}

/// Whether a square matrix has exactly one entry per row and column, all
/// of them one — the shape a pairing block must have in the end.
fn is_unit_permutation(m: &ExactMat) -> bool {
    let d = m.rows;
    let mut seen = vec![false; d];
    for a in 0..d {
        let mut hit = usize::MAX;
        for b in 0..d {
            if m.get(a, b).is_zero() {
                continue;
            }
            if !m.get(a, b).is_one() || hit != usize::MAX {
                return false;
            }
            hit = b;
        }
        if hit == usize::MAX || seen[hit] {
            return false;
        }
        seen[hit] = true;
    }
    true
}

/// Bring the self-paired middle block (even weight) to the normalized 0/1
/// form.  Swapped pairs are rescaled; anything requiring a square root of
/// a scalar is refused, since none exists in the coefficient field in
/// general.  For weight ≤ 2 the middle basis is forced by the framing and
/// can only be checked.
fn normalize_middle_block(
    cols: &mut Vec<Vec<ExactScalar>>,
    p: usize,
    k: u32,
    q: &ExactMat,
) -> Result<(), Error> {
    let m = cross_gram(cols, cols, p, k, q);
    let d = cols.len();
    let mut partner = vec![usize::MAX; d];
    for a in 0..d {
        for b in 0..d {
            if m.get(a, b).is_zero() {
                continue;
            }
            if partner[a] != usize::MAX {
                return Err(Error::Unsupported(
                    "cannot normalize the middle pairing block over the exact scalars".into(),
                ));
            }
            partner[a] = b;
        }
        if partner[a] == usize::MAX {
            return Err(Error::Precondition(
                "the pairing degenerates on the middle graded piece".into(),
            ));
        }
    }
    for a in 0..d {
        if partner[partner[a]] != a {
            return Err(Error::Unsupported(
                "cannot normalize the middle pairing block over the exact scalars".into(),
            ));
        }
    }
    let may_rebase = p >= 2;
    for a in 0..d {
        let b = partner[a];
        let v = m.get(a, b).clone();
        if v.is_one() {
            continue;
        }
        if a == b || !may_rebase {
            return Err(Error::Unsupported(
                "cannot normalize the middle pairing block over the exact scalars".into(),
            ));
        }
        if a < b {
            let inv = v.inv().expect("pairing entry is nonzero");
            cols[b] = cols[b].iter().map(|c| c * &inv).collect();
        }
    }
    Ok(())
}

/// The deformed product of the `j`-th coordinate direction with a constant
/// vector `t`, read from the germ: `(N_j + τθ_j(Γ₋₁))·t` componentwise.
pub fn quantum_product_from_x(
    g: &VHSGerm,
    j: usize,
    t: &[ExactScalar],
) -> Result<Vec<QSeries>, Error> {
    let n = g.dim();
    if t.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "vector has {} entries, the germ has dimension {n}",
            t.len()
        )));
    }
    if j >= g.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "coordinate index {j} out of range for {} variables",
            g.nvars()
        )));
    }
    let gm1 = g.endo_bigrading().minus1_series(g.gamma());
    let ctx = gm1.ctx().clone();
    let l = &MatrixSeries::from_exact(&ctx, &g.ns()[j]) + &gm1.theta_tau(j);
    let v = &l * &MatrixSeries::from_exact(&ctx, &ExactMat::col_vec(t));
    Ok((0..n).map(|i| v.get(i, 0).sym_free_part()).collect())
}

/// All deformed action operators `N_j + τθ_j(Γ₋₁)` of the germ, conjugated
/// into the module coordinates of an extracted frame.
pub fn quantum_action_from_germ(
    g: &VHSGerm,
    ext: &ExtractedModule,
) -> Result<Vec<MatrixSeries>, Error> {
    let n = g.dim();
    if ext.frame.rows != n {
        return Err(Error::ShapeMismatch(format!(
            "frame is over dimension {}, the germ has dimension {n}",
            ext.frame.rows
        )));
    }
    let gm1 = g.endo_bigrading().minus1_series(g.gamma());
    let ctx = gm1.ctx().clone();
    let fwd = MatrixSeries::from_exact(&ctx, &ext.frame);
    let bwd = MatrixSeries::from_exact(&ctx, &ext.frame_inv);
    Ok((0..g.nvars())
        .map(|j| {
            let l = &MatrixSeries::from_exact(&ctx, &g.ns()[j]) + &gm1.theta_tau(j);
            &(&bwd * &l) * &fwd
        })
        .collect())
}

/// The level `−2` part of the horizontal gauge function determined by the
/// level `−1` part of `g`'s.  An integrability obstruction in the
/// reconstruction is propagated.
pub fn gamma_minus2(g: &VHSGerm) -> Result<MatrixSeries, Error> {
    let gm1 = g.endo_bigrading().minus1_series(g.gamma());
    let full = gamma_from_gamma_minus1(g.weight(), g.f_inf(), g.ns(), &gm1)?;
    Ok(g.endo_bigrading().level_series(&full, -2))
}

/// Recover the graded module together with the potential that produced a
/// germ in canonical coordinates.
///
/// In weight 3 the potential is the scalar behind the second logarithmic
/// derivatives stored in the level `−1` gauge term.  In higher weight the
/// quadratic part sits directly in the level `−1` entries and the linear
/// part is paired out of the level `−2` term against the unit.  The
/// candidate is verified by rebuilding the level `−1` term from it and by
/// the deformed-product axioms, so the round trip with the forward
/// construction is exact.
pub fn potential_from_germ(
    g: &VHSGerm,
    e: &[ExactScalar],
) -> Result<(FrobeniusModule, Potential), Error> {
    let ext = extract_module(g, e)?;
    let k = g.weight();
    let n = g.dim();
    let order = g.order();
    let gb = g.endo_bigrading();
    let gm1 = gb.minus1_series(g.gamma());
    let ctx = gm1.ctx().clone();

    let marked = g.bigrading().piece(1, 1);
    if !(&gm1 * &MatrixSeries::from_exact(&ctx, marked.basis())).is_zero() {
        return Err(Error::Precondition(
            "the germ is not in canonical coordinates: the level -1 gauge term \
             does not kill the marked block"
                .into(),
        ));
    }
    let rebuilt = gamma_from_gamma_minus1(k, g.f_inf(), g.ns(), &gm1)?;
    if &rebuilt != g.gamma() {
        return Err(Error::Inconsistent(
            "the gauge function is not the horizontal extension of its level -1 part".into(),
        ));
    }

    let ExtractedModule {
        module: m,
        frame,
        frame_inv,
    } = ext;
    let fwd = MatrixSeries::from_exact(&ctx, &frame);
    let bwd = MatrixSeries::from_exact(&ctx, &frame_inv);
    let gm1_mod = &(&bwd * &gm1) * &fwd;

    let candidate = if k == 3 {
        recover_weight3(m.space(), &gm1_mod, order)?
    } else {
        let gm2_mod = &(&bwd * &gb.level_series(&rebuilt, -2)) * &fwd;
        recover_parts(&m, &gm1_mod, &gm2_mod, order)?
    };

    // Rebuild the level −1 term from the candidate; any deviation means the
    // germ is not of potential type.
    let space = m.space();
    let phi = potential_logseries(&m, &candidate)?;
    let mut h = MatrixSeries::zeros(&ctx, n, n);
    for a in 0..n {
        let da = space.degree(a);
        let phi_a = phi.derive_z(a);
        for c in space.labels_of_degree(da + 2) {
            let f = phi_a.derive_z(space.delta(c)).sym_free_part();
            h.set(c, a, LogSeries::from_q(&ctx, f));
        }
    }
    if let Some((ord, i, l)) = (&h - &gm1_mod).first_nonzero_q_order() {
        return Err(Error::Inconsistent(format!(
            "no potential reproduces the level -1 gauge term: first deviation \
             at q-order {ord}, entry ({i}, {l})"
        )));
    }
    let report = validate_quantum_potential(&m, &candidate);
    if !report.pass() {
        let item = report.first_failure().expect("failing report has a failure");
        return Err(Error::Precondition(format!(
            "the recovered deformation fails validation: check `{}`",
            item.name
        )));
    }
    Ok((m, candidate))
}

/// Weight-3 recovery: the entry of `Γ₋₁` at `(δ(a_j), a_j)` for the `j`-th
/// degree-2 label equals `τ²·θ_j²(φ)`, so each monomial of `φ` is read off
/// the first variable it contains.
fn recover_weight3(
    space: &GradedSpace,
    gm1_mod: &MatrixSeries,
    order: u32,
) -> Result<Potential, Error> {
    let r = space.v2_rank();
    let v2 = space.v2_labels();
    let mut phi = QSeries::zero(r, order);
    for j in 0..r {
        let a = v2.start + j;
        let entry = gm1_mod.get(space.delta(a), a).sym_free_part();
        for (exp, c) in entry.terms() {
            let bj = i64::from(exp[j]);
            if bj == 0 {
                return Err(Error::Inconsistent(format!(
                    "entry ({}, {a}) contains q^{exp:?}, which no scalar \
                     deformation produces",
                    space.delta(a)
                )));
            }
            if exp.iter().take(j).any(|&b| b > 0) {
                continue; // already read from an earlier variable
            }
            let scale = CoeffScalar::from_scalar(ExactScalar::from_ratio(1, bj * bj));
            phi.add_term(exp, &(&c.mul_tau_pow(-2) * &scale));
        }
    }
    Potential::weight3(space, phi)
}

/// Higher-weight recovery: quadratic coefficients from the level `−1`
/// entries, linear coefficients from the level `−2` term paired against
/// the unit.
fn recover_parts(
    m: &FrobeniusModule,
    gm1_mod: &MatrixSeries,
    gm2_mod: &MatrixSeries,
    order: u32,
) -> Result<Potential, Error> {
    let space = m.space();
    let k = space.weight();
    let n = space.dim();
    let r = space.v2_rank();
    let two_k = 2 * k;
    let mut linear: BTreeMap<usize, QSeries> = BTreeMap::new();
    let mut quadratic: BTreeMap<(usize, usize), QSeries> = BTreeMap::new();
    for a in 0..n {
        let da = space.degree(a);
        if da <= 2 {
            continue;
        }
        for bl in a..n {
            let db = space.degree(bl);
            if db <= 2 || da + db + 2 != two_k {
                continue;
            }
            let f = if a == bl {
                gm1_mod
                    .get(space.delta(a), a)
                    .sym_free_part()
                    .scale(&CoeffScalar::from_ratio(1, 2))
            } else {
                gm1_mod.get(space.delta(bl), a).sym_free_part()
            };
            if !f.is_zero() {
                quadratic.insert((a, bl), f);
            }
        }
        if two_k >= 4 && da == two_k - 4 {
            let mut f = QSeries::zero(r, order);
            for c in 0..n {
                let w = m.b().get(c, 0);
                if w.is_zero() {
                    continue;
                }
                let g2 = gm2_mod.get(c, a).sym_free_part();
                if g2.is_zero() {
                    continue;
                }
                f = &f + &g2.scale(&CoeffScalar::from_scalar(w.clone()));
            }
            let f = f.scale(&CoeffScalar::from_int(-1));
            if !f.is_zero() {
                linear.insert(a, f);
            }
        }
    }
    Potential::with_parts(space, order, linear, quadratic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodel::build_vhs_germ;
    use crate::degeneration::coordinate_change;
    use crate::fixtures;
    use crate::frobmod::{quantum_action, quantum_product};
    use crate::qseries::total_degree;

    #[test]
    fn quintic_module_extraction_is_exact() {
        let m0 = fixtures::quintic_module();
        let p = fixtures::quintic_potential(6);
        let g = build_vhs_germ(&m0, &p).unwrap();
        let ext = extract_module(&g, &m0.e_vec()).unwrap();
        assert_eq!(*ext.frame(), ExactMat::identity(4));
        let m = ext.module();
        assert_eq!(m.b(), m0.b());
        assert_eq!(m.action(), m0.action());
        assert_eq!(m.space().dims(), m0.space().dims());
        assert!(m.is_real());
    }

    #[test]
    fn rescaling_the_generator_rescales_the_action() {
        let m0 = fixtures::quintic_module();
        let p = fixtures::quintic_potential(4);
        let g = build_vhs_germ(&m0, &p).unwrap();
        let e2: Vec<ExactScalar> = m0
            .e_vec()
            .iter()
            .map(|c| c * &ExactScalar::from_int(2))
            .collect();
        let ext = extract_module(&g, &e2).unwrap();
        let m = ext.module();
        // The framing vector doubles while the dual pieces halve to keep
        // the pairing normalized, so T₁∗T₁ picks up the square.
        assert_eq!(*m.a(0).get(2, 1), ExactScalar::from_int(20));
        assert_eq!(m.b(), m0.b());
        assert_eq!(m.space().dims(), m0.space().dims());
        assert_eq!(*ext.frame().get(1, 1), ExactScalar::from_int(2));
        assert_eq!(*ext.frame().get(2, 2), ExactScalar::from_ratio(1, 2));
    }

    #[test]
    fn nilpotent_orbit_extracts_the_same_module() {
        let m0 = fixtures::quintic_module();
        let quantum = build_vhs_germ(&m0, &fixtures::quintic_potential(4)).unwrap();
        let orbit = build_vhs_germ(&m0, &Potential::zero(m0.space(), 4)).unwrap();
        let from_quantum = extract_module(&quantum, &m0.e_vec()).unwrap();
        let from_orbit = extract_module(&orbit, &m0.e_vec()).unwrap();
        assert_eq!(from_quantum.module().b(), from_orbit.module().b());
        assert_eq!(from_quantum.module().action(), from_orbit.module().action());
    }

    #[test]
    fn bad_generators_are_rejected() {
        let m0 = fixtures::quintic_module();
        let g = build_vhs_germ(&m0, &fixtures::quintic_potential(4)).unwrap();
        let mut outside = vec![ExactScalar::zero(); 4];
        outside[1] = ExactScalar::one();
        assert!(matches!(
            extract_module(&g, &outside),
            Err(Error::Precondition(_))
        ));
        let mut complex = vec![ExactScalar::zero(); 4];
        complex[0] = ExactScalar::i();
        assert!(matches!(
            extract_module(&g, &complex),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            extract_module(&g, &vec![ExactScalar::zero(); 4]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn quintic_potential_round_trip_is_identity() {
        let m0 = fixtures::quintic_module();
        let p0 = fixtures::quintic_potential(6);
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let (m, p) = potential_from_germ(&g, &m0.e_vec()).unwrap();
        assert_eq!(p, p0);
        assert_eq!(m.b(), m0.b());
        assert_eq!(m.action(), m0.action());
    }

    #[test]
    fn product_fixture_linear_round_trip_is_identity() {
        let m0 = fixtures::p1_x_p3_module();
        let p0 = fixtures::p1_x_p3_potential(QSeries::var(2, 5, 0));
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let (m, p) = potential_from_germ(&g, &m0.e_vec()).unwrap();
        assert_eq!(p, p0);
        assert_eq!(m.b(), m0.b());
        assert_eq!(m.action(), m0.action());
    }

    #[test]
    fn weight5_round_trip_recovers_both_parts() {
        let m0 = fixtures::weight5_chain_module();
        let f3 = QSeries::var(1, 5, 0);
        let mut f22 = QSeries::zero(1, 5);
        f22.add_term(&[2], &CoeffScalar::from_int(3));
        let p0 = fixtures::weight5_chain_potential(f3, f22);
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let (_, p) = potential_from_germ(&g, &m0.e_vec()).unwrap();
        assert_eq!(p, p0);
    }

    #[test]
    fn weight2_round_trip_recovers_the_zero_potential() {
        let m0 = fixtures::p1_x_p1_module();
        let p0 = Potential::zero(m0.space(), 4);
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let (m, p) = potential_from_germ(&g, &m0.e_vec()).unwrap();
        assert_eq!(p, p0);
        assert_eq!(m.b(), m0.b());
    }

    #[test]
    fn non_canonical_germ_is_rejected() {
        let m0 = fixtures::quintic_module();
        let g = build_vhs_germ(&m0, &fixtures::quintic_potential(5)).unwrap();
        let unit = &QSeries::one(1, 5) + &QSeries::var(1, 5, 0);
        let moved = coordinate_change(&g, &[unit], &[ExactScalar::zero()]).unwrap();
        assert!(matches!(
            potential_from_germ(&moved, &m0.e_vec()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn level_minus2_term_of_product_fixture() {
        let m0 = fixtures::p1_x_p3_module();
        let p0 = fixtures::p1_x_p3_potential(QSeries::var(2, 5, 0));
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let gm2 = gamma_minus2(&g).unwrap();
        let ctx = g.gamma().ctx().clone();
        let q1 = QSeries::var(2, 5, 0);
        let mut expected = MatrixSeries::zeros(&ctx, 8, 8);
        for (i, l, s) in [(4, 0, 1), (5, 1, -1), (6, 2, 1), (7, 3, -1)] {
            expected.set(
                i,
                l,
                LogSeries::from_q(&ctx, q1.scale(&CoeffScalar::from_int(s))),
            );
        }
        assert_eq!(gm2, expected);
    }

    #[test]
    fn level_minus2_term_of_an_orbit_vanishes() {
        let m0 = fixtures::p1_x_p3_module();
        let orbit = build_vhs_germ(&m0, &Potential::zero(m0.space(), 4)).unwrap();
        assert!(gamma_minus2(&orbit).unwrap().is_zero());
    }

    #[test]
    fn germ_product_matches_module_product() {
        let m0 = fixtures::quintic_module();
        let p0 = fixtures::quintic_potential(6);
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let mut t1 = vec![ExactScalar::zero(); 4];
        t1[1] = ExactScalar::one();
        let from_germ = quantum_product_from_x(&g, 0, &t1).unwrap();
        let from_module = quantum_product(&m0, &p0, 1, 1).unwrap();
        assert_eq!(from_germ, from_module);
        // the τ-weighted correction on top of the classical number
        let c = from_germ[2].coeff(&[1]);
        assert_eq!(c.coeff(3), ExactScalar::one());
        assert_eq!(
            from_germ[2].constant_term().as_scalar().unwrap(),
            ExactScalar::from_int(5)
        );
    }

    #[test]
    fn germ_action_matches_module_action_and_commutes() {
        let m0 = fixtures::p1_x_p3_module();
        let p0 = fixtures::p1_x_p3_potential(QSeries::var(2, 5, 0));
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let ext = extract_module(&g, &m0.e_vec()).unwrap();
        let from_germ = quantum_action_from_germ(&g, &ext).unwrap();
        let from_module = quantum_action(&m0, &p0).unwrap();
        assert_eq!(from_germ, from_module);
        let lx = &from_germ[0];
        let ly = &from_germ[1];
        assert_eq!(lx * ly, ly * lx);
    }

    #[test]
    fn recovery_sees_every_monomial_degree() {
        let m0 = fixtures::quintic_module();
        let mut phi = QSeries::zero(1, 6);
        for d in 1u16..=6 {
            phi.add_term(&[d], &CoeffScalar::from_ratio(i64::from(d), 3));
        }
        assert!(phi.terms().all(|(e, _)| total_degree(e) >= 1));
        let p0 = Potential::weight3(m0.space(), phi).unwrap();
        let g = build_vhs_germ(&m0, &p0).unwrap();
        let (_, p) = potential_from_germ(&g, &m0.e_vec()).unwrap();
        assert_eq!(p, p0);
    }
}
