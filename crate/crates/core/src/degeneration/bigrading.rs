//! Block decomposition of the endomorphism algebra.
//!
//! A direct-sum bigrading `V = ⊕ I^{p,q}` splits `𝔤 = End(V)` into pieces
//! `𝔤^{r,s} = {E : E(I^{p,q}) ⊆ I^{p+r,q+s}}`.  Everything downstream
//! lives in two distinguished subalgebras: the strictly-lowering part
//! `𝔤₋ = ⊕_{r<0} 𝔤^{r,s}` (where gauge functions take their values) and
//! its first layer `𝔭₋₁ = ⊕_s 𝔤^{−1,s}` (where a gauge function is
//! determined by its projection).
//!
//! The decomposition is stored as a change of basis to a bigrading-adapted
//! frame plus the type of each frame vector; projections are entry masks
//! in that frame, so they are exact and cost one conjugation each way.

use crate::error::Error;
use crate::hodge::{deligne_bigrading, weight_filtration, Bigrading, Mhs};
use crate::linfilt::{DecFiltration, ExactMat, IncFiltration, Subspace};
use crate::qseries::{LogSeries, MatrixSeries};
use crate::report::Report;

/// The bigrading of `End(V)` induced by a bigrading of `V`.
#[derive(Clone)]
pub struct GBigrading {
    ambient: usize,
    /// Columns: an adapted basis of `V`, grouped by bigrading piece in
    /// lexicographic `(p, q)` order.
    s: ExactMat,
    sinv: ExactMat,
    /// The `(p, q)` type of each adapted basis column.
    types: Vec<(i64, i64)>,
}

/// Decompose the endomorphism algebra along a direct-sum bigrading.
pub fn g_bigrading(i: &Bigrading) -> Result<GBigrading, Error> {
    if !i.is_direct_spanning() {
        return Err(Error::InvalidHodge(format!(
            "bigrading pieces span dimension {} of {} and cannot grade the endomorphisms",
            i.total_dim(),
            i.ambient()
        )));
    }
    let ambient = i.ambient();
    let mut s = ExactMat::zeros(ambient, 0);
    let mut types = Vec::with_capacity(ambient);
    for (&(p, q), piece) in i.iter() {
        s = s.hcat(piece.basis());
        types.extend(std::iter::repeat((p, q)).take(piece.dim()));
    }
    let sinv = s.inverse()?;
    Ok(GBigrading {
        ambient,
        s,
        sinv,
        types,
    })
}

impl GBigrading {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The `(p, q)` type of each adapted basis vector, in column order.
    pub fn types(&self) -> &[(i64, i64)] {
        &self.types
    }

    /// Distinct `(r, s)` with `𝔤^{r,s} ≠ 0`, sorted.
    pub fn support(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::new();
        for &(pi, qi) in &self.types {
            for &(pj, qj) in &self.types {
                out.push((pi - pj, qi - qj));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The most negative first index `r` with `𝔤^{r,s} ≠ 0`.
    pub fn min_level(&self) -> i64 {
        self.support().iter().map(|&(r, _)| r).min().unwrap_or(0)
    }

    pub fn dim_component(&self, r: i64, s: i64) -> usize {
        let mut count = 0;
        for &(pi, qi) in &self.types {
            for &(pj, qj) in &self.types {
                if (pi - pj, qi - qj) == (r, s) {
                    count += 1;
                }
            }
        }
        count
    }

    /// A basis of `𝔤^{r,s}`: one matrix per adapted elementary block.
    pub fn component_basis(&self, r: i64, s: i64) -> Vec<ExactMat> {
        let n = self.ambient;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (pi, qi) = self.types[i];
                let (pj, qj) = self.types[j];
                if (pi - pj, qi - qj) == (r, s) {
                    let mut e = ExactMat::zeros(n, n);
                    e.set(i, j, crate::linfilt::ExactScalar::one());
                    out.push(&(&self.s * &e) * &self.sinv);
                }
            }
        }
        out
    }

    /// Project a matrix onto the sum of the blocks selected by `keep`.
    pub fn project(&self, e: &ExactMat, mut keep: impl FnMut(i64, i64) -> bool) -> ExactMat {
        let mut c = &(&self.sinv * e) * &self.s;
        for i in 0..self.ambient {
            for j in 0..self.ambient {
                let (pi, qi) = self.types[i];
                let (pj, qj) = self.types[j];
                if !keep(pi - pj, qi - qj) {
                    c.set(i, j, crate::linfilt::ExactScalar::zero());
                }
            }
        }
        &(&self.s * &c) * &self.sinv
    }

    /// The `𝔤^{r,s}` component of a matrix.
    pub fn component(&self, e: &ExactMat, r: i64, s: i64) -> ExactMat {
        self.project(e, |a, b| (a, b) == (r, s))
    }

    /// Project a matrix series blockwise; the mask applies to every series
    /// coefficient at once.
    pub fn project_series(
        &self,
        m: &MatrixSeries,
        mut keep: impl FnMut(i64, i64) -> bool,
    ) -> MatrixSeries {
        let ctx = m.ctx().clone();
        let s = MatrixSeries::from_exact(&ctx, &self.s);
        let sinv = MatrixSeries::from_exact(&ctx, &self.sinv);
        let mut c = &(&sinv * m) * &s;
        for i in 0..self.ambient {
            for j in 0..self.ambient {
                let (pi, qi) = self.types[i];
                let (pj, qj) = self.types[j];
                if !keep(pi - pj, qi - qj) {
                    c.set(i, j, LogSeries::zero(&ctx));
                }
            }
        }
        &(&s * &c) * &sinv
    }

    /// The part of a series in `𝔤₋` (all blocks with `r < 0`).
    pub fn neg_series(&self, m: &MatrixSeries) -> MatrixSeries {
        self.project_series(m, |r, _| r < 0)
    }

    /// The `𝔭₋₁` part of a series (all blocks with `r = −1`).
    pub fn minus1_series(&self, m: &MatrixSeries) -> MatrixSeries {
        self.project_series(m, |r, _| r == -1)
    }

    /// The part of a series at first index `r` exactly.
    pub fn level_series(&self, m: &MatrixSeries, level: i64) -> MatrixSeries {
        self.project_series(m, |r, _| r == level)
    }

    /// Does the series take values in `𝔤₋`?
    pub fn is_neg_series(&self, m: &MatrixSeries) -> bool {
        self.project_series(m, |r, _| r >= 0).is_zero()
    }

    /// Partial-sum subspace `⊕_{a≤p} I^{a,b}` of the underlying bigrading.
    fn psi_at(&self, p: i64) -> Subspace {
        let cols: Vec<usize> = (0..self.ambient)
            .filter(|&i| self.types[i].0 <= p)
            .collect();
        Subspace::span(self.ambient, &self.s.select_cols(&cols))
    }

    /// Structural verification: the blocks really decompose `End(V)`,
    /// respect brackets, and the negative part both preserves the
    /// partial-sum filtration and kills its graded pieces.
    pub fn verify(&self) -> Report {
        let n = self.ambient;
        let mut report = Report::new();

        // decomposition: component dimensions fill n² and a generic probe
        // is the sum of its components
        let support = self.support();
        let total: usize = support.iter().map(|&(r, s)| self.dim_component(r, s)).sum();
        let probe = ExactMat::from_fn(n, n, |i, j| {
            crate::linfilt::ExactScalar::from_int((i * n + j + 1) as i64)
        });
        let mut acc = ExactMat::zeros(n, n);
        for &(r, s) in &support {
            acc = &acc + &self.component(&probe, r, s);
        }
        report.check(
            "decomposition",
            total == n * n && acc == probe,
            format!("components span dimension {total} of {}", n * n),
        );

        // bracket grading on summed block probes
        let mut bracket_ok = true;
        let mut bracket_detail = String::from("all bracket products stay in their block");
        'outer: for &(r1, s1) in &support {
            let e1 = self.component(&probe, r1, s1);
            for &(r2, s2) in &support {
                let e2 = self.component(&probe, r2, s2);
                let c = e1.commutator(&e2);
                if self.component(&c, r1 + r2, s1 + s2) != c {
                    bracket_ok = false;
                    bracket_detail =
                        format!("bracket of blocks ({r1}, {s1}) and ({r2}, {s2}) escapes");
                    break 'outer;
                }
            }
        }
        report.check("bracket-grading", bracket_ok, bracket_detail);

        // the negative part preserves the partial-sum filtration and acts
        // trivially on its graded pieces
        let p_levels: Vec<i64> = {
            let mut ps: Vec<i64> = self.types.iter().map(|&(p, _)| p).collect();
            ps.sort_unstable();
            ps.dedup();
            ps
        };
        let mut preserves = true;
        let mut kills = true;
        for &(r, s) in support.iter().filter(|&&(r, _)| r < 0) {
            for e in self.component_basis(r, s) {
                for &p in &p_levels {
                    let image = self.psi_at(p).apply(&e);
                    preserves &= self.psi_at(p).contains(&image);
                    kills &= self.psi_at(p - 1).contains(&image);
                }
            }
        }
        report.check(
            "psi-stability",
            preserves,
            "lowering blocks map each partial sum into itself",
        );
        report.check(
            "graded-triviality",
            kills,
            "lowering blocks map each partial sum into the previous one",
        );
        report
    }
}

/// The filtration pair at a degeneration: the monodromy weight filtration
/// of `Σ_j N_j` centered at the weight, paired with the limit Hodge
/// filtration, split into its canonical bigrading.
pub fn limit_bigrading(
    weight: u32,
    f_inf: &DecFiltration,
    ns: &[ExactMat],
) -> Result<(IncFiltration, Bigrading), Error> {
    if ns.is_empty() {
        return Err(Error::Precondition(
            "at least one monodromy logarithm is required".into(),
        ));
    }
    let n = f_inf.ambient();
    let mut sum = ExactMat::zeros(n, n);
    for nj in ns {
        if !nj.is_square() || nj.column(0).len() != n {
            return Err(Error::ShapeMismatch(format!(
                "monodromy logarithm is not {n}×{n}"
            )));
        }
        sum = &sum + nj;
    }
    let w = weight_filtration(&sum, weight as i64)?;
    let mhs = Mhs::new(f_inf.clone(), w.clone())?;
    let i = deligne_bigrading(&mhs)?;
    Ok((w, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linfilt::ExactScalar;

    /// Hodge–Tate bigrading with one line in each of the types
    /// (3,3), (2,2), (1,1), (0,0) — the standard-basis version of the
    /// quintic degeneration.
    fn hodge_tate_lines() -> Bigrading {
        let mut i = Bigrading::new(4);
        for (idx, p) in [(0usize, 3i64), (1, 2), (2, 1), (3, 0)] {
            let mut col = [0i64; 4];
            col[idx] = 1;
            i.insert(p, p, Subspace::from_int_cols(4, &[&col]));
        }
        i
    }

    #[test]
    fn hodge_tate_blocks_are_triangles() {
        let gb = g_bigrading(&hodge_tate_lines()).unwrap();
        assert_eq!(gb.dim_component(0, 0), 4);
        assert_eq!(gb.dim_component(-1, -1), 3);
        assert_eq!(gb.dim_component(-3, -3), 1);
        assert_eq!(gb.dim_component(-1, 0), 0);
        // the negative part of a full probe is its strictly lower triangle
        // (adapted order descends in p, which here is the standard order)
        let probe = ExactMat::from_fn(4, 4, |i, j| ExactScalar::from_int((4 * i + j + 1) as i64));
        let neg = gb.project(&probe, |r, _| r < 0);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i > j {
                    probe.get(i, j).clone()
                } else {
                    ExactScalar::zero()
                };
                assert_eq!(*neg.get(i, j), expect, "entry ({i}, {j})");
            }
        }
        assert!(gb.verify().pass(), "{}", gb.verify().to_text());
    }

    #[test]
    fn one_dimensional_space_has_no_lowering_part() {
        let mut i = Bigrading::new(1);
        i.insert(0, 0, Subspace::full(1));
        let gb = g_bigrading(&i).unwrap();
        assert_eq!(gb.min_level(), 0);
        let probe = ExactMat::from_int_rows(&[&[7]]);
        assert!(gb.project(&probe, |r, _| r < 0).is_zero());
    }

    #[test]
    fn block_dimensions_count_products() {
        // pieces of dimensions 2, 1, 1 at types (2,1), (1,2), (0,0)
        let mut i = Bigrading::new(4);
        i.insert(2, 1, Subspace::from_int_cols(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
        i.insert(1, 2, Subspace::from_int_cols(4, &[&[0, 0, 1, 0]]));
        i.insert(0, 0, Subspace::from_int_cols(4, &[&[0, 0, 0, 1]]));
        let gb = g_bigrading(&i).unwrap();
        let total: usize = gb
            .support()
            .iter()
            .map(|&(r, s)| gb.dim_component(r, s))
            .sum();
        assert_eq!(total, 16);
        // cross-block dimensions are products of the piece dimensions
        assert_eq!(gb.dim_component(1, -1), 2); // (2,1) ← (1,2)
        assert_eq!(gb.dim_component(-1, 1), 2); // (1,2) ← (2,1)
        assert_eq!(gb.dim_component(2, 1), 2); // (2,1) ← (0,0)
        assert_eq!(gb.dim_component(0, 0), 6); // two 1-dim blocks + 2×2
        assert_eq!(gb.component_basis(1, -1).len(), 2);
        assert!(gb.verify().pass());
    }

    #[test]
    fn incomplete_bigrading_is_rejected() {
        let mut i = Bigrading::new(3);
        i.insert(1, 1, Subspace::from_int_cols(3, &[&[1, 0, 0]]));
        assert!(matches!(g_bigrading(&i), Err(Error::InvalidHodge(_))));
    }
}
