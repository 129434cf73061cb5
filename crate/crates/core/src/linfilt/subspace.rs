//! Subspaces of a fixed coordinate space, in canonical form.
//!
//! A subspace is stored by the unique basis whose transpose is in reduced
//! row echelon form (reduced column echelon).  Two `Subspace` values are
//! byte-equal exactly when they describe the same subspace, so `==` answers
//! the mathematical question and sets/maps of subspaces behave sensibly.

use super::matrix::ExactMat;
use super::scalar::ExactScalar;
use std::fmt;

/// A linear subspace of ℚ(i)^ambient with canonical echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// `ambient × dim`, transpose in reduced row echelon form.
    basis: ExactMat,
}

impl Subspace {
    /// The zero subspace of ℚ(i)^ambient.
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMat::zeros(ambient, 0),
        }
    }

    /// The whole space ℚ(i)^ambient.
    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: ExactMat::identity(ambient),
        }
    }

    /// Span of the columns of `vectors` (need not be independent).
    pub fn span(ambient: usize, vectors: &ExactMat) -> Self {
        assert_eq!(vectors.rows, ambient, "span: ambient mismatch");
        let (r, pivots) = vectors.transpose().rref();
        let basis = ExactMat::from_fn(ambient, pivots.len(), |i, j| r.get(j, i).clone());
        Subspace { ambient, basis }
    }

    /// Span of a single vector.
    pub fn line(v: &[ExactScalar]) -> Self {
        Subspace::span(v.len(), &ExactMat::col_vec(v))
    }

    /// Span of integer column vectors (test convenience).
    pub fn from_int_cols(ambient: usize, cols: &[&[i64]]) -> Self {
        let m = ExactMat::from_int_rows(cols).transpose();
        Subspace::span(ambient, &m)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical basis, columns of an `ambient × dim` matrix.
    pub fn basis(&self) -> &ExactMat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<ExactScalar>> {
        self.basis.columns()
    }

    pub fn contains_vec(&self, v: &[ExactScalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        self.basis.solve(&ExactMat::col_vec(v)).is_ok()
    }

    /// Coordinates of `v` in the canonical basis; `None` when `v` is outside.
    pub fn coords(&self, v: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
        self.basis
            .solve(&ExactMat::col_vec(v))
            .ok()
            .map(|x| x.column(0))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        self.basis.hcat(&other.basis).rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Subspace::span(self.ambient, &self.basis.hcat(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        // Solutions of A·x = B·y span the intersection via A·x.
        let k = self.basis.hcat(&other.basis.scale(&-ExactScalar::one())).kernel();
        let x_part = ExactMat::from_fn(self.dim(), k.cols, |i, j| k.get(i, j).clone());
        Subspace::span(self.ambient, &(&self.basis * &x_part))
    }

    /// Entrywise complex conjugate of the subspace.
    pub fn conj(&self) -> Subspace {
        Subspace::span(self.ambient, &self.basis.conj())
    }

    /// Image under a linear map (`m.cols` must equal the ambient).
    pub fn apply(&self, m: &ExactMat) -> Subspace {
        assert_eq!(m.cols, self.ambient, "apply: ambient mismatch");
        Subspace::span(m.rows, &(m * &self.basis))
    }

    /// Full preimage `{v : m·v ∈ self}` (`m.rows` must equal the ambient).
    pub fn preimage(&self, m: &ExactMat) -> Subspace {
        assert_eq!(m.rows, self.ambient, "preimage: ambient mismatch");
        // self = ker(Wᵀ) for W a kernel basis of basisᵀ, so the preimage
        // is ker(Wᵀ·m).
        let w = self.basis.transpose().kernel();
        let constraints = &w.transpose() * m;
        Subspace::span(m.cols, &constraints.kernel())
    }

    /// Columns of `other`'s canonical basis that extend `self` to `other`.
    ///
    /// Requires `self ⊆ other`; the result has `other.dim() − self.dim()`
    /// columns and is deterministic.
    pub fn extension_from(&self, other: &Subspace) -> ExactMat {
        assert!(other.contains(self), "extension_from: not nested");
        let mut chosen: Vec<usize> = Vec::new();
        let mut current = self.basis.clone();
        let mut rank = self.dim();
        for j in 0..other.dim() {
            let cand = current.hcat(&other.basis.select_cols(&[j]));
            if cand.rank() > rank {
                rank += 1;
                current = cand;
                chosen.push(j);
            }
        }
        other.basis.select_cols(&chosen)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}; basis {:?})",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

/// A quotient `total/sub` of nested subspaces, with a fixed lift basis.
///
/// The lift basis consists of columns of `total`'s canonical basis, chosen
/// greedily, so the same pair always yields the same coordinates.
#[derive(Clone)]
pub struct Quotient {
    pub sub: Subspace,
    pub total: Subspace,
    lift: ExactMat,
}

impl Quotient {
    pub fn new(sub: Subspace, total: Subspace) -> Self {
        assert!(total.contains(&sub), "Quotient: sub ⊄ total");
        let lift = sub.extension_from(&total);
        Quotient { sub, total, lift }
    }

    pub fn dim(&self) -> usize {
        self.lift.cols
    }

    /// Lift matrix: `ambient × dim`, columns represent the quotient basis.
    pub fn lift(&self) -> &ExactMat {
        &self.lift
    }

    /// Lift quotient coordinates to an ambient vector.
    pub fn lift_vec(&self, coords: &[ExactScalar]) -> Vec<ExactScalar> {
        (&self.lift * &ExactMat::col_vec(coords)).column(0)
    }

    /// Quotient coordinates of `v + sub` (requires `v ∈ total`).
    pub fn project_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        let rhs = ExactMat::col_vec(v);
        let a = self.lift.hcat(self.sub.basis());
        let x = a.solve(&rhs).expect("project_vec: vector outside total");
        (0..self.dim()).map(|i| x.get(i, 0).clone()).collect()
    }

    /// Matrix of the endomorphism induced by `m` (must preserve the pair).
    pub fn induced(&self, m: &ExactMat) -> ExactMat {
        let d = self.dim();
        let mut out = ExactMat::zeros(d, d);
        for j in 0..d {
            let img = (m * &self.lift.select_cols(&[j])).column(0);
            let coords = self.project_vec(&img);
            for (i, c) in coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linfilt::scalar::rat;

    #[test]
    fn canonical_basis_is_generating_set_independent() {
        let a = Subspace::from_int_cols(3, &[&[1, 1, 0], &[0, 1, 1]]);
        let b = Subspace::from_int_cols(3, &[&[1, 2, 1], &[2, 3, 1], &[1, 0, -1]]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn dimension_formula() {
        let a = Subspace::from_int_cols(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1]]);
        let b = Subspace::from_int_cols(4, &[&[0, 1, 0, 0], &[0, 0, 1, -1], &[1, 1, 1, 1]]);
        let s = a.sum(&b);
        let i = a.intersect(&b);
        assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
        assert!(s.contains(&a) && s.contains(&b));
        assert!(a.contains(&i) && b.contains(&i));
    }

    #[test]
    fn intersection_oracle() {
        // span{e1, e2} ∩ span{e2, e3} = span{e2}
        let a = Subspace::from_int_cols(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = Subspace::from_int_cols(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b), Subspace::from_int_cols(3, &[&[0, 1, 0]]));
    }

    #[test]
    fn apply_and_preimage() {
        // N maps e1↦0, e2↦e1, e3↦e2 (nilpotent shift)
        let n = ExactMat::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let s = Subspace::from_int_cols(3, &[&[1, 0, 0]]);
        let pre = s.preimage(&n);
        // preimage of span{e1} is span{e1, e2}
        assert_eq!(pre, Subspace::from_int_cols(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(s.contains(&pre.apply(&n)));
        let img = Subspace::full(3).apply(&n);
        assert_eq!(img.dim(), 2);
    }

    #[test]
    fn conjugate_subspace() {
        let i = ExactScalar::i();
        let v = vec![ExactScalar::one(), i.clone()];
        let s = Subspace::line(&v);
        let sc = s.conj();
        assert!(sc.contains_vec(&[ExactScalar::one(), -&i]));
        assert_ne!(s, sc);
        assert_eq!(s.conj().conj(), s);
    }

    #[test]
    fn quotient_projection_and_induced_map() {
        // V = ℚ³, sub = span{e1}, total = V; N the shift above.
        let n = ExactMat::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let q = Quotient::new(Subspace::from_int_cols(3, &[&[1, 0, 0]]), Subspace::full(3));
        assert_eq!(q.dim(), 2);
        let ind = q.induced(&n);
        // On V/span{e1}: ē2 ↦ 0, ē3 ↦ ē2 — induced map is nilpotent of rank 1.
        assert_eq!(ind.rank(), 1);
        assert!(ind.pow(2).is_zero());
        // project ∘ lift = id
        let coords = vec![ExactScalar::from_rat(rat(2, 3)), ExactScalar::from_int(5)];
        let lifted = q.lift_vec(&coords);
        assert_eq!(q.project_vec(&lifted), coords);
    }
}
