//! Increasing and decreasing filtrations by subspaces.
//!
//! A filtration is an eventually-constant map ℤ → subspaces, stored as a
//! canonical jump list.  Conventions:
//!
//! * `DecFiltration` (Hodge-type `F^p`): the value is the full ambient space
//!   below the first stored index and the last stored value above the last.
//! * `IncFiltration` (weight-type `W_j`): the value is zero below the first
//!   stored index and the last stored value above the last.
//!
//! With these conventions two filtrations are equal as maps exactly when
//! their jump lists are equal, so `==` is the mathematical comparison.

use super::matrix::ExactMat;
use super::subspace::{Quotient, Subspace};
use crate::error::Error;
use std::fmt;

fn canonicalize(
    ambient: usize,
    mut values: Vec<(i64, Subspace)>,
    implicit_head: Subspace,
    decreasing: bool,
) -> Result<Vec<(i64, Subspace)>, Error> {
    values.sort_by_key(|(p, _)| *p);
    for window in values.windows(2) {
        if window[0].0 == window[1].0 && window[0].1 != window[1].1 {
            return Err(Error::Inconsistent(format!(
                "two values at filtration index {}",
                window[0].0
            )));
        }
    }
    values.dedup_by(|a, b| a.0 == b.0);
    let mut prev = implicit_head;
    let mut jumps = Vec::new();
    for (p, v) in values {
        if v.ambient() != ambient {
            return Err(Error::AmbientMismatch(format!(
                "filtration value at {p} lives in dim {} ambient, expected {ambient}",
                v.ambient()
            )));
        }
        let nested = if decreasing {
            prev.contains(&v)
        } else {
            v.contains(&prev)
        };
        if !nested {
            return Err(Error::Inconsistent(format!(
                "filtration values are not nested at index {p}"
            )));
        }
        if v != prev {
            prev = v.clone();
            jumps.push((p, v));
        }
    }
    Ok(jumps)
}

fn value_at(jumps: &[(i64, Subspace)], p: i64, head: &Subspace) -> Subspace {
    let mut current = head;
    for (q, v) in jumps {
        if *q > p {
            break;
        }
        current = v;
    }
    current.clone()
}

/// A decreasing filtration `F^p` (full space for `p ≪ 0`).
#[derive(Clone, PartialEq, Eq)]
pub struct DecFiltration {
    ambient: usize,
    jumps: Vec<(i64, Subspace)>,
}

impl DecFiltration {
    /// Build from any list of sampled values; repeated and implied values
    /// are dropped, nesting is checked.
    pub fn from_values(ambient: usize, values: Vec<(i64, Subspace)>) -> Result<Self, Error> {
        let jumps = canonicalize(ambient, values, Subspace::full(ambient), true)?;
        Ok(DecFiltration { ambient, jumps })
    }

    /// The constant filtration `F^p = V` for all `p` (no jumps).
    pub fn constant_full(ambient: usize) -> Self {
        DecFiltration { ambient, jumps: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn at(&self, p: i64) -> Subspace {
        value_at(&self.jumps, p, &Subspace::full(self.ambient))
    }

    pub fn jumps(&self) -> &[(i64, Subspace)] {
        &self.jumps
    }

    /// Smallest stored index (first proper step), if any.
    pub fn first_jump(&self) -> Option<i64> {
        self.jumps.first().map(|(p, _)| *p)
    }

    pub fn last_jump(&self) -> Option<i64> {
        self.jumps.last().map(|(p, _)| *p)
    }

    /// True when the filtration reaches the zero subspace.
    pub fn is_separated(&self) -> bool {
        self.jumps.last().is_some_and(|(_, v)| v.is_zero())
            || (self.jumps.is_empty() && self.ambient == 0)
    }

    /// Entrywise complex conjugate `F̄`.
    pub fn conj(&self) -> Self {
        DecFiltration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, v)| (*p, v.conj())).collect(),
        }
    }

    /// Reindex: the result has value `F^{p−s}` at `p` (shift indices up by `s`).
    pub fn shift(&self, s: i64) -> Self {
        DecFiltration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, v)| (p + s, v.clone())).collect(),
        }
    }

    /// Transport along a linear map: the filtration with value `m·F^p`
    /// at `p`.  Meant for invertible `m`; a singular map still nests but
    /// loses the step dimensions.
    pub fn apply(&self, m: &ExactMat) -> Result<Self, Error> {
        let values = self
            .jumps
            .iter()
            .map(|(p, v)| (*p, v.apply(m)))
            .collect();
        DecFiltration::from_values(self.ambient, values)
    }

    /// The increasing filtration `r ↦ F^{−r}`.  Requires separatedness so
    /// the zero-head convention of the result is honest.
    pub fn dual(&self) -> IncFiltration {
        assert!(
            self.is_separated(),
            "dual of a non-separated decreasing filtration"
        );
        // r ↦ F^{−r} changes value entering r = 1−p for each jump p of F,
        // where it takes F's predecessor value at(p−1).
        let jumps: Vec<(i64, Subspace)> = self
            .jumps
            .iter()
            .rev()
            .map(|(p, _)| (1 - p, self.at(p - 1)))
            .collect();
        IncFiltration {
            ambient: self.ambient,
            jumps,
        }
    }

    /// Graded piece `F^p / F^{p+1}`.
    pub fn graded(&self, p: i64) -> Quotient {
        Quotient::new(self.at(p + 1), self.at(p))
    }

    /// True when every value is preserved by `m` (i.e. `m·F^p ⊆ F^p`).
    pub fn preserved_by(&self, m: &ExactMat) -> bool {
        self.jumps.iter().all(|(_, v)| v.contains(&v.apply(m)))
    }
}

impl fmt::Debug for DecFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self
            .jumps
            .iter()
            .map(|(p, v)| format!("F^{p}:dim {}", v.dim()))
            .collect();
        write!(f, "DecFiltration[{}]", steps.join(", "))
    }
}

/// An increasing filtration `W_j` (zero for `j ≪ 0`).
#[derive(Clone, PartialEq, Eq)]
pub struct IncFiltration {
    ambient: usize,
    jumps: Vec<(i64, Subspace)>,
}

impl IncFiltration {
    pub fn from_values(ambient: usize, values: Vec<(i64, Subspace)>) -> Result<Self, Error> {
        let jumps = canonicalize(ambient, values, Subspace::zero(ambient), false)?;
        Ok(IncFiltration { ambient, jumps })
    }

    /// The constant filtration `W_j = 0` for all `j` (no jumps).
    pub fn constant_zero(ambient: usize) -> Self {
        IncFiltration { ambient, jumps: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn at(&self, j: i64) -> Subspace {
        value_at(&self.jumps, j, &Subspace::zero(self.ambient))
    }

    pub fn jumps(&self) -> &[(i64, Subspace)] {
        &self.jumps
    }

    pub fn first_jump(&self) -> Option<i64> {
        self.jumps.first().map(|(p, _)| *p)
    }

    pub fn last_jump(&self) -> Option<i64> {
        self.jumps.last().map(|(p, _)| *p)
    }

    /// The stable value at `+∞`.
    pub fn top(&self) -> Subspace {
        self.jumps
            .last()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    /// True when the filtration exhausts the ambient space.
    pub fn is_exhaustive(&self) -> bool {
        self.top().is_full()
    }

    pub fn conj(&self) -> Self {
        IncFiltration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, v)| (*p, v.conj())).collect(),
        }
    }

    /// Reindex: the result has value `W_{j−s}` at `j`.
    pub fn shift(&self, s: i64) -> Self {
        IncFiltration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, v)| (p + s, v.clone())).collect(),
        }
    }

    /// The decreasing filtration `r ↦ W_{−r}`.  Requires exhaustiveness so
    /// the full-head convention of the result is honest.
    pub fn dual(&self) -> DecFiltration {
        assert!(
            self.is_exhaustive(),
            "dual of a non-exhaustive increasing filtration"
        );
        let jumps: Vec<(i64, Subspace)> = self
            .jumps
            .iter()
            .rev()
            .map(|(j, _)| (1 - j, self.at(j - 1)))
            .collect();
        DecFiltration {
            ambient: self.ambient,
            jumps,
        }
    }

    /// Graded piece `W_j / W_{j−1}`.
    pub fn graded(&self, j: i64) -> Quotient {
        Quotient::new(self.at(j - 1), self.at(j))
    }

    pub fn preserved_by(&self, m: &ExactMat) -> bool {
        self.jumps.iter().all(|(_, v)| v.contains(&v.apply(m)))
    }

    /// Indices `j` with `W_j ≠ W_{j−1}`, ascending.
    pub fn jump_indices(&self) -> Vec<i64> {
        self.jumps.iter().map(|(p, _)| *p).collect()
    }
}

impl fmt::Debug for IncFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self
            .jumps
            .iter()
            .map(|(p, v)| format!("W_{p}:dim {}", v.dim()))
            .collect();
        write!(f, "IncFiltration[{}]", steps.join(", "))
    }
}

/// Convolution of increasing filtrations: `(A∗B)_q = Σ_k A_{q−k} ∩ B_k`.
pub fn convolve(a: &IncFiltration, b: &IncFiltration) -> IncFiltration {
    assert_eq!(a.ambient(), b.ambient(), "convolve: ambient mismatch");
    let ambient = a.ambient();
    let (Some(a_lo), Some(a_hi), Some(b_lo), Some(b_hi)) =
        (a.first_jump(), a.last_jump(), b.first_jump(), b.last_jump())
    else {
        // one factor is constant zero
        return IncFiltration::constant_zero(ambient);
    };
    let mut values = Vec::new();
    for q in (a_lo + b_lo)..=(a_hi + b_hi) {
        // Terms with k outside [b_lo, b_hi] are dominated: below, B_k = 0;
        // above, B_k is constant while A_{q−k} shrinks.
        let mut acc = Subspace::zero(ambient);
        for k in b_lo..=b_hi {
            acc = acc.sum(&a.at(q - k).intersect(&b.at(k)));
        }
        values.push((q, acc));
    }
    IncFiltration::from_values(ambient, values).expect("convolution is monotone")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(cols: &[&[i64]]) -> Subspace {
        Subspace::from_int_cols(3, cols)
    }

    #[test]
    fn canonical_jump_lists() {
        let w = IncFiltration::from_values(
            3,
            vec![
                (0, Subspace::zero(3)),
                (1, span(&[&[1, 0, 0]])),
                (2, span(&[&[1, 0, 0]])),
                (3, Subspace::full(3)),
            ],
        )
        .unwrap();
        // index 0 is the implicit zero, index 2 repeats index 1
        assert_eq!(w.jump_indices(), vec![1, 3]);
        assert!(w.at(0).is_zero());
        assert_eq!(w.at(2), span(&[&[1, 0, 0]]));
        assert!(w.at(99).is_full());
        assert!(w.is_exhaustive());

        let bad = IncFiltration::from_values(
            3,
            vec![(0, span(&[&[1, 0, 0]])), (1, span(&[&[0, 1, 0]]))],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn dec_inc_duality_round_trip() {
        let f = DecFiltration::from_values(
            3,
            vec![
                (0, Subspace::full(3)),
                (1, span(&[&[1, 0, 0], &[0, 1, 0]])),
                (2, span(&[&[1, 0, 0]])),
                (3, Subspace::zero(3)),
            ],
        )
        .unwrap();
        let d = f.dual();
        // (dual F)_r = F^{−r}
        for r in -5..5 {
            assert_eq!(d.at(r), f.at(-r), "at r={r}");
        }
        assert_eq!(d.dual(), f);
    }

    #[test]
    fn convolution_oracle() {
        // A = W(N) for the 3-dim shift centered at 0: A_{-2}=0 ⊂ A_{-1}=⟨e1⟩,
        // A_1 = ⟨e1,e2⟩, A_2 = V (a weight filtration shape).
        let a = IncFiltration::from_values(
            3,
            vec![
                (-1, span(&[&[1, 0, 0]])),
                (1, span(&[&[1, 0, 0], &[0, 1, 0]])),
                (2, Subspace::full(3)),
            ],
        )
        .unwrap();
        // B jumps once: B_0 = ⟨e2, e3⟩, B_1 = V.
        let b = IncFiltration::from_values(
            3,
            vec![(0, span(&[&[0, 1, 0], &[0, 0, 1]])), (1, Subspace::full(3))],
        )
        .unwrap();
        let c = convolve(&a, &b);
        // Direct evaluation of Σ_k A_{q−k} ∩ B_k at a few q:
        // q=-1: k=0: A_{-1}∩B_0 = 0; k=1: A_{-2}∩V = 0 → 0
        assert!(c.at(-1).is_zero());
        // q=0: k=0: A_0∩B_0 = ⟨e1⟩∩⟨e2,e3⟩ = 0; k=1: A_{-1}∩V = ⟨e1⟩ → ⟨e1⟩
        assert_eq!(c.at(0), span(&[&[1, 0, 0]]));
        // q=1: k=0: A_1∩B_0 = ⟨e2⟩; k=1: A_0 = ⟨e1⟩ → ⟨e1,e2⟩
        assert_eq!(c.at(1), span(&[&[1, 0, 0], &[0, 1, 0]]));
        // q=2: k=0: A_2∩B_0 = ⟨e2,e3⟩; k=1: A_1 → V
        assert!(c.at(2).is_full());
        // symmetry of convolution
        let c2 = convolve(&b, &a);
        assert_eq!(c, c2);
    }

    #[test]
    fn graded_pieces() {
        let f = DecFiltration::from_values(
            3,
            vec![
                (1, span(&[&[1, 0, 0], &[0, 1, 0]])),
                (2, span(&[&[1, 0, 0]])),
                (3, Subspace::zero(3)),
            ],
        )
        .unwrap();
        assert_eq!(f.graded(0).dim(), 1);
        assert_eq!(f.graded(1).dim(), 1);
        assert_eq!(f.graded(2).dim(), 1);
        assert_eq!(f.graded(5).dim(), 0);
        let dims: i64 = (0..4).map(|p| f.graded(p).dim() as i64).sum();
        assert_eq!(dims, 3);
    }

    #[test]
    fn preservation_by_nilpotent() {
        let n = ExactMat::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let w = IncFiltration::from_values(
            3,
            vec![
                (-1, span(&[&[1, 0, 0]])),
                (1, span(&[&[1, 0, 0], &[0, 1, 0]])),
                (2, Subspace::full(3)),
            ],
        )
        .unwrap();
        assert!(w.preserved_by(&n));
        let f = DecFiltration::from_values(
            3,
            vec![(1, span(&[&[0, 0, 1]])), (2, Subspace::zero(3))],
        )
        .unwrap();
        assert!(!f.preserved_by(&n));
    }
}
