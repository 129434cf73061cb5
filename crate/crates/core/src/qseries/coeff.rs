//! Laurent polynomials in the formal period `t` (standing for 2πi).
//!
//! Series coefficients throughout the crate live in ℚ(i)[t, t⁻¹].  Keeping
//! `t` formal lets every computation stay exact; conjugation acts by
//! `i ↦ −i` together with `t ↦ −t`, and numeric evaluation substitutes
//! `t = 2πi` only at the very end.

use crate::linfilt::scalar::ExactScalar;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// An exact Laurent polynomial `Σ c_k t^k` with Gaussian-rational `c_k`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CoeffScalar {
    /// Nonzero coefficients only.
    terms: BTreeMap<i32, ExactScalar>,
}

impl CoeffScalar {
    pub fn zero() -> Self {
        CoeffScalar::default()
    }

    pub fn one() -> Self {
        CoeffScalar::from_scalar(ExactScalar::one())
    }

    /// The formal period `t` itself.
    pub fn tau() -> Self {
        CoeffScalar::monomial(1, ExactScalar::one())
    }

    /// The monomial `c·t^k`.
    pub fn monomial(k: i32, c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        CoeffScalar { terms }
    }

    pub fn from_scalar(c: ExactScalar) -> Self {
        CoeffScalar::monomial(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        CoeffScalar::from_scalar(ExactScalar::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        CoeffScalar::from_scalar(ExactScalar::from_ratio(num, den))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, ExactScalar)>) -> Self {
        let mut out = CoeffScalar::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// The coefficient of `t^k`.
    pub fn coeff(&self, k: i32) -> ExactScalar {
        self.terms.get(&k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// True when the value involves no formal period, i.e. is a plain scalar.
    pub fn is_tau_free(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// The `t^0` coefficient.
    pub fn scalar_part(&self) -> ExactScalar {
        self.coeff(0)
    }

    /// As a plain scalar, if `t`-free.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        if self.is_tau_free() {
            Some(self.scalar_part())
        } else {
            None
        }
    }

    /// As a single monomial `(k, c)`, if the value is one.
    pub fn as_monomial(&self) -> Option<(i32, ExactScalar)> {
        if self.terms.len() == 1 {
            let (&k, c) = self.terms.iter().next().unwrap();
            Some((k, c.clone()))
        } else {
            None
        }
    }

    /// Units of ℚ(i)[t, t⁻¹] are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inv(&self) -> Option<CoeffScalar> {
        let (k, c) = self.as_monomial()?;
        Some(CoeffScalar::monomial(-k, c.inv()?))
    }

    pub fn add_term(&mut self, k: i32, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(ExactScalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Conjugation: `i ↦ −i` on coefficients and `t ↦ −t`.
    pub fn conj(&self) -> CoeffScalar {
        CoeffScalar::from_terms(self.terms.iter().map(|(&k, c)| {
            let sign = if k.rem_euclid(2) == 0 { c.conj() } else { -&c.conj() };
            (k, sign)
        }))
    }

    /// Multiply by `t^k`.
    pub fn mul_tau_pow(&self, k: i32) -> CoeffScalar {
        CoeffScalar {
            terms: self.terms.iter().map(|(&j, c)| (j + k, c.clone())).collect(),
        }
    }

    /// Exact division by a unit.
    pub fn div_unit(&self, unit: &CoeffScalar) -> CoeffScalar {
        self * &unit.inv().expect("div_unit: divisor is not a unit")
    }

    /// Substitute a numeric value for `t` (by default the caller passes 2πi).
    pub fn eval_tau(&self, tau: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&k, c)| c.to_f64() * tau.powi(k))
            .sum()
    }
}

impl fmt::Debug for CoeffScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CoeffScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&k, c) in &self.terms {
            let cs = c.to_string();
            let is_sum = cs.contains('+') || (cs.len() > 1 && cs[1..].contains('-'));
            let coeff = if is_sum { format!("({cs})") } else { cs };
            parts.push(match k {
                0 => coeff,
                1 if c.is_one() => "t".to_string(),
                1 => format!("{coeff}*t"),
                _ if c.is_one() => format!("t^{k}"),
                _ => format!("{coeff}*t^{k}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &CoeffScalar {
    type Output = CoeffScalar;
    fn add(self, rhs: &CoeffScalar) -> CoeffScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &CoeffScalar {
    type Output = CoeffScalar;
    fn sub(self, rhs: &CoeffScalar) -> CoeffScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &CoeffScalar {
    type Output = CoeffScalar;
    fn mul(self, rhs: &CoeffScalar) -> CoeffScalar {
        let mut out = CoeffScalar::zero();
        for (&j, a) in &self.terms {
            for (&k, b) in &rhs.terms {
                out.add_term(j + k, &(a * b));
            }
        }
        out
    }
}

impl Neg for &CoeffScalar {
    type Output = CoeffScalar;
    fn neg(self) -> CoeffScalar {
        CoeffScalar {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl AddAssign<&CoeffScalar> for CoeffScalar {
    fn add_assign(&mut self, rhs: &CoeffScalar) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, c);
        }
    }
}

impl SubAssign<&CoeffScalar> for CoeffScalar {
    fn sub_assign(&mut self, rhs: &CoeffScalar) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, &-c);
        }
    }
}

impl MulAssign<&CoeffScalar> for CoeffScalar {
    fn mul_assign(&mut self, rhs: &CoeffScalar) {
        *self = &*self * rhs;
    }
}
