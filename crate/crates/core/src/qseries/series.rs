//! Truncated multivariate power series in the coordinates `q_1 … q_r`.
//!
//! A series keeps every monomial of total degree at most `order`; anything
//! higher is silently dropped, so all ring operations are exact modulo
//! `(q)^{order+1}`.  Coefficients are Laurent polynomials in the formal
//! period `t`.

use super::coeff::CoeffScalar;
use crate::linfilt::scalar::{ExactScalar, Rat};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Exponent vector of a monomial `q^m = q_1^{m_1}…q_r^{m_r}`.
pub type QExp = Vec<u16>;

pub fn total_degree(exp: &[u16]) -> u32 {
    exp.iter().map(|&e| e as u32).sum()
}

/// A truncated power series `Σ_m c_m q^m`, `|m| ≤ order`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    nvars: usize,
    order: u32,
    terms: BTreeMap<QExp, CoeffScalar>,
}

impl QSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        QSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: CoeffScalar) -> Self {
        let mut s = QSeries::zero(nvars, order);
        s.add_term(&vec![0; nvars], &c);
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        QSeries::constant(nvars, order, CoeffScalar::one())
    }

    /// The coordinate `q_v` (zero-based index).
    pub fn var(nvars: usize, order: u32, v: usize) -> Self {
        assert!(v < nvars, "variable index out of range");
        let mut exp = vec![0u16; nvars];
        exp[v] = 1;
        QSeries::monomial(nvars, order, exp, CoeffScalar::one())
    }

    pub fn monomial(nvars: usize, order: u32, exp: QExp, c: CoeffScalar) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length mismatch");
        let mut s = QSeries::zero(nvars, order);
        s.add_term(&exp, &c);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QExp, &CoeffScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u16]) -> CoeffScalar {
        self.terms.get(exp).cloned().unwrap_or_else(CoeffScalar::zero)
    }

    pub fn constant_term(&self) -> CoeffScalar {
        self.coeff(&vec![0; self.nvars])
    }

    /// True when the series has no constant term.
    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn add_term(&mut self, exp: &[u16], c: &CoeffScalar) {
        assert_eq!(exp.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() || total_degree(exp) > self.order {
            return;
        }
        let entry = self
            .terms
            .entry(exp.to_vec())
            .or_insert_with(CoeffScalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(exp);
        }
    }

    /// Lower the truncation order (raising it would fabricate precision).
    pub fn truncate(&self, order: u32) -> QSeries {
        let order = order.min(self.order);
        let mut s = QSeries::zero(self.nvars, order);
        for (exp, c) in &self.terms {
            s.add_term(exp, c);
        }
        s
    }

    pub fn scale(&self, c: &CoeffScalar) -> QSeries {
        let mut s = QSeries::zero(self.nvars, self.order);
        for (exp, a) in &self.terms {
            s.add_term(exp, &(a * c));
        }
        s
    }

    /// Conjugation: coefficientwise (the coordinates are treated as real).
    pub fn conj(&self) -> QSeries {
        let mut s = QSeries::zero(self.nvars, self.order);
        for (exp, a) in &self.terms {
            s.add_term(exp, &a.conj());
        }
        s
    }

    /// Partial derivative `∂/∂q_v`.
    pub fn d_dq(&self, v: usize) -> QSeries {
        assert!(v < self.nvars);
        let mut s = QSeries::zero(self.nvars, self.order);
        for (exp, c) in &self.terms {
            if exp[v] == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[v] -= 1;
            s.add_term(&e, &(c * &CoeffScalar::from_int(exp[v] as i64)));
        }
        s
    }

    /// The logarithmic derivative operator `q_v ∂/∂q_v`.
    pub fn theta(&self, v: usize) -> QSeries {
        assert!(v < self.nvars);
        let mut s = QSeries::zero(self.nvars, self.order);
        for (exp, c) in &self.terms {
            if exp[v] == 0 {
                continue;
            }
            s.add_term(exp, &(c * &CoeffScalar::from_int(exp[v] as i64)));
        }
        s
    }

    /// Compose: substitute `subs[v]` for `q_v`.  Every substituted series
    /// must vanish at the origin so the composition is well defined on
    /// truncations.
    pub fn substitute(&self, subs: &[QSeries]) -> QSeries {
        assert_eq!(subs.len(), self.nvars, "substitute: wrong variable count");
        let out_vars = subs.first().map_or(self.nvars, |s| s.nvars);
        let out_order = subs
            .iter()
            .map(|s| s.order)
            .min()
            .unwrap_or(self.order)
            .min(self.order);
        for s in subs {
            assert_eq!(s.nvars, out_vars, "substitute: mixed variable counts");
            assert!(
                s.vanishes_at_origin(),
                "substitute: substituted series must vanish at the origin"
            );
        }
        // power tables, lazily extended
        let mut pows: Vec<Vec<QSeries>> =
            (0..self.nvars).map(|_| vec![QSeries::one(out_vars, out_order)]).collect();
        let mut out = QSeries::zero(out_vars, out_order);
        for (exp, c) in &self.terms {
            let mut term = QSeries::constant(out_vars, out_order, c.clone());
            for (v, &e) in exp.iter().enumerate() {
                while pows[v].len() <= e as usize {
                    let next = &pows[v][pows[v].len() - 1] * &subs[v];
                    pows[v].push(next);
                }
                if e > 0 {
                    term = &term * &pows[v][e as usize];
                }
            }
            out += &term;
        }
        out
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn inverse(&self) -> Option<QSeries> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv()?;
        // self = c0 (1 + E) with E(0) = 0; invert the unit factor by the
        // finite geometric series.
        let e = &self.scale(&c0_inv) - &QSeries::one(self.nvars, self.order);
        let mut acc = QSeries::one(self.nvars, self.order);
        let mut pow = QSeries::one(self.nvars, self.order);
        let mut sign = 1i64;
        for _ in 0..self.order {
            pow = &pow * &e;
            if pow.is_zero() {
                break;
            }
            sign = -sign;
            acc = &acc + &pow.scale(&CoeffScalar::from_int(sign));
        }
        Some(acc.scale(&c0_inv))
    }

    /// `log` of a series with constant term 1.
    pub fn log_unit(&self) -> QSeries {
        assert!(
            self.constant_term().is_one(),
            "log_unit: constant term must be 1"
        );
        let e = self - &QSeries::one(self.nvars, self.order);
        let mut acc = QSeries::zero(self.nvars, self.order);
        let mut pow = QSeries::one(self.nvars, self.order);
        for m in 1..=self.order as i64 {
            pow = &pow * &e;
            if pow.is_zero() {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            acc = &acc + &pow.scale(&CoeffScalar::from_ratio(sign, m));
        }
        acc
    }

    /// `exp` of a series vanishing at the origin.
    pub fn exp(&self) -> QSeries {
        assert!(
            self.vanishes_at_origin(),
            "exp: series must vanish at the origin"
        );
        let mut acc = QSeries::one(self.nvars, self.order);
        let mut pow = QSeries::one(self.nvars, self.order);
        let mut fact = Rat::from(num_bigint::BigInt::from(1));
        for m in 1..=self.order as i64 {
            pow = &pow * self;
            if pow.is_zero() {
                break;
            }
            fact = fact * Rat::from(num_bigint::BigInt::from(m));
            let inv_fact = CoeffScalar::from_scalar(ExactScalar::from_rat(
                Rat::from(num_bigint::BigInt::from(1)) / fact.clone(),
            ));
            acc = &acc + &pow.scale(&inv_fact);
        }
        acc
    }

    /// Exact evaluation at rational coordinate values (of the truncation).
    pub fn eval_rational(&self, q: &[Rat]) -> CoeffScalar {
        assert_eq!(q.len(), self.nvars);
        let mut out = CoeffScalar::zero();
        for (exp, c) in &self.terms {
            let mut factor = Rat::from(num_bigint::BigInt::from(1));
            for (v, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    factor = factor * q[v].clone();
                }
            }
            out += &(c * &CoeffScalar::from_scalar(ExactScalar::from_rat(factor)));
        }
        out
    }

    /// Numeric evaluation of the truncation at complex coordinates.
    pub fn eval_numeric(&self, q: &[Complex64], tau: Complex64) -> Complex64 {
        assert_eq!(q.len(), self.nvars);
        let mut out = Complex64::new(0.0, 0.0);
        for (exp, c) in &self.terms {
            let mut factor = Complex64::new(1.0, 0.0);
            for (v, &e) in exp.iter().enumerate() {
                factor *= q[v].powu(e as u32);
            }
            out += c.eval_tau(tau) * factor;
        }
        out
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (exp, c) in &self.terms {
            let mut mono = String::new();
            for (v, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push_str(&format!(" q{}", v + 1)),
                    _ => mono.push_str(&format!(" q{}^{}", v + 1, e)),
                }
            }
            if mono.is_empty() {
                parts.push(format!("{c}"));
            } else if c.is_one() {
                parts.push(mono.trim_start().to_string());
            } else {
                parts.push(format!("({c}){mono}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        assert_eq!(self.nvars, rhs.nvars, "add: variable count mismatch");
        let mut out = self.truncate(rhs.order);
        for (exp, c) in &rhs.terms {
            out.add_term(exp, c);
        }
        out
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        let mut out = QSeries::zero(self.nvars, self.order);
        for (exp, c) in &self.terms {
            out.add_term(exp, &-c);
        }
        out
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        assert_eq!(self.nvars, rhs.nvars, "mul: variable count mismatch");
        let order = self.order.min(rhs.order);
        let mut out = QSeries::zero(self.nvars, order);
        for (ea, ca) in &self.terms {
            if total_degree(ea) > order {
                continue;
            }
            for (eb, cb) in &rhs.terms {
                if total_degree(ea) + total_degree(eb) > order {
                    continue;
                }
                let exp: QExp = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&exp, &(ca * cb));
            }
        }
        out
    }
}

impl AddAssign<&QSeries> for QSeries {
    fn add_assign(&mut self, rhs: &QSeries) {
        assert_eq!(self.nvars, rhs.nvars, "add: variable count mismatch");
        self.order = self.order.min(rhs.order);
        let order = self.order;
        self.terms.retain(|exp, _| total_degree(exp) <= order);
        for (exp, c) in &rhs.terms {
            self.add_term(exp, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linfilt::scalar::rat;

    fn q(v: usize) -> QSeries {
        QSeries::var(2, 6, v)
    }

    #[test]
    fn ring_ops_respect_truncation() {
        let s = &QSeries::one(2, 6) + &q(0);
        let mut p = QSeries::one(2, 6);
        for _ in 0..8 {
            p = &p * &s;
        }
        // (1+q1)^8 truncated at order 6: coefficient of q1^6 is C(8,6)=28
        assert_eq!(p.coeff(&[6, 0]), CoeffScalar::from_int(28));
        assert_eq!(p.coeff(&[5, 0]), CoeffScalar::from_int(56));
        assert!(p.coeff(&[7, 0]).is_zero());
    }

    #[test]
    fn geometric_series_inverse() {
        let s = &QSeries::one(2, 6) - &q(0);
        let inv = s.inverse().unwrap();
        for d in 0..=6u16 {
            assert_eq!(inv.coeff(&[d, 0]), CoeffScalar::one(), "coefficient of q1^{d}");
        }
        assert_eq!(&s * &inv, QSeries::one(2, 6));

        // unit monomial constant terms are invertible too
        let u = QSeries::constant(2, 6, CoeffScalar::monomial(2, ExactScalar::from_int(3)));
        let su = &u + &q(1);
        assert_eq!(&su * &su.inverse().unwrap(), QSeries::one(2, 6));

        assert!(q(0).inverse().is_none());
    }

    #[test]
    fn log_and_exp_are_inverse() {
        let x = &q(0) + &q(1).scale(&CoeffScalar::from_ratio(1, 2));
        let e = x.exp();
        assert_eq!(e.log_unit(), x);
        // exp(q1) coefficients are 1/m!
        let eq = q(0).exp();
        assert_eq!(eq.coeff(&[3, 0]), CoeffScalar::from_ratio(1, 6));
        assert_eq!(eq.coeff(&[6, 0]), CoeffScalar::from_ratio(1, 720));
    }

    #[test]
    fn substitution_composes() {
        // f(q1) = q1 + q1², substitute q1 ↦ q2(1+q1)
        let f = &q(0) + &(&q(0) * &q(0));
        let sub = &q(1) + &(&q(1) * &q(0));
        let g = f.substitute(&[sub.clone(), QSeries::zero(2, 6)]);
        // q2 + q1 q2 + q2² + 2 q1 q2² + q1² q2²
        assert_eq!(g.coeff(&[0, 1]), CoeffScalar::one());
        assert_eq!(g.coeff(&[1, 1]), CoeffScalar::one());
        assert_eq!(g.coeff(&[0, 2]), CoeffScalar::one());
        assert_eq!(g.coeff(&[1, 2]), CoeffScalar::from_int(2));
        assert_eq!(g.coeff(&[2, 2]), CoeffScalar::one());
        assert!(g.coeff(&[2, 1]).is_zero());
    }

    #[test]
    fn derivatives() {
        // s = q1² q2 + 2 q2³
        let s = &(&(&q(0) * &q(0)) * &q(1)) + &(&(&q(1) * &q(1)) * &q(1)).scale(&CoeffScalar::from_int(2));
        let ds = s.d_dq(0);
        assert_eq!(ds.coeff(&[1, 1]), CoeffScalar::from_int(2));
        let th = s.theta(1);
        assert_eq!(th.coeff(&[2, 1]), CoeffScalar::one());
        assert_eq!(th.coeff(&[0, 3]), CoeffScalar::from_int(6));
    }

    #[test]
    fn rational_evaluation() {
        let s = &QSeries::one(2, 6) + &(&q(0) * &q(1)).scale(&CoeffScalar::monomial(1, ExactScalar::from_int(3)));
        let v = s.eval_rational(&[rat(1, 2), rat(2, 3)]);
        // 1 + 3·(1/3)·t = 1 + t
        assert_eq!(v, &CoeffScalar::one() + &CoeffScalar::tau());
    }
}
