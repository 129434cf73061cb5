//! Polynomials in flat coordinate symbols over truncated `q`-series.
//!
//! Several constructions mix honest power series in `q_v` with polynomial
//! occurrences of coordinates `z_j`, where some `z_j` satisfy `q_v = e^{t·z_j}`.
//! An element here is `Σ_α z^α · f_α(q)`.  Each symbol optionally carries a
//! link to a `q`-variable; differentiating with respect to a linked symbol
//! applies the product rule through the exponential, i.e. acts as
//! `∂_{z_j} + t · q_v ∂_{q_v}` on coefficients.

use super::coeff::CoeffScalar;
use super::series::{total_degree, QExp, QSeries};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Shared shape data: symbol count, series variables, truncation order and
/// the symbol → variable links.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LogCtx {
    pub nsyms: usize,
    pub nvars: usize,
    pub order: u32,
    /// `qlink[j] = Some(v)` means symbol `j` satisfies `q_v = e^{t·z_j}`.
    pub qlink: Vec<Option<usize>>,
}

impl LogCtx {
    pub fn new(nsyms: usize, nvars: usize, order: u32, qlink: Vec<Option<usize>>) -> Self {
        assert_eq!(qlink.len(), nsyms, "qlink length mismatch");
        for link in qlink.iter().flatten() {
            assert!(*link < nvars, "qlink target out of range");
        }
        LogCtx {
            nsyms,
            nvars,
            order,
            qlink,
        }
    }

    /// No symbols at all: plain `q`-series.
    pub fn pure_q(nvars: usize, order: u32) -> Self {
        LogCtx::new(0, nvars, order, Vec::new())
    }

    /// One symbol per variable, each linked: the logarithm coordinates
    /// `ℓ_v` with `q_v = e^{t·ℓ_v}`.
    pub fn log_coords(nvars: usize, order: u32) -> Self {
        LogCtx::new(nvars, nvars, order, (0..nvars).map(Some).collect())
    }

    fn compatible(&self, other: &LogCtx) -> bool {
        self.nsyms == other.nsyms && self.nvars == other.nvars && self.qlink == other.qlink
    }

    fn merge(&self, other: &LogCtx) -> LogCtx {
        assert!(self.compatible(other), "mixed symbol contexts");
        let mut ctx = self.clone();
        ctx.order = self.order.min(other.order);
        ctx
    }
}

/// `Σ_α z^α f_α(q)` — a polynomial in the symbols over `QSeries`.
#[derive(Clone, PartialEq, Eq)]
pub struct LogSeries {
    ctx: LogCtx,
    terms: BTreeMap<QExp, QSeries>,
}

impl LogSeries {
    pub fn zero(ctx: &LogCtx) -> Self {
        LogSeries {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &LogCtx) -> Self {
        LogSeries::from_q(ctx, QSeries::one(ctx.nvars, ctx.order))
    }

    pub fn from_scalar(ctx: &LogCtx, c: CoeffScalar) -> Self {
        LogSeries::from_q(ctx, QSeries::constant(ctx.nvars, ctx.order, c))
    }

    /// A symbol-free element.
    pub fn from_q(ctx: &LogCtx, f: QSeries) -> Self {
        assert_eq!(f.nvars(), ctx.nvars, "variable count mismatch");
        let mut s = LogSeries::zero(ctx);
        s.add_term(&vec![0; ctx.nsyms], &f.truncate(ctx.order));
        s
    }

    /// The symbol `z_j`.
    pub fn sym(ctx: &LogCtx, j: usize) -> Self {
        assert!(j < ctx.nsyms, "symbol index out of range");
        let mut exp = vec![0u16; ctx.nsyms];
        exp[j] = 1;
        LogSeries::monomial(ctx, exp, QSeries::one(ctx.nvars, ctx.order))
    }

    pub fn monomial(ctx: &LogCtx, sym_exp: QExp, f: QSeries) -> Self {
        let mut s = LogSeries::zero(ctx);
        s.add_term(&sym_exp, &f);
        s
    }

    pub fn ctx(&self) -> &LogCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QExp, &QSeries)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, sym_exp: &[u16], f: &QSeries) {
        assert_eq!(sym_exp.len(), self.ctx.nsyms, "symbol exponent mismatch");
        let f = f.truncate(self.ctx.order);
        if f.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(sym_exp.to_vec())
            .or_insert_with(|| QSeries::zero(self.ctx.nvars, self.ctx.order));
        *entry += &f;
        if entry.is_zero() {
            self.terms.remove(sym_exp);
        }
    }

    /// The coefficient series of `z^α`.
    pub fn coeff(&self, sym_exp: &[u16]) -> QSeries {
        self.terms
            .get(sym_exp)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.ctx.nvars, self.ctx.order))
    }

    /// True when no symbol occurs.
    pub fn is_sym_free(&self) -> bool {
        self.terms.keys().all(|e| total_degree(e) == 0)
    }

    /// The symbol-free component `f_0(q)`.
    pub fn sym_free_part(&self) -> QSeries {
        self.coeff(&vec![0; self.ctx.nsyms])
    }

    /// The whole element as a plain series, if symbol-free.
    pub fn as_qseries(&self) -> Option<QSeries> {
        if self.is_sym_free() {
            Some(self.sym_free_part())
        } else {
            None
        }
    }

    /// Highest total symbol degree present.
    pub fn sym_degree(&self) -> u32 {
        self.terms.keys().map(|e| total_degree(e)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &CoeffScalar) -> LogSeries {
        let mut out = LogSeries::zero(&self.ctx);
        for (exp, f) in &self.terms {
            out.add_term(exp, &f.scale(c));
        }
        out
    }

    pub fn scale_q(&self, g: &QSeries) -> LogSeries {
        let mut out = LogSeries::zero(&self.ctx);
        for (exp, f) in &self.terms {
            out.add_term(exp, &(f * g));
        }
        out
    }

    /// Derivative with respect to coordinate `j`: formal `∂` on the symbol
    /// plus, when linked, the chain-rule term `t·q_v ∂_{q_v}` on coefficients.
    pub fn derive_z(&self, j: usize) -> LogSeries {
        assert!(j < self.ctx.nsyms, "symbol index out of range");
        let mut out = LogSeries::zero(&self.ctx);
        for (exp, f) in &self.terms {
            if exp[j] > 0 {
                let mut e = exp.clone();
                e[j] -= 1;
                out.add_term(&e, &f.scale(&CoeffScalar::from_int(exp[j] as i64)));
            }
            if let Some(v) = self.ctx.qlink[j] {
                out.add_term(exp, &f.theta(v).scale(&CoeffScalar::tau()));
            }
        }
        out
    }

    /// Plain series derivative `∂_{q_v}` on coefficients (symbols untouched).
    pub fn d_dq(&self, v: usize) -> LogSeries {
        let mut out = LogSeries::zero(&self.ctx);
        for (exp, f) in &self.terms {
            out.add_term(exp, &f.d_dq(v));
        }
        out
    }

    /// Substitute series for the `q`-variables, coefficientwise.  The caller
    /// is responsible for the matching reinterpretation of linked symbols.
    pub fn substitute_q(&self, subs: &[QSeries]) -> LogSeries {
        let mut out = LogSeries::zero(&self.ctx);
        for (exp, f) in &self.terms {
            out.add_term(exp, &f.substitute(subs));
        }
        out
    }

    /// Set the listed symbols to zero (dropping every term that contains
    /// them); other symbols are untouched.
    pub fn kill_syms(&self, which: &[usize]) -> LogSeries {
        let mut out = LogSeries::zero(&self.ctx);
        for (exp, f) in &self.terms {
            if which.iter().all(|&j| exp[j] == 0) {
                out.add_term(exp, f);
            }
        }
        out
    }
}

impl fmt::Debug for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (exp, series) in &self.terms {
            let mut sym = String::new();
            for (j, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => sym.push_str(&format!("z{j}·")),
                    _ => sym.push_str(&format!("z{j}^{e}·")),
                }
            }
            parts.push(format!("{sym}({series})"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &LogSeries {
    type Output = LogSeries;
    fn add(self, rhs: &LogSeries) -> LogSeries {
        let ctx = self.ctx.merge(&rhs.ctx);
        let mut out = LogSeries::zero(&ctx);
        for (exp, f) in self.terms.iter().chain(rhs.terms.iter()) {
            out.add_term(exp, f);
        }
        out
    }
}

impl Sub for &LogSeries {
    type Output = LogSeries;
    fn sub(self, rhs: &LogSeries) -> LogSeries {
        self + &(-rhs)
    }
}

impl Neg for &LogSeries {
    type Output = LogSeries;
    fn neg(self) -> LogSeries {
        let mut out = LogSeries::zero(&self.ctx);
        for (exp, f) in &self.terms {
            out.add_term(exp, &-f);
        }
        out
    }
}

impl Mul for &LogSeries {
    type Output = LogSeries;
    fn mul(self, rhs: &LogSeries) -> LogSeries {
        let ctx = self.ctx.merge(&rhs.ctx);
        let mut out = LogSeries::zero(&ctx);
        for (ea, fa) in &self.terms {
            for (eb, fb) in &rhs.terms {
                let exp: QExp = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&exp, &(fa * fb));
            }
        }
        out
    }
}

impl AddAssign<&LogSeries> for LogSeries {
    fn add_assign(&mut self, rhs: &LogSeries) {
        *self = &*self + rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linked_derivative_applies_chain_rule() {
        // one symbol ℓ with q = e^{tℓ}: d/dℓ (ℓ·q) = q + ℓ·t·q
        let ctx = LogCtx::log_coords(1, 6);
        let ell = LogSeries::sym(&ctx, 0);
        let q = LogSeries::from_q(&ctx, QSeries::var(1, 6, 0));
        let s = &ell * &q;
        let d = s.derive_z(0);
        assert_eq!(d.coeff(&[0]), QSeries::var(1, 6, 0));
        assert_eq!(
            d.coeff(&[1]),
            QSeries::var(1, 6, 0).scale(&CoeffScalar::tau())
        );
    }

    #[test]
    fn unlinked_derivative_is_formal() {
        // symbols z0 (unlinked), z1 (linked to q_0)
        let ctx = LogCtx::new(2, 1, 6, vec![None, Some(0)]);
        let z0 = LogSeries::sym(&ctx, 0);
        let z1 = LogSeries::sym(&ctx, 1);
        let s = &(&z0 * &z0) * &z1; // z0² z1
        let d0 = s.derive_z(0);
        assert_eq!(d0.coeff(&[1, 1]), QSeries::constant(1, 6, CoeffScalar::from_int(2)));
        // ∂_{z1}(z0²z1) = z0² (the q-part is constant so the chain term dies)
        let d1 = s.derive_z(1);
        assert_eq!(d1.coeff(&[2, 0]), QSeries::one(1, 6));
        assert!(d1.coeff(&[2, 1]).is_zero());
    }

    #[test]
    fn mixed_partials_commute() {
        let ctx = LogCtx::new(2, 2, 6, vec![Some(0), Some(1)]);
        let z0 = LogSeries::sym(&ctx, 0);
        let q01 = LogSeries::from_q(&ctx, &QSeries::var(2, 6, 0) * &QSeries::var(2, 6, 1));
        let s = &(&z0 * &z0) * &q01;
        let d01 = s.derive_z(0).derive_z(1);
        let d10 = s.derive_z(1).derive_z(0);
        assert_eq!(d01, d10);
        assert!(!d01.is_zero());
    }

    #[test]
    fn sym_free_projection() {
        let ctx = LogCtx::new(1, 1, 6, vec![None]);
        let z = LogSeries::sym(&ctx, 0);
        let f = LogSeries::from_q(&ctx, QSeries::var(1, 6, 0));
        let s = &(&z * &f) + &LogSeries::one(&ctx);
        assert!(!s.is_sym_free());
        assert_eq!(s.sym_free_part(), QSeries::one(1, 6));
        assert_eq!(s.kill_syms(&[0]).as_qseries().unwrap(), QSeries::one(1, 6));
        assert_eq!(s.sym_degree(), 1);
    }
}
