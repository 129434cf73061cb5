//! Matrices of series, with the handful of analytic operations the germ
//! calculus needs: nilpotent exponentials, unipotent logarithms, exact
//! series inverses and division-free determinants.

use super::coeff::CoeffScalar;
use super::logseries::{LogCtx, LogSeries};
use super::series::{QExp, QSeries};
use crate::error::Error;
use crate::linfilt::matrix::ExactMat;
use crate::linfilt::scalar::{ExactScalar, Rat};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A dense matrix with `LogSeries` entries, all sharing one context.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixSeries {
    pub rows: usize,
    pub cols: usize,
    ctx: LogCtx,
    entries: Vec<LogSeries>,
}

impl MatrixSeries {
    pub fn zeros(ctx: &LogCtx, rows: usize, cols: usize) -> Self {
        MatrixSeries {
            rows,
            cols,
            ctx: ctx.clone(),
            entries: vec![LogSeries::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &LogCtx, n: usize) -> Self {
        let mut m = MatrixSeries::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, LogSeries::one(ctx));
        }
        m
    }

    /// Constant matrix from exact entries.
    pub fn from_exact(ctx: &LogCtx, m: &ExactMat) -> Self {
        MatrixSeries::from_fn(ctx, m.rows, m.cols, |i, j| {
            LogSeries::from_scalar(ctx, CoeffScalar::from_scalar(m.get(i, j).clone()))
        })
    }

    pub fn from_fn(
        ctx: &LogCtx,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LogSeries,
    ) -> Self {
        let mut m = MatrixSeries::zeros(ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn ctx(&self) -> &LogCtx {
        &self.ctx
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &LogSeries {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: LogSeries) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_sym_free(&self) -> bool {
        self.entries.iter().all(|e| e.is_sym_free())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        MatrixSeries::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, mut f: impl FnMut(&LogSeries) -> LogSeries) -> Self {
        MatrixSeries::from_fn(&self.ctx, self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn scale(&self, c: &CoeffScalar) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn scale_series(&self, s: &LogSeries) -> Self {
        self.map(|e| e * s)
    }

    /// Coordinate derivative, entrywise (see `LogSeries::derive_z`).
    pub fn derive_z(&self, j: usize) -> Self {
        self.map(|e| e.derive_z(j))
    }

    pub fn d_dq(&self, v: usize) -> Self {
        self.map(|e| e.d_dq(v))
    }

    /// The scaled Euler derivative `t·q_v ∂/∂q_v` applied to every series
    /// coefficient (symbol exponents untouched).
    pub fn theta_tau(&self, v: usize) -> Self {
        self.map(|e| {
            let mut out = LogSeries::zero(e.ctx());
            for (sym, f) in e.terms() {
                out.add_term(sym, &f.theta(v).scale(&CoeffScalar::tau()));
            }
            out
        })
    }

    /// The smallest total `q`-degree at which any entry is nonzero,
    /// together with the first such entry position — `None` for the zero
    /// matrix.  Symbol exponents are ignored; only `q`-degrees count.
    pub fn first_nonzero_q_order(&self) -> Option<(u32, usize, usize)> {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (_, f) in self.get(i, j).terms() {
                    for (exp, c) in f.terms() {
                        if c.is_zero() {
                            continue;
                        }
                        let cand = (crate::qseries::total_degree(exp), i, j);
                        if best.map_or(true, |b| cand < b) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
        best
    }

    pub fn substitute_q(&self, subs: &[QSeries]) -> Self {
        self.map(|e| e.substitute_q(subs))
    }

    pub fn hcat(&self, other: &MatrixSeries) -> Self {
        assert_eq!(self.rows, other.rows, "hcat: row mismatch");
        MatrixSeries::from_fn(&self.ctx, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn commutator(&self, other: &MatrixSeries) -> Self {
        &(self * other) - &(other * self)
    }

    /// The exact matrix of a given symbol/series/period monomial.
    pub fn coeff_exact(&self, sym_exp: &[u16], q_exp: &[u16], tau_pow: i32) -> ExactMat {
        ExactMat::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).coeff(sym_exp).coeff(q_exp).coeff(tau_pow)
        })
    }

    /// For a symbol-free matrix: the coefficient of `q^m`, split by period
    /// power.  Absent powers mean zero.
    pub fn coeff_q_by_tau(&self, q_exp: &QExp) -> BTreeMap<i32, ExactMat> {
        let sym0 = vec![0u16; self.ctx.nsyms];
        let mut out: BTreeMap<i32, ExactMat> = BTreeMap::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = self.get(i, j).coeff(&sym0).coeff(q_exp);
                for (&k, v) in c.terms() {
                    out.entry(k)
                        .or_insert_with(|| ExactMat::zeros(self.rows, self.cols))
                        .set(i, j, v.clone());
                }
            }
        }
        out
    }

    /// The set of `q`-monomials with a nonzero coefficient anywhere.
    pub fn q_support(&self) -> Vec<QExp> {
        let mut set = std::collections::BTreeSet::new();
        for e in &self.entries {
            for (_, f) in e.terms() {
                for (q, _) in f.terms() {
                    set.insert(q.clone());
                }
            }
        }
        set.into_iter().collect()
    }

    /// The constant part, if the matrix is a plain exact matrix (no symbols,
    /// no `q`, no period powers).
    pub fn as_exact(&self) -> Option<ExactMat> {
        let sym0 = vec![0u16; self.ctx.nsyms];
        let q0 = vec![0u16; self.ctx.nvars];
        let m = self.coeff_exact(&sym0, &q0, 0);
        let back = MatrixSeries::from_exact(&self.ctx, &m);
        if &back == self {
            Some(m)
        } else {
            None
        }
    }

    /// `Σ_m X^m / m!` for a matrix that is nilpotent as a matrix (powers
    /// vanish identically, independent of truncation).
    pub fn exp_nilpotent(&self) -> Result<MatrixSeries, Error> {
        assert!(self.is_square(), "exp of a non-square matrix");
        let bound = self.rows + self.ctx.order as usize + 1;
        let mut acc = MatrixSeries::identity(&self.ctx, self.rows);
        let mut pow = MatrixSeries::identity(&self.ctx, self.rows);
        let mut fact = Rat::from(BigInt::from(1));
        for m in 1..=bound {
            pow = &pow * self;
            if pow.is_zero() {
                return Ok(acc);
            }
            fact = fact * Rat::from(BigInt::from(m as i64));
            let c = CoeffScalar::from_scalar(ExactScalar::from_rat(
                Rat::from(BigInt::from(1)) / fact.clone(),
            ));
            acc = &acc + &pow.scale(&c);
        }
        Err(Error::NotNilpotent(format!(
            "matrix power {bound} still nonzero in exp"
        )))
    }

    /// `log` of `I + E` with `E` nilpotent as a matrix.
    pub fn log_unipotent(&self) -> Result<MatrixSeries, Error> {
        assert!(self.is_square(), "log of a non-square matrix");
        let e = self - &MatrixSeries::identity(&self.ctx, self.rows);
        let bound = self.rows + self.ctx.order as usize + 1;
        let mut acc = MatrixSeries::zeros(&self.ctx, self.rows, self.cols);
        let mut pow = MatrixSeries::identity(&self.ctx, self.rows);
        for m in 1..=bound {
            pow = &pow * &e;
            if pow.is_zero() {
                return Ok(acc);
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            acc = &acc + &pow.scale(&CoeffScalar::from_ratio(sign, m as i64));
        }
        Err(Error::NotNilpotent(format!(
            "matrix power {bound} still nonzero in log"
        )))
    }

    /// Characteristic polynomial `λ^n + c_1 λ^{n−1} + … + c_n` by the
    /// Berkowitz algorithm — division-free, so valid over the series ring.
    /// Returns `[1, c_1, …, c_n]`.
    pub fn berkowitz_char_poly(&self) -> Vec<LogSeries> {
        assert!(self.is_square(), "char poly of a non-square matrix");
        let n = self.rows;
        let one = LogSeries::one(&self.ctx);
        if n == 0 {
            return vec![one];
        }
        // C_1 = [1, −a_00]
        let mut c = vec![one.clone(), -self.get(0, 0)];
        for i in 2..=n {
            // principal i×i block, partitioned around its last row/column
            let a = self.get(i - 1, i - 1).clone();
            let row: Vec<LogSeries> = (0..i - 1).map(|j| self.get(i - 1, j).clone()).collect();
            let col: Vec<LogSeries> = (0..i - 1).map(|j| self.get(j, i - 1).clone()).collect();
            // first column of the Toeplitz matrix:
            // [1, −a, −R·C, −R·A'C, −R·A'²C, …]
            let mut t = Vec::with_capacity(i + 1);
            t.push(one.clone());
            t.push(-&a);
            let mut vec_c = col.clone();
            for _ in 0..i - 1 {
                let mut dot = LogSeries::zero(&self.ctx);
                for j in 0..i - 1 {
                    dot += &(&row[j] * &vec_c[j]);
                }
                t.push(-&dot);
                // vec_c ← A'·vec_c
                let mut next = vec![LogSeries::zero(&self.ctx); i - 1];
                for (r, item) in next.iter_mut().enumerate() {
                    for (k, vk) in vec_c.iter().enumerate() {
                        *item += &(self.get(r, k) * vk);
                    }
                }
                vec_c = next;
            }
            // C_i = T · C_{i−1}, T lower-triangular Toeplitz with column t
            let mut next_c = vec![LogSeries::zero(&self.ctx); i + 1];
            for (r, item) in next_c.iter_mut().enumerate() {
                for (k, ck) in c.iter().enumerate() {
                    if r >= k && r - k < t.len() {
                        *item += &(&t[r - k] * ck);
                    }
                }
            }
            c = next_c;
        }
        c
    }

    /// Determinant via the characteristic polynomial: `(−1)^n c_n`.
    pub fn det_berkowitz(&self) -> LogSeries {
        let n = self.rows;
        let c = self.berkowitz_char_poly();
        let cn = c[n].clone();
        if n % 2 == 1 {
            -&cn
        } else {
            cn
        }
    }

    /// Exact inverse of a symbol-free series matrix whose constant term is
    /// invertible over the period Laurent ring.
    pub fn inverse(&self) -> Result<MatrixSeries, Error> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        if !self.is_sym_free() {
            return Err(Error::Unsupported(
                "series inverse requires a symbol-free matrix".into(),
            ));
        }
        let n = self.rows;
        // constant-in-q part, possibly carrying period powers
        let q0 = vec![0u16; self.ctx.nvars];
        let sym0 = vec![0u16; self.ctx.nsyms];
        let a0 = MatrixSeries::from_fn(&self.ctx, n, n, |i, j| {
            LogSeries::from_scalar(&self.ctx, self.get(i, j).coeff(&sym0).coeff(&q0))
        });
        // invert a0 by Cayley–Hamilton: A(A^{n−1}+c₁A^{n−2}+…+c_{n−1}) = −c_n
        let cp = a0.berkowitz_char_poly();
        let det_coeff = cp[n]
            .as_qseries()
            .and_then(|s| s.constant_term().inv())
            .ok_or_else(|| Error::NotAUnit("constant term of matrix is singular".into()))?;
        let mut horner = MatrixSeries::identity(&self.ctx, n);
        for ci in cp.iter().take(n).skip(1) {
            horner = &(&a0 * &horner) + &MatrixSeries::identity(&self.ctx, n).scale_series(ci);
        }
        let a0_inv = horner.scale(&-&det_coeff);
        // Neumann series for the unit factor: self = a0 (I + E), E(0) = 0
        let e = &(&a0_inv * self) - &MatrixSeries::identity(&self.ctx, n);
        let mut acc = MatrixSeries::identity(&self.ctx, n);
        let mut pow = MatrixSeries::identity(&self.ctx, n);
        let mut sign = 1i64;
        for _ in 0..self.ctx.order {
            pow = &pow * &e;
            if pow.is_zero() {
                break;
            }
            sign = -sign;
            acc = &acc + &pow.scale(&CoeffScalar::from_int(sign));
        }
        Ok(&acc * &a0_inv)
    }
}

impl fmt::Debug for MatrixSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixSeries {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" | "))?;
        }
        write!(f, "]")
    }
}

impl Add for &MatrixSeries {
    type Output = MatrixSeries;
    fn add(self, rhs: &MatrixSeries) -> MatrixSeries {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        assert_eq!(self.ctx, rhs.ctx, "add: context mismatch");
        MatrixSeries::from_fn(&self.ctx, self.rows, self.cols, |i, j| {
            self.get(i, j) + rhs.get(i, j)
        })
    }
}

impl Sub for &MatrixSeries {
    type Output = MatrixSeries;
    fn sub(self, rhs: &MatrixSeries) -> MatrixSeries {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        assert_eq!(self.ctx, rhs.ctx, "sub: context mismatch");
        MatrixSeries::from_fn(&self.ctx, self.rows, self.cols, |i, j| {
            self.get(i, j) - rhs.get(i, j)
        })
    }
}

impl Neg for &MatrixSeries {
    type Output = MatrixSeries;
    fn neg(self) -> MatrixSeries {
        self.map(|e| -e)
    }
}

impl Mul for &MatrixSeries {
    type Output = MatrixSeries;
    fn mul(self, rhs: &MatrixSeries) -> MatrixSeries {
        assert_eq!(self.cols, rhs.rows, "mul: shape mismatch");
        assert_eq!(self.ctx, rhs.ctx, "mul: context mismatch");
        let mut out = MatrixSeries::zeros(&self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift3() -> ExactMat {
        ExactMat::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])
    }

    #[test]
    fn exp_log_round_trip_with_symbols() {
        // X = ℓ·N for the 3-dim shift: e^X has ℓ^k/k! on the k-th diagonal.
        let ctx = LogCtx::log_coords(1, 6);
        let n = MatrixSeries::from_exact(&ctx, &shift3());
        let x = n.scale_series(&LogSeries::sym(&ctx, 0));
        let e = x.exp_nilpotent().unwrap();
        assert_eq!(
            e.get(0, 2).coeff(&[2]),
            QSeries::constant(1, 6, CoeffScalar::from_ratio(1, 2))
        );
        assert_eq!(e.log_unipotent().unwrap(), x);
    }

    #[test]
    fn exp_rejects_non_nilpotent() {
        let ctx = LogCtx::pure_q(1, 4);
        let m = MatrixSeries::identity(&ctx, 2);
        assert!(m.exp_nilpotent().is_err());
    }

    #[test]
    fn berkowitz_matches_elimination_determinant() {
        let ctx = LogCtx::pure_q(1, 4);
        let a = ExactMat::from_int_rows(&[&[1, 2, 0], &[3, 1, 4], &[0, 2, 2]]);
        let d = MatrixSeries::from_exact(&ctx, &a).det_berkowitz();
        assert_eq!(
            d.as_qseries().unwrap().constant_term().scalar_part(),
            a.det()
        );
        // and on a 4×4 with complex entries
        let i = ExactScalar::i();
        let b = ExactMat::from_fn(4, 4, |r, c| {
            if r == c {
                ExactScalar::from_int(2)
            } else if r + 1 == c {
                i.clone()
            } else {
                ExactScalar::zero()
            }
        });
        let db = MatrixSeries::from_exact(&ctx, &b).det_berkowitz();
        assert_eq!(
            db.as_qseries().unwrap().constant_term().scalar_part(),
            b.det()
        );
    }

    #[test]
    fn det_of_series_matrix() {
        // det(I + q·N) = 1 for nilpotent N; det(diag(1+q, 1−q)) = 1 − q²
        let ctx = LogCtx::pure_q(1, 6);
        let q = QSeries::var(1, 6, 0);
        let n = MatrixSeries::from_exact(&ctx, &shift3());
        let u = &MatrixSeries::identity(&ctx, 3)
            + &n.scale_series(&LogSeries::from_q(&ctx, q.clone()));
        assert_eq!(u.det_berkowitz(), LogSeries::one(&ctx));

        let mut d = MatrixSeries::identity(&ctx, 2);
        d.set(0, 0, LogSeries::from_q(&ctx, &QSeries::one(1, 6) + &q));
        d.set(1, 1, LogSeries::from_q(&ctx, &QSeries::one(1, 6) - &q));
        let det = d.det_berkowitz().as_qseries().unwrap();
        assert_eq!(det.coeff(&[2]), CoeffScalar::from_int(-1));
        assert_eq!(det.coeff(&[0]), CoeffScalar::one());
        assert!(det.coeff(&[1]).is_zero());
    }

    #[test]
    fn series_inverse() {
        // M = I + q N + t q² E13 — constant term I, so invertible.
        let ctx = LogCtx::pure_q(1, 6);
        let q = QSeries::var(1, 6, 0);
        let mut m = &MatrixSeries::identity(&ctx, 3)
            + &MatrixSeries::from_exact(&ctx, &shift3())
                .scale_series(&LogSeries::from_q(&ctx, q.clone()));
        let e13 = ExactMat::from_int_rows(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
        m = &m + &MatrixSeries::from_exact(&ctx, &e13)
            .scale_series(&LogSeries::from_q(&ctx, (&q * &q).scale(&CoeffScalar::tau())));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, MatrixSeries::identity(&ctx, 3));
        assert_eq!(&inv * &m, MatrixSeries::identity(&ctx, 3));
    }

    #[test]
    fn inverse_with_period_scaled_constant_term() {
        // constant term diag(t, 1) — a unit over the Laurent ring
        let ctx = LogCtx::pure_q(1, 4);
        let q = QSeries::var(1, 4, 0);
        let mut m = MatrixSeries::zeros(&ctx, 2, 2);
        m.set(0, 0, LogSeries::from_scalar(&ctx, CoeffScalar::tau()));
        m.set(1, 1, LogSeries::one(&ctx));
        m.set(0, 1, LogSeries::from_q(&ctx, q));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, MatrixSeries::identity(&ctx, 2));

        // singular constant term is rejected
        let mut s = MatrixSeries::zeros(&ctx, 2, 2);
        s.set(0, 0, LogSeries::one(&ctx));
        assert!(s.inverse().is_err());
    }
}
