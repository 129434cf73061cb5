//! Dense matrices over the Gaussian rationals.
//!
//! Everything here is exact: elimination, kernels, determinants and inverses
//! run over ℚ(i) with no rounding.  Matrices are small (ambient dimensions in
//! the tens), so simple Gauss–Jordan with full normalization is the right
//! tool and also produces canonical echelon forms.

use super::scalar::ExactScalar;
use crate::error::Error;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A dense `rows × cols` matrix over ℚ(i), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<ExactScalar>,
}

impl ExactMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMat {
            rows,
            cols,
            data: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut m = ExactMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from integer entries (test convenience).
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        ExactMat::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&n| ExactScalar::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn from_cols(cols: Vec<Vec<ExactScalar>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        ExactMat::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    /// Column vector from a slice.
    pub fn col_vec(entries: &[ExactScalar]) -> Self {
        ExactMat::from_cols(vec![entries.to_vec()])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        ExactMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        ExactMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        ExactMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &ExactMat) -> Self {
        assert_eq!(self.rows, other.rows, "hcat: row mismatch");
        ExactMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// The submatrix of the listed columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        ExactMat::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    /// Matrix power (panics unless square).
    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = ExactMat::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Commutator `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &ExactMat) -> Self {
        &(self * other) - &(other * self)
    }

    /// `Σ_m self^m / m!`, summed exactly; fails if the matrix is not
    /// nilpotent (powers must vanish by index `rows`).
    pub fn exp_nilpotent(&self) -> Result<ExactMat, Error> {
        assert!(self.is_square(), "exp of a non-square matrix");
        let mut acc = ExactMat::identity(self.rows);
        let mut pow = ExactMat::identity(self.rows);
        let mut fact = ExactScalar::one();
        for m in 1..=self.rows {
            pow = &pow * self;
            if pow.is_zero() {
                return Ok(acc);
            }
            fact = &fact * &ExactScalar::from_int(m as i64);
            let inv = fact.inv().expect("factorial is nonzero");
            acc = &acc + &pow.scale(&inv);
        }
        Err(Error::NotNilpotent(format!(
            "power {} of a {0}×{0} matrix is nonzero in exp",
            self.rows
        )))
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // find a pivot in this column at or below `row`
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for j in col..self.cols {
                        let v = self.get(r, j) - &(self.get(row, j) * &factor);
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, as the columns of the returned matrix.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = ExactMat::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            out.set(f, j, ExactScalar::one());
            for (i, &p) in pivots.iter().enumerate() {
                out.set(p, j, -r.get(i, f));
            }
        }
        out
    }

    /// Solve `self · X = rhs` for one particular solution (free variables 0).
    ///
    /// Returns `Err(Inconsistent)` when the system has no solution.
    pub fn solve(&self, rhs: &ExactMat) -> Result<ExactMat, Error> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = self.hcat(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Inconsistent(
                "linear system has no solution".into(),
            ));
        }
        let mut x = ExactMat::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(x)
    }

    /// Determinant by exact Gaussian elimination (panics unless square).
    pub fn det(&self) -> ExactScalar {
        assert!(self.is_square(), "det of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ExactScalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return ExactScalar::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for r in (col + 1)..n {
                if !m.get(r, col).is_zero() {
                    let factor = m.get(r, col) * &inv;
                    for j in col..n {
                        let v = m.get(r, j) - &(m.get(col, j) * &factor);
                        m.set(r, j, v);
                    }
                }
            }
        }
        det
    }

    /// Exact inverse; `Err(NotAUnit)` when singular.
    pub fn inverse(&self) -> Result<ExactMat, Error> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let aug = self.hcat(&ExactMat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::NotAUnit("matrix is singular".into()));
        }
        Ok(ExactMat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Trace (panics unless square).
    pub fn trace(&self) -> ExactScalar {
        assert!(self.is_square());
        let mut t = ExactScalar::zero();
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }
}

impl fmt::Debug for ExactMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &ExactMat {
    type Output = ExactMat;
    fn add(self, rhs: &ExactMat) -> ExactMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        ExactMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &ExactMat {
    type Output = ExactMat;
    fn sub(self, rhs: &ExactMat) -> ExactMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        ExactMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl Mul for &ExactMat {
    type Output = ExactMat;
    fn mul(self, rhs: &ExactMat) -> ExactMat {
        assert_eq!(self.cols, rhs.rows, "mul: shape mismatch");
        let mut out = ExactMat::zeros(self.rows, rhs.cols);
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

impl Neg for &ExactMat {
    type Output = ExactMat;
    fn neg(self) -> ExactMat {
        ExactMat::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_rank_kernel() {
        let m = ExactMat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols, 1);
        // every kernel column is annihilated
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let a = ExactMat::from_int_rows(&[&[2, 1], &[1, 1]]);
        let b = ExactMat::from_int_rows(&[&[3], &[2]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(&a * &x, b);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, ExactMat::identity(2));

        let singular = ExactMat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_err());
        let no_sol = singular.solve(&ExactMat::from_int_rows(&[&[1], &[0]]));
        assert!(no_sol.is_err());
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let a = ExactMat::from_int_rows(&[&[1, 2, 0], &[3, 1, 4], &[0, 2, 2]]);
        // 1·(2−8) − 2·(6−0) + 0 = −18
        assert_eq!(a.det(), ExactScalar::from_int(-18));
        assert_eq!(ExactMat::identity(4).det(), ExactScalar::one());
        let singular = ExactMat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(singular.det().is_zero());
    }

    #[test]
    fn complex_entries() {
        let i = ExactScalar::i();
        let m = ExactMat::from_rows(vec![
            vec![ExactScalar::one(), i.clone()],
            vec![-i.clone(), ExactScalar::one()],
        ]);
        // det = 1 − (i)(−i) = 1 − 1 = 0
        assert!(m.det().is_zero());
        assert_eq!(m.conj().transpose(), m);
    }
}
