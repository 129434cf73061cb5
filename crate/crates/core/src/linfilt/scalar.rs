//! Exact Gaussian-rational scalars.
//!
//! The coefficient field for all subspace computations is ℚ(i): pairs of
//! arbitrary-precision rationals.  Conjugation flips the sign of the
//! imaginary part; everything else is plain field arithmetic.

use crate::error::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Build a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// An exact Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    pub re: Rat,
    pub im: Rat,
}

impl ExactScalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        ExactScalar { re, im }
    }

    pub fn zero() -> Self {
        ExactScalar::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        ExactScalar::new(Rat::one(), Rat::zero())
    }

    pub fn i() -> Self {
        ExactScalar::new(Rat::zero(), Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::new(Rat::from(BigInt::from(n)), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        ExactScalar::new(r, Rat::zero())
    }

    /// Rational `num/den` as a scalar.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar::from_rat(rat(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True when the imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        ExactScalar::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(ExactScalar::new(&self.re / &norm, -&self.im / &norm))
    }

    /// Evaluate to a complex double (numeric helpers only).
    pub fn to_f64(&self) -> num_complex::Complex64 {
        fn r2f(r: &Rat) -> f64 {
            let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
            let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            n / d
        }
        num_complex::Complex64::new(r2f(&self.re), r2f(&self.im))
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    /// Canonical form: `0`, `p/q`, `p/q*i`, or `p/q+r/s*i` (sign folded).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", fmt_rat(&self.im));
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", fmt_rat(&self.re), fmt_rat(&-self.im.clone()))
        } else {
            write!(f, "{}+{}*i", fmt_rat(&self.re), fmt_rat(&self.im))
        }
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Parse the canonical forms produced by `Display` (whitespace tolerated).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        // Split an interior +/- (not at position 0, not right after '/')
        // into real and imaginary terms.
        let bytes = s.as_bytes();
        let mut split = None;
        for idx in 1..bytes.len() {
            if (bytes[idx] == b'+' || bytes[idx] == b'-') && bytes[idx - 1] != b'/' {
                split = Some(idx);
            }
        }
        let parse_term = |t: &str| -> Result<(Rat, bool), Error> {
            let (body, imag) = if let Some(stripped) = t.strip_suffix("*i") {
                (stripped.to_string(), true)
            } else if let Some(stripped) = t.strip_suffix('i') {
                let b = if stripped.is_empty() || stripped == "-" || stripped == "+" {
                    format!("{stripped}1")
                } else {
                    stripped.to_string()
                };
                (b, true)
            } else {
                (t.to_string(), false)
            };
            let r = Rat::from_str(&body)
                .map_err(|e| Error::Parse(format!("bad rational {body:?}: {e}")))?;
            Ok((r, imag))
        };
        let terms: Vec<&str> = match split {
            Some(idx) => vec![&s[..idx], &s[idx..]],
            None => vec![&s[..]],
        };
        let mut re = Rat::zero();
        let mut im = Rat::zero();
        for term in terms {
            let t = term.strip_prefix('+').unwrap_or(term);
            let (val, imag) = parse_term(t)?;
            if imag {
                if !im.is_zero() {
                    return Err(Error::Parse(format!("two imaginary terms in {s:?}")));
                }
                im = val;
            } else {
                if !re.is_zero() {
                    return Err(Error::Parse(format!("two real terms in {s:?}")));
                }
                re = val;
            }
        }
        Ok(ExactScalar::new(re, im))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| ExactScalar::new(
    &a.re + &b.re,
    &a.im + &b.im
));
binop!(Sub, sub, |a, b| ExactScalar::new(
    &a.re - &b.re,
    &a.im - &b.im
));
binop!(Mul, mul, |a, b| ExactScalar::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re,
));

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = ExactScalar::new(rat(1, 2), rat(3, 4));
        let b = ExactScalar::new(rat(-2, 1), rat(1, 3));
        let prod = &a * &b;
        // (1/2 + 3/4 i)(-2 + 1/3 i) = -1 - 1/4 + (1/6 - 3/2) i
        assert_eq!(prod, ExactScalar::new(rat(-5, 4), rat(-4, 3)));
        let quot = &prod / &b;
        assert_eq!(quot, a);
        assert_eq!(&a * &a.inv().unwrap(), ExactScalar::one());
    }

    #[test]
    fn conjugation_is_involutive_and_multiplicative() {
        let a = ExactScalar::new(rat(2, 7), rat(-5, 3));
        let b = ExactScalar::new(rat(1, 1), rat(1, 2));
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn display_parse_round_trip() {
        let cases = [
            ExactScalar::zero(),
            ExactScalar::from_ratio(5, 6),
            ExactScalar::from_int(-3),
            ExactScalar::new(Rat::zero(), rat(-2, 3)),
            ExactScalar::new(rat(1, 2), rat(3, 4)),
            ExactScalar::new(rat(-1, 2), rat(-3, 4)),
        ];
        for c in &cases {
            let s = c.to_string();
            let back: ExactScalar = s.parse().unwrap();
            assert_eq!(&back, c, "round trip through {s:?}");
            // canonical: a second trip is byte-stable
            assert_eq!(back.to_string(), s);
        }
        assert_eq!("i".parse::<ExactScalar>().unwrap(), ExactScalar::i());
        assert_eq!(
            "1/2 - 3/4*i".parse::<ExactScalar>().unwrap(),
            ExactScalar::new(rat(1, 2), rat(-3, 4))
        );
        assert!("1/2+3".parse::<ExactScalar>().is_err());
        assert!("".parse::<ExactScalar>().is_err());
    }
}
