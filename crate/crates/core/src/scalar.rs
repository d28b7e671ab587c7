//! Scalar trait shared by the exact and floating-point paths.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// An ordered field element usable for curve and pencil computations.
///
/// Implemented for [`BigRational`] (exact) and for `f64`/`f32`.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + ToPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;

    fn ratio(p: i64, q: i64) -> Self {
        Self::from_int(p) / Self::from_int(q)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn midpoint(&self, other: &Self) -> Self {
        (self.clone() + other.clone()) / Self::from_int(2)
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    fn from_int(v: i64) -> Self {
        v as f32
    }
}

pub(crate) fn is_real<T: Scalar>(z: &Complex<T>) -> bool {
    z.im.is_zero()
}

pub(crate) fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Integer power with possibly negative exponent. `z` must be nonzero when `exp < 0`.
pub(crate) fn powi<T: Scalar>(z: &Complex<T>, exp: i64) -> Complex<T> {
    let mut base = if exp < 0 {
        Complex::<T>::one() / z.clone()
    } else {
        z.clone()
    };
    let mut e = exp.unsigned_abs();
    let mut acc = Complex::<T>::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        e >>= 1;
    }
    acc
}

/// Lexicographic order on `(re, im)`.
pub(crate) fn cmp_complex<T: Scalar>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then_with(|| a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

pub(crate) fn cmp_scalar<T: Scalar>(a: &T, b: &T) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
}

/// Parses `"p/q"`, `"-7"` or a finite decimal such as `"1.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let s = text.trim();
    let bad = || ParseError::Rational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() && digits.is_empty() {
            return Err(bad());
        }
        let whole = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse::<BigInt>().map_err(|_| bad())?
        };
        let frac_num = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse::<BigInt>().map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = BigRational::new(whole * &scale + frac_num, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::ratio(p, d)
    }

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), q(3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a/b", "1.2.3", "--1", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn negative_powers() {
        let z = Complex::new(q(0, 1), q(2, 1));
        let inv = powi(&z, -2);
        assert_eq!(inv * powi(&z, 2), Complex::one());
        assert_eq!(powi(&z, 0), Complex::one());
    }
}
