//! Exact rational helpers and rational turn angles.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number used for every payload in the library.
pub type Q = BigRational;

/// Builds the rational `num / den`.
///
/// Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer rational `n`.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn half() -> Q {
    q(1, 2)
}

/// Parses `"3"`, `"-3/2"` or a terminating decimal such as `"0.05"`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_val = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_digits).ok()?
        };
        let frac_val = BigInt::from_str(frac_part).ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let mag = Q::new(int_val * &scale + frac_val, scale);
        return Some(if negative { -mag } else { mag });
    }
    BigInt::from_str(s).ok().map(Q::from_integer)
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact `n`-th root of a nonnegative rational, if it is rational.
pub fn rational_root(x: &Q, n: u32) -> Option<Q> {
    if x.is_negative() || n == 0 {
        return None;
    }
    if n == 1 || x.is_zero() {
        return Some(x.clone());
    }
    let num = x.numer().magnitude().nth_root(n);
    let den = x.denom().magnitude().nth_root(n);
    let candidate = Q::new(
        BigInt::from_biguint(BigSign::Plus, num),
        BigInt::from_biguint(BigSign::Plus, den),
    );
    (num_traits::pow(candidate.clone(), n as usize) == *x).then_some(candidate)
}

/// Exact `x^e` for nonnegative `x` and rational exponent `e`, if the result is rational.
pub fn rational_pow(x: &Q, e: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return if e.is_positive() { Some(Q::zero()) } else { None };
    }
    let den = e.denom().to_u32()?;
    let num = e.numer().to_i64()?;
    let root = rational_root(x, den)?;
    let mag = num_traits::pow(root, num.unsigned_abs() as usize);
    Some(if num < 0 { mag.recip() } else { mag })
}

/// An angle measured in turns, normalized into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turn(Q);

impl Turn {
    pub fn new(t: Q) -> Self {
        let floor = t.floor();
        Turn(t - floor)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Turn::new(q(num, den))
    }

    pub fn zero() -> Self {
        Turn(Q::zero())
    }

    pub fn half() -> Self {
        Turn(half())
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Turn) -> Turn {
        Turn::new(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Turn) -> Turn {
        Turn::new(&self.0 - &other.0)
    }

    pub fn neg(&self) -> Turn {
        Turn::new(-&self.0)
    }

    pub fn antipode(&self) -> Turn {
        Turn::new(&self.0 + half())
    }

    /// Multiplies the angle by a rational factor (mod 1).
    pub fn scale(&self, k: &Q) -> Turn {
        Turn::new(&self.0 * k)
    }
}

impl fmt::Debug for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.0))
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-3/2"), Some(q(-3, 2)));
        assert_eq!(parse_rational("7"), Some(qi(7)));
        assert_eq!(parse_rational("0.05"), Some(q(1, 20)));
        assert_eq!(parse_rational("-2.5"), Some(q(-5, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn roots_and_powers() {
        assert_eq!(rational_root(&q(16, 81), 4), Some(q(2, 3)));
        assert_eq!(rational_root(&qi(2), 2), None);
        assert_eq!(rational_pow(&qi(9), &q(-1, 2)), Some(q(1, 3)));
        assert_eq!(rational_pow(&qi(16), &q(3, 4)), Some(qi(8)));
        assert_eq!(rational_pow(&qi(0), &q(1, 2)), Some(qi(0)));
    }

    #[test]
    fn turns_wrap() {
        assert_eq!(Turn::from_ratio(1, 3).add(&Turn::from_ratio(1, 2)), Turn::from_ratio(5, 6));
        assert_eq!(Turn::from_ratio(3, 4).add(&Turn::from_ratio(1, 2)), Turn::from_ratio(1, 4));
        assert_eq!(Turn::from_ratio(-1, 4), Turn::from_ratio(3, 4));
        assert_eq!(Turn::from_ratio(1, 4).antipode(), Turn::from_ratio(3, 4));
    }
}
