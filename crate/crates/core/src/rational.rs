//! Arbitrary-precision rationals and the few helpers the rest of the crate needs
//! on top of `num-rational`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number. Always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact square root, if `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Rational approximation of `sqrt(q)` from below, accurate to `10^-digits`.
pub fn sqrt_approx(q: &Rational, digits: u32) -> Rational {
    assert!(!q.is_negative(), "square root of a negative rational");
    let scale = BigInt::from(10u32).pow(digits);
    // sqrt(n/d) = sqrt(n*d)/d
    let nd = q.numer() * q.denom() * &scale * &scale;
    Rational::new(nd.sqrt(), q.denom() * scale)
}

/// Decimal value of a rational.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Decimal value of the square root of a nonnegative rational.
pub fn sqrt_f64(q: &Rational) -> f64 {
    to_f64(q).sqrt()
}

/// Least common multiple of the denominators of `values`.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Decides `|sqrt(a) - sqrt(b)| <= sqrt(c)` exactly for nonnegative rationals.
pub fn sqrt_difference_le(a: &Rational, b: &Rational, c: &Rational) -> bool {
    if a == b {
        return true;
    }
    // (sqrt a - sqrt b)^2 = a + b - 2 sqrt(ab) <= c  <=>  a + b - c <= 2 sqrt(ab)
    let lhs = a + b - c;
    if !lhs.is_positive() {
        return true;
    }
    &lhs * &lhs <= int(4) * a * b
}

/// Error returned by [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational `{}`: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `p`, `-p` or `p/q`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    let parse_int = |t: &str| -> Result<BigInt, ParseRationalError> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected an integer or p/q"));
        }
        BigInt::from_str(t).map_err(|_| err("expected an integer or p/q"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("3/-6").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(ratio(6, -4).to_string(), "-3/2");
        assert_eq!(int(7).to_string(), "7");
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(rational_sqrt(&ratio(9, 16)), Some(ratio(3, 4)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&ratio(-1, 4)), None);
        let approx = sqrt_approx(&int(2), 12);
        assert!((to_f64(&approx) - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn sqrt_difference_decisions() {
        // |1 - sqrt(1/2)| ~ 0.2929 <= sqrt(1/4) = 0.5
        assert!(sqrt_difference_le(&int(1), &ratio(1, 2), &ratio(1, 4)));
        // |1 - 0| = 1 > sqrt(1/2)
        assert!(!sqrt_difference_le(&int(1), &int(0), &ratio(1, 2)));
        // boundary: |sqrt 4 - sqrt 1| = 1 = sqrt 1
        assert!(sqrt_difference_le(&int(4), &int(1), &int(1)));
    }
}
