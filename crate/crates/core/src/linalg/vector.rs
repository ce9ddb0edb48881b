use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, lcm_denominators, ratio, Rational};

/// A vector of exact rationals in a finite ambient dimension.
///
/// The arithmetic operators panic on dimension mismatch; the named methods
/// return [`Error::DimensionMismatch`] instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector {
    coords: Vec<Rational>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyAmbient);
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "ambient dimension must be positive");
        Self {
            coords: vec![Rational::zero(); dim],
        }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[i] = int(1);
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&x| int(x)).collect()).expect("empty vector")
    }

    pub fn from_ratios(values: &[(i64, i64)]) -> Self {
        Self::new(values.iter().map(|&(n, d)| ratio(n, d)).collect()).expect("empty vector")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    pub fn inner(&self, other: &Self) -> Result<Rational> {
        other.check_dim(self.dim())?;
        Ok(self.dot(other))
    }

    pub(crate) fn dot(&self, other: &Self) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn dist_sq(&self, other: &Self) -> Result<Rational> {
        other.check_dim(self.dim())?;
        Ok((self - other).norm_sq())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self + factor * other`
    pub(crate) fn add_scaled(&mut self, factor: &Rational, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        if factor.is_zero() {
            return;
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a += factor * b;
            }
        }
    }

    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        other.check_dim(self.dim())?;
        Ok((self + other).scale(&ratio(1, 2)))
    }

    /// The primitive integer vector on the same ray: denominators cleared by
    /// their lcm, then divided by the gcd of the numerators.
    pub fn clear_denominators(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = Rational::from_integer(lcm_denominators(&self.coords));
        let scaled: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| (c * &lcm).to_integer())
            .collect();
        let gcd = scaled
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x))
            .abs();
        Self {
            coords: scaled
                .into_iter()
                .map(|x| Rational::from_integer(x / &gcd))
                .collect(),
        }
    }

    /// Copies `self` into a `target_dim` vector starting at coordinate `offset`.
    pub fn place(&self, target_dim: usize, offset: usize) -> Self {
        assert!(offset + self.dim() <= target_dim, "block out of range");
        let mut out = Self::zeros(target_dim);
        out.coords[offset..offset + self.dim()].clone_from_slice(&self.coords);
        out
    }

    /// Applies a signed coordinate permutation: coordinate `i` moves to
    /// `perm[i]`, multiplied by `signs[i]`.
    pub fn signed_permute(&self, perm: &[usize], signs: &[bool]) -> Self {
        let mut out = Self::zeros(self.dim());
        for (i, c) in self.coords.iter().enumerate() {
            out.coords[perm[i]] = if signs[i] { -c } else { c.clone() };
        }
        out
    }
}

/// Exact inner product.
pub fn inner(u: &RationalVector, v: &RationalVector) -> Result<Rational> {
    u.inner(v)
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        RationalVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        RationalVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_products() {
        let a = RationalVector::from_ints(&[1, 2]);
        let b = RationalVector::from_ints(&[3, 4]);
        assert_eq!(inner(&a, &b).unwrap(), int(11));
        assert_eq!(
            inner(&RationalVector::unit(2, 0), &RationalVector::unit(2, 1)).unwrap(),
            int(0)
        );
        let c = RationalVector::from_ratios(&[(1, 2), (1, 3)]);
        let d = RationalVector::from_ratios(&[(1, 3), (1, 2)]);
        // 1/6 + 1/6
        assert_eq!(inner(&c, &d).unwrap(), ratio(1, 3));
    }

    #[test]
    fn inner_rejects_mismatched_dims() {
        let a = RationalVector::from_ints(&[1, 2]);
        let b = RationalVector::from_ints(&[1, 2, 3]);
        assert_eq!(
            inner(&a, &b),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn empty_vector_rejected() {
        assert_eq!(RationalVector::new(vec![]), Err(Error::EmptyAmbient));
    }

    #[test]
    fn primitive_scaling() {
        let v = RationalVector::from_ratios(&[(-1, 2), (1, 2), (1, 1)]);
        assert_eq!(v.clear_denominators(), RationalVector::from_ints(&[-1, 1, 2]));
        let w = RationalVector::from_ints(&[4, -6, 0]);
        assert_eq!(w.clear_denominators(), RationalVector::from_ints(&[2, -3, 0]));
    }
}
