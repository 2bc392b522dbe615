//! Minimal commutative-ring abstraction shared by matrices, jets and q-expansions.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring whose elements know enough about themselves to build
/// the constants `0`, `1` and integers in the same ambient ring (same prime,
/// same precision, same extension).
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        // Horner in base 2^32; the base is built as a square so every constant fits in i64.
        let (sign, digits) = n.to_u32_digits();
        let base = self.from_int_like(1 << 16).pow(2);
        let mut acc = self.zero_like();
        for d in digits.iter().rev() {
            acc = acc * base.clone() + self.from_int_like(*d as i64);
        }
        if sign == num_bigint::Sign::Minus {
            -acc
        } else {
            acc
        }
    }
}

/// Rings in which exact division by nonzero elements is available.
pub trait Field: Ring {
    fn inv(&self) -> crate::Result<Self>;

    fn div(&self, other: &Self) -> crate::Result<Self> {
        Ok(self.clone() * other.inv()?)
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl Field for BigRational {
    fn inv(&self) -> crate::Result<Self> {
        if Zero::is_zero(self) {
            return Err(crate::Error::Degenerate("division by zero rational".into()));
        }
        Ok(self.recip())
    }
}

/// Rings where division by a nonzero integer is available (it may fail, for
/// instance on a non-unit in a p-adic ring).
pub trait IntDivisible: Ring {
    fn div_int(&self, n: &BigInt) -> crate::Result<Self>;
}

impl IntDivisible for BigRational {
    fn div_int(&self, n: &BigInt) -> crate::Result<Self> {
        self.div(&BigRational::from_integer(n.clone()))
    }
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Exact binomial coefficient `C(n, k)` over the integers, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_match_pascal() {
        for n in 1..20 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn bigint_embedding_roundtrips_through_rationals() {
        let n: BigInt = "-123456789012345678901234567890".parse().unwrap();
        assert_eq!(rat(0).from_bigint_like(&n), BigRational::from_integer(n));
    }
}
