//! Elements of `Z_p / p^N`, the fixed-absolute-precision model of `Z_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::ring::Ring;

/// A prime and a working precision. Every scalar built from a context lives
/// in `Z/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicContext {
    pub p: u64,
    pub prec: u32,
}

impl PadicContext {
    /// Checks that `p` is an odd prime and `p^prec` fits in 63 bits.
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return domain(format!("p = {p} must be an odd prime"));
        }
        if prec == 0 {
            return domain("precision must be positive");
        }
        checked_modulus(p, prec)?;
        Ok(Self { p, prec })
    }

    pub fn scalar(&self, n: i64) -> PadicScalar {
        PadicScalar::from_i64(self.p, self.prec, n)
    }

    pub fn zero(&self) -> PadicScalar {
        self.scalar(0)
    }

    pub fn one(&self) -> PadicScalar {
        self.scalar(1)
    }

    pub fn from_bigint(&self, n: &BigInt) -> PadicScalar {
        PadicScalar::from_bigint(self.p, self.prec, n)
    }

    pub fn modulus(&self) -> u64 {
        checked_modulus(self.p, self.prec).expect("validated at construction")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_modulus(p: u64, prec: u32) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..prec {
        m = m
            .checked_mul(p)
            .filter(|m| *m < (1u64 << 63))
            .ok_or_else(|| Error::Precision(format!("{p}^{prec} exceeds the 63-bit digit store")))?;
    }
    Ok(m)
}

fn pow_u64(p: u64, e: u32) -> u64 {
    (0..e).fold(1u64, |m, _| m * p)
}

/// `p`-adic valuation of a nonzero integer.
pub fn val_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// An element of `Z/p^N` carrying its own precision `N`.
///
/// Equality is strict: two scalars are equal only when they share the prime,
/// the precision and the residue. Use [`PadicScalar::eq_at`] to compare at a
/// common lower precision.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: u64,
    prec: u32,
    modulus: u64,
    value: u64,
}

impl PadicScalar {
    pub fn from_u64(p: u64, prec: u32, n: u64) -> Self {
        let modulus = pow_u64(p, prec);
        Self { p, prec, modulus, value: n % modulus }
    }

    pub fn from_i64(p: u64, prec: u32, n: i64) -> Self {
        let modulus = pow_u64(p, prec);
        let r = (n as i128).rem_euclid(modulus as i128) as u64;
        Self { p, prec, modulus, value: r }
    }

    pub fn from_bigint(p: u64, prec: u32, n: &BigInt) -> Self {
        let modulus = pow_u64(p, prec);
        let r = n.mod_floor(&BigInt::from(modulus));
        Self { p, prec, modulus, value: r.to_u64().expect("reduced residue fits") }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn context(&self) -> PadicContext {
        PadicContext { p: self.p, prec: self.prec }
    }

    /// Canonical representative in `[0, p^N)`.
    pub fn residue(&self) -> u64 {
        self.value
    }

    /// Representative in `(-p^N/2, p^N/2]`, handy for printing small negatives.
    pub fn symmetric_residue(&self) -> i64 {
        if self.value > self.modulus / 2 {
            self.value as i64 - self.modulus as i64
        } else {
            self.value as i64
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.value)
    }

    /// Valuation, or `None` when the element is zero at its precision.
    pub fn valuation(&self) -> Option<u32> {
        if self.value == 0 {
            None
        } else {
            Some(val_u64(self.value, self.p))
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.p)
    }

    /// Reduces to a lower precision; asking for more digits is a precision error.
    pub fn with_precision(&self, prec: u32) -> Result<Self> {
        if prec > self.prec {
            return Err(Error::Precision(format!(
                "cannot raise precision from {} to {prec}",
                self.prec
            )));
        }
        Ok(Self::from_u64(self.p, prec, self.value))
    }

    /// Reduces to `min(prec, self.prec)`.
    pub fn truncate(&self, prec: u32) -> Self {
        Self::from_u64(self.p, prec.min(self.prec), self.value)
    }

    /// Equality after reducing both sides to the smaller precision.
    pub fn eq_at(&self, other: &Self) -> bool {
        let n = self.prec.min(other.prec);
        self.p == other.p && self.truncate(n).value == other.truncate(n).value
    }

    fn common(&self, other: &Self) -> (u32, u64) {
        assert_eq!(self.p, other.p, "mixing scalars over different primes");
        if self.prec <= other.prec {
            (self.prec, self.modulus)
        } else {
            (other.prec, other.modulus)
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Degenerate(format!(
                "{} is not a unit mod {}",
                self.value, self.p
            )));
        }
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Self {
            value: s0.rem_euclid(self.modulus as i128) as u64,
            ..*self
        })
    }

    /// Multiplies by `p^k`, keeping the precision.
    pub fn mul_p_power(&self, k: u32) -> Self {
        if k >= self.prec {
            return Self { value: 0, ..*self };
        }
        *self * Self::from_u64(self.p, self.prec, pow_u64(self.p, k))
    }

    /// Exact division by `p^k`; the result is known to `N - k` digits.
    pub fn divide_by_p_power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(*self);
        }
        if k >= self.prec {
            return Err(Error::Precision(format!(
                "dividing by p^{k} leaves no digits at precision {}",
                self.prec
            )));
        }
        if !self.value.is_multiple_of(pow_u64(self.p, k)) {
            return domain(format!("{} is not divisible by {}^{k}", self.value, self.p));
        }
        Ok(Self::from_u64(self.p, self.prec - k, self.value / pow_u64(self.p, k)))
    }

    /// Exact quotient `self / other`; loses `v(other)` digits of precision.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        let v = other
            .valuation()
            .ok_or_else(|| Error::Degenerate("division by zero p-adic scalar".into()))?;
        let (n, _) = self.common(other);
        let unit = other.truncate(n).divide_by_p_power(v)?;
        let num = self.truncate(n).divide_by_p_power(v)?;
        Ok(num * unit.truncate(num.prec).inverse()?)
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(Ring::pow(self, e as u64))
        } else {
            Ok(Ring::pow(&self.inverse()?, e.unsigned_abs()))
        }
    }

    /// `log(x)` for `x = 1 mod p`, by the Mercator series.
    pub fn log(&self) -> Result<Self> {
        if !((self.value + self.modulus - 1) % self.modulus).is_multiple_of(self.p) {
            return domain(format!("log needs x = 1 mod {}, got {}", self.p, self.value));
        }
        let n = self.prec;
        let y = (self.value + self.modulus - 1) % self.modulus / self.p;
        let y = Self::from_u64(self.p, n, y);
        let mut acc = Self::from_u64(self.p, n, 0);
        let mut ypow = Self::from_u64(self.p, n, 1);
        // Terms with k - v(k) >= N vanish; k > N + 64 guarantees that.
        for k in 1..=(n as u64 + 64) {
            ypow = ypow * y;
            let vk = val_u64(k, self.p);
            // x^k / k = p^(k - v(k)) * y^k / (k / p^v(k))
            let shift = k - vk as u64;
            if shift < n as u64 {
                let unit = Self::from_u64(self.p, n, k / pow_u64(self.p, vk));
                let term = ypow.mul_p_power(shift as u32) * unit.inverse()?;
                acc = if k % 2 == 1 { acc + term } else { acc - term };
            }
        }
        Ok(acc)
    }

    /// `exp(x)` for `v(x) >= 1`.
    pub fn exp(&self) -> Result<Self> {
        if !self.value.is_multiple_of(self.p) {
            return domain(format!("exp needs p | x, got {}", self.value));
        }
        let n = self.prec;
        let y = Self::from_u64(self.p, n, self.value / self.p);
        let mut acc = Self::from_u64(self.p, n, 1);
        let mut ypow = Self::from_u64(self.p, n, 1);
        let mut fact_unit = Self::from_u64(self.p, n, 1);
        let mut fact_val: u64 = 0;
        let mut k: u64 = 1;
        loop {
            ypow = ypow * y;
            let vk = val_u64(k, self.p);
            fact_val += vk as u64;
            fact_unit = fact_unit * Self::from_u64(self.p, n, k / pow_u64(self.p, vk));
            let shift = k - fact_val;
            if shift >= n as u64 {
                // shift grows at least like k(p-2)/(p-1); once past N it stays past.
                break;
            }
            acc = acc + ypow.mul_p_power(shift as u32) * fact_unit.inverse()?;
            k += 1;
        }
        Ok(acc)
    }

    /// Teichmüller representative: the unique `(p-1)`-st root of unity
    /// congruent to `self` mod `p` (zero for non-units).
    pub fn teichmuller(&self) -> Self {
        if !self.is_unit() {
            return Self { value: 0, ..*self };
        }
        let mut x = *self;
        for _ in 0..self.prec {
            x = Ring::pow(&x, self.p);
        }
        x
    }

    /// The principal unit `x / ω(x)`.
    pub fn principal_part(&self) -> Result<Self> {
        Ok(*self * self.teichmuller().inverse()?)
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.value, self.p, self.prec)
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for PadicScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (prec, modulus) = self.common(&rhs);
        let v = ((self.value % modulus) as u128 + (rhs.value % modulus) as u128) % modulus as u128;
        Self { p: self.p, prec, modulus, value: v as u64 }
    }
}

impl Sub for PadicScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PadicScalar {
    type Output = Self;
    fn neg(self) -> Self {
        let value = if self.value == 0 { 0 } else { self.modulus - self.value };
        Self { value, ..self }
    }
}

impl Mul for PadicScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (prec, modulus) = self.common(&rhs);
        let v = (self.value as u128 * rhs.value as u128) % modulus as u128;
        Self { p: self.p, prec, modulus, value: v as u64 }
    }
}

impl Ring for PadicScalar {
    fn zero_like(&self) -> Self {
        Self { value: 0, ..*self }
    }
    fn one_like(&self) -> Self {
        Self::from_u64(self.p, self.prec, 1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_i64(self.p, self.prec, n)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Self::from_bigint(self.p, self.prec, n)
    }
}

/// Rings over `Z_p` whose elements have a valuation and a precision.
pub trait PadicRing: Ring {
    fn prime(&self) -> u64;
    fn precision(&self) -> u32;
    /// Minimal valuation, `None` if zero at working precision.
    fn valuation(&self) -> Option<u32>;
    fn from_scalar(&self, s: &PadicScalar) -> Self;
    fn try_inverse(&self) -> Result<Self>;
    /// Exact division by `p^k`, lowering precision by `k`.
    fn divide_by_p_power(&self, k: u32) -> Result<Self>;
    fn truncate(&self, prec: u32) -> Self;

    fn eq_at(&self, other: &Self) -> bool {
        let n = self.precision().min(other.precision());
        self.truncate(n) == other.truncate(n)
    }
}

impl PadicRing for PadicScalar {
    fn prime(&self) -> u64 {
        self.p
    }
    fn precision(&self) -> u32 {
        self.prec
    }
    fn valuation(&self) -> Option<u32> {
        PadicScalar::valuation(self)
    }
    fn from_scalar(&self, s: &PadicScalar) -> Self {
        s.truncate(self.prec)
    }
    fn try_inverse(&self) -> Result<Self> {
        self.inverse()
    }
    fn divide_by_p_power(&self, k: u32) -> Result<Self> {
        PadicScalar::divide_by_p_power(self, k)
    }
    fn truncate(&self, prec: u32) -> Self {
        PadicScalar::truncate(self, prec)
    }
}

/// Parses a decimal integer and reduces it into `Z/p^N`.
pub fn parse_scalar(ctx: &PadicContext, text: &str) -> Result<PadicScalar> {
    let n: BigInt = text
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("not an integer: {text:?}")))?;
    Ok(ctx.from_bigint(&n))
}

/// `p`-adic valuation of a big integer, `None` for zero.
pub fn bigint_valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, n: u32) -> PadicContext {
        PadicContext::new(p, n).unwrap()
    }

    #[test]
    fn context_rejects_even_and_oversized() {
        assert!(PadicContext::new(2, 5).is_err());
        assert!(PadicContext::new(9, 5).is_err());
        assert!(PadicContext::new(5, 40).is_err());
        assert!(PadicContext::new(5, 20).is_ok());
    }

    #[test]
    fn log_of_one_is_zero() {
        assert!(ctx(5, 10).one().log().unwrap().is_zero());
    }

    #[test]
    fn exp_log_roundtrip_small_case() {
        let c = ctx(5, 4);
        let x = c.scalar(6);
        assert_eq!(x.log().unwrap().exp().unwrap(), x);
    }

    #[test]
    fn log_is_additive_on_squares() {
        let c = ctx(7, 12);
        let x = c.scalar(8);
        let lhs = (x * x).log().unwrap();
        let rhs = x.log().unwrap() + x.log().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_rejects_non_principal() {
        assert!(ctx(5, 6).scalar(2).log().is_err());
    }

    #[test]
    fn inverse_and_division() {
        let c = ctx(3, 10);
        let a = c.scalar(7);
        assert_eq!(a * a.inverse().unwrap(), c.one());
        let b = c.scalar(18);
        let q = b.div_exact(&c.scalar(9)).unwrap();
        assert_eq!(q.precision(), 8);
        assert_eq!(q, PadicScalar::from_i64(3, 8, 2));
        assert!(c.scalar(9).inverse().is_err());
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        let c = ctx(7, 9);
        for a in 1..7 {
            let w = c.scalar(a).teichmuller();
            assert_eq!(Ring::pow(&w, 6), c.one());
            assert_eq!(w.residue() % 7, a as u64);
        }
    }

    #[test]
    fn precision_only_decreases() {
        let c = ctx(5, 6);
        let x = c.scalar(3);
        assert!(x.with_precision(7).is_err());
        let y = PadicScalar::from_i64(5, 3, 3);
        assert_eq!((x + y).precision(), 3);
    }
}
