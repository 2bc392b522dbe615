//! q-expansions in the Serre-Tate coordinate at `𝔭_0`, written in the basis
//! `f_α = (1+q)^α`. Every operator is a monomial rule, so all identities hold
//! exactly on this model.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{domain, Error, Result};
use crate::padic::scalar::{PadicContext, PadicScalar};
use crate::padic::series::IwasawaSeries;
use crate::ring::{Field, IntDivisible, Ring};

/// Default exponent cap.
pub const DEFAULT_CAP: u64 = 10_000;

#[derive(Clone)]
pub struct QExpansion<R> {
    p: u64,
    cap: u64,
    terms: BTreeMap<u64, R>,
}

impl<R: Ring> QExpansion<R> {
    pub fn zero(p: u64, cap: u64) -> Self {
        Self { p, cap, terms: BTreeMap::new() }
    }

    /// `c·f_α`.
    pub fn monomial(p: u64, cap: u64, alpha: u64, c: R) -> Result<Self> {
        Self::from_terms(p, cap, [(alpha, c)])
    }

    pub fn from_terms(p: u64, cap: u64, terms: impl IntoIterator<Item = (u64, R)>) -> Result<Self> {
        let mut out = Self::zero(p, cap);
        for (a, c) in terms {
            if a > cap {
                return Err(Error::Overflow(format!("exponent {a} exceeds the cap {cap}")));
            }
            out.add_term(a, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, a: u64, c: R) {
        let next = match self.terms.remove(&a) {
            Some(old) => old + c,
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(a, next);
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<u64, R> {
        &self.terms
    }

    pub fn coeff(&self, alpha: u64) -> Option<&R> {
        self.terms.get(&alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All exponents prime to `p`.
    pub fn is_stable(&self) -> bool {
        self.terms.keys().all(|a| a % self.p != 0)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(u64, &R) -> S) -> QExpansion<S> {
        let mut out = QExpansion::zero(self.p, self.cap);
        for (a, c) in &self.terms {
            out.add_term(*a, f(*a, c));
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|_, x| x.clone() * c.clone())
    }

    /// `f_α·f_β = f_{α+β}`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.p, self.cap);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a + b > self.cap {
                    return Err(Error::Overflow(format!("product exponent {} exceeds the cap {}", a + b, self.cap)));
                }
                out.add_term(a + b, x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    /// `U_{𝔭_0}`: `f_α ↦ f_{α/p}` when `p | α`, else `0`.
    pub fn u_p0(&self) -> Self {
        let mut out = Self::zero(self.p, self.cap);
        for (a, c) in &self.terms {
            if a % self.p == 0 {
                out.add_term(a / self.p, c.clone());
            }
        }
        out
    }

    /// `V_{𝔭_0}`: `f_α ↦ f_{pα}`.
    pub fn v_p0(&self) -> Result<Self> {
        Self::from_terms(self.p, self.cap, self.terms.iter().map(|(a, c)| (a * self.p, c.clone())))
    }

    /// The Serre operator `Θ = (1+q) d/dq`: `f_α ↦ α f_α`.
    pub fn theta(&self) -> Self {
        self.map(|a, c| c.clone() * c.from_int_like(a as i64))
    }

    /// `(1 − V U) f`, which keeps exactly the exponents prime to `p`.
    pub fn depletion(&self) -> Result<Self> {
        Ok(self.clone() - self.u_p0().v_p0()?)
    }

    /// The ordinary projector `lim U^{n!}`; on this model only `f_0` survives.
    pub fn e_ord(&self) -> Self {
        let mut f = self.clone();
        loop {
            let next = f.u_p0();
            if next == f {
                return f;
            }
            f = next;
        }
    }

    /// `Θ^k` on a stable expansion, as `f_α ↦ α^k f_α`.
    pub fn theta_power(&self, k: u64) -> Result<Self> {
        self.require_stable()?;
        Ok(self.map(|a, c| c.clone() * Ring::pow(&c.from_int_like(a as i64), k)))
    }

    fn require_stable(&self) -> Result<()> {
        if self.is_stable() {
            Ok(())
        } else {
            domain("Θ-powers need a stable expansion (all exponents prime to p)")
        }
    }
}

/// Equal as formal sums; the cap is a bound, not part of the value.
impl<R: PartialEq> PartialEq for QExpansion<R> {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.terms == other.terms
    }
}

impl<R: Ring> std::ops::Add for QExpansion<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, c) in rhs.terms {
            self.add_term(a, c);
        }
        self
    }
}

impl<R: Ring> std::ops::Neg for QExpansion<R> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|_, c| -c.clone())
    }
}

impl<R: Ring> std::ops::Sub for QExpansion<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

/// Products past the cap panic; use [`QExpansion::checked_mul`] where the cap matters.
impl<R: Ring> std::ops::Mul for QExpansion<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("q-expansion product exceeds the exponent cap")
    }
}

/// Rational q-expansions as a ring, so they can carry jets. Constants are
/// multiples of `f_0`.
impl Ring for QExpansion<BigRational> {
    fn zero_like(&self) -> Self {
        Self::zero(self.p, self.cap)
    }
    fn one_like(&self) -> Self {
        self.from_int_like(1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        let mut out = Self::zero(self.p, self.cap);
        out.add_term(0, BigRational::from_integer(n.into()));
        out
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl IntDivisible for QExpansion<BigRational> {
    fn div_int(&self, n: &BigInt) -> Result<Self> {
        let inv = BigRational::from_integer(1.into()).div(&BigRational::from_integer(n.clone()))?;
        Ok(self.scale(&inv))
    }
}

impl<R: fmt::Debug> fmt::Debug for QExpansion<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(a, c)| (format!("f_{a}"), c))).finish()
    }
}

impl<R: fmt::Display> fmt::Display for QExpansion<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, c) in &self.terms {
            writeln!(f, "{a}:{c}")?;
        }
        Ok(())
    }
}

/// `(ω(α), ⟨α⟩)` for a unit `α`.
fn split_unit(ctx: PadicContext, alpha: u64) -> Result<(PadicScalar, PadicScalar)> {
    let a = ctx.scalar(alpha as i64);
    let w = a.teichmuller();
    Ok((w, a.div_exact(&w)?))
}

/// `α^s = ω(α)^{class}·exp(s·log⟨α⟩)` applied to each `f_α`. For an integer
/// `s` the class must be `s mod (p−1)` to recover `Θ^s`.
pub fn theta_power_padic(f: &QExpansion<PadicScalar>, s: &PadicScalar, class: u64) -> Result<QExpansion<PadicScalar>> {
    f.require_stable()?;
    let mut out = QExpansion::zero(f.p, f.cap);
    for (a, c) in &f.terms {
        let (w, unit) = split_unit(PadicContext::new(c.prime(), c.precision())?, *a)?;
        let power = Ring::pow(&w, class) * (*s * unit.log()?).exp()?;
        out.add_term(*a, *c * power);
    }
    Ok(out)
}

/// The universal exponent: `α^s = ω(α)^{class}·(1+T)^{log⟨α⟩/log(1+p)}` in
/// `Z_p[[T]]`; at `T = (1+p)^k − 1` this is `α^k` when `k ≡ class mod (p−1)`.
pub fn theta_power_universal(
    f: &QExpansion<PadicScalar>,
    class: u64,
    cap: u32,
) -> Result<QExpansion<IwasawaSeries>> {
    f.require_stable()?;
    let mut out = QExpansion::zero(f.p, f.cap);
    for (a, c) in &f.terms {
        let ctx = PadicContext::new(c.prime(), c.precision())?;
        let (w, unit) = split_unit(ctx, *a)?;
        let log_gen = ctx.scalar(1 + c.prime() as i64).log()?;
        let gamma = unit.log()?.div_exact(&log_gen)?;
        let series = IwasawaSeries::binomial_power(ctx, 1, cap, 0, &gamma).scale(&(*c * Ring::pow(&w, class)));
        out.add_term(*a, series);
    }
    Ok(out)
}

/// Specialises a universal expansion at `T = (1+p)^k − 1`.
pub fn specialize_universal(f: &QExpansion<IwasawaSeries>, ctx: PadicContext, k: u64) -> Result<QExpansion<PadicScalar>> {
    let t = Ring::pow(&ctx.scalar(1 + ctx.p as i64), k) - ctx.one();
    let mut out = QExpansion::zero(f.p, f.cap);
    for (a, c) in &f.terms {
        out.add_term(*a, c.evaluate(&[t])?);
    }
    Ok(out)
}

/// Parses the `alpha:coeff` line format; blank lines and `#` comments are skipped.
pub fn parse_lines<R: Ring>(
    text: &str,
    p: u64,
    cap: u64,
    parse_coeff: impl Fn(&str) -> Result<R>,
) -> Result<QExpansion<R>> {
    let mut terms = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (a, c) = line
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("line {}: expected alpha:coeff", no + 1)))?;
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("line {}: bad exponent {a:?}", no + 1)))?;
        let c = parse_coeff(c.trim()).map_err(|e| Error::Config(format!("line {}: {e}", no + 1)))?;
        terms.push((a, c));
    }
    QExpansion::from_terms(p, cap, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn mono(a: u64, c: i64) -> QExpansion<BigRational> {
        QExpansion::monomial(3, DEFAULT_CAP, a, rat(c)).unwrap()
    }

    #[test]
    fn monomial_rules() {
        assert_eq!(mono(6, 1).u_p0(), mono(2, 1));
        assert!(mono(5, 1).u_p0().is_zero());
        assert_eq!(mono(0, 1).u_p0(), mono(0, 1));
        assert_eq!(mono(2, 1).v_p0().unwrap(), mono(6, 1));
        assert_eq!(mono(0, 1).v_p0().unwrap(), mono(0, 1));
        assert_eq!(mono(4, 1).theta(), mono(4, 4));
        assert!(mono(0, 1).theta().is_zero());
        assert_eq!((mono(6, 1) + mono(5, 1)).depletion().unwrap(), mono(5, 1));
        assert!(mono(0, 1).depletion().unwrap().is_zero());
    }

    #[test]
    fn cap_overflow() {
        let f = QExpansion::monomial(3, 10, 4, rat(1)).unwrap();
        assert!(matches!(f.v_p0(), Err(Error::Overflow(_))));
        assert!(QExpansion::monomial(3, 10, 11, rat(1)).is_err());
    }

    #[test]
    fn integer_theta_powers() {
        assert_eq!(mono(4, 1).theta_power(2).unwrap(), mono(4, 16));
        assert_eq!(mono(4, 1).theta_power(0).unwrap(), mono(4, 1));
        assert!(mono(6, 1).theta_power(1).is_err());
    }

    #[test]
    fn padic_power_matches_integer_power() {
        let ctx = PadicContext::new(3, 12).unwrap();
        let f = QExpansion::monomial(3, DEFAULT_CAP, 4, ctx.one()).unwrap();
        let g = theta_power_padic(&f, &ctx.scalar(2), 0).unwrap();
        assert!(g.coeff(4).unwrap().eq_at(&ctx.scalar(16)));
        let h = theta_power_padic(&f, &ctx.zero(), 0).unwrap();
        assert!(h.coeff(4).unwrap().eq_at(&ctx.one()));
    }

    #[test]
    fn line_format() {
        let f = parse_lines("# f\n2:3\n5: -1\n", 3, 100, |s| s.parse::<i64>().map(rat).map_err(|_| Error::Config("coeff".into())))
            .unwrap();
        assert_eq!(f, mono(2, 3) + mono(5, -1));
        assert!(parse_lines::<BigRational>("x", 3, 100, |_| Ok(rat(0))).is_err());
    }
}
