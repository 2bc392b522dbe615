//! Truncated multivariate power series over `Z_p`: the model of `Λ_F`,
//! `Λ_F^G` and their specializations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{domain, Error, Result};
use crate::padic::scalar::{PadicContext, PadicRing, PadicScalar};
use crate::ring::{binomial, Ring};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// A power series in `nvars` variables truncated at total degree `cap`.
///
/// `exact` records that no term of degree above `cap` was ever dropped, i.e.
/// the stored polynomial *is* the series. Products of two exact series that
/// would need terms above the cap are rejected by [`IwasawaSeries::checked_mul`];
/// the `*` operator truncates instead and clears the flag.
#[derive(Clone)]
pub struct IwasawaSeries {
    ctx: PadicContext,
    nvars: usize,
    cap: u32,
    terms: BTreeMap<Monomial, PadicScalar>,
    exact: bool,
}

impl IwasawaSeries {
    pub fn zero(ctx: PadicContext, nvars: usize, cap: u32) -> Self {
        Self { ctx, nvars, cap, terms: BTreeMap::new(), exact: true }
    }

    pub fn constant(ctx: PadicContext, nvars: usize, cap: u32, c: PadicScalar) -> Self {
        let mut s = Self::zero(ctx, nvars, cap);
        s.insert(vec![0; nvars], c);
        s
    }

    /// The variable `T_i` (0-based).
    pub fn variable(ctx: PadicContext, nvars: usize, cap: u32, i: usize) -> Self {
        assert!(i < nvars);
        let mut s = Self::zero(ctx, nvars, cap);
        let mut m = vec![0; nvars];
        m[i] = 1;
        s.insert(m, ctx.one());
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, PadicScalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &[u32]) -> PadicScalar {
        self.terms.get(m).copied().unwrap_or_else(|| self.ctx.zero())
    }

    fn insert(&mut self, m: Monomial, c: PadicScalar) {
        let deg: u32 = m.iter().sum();
        if deg > self.cap {
            if !c.is_zero() {
                self.exact = false;
            }
            return;
        }
        // Zero coefficients stay out of the map so equality is structural.
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
        }
    }

    fn check_shape(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "series in different variable sets");
        assert_eq!(self.cap, other.cap, "series with different truncation caps");
    }

    /// Lowest coefficient precision, or the context precision for the zero series.
    pub fn precision(&self) -> u32 {
        self.terms.values().map(|c| c.precision()).min().unwrap_or(self.ctx.prec)
    }

    pub fn constant_term(&self) -> PadicScalar {
        self.coeff(&vec![0; self.nvars])
    }

    /// Product that refuses to drop terms of exact operands.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let out = self.mul_impl(other);
        if self.exact && other.exact && !out.exact {
            return Err(Error::Overflow(format!(
                "product of exact series exceeds total degree {}",
                self.cap
            )));
        }
        Ok(out)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.check_shape(other);
        let mut out = Self::zero(self.ctx, self.nvars, self.cap);
        out.exact = self.exact && other.exact;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.insert(m, *ca * *cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        let mut out = Self::zero(self.ctx, self.nvars, self.cap);
        out.exact = self.exact;
        for (m, v) in &self.terms {
            out.insert(m.clone(), *v * *c);
        }
        out
    }

    /// `(1 + T_i)^γ` by the binomial series `Σ C(γ, n) T_i^n`.
    ///
    /// `C(γ, n)` is computed from an integer lift of `γ`; the lift ambiguity
    /// costs `⌊log_p n⌋` digits, so coefficients up to degree `cap` are known to
    /// `prec(γ) − ⌊log_p cap⌋` digits.
    pub fn binomial_power(ctx: PadicContext, nvars: usize, cap: u32, i: usize, gamma: &PadicScalar) -> Self {
        let lift = gamma.to_bigint();
        let loss = log_floor(cap.max(1) as u64, ctx.p);
        let prec = gamma.precision().saturating_sub(loss).max(1);
        let mut out = Self::zero(ctx, nvars, cap);
        let mut exact = true;
        let mut num = BigInt::from(1);
        let mut den = BigInt::from(1);
        for n in 0..=cap as i64 {
            if n > 0 {
                num *= &lift - BigInt::from(n - 1);
                den *= BigInt::from(n);
            }
            let c = &num / &den;
            let mut m = vec![0; nvars];
            m[i] = n as u32;
            out.insert(m, PadicScalar::from_bigint(ctx.p, prec, &c));
        }
        // The series terminates only when the lift is a small non-negative integer.
        if lift < BigInt::from(0) || lift > BigInt::from(cap) {
            exact = false;
        }
        out.exact = exact;
        out
    }

    /// Substitutes `T_j ↦ subs[j]`, each substitution having zero constant term.
    pub fn compose(&self, subs: &[IwasawaSeries]) -> Result<Self> {
        if subs.len() != self.nvars {
            return domain(format!("need {} substitutions, got {}", self.nvars, subs.len()));
        }
        let target = &subs[0];
        for s in subs {
            if !s.constant_term().is_zero() {
                return domain("substituted series must have zero constant term");
            }
            if s.nvars != target.nvars || s.cap != target.cap {
                return domain("substitutions must share a variable set and cap");
            }
        }
        let one = Self::constant(self.ctx, target.nvars, target.cap, self.ctx.one());
        let mut out = Self::zero(self.ctx, target.nvars, target.cap);
        out.exact = self.exact && subs.iter().all(|s| s.exact);
        // Powers are cached per variable; degree beyond the cap contributes nothing
        // because every substitution has order at least 1.
        let mut powers: Vec<Vec<Self>> = subs.iter().map(|_| vec![one.clone()]).collect();
        for (m, c) in &self.terms {
            let mut term = one.clone();
            for (j, e) in m.iter().enumerate() {
                while powers[j].len() <= *e as usize {
                    let next = powers[j].last().unwrap().mul_impl(&subs[j]);
                    powers[j].push(next);
                }
                term = term.mul_impl(&powers[j][*e as usize]);
            }
            out = out + term.scale(c);
        }
        if !out.exact && self.exact && subs.iter().all(|s| s.exact) {
            // Dropped terms from exact inputs are a genuine overflow.
            return Err(Error::Overflow("composition exceeds the truncation cap".into()));
        }
        Ok(out)
    }

    /// Evaluates at a point with every coordinate of valuation `≥ 1`.
    ///
    /// For an inexact series the dropped tail has valuation at least
    /// `(cap + 1)·min v(λ_j)`, so the result is truncated to that precision.
    pub fn evaluate<R: PadicRing>(&self, point: &[R]) -> Result<R> {
        if point.len() != self.nvars {
            return domain(format!("need {} coordinates, got {}", self.nvars, point.len()));
        }
        let mut vmin = u32::MAX;
        for x in point {
            match x.valuation() {
                Some(0) => {
                    return domain("evaluation point must lie in the open unit polydisk (v(λ) ≥ 1)")
                }
                Some(v) => vmin = vmin.min(v),
                None => {}
            }
        }
        let sample = point[0].clone();
        let mut acc = sample.zero_like();
        for (m, c) in &self.terms {
            let mut t = sample.from_scalar(c);
            for (x, e) in point.iter().zip(m) {
                t = t * x.pow(*e as u64);
            }
            acc = acc + t;
        }
        if !self.exact && vmin != u32::MAX {
            let bound = (self.cap as u64 + 1).saturating_mul(vmin as u64).min(u32::MAX as u64) as u32;
            acc = acc.truncate(bound);
        }
        Ok(acc)
    }

    /// Coefficientwise comparison at the lower of the two precisions.
    pub fn eq_at(&self, other: &Self) -> bool {
        if self.nvars != other.nvars || self.cap != other.cap {
            return false;
        }
        let keys: std::collections::BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| self.coeff(k).eq_at(&other.coeff(k)))
    }

    /// Lowers every coefficient to at most `prec` digits.
    pub fn truncate_precision(&self, prec: u32) -> Self {
        let mut out = Self::zero(self.ctx, self.nvars, self.cap);
        out.exact = self.exact;
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.truncate(prec));
        }
        out
    }

    /// Re-embeds into a larger variable set, sending variable `j` to `map[j]`.
    pub fn relabel(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(self.ctx, nvars, self.cap);
        out.exact = self.exact;
        for (m, c) in &self.terms {
            let mut nm = vec![0; nvars];
            for (j, e) in m.iter().enumerate() {
                nm[map[j]] += e;
            }
            out.insert(nm, *c);
        }
        out
    }
}

/// `⌊log_p n⌋` for `n ≥ 1`.
pub fn log_floor(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n >= p {
        n /= p;
        k += 1;
    }
    k
}

impl PartialEq for IwasawaSeries {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.cap == other.cap && self.terms == other.terms
    }
}

impl fmt::Debug for IwasawaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if !self.exact {
            write!(f, " + O(deg {})", self.cap + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for IwasawaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(j, e)| if *e == 1 { format!("T{}", j + 1) } else { format!("T{}^{e}", j + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for IwasawaSeries {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check_shape(&rhs);
        let mut out = self.clone();
        out.exact = self.exact && rhs.exact;
        for (m, c) in rhs.terms {
            out.insert(m, c);
        }
        out
    }
}

impl Neg for IwasawaSeries {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -*v;
        }
        out
    }
}

impl Sub for IwasawaSeries {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for IwasawaSeries {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl Ring for IwasawaSeries {
    fn zero_like(&self) -> Self {
        Self::zero(self.ctx, self.nvars, self.cap)
    }
    fn one_like(&self) -> Self {
        Self::constant(self.ctx, self.nvars, self.cap, self.ctx.one())
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::constant(self.ctx, self.nvars, self.cap, self.ctx.scalar(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `C(γ, n)` for integer `γ`, reduced into `Z/p^N`; exposed for tests.
pub fn binomial_scalar(ctx: PadicContext, gamma: i64, n: i64) -> PadicScalar {
    if gamma >= 0 {
        ctx.from_bigint(&binomial(gamma, n))
    } else {
        // C(−a, n) = (−1)^n C(a + n − 1, n)
        let b = binomial(-gamma + n - 1, n);
        ctx.from_bigint(&if n % 2 == 0 { b } else { -b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::new(5, 10).unwrap()
    }

    #[test]
    fn one_plus_t_to_integer_power_terminates() {
        let c = ctx();
        let s = IwasawaSeries::binomial_power(c, 1, 6, 0, &c.scalar(3));
        assert!(s.is_exact());
        let t = IwasawaSeries::variable(c, 1, 6, 0);
        let one = t.one_like();
        let cube = (one.clone() + t.clone()).pow(3);
        assert!(s.eq_at(&cube));
    }

    #[test]
    fn binomial_power_is_additive_in_exponent() {
        let c = ctx();
        let g = c.scalar(5 * 17 + 2);
        let h = c.scalar(-3);
        let a = IwasawaSeries::binomial_power(c, 1, 8, 0, &g);
        let b = IwasawaSeries::binomial_power(c, 1, 8, 0, &h);
        let ab = IwasawaSeries::binomial_power(c, 1, 8, 0, &(g + h));
        assert!((a * b).eq_at(&ab));
    }

    #[test]
    fn exact_overflow_is_rejected() {
        let c = ctx();
        let t = IwasawaSeries::variable(c, 2, 3, 0);
        let u = IwasawaSeries::variable(c, 2, 3, 1);
        let t2 = t.checked_mul(&t).unwrap();
        assert!(t2.checked_mul(&u).is_ok());
        assert!(t2.checked_mul(&t2).is_err());
    }

    #[test]
    fn evaluation_rejects_units() {
        let c = ctx();
        let t = IwasawaSeries::variable(c, 1, 4, 0);
        assert!(t.evaluate(&[c.scalar(2)]).is_err());
        assert_eq!(t.evaluate(&[c.scalar(10)]).unwrap(), c.scalar(10));
    }

    #[test]
    fn negative_binomials() {
        let c = ctx();
        assert_eq!(binomial_scalar(c, -2, 3), c.scalar(-4));
    }
}
