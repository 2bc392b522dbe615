//! Exact multivariate polynomials and rational functions over `Q`.
//!
//! Used as the coefficient field for symbolic identity checks: Euler
//! factors in `Q(α_1, β_1, …)` and jets over `Q[z, c]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

/// Polynomial in `nvars` variables; keys are exponent vectors compared lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn int(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(n.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: BigRational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if Zero::is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if Zero::is_zero(c) {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    fn mul_term(&self, e: &[u32], c: &BigRational) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(f, x)| (f.iter().zip(e).map(|(a, b)| a + b).collect(), x * c))
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (ld, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while let Some((lr, rc)) = rem.leading() {
            if lr.iter().zip(ld).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = lr.iter().zip(ld).map(|(a, b)| a - b).collect();
            let c = rc / lc;
            rem = rem - d.mul_term(&e, &c);
            quo.add_term(e, c);
        }
        Some(quo)
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * BigRational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes polynomials (in a possibly different number of variables) for each variable.
    pub fn substitute(&self, values: &[MPoly]) -> MPoly {
        let n = values.first().map_or(self.nvars, |v| v.nvars);
        let mut acc = MPoly::zero(n);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(n, c.clone());
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    t = t * v.pow(k as u64);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Rational content made positive-leading: `self = content · primitive`.
    fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut g = BigRational::new(num, den);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        g
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = names.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string());
                    if k == 1 { n } else { format!("{n}^{k}") }
                })
                .collect();
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono.join("*")
            } else if *c == -BigRational::one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("{c}*{}", mono.join("*"))
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl Add for MPoly {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for MPoly {
    type Output = Self;
    fn neg(self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for MPoly {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for MPoly {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero(self.nvars.max(rhs.nvars));
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                out.add_term(e.iter().zip(f).map(|(a, b)| a + b).collect(), c * d);
            }
        }
        out
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        Self::int(self.nvars, 1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::int(self.nvars, n)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Self::constant(self.nvars, BigRational::from_integer(n.clone()))
    }
}

/// Quotient `num / den` of polynomials. Equality is by cross-multiplication,
/// so no multivariate gcd is ever needed.
#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Degenerate("rational function with zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars;
        Self { num: p, den: MPoly::int(n, 1) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, i))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn int(nvars: usize, n: i64) -> Self {
        Self::from_poly(MPoly::int(nvars, n))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            let n = den.nvars;
            return Self { num: MPoly::zero(n), den: MPoly::int(n, 1) };
        }
        if let Some(q) = num.div_exact(&den) {
            let n = den.nvars;
            return Self { num: q, den: MPoly::int(n, 1) };
        }
        let c = den.content();
        let inv = c.recip();
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    /// Evaluates at a rational point; errors when the denominator vanishes there.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if Zero::is_zero(&d) {
            return Err(Error::Degenerate("denominator vanishes at evaluation point".into()));
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn substitute(&self, values: &[RatFunc]) -> Result<RatFunc> {
        let eval = |p: &MPoly| -> RatFunc {
            let n = values.first().map_or(p.nvars, |v| v.num.nvars);
            let mut acc = RatFunc::int(n, 0);
            for (e, c) in &p.terms {
                let mut t = RatFunc::constant(n, c.clone());
                for (v, &k) in values.iter().zip(e) {
                    if k > 0 {
                        t = t * v.pow(k as u64);
                    }
                }
                acc = acc + t;
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            self.num.fmt_with(names)
        } else {
            format!("({}) / ({})", self.num.fmt_with(names), self.den.fmt_with(names))
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.clone() * other.den.clone() == other.num.clone() * self.den.clone()
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

impl Add for RatFunc {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self::normalized(self.num + rhs.num, self.den);
        }
        Self::normalized(self.num * rhs.den.clone() + rhs.num * self.den.clone(), self.den * rhs.den)
    }
}

impl Neg for RatFunc {
    type Output = Self;
    fn neg(self) -> Self {
        Self { num: -self.num, den: self.den }
    }
}

impl Sub for RatFunc {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::normalized(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Ring for RatFunc {
    fn zero_like(&self) -> Self {
        Self::int(self.num.nvars, 0)
    }
    fn one_like(&self) -> Self {
        Self::int(self.num.nvars, 1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::int(self.num.nvars, n)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Self::constant(self.num.nvars, BigRational::from_integer(n.clone()))
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::Degenerate("inverse of the zero rational function".into()));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }
}

/// Solves `A x = b` over `Q[x_1, …]` by fraction-free (Bareiss) elimination.
///
/// Returns `(numerators, det)` with `x_i = numerators[i] / det`.
pub fn solve_bareiss(a: &[Vec<MPoly>], b: &[MPoly]) -> Result<(Vec<MPoly>, MPoly)> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Domain("solve needs a square system".into()));
    }
    let nv = b.first().map_or(0, |x| x.nvars);
    let mut m: Vec<Vec<MPoly>> = a.iter().zip(b).map(|(r, x)| {
        let mut row = r.clone();
        row.push(x.clone());
        row
    }).collect();
    let mut prev = MPoly::int(nv, 1);
    for k in 0..n {
        let piv = (k..n).find(|&r| !m[r][k].is_zero()).ok_or_else(|| Error::Degenerate("singular symbolic system".into()))?;
        if piv != k {
            m.swap(piv, k);
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = m[k][k].clone() * m[i][j].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v.div_exact(&prev).ok_or_else(|| Error::Identity("Bareiss step not exact".into()))?;
            }
            m[i][k] = MPoly::zero(nv);
        }
        prev = m[k][k].clone();
    }
    // Back substitution keeping the common denominator det = m[n-1][n-1].
    let det = m[n - 1][n - 1].clone();
    let mut x = vec![MPoly::zero(nv); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone() * det.clone();
        for j in i + 1..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc.div_exact(&m[i][i]).ok_or_else(|| Error::Identity("back substitution not exact".into()))?;
    }
    Ok((x, det))
}

impl crate::ring::IntDivisible for MPoly {
    fn div_int(&self, n: &num_bigint::BigInt) -> Result<Self> {
        if Zero::is_zero(n) {
            return Err(crate::Error::Degenerate("division by zero".into()));
        }
        Ok(self.scale(&BigRational::new(1.into(), n.clone())))
    }
}
