//! Spherical test vectors at a place `v | p`: Petersson recursions,
//! `p`-stabilizations, adjoint eigenvectors, Euler-factor closed forms and the
//! interpolation factors `𝓔_𝔭`, `𝓔_{𝔭,1}`.
//!
//! Every routine is generic over a [`Field`], so the same code runs on exact
//! rationals and on the rational function field [`RatFunc`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::ring::{binomial, Field};
use crate::symbolic::RatFunc;
use crate::weights::{m_values, WeightTriple};

/// Local data of one spherical representation.
#[derive(Clone)]
pub struct SphericalData<R> {
    /// Eigenvalue of `T` on the spherical vector.
    pub a: R,
    /// `ε(ϖ)`.
    pub eps: R,
    /// `|ε(ϖ)|`.
    pub abs_eps: R,
    /// `q = #κ`.
    pub q: R,
    /// The involution used for hermitian symmetry.
    pub conj: fn(&R) -> R,
}

impl<R: Field> SphericalData<R> {
    /// Data determined by the Satake roots, with `|ε(ϖ)| = ε(ϖ) = q·αβ` and
    /// `a = α + β`. `conj` must send `α ↦ β` for these to be consistent.
    pub fn from_roots(alpha: &R, beta: &R, q: &R, conj: fn(&R) -> R) -> Self {
        let eps = q.clone() * alpha.clone() * beta.clone();
        Self { a: alpha.clone() + beta.clone(), abs_eps: eps.clone(), eps, q: q.clone(), conj }
    }

    fn q_inv(&self) -> Result<R> {
        self.q.inv()
    }

    /// Checks `ā·|ε(ϖ)|^{-1}·ε(ϖ) = a`.
    pub fn check_reality(&self) -> Result<bool> {
        Ok((self.conj)(&self.a) * self.abs_eps.inv()? * self.eps.clone() == self.a)
    }
}

/// `⟨v_n, v_m⟩ / ⟨v_0, v_0⟩`.
///
/// Uses `⟨v_n, v_m⟩ = |ε(ϖ)|^m ⟨v_{n−m}, v_0⟩` for `n ≥ m` (translating both
/// vectors by `diag(1, ϖ^m)`), the two-term recursion for `⟨v_n, v_0⟩`, and
/// hermitian symmetry for `n < m`.
pub fn petersson<R: Field>(n: u32, m: u32, d: &SphericalData<R>) -> Result<R> {
    if n < m {
        return Ok((d.conj)(&petersson(m, n, d)?));
    }
    let base = column(n - m, d)?;
    Ok(d.abs_eps.pow(m as u64) * base)
}

/// `⟨v_j, v_0⟩` via `⟨v_1, v_0⟩ = a/(1 + q^{-1})` and
/// `⟨v_{j+2}, v_0⟩ = a⟨v_{j+1}, v_0⟩ − q^{-1}ε(ϖ)⟨v_j, v_0⟩`.
fn column<R: Field>(j: u32, d: &SphericalData<R>) -> Result<R> {
    let one = d.a.one_like();
    let qi = d.q_inv()?;
    let mut prev = one.clone();
    if j == 0 {
        return Ok(prev);
    }
    let mut cur = d.a.div(&(one + qi.clone()))?;
    for _ in 1..j {
        let next = d.a.clone() * cur.clone() - qi.clone() * d.eps.clone() * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// A finite combination `Σ c_n v_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestVector<R> {
    coeffs: BTreeMap<u32, R>,
}

impl<R: Field> TestVector<R> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn basis(n: u32, one: &R) -> Self {
        let mut v = Self::zero();
        v.add_term(n, one.one_like());
        v
    }

    pub fn coeff(&self, n: u32) -> Option<&R> {
        self.coeffs.get(&n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &R)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, n: u32, c: R) {
        if c.is_zero() {
            return;
        }
        let s = match self.coeffs.remove(&n) {
            Some(x) => x + c,
            None => c,
        };
        if !s.is_zero() {
            self.coeffs.insert(n, s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        for (n, x) in &self.coeffs {
            out.add_term(*n, x.clone() * c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `U v_0 = a v_0 − q^{-1} v_1` and `U v_n = ε(ϖ) v_{n−1}` for `n ≥ 1`.
    pub fn apply_u(&self, d: &SphericalData<R>) -> Result<Self> {
        let mut out = Self::zero();
        for (n, c) in &self.coeffs {
            if *n == 0 {
                out.add_term(0, c.clone() * d.a.clone());
                out.add_term(1, -(c.clone() * d.q_inv()?));
            } else {
                out.add_term(n - 1, c.clone() * d.eps.clone());
            }
        }
        Ok(out)
    }

    /// `V v_n = ε(ϖ)^{-1} v_{n+1}`.
    pub fn apply_v(&self, d: &SphericalData<R>) -> Result<Self> {
        let e = d.eps.inv()?;
        let mut out = Self::zero();
        for (n, c) in &self.coeffs {
            out.add_term(n + 1, c.clone() * e.clone());
        }
        Ok(out)
    }

    /// `v^{[p]} = (1 − VU) v`.
    pub fn deplete(&self, d: &SphericalData<R>) -> Result<Self> {
        let vu = self.apply_u(d)?.apply_v(d)?;
        Ok(self.add(&vu.scale(&-d.a.one_like())))
    }
}

/// Sesquilinear pairing `⟨v, w⟩ / ⟨v_0, v_0⟩` (conjugate-linear in `w`).
pub fn inner<R: Field>(v: &TestVector<R>, w: &TestVector<R>, d: &SphericalData<R>) -> Result<R> {
    let mut acc = d.a.zero_like();
    for (n, c) in &v.coeffs {
        for (m, e) in &w.coeffs {
            acc = acc + c.clone() * (d.conj)(e) * petersson(*n, *m, d)?;
        }
    }
    Ok(acc)
}

/// `v_α = v_0 − β ε(ϖ)^{-1} v_1`, the `U`-eigenvector with eigenvalue `α`.
pub fn stabilize<R: Field>(d: &SphericalData<R>, beta: &R) -> Result<TestVector<R>> {
    if d.eps.is_zero() {
        return Err(Error::Degenerate("ε(ϖ) = 0".into()));
    }
    let one = d.a.one_like();
    let mut v = TestVector::basis(0, &one);
    v.add_term(1, -(beta.clone() * d.eps.inv()?));
    Ok(v)
}

/// `v*_β = v_1 − α v_0`, eigenvector of the adjoint with eigenvalue `β`.
pub fn dual_eigenvector<R: Field>(alpha: &R) -> TestVector<R> {
    let mut v = TestVector::basis(1, alpha);
    v.add_term(0, -alpha.clone());
    v
}

fn nonzero<R: Field>(x: R, name: &str) -> Result<R> {
    if x.is_zero() {
        return Err(Error::Degenerate(format!("pole: factor {name} vanishes")));
    }
    Ok(x)
}

/// Satake roots at one prime for the three forms.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenTriple<R> {
    pub alpha: [R; 3],
    pub beta: [R; 3],
}

/// The Euler ratio of the stabilized trilinear form, relative to the spherical one.
pub fn euler_ratio<R: Field>(e: &EigenTriple<R>, depleted: bool) -> Result<R> {
    let [a1, a2, a3] = e.alpha.clone();
    let [b1, b2, b3] = e.beta.clone();
    if a3 == b3 {
        return Err(Error::Degenerate("α_3 = β_3: the U-eigenspaces are not separated".into()));
    }
    let one = a3.one_like();
    let a3i = a3.inv()?;
    let mut num = (one.clone() - b1.clone() * a2.clone() * a3i.clone())
        * (one.clone() - a1.clone() * b2.clone() * a3i.clone())
        * (one.clone() - b1.clone() * b2.clone() * a3i.clone());
    if depleted {
        num = num * (one.clone() - a1.clone() * a2.clone() * a3i.clone());
    }
    let d1 = nonzero(one.clone() - a1 * b1 * a2 * b2 * a3i.clone() * a3i.clone(), "1 − α1β1α2β2/α3²")?;
    let d2 = nonzero(one - b3 * a3i, "1 − β3/α3")?;
    num.div(&(d1 * d2))
}

/// Satake data of `x`, `y`, `z` at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeEigenData<R> {
    pub label: String,
    pub alpha: [R; 3],
    pub beta: [R; 3],
}

/// Where a prime sits in the decomposition of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSlot {
    /// `true` for the distinguished prime `𝔭_0`.
    pub distinguished: bool,
    /// Embedding indices belonging to the prime.
    pub embeddings: Vec<usize>,
}

fn p_power<R: Field>(p: &R, e: i64) -> Result<R> {
    if e >= 0 {
        Ok(p.pow(e as u64))
    } else {
        p.inv().map(|x| x.pow(e.unsigned_abs()))
    }
}

/// Exponents entering `𝓔_𝔭`: `−Σ(m_σ + 2)` away from `𝔭_0`, `1 − m_0` at `𝔭_0`.
pub fn ep_exponent(t: &WeightTriple, slot: &PrimeSlot) -> Result<i64> {
    let mv = m_values(t)?;
    Ok(if slot.distinguished { 1 - mv.m0 } else { -slot.embeddings.iter().map(|&i| mv.m[i] + 2).sum::<i64>() })
}

/// Exponents of the two factors of `𝓔_{𝔭,1}`.
pub fn ep1_exponents(t: &WeightTriple, slot: &PrimeSlot) -> (i64, i64) {
    if slot.distinguished {
        (-t.k3[0], 1 - t.k3[0])
    } else {
        let s: i64 = slot.embeddings.iter().map(|&i| t.k3[i]).sum();
        let n = slot.embeddings.len() as i64;
        (-s - 2 * n, -s - n)
    }
}

/// The four factors of `𝓔_𝔭(x, y, z)`.
pub fn euler_factor_ep_terms<R: Field>(t: &WeightTriple, e: &PrimeEigenData<R>, slot: &PrimeSlot, p: &R) -> Result<[R; 4]> {
    let w = p_power(p, ep_exponent(t, slot)?)?;
    let [ax, ay, az] = e.alpha.clone();
    let [bx, by, bz] = e.beta.clone();
    let one = p.one_like();
    let f = |x: R| one.clone() - x * w.clone();
    Ok(if slot.distinguished {
        [
            f(ax.clone() * ay.clone() * bz.clone()),
            f(ax * by.clone() * bz.clone()),
            f(bx.clone() * ay * bz.clone()),
            f(bx * by * bz),
        ]
    } else {
        [
            f(bx.clone() * by.clone() * az),
            f(ax * by.clone() * bz.clone()),
            f(bx.clone() * ay * bz.clone()),
            f(bx * by * bz),
        ]
    })
}

pub fn euler_factor_ep<R: Field>(t: &WeightTriple, e: &PrimeEigenData<R>, slot: &PrimeSlot, p: &R) -> Result<R> {
    let [a, b, c, d] = euler_factor_ep_terms(t, e, slot, p)?;
    Ok(a * b * c * d)
}

/// The two factors of `𝓔_{𝔭,1}(z)`.
pub fn euler_factor_ep1_terms<R: Field>(t: &WeightTriple, e: &PrimeEigenData<R>, slot: &PrimeSlot, p: &R) -> Result<[R; 2]> {
    let (e1, e2) = ep1_exponents(t, slot);
    let bz2 = e.beta[2].clone() * e.beta[2].clone();
    let one = p.one_like();
    Ok([one.clone() - bz2.clone() * p_power(p, e1)?, one - bz2 * p_power(p, e2)?])
}

pub fn euler_factor_ep1<R: Field>(t: &WeightTriple, e: &PrimeEigenData<R>, slot: &PrimeSlot, p: &R) -> Result<R> {
    let [a, b] = euler_factor_ep1_terms(t, e, slot, p)?;
    Ok(a * b)
}

/// `∏_𝔭 𝓔_𝔭 / 𝓔_{𝔭,1}`; an exceptional zero names its prime.
pub fn interpolation_factor<R: Field>(t: &WeightTriple, data: &[(PrimeSlot, PrimeEigenData<R>)], p: &R) -> Result<R> {
    let mut acc = p.one_like();
    for (slot, e) in data {
        let den = euler_factor_ep1(t, e, slot, p)?;
        if den.is_zero() {
            return Err(Error::Degenerate(format!("exceptional zero: 𝓔_{{𝔭,1}} vanishes at {}", e.label)));
        }
        acc = acc * euler_factor_ep(t, e, slot, p)?.div(&den)?;
    }
    Ok(acc)
}

/// `(−1)^{ν_3} / 2^{4 − 2m_{3,τ_0}} · C(k_{3,τ_0} − 2, k_{2,τ_0} + m_{3,τ_0} − 1)²`.
pub fn archimedean_factor(t: &WeightTriple, nu3: i64) -> Result<BigRational> {
    let mv = m_values(t)?;
    let b = binomial(t.k3[0] - 2, t.k2[0] + mv.m3_tau0 - 1);
    let mut v = BigRational::from_integer(&b * &b);
    let e = 4 - 2 * mv.m3_tau0;
    let two = BigRational::from_integer(2.into());
    v = if e >= 0 { v / num_traits::pow(two, e as usize) } else { v * num_traits::pow(two, (-e) as usize) };
    if nu3.rem_euclid(2) == 1 {
        v = -v;
    }
    Ok(v)
}

/// Exponent `e` with `U_𝔭 = ϖ^e · U` at a classical weight: `(ν + k_τ0)/2` at
/// `𝔭_0`, `Σ_σ (ν + 2 + k_σ)/2` elsewhere.
pub fn normalization_exponent(k: &[i64], nu: i64, slot: &PrimeSlot) -> Result<i64> {
    let total: i64 = if slot.distinguished {
        nu + k[slot.embeddings[0]]
    } else {
        slot.embeddings.iter().map(|&i| nu + 2 + k[i]).sum()
    };
    if total % 2 != 0 {
        return Err(Error::Domain("weight parity makes the normalization exponent half-integral".into()));
    }
    Ok(total / 2)
}

/// Converts a unitary-normalized eigenvalue to the arithmetic normalization.
pub fn to_arithmetic<R: Field>(x: &R, k: &[i64], nu: i64, slot: &PrimeSlot, p: &R) -> Result<R> {
    Ok(x.clone() * p_power(p, normalization_exponent(k, nu, slot)?)?)
}

/// Inverse of [`to_arithmetic`].
pub fn to_unitary<R: Field>(x: &R, k: &[i64], nu: i64, slot: &PrimeSlot, p: &R) -> Result<R> {
    Ok(x.clone() * p_power(p, -normalization_exponent(k, nu, slot)?)?)
}

/// Variables of the symbolic field `Q(α_1, β_1, α_2, β_2, α_3, β_3, q)`.
pub mod sym {
    use super::*;

    pub const NVARS: usize = 7;
    pub const NAMES: [&str; NVARS] = ["a1", "b1", "a2", "b2", "a3", "b3", "q"];

    pub fn alpha(i: usize) -> RatFunc {
        RatFunc::var(NVARS, 2 * i)
    }

    pub fn beta(i: usize) -> RatFunc {
        RatFunc::var(NVARS, 2 * i + 1)
    }

    pub fn q() -> RatFunc {
        RatFunc::var(NVARS, 6)
    }

    /// The involution `α_i ↔ β_i` fixing `q`: complex conjugation for unitary
    /// Satake parameters with `χ = 1`.
    pub fn conj(f: &RatFunc) -> RatFunc {
        let vals: Vec<RatFunc> = (0..NVARS)
            .map(|j| if j == 6 { q() } else { RatFunc::var(NVARS, j ^ 1) })
            .collect();
        f.substitute(&vals).expect("swapping variables keeps denominators nonzero")
    }

    /// Spherical data of form `i` (0-based).
    pub fn data(i: usize) -> SphericalData<RatFunc> {
        SphericalData::from_roots(&alpha(i), &beta(i), &q(), conj)
    }

    pub fn triple() -> EigenTriple<RatFunc> {
        EigenTriple { alpha: [alpha(0), alpha(1), alpha(2)], beta: [beta(0), beta(1), beta(2)] }
    }
}

/// Conjugation for numeric rational data where every quantity fed to it is real.
pub fn real_conj(x: &BigRational) -> BigRational {
    x.clone()
}

/// Rational Satake data evaluated from the symbolic model at `(α, β, q)`.
///
/// Numeric inner products need `conj(α) = β`, which no field map on `Q`
/// provides; they are therefore computed symbolically and then evaluated.
pub fn eval_symbolic(f: &RatFunc, roots: &[(BigRational, BigRational)], q: &BigRational) -> Result<BigRational> {
    let mut point = Vec::with_capacity(sym::NVARS);
    for i in 0..3 {
        let (a, b) = roots.get(i).cloned().unwrap_or((BigRational::one(), BigRational::one()));
        point.push(a);
        point.push(b);
    }
    point.push(q.clone());
    f.eval(&point)
}

/// Human-readable rendering of a rational with sign.
pub fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else if x.is_negative() {
        format!("-{}/{}", x.numer().abs(), x.denom())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
