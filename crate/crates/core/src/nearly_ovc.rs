//! The local jet model of nearly overconvergent forms: a section of `𝓗^k_m`
//! near a point is a polynomial `f(X) = Σ b_j X^j` over a base ring with a
//! derivation `D` and a constant `c`, in the frame where
//! `∇u_1 = u_2 u_1²` and `∇u_2 = c u_1³`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::ring::{binomial, factorial, IntDivisible, Ring};

/// The derivation and constant of the base ring.
#[derive(Clone)]
pub struct JetBase<R> {
    derivation: Arc<dyn Fn(&R) -> R + Send + Sync>,
    pub c: R,
}

impl<R: Ring> JetBase<R> {
    pub fn new(derivation: impl Fn(&R) -> R + Send + Sync + 'static, c: R) -> Self {
        Self { derivation: Arc::new(derivation), c }
    }

    /// `D = 0`.
    pub fn constant_derivation(c: R) -> Self {
        Self::new(|x: &R| x.zero_like(), c)
    }

    pub fn derive(&self, x: &R) -> R {
        (self.derivation)(x)
    }
}

impl<R> fmt::Debug for JetBase<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("JetBase { .. }")
    }
}

/// `f(X) = Σ_{j ≤ m} b_j X^j` with weight tag `k`; the order `m` is the
/// length of the coefficient vector minus one.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<R> {
    coeffs: Vec<R>,
    weight: i64,
}

impl<R: Ring> Jet<R> {
    pub fn new(coeffs: Vec<R>, weight: i64) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("a jet needs at least one coefficient");
        }
        Ok(Self { coeffs, weight })
    }

    pub fn constant(b0: R, weight: i64) -> Self {
        Self { coeffs: vec![b0], weight }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> R {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn with_weight(mut self, k: i64) -> Self {
        self.weight = k;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|b| b.is_zero())
    }

    /// Raises the order tag by padding with zeros.
    pub fn padded(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() <= order {
            coeffs.push(self.coeffs[0].zero_like());
        }
        Self { coeffs, weight: self.weight }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return domain(format!("adding jets of weights {} and {}", self.weight, other.weight));
        }
        let n = self.order().max(other.order());
        let (a, b) = (self.padded(n), other.padded(n));
        Ok(Self { coeffs: a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect(), weight: self.weight })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&other.coeffs[0].from_int_like(-1)))
    }

    pub fn scale(&self, s: &R) -> Self {
        Self { coeffs: self.coeffs.iter().map(|b| b.clone() * s.clone()).collect(), weight: self.weight }
    }

    /// Product of polynomials in `X`; weights and orders add.
    pub fn mul(&self, other: &Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + x.clone() * y.clone();
            }
        }
        Self { coeffs, weight: self.weight + other.weight }
    }

    /// `∇_k f = Df − (X² − c) f′ + kXf`, of order `m+1` and weight `k+2`.
    pub fn nabla(&self, base: &JetBase<R>) -> Self {
        let m = self.order();
        let k = self.weight;
        let coeffs = (0..=m + 1)
            .map(|n| {
                let mut acc = if n <= m { base.derive(&self.coeffs[n]) } else { self.coeffs[0].zero_like() };
                if n < m {
                    let b = self.coeffs[n + 1].clone();
                    acc = acc + base.c.clone() * b.from_int_like(n as i64 + 1) * b;
                }
                if n >= 1 {
                    let b = self.coeffs[n - 1].clone();
                    acc = acc + b.from_int_like(k - n as i64 + 1) * b;
                }
                acc
            })
            .collect();
        Self { coeffs, weight: k + 2 }
    }

    /// `ε = d/dX`, of order `m−1` and weight `k−2`.
    pub fn epsilon(&self) -> Self {
        let coeffs = if self.order() == 0 {
            vec![self.coeffs[0].zero_like()]
        } else {
            (1..self.coeffs.len()).map(|j| self.coeffs[j].from_int_like(j as i64) * self.coeffs[j].clone()).collect()
        };
        Self { coeffs, weight: self.weight - 2 }
    }

    pub fn nabla_power(&self, base: &JetBase<R>, j: usize) -> Self {
        (0..j).fold(self.clone(), |f, _| f.nabla(base))
    }
}

/// `Σ_j ∇^j g_j`, the inverse of [`overconvergent_projection`].
pub fn reassemble<R: Ring>(base: &JetBase<R>, parts: &[Jet<R>]) -> Result<Jet<R>> {
    let mut acc: Option<Jet<R>> = None;
    for (j, g) in parts.iter().enumerate() {
        let term = g.nabla_power(base, j);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    acc.ok_or_else(|| Error::Domain("nothing to reassemble".into()))
}

/// Writes a jet of order `m` and weight `k` with `2m < k` as
/// `g_0 + ∇g_1 + … + ∇^m g_m` with order-0 `g_j` of weight `k − 2j`.
pub fn overconvergent_projection<R: IntDivisible>(base: &JetBase<R>, f: &Jet<R>) -> Result<Vec<Jet<R>>> {
    let k = f.weight;
    let m = f.order();
    if 2 * m as i64 >= k {
        return domain(format!("overconvergent projection needs 2m < k, got m = {m}, k = {k}"));
    }
    let mut parts = vec![Jet::constant(f.coeffs[0].zero_like(), 0); m + 1];
    let mut rest = f.clone();
    for j in (1..=m).rev() {
        let c = factorial(j as u64) * factorial((k - j as i64 - 1) as u64) / factorial((k - 2 * j as i64 - 1) as u64);
        let top = rest.coeff(j) * rest.coeffs[0].from_bigint_like(&factorial(j as u64));
        let g = Jet::constant(top.div_int(&c)?, k - 2 * j as i64);
        let next = rest.sub(&g.nabla_power(base, j))?;
        if !next.coeff(j).is_zero() {
            return Err(Error::Identity(format!("leading coefficient survived at order {j}")));
        }
        rest = Jet { coeffs: next.coeffs[..j].to_vec(), weight: k };
        parts[j] = g;
    }
    parts[0] = rest;
    Ok(parts)
}

/// Which frame a jet is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `u_2` spans the unit-root line.
    UnitRoot,
    Unspecified,
}

/// `γ`: keeps `b_0`, killing every `u_2`-component.
pub fn unit_root_projection<R: Ring>(f: &Jet<R>, frame: Frame) -> Result<Jet<R>> {
    match frame {
        Frame::UnitRoot => Ok(Jet::constant(f.coeffs[0].clone(), f.weight)),
        Frame::Unspecified => domain("the unit-root projection needs a jet written in the unit-root frame"),
    }
}

/// Coefficients `c_j = (−1)^j C(m_3, j) C(m−2, k_1+j−1)` of the trilinear product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrilinearCoeffs {
    pub k1: i64,
    pub k2: i64,
    pub k3: i64,
    pub m3: i64,
    pub c: Vec<BigInt>,
}

pub fn trilinear_coeffs(k1: i64, k2: i64, k3: i64) -> Result<TrilinearCoeffs> {
    if k1 < 1 || k2 < 1 || k3 < k1 + k2 || (k1 + k2 + k3) % 2 != 0 {
        return domain(format!("({k1}, {k2}, {k3}) is not an unbalanced leg with dominant k3"));
    }
    let m = (k1 + k2 + k3) / 2;
    let m3 = (k3 - k1 - k2) / 2;
    let c = (0..=m3)
        .map(|j| {
            let v = binomial(m3, j) * binomial(m - 2, k1 + j - 1);
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    Ok(TrilinearCoeffs { k1, k2, k3, m3, c })
}

impl TrilinearCoeffs {
    pub fn m(&self) -> i64 {
        (self.k1 + self.k2 + self.k3) / 2
    }

    /// `c_{n+1}(n+1)(k_1+n) + c_n(m_3−n)(k_2+m_3−n−1) = 0` for `0 ≤ n < m_3`.
    pub fn recurrence_holds(&self) -> bool {
        (0..self.m3).all(|n| {
            let i = n as usize;
            let lhs = &self.c[i + 1] * BigInt::from((n + 1) * (self.k1 + n))
                + &self.c[i] * BigInt::from((self.m3 - n) * (self.k2 + self.m3 - n - 1));
            lhs.is_zero()
        })
    }

    /// `Σ_j |c_j| = C(k_3 − 2, k_2 + m_3 − 1)`.
    pub fn vandermonde_holds(&self) -> bool {
        let total: BigInt = self.c.iter().map(|x| if x < &BigInt::zero() { -x } else { x.clone() }).sum();
        total == binomial(self.k3 - 2, self.k2 + self.m3 - 1)
    }

    /// `K = (−1)^{m_3} C(k_3 − 2, m_3 + k_2 − 1)^{-1}`.
    pub fn rearrangement_constant(&self) -> BigRational {
        let b = BigRational::from_integer(binomial(self.k3 - 2, self.m3 + self.k2 - 1));
        let sign = if self.m3 % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        sign / b
    }

    /// `a_0..a_{m_3}` with `a_i = (−1)^{i+m_3+1} C(k_3−2, m_3+k_2−1)^{-1}
    /// Σ_{j ≤ i} C(m_3, j) C(m_3+k_1+k_2−2, k_1+j−1)`, so that
    /// `(∇^{m_3} f_1) f_2 = K·t(f_1, f_2) + ∇(Σ_{i<m_3} a_i ∇^i f_1 ∇^{m_3−1−i} f_2)`;
    /// the last entry is `−1` by the Vandermonde identity.
    pub fn rearrangement_coeffs(&self) -> Vec<BigRational> {
        let b = BigRational::from_integer(binomial(self.k3 - 2, self.m3 + self.k2 - 1));
        let mut partial = BigInt::zero();
        (0..=self.m3)
            .map(|i| {
                partial += binomial(self.m3, i) * binomial(self.m3 + self.k1 + self.k2 - 2, self.k1 + i - 1);
                let v = BigRational::from_integer(partial.clone()) / b.clone();
                if (i + self.m3 + 1) % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }
}

/// `t(f_1, f_2) = Σ_j c_j ∇^j f_1 · ∇^{m_3−j} f_2`, certified to lie in the
/// kernel of `ε` and returned as its order-0 representative of weight `k_3`.
pub fn trilinear_product<R: Ring>(base: &JetBase<R>, f1: &Jet<R>, f2: &Jet<R>, tc: &TrilinearCoeffs) -> Result<Jet<R>> {
    let t = trilinear_sum(base, f1, f2, tc)?;
    if !t.epsilon().is_zero() {
        return Err(Error::Identity("ε does not kill the trilinear product".into()));
    }
    Ok(Jet::constant(t.coeffs[0].clone(), tc.k3))
}

/// The raw sum `Σ_j c_j ∇^j f_1 · ∇^{m_3−j} f_2` at order `m_3`.
pub fn trilinear_sum<R: Ring>(base: &JetBase<R>, f1: &Jet<R>, f2: &Jet<R>, tc: &TrilinearCoeffs) -> Result<Jet<R>> {
    if f1.order() != 0 || f2.order() != 0 {
        return domain("the trilinear product takes order-0 jets");
    }
    if f1.weight != tc.k1 || f2.weight != tc.k2 {
        return domain("jet weights do not match the coefficient triple");
    }
    let m3 = tc.m3 as usize;
    let mut acc: Option<Jet<R>> = None;
    for (j, c) in tc.c.iter().enumerate() {
        let term = f1.nabla_power(base, j).mul(&f2.nabla_power(base, m3 - j));
        let term = term.scale(&f1.coeffs[0].from_bigint_like(c));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("m3 >= 0 gives at least one term"))
}

/// Contracts `μ_1 ⊗ μ_2 ⊗ μ_3` against
/// `Δ = (x_3y_2 − x_2y_3)^{m_1}(x_3y_1 − x_1y_3)^{m_2}(x_1y_2 − x_2y_1)^{m_3}`.
///
/// `μ_i` is a functional on homogeneous polynomials of degree `d_i` in
/// `(x_i, y_i)` (`d_1 = m_2+m_3`, `d_2 = m_1+m_3`, `d_3 = m_1+m_2`), given by
/// its values `μ_i[j] = μ_i(x^{d_i−j} y^j)`.
pub fn delta_pairing<R: Ring>(mu: [&[R]; 3], m: [u32; 3]) -> Result<R> {
    let [m1, m2, m3] = m.map(|x| x as usize);
    let degs = [m2 + m3, m1 + m3, m1 + m2];
    for (i, (mu, d)) in mu.iter().zip(degs).enumerate() {
        if mu.len() != d + 1 {
            return domain(format!("functional {} has {} values, expected {}", i + 1, mu.len(), d + 1));
        }
    }
    let sample = &mu[0][0];
    let mut acc = sample.zero_like();
    for a in 0..=m1 {
        for b in 0..=m2 {
            for c in 0..=m3 {
                let coeff = binomial(m1 as i64, a as i64) * binomial(m2 as i64, b as i64) * binomial(m3 as i64, c as i64);
                let coeff = if (a + b + c) % 2 == 0 { coeff } else { -coeff };
                let (y1, y2, y3) = (m2 - b + c, m1 - a + m3 - c, a + b);
                acc = acc
                    + sample.from_bigint_like(&coeff) * mu[0][y1].clone() * mu[1][y2].clone() * mu[2][y3].clone();
            }
        }
    }
    Ok(acc)
}

/// The functional `P ↦ P(x_0, y_0)` on polynomials of degree `d`.
pub fn point_mass<R: Ring>(x0: &R, y0: &R, d: usize) -> Vec<R> {
    (0..=d).map(|j| Ring::pow(x0, (d - j) as u64) * Ring::pow(y0, j as u64)).collect()
}
