//! The unramified extension `Z_q = Z_p[θ]/(P(θ))` of degree `f`, truncated mod `p^N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::padic::scalar::{PadicContext, PadicRing, PadicScalar};
use crate::ring::Ring;

/// Shared data of one unramified extension: the defining polynomial and the
/// Frobenius image of the generator.
#[derive(Debug, PartialEq, Eq)]
pub struct UnramifiedContext {
    base: PadicContext,
    /// Monic defining polynomial, low degree first, length `f + 1`.
    poly: Vec<u64>,
    /// `σ(θ)` as coefficients in the power basis.
    frob_theta: Vec<PadicScalar>,
}

impl UnramifiedContext {
    /// Builds `Z_p[θ]/(P)` from a monic polynomial irreducible mod `p`
    /// (coefficients low degree first, leading 1 included).
    pub fn new(base: PadicContext, poly: &[u64]) -> Result<Arc<Self>> {
        let f = poly.len().checked_sub(1).filter(|f| *f >= 1).ok_or_else(|| {
            Error::Domain("defining polynomial must have degree at least 1".into())
        })?;
        if poly[f] % base.p != 1 {
            return domain("defining polynomial must be monic");
        }
        let reduced: Vec<u64> = poly.iter().map(|c| c % base.p).collect();
        if !is_irreducible_mod_p(&reduced, base.p) {
            return domain(format!("{poly:?} is not irreducible mod {}", base.p));
        }
        let mut ctx = Self { base, poly: reduced, frob_theta: Vec::new() };
        ctx.frob_theta = ctx.compute_frobenius()?;
        Ok(Arc::new(ctx))
    }

    /// The lexicographically first monic irreducible polynomial of degree `f`.
    pub fn standard(base: PadicContext, f: usize) -> Result<Arc<Self>> {
        if f == 0 {
            return domain("residue degree must be positive");
        }
        let p = base.p;
        let count = p.checked_pow(f as u32).ok_or_else(|| Error::Overflow("residue field too large".into()))?;
        for code in 0..count {
            let mut poly = Vec::with_capacity(f + 1);
            let mut c = code;
            for _ in 0..f {
                poly.push(c % p);
                c /= p;
            }
            poly.push(1);
            if is_irreducible_mod_p(&poly, p) {
                return Self::new(base, &poly);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn base(&self) -> PadicContext {
        self.base
    }

    pub fn prime(&self) -> u64 {
        self.base.p
    }

    pub fn residue_size(&self) -> u64 {
        self.base.p.pow(self.degree() as u32)
    }

    pub fn poly(&self) -> &[u64] {
        &self.poly
    }

    fn compute_frobenius(&self) -> Result<Vec<PadicScalar>> {
        let f = self.degree();
        let zero = self.base.zero();
        if f == 1 {
            return Ok(vec![zero]);
        }
        // Newton's method for the root of P congruent to θ^p, starting there.
        let this = self.snapshot();
        let theta = UnramifiedScalar::theta(&this);
        let mut x = Ring::pow(&theta, self.base.p);
        for _ in 0..=(self.base.prec as usize).next_power_of_two().trailing_zeros() + 2 {
            let (val, der) = this.eval_poly_and_derivative(&x);
            x = x - val * der.field_inverse()?;
        }
        Ok(x.coeffs)
    }

    fn snapshot(&self) -> Arc<Self> {
        Arc::new(Self { base: self.base, poly: self.poly.clone(), frob_theta: self.frob_theta.clone() })
    }

    fn eval_poly_and_derivative(self: &Arc<Self>, x: &UnramifiedScalar) -> (UnramifiedScalar, UnramifiedScalar) {
        let mut val = UnramifiedScalar::zero(self);
        let mut der = UnramifiedScalar::zero(self);
        for c in self.poly.iter().rev() {
            der = der * x.clone() + val.clone();
            val = val * x.clone() + UnramifiedScalar::from_scalar_in(self, self.base.scalar(*c as i64));
        }
        (val, der)
    }

    /// All residue classes, as lifts with digit coefficients in `[0, p)`.
    pub fn residue_representatives(self: &Arc<Self>) -> Vec<UnramifiedScalar> {
        let p = self.base.p;
        let f = self.degree();
        (0..self.residue_size())
            .map(|mut code| {
                let coeffs = (0..f)
                    .map(|_| {
                        let d = code % p;
                        code /= p;
                        self.base.scalar(d as i64)
                    })
                    .collect();
                UnramifiedScalar { ctx: self.clone(), coeffs }
            })
            .collect()
    }
}

/// Is `poly` (monic, coefficients mod p, low degree first) irreducible over `F_p`?
pub fn is_irreducible_mod_p(poly: &[u64], p: u64) -> bool {
    let f = poly.len() - 1;
    if f == 1 {
        return true;
    }
    // Rabin-style: gcd(X^(p^i) - X, P) = 1 for i <= f/2.
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=f / 2 {
        xp = polymod_pow(&xp, p, poly, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd_mod_p(poly.to_vec(), trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_rem_mod_p(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * mi % p) % p;
        }
        r = trim(r);
        if r.len() - 1 < dm {
            break;
        }
    }
    r
}

fn poly_mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn polymod_pow(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem_mod_p(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem_mod_p(&poly_mul_mod_p(&acc, &b, p), m, p);
        }
        b = poly_rem_mod_p(&poly_mul_mod_p(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem_mod_p(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// An element `Σ c_i θ^i` of the truncated unramified extension.
#[derive(Clone, PartialEq, Eq)]
pub struct UnramifiedScalar {
    ctx: Arc<UnramifiedContext>,
    coeffs: Vec<PadicScalar>,
}

impl UnramifiedScalar {
    pub fn zero(ctx: &Arc<UnramifiedContext>) -> Self {
        Self { ctx: ctx.clone(), coeffs: vec![ctx.base.zero(); ctx.degree()] }
    }

    pub fn from_scalar_in(ctx: &Arc<UnramifiedContext>, s: PadicScalar) -> Self {
        let mut coeffs = vec![s.zero_like(); ctx.degree()];
        coeffs[0] = s;
        Self { ctx: ctx.clone(), coeffs }
    }

    pub fn from_int(ctx: &Arc<UnramifiedContext>, n: i64) -> Self {
        Self::from_scalar_in(ctx, ctx.base.scalar(n))
    }

    /// The generator `θ` (equal to `0` when `f = 1`).
    pub fn theta(ctx: &Arc<UnramifiedContext>) -> Self {
        let mut z = Self::zero(ctx);
        if ctx.degree() > 1 {
            z.coeffs[1] = ctx.base.one();
        }
        z
    }

    pub fn from_coeffs(ctx: &Arc<UnramifiedContext>, coeffs: Vec<PadicScalar>) -> Result<Self> {
        if coeffs.len() != ctx.degree() {
            return domain(format!("expected {} coefficients, got {}", ctx.degree(), coeffs.len()));
        }
        Ok(Self { ctx: ctx.clone(), coeffs })
    }

    pub fn context(&self) -> &Arc<UnramifiedContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap()
    }

    /// The element as a `Z_p` scalar, if it has no `θ` components.
    pub fn as_scalar(&self) -> Option<PadicScalar> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Arithmetic Frobenius `σ`, fixing `Z_p` and sending `θ` to the lift of `θ^p`.
    pub fn frobenius(&self) -> Self {
        if self.ctx.degree() == 1 {
            return self.clone();
        }
        let ft = Self { ctx: self.ctx.clone(), coeffs: self.ctx.frob_theta.clone() };
        let mut acc = Self::zero(&self.ctx);
        let mut pw = Self::from_int(&self.ctx, 1);
        for c in &self.coeffs {
            acc = acc + pw.scale(c);
            pw = pw * ft.clone();
        }
        acc
    }

    /// `σ^j`, the `j`-th embedding of the residue-field basis.
    pub fn frobenius_power(&self, j: usize) -> Self {
        (0..j).fold(self.clone(), |x, _| x.frobenius())
    }

    pub fn scale(&self, s: &PadicScalar) -> Self {
        Self { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| *c * *s).collect() }
    }

    /// Field inverse mod `p` by the residue-field norm trick, refined by
    /// Newton's iteration `y ← y(2 − xy)`.
    fn field_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Degenerate("not a unit in the unramified extension".into()));
        }
        // x^(q-2) is the inverse in the residue field.
        let q = self.ctx.residue_size();
        let mut y = Ring::pow(self, q - 2);
        let two = Self::from_int(&self.ctx, 2);
        for _ in 0..=32 - self.precision().leading_zeros() {
            y = y.clone() * (two.clone() - self.clone() * y.clone());
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.field_inverse()
    }

    /// Norm down to `Z_p`: the product of all Frobenius conjugates.
    pub fn norm(&self) -> PadicScalar {
        let f = self.ctx.degree();
        let mut acc = self.clone();
        let mut conj = self.clone();
        for _ in 1..f {
            conj = conj.frobenius();
            acc = acc * conj.clone();
        }
        acc.coeffs[0]
    }

    /// Teichmüller lift: the root of unity of order dividing `q - 1` with the same residue.
    pub fn teichmuller(&self) -> Self {
        let q = self.ctx.residue_size();
        let mut x = self.clone();
        for _ in 0..self.precision() {
            x = Ring::pow(&x, q);
        }
        x
    }

    pub fn truncate(&self, prec: u32) -> Self {
        Self { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c.truncate(prec)).collect() }
    }

    /// Residue mod `p` as a code in `[0, q)` matching [`UnramifiedContext::residue_representatives`].
    pub fn residue_code(&self) -> u64 {
        let p = self.ctx.base.p;
        self.coeffs.iter().rev().fold(0, |acc, c| acc * p + c.residue() % p)
    }

    /// Residue mod `p^m` as digit vectors, one base-`p` integer in `[0, p^m)` per coordinate.
    pub fn coords_mod_p_power(&self, m: u32) -> Vec<u64> {
        let pm = self.ctx.base.p.pow(m);
        self.coeffs.iter().map(|c| c.residue() % pm).collect()
    }
}

impl fmt::Debug for UnramifiedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for UnramifiedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Add for UnramifiedScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| *a + *b).collect();
        Self { ctx: self.ctx, coeffs }
    }
}

impl Sub for UnramifiedScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| *a - *b).collect();
        Self { ctx: self.ctx, coeffs }
    }
}

impl Neg for UnramifiedScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -*c).collect(), ctx: self.ctx }
    }
}

impl Mul for UnramifiedScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let f = self.ctx.degree();
        if f == 1 {
            return Self { coeffs: vec![self.coeffs[0] * rhs.coeffs[0]], ctx: self.ctx };
        }
        let zero = self.coeffs[0].zero_like() * rhs.coeffs[0];
        let mut prod = vec![zero; 2 * f - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = prod[i + j] + *a * *b;
            }
        }
        // θ^f = -Σ_{i<f} P_i θ^i
        for top in (f..2 * f - 1).rev() {
            let c = prod[top];
            if c.is_zero() {
                continue;
            }
            for i in 0..f {
                let pi = c.from_int_like(self.ctx.poly[i] as i64);
                prod[top - f + i] = prod[top - f + i] - c * pi;
            }
            prod[top] = c.zero_like();
        }
        prod.truncate(f);
        Self { ctx: self.ctx, coeffs: prod }
    }
}

impl Ring for UnramifiedScalar {
    fn zero_like(&self) -> Self {
        Self { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c.zero_like()).collect() }
    }
    fn one_like(&self) -> Self {
        self.from_int_like(1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        let mut z = self.zero_like();
        z.coeffs[0] = z.coeffs[0].from_int_like(n);
        z
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl PadicRing for UnramifiedScalar {
    fn prime(&self) -> u64 {
        self.ctx.base.p
    }
    fn precision(&self) -> u32 {
        UnramifiedScalar::precision(self)
    }
    fn valuation(&self) -> Option<u32> {
        UnramifiedScalar::valuation(self)
    }
    fn from_scalar(&self, s: &PadicScalar) -> Self {
        Self::from_scalar_in(&self.ctx, s.truncate(self.precision()))
    }
    fn try_inverse(&self) -> Result<Self> {
        self.inverse()
    }
    fn divide_by_p_power(&self, k: u32) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.divide_by_p_power(k)).collect::<Result<_>>()?;
        Ok(Self { ctx: self.ctx.clone(), coeffs })
    }
    fn truncate(&self, prec: u32) -> Self {
        UnramifiedScalar::truncate(self, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> Arc<UnramifiedContext> {
        UnramifiedContext::standard(PadicContext::new(3, 8).unwrap(), 3).unwrap()
    }

    #[test]
    fn rejects_reducible_polynomial() {
        let base = PadicContext::new(5, 6).unwrap();
        // X^2 - 1 = (X - 1)(X + 1)
        assert!(UnramifiedContext::new(base, &[4, 0, 1]).is_err());
        // X^2 - 2 is irreducible mod 5
        assert!(UnramifiedContext::new(base, &[3, 0, 1]).is_ok());
    }

    #[test]
    fn frobenius_is_ring_map_of_order_f() {
        let ctx = cubic();
        let reps = ctx.residue_representatives();
        let a = reps[7].clone() + UnramifiedScalar::from_int(&ctx, 9);
        let b = reps[20].clone();
        assert_eq!((a.clone() * b.clone()).frobenius(), a.frobenius() * b.frobenius());
        assert_eq!(a.frobenius_power(3), a);
        let t = UnramifiedScalar::theta(&ctx);
        assert_eq!(t.frobenius().truncate(1), Ring::pow(&t, 3).truncate(1));
    }

    #[test]
    fn inverse_and_norm() {
        let ctx = cubic();
        for x in ctx.residue_representatives().into_iter().skip(1) {
            let y = x.inverse().unwrap();
            assert_eq!(x.clone() * y, UnramifiedScalar::from_int(&ctx, 1));
            let n = x.norm();
            assert!(n.is_unit());
        }
    }

    #[test]
    fn teichmuller_has_order_dividing_q_minus_one() {
        let ctx = cubic();
        let x = ctx.residue_representatives()[5].clone();
        let w = x.teichmuller();
        assert_eq!(Ring::pow(&w, 26), UnramifiedScalar::from_int(&ctx, 1));
        assert_eq!(w.residue_code(), x.residue_code());
    }
}
