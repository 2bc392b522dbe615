//! Weights for `G′` and `G`, the map `k(r, ν)(t) = ν(N(t))·r(t)^{-2}` between
//! them, and the combinatorics of unbalanced weight triples.
//!
//! Embeddings are indexed as in [`LocalStructure::embeddings`]; index 0 is `τ_0`.

use crate::error::{domain, Result};
use crate::padic::character::{Character, LocalPoint, LocalStructure, UniversalCharacter};
use crate::padic::scalar::PadicScalar;
use crate::padic::series::IwasawaSeries;

/// A classical weight `(k, ν)` stored as an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalWeight {
    pub k: Vec<i64>,
    pub nu: i64,
}

impl ClassicalWeight {
    pub fn new(k: Vec<i64>, nu: i64) -> Self {
        Self { k, nu }
    }

    /// The parity condition `k_τ ≡ ν (mod 2)` of classical points.
    pub fn has_classical_parity(&self) -> bool {
        self.k.iter().all(|k| (k - self.nu).rem_euclid(2) == 0)
    }
}

/// A point of the weight space of `G`: a pair `(r, ν)`.
#[derive(Clone, Debug)]
pub enum WeightG {
    /// `r(t) = ∏ τ(t)^{r_τ}`, `ν(x) = x^ν`.
    Classical { r: Vec<i64>, nu: i64 },
    /// The universal pair over `Z_p[[T_1, …, T_d, T]]`.
    Universal(UniversalWeight),
}

/// The universal weight `(r_n, ν_n)`: `r` is the universal character of `O^×`
/// in `T_1..T_d`, and `ν(x) = (1+T)^{log x / p}` on `1 + pZ_p`.
#[derive(Clone, Debug)]
pub struct UniversalWeight {
    pub r: UniversalCharacter,
}

impl UniversalWeight {
    pub fn new(structure: LocalStructure, cap: u32) -> Self {
        Self { r: UniversalCharacter::new(structure, cap) }
    }

    fn nvars(&self) -> usize {
        self.r.nvars() + 1
    }

    /// `ν(x)` for `x ∈ 1 + pZ_p`, a series in the last variable `T`.
    pub fn nu_eval(&self, x: &PadicScalar) -> Result<IwasawaSeries> {
        let gamma = x.log()?.divide_by_p_power(1)?;
        let ctx = self.r.structure.base();
        Ok(IwasawaSeries::binomial_power(ctx, self.nvars(), self.r.cap, self.nvars() - 1, &gamma))
    }

    /// `r(t)` in the first `d` variables.
    pub fn r_eval(&self, t: &LocalPoint) -> Result<IwasawaSeries> {
        let d = self.r.nvars();
        let map: Vec<usize> = (0..d).collect();
        Ok(self.r.eval(t)?.relabel(self.nvars(), &map))
    }

    /// The exponents `β_i = log N(e_i) / p` of the pull-back formula.
    pub fn betas(&self) -> Result<Vec<PadicScalar>> {
        let s = &self.r.structure;
        self.r.basis.iter().map(|e| s.norm(e).log()?.divide_by_p_power(1)).collect()
    }
}

/// `k(r, ν)` evaluated at `t ∈ 1 + pO` for the universal weight, computed
/// directly as `ν(N(t))·r(t)^{-2}`.
pub fn universal_k_eval(w: &UniversalWeight, t: &LocalPoint) -> Result<IwasawaSeries> {
    let norm = w.r.structure.norm(t);
    let nu = w.nu_eval(&norm)?;
    let r = w.r_eval(t)?;
    let r_inv_sq = invert_unit_series(&(r.clone() * r))?;
    Ok(nu * r_inv_sq)
}

/// The pull-back `k^*`: substitutes `1 + S_i ↦ (1+T_i)^{-2}(1+T)^{β_i}` into a
/// series in the universal variables `S_1..S_d` of `O^×`.
pub fn pullback_k(w: &UniversalWeight, series: &IwasawaSeries) -> Result<IwasawaSeries> {
    let ctx = w.r.structure.base();
    let n = w.nvars();
    let cap = w.r.cap;
    let betas = w.betas()?;
    let minus_two = ctx.scalar(-2);
    let subs: Vec<IwasawaSeries> = betas
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let a = IwasawaSeries::binomial_power(ctx, n, cap, i, &minus_two);
            let c = IwasawaSeries::binomial_power(ctx, n, cap, n - 1, b);
            a * c - IwasawaSeries::constant(ctx, n, cap, ctx.one())
        })
        .collect();
    series.compose(&subs)
}

/// Inverse of a series with unit constant term, by Newton iteration.
fn invert_unit_series(s: &IwasawaSeries) -> Result<IwasawaSeries> {
    let c0 = s.constant_term().inverse()?;
    let one = IwasawaSeries::constant(s.context(), s.nvars(), s.cap(), s.context().one());
    let two = IwasawaSeries::constant(s.context(), s.nvars(), s.cap(), s.context().scalar(2));
    let mut x = IwasawaSeries::constant(s.context(), s.nvars(), s.cap(), c0);
    for _ in 0..=(s.cap() + 1).next_power_of_two().trailing_zeros() + 1 {
        x = x.clone() * (two.clone() - s.clone() * x);
    }
    debug_assert!((s.clone() * x.clone()).eq_at(&one));
    Ok(x)
}

/// `k(r, ν)` for a weight of `G`.
pub fn weight_map_k(w: &WeightG) -> Character {
    match w {
        WeightG::Classical { r, nu } => Character::Classical { exps: r.iter().map(|x| nu - 2 * x).collect(), nu: 0 },
        WeightG::Universal(u) => Character::Universal(u.r.clone()),
    }
}

/// A triple of classical weight vectors; index 0 of each vector is `τ_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTriple {
    pub k1: Vec<i64>,
    pub k2: Vec<i64>,
    pub k3: Vec<i64>,
}

/// Derived quantities of an unbalanced triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MValues {
    /// `m_τ = (k_{1,τ} + k_{2,τ} + k_{3,τ}) / 2`.
    pub m: Vec<i64>,
    /// `m_{3,τ_0} = (k_{3,τ_0} − k_{1,τ_0} − k_{2,τ_0}) / 2`.
    pub m3_tau0: i64,
    /// `m_0 = m_{τ_0}`.
    pub m0: i64,
    /// `m_{i,τ} = m_τ − k_{i,τ}` for `τ ≠ τ_0` (entry 0 is unused and set to 0).
    pub m_i: [Vec<i64>; 3],
}

impl WeightTriple {
    pub fn new(k1: Vec<i64>, k2: Vec<i64>, k3: Vec<i64>) -> Result<Self> {
        if k1.is_empty() || k1.len() != k2.len() || k1.len() != k3.len() {
            return domain("weight vectors must be non-empty and of equal length");
        }
        Ok(Self { k1, k2, k3 })
    }

    /// The one-embedding triple `(k1, k2, k3)`.
    pub fn scalar(k1: i64, k2: i64, k3: i64) -> Self {
        Self { k1: vec![k1], k2: vec![k2], k3: vec![k3] }
    }

    pub fn degree(&self) -> usize {
        self.k1.len()
    }

    fn legs(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        (0..self.degree()).map(|t| (self.k1[t], self.k2[t], self.k3[t]))
    }

    pub fn swapped(&self) -> Self {
        Self { k1: self.k2.clone(), k2: self.k1.clone(), k3: self.k3.clone() }
    }
}

/// Unbalanced at `τ_0` with dominant weight `k_3`.
pub fn is_unbalanced(t: &WeightTriple) -> Result<bool> {
    if t.legs().any(|(a, b, c)| a <= 0 || b <= 0 || c <= 0) {
        return domain("weights must be positive integers");
    }
    let parity = t.legs().all(|(a, b, c)| (a + b + c) % 2 == 0);
    let (a0, b0, c0) = (t.k1[0], t.k2[0], t.k3[0]);
    let dominant = c0 >= a0 + b0;
    let balanced = t.legs().skip(1).all(|(a, b, c)| {
        let s = a + b + c;
        2 * a <= s && 2 * b <= s && 2 * c <= s
    });
    Ok(parity && dominant && balanced)
}

/// Membership in the interpolation region: unbalanced, positive, `ν_3 = ν_1 + ν_2`.
pub fn interpolation_point_check(x: &ClassicalWeight, y: &ClassicalWeight, z: &ClassicalWeight) -> Result<bool> {
    let t = WeightTriple::new(x.k.clone(), y.k.clone(), z.k.clone())?;
    if t.legs().any(|(a, b, c)| a <= 0 || b <= 0 || c <= 0) {
        return Ok(false);
    }
    Ok(z.nu == x.nu + y.nu && is_unbalanced(&t)?)
}

pub fn m_values(t: &WeightTriple) -> Result<MValues> {
    if t.legs().any(|(a, b, c)| (a + b + c) % 2 != 0) {
        return domain("k_1 + k_2 + k_3 must be even at every embedding");
    }
    let m: Vec<i64> = t.legs().map(|(a, b, c)| (a + b + c) / 2).collect();
    let m3_tau0 = (t.k3[0] - t.k1[0] - t.k2[0]) / 2;
    let leg = |k: &Vec<i64>| -> Vec<i64> {
        (0..t.degree()).map(|i| if i == 0 { 0 } else { m[i] - k[i] }).collect()
    };
    Ok(MValues { m0: m[0], m3_tau0, m_i: [leg(&t.k1), leg(&t.k2), leg(&t.k3)], m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::character::{char_eval, CharEval};
    use crate::padic::scalar::PadicContext;

    #[test]
    fn unbalanced_examples() {
        assert!(is_unbalanced(&WeightTriple::scalar(2, 2, 6)).unwrap());
        assert!(!is_unbalanced(&WeightTriple::scalar(2, 2, 3)).unwrap());
        let t = WeightTriple::new(vec![1, 4], vec![1, 2], vec![2, 2]).unwrap();
        assert!(is_unbalanced(&t).unwrap());
        assert!(is_unbalanced(&WeightTriple::scalar(0, 2, 2)).is_err());
    }

    #[test]
    fn m_values_examples() {
        let v = m_values(&WeightTriple::scalar(2, 2, 6)).unwrap();
        assert_eq!((v.m0, v.m3_tau0), (5, 1));
        let v = m_values(&WeightTriple::scalar(1, 1, 2)).unwrap();
        assert_eq!((v.m0, v.m3_tau0), (2, 0));
        let v = m_values(&WeightTriple::new(vec![1, 2], vec![1, 2], vec![4, 2]).unwrap()).unwrap();
        assert_eq!(v.m[1], 3);
        assert_eq!((v.m_i[0][1], v.m_i[1][1], v.m_i[2][1]), (1, 1, 1));
    }

    #[test]
    fn weight_map_over_q() {
        let ctx = PadicContext::new(5, 6).unwrap();
        let s = LocalStructure::rational(ctx);
        let chi = weight_map_k(&WeightG::Classical { r: vec![1], nu: 1 });
        let CharEval::Classical(v) = char_eval(&chi, &s, &s.integer(3)).unwrap() else { panic!() };
        assert_eq!(v.as_scalar().unwrap(), ctx.scalar(3).inverse().unwrap());
    }

    #[test]
    fn interpolation_points() {
        let w = |k: i64, nu: i64| ClassicalWeight::new(vec![k], nu);
        assert!(interpolation_point_check(&w(2, 0), &w(2, 0), &w(6, 0)).unwrap());
        assert!(!interpolation_point_check(&w(2, 0), &w(2, 0), &w(6, 1)).unwrap());
        assert!(!interpolation_point_check(&w(2, 0), &w(0, 0), &w(6, 0)).unwrap());
    }
}
