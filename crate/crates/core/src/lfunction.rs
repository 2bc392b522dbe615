//! Assembly of the triple-product construction on synthetic data: the
//! depletion, `Θ`-power, `Δ`-pairing and ordinary-projection pipeline, the
//! eigenline coefficient, and the interpolation-factor report.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::hecke_euler::{
    archimedean_factor, dual_eigenvector, euler_factor_ep1_terms, euler_factor_ep_terms, fmt_rational, inner, stabilize,
    EigenTriple, PrimeEigenData, PrimeSlot, SphericalData, TestVector,
};
use crate::nearly_ovc::{
    delta_pairing, overconvergent_projection, trilinear_sum, unit_root_projection, Frame, Jet, JetBase, TrilinearCoeffs,
};
use crate::ring::{Field, Ring};
use crate::serre_tate::QExpansion;
use crate::weights::{is_unbalanced, m_values, WeightTriple};

type QExp = QExpansion<BigRational>;

/// A stand-in for the specialization of an ordinary family at a classical
/// point: a functional on degree-`d` polynomials with `q`-expansion values,
/// together with its Satake roots at the distinguished prime.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticFamily {
    pub label: String,
    pub weight: i64,
    /// The unit root, the `U`-eigenvalue carried by the family.
    pub alpha: BigRational,
    pub beta: BigRational,
    values: Vec<QExp>,
}

impl SyntheticFamily {
    /// `values[j]` is the functional evaluated at `x^{d−j} y^j`.
    pub fn new(label: &str, weight: i64, alpha: BigRational, beta: BigRational, values: Vec<QExp>) -> Result<Self> {
        let Some(first) = values.first() else {
            return domain("a family needs at least one value");
        };
        if values.iter().any(|v| v.prime() != first.prime()) {
            return domain("family values use different primes");
        }
        if Zero::is_zero(&alpha) {
            return Err(Error::Degenerate(format!("family {label} has α = 0")));
        }
        Ok(Self { label: label.into(), weight, alpha, beta, values })
    }

    pub fn zero(label: &str, weight: i64, p: u64, cap: u64, degree: usize, alpha: BigRational, beta: BigRational) -> Result<Self> {
        Self::new(label, weight, alpha, beta, vec![QExpansion::zero(p, cap); degree + 1])
    }

    pub fn values(&self) -> &[QExp] {
        &self.values
    }

    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn prime(&self) -> u64 {
        self.values[0].prime()
    }

    /// Local spherical data with `q = p`.
    pub fn local_data(&self) -> SphericalData<BigRational> {
        let q = BigRational::from_integer(self.prime().into());
        SphericalData::from_roots(&self.alpha, &self.beta, &q, crate::hecke_euler::real_conj)
    }

    /// The `p`-stabilized test vector `v_α`.
    pub fn eigenvector(&self) -> Result<TestVector<BigRational>> {
        stabilize(&self.local_data(), &self.beta)
    }

    /// `U v_α = α v_α` on the local model.
    pub fn check_eigenline(&self) -> Result<bool> {
        let d = self.local_data();
        let v = self.eigenvector()?;
        Ok(v.apply_u(&d)? == v.scale(&self.alpha))
    }
}

fn max_exponent(values: &[QExp]) -> u64 {
    values.iter().filter_map(|v| v.terms().keys().next_back().copied()).max().unwrap_or(0)
}

/// `e_ord` of the `Δ`-pairing of `Θ^{m_3}(f_1^{[p]})` with `f_2`, returned as a
/// functional on degree-`d_3` polynomials (`values[j]` at `x^{d_3−j}y^j`).
///
/// `delta` holds the exponents `(m_1, m_2, m_3)` of `Δ`; the families must have
/// degrees `m_2 + m_3` and `m_1 + m_3`.
pub fn pipeline_eval(f1: &SyntheticFamily, f2: &SyntheticFamily, t: &WeightTriple, delta: [u32; 3]) -> Result<Vec<QExp>> {
    let mv = m_values(t)?;
    if mv.m3_tau0 < 0 {
        return domain(format!("m_3 = {} is negative", mv.m3_tau0));
    }
    if f1.prime() != f2.prime() {
        return domain("families use different primes");
    }
    let [a, b, c] = delta.map(|x| x as usize);
    let (d1, d2, d3) = (b + c, a + c, a + b);
    if f1.degree() != d1 || f2.degree() != d2 {
        return domain(format!(
            "family degrees ({}, {}) do not match Δ exponents, expected ({d1}, {d2})",
            f1.degree(),
            f2.degree()
        ));
    }
    let twisted: Vec<QExp> =
        f1.values.iter().map(|v| v.depletion()?.theta_power(mv.m3_tau0 as u64)).collect::<Result<_>>()?;
    let cap = f1.values[0].cap().min(f2.values[0].cap());
    let top = max_exponent(&twisted) + max_exponent(&f2.values);
    if top > cap {
        return Err(Error::Overflow(format!("pairing reaches exponent {top}, above the cap {cap}")));
    }
    let zero = QExpansion::zero(f1.prime(), cap);
    let one = zero.one_like();
    (0..=d3)
        .map(|j| {
            let mut e = vec![zero.clone(); d3 + 1];
            e[j] = one.clone();
            Ok(delta_pairing([&twisted, &f2.values, &e], delta)?.e_ord())
        })
        .collect()
}

/// `⟨v, v*_β⟩ / ⟨v_α, v*_β⟩`, the coordinate of `v` on the `α`-eigenline.
pub fn eigenline_coefficient<R: Field>(v: &TestVector<R>, d: &SphericalData<R>, alpha: &R, beta: &R) -> Result<R> {
    if alpha == beta {
        return Err(Error::Degenerate("α = β: the eigenlines coincide".into()));
    }
    let star = dual_eigenvector(alpha);
    let den = inner(&stabilize(d, beta)?, &star, d)?;
    if den.is_zero() {
        return Err(Error::Degenerate("⟨v_α, v*_β⟩ vanishes".into()));
    }
    inner(v, &star, d)?.div(&den)
}

/// `⟨t(v_{α_1}, v_{α_2}), v*_{β_3}⟩ / ⟨v_{α_3}, v*_{β_3}⟩` in units of
/// `⟨t(v_0, v_0), v_0⟩ / ⟨v_0, v_0⟩`, traced through the `U`/`V` relations
/// of the trilinear form rather than read off a closed form.
///
/// `d3` must be the spherical data of the third form.
pub fn traced_euler_ratio<R: Field>(e: &EigenTriple<R>, d3: &SphericalData<R>, depleted: bool) -> Result<R> {
    let [a1, a2, a3] = e.alpha.clone();
    let [b1, b2, b3] = e.beta.clone();
    let one = a3.one_like();
    let a3i = a3.inv()?;
    // With x = ⟨t(v_0, v_{α_2}), v*⟩ and y = ⟨t(V v_0, v_0), v*⟩, in units of ⟨t(v_0, v_0), v*⟩:
    //   x = 1 − β_2 a_1/α_3 + α_1β_1β_2/α_3 · y,   y = β_2/α_3 + α_2/α_3 · x.
    let c = a1.clone() * b1.clone() * b2.clone() * a3i.clone();
    let lhs = one.clone() - c.clone() * a2.clone() * a3i.clone();
    if lhs.is_zero() {
        return Err(Error::Degenerate("1 − α1β1α2β2/α3² vanishes".into()));
    }
    let a_1 = a1.clone() + b1.clone();
    let rhs = one.clone() - b2.clone() * a_1 * a3i.clone() + c * b2 * a3i.clone();
    let x = rhs.div(&lhs)?;
    let mut w = (one.clone() - b1 * a2.clone() * a3i.clone()) * x;
    if depleted {
        w = w * (one - a1 * a2 * a3i);
    }
    // ⟨t(v_0, v_0), v*⟩ = C⟨v_0, v*⟩ with C the unit, so the remaining factor
    // is the eigenline coordinate of v_0.
    let v0 = TestVector::basis(0, &a3);
    Ok(w * eigenline_coefficient(&v0, d3, &a3, &b3)?)
}

fn p_power<R: Field>(p: &R, e: i64) -> Result<R> {
    if e >= 0 {
        Ok(p.pow(e as u64))
    } else {
        p.inv().map(|x| x.pow(e.unsigned_abs()))
    }
}

/// The correction `1 − ϖ^{m_3}α_z/(α_xα_y)` picked up at a prime `𝔭 ≠ 𝔭_0`
/// when the `Δ`-kernel is truncated to unit determinants.
pub fn discrepancy_factor<R: Field>(t: &WeightTriple, e: &PrimeEigenData<R>, slot: &PrimeSlot, p: &R) -> Result<R> {
    if slot.distinguished {
        return domain("the discrepancy correction lives away from the distinguished prime");
    }
    let mv = m_values(t)?;
    let m3: i64 = slot.embeddings.iter().map(|&i| mv.m_i[2][i]).sum();
    let [ax, ay, az] = e.alpha.clone();
    Ok(p.one_like() - p_power(p, m3)? * az.div(&(ax * ay))?)
}

/// Compares [`discrepancy_factor`] with the first factor of `𝓔_𝔭`, after
/// checking `α_xβ_x = ϖ^{k_1+1}` and `α_yβ_y = ϖ^{k_2+1}`.
pub fn check_discrepancy<R: Field>(t: &WeightTriple, e: &PrimeEigenData<R>, slot: &PrimeSlot, p: &R) -> Result<bool> {
    for (i, k) in [&t.k1, &t.k2].into_iter().enumerate() {
        let exp: i64 = slot.embeddings.iter().map(|&s| k[s] + 1).sum();
        if e.alpha[i].clone() * e.beta[i].clone() != p_power(p, exp)? {
            return domain(format!("α·β of form {} is not ϖ^(k+1)", i + 1));
        }
    }
    Ok(discrepancy_factor(t, e, slot, p)? == euler_factor_ep_terms(t, e, slot, p)?[0])
}

/// Jet base of the Serre-Tate model: `D = Θ` and `c = 0`, the unit-root frame.
pub fn serre_tate_base(p: u64, cap: u64) -> JetBase<QExp> {
    JetBase::new(|f: &QExp| f.theta(), QExpansion::zero(p, cap))
}

/// `(e_ord(γ f), e_ord(𝓗^r f))` for a jet on the Serre-Tate model.
pub fn ordinary_projection_pair(f: &Jet<QExp>) -> Result<(QExp, QExp)> {
    let b0 = f.coeff(0);
    let base = serre_tate_base(b0.prime(), b0.cap());
    let gamma = unit_root_projection(f, Frame::UnitRoot)?.coeff(0);
    let parts = overconvergent_projection(&base, f)?;
    Ok((gamma.e_ord(), parts[0].coeff(0).e_ord()))
}

/// Checks `∇^{m_3}f_1 · f_2 = K·t(f_1, f_2) + ∇(Σ_i a_i ∇^i f_1 ∇^{m_3−1−i} f_2)` and
/// that the overconvergent projection of the left side is `K·t(f_1, f_2)`.
pub fn rearrangement_holds<R: Ring + crate::ring::IntDivisible>(
    base: &JetBase<R>,
    f1: &Jet<R>,
    f2: &Jet<R>,
    tc: &TrilinearCoeffs,
) -> Result<bool> {
    let m3 = tc.m3 as usize;
    let lift = |x: &BigRational| -> Result<R> {
        let s = f1.coeff(0);
        s.from_bigint_like(x.numer()).div_int(x.denom())
    };
    let lhs = f1.nabla_power(base, m3).mul(f2).with_weight(tc.k3);
    let k = lift(&tc.rearrangement_constant())?;
    let t = trilinear_sum(base, f1, f2, tc)?;
    let mut rhs = t.scale(&k).padded(m3);
    let a = tc.rearrangement_coeffs();
    if m3 > 0 {
        let mut inner_sum: Option<Jet<R>> = None;
        for (i, ai) in a.iter().enumerate().take(m3) {
            let term = f1.nabla_power(base, i).mul(&f2.nabla_power(base, m3 - 1 - i)).scale(&lift(ai)?);
            inner_sum = Some(match inner_sum {
                None => term,
                Some(s) => s.add(&term)?,
            });
        }
        let corr = inner_sum.expect("m3 > 0").with_weight(tc.k3 - 2).nabla(base);
        rhs = rhs.add(&corr.padded(m3))?;
    }
    if lhs.padded(m3) != rhs.padded(m3) {
        return Ok(false);
    }
    let parts = overconvergent_projection(base, &lhs)?;
    Ok(parts[0].coeff(0) == t.coeff(0).clone() * k && t.epsilon().is_zero())
}

/// One prime's contribution to the interpolation factor.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeRow {
    pub label: String,
    pub distinguished: bool,
    pub ep_terms: [BigRational; 4],
    pub ep: BigRational,
    pub ep1_terms: [BigRational; 2],
    pub ep1: BigRational,
    /// `None` when `𝓔_{𝔭,1}` vanishes.
    pub ratio: Option<BigRational>,
}

/// Every computable quantity on the right side of the interpolation formula.
#[derive(Clone, Debug, PartialEq)]
pub struct LValueReport {
    pub weights: WeightTriple,
    pub nu3: i64,
    pub rows: Vec<PrimeRow>,
    pub archimedean: BigRational,
    /// `∏ 𝓔_𝔭 / 𝓔_{𝔭,1}`, absent under an exceptional zero.
    pub combined: Option<BigRational>,
    /// `combined · archimedean`; the constant `K` and the `L`-value are not part of it.
    pub computable_part: Option<BigRational>,
    /// Labels of primes where `𝓔_{𝔭,1} = 0`.
    pub exceptional_zeros: Vec<String>,
    /// Labels of primes where `𝓔_𝔭 = 0`.
    pub vanishing_ep: Vec<String>,
}

pub fn report(
    t: &WeightTriple,
    nu3: i64,
    data: &[(PrimeSlot, PrimeEigenData<BigRational>)],
    p: &BigRational,
) -> Result<LValueReport> {
    if !is_unbalanced(t)? {
        return domain(format!("{} is not an interpolation point", fmt_weights(t)));
    }
    if data.iter().filter(|(s, _)| s.distinguished).count() != 1 {
        return domain("exactly one prime must be distinguished");
    }
    let mut rows = Vec::with_capacity(data.len());
    let mut combined = Some(BigRational::one());
    let mut exceptional_zeros = Vec::new();
    let mut vanishing_ep = Vec::new();
    for (slot, e) in data {
        let ep_terms = euler_factor_ep_terms(t, e, slot, p)?;
        let ep = ep_terms.iter().cloned().product::<BigRational>();
        let ep1_terms = euler_factor_ep1_terms(t, e, slot, p)?;
        let ep1 = ep1_terms[0].clone() * ep1_terms[1].clone();
        let ratio = if Zero::is_zero(&ep1) {
            exceptional_zeros.push(e.label.clone());
            None
        } else {
            Some(ep.clone() / ep1.clone())
        };
        if Zero::is_zero(&ep) {
            vanishing_ep.push(e.label.clone());
        }
        combined = match (combined, &ratio) {
            (Some(acc), Some(r)) => Some(acc * r),
            _ => None,
        };
        rows.push(PrimeRow { label: e.label.clone(), distinguished: slot.distinguished, ep_terms, ep, ep1_terms, ep1, ratio });
    }
    let archimedean = archimedean_factor(t, nu3)?;
    let computable_part = combined.as_ref().map(|c| c * &archimedean);
    Ok(LValueReport { weights: t.clone(), nu3, rows, archimedean, combined, computable_part, exceptional_zeros, vanishing_ep })
}

pub fn fmt_weights(t: &WeightTriple) -> String {
    let leg = |k: &[i64]| k.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    if t.degree() == 1 {
        format!("({},{},{})", t.k1[0], t.k2[0], t.k3[0])
    } else {
        format!("([{}],[{}],[{}])", leg(&t.k1), leg(&t.k2), leg(&t.k3))
    }
}

fn fmt_opt(x: &Option<BigRational>) -> String {
    x.as_ref().map_or_else(|| "undefined".to_string(), fmt_rational)
}

impl LValueReport {
    /// Rows as `(weights, prime, 𝓔_𝔭, 𝓔_{𝔭,1}, ratio)` strings.
    pub fn cells(&self) -> Vec<[String; 5]> {
        let w = fmt_weights(&self.weights);
        self.rows
            .iter()
            .map(|r| [w.clone(), r.label.clone(), fmt_rational(&r.ep), fmt_rational(&r.ep1), fmt_opt(&r.ratio)])
            .collect()
    }

    /// `key: value` lines; keys are prefixed by `prefix`.
    pub fn machine(&self, prefix: &str) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(out, "{prefix}{}.ep: {}", r.label, fmt_rational(&r.ep));
            let _ = writeln!(out, "{prefix}{}.ep1: {}", r.label, fmt_rational(&r.ep1));
            let _ = writeln!(out, "{prefix}{}.ratio: {}", r.label, fmt_opt(&r.ratio));
        }
        let _ = writeln!(out, "{prefix}product: {}", fmt_opt(&self.combined));
        let _ = writeln!(out, "{prefix}archimedean: {}", fmt_rational(&self.archimedean));
        let _ = writeln!(out, "{prefix}computable: {}", fmt_opt(&self.computable_part));
        for z in &self.exceptional_zeros {
            let _ = writeln!(out, "{prefix}exceptional_zero: {z}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke_euler::{euler_factor_ep, euler_factor_ep1, sym};
    use crate::nearly_ovc::trilinear_coeffs;
    use crate::ring::{rat, ratio};
    use crate::symbolic::RatFunc;

    fn qexp(terms: &[(u64, i64)]) -> QExp {
        QExpansion::from_terms(3, 200, terms.iter().map(|&(a, c)| (a, rat(c)))).unwrap()
    }

    #[test]
    fn traced_ratio_matches_closed_form() {
        let e = sym::triple();
        let d3 = sym::data(2);
        for depleted in [false, true] {
            assert_eq!(traced_euler_ratio(&e, &d3, depleted).unwrap(), crate::hecke_euler::euler_ratio(&e, depleted).unwrap());
        }
    }

    #[test]
    fn eigenline_examples() {
        let d = sym::data(2);
        let (a, b) = (sym::alpha(2), sym::beta(2));
        let one = RatFunc::int(sym::NVARS, 1);
        assert_eq!(eigenline_coefficient(&stabilize(&d, &b).unwrap(), &d, &a, &b).unwrap(), one);
        assert!(eigenline_coefficient(&stabilize(&d, &a).unwrap(), &d, &a, &b).unwrap().is_zero());
        assert!(matches!(eigenline_coefficient(&stabilize(&d, &a).unwrap(), &d, &a, &a), Err(Error::Degenerate(_))));
    }

    #[test]
    fn eigenline_matches_two_by_two_solve() {
        // v = c0 v_0 + c1 v_1 = x v_α + y v_β with v_α = v_0 − β/ε v_1, v_β = v_0 − α/ε v_1.
        let d = sym::data(2);
        let (a, b) = (sym::alpha(2), sym::beta(2));
        for (c0, c1) in [(1, 0), (0, 1), (3, -2), (-5, 7)] {
            let c0 = RatFunc::int(sym::NVARS, c0);
            let c1 = RatFunc::int(sym::NVARS, c1);
            let v = TestVector::basis(0, &c0).scale(&c0).add(&TestVector::basis(1, &c1).scale(&c1));
            let x = (a.clone() * c0 + d.eps.clone() * c1).div(&(a.clone() - b.clone())).unwrap();
            assert_eq!(eigenline_coefficient(&v, &d, &a, &b).unwrap(), x);
        }
    }

    #[test]
    fn discrepancy_factor_matches_first_euler_term() {
        let t = WeightTriple::new(vec![2, 2], vec![2, 2], vec![6, 2]).unwrap();
        let slot = PrimeSlot { distinguished: false, embeddings: vec![1] };
        let p = rat(3);
        let e = PrimeEigenData { label: "p1".into(), alpha: [rat(1), rat(3), rat(5)], beta: [rat(27), rat(9), rat(7)] };
        assert!(check_discrepancy(&t, &e, &slot, &p).unwrap());
        assert_eq!(discrepancy_factor(&t, &e, &slot, &p).unwrap(), rat(-4));
        let bad = PrimeEigenData { beta: [rat(26), rat(9), rat(7)], ..e };
        assert!(check_discrepancy(&t, &bad, &slot, &p).is_err());
    }

    #[test]
    fn ordinary_projection_agrees_on_jets() {
        let f = Jet::new(vec![qexp(&[(0, 2), (1, 1), (4, -3)]), qexp(&[(0, 5), (2, 7)])], 5).unwrap();
        let (lhs, rhs) = ordinary_projection_pair(&f).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn rearrangement_on_serre_tate_model() {
        let base = serre_tate_base(3, 200);
        for (k1, k2, k3) in [(1, 1, 2), (1, 1, 4), (2, 1, 7), (2, 2, 8)] {
            let tc = trilinear_coeffs(k1, k2, k3).unwrap();
            let f1 = Jet::constant(qexp(&[(1, 1), (2, -2), (5, 3)]), k1);
            let f2 = Jet::constant(qexp(&[(0, 1), (1, 4), (7, 1)]), k2);
            assert!(rearrangement_holds(&base, &f1, &f2, &tc).unwrap(), "({k1},{k2},{k3})");
        }
    }

    fn slot0() -> PrimeSlot {
        PrimeSlot { distinguished: true, embeddings: vec![0] }
    }

    #[test]
    fn report_with_trivial_beta_is_clean() {
        let t = WeightTriple::scalar(2, 2, 6);
        let e = PrimeEigenData { label: "p0".into(), alpha: [rat(1), rat(1), rat(1)], beta: [rat(0), rat(0), rat(0)] };
        let r = report(&t, 0, &[(slot0(), e)], &rat(5)).unwrap();
        assert_eq!(r.combined, Some(rat(1)));
        assert!(r.exceptional_zeros.is_empty());
        assert_eq!(r.computable_part, Some(rat(9)));
    }

    #[test]
    fn report_matches_module_outputs() {
        let t = WeightTriple::scalar(2, 2, 6);
        let p = rat(5);
        let e = PrimeEigenData { label: "p0".into(), alpha: [rat(1), rat(2), rat(3)], beta: [rat(5), ratio(5, 2), rat(7)] };
        let r = report(&t, 0, &[(slot0(), e.clone())], &p).unwrap();
        let ep = euler_factor_ep(&t, &e, &slot0(), &p).unwrap();
        let ep1 = euler_factor_ep1(&t, &e, &slot0(), &p).unwrap();
        assert_eq!(r.rows[0].ep, ep);
        assert_eq!(r.rows[0].ep1, ep1);
        assert_eq!(r.combined, Some(ep / ep1));
        assert_eq!(r.archimedean, archimedean_factor(&t, 0).unwrap());
    }

    #[test]
    fn exceptional_zero_is_flagged() {
        let t = WeightTriple::scalar(2, 2, 6);
        let e = PrimeEigenData { label: "p0".into(), alpha: [rat(1), rat(1), rat(1)], beta: [rat(0), rat(0), rat(125)] };
        let r = report(&t, 0, &[(slot0(), e)], &rat(5)).unwrap();
        assert_eq!(r.exceptional_zeros, vec!["p0".to_string()]);
        assert_eq!(r.combined, None);
        assert!(r.machine("").contains("exceptional_zero: p0"));
    }

    #[test]
    fn pipeline_trivial_case() {
        let t = WeightTriple::scalar(1, 1, 2);
        let f1 = SyntheticFamily::new("x", 1, rat(1), rat(3), vec![qexp(&[(1, 2), (3, 5), (6, 1)])]).unwrap();
        let f2 = SyntheticFamily::new("y", 1, rat(1), rat(3), vec![qexp(&[(0, 4), (2, 1)])]).unwrap();
        let out = pipeline_eval(&f1, &f2, &t, [0, 0, 0]).unwrap();
        let expect = (f1.values()[0].depletion().unwrap() * f2.values()[0].clone()).e_ord();
        assert_eq!(out, vec![expect]);
        let z = SyntheticFamily::zero("x", 1, 3, 200, 0, rat(1), rat(3)).unwrap();
        assert!(pipeline_eval(&z, &f2, &t, [0, 0, 0]).unwrap()[0].is_zero());
        assert!(f1.check_eigenline().unwrap());
    }

    #[test]
    fn pipeline_checks_degrees_and_cap() {
        let t = WeightTriple::scalar(1, 1, 4);
        let f1 = SyntheticFamily::new("x", 1, rat(1), rat(3), vec![qexp(&[(1, 1)]); 2]).unwrap();
        let f2 = SyntheticFamily::new("y", 1, rat(1), rat(3), vec![qexp(&[(0, 1)]); 3]).unwrap();
        assert!(pipeline_eval(&f1, &f2, &t, [1, 0, 1]).is_ok());
        assert!(pipeline_eval(&f1, &f2, &t, [0, 0, 0]).is_err());
        let big = SyntheticFamily::new("y", 1, rat(1), rat(3), vec![qexp(&[(199, 1)]); 3]).unwrap();
        let f1b = SyntheticFamily::new("x", 1, rat(1), rat(3), vec![qexp(&[(2, 1)]); 2]).unwrap();
        assert!(matches!(pipeline_eval(&f1b, &big, &t, [1, 0, 1]), Err(Error::Overflow(_))));
    }
}
