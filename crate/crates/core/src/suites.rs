//! Invariant suites, one per module, run by `ptriple verify`.
//!
//! Every suite is deterministic: random inputs come from a fixed seed.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::{bgg_check, classical_projection, classical_up_matrix, compactness_witness, up_operator, Distribution, DiskSpace};
use crate::error::{Error, Result};
use crate::hecke_euler::{dual_eigenvector, euler_ratio, inner, stabilize, sym, PrimeEigenData, PrimeSlot};
use crate::lfunction::{check_discrepancy, ordinary_projection_pair, rearrangement_holds, report, serre_tate_base, traced_euler_ratio};
use crate::matrix::Matrix;
use crate::nearly_ovc::{overconvergent_projection, reassemble, trilinear_coeffs, trilinear_product, Jet, JetBase};
use crate::padic::{PadicContext, PadicRing, PadicScalar, UnramifiedContext, UnramifiedScalar};
use crate::ring::{rat, Field, Ring};
use crate::serre_tate::{specialize_universal, theta_power_universal, QExpansion};
use crate::spectral::{char_series, e_ord, newton_polygon, slope_projector, Slope, SlopeCut};
use crate::symbolic::{solve_bareiss, MPoly, RatFunc};
use crate::weights::{is_unbalanced, m_values, WeightTriple};

/// Suite names accepted by [`run_suite`], sorted.
pub const SUITES: [&str; 8] = ["distributions", "euler", "lfunction", "nearly-ovc", "padic", "serre-tate", "spectral", "weights"];

const SEED: u64 = 0x5eed;

/// Outcome of one identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    /// Error text when the check could not be evaluated.
    pub detail: Option<String>,
}

fn check(suite: &'static str, name: &'static str, f: impl FnOnce() -> Result<bool>) -> Check {
    match f() {
        Ok(passed) => Check { suite, name, passed, detail: None },
        Err(e) => Check { suite, name, passed: false, detail: Some(e.to_string()) },
    }
}

pub fn run_suite(name: &str) -> Result<Vec<Check>> {
    Ok(match name {
        "distributions" => distributions_suite(),
        "euler" => euler_suite(),
        "lfunction" => lfunction_suite(),
        "nearly-ovc" => nearly_ovc_suite(),
        "padic" => padic_suite(),
        "serre-tate" => serre_tate_suite(),
        "spectral" => spectral_suite(),
        "weights" => weights_suite(),
        _ => return Err(Error::Config(format!("unknown suite '{name}'; expected one of {}", SUITES.join(", ")))),
    })
}

/// All suites, in [`SUITES`] order.
pub fn run_all() -> Vec<Check> {
    SUITES.iter().flat_map(|s| run_suite(s).expect("listed suite")).collect()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn padic_suite() -> Vec<Check> {
    const S: &str = "padic";
    let ctx = PadicContext::new(5, 10).expect("valid context");
    let mut r = rng();
    let units: Vec<PadicScalar> =
        (0..40).map(|_| ctx.scalar(r.gen_range(1..ctx.modulus() as i64))).filter(|x| x.is_unit()).collect();
    vec![
        check(S, "x * x^-1 = 1 on units", || Ok(units.iter().all(|x| (*x * x.inverse().unwrap()).eq_at(&ctx.one())))),
        check(S, "exp(log(x)) = x on 1 + pZ_p", || {
            for x in &units {
                let y = ctx.one() + x.mul_p_power(1);
                if !y.log()?.exp()?.eq_at(&y) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        check(S, "teichmuller lift is a (p-1)-th root of unity", || {
            Ok(units.iter().all(|x| {
                let w = x.teichmuller();
                Ring::pow(&w, 4).eq_at(&ctx.one()) && w.residue() % 5 == x.residue() % 5
            }))
        }),
        check(S, "frobenius has order f", || {
            let ur = UnramifiedContext::standard(PadicContext::new(3, 8)?, 3)?;
            let x = UnramifiedScalar::from_coeffs(&ur, vec![ur.base().scalar(2), ur.base().scalar(7), ur.base().scalar(-4)])?;
            Ok(x.frobenius_power(3) == x && x.frobenius_power(1) != x)
        }),
    ]
}

fn weights_suite() -> Vec<Check> {
    const S: &str = "weights";
    vec![
        check(S, "(2,2,6) is unbalanced with m0 = 5, m3 = 1", || {
            let t = WeightTriple::scalar(2, 2, 6);
            let mv = m_values(&t)?;
            Ok(is_unbalanced(&t)? && mv.m0 == 5 && mv.m3_tau0 == 1)
        }),
        check(S, "balanced triples are rejected", || Ok(!is_unbalanced(&WeightTriple::scalar(2, 2, 2))?)),
        check(S, "m_tau sums to the weight total", || {
            let t = WeightTriple::new(vec![2, 3], vec![2, 3], vec![8, 4])?;
            let mv = m_values(&t)?;
            Ok((0..2).all(|i| 2 * mv.m[i] == t.k1[i] + t.k2[i] + t.k3[i]))
        }),
    ]
}

fn uring(p: u64, f: usize, n: u32) -> Result<Arc<UnramifiedContext>> {
    UnramifiedContext::standard(PadicContext::new(p, n)?, f)
}

fn distributions_suite() -> Vec<Check> {
    const S: &str = "distributions";
    vec![
        check(S, "U factors through the finer level (compactness)", || {
            let space = DiskSpace::new(uring(3, 1, 10)?, 1, 2)?;
            compactness_witness(&space, &[1])
        }),
        check(S, "classical projection is U-equivariant", || {
            let r = uring(3, 1, 12)?;
            let space = DiskSpace::new(r.clone(), 1, 3)?;
            let cu = classical_up_matrix(&r, &[2])?;
            for i in 0..space.dim() {
                let (disk, jm) = space.split(i);
                let mu = Distribution::dual_basis(space.clone(), vec![2], disk, &jm);
                let lhs = classical_projection(&up_operator(&mu)?)?;
                let rhs = cu.apply(&classical_projection(&mu)?);
                if !lhs.iter().zip(&rhs).all(|(a, b)| a.eq_at(b)) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        check(S, "theta intertwines U with slope >= k+1 on its image (p = 3, k <= 2)", || {
            let r = uring(3, 1, 16)?;
            for k in 0..=2 {
                let space = DiskSpace::new(r.clone(), 1, k as usize + 2)?;
                let c = bgg_check(&space, &[k], 0)?;
                if !(c.intertwines && c.min_slope_ok) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    ]
}

fn random_qexp(r: &mut ChaCha8Rng, p: u64, cap: u64, terms: usize, max_exp: u64) -> QExpansion<BigRational> {
    let t: Vec<(u64, BigRational)> = (0..terms).map(|_| (r.gen_range(0..=max_exp), rat(r.gen_range(-9..=9)))).collect();
    QExpansion::from_terms(p, cap, t).expect("exponents below the cap")
}

fn serre_tate_suite() -> Vec<Check> {
    const S: &str = "serre-tate";
    let p = 3;
    let mut r = rng();
    let samples: Vec<_> = (0..100).map(|_| random_qexp(&mut r, p, 10_000, 6, 200)).collect();
    let all = |f: &dyn Fn(&QExpansion<BigRational>) -> Result<bool>| -> Result<bool> {
        for s in &samples {
            if !f(s)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    vec![
        check(S, "U V = id", || all(&|f| Ok(f.v_p0()?.u_p0() == *f))),
        check(S, "V U keeps the p-divisible part", || {
            all(&|f| {
                let div = QExpansion::from_terms(p, f.cap(), f.terms().iter().filter(|(a, _)| *a % p == 0).map(|(a, c)| (*a, c.clone())))?;
                Ok(f.u_p0().v_p0()? == div)
            })
        }),
        check(S, "U Theta = p Theta U", || all(&|f| Ok(f.theta().u_p0() == f.u_p0().theta().scale(&rat(p as i64))))),
        check(S, "depletion is idempotent with image in ker U", || {
            all(&|f| {
                let d = f.depletion()?;
                Ok(d.depletion()? == d && d.u_p0().is_zero())
            })
        }),
        check(S, "universal theta power specializes to Theta^k, k = 0..5", || {
            let ctx = PadicContext::new(p, 12)?;
            let f = QExpansion::from_terms(p, 10_000, [(1, ctx.scalar(2)), (2, ctx.scalar(-1)), (7, ctx.scalar(5)), (11, ctx.one())])?;
            for k in 0..=5u64 {
                let uni = theta_power_universal(&f, k % (p - 1), 12)?;
                let spec = specialize_universal(&uni, ctx, k)?;
                let direct = f.theta_power(k)?;
                let ok = direct.terms().iter().all(|(a, c)| spec.coeff(*a).is_some_and(|s| s.eq_at(c)));
                if !ok || spec.terms().len() != direct.terms().len() {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    ]
}

fn symbolic_base() -> JetBase<MPoly> {
    // Q[z, c] with D = (1 + z²) ∂_z and a free symbol c.
    let h = MPoly::int(2, 1) + MPoly::var(2, 0) * MPoly::var(2, 0);
    JetBase::new(move |f: &MPoly| h.clone() * f.derivative(0), MPoly::var(2, 1))
}

fn random_poly(r: &mut ChaCha8Rng) -> MPoly {
    let z = MPoly::var(2, 0);
    (0..3).fold(MPoly::zero(2), |acc, e| acc + Ring::pow(&z, e).scale(&rat(r.gen_range(-5..=5))))
}

fn random_jet(r: &mut ChaCha8Rng, order: usize, k: i64) -> Jet<MPoly> {
    Jet::new((0..=order).map(|_| random_poly(r)).collect(), k).expect("non-empty jet")
}

fn nearly_ovc_suite() -> Vec<Check> {
    const S: &str = "nearly-ovc";
    let base = symbolic_base();
    vec![
        check(S, "eps nabla^j = j(k+j-1) nabla^(j-1)", || {
            let mut r = rng();
            for _ in 0..10 {
                let k = r.gen_range(1..=12);
                let f = Jet::constant(random_poly(&mut r), k);
                for j in 1..=4usize {
                    let lhs = f.nabla_power(&base, j).epsilon();
                    let c = MPoly::int(2, j as i64 * (k + j as i64 - 1));
                    if lhs != f.nabla_power(&base, j - 1).scale(&c) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }),
        check(S, "overconvergent projection reassembles", || {
            let mut r = rng();
            for k in 1..=8i64 {
                for m in 0..=((k - 1) / 2) as usize {
                    let f = random_jet(&mut r, m, k);
                    if reassemble(&base, &overconvergent_projection(&base, &f)?)? != f.padded(m) {
                        return Ok(false);
                    }
                }
            }
            Ok(overconvergent_projection(&base, &random_jet(&mut r, 2, 4)).is_err())
        }),
        check(S, "trilinear product lies in ker eps", || {
            let mut r = rng();
            for (k1, k2, k3) in [(1, 1, 4), (2, 3, 9), (3, 1, 8)] {
                let tc = trilinear_coeffs(k1, k2, k3)?;
                let f1 = Jet::constant(random_poly(&mut r), k1);
                let f2 = Jet::constant(random_poly(&mut r), k2);
                trilinear_product(&base, &f1, &f2, &tc)?;
            }
            Ok(true)
        }),
        check(S, "coefficient recurrence and Vandermonde sum", || {
            for k1 in 1..=5 {
                for k2 in 1..=5 {
                    for m3 in 0..=4 {
                        let tc = trilinear_coeffs(k1, k2, k1 + k2 + 2 * m3)?;
                        if !(tc.recurrence_holds() && tc.vandermonde_holds()) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }),
    ]
}

/// `⟨t(·,·), v*_{β_3}⟩` on `V^i v_0 ⊗ V^j v_0` (`i, j ≤ 2`), solved from the
/// `U`/`V` relations of an invariant trilinear form, then contracted with the
/// stabilized (optionally depleted) first vector. Entry `3i + j` is `P_{ij}`.
pub fn euler_ratio_oracle(depleted: bool) -> Result<RatFunc> {
    let n = sym::NVARS;
    let v = |i| MPoly::var(n, i);
    let (a1, b1, a2, b2, a3) = (v(0), v(1), v(2), v(3), v(4));
    let zero = MPoly::zero(n);
    let one = MPoly::int(n, 1);
    let idx = |i: usize, j: usize| 3 * i + j;
    let mut rows: Vec<Vec<MPoly>> = Vec::new();
    let mut rhs: Vec<MPoly> = Vec::new();
    let mut eq = |terms: &[(usize, MPoly)], b: MPoly| {
        let mut row = vec![zero.clone(); 9];
        for (k, c) in terms {
            row[*k] = row[*k].clone() + c.clone();
        }
        rows.push(row);
        rhs.push(b);
    };
    eq(&[(idx(0, 0), one.clone())], one.clone());
    // ⟨t(Vv, Vv'), v*⟩ = α_3^{-1}⟨t(v, v'), v*⟩
    for (i, j) in [(0, 0), (1, 1), (0, 1), (1, 0)] {
        eq(&[(idx(i + 1, j + 1), a3.clone()), (idx(i, j), -one.clone())], zero.clone());
    }
    // ⟨t(v, Vv'), v*⟩ = α_3^{-1}⟨t(Uv, v'), v*⟩ with U v_0 = a v_0 − αβ V v_0 and U V = id.
    let s1 = a1.clone() + b1.clone();
    let p1 = a1.clone() * b1.clone();
    eq(&[(idx(0, 1), a3.clone()), (idx(0, 0), -s1.clone()), (idx(1, 0), p1.clone())], zero.clone());
    eq(&[(idx(0, 2), a3.clone()), (idx(0, 1), -s1.clone()), (idx(1, 1), p1.clone())], zero.clone());
    let s2 = a2.clone() + b2.clone();
    let p2 = a2.clone() * b2.clone();
    eq(&[(idx(1, 0), a3.clone()), (idx(0, 0), -s2.clone()), (idx(0, 1), p2.clone())], zero.clone());
    eq(&[(idx(2, 0), a3.clone()), (idx(1, 0), -s2), (idx(1, 1), p2)], zero.clone());
    let (num, det) = solve_bareiss(&rows, &rhs)?;
    let pij = |i: usize, j: usize| RatFunc::new(num[idx(i, j)].clone(), det.clone());
    let c: Vec<MPoly> = if depleted { vec![one.clone(), -s1, p1] } else { vec![one.clone(), -b1] };
    let d = [one, -b2];
    let mut acc = RatFunc::from_poly(MPoly::zero(n));
    for (i, ci) in c.iter().enumerate() {
        for (j, dj) in d.iter().enumerate() {
            acc = acc + RatFunc::from_poly(ci.clone() * dj.clone()) * pij(i, j)?;
        }
    }
    let d3 = sym::data(2);
    let v0 = crate::hecke_euler::TestVector::basis(0, &sym::alpha(2));
    let star = dual_eigenvector(&sym::alpha(2));
    let scale = inner(&v0, &star, &d3)?.div(&inner(&stabilize(&d3, &sym::beta(2))?, &star, &d3)?)?;
    Ok(acc * scale)
}

/// `⟨v_{α_3}, v*_{β_3}⟩` as displayed in the proof of the Euler-factor formula:
/// `(β̄ − ᾱ + ᾱq^{-1}(ᾱβ̄^{-1} − 1)) / (1 + q^{-1})`.
pub fn petersson_closed_form() -> Result<RatFunc> {
    let (a, b, q) = (sym::alpha(2), sym::beta(2), sym::q());
    let (ab, bb) = (sym::conj(&a), sym::conj(&b));
    let one = RatFunc::int(sym::NVARS, 1);
    let qi = q.inv()?;
    let num = bb.clone() - ab.clone() + ab.clone() * qi.clone() * (ab.div(&bb)? - one.clone());
    num.div(&(one + qi))
}

fn euler_suite() -> Vec<Check> {
    const S: &str = "euler";
    let e = sym::triple();
    vec![
        check(S, "closed form equals the linear-system oracle", || Ok(euler_ratio_oracle(false)? == euler_ratio(&e, false)?)),
        check(S, "depleted closed form equals the linear-system oracle", || Ok(euler_ratio_oracle(true)? == euler_ratio(&e, true)?)),
        check(S, "traced proof steps reproduce both closed forms", || {
            let d3 = sym::data(2);
            Ok(traced_euler_ratio(&e, &d3, false)? == euler_ratio(&e, false)?
                && traced_euler_ratio(&e, &d3, true)? == euler_ratio(&e, true)?)
        }),
        check(S, "<v_alpha, v*_beta> from the recursions matches its closed form", || {
            let d = sym::data(2);
            let lhs = inner(&stabilize(&d, &sym::beta(2))?, &dual_eigenvector(&sym::alpha(2)), &d)?;
            Ok(lhs == petersson_closed_form()?)
        }),
        check(S, "alpha_3 = beta_3 is rejected", || {
            let mut t = sym::triple();
            t.beta[2] = t.alpha[2].clone();
            Ok(matches!(euler_ratio(&t, false), Err(Error::Degenerate(_))))
        }),
    ]
}

fn random_padic_matrix(r: &mut ChaCha8Rng, ctx: &PadicContext, n: usize) -> Matrix<PadicScalar> {
    Matrix::from_fn(n, n, |_, _| ctx.scalar(r.gen_range(0..ctx.modulus() as i64)))
}

/// `U = P·diag(d)·P^{-1}` with `P` unimodular; `d` mixes units and multiples of `p`.
pub fn mixed_slope_matrix(r: &mut impl Rng, ctx: &PadicContext, n: usize) -> Result<Matrix<PadicScalar>> {
    let p = ctx.p as i64;
    let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => ctx.scalar(r.gen_range(0..p * p)),
        std::cmp::Ordering::Equal => ctx.one(),
        std::cmp::Ordering::Less => ctx.zero(),
    });
    let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => ctx.scalar(r.gen_range(0..p * p)),
        std::cmp::Ordering::Equal => ctx.one(),
        std::cmp::Ordering::Greater => ctx.zero(),
    });
    let pm = &lower * &upper;
    let diag: Vec<PadicScalar> = (0..n)
        .map(|i| {
            let unit = r.gen_range(1..p) + p * r.gen_range(0..p);
            if i % 2 == 0 {
                ctx.scalar(unit)
            } else {
                ctx.scalar(unit).mul_p_power(r.gen_range(1..=3))
            }
        })
        .collect();
    let cols: Vec<Vec<PadicScalar>> = (0..n)
        .map(|j| {
            let e: Vec<PadicScalar> = (0..n).map(|i| if i == j { ctx.one() } else { ctx.zero() }).collect();
            pm.solve_unimodular(&e)
        })
        .collect::<Result<_>>()?;
    let inv = Matrix::from_fn(n, n, |i, j| cols[j][i]);
    Ok(&(&pm * &Matrix::diagonal(&diag)) * &inv)
}

fn spectral_suite() -> Vec<Check> {
    const S: &str = "spectral";
    let ctx = PadicContext::new(5, 12).expect("valid context");
    vec![
        check(S, "constant term 1 and top coefficient ±det", || {
            let mut r = rng();
            let u = random_padic_matrix(&mut r, &ctx, 4);
            let cs = char_series(&u)?;
            Ok(cs.coeffs[0] == ctx.one() && cs.degree() <= 4)
        }),
        check(S, "diagonal slopes are recovered", || {
            let d = Matrix::diagonal(&[ctx.scalar(1), ctx.scalar(25), ctx.scalar(5), ctx.scalar(125 * 2)]);
            let np = newton_polygon(&char_series(&d)?)?;
            Ok(np.slopes() == vec![Slope::from_integer(0), Slope::from_integer(1), Slope::from_integer(2), Slope::from_integer(3)])
        }),
        check(S, "e_ord is an idempotent commuting with U and agrees with the 0+ projector", || {
            let mut r = rng();
            for _ in 0..5 {
                let u = mixed_slope_matrix(&mut r, &ctx, 5)?;
                let e = e_ord(&u)?;
                if !((&e * &e).eq_at(&e) && (&e * &u).eq_at(&(&u * &e))) {
                    return Ok(false);
                }
                let proj = slope_projector(&u, SlopeCut::ZeroPlus)?.to_matrix()?;
                if !proj.eq_at(&e) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    ]
}

fn lfunction_suite() -> Vec<Check> {
    const S: &str = "lfunction";
    vec![
        check(S, "discrepancy correction is the first factor of E_p", || {
            let t = WeightTriple::new(vec![2, 2], vec![2, 2], vec![6, 2])?;
            let slot = PrimeSlot { distinguished: false, embeddings: vec![1] };
            let e = PrimeEigenData { label: "p1".into(), alpha: [rat(1), rat(3), rat(5)], beta: [rat(27), rat(9), rat(7)] };
            check_discrepancy(&t, &e, &slot, &rat(3))
        }),
        check(S, "e_ord(gamma f) = e_ord(H^r f) on Serre-Tate jets", || {
            let mut r = rng();
            for _ in 0..10 {
                let k = r.gen_range(3..=9);
                let m = r.gen_range(0..=((k - 1) / 2) as usize);
                let coeffs = (0..=m).map(|_| random_qexp(&mut r, 3, 10_000, 4, 60)).collect();
                let (a, b) = ordinary_projection_pair(&Jet::new(coeffs, k)?)?;
                if a != b {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        check(S, "nabla^m3 rearrangement constant matches the trilinear coefficients", || {
            let mut r = rng();
            let base = serre_tate_base(3, 10_000);
            for (k1, k2, k3) in [(1, 1, 2), (1, 1, 4), (2, 1, 7), (1, 2, 9)] {
                let tc = trilinear_coeffs(k1, k2, k3)?;
                let f1 = Jet::constant(random_qexp(&mut r, 3, 10_000, 3, 40), k1);
                let f2 = Jet::constant(random_qexp(&mut r, 3, 10_000, 3, 40), k2);
                if !rearrangement_holds(&base, &f1, &f2, &tc)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        check(S, "report with beta = 0 has combined factor 1", || {
            let e = PrimeEigenData { label: "p0".into(), alpha: [rat(1), rat(1), rat(1)], beta: [rat(0), rat(0), rat(0)] };
            let slot = PrimeSlot { distinguished: true, embeddings: vec![0] };
            let rep = report(&WeightTriple::scalar(2, 2, 6), 0, &[(slot, e)], &rat(5))?;
            Ok(rep.combined == Some(BigRational::one()) && rep.exceptional_zeros.is_empty())
        }),
    ]
}

/// Number of checks that failed.
pub fn failures(checks: &[Check]) -> usize {
    checks.iter().filter(|c| !c.passed).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for s in SUITES {
            let checks = run_suite(s).unwrap();
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.passed, "{}: {} {:?}", c.suite, c.name, c.detail);
            }
        }
    }

    #[test]
    fn unknown_suite_is_a_config_error() {
        assert!(matches!(run_suite("nope"), Err(Error::Config(_))));
    }
}
