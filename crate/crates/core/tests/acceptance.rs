//! Acceptance gate: one PASS/FAIL line per criterion with its wall-clock time.
//!
//! Runs without the libtest harness so the report is always printed.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_triple::cli;
use padic_triple::distributions::{bgg_check, DiskSpace};
use padic_triple::hecke_euler::{dual_eigenvector, euler_ratio, inner, stabilize, sym};
use padic_triple::lfunction::ordinary_projection_pair;
use padic_triple::matrix::Matrix;
use padic_triple::nearly_ovc::{overconvergent_projection, reassemble, trilinear_coeffs, trilinear_sum, Jet, JetBase};
use padic_triple::padic::{PadicContext, PadicScalar, UnramifiedContext};
use padic_triple::ring::{Field, Ring};
use padic_triple::serre_tate::{specialize_universal, theta_power_universal, QExpansion};
use padic_triple::spectral::{char_series, e_ord, newton_polygon, slope_projector, Slope, SlopeCut};
use padic_triple::symbolic::{MPoly, RatFunc};
use padic_triple::Error;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: padic_triple::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_5500 ^ salt)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

// ---------------------------------------------------------------------------
// Jet model over Q[z] with a random derivation h(z)·d/dz and random constant c.

fn random_poly(r: &mut ChaCha8Rng, deg: u32) -> MPoly {
    let z = MPoly::var(1, 0);
    (0..=deg).fold(MPoly::zero(1), |acc, e| acc + Ring::pow(&z, e as u64).scale(&rat(r.gen_range(-6..=6))))
}

fn random_base(r: &mut ChaCha8Rng) -> JetBase<MPoly> {
    random_base_deg(r, 2)
}

fn random_base_deg(r: &mut ChaCha8Rng, deg: u32) -> JetBase<MPoly> {
    let h = random_poly(r, deg);
    let c = MPoly::constant(1, BigRational::new(r.gen_range(-9..=9).into(), r.gen_range(1..=4).into()));
    JetBase::new(move |f: &MPoly| h.clone() * f.derivative(0), c)
}

fn epsilon_nabla() -> Outcome {
    let mut r = rng(1);
    for n in 0..100 {
        let base = random_base(&mut r);
        let b0 = random_poly(&mut r, 3);
        for k in 0..=12i64 {
            let f = Jet::constant(b0.clone(), k);
            let mut prev = f.clone();
            for j in 1..=5i64 {
                let cur = prev.nabla(&base);
                let expect = prev.scale(&MPoly::int(1, j * (k + j - 1)));
                ensure(cur.epsilon() == expect, || format!("jet {n}: fails at k = {k}, j = {j}"))?;
                prev = cur;
            }
        }
    }
    Ok(())
}

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn trilinear_kernel() -> Outcome {
    let mut r = rng(2);
    for k1 in 1..=5i64 {
        for k2 in 1..=5i64 {
            for m3 in 0..=4i64 {
                let k3 = k1 + k2 + 2 * m3;
                let tc = lib(trilinear_coeffs(k1, k2, k3))?;
                let m = (k1 + k2 + k3) / 2;
                // c_j = (−1)^j C(m3, j) C(m − 2, k1 + j − 1)
                let c: Vec<i128> =
                    (0..=m3).map(|j| (if j % 2 == 0 { 1 } else { -1 }) * binom(m3, j) * binom(m - 2, k1 + j - 1)).collect();
                let lib_c: Vec<i128> = tc.c.iter().map(|x| i128::try_from(x).unwrap()).collect();
                ensure(c == lib_c, || format!("coefficients differ at ({k1},{k2},{k3})"))?;
                for n in 0..m3 {
                    let (i, nn) = (n as usize, n as i128);
                    let lhs = c[i + 1] * (nn + 1) * (k1 as i128 + nn) + c[i] * (m3 as i128 - nn) * (k2 as i128 + m3 as i128 - nn - 1);
                    ensure(lhs == 0, || format!("recurrence fails at ({k1},{k2},{k3}), n = {n}"))?;
                }
                let total: i128 = c.iter().map(|x| x.abs()).sum();
                ensure(total == binom(k3 - 2, k2 + m3 - 1), || format!("Vandermonde sum fails at ({k1},{k2},{k3})"))?;
                ensure(tc.recurrence_holds() && tc.vandermonde_holds(), || "library identity checks disagree".into())?;

                for pair in 0..100 {
                    let base = random_base_deg(&mut r, 1);
                    let f1 = Jet::constant(random_poly(&mut r, 2), k1);
                    let f2 = Jet::constant(random_poly(&mut r, 2), k2);
                    let t = lib(trilinear_sum(&base, &f1, &f2, &tc))?;
                    ensure(t.epsilon().is_zero(), || format!("ε(t) ≠ 0 at ({k1},{k2},{k3}), pair {pair}"))?;
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn serre_tate() -> Outcome {
    let p = 3u64;
    let cap = 10_000;
    let n_prec = 12;
    let ctx = lib(PadicContext::new(p, n_prec))?;
    let modulus = ctx.modulus() as i128;
    let mut r = rng(3);
    for n in 0..500 {
        let terms: Vec<(u64, BigRational)> = (0..r.gen_range(1..=8)).map(|_| (r.gen_range(0..=300), rat(r.gen_range(-20..=20)))).collect();
        let f = lib(QExpansion::from_terms(p, cap, terms))?;
        let fail = |what: &str| format!("expansion {n}: {what}");

        ensure(lib(f.v_p0())?.u_p0() == f, || fail("U V ≠ id"))?;
        let divisible = lib(QExpansion::from_terms(p, cap, f.terms().iter().filter(|(a, _)| *a % p == 0).map(|(a, c)| (*a, c.clone()))))?;
        ensure(lib(f.u_p0().v_p0())? == divisible, || fail("V U is not the p-divisible projection"))?;
        ensure(f.theta().u_p0() == f.u_p0().theta().scale(&rat(p as i64)), || fail("U Θ ≠ p Θ U"))?;
        let d = lib(f.depletion())?;
        ensure(lib(d.depletion())? == d, || fail("depletion not idempotent"))?;
        ensure(d.u_p0().is_zero(), || fail("depletion image not in ker U"))?;
        let ker = lib(QExpansion::from_terms(p, cap, f.terms().iter().filter(|(a, _)| *a % p != 0).map(|(a, c)| (*a, c.clone()))))?;
        ensure(ker.u_p0().is_zero() && lib(ker.depletion())? == ker, || fail("depletion does not fix ker U"))?;

        if d.is_zero() {
            continue;
        }
        let dp: QExpansion<PadicScalar> = d.map(|_, c| ctx.from_bigint(c.numer()));
        for k in 0..=5u64 {
            let uni = lib(theta_power_universal(&dp, k % (p - 1), 12))?;
            let spec = lib(specialize_universal(&uni, ctx, k))?;
            for (a, c) in d.terms() {
                // Θ^k f_α = α^k f_α
                let ak = (0..k).fold(1i128, |acc, _| acc * *a as i128 % modulus);
                let expect = ctx.from_bigint(&(c.numer() * BigInt::from(ak)));
                let got = spec.coeff(*a).cloned().unwrap_or_else(|| ctx.zero());
                ensure(got.eq_at(&expect), || fail(&format!("Θ^{k} specialization wrong at α = {a}")))?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Euler ratio from the invariance relations, solved by hand.

fn rf(i: usize) -> RatFunc {
    RatFunc::var(sym::NVARS, i)
}

fn rint(n: i64) -> RatFunc {
    RatFunc::int(sym::NVARS, n)
}

/// `⟨v_α, v*_β⟩` and `⟨v_0, v*_β⟩` for form 3, from `⟨v_1, v_0⟩ = a/(1+q^{-1})`,
/// `⟨v_1, v_1⟩ = qαβ`, hermitian symmetry and `v_α = v_0 − (qα)^{-1} v_1`,
/// `v* = v_1 − α v_0`.
fn petersson_pair() -> Result<(RatFunc, RatFunc), Error> {
    let (a, b, q) = (rf(4), rf(5), rf(6));
    let s = rint(1).div(&(rint(1) + q.inv()?))?;
    let v10 = (a.clone() + b.clone()) * s;
    let v01 = v10.clone();
    let v11 = q.clone() * a.clone() * b.clone();
    let v0_star = v01.clone() - b.clone();
    let v1_star = v11 - b.clone() * v10;
    let va_star = v0_star.clone() - (q * a).inv()? * v1_star;
    Ok((va_star, v0_star))
}

fn euler_oracle(depleted: bool) -> Result<RatFunc, Error> {
    let (a1, b1, a2, b2, a3) = (rf(0), rf(1), rf(2), rf(3), rf(4));
    let (s1, p1) = (a1.clone() + b1.clone(), a1 * b1.clone());
    let (s2, p2) = (a2.clone() + b2.clone(), a2 * b2.clone());
    // α3 P01 + α1β1 P10 = s1,  α2β2 P01 + α3 P10 = s2  (P00 = 1)
    let det = a3.clone() * a3.clone() - p1.clone() * p2.clone();
    let p01 = (s1.clone() * a3.clone() - p1.clone() * s2.clone()).div(&det)?;
    let p10 = (a3.clone() * s2.clone() - p2.clone() * s1.clone()).div(&det)?;
    let p00 = rint(1);
    let a3i = a3.inv()?;
    let p11 = a3i.clone();
    let p21 = p10.clone() * a3i.clone();
    let p20 = (s2 * p10.clone() - p2 * p11.clone()) * a3i;
    let grid = [[p00, p01], [p10, p11], [p20, p21]];
    let c = if depleted { vec![rint(1), -s1, p1] } else { vec![rint(1), -b1] };
    let d = [rint(1), -b2];
    let mut acc = rint(0);
    for (i, ci) in c.iter().enumerate() {
        for (j, dj) in d.iter().enumerate() {
            acc = acc + ci.clone() * dj.clone() * grid[i][j].clone();
        }
    }
    let (va, v0) = petersson_pair()?;
    Ok(acc * v0.div(&va)?)
}

fn euler_equivalence() -> Outcome {
    let e = sym::triple();
    for depleted in [false, true] {
        let closed = lib(euler_ratio(&e, depleted))?;
        let oracle = lib(euler_oracle(depleted))?;
        ensure(closed == oracle, || format!("depleted = {depleted}: closed form {} ≠ oracle {}", closed, oracle))?;
    }
    Ok(())
}

fn petersson_consistency() -> Outcome {
    let d = sym::data(2);
    let recursive = lib(inner(&lib(stabilize(&d, &sym::beta(2)))?, &dual_eigenvector(&sym::alpha(2)), &d))?;
    // (β̄ − ᾱ + ᾱq^{-1}(ᾱ/β̄ − 1)) / (1 + q^{-1}) with ᾱ = β, β̄ = α
    let (a, b, q) = (rf(4), rf(5), rf(6));
    let qi = lib(q.inv())?;
    let num = a.clone() - b.clone() + b.clone() * qi.clone() * (lib(b.div(&a))? - rint(1));
    let closed = lib(num.div(&(rint(1) + qi)))?;
    ensure(recursive == closed, || format!("recursion gives {recursive}, closed form {closed}"))?;
    let (hand, _) = lib(petersson_pair())?;
    ensure(hand == closed, || "hand expansion disagrees with the closed form".into())
}

// ---------------------------------------------------------------------------

fn overconvergent() -> Outcome {
    let mut r = rng(6);
    for k in 1..=10i64 {
        for m in 0..=5usize {
            let base = random_base(&mut r);
            if 2 * m as i64 >= k {
                let f = Jet::new((0..=m).map(|_| random_poly(&mut r, 2)).collect(), k).unwrap();
                ensure(matches!(overconvergent_projection(&base, &f), Err(Error::Domain(_))), || {
                    format!("degenerate (m, k) = ({m}, {k}) accepted")
                })?;
                continue;
            }
            for n in 0..200 {
                let f = Jet::new((0..=m).map(|_| random_poly(&mut r, 2)).collect(), k).unwrap();
                let parts = lib(overconvergent_projection(&base, &f))?;
                let shapes_ok = parts.iter().enumerate().all(|(j, g)| g.order() == 0 && (j == 0 || g.weight() == k - 2 * j as i64));
                ensure(shapes_ok && parts[0].weight() == k, || format!("(m, k) = ({m}, {k}) jet {n}: malformed parts"))?;
                ensure(lib(reassemble(&base, &parts))? == f.padded(m), || format!("(m, k) = ({m}, {k}) jet {n}: reassembly differs"))?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

/// `P·diag(d)·P^{-1}` with `P = L·U` unitriangular, so `P^{-1}` is exact; half
/// of `d` are units, the rest `p^{1..3}` times units.
fn mixed_matrix(r: &mut ChaCha8Rng, ctx: &PadicContext, n: usize) -> (Matrix<PadicScalar>, usize) {
    let p = ctx.p as i64;
    let tri = |r: &mut ChaCha8Rng, lower: bool| {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                ctx.one()
            } else if (i > j) == lower {
                ctx.scalar(r.gen_range(-p * p..p * p))
            } else {
                ctx.zero()
            }
        })
    };
    // inverse of a unitriangular matrix by forward substitution
    let tri_inv = |m: &Matrix<PadicScalar>, lower: bool| {
        let mut inv = Matrix::identity(n, &ctx.one());
        for col in 0..n {
            let order: Vec<usize> = if lower { (0..n).collect() } else { (0..n).rev().collect() };
            for &i in &order {
                let mut acc = if i == col { ctx.one() } else { ctx.zero() };
                for &k in &order {
                    if k == i {
                        break;
                    }
                    acc = acc - *m.get(i, k) * *inv.get(k, col);
                }
                inv.set(i, col, acc);
            }
        }
        inv
    };
    let (l, u) = (tri(r, true), tri(r, false));
    let mut units = 0;
    let diag: Vec<PadicScalar> = (0..n)
        .map(|_| {
            let unit = ctx.scalar(r.gen_range(1..p) + p * r.gen_range(0..p));
            if r.gen_bool(0.5) {
                units += 1;
                unit
            } else {
                unit.mul_p_power(r.gen_range(1..=3))
            }
        })
        .collect();
    let pm = &l * &u;
    let pinv = &tri_inv(&u, false) * &tri_inv(&l, true);
    assert!((&pm * &pinv).eq_at(&Matrix::identity(n, &ctx.one())));
    (&(&pm * &Matrix::diagonal(&diag)) * &pinv, units)
}

fn rank_mod_p(m: &Matrix<PadicScalar>, p: u64) -> usize {
    let n = m.rows();
    let mut a: Vec<Vec<u64>> = (0..n).map(|i| (0..m.cols()).map(|j| m.get(i, j).residue() % p).collect()).collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(piv) = (rank..n).find(|&i| a[i][col] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][col] % p == 1).unwrap();
        for i in 0..n {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col] * inv % p;
                for j in 0..m.cols() {
                    a[i][j] = (a[i][j] + p * p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_st_qexp(r: &mut ChaCha8Rng) -> QExpansion<BigRational> {
    let terms: Vec<(u64, BigRational)> = (0..r.gen_range(1..=5)).map(|_| (r.gen_range(0..=80), rat(r.gen_range(-9..=9)))).collect();
    QExpansion::from_terms(3, 10_000, terms).unwrap()
}

fn ordinary_projector() -> Outcome {
    let ctx = lib(PadicContext::new(5, 20))?;
    let mut r = rng(7);
    for n in 0..50 {
        let (u, units) = mixed_matrix(&mut r, &ctx, 8);
        let e = lib(e_ord(&u))?;
        ensure((&e * &e).eq_at(&e), || format!("matrix {n}: e_ord not idempotent"))?;
        ensure((&e * &u).eq_at(&(&u * &e)), || format!("matrix {n}: e_ord does not commute with U"))?;
        ensure(rank_mod_p(&e, 5) == units, || format!("matrix {n}: rank {} ≠ {units} unit eigenvalues", rank_mod_p(&e, 5)))?;
        let proj = lib(lib(slope_projector(&u, SlopeCut::ZeroPlus))?.to_matrix())?;
        ensure(proj.eq_at(&e), || format!("matrix {n}: differs from the 0+ slope projector"))?;
    }
    for n in 0..50 {
        let k = r.gen_range(3..=10i64);
        let m = r.gen_range(0..=((k - 1) / 2) as usize);
        let f = Jet::new((0..=m).map(|_| random_st_qexp(&mut r)).collect(), k).unwrap();
        let (a, b) = lib(ordinary_projection_pair(&f))?;
        ensure(a == b, || format!("jet {n}: e_ord γ ≠ e_ord 𝓗^r"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn bgg() -> Outcome {
    let ring = lib(UnramifiedContext::standard(lib(PadicContext::new(3, 20))?, 1))?;
    for k in 0..=3i64 {
        let space = lib(DiskSpace::new(ring.clone(), 1, k as usize + 3))?;
        let c = lib(bgg_check(&space, &[k], 0))?;
        ensure(c.intertwines, || format!("k = {k}: ϖ^(k+1) Θ∨ U ≠ U Θ∨"))?;
        ensure(!c.polygon.slopes().is_empty(), || format!("k = {k}: empty image"))?;
        let min = c.polygon.slopes().into_iter().min().unwrap();
        ensure(c.min_slope_ok && min >= Slope::from_integer(k + 1), || format!("k = {k}: slope {min} < k + 1 on the image"))?;
        ensure(c.polygon.tail.as_ref().is_none_or(|(b, _)| b.is_none_or(|b| b >= Slope::from_integer(k + 1))), || {
            format!("k = {k}: unresolved slopes below k + 1")
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------

/// Σ over size-`i` principal minors of `a` modulo `m`, by the Leibniz formula.
fn principal_minor_sum(a: &[Vec<i128>], i: usize, m: i128) -> i128 {
    fn perms(items: &[usize]) -> Vec<(Vec<usize>, i128)> {
        if items.is_empty() {
            return vec![(vec![], 1)];
        }
        let mut out = Vec::new();
        for (pos, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(pos);
            for (mut p, s) in perms(&rest) {
                p.insert(0, x);
                out.push((p, if pos % 2 == 0 { s } else { -s }));
            }
        }
        out
    }
    let n = a.len();
    let mut total = 0i128;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != i {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
        for (perm, sign) in perms(&idx) {
            let prod = idx.iter().zip(&perm).fold(1i128, |acc, (&r, &c)| acc * a[r][c] % m);
            total = (total + sign * prod) % m;
        }
    }
    total.rem_euclid(m)
}

fn spectral() -> Outcome {
    let ctx = lib(PadicContext::new(5, 8))?;
    let m = ctx.modulus() as i128;
    let mut r = rng(9);
    for n in 0..20 {
        let ints: Vec<Vec<i128>> = (0..6).map(|_| (0..6).map(|_| r.gen_range(0..m)).collect()).collect();
        let u = Matrix::from_fn(6, 6, |i, j| ctx.scalar(ints[i][j] as i64));
        let cs = lib(char_series(&u))?;
        for i in 0..=6 {
            // det(1 − XU) = Σ (−1)^i e_i X^i
            let e = principal_minor_sum(&ints, i, m);
            let expect = if i % 2 == 0 { e } else { (m - e) % m };
            let got = cs.coeffs.get(i).map_or(0, |c| c.residue() as i128);
            ensure(got == expect, || format!("matrix {n}: coefficient {i} is {got}, oracle {expect}"))?;
        }
    }
    // the top coefficient has valuation Σ v_i, so the check needs N above it
    let ctx = lib(PadicContext::new(5, 24))?;
    for n in 0..20 {
        let vals: Vec<u32> = (0..6).map(|_| r.gen_range(0..=3)).collect();
        let diag: Vec<PadicScalar> = vals.iter().map(|&v| ctx.scalar(r.gen_range(1..5) + 5 * r.gen_range(0..5)).mul_p_power(v)).collect();
        let np = lib(newton_polygon(&lib(char_series(&Matrix::diagonal(&diag)))?))?;
        let mut expect: Vec<Slope> = vals.iter().map(|&v| Slope::from_integer(v as i64)).collect();
        expect.sort();
        ensure(np.slopes() == expect && np.tail.is_none(), || format!("diagonal {n}: slopes {:?}, expected {:?}", np.slopes(), expect))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn end_to_end() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/sample.conf");
    let cfg = lib(cli::parse_config(&std::fs::read_to_string(path).map_err(|e| e.to_string())?))?;
    let mut out = Vec::new();
    ensure(lib(cli::cmd_euler(&cfg, true, &mut out))? == cli::EXIT_OK, || "euler exit code".into())?;
    let text = String::from_utf8(out).unwrap();
    let value = |key: &str| -> Result<BigRational, String> {
        let line = text.lines().find_map(|l| l.strip_prefix(key).and_then(|v| v.strip_prefix(": "))).ok_or(format!("no {key}"))?;
        line.parse::<BigRational>().map_err(|_| format!("{key} is not rational: {line}"))
    };
    // Distinguished prime p0 of (2,2,6) with α = (1,1,1), β = (3,3,243), p = 3:
    // E = (1 − 3)(1 − 9)(1 − 9)(1 − 27), E_1 = (1 − 81)(1 − 243).
    let ep = rat((1 - 3) * (1 - 9) * (1 - 9) * (1 - 27));
    let ep1 = rat((1 - 81) * (1 - 243));
    let w = "([2,2],[2,2],[6,2]).p0";
    ensure(value(&format!("{w}.ep"))? == ep, || format!("E_p0 {:?}", value(&format!("{w}.ep"))))?;
    ensure(value(&format!("{w}.ep1"))? == ep1, || format!("E_p0,1 {:?}", value(&format!("{w}.ep1"))))?;
    ensure(value(&format!("{w}.ratio"))? == &ep / &ep1, || "E_p0 / E_p0,1".into())?;
    ensure((&ep / &ep1) == BigRational::new(104.into(), 605.into()), || "hand ratio".into())?;

    let mut sink = Vec::new();
    let code = lib(cli::cmd_verify("all", true, &mut sink))?;
    ensure(code == cli::EXIT_OK, || String::from_utf8_lossy(&sink).into_owned())
}

// ---------------------------------------------------------------------------

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "eps-nabla identity, j <= 5, k <= 12, 100 jets", budget: secs(5), run: epsilon_nabla },
        Criterion { name: "trilinear eps-kernel, recurrence and Vandermonde", budget: secs(10), run: trilinear_kernel },
        Criterion { name: "Serre-Tate operator suite, 500 expansions", budget: secs(5), run: serre_tate },
        Criterion { name: "Euler ratio closed forms equal the linear-system oracle", budget: secs(10), run: euler_equivalence },
        Criterion { name: "Petersson recursion reproduces <v_alpha, v*_beta>", budget: None, run: petersson_consistency },
        Criterion { name: "overconvergent projection, 2m < k <= 10, 200 jets each", budget: None, run: overconvergent },
        Criterion { name: "ordinary projector, 50 matrices 8x8 at N = 20, 50 jets", budget: secs(30), run: ordinary_projector },
        Criterion { name: "BGG intertwining and slopes >= k+1, p = 3, k <= 3", budget: secs(60), run: bgg },
        Criterion { name: "char series vs exterior powers; diagonal slopes", budget: secs(5), run: spectral },
        Criterion { name: "end-to-end sample Euler row and verify all", budget: None, run: end_to_end },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(()), Some(b)) if elapsed > b => Err(format!("over budget ({:.2?} > {:.0?})", elapsed, b)),
            (o, _) => o,
        };
        let budget = c.budget.map_or(String::new(), |b| format!(" / {:.0?}", b));
        match outcome {
            Ok(()) => println!("PASS  {}  [{:.2?}{budget}]", c.name, elapsed),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {}  [{:.2?}{budget}]: {msg}", c.name, elapsed);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
