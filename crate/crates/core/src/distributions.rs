//! Truncated locally analytic functions and distributions on `O_𝔭` for one
//! prime `𝔭 ≠ 𝔭_0`, with the Iwahori action, `U_𝔭`, BGG maps, the classical
//! projection and the pairing with the dual side.
//!
//! A homogeneous function of weight `k` is determined by `φ(z) = f(1, z)`,
//! `z = y/x ∈ O_𝔭`. At level `m` and degree `D_σ` the basis is
//! `φ_{r,J}(z) = 1_{z ≡ r (p^m)}·∏_σ σ((z − r)/p^m)^{J_σ}` with `r` running
//! over digit representatives of `O_𝔭/p^m` and `J_σ ≤ D_σ`.
//! Functions are column vectors in this basis; distributions are their values
//! on it, so an operator on distributions is the transpose of the function
//! operator.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{domain, Error, Result};
use crate::matrix::Matrix;
use crate::padic::character::Character;
use crate::padic::scalar::PadicRing;
use crate::padic::unramified::{UnramifiedContext, UnramifiedScalar};
use crate::ring::{binomial, factorial, Ring};
use crate::spectral::{self, NewtonPolygon};

/// Largest truncation dimension accepted.
pub const MAX_DIM: usize = 4096;

#[derive(Debug)]
pub struct DiskSpace {
    ring: Arc<UnramifiedContext>,
    level: u32,
    degrees: Vec<usize>,
    centers: Vec<UnramifiedScalar>,
    lookup: HashMap<Vec<u64>, usize>,
}

impl DiskSpace {
    pub fn new(ring: Arc<UnramifiedContext>, level: u32, degree: usize) -> Result<Arc<Self>> {
        let f = ring.degree();
        Self::with_degrees(ring, level, vec![degree; f])
    }

    pub fn with_degrees(ring: Arc<UnramifiedContext>, level: u32, degrees: Vec<usize>) -> Result<Arc<Self>> {
        let f = ring.degree();
        if degrees.len() != f {
            return domain(format!("need one degree per embedding ({f})"));
        }
        let base = ring.base();
        if level >= base.prec {
            return Err(Error::Precision(format!("level {level} needs more than {} digits", base.prec)));
        }
        let pm = base.p.pow(level);
        let disks = (pm as usize).pow(f as u32);
        let block: usize = degrees.iter().map(|d| d + 1).product();
        if disks.saturating_mul(block) > MAX_DIM {
            return Err(Error::Overflow(format!("truncation of dimension {} is too large", disks * block)));
        }
        let mut centers = Vec::with_capacity(disks);
        let mut lookup = HashMap::new();
        for idx in 0..disks {
            let mut rest = idx as u64;
            let coords: Vec<u64> = (0..f)
                .map(|_| {
                    let c = rest % pm;
                    rest /= pm;
                    c
                })
                .collect();
            let z = UnramifiedScalar::from_coeffs(&ring, coords.iter().map(|&c| base.scalar(c as i64)).collect())?;
            lookup.insert(z.coords_mod_p_power(level), idx);
            centers.push(z);
        }
        Ok(Arc::new(Self { ring, level, degrees, centers, lookup }))
    }

    pub fn ring(&self) -> &Arc<UnramifiedContext> {
        &self.ring
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn disks(&self) -> usize {
        self.centers.len()
    }

    pub fn block(&self) -> usize {
        self.degrees.iter().map(|d| d + 1).product()
    }

    pub fn dim(&self) -> usize {
        self.disks() * self.block()
    }

    pub fn center(&self, disk: usize) -> &UnramifiedScalar {
        &self.centers[disk]
    }

    /// Mixed-radix decoding of a position inside a disk block.
    pub fn multi_index(&self, mut j: usize) -> Vec<usize> {
        self.degrees
            .iter()
            .map(|d| {
                let v = j % (d + 1);
                j /= d + 1;
                v
            })
            .collect()
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.degrees).rev().fold(0, |acc, (j, d)| acc * (d + 1) + j)
    }

    pub fn index(&self, disk: usize, multi: &[usize]) -> usize {
        disk * self.block() + self.flat_index(multi)
    }

    pub fn split(&self, i: usize) -> (usize, Vec<usize>) {
        (i / self.block(), self.multi_index(i % self.block()))
    }

    /// The disk containing `z`.
    pub fn disk_of(&self, z: &UnramifiedScalar) -> Result<usize> {
        self.lookup
            .get(&z.coords_mod_p_power(self.level))
            .copied()
            .ok_or_else(|| Error::Domain("point outside the truncation".into()))
    }

    fn zero(&self) -> UnramifiedScalar {
        UnramifiedScalar::zero(&self.ring)
    }

    fn one(&self) -> UnramifiedScalar {
        UnramifiedScalar::from_int(&self.ring, 1)
    }

    fn p_power(&self, k: u64) -> UnramifiedScalar {
        Ring::pow(&UnramifiedScalar::from_int(&self.ring, self.ring.prime() as i64), k)
    }
}

/// Classical weight exponents of a character; universal weights cannot act on
/// a polynomial truncation.
pub fn weight_exponents(chi: &Character) -> Result<Vec<i64>> {
    match chi {
        Character::Classical { exps, nu } => Ok(exps.iter().map(|e| e + 2 * nu).collect()),
        Character::Universal(_) => Err(Error::Unsupported(
            "universal weights act on distributions only through classical specialisations".into(),
        )),
    }
}

/// A 2×2 matrix `(a b; c d)` acting by `(g∗f)(x, y) = f((x, y)g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2 {
    pub a: UnramifiedScalar,
    pub b: UnramifiedScalar,
    pub c: UnramifiedScalar,
    pub d: UnramifiedScalar,
}

impl Mat2 {
    pub fn new(a: UnramifiedScalar, b: UnramifiedScalar, c: UnramifiedScalar, d: UnramifiedScalar) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_ints(ring: &Arc<UnramifiedContext>, e: [i64; 4]) -> Self {
        let s = |n| UnramifiedScalar::from_int(ring, n);
        Self::new(s(e[0]), s(e[1]), s(e[2]), s(e[3]))
    }

    pub fn det(&self) -> UnramifiedScalar {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }

    /// `a` a unit and `c ≡ 0 mod p`: the Iwahori monoid.
    pub fn in_iwahori_monoid(&self) -> bool {
        self.a.is_unit() && !self.c.is_unit()
    }
}

fn poly_mul(a: &[UnramifiedScalar], b: &[UnramifiedScalar]) -> Vec<UnramifiedScalar> {
    let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_pow(a: &[UnramifiedScalar], e: usize) -> Vec<UnramifiedScalar> {
    let mut acc = vec![a[0].one_like()];
    for _ in 0..e {
        acc = poly_mul(&acc, a);
    }
    acc
}

/// The matrix of `g∗` on the function truncation. For `c ≠ 0` only basis
/// functions with `J ≤ k` have polynomial images; the others are marked
/// undefined and any function touching them is rejected by [`act_k0p`].
#[derive(Clone, Debug)]
pub struct ActionMatrix {
    pub matrix: Matrix<UnramifiedScalar>,
    pub defined: Vec<bool>,
}

/// Builds `g∗` for `g` in the Iwahori monoid (`det g` need not be a unit).
pub fn action_matrix(space: &DiskSpace, g: &Mat2, k: &[i64]) -> Result<ActionMatrix> {
    if !g.in_iwahori_monoid() {
        return domain("g must have unit upper-left entry and lower-left entry divisible by p");
    }
    if k.len() != space.degrees.len() {
        return domain("one weight exponent per embedding expected");
    }
    let n = space.dim();
    let f = space.degrees.len();
    let m = space.level;
    let pm = space.p_power(m as u64);
    let c_is_zero = g.c.is_zero();
    let mut matrix = Matrix::zeros(n, n, &space.zero());
    let mut defined = vec![true; n];
    for s in 0..space.disks() {
        let sc = space.center(s).clone();
        let u0 = g.a.clone() + g.c.clone() * sc.clone();
        let u0_inv = u0.inverse()?;
        let image = (g.b.clone() + g.d.clone() * sc.clone()) * u0_inv.clone();
        let r = space.disk_of(&image)?;
        let rc = space.center(r).clone();
        let a0 = (g.b.clone() + g.d.clone() * sc - rc.clone() * u0.clone()).divide_by_p_power(m)?;
        let a1 = g.d.clone() - rc * g.c.clone();
        let linear = [u0.clone(), g.c.clone() * pm.clone()];
        // polys[σ][J_σ] = σ(L^{k_σ − J_σ} (A0 + A1 t)^{J_σ}), or None when not polynomial.
        let mut polys: Vec<Vec<Option<Vec<UnramifiedScalar>>>> = Vec::with_capacity(f);
        for (e, &ke) in k.iter().enumerate() {
            let mut row = Vec::with_capacity(space.degrees[e] + 1);
            for j in 0..=space.degrees[e] {
                let lin = poly_pow(&[a0.clone(), a1.clone()], j);
                let exp = ke - j as i64;
                let poly = if c_is_zero {
                    let scale = if exp >= 0 { Ring::pow(&u0, exp as u64) } else { Ring::pow(&u0_inv, (-exp) as u64) };
                    Some(lin.iter().map(|x| x.clone() * scale.clone()).collect::<Vec<_>>())
                } else if exp >= 0 {
                    Some(poly_mul(&lin, &poly_pow(&linear, exp as usize)))
                } else {
                    None
                };
                let poly = match poly {
                    Some(p) => {
                        if p.iter().skip(space.degrees[e] + 1).any(|x| !x.is_zero()) {
                            return Err(Error::Overflow(format!(
                                "g∗φ has degree above the truncation D = {}",
                                space.degrees[e]
                            )));
                        }
                        Some(p.into_iter().map(|x| x.frobenius_power(e)).collect())
                    }
                    None => None,
                };
                row.push(poly);
            }
            polys.push(row);
        }
        for jb in 0..space.block() {
            let jm = space.multi_index(jb);
            let col = space.index(r, &jm);
            if (0..f).any(|e| polys[e][jm[e]].is_none()) {
                defined[col] = false;
                continue;
            }
            for lb in 0..space.block() {
                let lm = space.multi_index(lb);
                let mut entry = space.one();
                for e in 0..f {
                    let p = polys[e][jm[e]].as_ref().unwrap();
                    entry = entry * p.get(lm[e]).cloned().unwrap_or_else(|| space.zero());
                }
                if !entry.is_zero() {
                    let row = space.index(s, &lm);
                    matrix.set(row, col, matrix.get(row, col).clone() + entry);
                }
            }
        }
    }
    Ok(ActionMatrix { matrix, defined })
}

/// A function in the truncation.
#[derive(Clone, Debug)]
pub struct LocallyAnalyticFunction {
    pub space: Arc<DiskSpace>,
    pub weight: Vec<i64>,
    pub coeffs: Vec<UnramifiedScalar>,
}

impl LocallyAnalyticFunction {
    pub fn zero(space: Arc<DiskSpace>, weight: Vec<i64>) -> Self {
        let coeffs = vec![space.zero(); space.dim()];
        Self { space, weight, coeffs }
    }

    /// The basis function `φ_{r,J}`.
    pub fn basis(space: Arc<DiskSpace>, weight: Vec<i64>, disk: usize, multi: &[usize]) -> Self {
        let mut f = Self::zero(space, weight);
        let i = f.space.index(disk, multi);
        f.coeffs[i] = f.space.one();
        f
    }

    /// Evaluates `φ(z)`.
    pub fn eval(&self, z: &UnramifiedScalar) -> Result<UnramifiedScalar> {
        let s = &self.space;
        let disk = s.disk_of(z)?;
        let t = (z.clone() - s.center(disk).clone()).divide_by_p_power(s.level)?;
        let conj: Vec<UnramifiedScalar> = (0..s.degrees.len()).map(|e| t.frobenius_power(e)).collect();
        let mut acc = s.zero();
        for jb in 0..s.block() {
            let c = &self.coeffs[disk * s.block() + jb];
            if c.is_zero() {
                continue;
            }
            let jm = s.multi_index(jb);
            let mono = jm.iter().enumerate().fold(s.one(), |a, (e, &j)| a * Ring::pow(&conj[e], j as u64));
            acc = acc + c.clone() * mono;
        }
        Ok(acc)
    }
}

/// `g∗f` for `g ∈ K_0(p)`.
pub fn act_k0p(g: &Mat2, f: &LocallyAnalyticFunction) -> Result<LocallyAnalyticFunction> {
    if !g.det().is_unit() {
        return domain("g must be invertible over O_𝔭");
    }
    let am = action_matrix(&f.space, g, &f.weight)?;
    if f.coeffs.iter().zip(&am.defined).any(|(c, ok)| !ok && !c.is_zero()) {
        return Err(Error::Overflow("g∗f leaves the polynomial truncation".into()));
    }
    Ok(LocallyAnalyticFunction { space: f.space.clone(), weight: f.weight.clone(), coeffs: am.matrix.apply(&f.coeffs) })
}

/// Digit representatives `i` of the residue field, as level-1 centers.
pub fn residue_digits(ring: &Arc<UnramifiedContext>) -> Vec<UnramifiedScalar> {
    let base = ring.base();
    let f = ring.degree();
    (0..ring.residue_size())
        .map(|mut idx| {
            let coeffs = (0..f)
                .map(|_| {
                    let c = idx % base.p;
                    idx /= base.p;
                    base.scalar(c as i64)
                })
                .collect();
            UnramifiedScalar::from_coeffs(ring, coeffs).expect("one coordinate per embedding")
        })
        .collect()
}

/// `U_𝔭` on functions: `Σ_i ḡ_i∗` with `ḡ_i = (1, i; 0, p)`.
pub fn up_function_matrix(space: &DiskSpace, k: &[i64]) -> Result<Matrix<UnramifiedScalar>> {
    if space.level == 0 {
        return domain("U_𝔭 needs truncation level m ≥ 1");
    }
    let ring = space.ring();
    let p = UnramifiedScalar::from_int(ring, ring.prime() as i64);
    let mut acc = Matrix::zeros(space.dim(), space.dim(), &space.zero());
    for i in residue_digits(ring) {
        let g = Mat2::new(space.one(), i, space.zero(), p.clone());
        acc = &acc + &action_matrix(space, &g, k)?.matrix;
    }
    Ok(acc)
}

/// `U_𝔭` on distributions, the transpose of [`up_function_matrix`].
pub fn up_matrix(space: &DiskSpace, k: &[i64]) -> Result<Matrix<UnramifiedScalar>> {
    Ok(up_function_matrix(space, k)?.transpose())
}

/// A distribution: its values on the basis `φ_{r,J}`.
#[derive(Clone, Debug)]
pub struct Distribution {
    pub space: Arc<DiskSpace>,
    pub weight: Vec<i64>,
    pub values: Vec<UnramifiedScalar>,
}

impl Distribution {
    pub fn zero(space: Arc<DiskSpace>, weight: Vec<i64>) -> Self {
        let values = vec![space.zero(); space.dim()];
        Self { space, weight, values }
    }

    /// The dual basis vector `δ_{r,J}`.
    pub fn dual_basis(space: Arc<DiskSpace>, weight: Vec<i64>, disk: usize, multi: &[usize]) -> Self {
        let mut mu = Self::zero(space, weight);
        let i = mu.space.index(disk, multi);
        mu.values[i] = mu.space.one();
        mu
    }

    /// The point mass `φ ↦ φ(z_0)`, i.e. evaluation at `(1, z_0)`.
    pub fn point_mass(space: Arc<DiskSpace>, weight: Vec<i64>, z0: &UnramifiedScalar) -> Result<Self> {
        let mut values = Vec::with_capacity(space.dim());
        for i in 0..space.dim() {
            let (disk, jm) = space.split(i);
            let phi = LocallyAnalyticFunction::basis(space.clone(), weight.clone(), disk, &jm);
            values.push(phi.eval(z0)?);
        }
        Ok(Self { space, weight, values })
    }

    pub fn integrate(&self, f: &LocallyAnalyticFunction) -> UnramifiedScalar {
        self.values.iter().zip(&f.coeffs).fold(self.space.zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

pub fn up_operator(mu: &Distribution) -> Result<Distribution> {
    let u = up_matrix(&mu.space, &mu.weight)?;
    Ok(Distribution { space: mu.space.clone(), weight: mu.weight.clone(), values: u.apply(&mu.values) })
}

/// The inclusion of level-`(m−1)` functions into level `m`: on a disk
/// `s ≡ c (p^{m−1})`, `((z − c)/p^{m−1})^J = (δ + p t)^J` with `δ = (s − c)/p^{m−1}`.
pub fn inclusion_matrix(coarse: &DiskSpace, fine: &DiskSpace) -> Result<Matrix<UnramifiedScalar>> {
    if fine.level != coarse.level + 1 || fine.degrees != coarse.degrees {
        return domain("inclusion goes from level m−1 to level m at equal degrees");
    }
    let f = fine.degrees.len();
    let p = fine.p_power(1);
    let mut out = Matrix::zeros(fine.dim(), coarse.dim(), &fine.zero());
    for s in 0..fine.disks() {
        let sc = fine.center(s);
        let c = coarse.disk_of(sc)?;
        let delta = (sc.clone() - coarse.center(c).clone()).divide_by_p_power(coarse.level)?;
        for jb in 0..coarse.block() {
            let jm = coarse.multi_index(jb);
            let polys: Vec<Vec<UnramifiedScalar>> = (0..f)
                .map(|e| poly_pow(&[delta.clone(), p.clone()], jm[e]).into_iter().map(|x| x.frobenius_power(e)).collect())
                .collect();
            for lb in 0..fine.block() {
                let lm = fine.multi_index(lb);
                if (0..f).any(|e| lm[e] > jm[e]) {
                    continue;
                }
                let entry = (0..f).fold(fine.one(), |acc, e| acc * polys[e][lm[e]].clone());
                out.set(fine.index(s, &lm), coarse.index(c, &jm), entry);
            }
        }
    }
    Ok(out)
}

/// The lowering map `A` with `U_𝔭 = ι∘A` on functions: `φ^m_{r,J} ↦
/// φ^{m−1}_{(r−i)/p, J}` for the digit `i ≡ r (p)`.
pub fn lowering_matrix(fine: &DiskSpace, coarse: &DiskSpace) -> Result<Matrix<UnramifiedScalar>> {
    if fine.level != coarse.level + 1 || fine.degrees != coarse.degrees || fine.level == 0 {
        return domain("lowering goes from level m ≥ 1 to level m−1 at equal degrees");
    }
    let mut out = Matrix::zeros(coarse.dim(), fine.dim(), &fine.zero());
    let digits = residue_digits(fine.ring());
    for r in 0..fine.disks() {
        let rc = fine.center(r);
        let code = rc.residue_code() as usize;
        let shifted = (rc.clone() - digits[code].clone()).divide_by_p_power(1)?;
        let target = coarse.disk_of(&shifted)?;
        for jb in 0..fine.block() {
            out.set(target * coarse.block() + jb, r * fine.block() + jb, fine.one());
        }
    }
    Ok(out)
}

/// Checks `U_𝔭 = ι∘A` on functions: `U_𝔭` factors through level `m−1`, so on
/// distributions it kills everything vanishing on the image of `ι`.
pub fn compactness_witness(fine: &Arc<DiskSpace>, k: &[i64]) -> Result<bool> {
    let coarse = DiskSpace::with_degrees(fine.ring().clone(), fine.level - 1, fine.degrees.clone())?;
    let u = up_function_matrix(fine, k)?;
    let iota = inclusion_matrix(&coarse, fine)?;
    let a = lowering_matrix(fine, &coarse)?;
    Ok((&iota * &a).eq_at(&u))
}

/// The monomials `∏_σ σ(z)^{j_σ}`, `j ≤ k`, as functions: columns indexed by
/// `j` in mixed radix over `k_σ + 1`.
pub fn polynomial_embedding(space: &DiskSpace, k: &[i64]) -> Result<Matrix<UnramifiedScalar>> {
    let ku: Vec<usize> = k.iter().map(|&x| usize::try_from(x)).collect::<std::result::Result<_, _>>().map_err(|_| {
        Error::Domain("the classical projection needs k_σ ≥ 0".into())
    })?;
    if ku.iter().zip(&space.degrees).any(|(k, d)| k > d) {
        return Err(Error::Overflow("the truncation degree is below the weight".into()));
    }
    let f = ku.len();
    let sym: usize = ku.iter().map(|x| x + 1).product();
    let pm = space.p_power(space.level as u64);
    let mut out = Matrix::zeros(space.dim(), sym, &space.zero());
    for jflat in 0..sym {
        let mut rest = jflat;
        let jm: Vec<usize> = ku
            .iter()
            .map(|kk| {
                let v = rest % (kk + 1);
                rest /= kk + 1;
                v
            })
            .collect();
        for s in 0..space.disks() {
            let polys: Vec<Vec<UnramifiedScalar>> = (0..f)
                .map(|e| {
                    poly_pow(&[space.center(s).clone(), pm.clone()], jm[e])
                        .into_iter()
                        .map(|x| x.frobenius_power(e))
                        .collect()
                })
                .collect();
            for lb in 0..space.block() {
                let lm = space.multi_index(lb);
                if (0..f).any(|e| lm[e] > jm[e]) {
                    continue;
                }
                let entry = (0..f).fold(space.one(), |acc, e| acc * polys[e][lm[e]].clone());
                out.set(space.index(s, &lm), jflat, entry);
            }
        }
    }
    Ok(out)
}

/// Restriction of `μ` to `Sym^k`: the values `μ(∏_σ σ(z)^{j_σ})`, `j ≤ k`,
/// i.e. `μ(x^{k−j} y^j)`.
pub fn classical_projection(mu: &Distribution) -> Result<Vec<UnramifiedScalar>> {
    let emb = polynomial_embedding(&mu.space, &mu.weight)?;
    Ok(emb.transpose().apply(&mu.values))
}

/// The classical `U_𝔭` on `Sym^k`, dual side: `P(x, y) ↦ Σ_i P(x, ix + py)`
/// transposed, in the monomial basis `x^{k−j}y^j`.
pub fn classical_up_matrix(ring: &Arc<UnramifiedContext>, k: &[i64]) -> Result<Matrix<UnramifiedScalar>> {
    let degrees = classical_k(k)?;
    // At level 0 with degrees k the basis is exactly the monomials z^j.
    let space = DiskSpace::with_degrees(ring.clone(), 0, degrees)?;
    let p = UnramifiedScalar::from_int(ring, ring.prime() as i64);
    let mut acc = Matrix::zeros(space.dim(), space.dim(), &space.zero());
    for i in residue_digits(ring) {
        let g = Mat2::new(space.one(), i, space.zero(), p.clone());
        acc = &acc + &action_matrix(&space, &g, k)?.matrix;
    }
    Ok(acc.transpose())
}

/// `Θ_σ = (d/dw_σ)^{k_σ+1}` on each disk, `w = (z − r)/p^m`; lands in the
/// truncation with `D_σ` lowered by `k_σ + 1` and weight `−k_σ − 2`.
pub fn bgg_theta(space: &Arc<DiskSpace>, sigma: usize, k_sigma: i64) -> Result<(Arc<DiskSpace>, Matrix<UnramifiedScalar>)> {
    let d = *space.degrees.get(sigma).ok_or_else(|| Error::Domain("no such embedding".into()))?;
    if k_sigma < 0 {
        return domain("BGG maps need k_σ ≥ 0");
    }
    let shift = k_sigma as usize + 1;
    if d < shift {
        return Err(Error::Overflow(format!("truncation degree {d} is below k_σ + 1 = {shift}")));
    }
    let mut degrees = space.degrees.clone();
    degrees[sigma] -= shift;
    let target = DiskSpace::with_degrees(space.ring().clone(), space.level, degrees)?;
    let mut out = Matrix::zeros(target.dim(), space.dim(), &space.zero());
    for i in 0..space.dim() {
        let (disk, jm) = space.split(i);
        if jm[sigma] < shift {
            continue;
        }
        let mut lm = jm.clone();
        lm[sigma] -= shift;
        let c = factorial(jm[sigma] as u64) / factorial(lm[sigma] as u64);
        out.set(target.index(disk, &lm), i, space.one().from_bigint_like(&c));
    }
    Ok((target, out))
}

/// Results of the BGG slope check for one embedding.
#[derive(Clone, Debug)]
pub struct BggCheck {
    /// `Θ∘U = p^{k+1} U∘Θ` on functions, equivalently `U∘Θ∨ = p^{k+1}Θ∨∘U`.
    pub intertwines: bool,
    /// Newton polygon of `U_𝔭` on the image of `Θ∨`.
    pub polygon: NewtonPolygon,
    pub min_slope_ok: bool,
}

/// Lifts a matrix whose entries are rational integers known mod `p^N` to
/// exact integers by symmetric residues. The lift is exact when the true
/// entries have absolute value below `p^N / 2`, which holds for the small
/// truncations the BGG check runs on.
pub fn integer_lift(m: &Matrix<UnramifiedScalar>) -> Result<Matrix<BigRational>> {
    let rows: Result<Vec<Vec<BigRational>>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| {
                    x.as_scalar()
                        .map(|s| BigRational::from_integer(BigInt::from(s.symmetric_residue())))
                        .ok_or_else(|| Error::Unsupported("integer lift needs entries in Z_p".into()))
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows?)
}

pub fn bgg_check(space: &Arc<DiskSpace>, k: &[i64], sigma: usize) -> Result<BggCheck> {
    let ks = k[sigma];
    let (target, theta) = bgg_theta(space, sigma, ks)?;
    let mut k_target = k.to_vec();
    k_target[sigma] = -ks - 2;
    let u_src = up_function_matrix(space, k)?;
    let u_tgt = up_function_matrix(&target, &k_target)?;
    let pk = space.p_power(ks as u64 + 1);
    let intertwines = (&theta * &u_src).eq_at(&(&u_tgt * &theta).scale(&pk));

    let shift = ks as usize + 1;
    let image: Vec<usize> = (0..space.dim()).filter(|&i| space.split(i).1[sigma] >= shift).collect();
    let block = up_matrix(space, k)?.select(&image, &image);
    let exact = integer_lift(&block)?;
    let coeffs = spectral::charpoly(&exact)?;
    let polygon = spectral::newton_polygon_exact(&coeffs, space.ring().prime())?;
    let min_slope_ok = polygon.segments.iter().all(|(s, _)| *s >= spectral::Slope::from_integer(ks + 1));
    Ok(BggCheck { intertwines, polygon, min_slope_ok })
}

/// Level-0 BGG exactness: the kernel of the projection to `Sym^k∨` is the sum
/// of the images of the `Θ_σ∨`. Compared by exact ranks.
pub fn bgg_exact_at_level_zero(ring: &Arc<UnramifiedContext>, k: &[i64], extra: usize) -> Result<bool> {
    let degrees: Vec<usize> = k.iter().map(|&x| x as usize + 1 + extra).collect();
    let space = DiskSpace::with_degrees(ring.clone(), 0, degrees)?;
    let proj = integer_lift(&polynomial_embedding(&space, k)?.transpose())?;
    let mut image_cols: Vec<Vec<BigRational>> = Vec::new();
    for sigma in 0..k.len() {
        let (_, theta) = bgg_theta(&space, sigma, k[sigma])?;
        let dual = integer_lift(&theta.transpose())?;
        for j in 0..dual.cols() {
            let col = dual.column(j);
            if proj.apply(&col).iter().any(|x| !num_traits::Zero::is_zero(x)) {
                return Ok(false);
            }
            image_cols.push(col);
        }
    }
    let image = Matrix::from_fn(space.dim(), image_cols.len(), |i, j| image_cols[j][i].clone());
    let sym = proj.rows();
    Ok(proj.rank() == sym && image.rank() == space.dim() - sym)
}

/// A distribution on the dual side `pO × O^×`, restricted to polynomials of
/// degree `≤ k_σ` in `w' = X/(pY)`: values `μ(∏_σ σ(w')^{L_σ})`.
#[derive(Clone, Debug)]
pub struct DualDistribution {
    pub ring: Arc<UnramifiedContext>,
    pub weight: Vec<i64>,
    pub values: Vec<UnramifiedScalar>,
}

fn mixed(k: &[usize], mut j: usize) -> Vec<usize> {
    k.iter()
        .map(|kk| {
            let v = j % (kk + 1);
            j /= kk + 1;
            v
        })
        .collect()
}

fn classical_k(k: &[i64]) -> Result<Vec<usize>> {
    k.iter()
        .map(|&x| usize::try_from(x).map_err(|_| Error::Domain("the pairing needs k_σ ≥ 0".into())))
        .collect()
}

impl DualDistribution {
    pub fn dim(k: &[i64]) -> Result<usize> {
        Ok(classical_k(k)?.iter().map(|x| x + 1).product())
    }

    pub fn dual_basis(ring: Arc<UnramifiedContext>, weight: Vec<i64>, j: usize) -> Result<Self> {
        let n = Self::dim(&weight)?;
        let zero = UnramifiedScalar::zero(&ring);
        let mut values = vec![zero; n];
        values[j] = UnramifiedScalar::from_int(&ring, 1);
        Ok(Self { ring, weight, values })
    }
}

/// `U_𝔭*` on the dual side: `(U*μ)(ψ) = μ(Σ_i h_i∗ψ)` with
/// `h_i = (p, −i; 0, 1)`, where `(h_i∗ψ)(w') = (1 − ipw')^{k−L} p^L w'^L` on
/// `ψ = w'^L`.
pub fn dual_up_matrix(ring: &Arc<UnramifiedContext>, k: &[i64]) -> Result<Matrix<UnramifiedScalar>> {
    let ku = classical_k(k)?;
    let n: usize = ku.iter().map(|x| x + 1).product();
    let zero = UnramifiedScalar::zero(ring);
    let one = UnramifiedScalar::from_int(ring, 1);
    let p = UnramifiedScalar::from_int(ring, ring.prime() as i64);
    let mut fun = Matrix::zeros(n, n, &zero);
    for i in residue_digits(ring) {
        let ip = i.clone() * p.clone();
        for col in 0..n {
            let lm = mixed(&ku, col);
            let polys: Vec<Vec<UnramifiedScalar>> = (0..ku.len())
                .map(|e| {
                    let base = poly_pow(&[one.clone(), -ip.clone()], ku[e] - lm[e]);
                    let shifted: Vec<UnramifiedScalar> = std::iter::repeat_n(zero.clone(), lm[e])
                        .chain(base.into_iter().map(|x| x * Ring::pow(&p, lm[e] as u64)))
                        .collect();
                    shifted.into_iter().map(|x| x.frobenius_power(e)).collect()
                })
                .collect();
            for row in 0..n {
                let jm = mixed(&ku, row);
                let entry = (0..ku.len()).fold(one.clone(), |acc, e| acc * polys[e].get(jm[e]).cloned().unwrap_or(zero.clone()));
                fun.set(row, col, fun.get(row, col).clone() + entry);
            }
        }
    }
    Ok(fun.transpose())
}

/// `∫∫ k(xY − Xy) dμ_1 dμ_2 = Σ_l ∏_σ C(k_σ, l_σ)(−1)^{l_σ} μ_1(z^l) p^{|l|} μ_2(w'^l)`.
pub fn pair_dual(mu1: &Distribution, mu2: &DualDistribution) -> Result<UnramifiedScalar> {
    if mu1.weight != mu2.weight {
        return domain("pairing needs equal weights on both sides");
    }
    let ku = classical_k(&mu1.weight)?;
    let proj = classical_projection(mu1)?;
    let p = mu1.space.p_power(1);
    let mut acc = mu1.space.zero();
    for (j, (a, b)) in proj.iter().zip(&mu2.values).enumerate() {
        let lm = mixed(&ku, j);
        let mut c = BigInt::from(1);
        for (e, &l) in lm.iter().enumerate() {
            c *= binomial(ku[e] as i64, l as i64);
            if l % 2 == 1 {
                c = -c;
            }
        }
        let total: usize = lm.iter().sum();
        acc = acc + a.clone() * b.clone() * Ring::pow(&p, total as u64) * p.from_bigint_like(&c);
    }
    Ok(acc)
}
