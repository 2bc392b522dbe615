//! Continuous characters of `(O ⊗ Z_p)^×`: classical exponent characters and
//! the universal character with values in the Iwasawa algebra.

use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::matrix::Matrix;
use crate::padic::scalar::{PadicContext, PadicScalar};
use crate::padic::series::IwasawaSeries;
use crate::padic::unramified::{UnramifiedContext, UnramifiedScalar};
use crate::ring::Ring;

/// One prime `𝔭 | p` of the totally real field, with its completion `O_𝔭`.
#[derive(Clone, Debug)]
pub struct PrimeComponent {
    pub label: String,
    pub ring: Arc<UnramifiedContext>,
}

impl PrimeComponent {
    pub fn residue_degree(&self) -> usize {
        self.ring.degree()
    }
}

/// `O ⊗ Z_p = ∏_𝔭 O_𝔭`, with the embeddings `Σ_F` ordered prime by prime
/// (`σ^0, …, σ^{f−1}` inside each). The first prime is `𝔭_0` and has residue
/// degree one; its single embedding is `τ_0`.
#[derive(Clone, Debug)]
pub struct LocalStructure {
    base: PadicContext,
    components: Vec<PrimeComponent>,
}

/// A point of `(O ⊗ Z_p)`: one entry per prime component.
pub type LocalPoint = Vec<UnramifiedScalar>;

impl LocalStructure {
    pub fn new(base: PadicContext, components: Vec<PrimeComponent>) -> Result<Self> {
        if components.is_empty() {
            return domain("at least one prime above p is required");
        }
        if components[0].residue_degree() != 1 {
            return domain("the distinguished prime must have residue degree 1");
        }
        if components.iter().any(|c| c.ring.base() != base) {
            return domain("all prime components must share the base precision");
        }
        Ok(Self { base, components })
    }

    /// `F = Q`: a single prime of degree one.
    pub fn rational(base: PadicContext) -> Self {
        let ring = UnramifiedContext::standard(base, 1).expect("degree one always exists");
        Self { base, components: vec![PrimeComponent { label: "p0".into(), ring }] }
    }

    /// Builds components with the standard defining polynomial for each residue degree.
    pub fn with_degrees(base: PadicContext, degrees: &[(String, usize)]) -> Result<Self> {
        let comps = degrees
            .iter()
            .map(|(label, f)| Ok(PrimeComponent { label: label.clone(), ring: UnramifiedContext::standard(base, *f)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, comps)
    }

    pub fn base(&self) -> PadicContext {
        self.base
    }

    pub fn components(&self) -> &[PrimeComponent] {
        &self.components
    }

    /// Number of embeddings `d = [F : Q]`.
    pub fn degree(&self) -> usize {
        self.components.iter().map(|c| c.residue_degree()).sum()
    }

    /// `(component, Frobenius power)` for each embedding in order.
    pub fn embeddings(&self) -> Vec<(usize, usize)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(c, comp)| (0..comp.residue_degree()).map(move |j| (c, j)))
            .collect()
    }

    /// Index range of the embeddings belonging to one prime.
    pub fn embedding_range(&self, component: usize) -> std::ops::Range<usize> {
        let start: usize = self.components[..component].iter().map(|c| c.residue_degree()).sum();
        start..start + self.components[component].residue_degree()
    }

    pub fn one(&self) -> LocalPoint {
        self.components.iter().map(|c| UnramifiedScalar::from_int(&c.ring, 1)).collect()
    }

    /// The rational integer `n` embedded diagonally.
    pub fn integer(&self, n: i64) -> LocalPoint {
        self.components.iter().map(|c| UnramifiedScalar::from_int(&c.ring, n)).collect()
    }

    /// `N(t) = ∏_𝔭 N_{O_𝔭/Z_p}(t_𝔭)`.
    pub fn norm(&self, t: &LocalPoint) -> PadicScalar {
        t.iter().fold(self.base.one(), |acc, x| acc * x.norm())
    }

    pub fn multiply(&self, s: &LocalPoint, t: &LocalPoint) -> LocalPoint {
        s.iter().zip(t).map(|(a, b)| a.clone() * b.clone()).collect()
    }

    /// The default `Z_p`-basis of `1 + pO`: `1 + pθ^i` in one component, `1` elsewhere.
    pub fn default_basis(&self) -> Vec<LocalPoint> {
        let mut basis = Vec::new();
        for (c, comp) in self.components.iter().enumerate() {
            let theta = UnramifiedScalar::theta(&comp.ring);
            let p = UnramifiedScalar::from_int(&comp.ring, self.base.p as i64);
            let one = UnramifiedScalar::from_int(&comp.ring, 1);
            for i in 0..comp.residue_degree() {
                let mut point = self.one();
                point[c] = one.clone() + p.clone() * theta.pow(i as u64);
                basis.push(point);
            }
        }
        basis
    }

    fn check_point(&self, t: &LocalPoint) -> Result<()> {
        if t.len() != self.components.len() {
            return domain(format!("point has {} components, expected {}", t.len(), self.components.len()));
        }
        Ok(())
    }

    /// Is every component congruent to 1 mod p?
    pub fn is_principal(&self, t: &LocalPoint) -> bool {
        t.iter().all(|x| {
            let d = x.clone() - x.one_like();
            d.valuation().is_none_or(|v| v >= 1)
        })
    }

    /// Coordinates `γ` with `log t = Σ γ_j log e_j`, for `t ∈ 1 + pO`.
    pub fn log_coordinates(&self, basis: &[LocalPoint], t: &LocalPoint) -> Result<Vec<PadicScalar>> {
        self.check_point(t)?;
        let d = self.degree();
        if basis.len() != d {
            return domain(format!("basis has {} elements, expected {d}", basis.len()));
        }
        let log_over_p = |x: &LocalPoint| -> Result<Vec<PadicScalar>> {
            let mut out = Vec::with_capacity(d);
            for comp in x {
                for c in log_unramified(comp)?.coeffs() {
                    out.push(c.divide_by_p_power(1)?);
                }
            }
            Ok(out)
        };
        let cols: Vec<Vec<PadicScalar>> = basis.iter().map(log_over_p).collect::<Result<_>>()?;
        let m = Matrix::from_fn(d, d, |i, j| cols[j][i]);
        let rhs = log_over_p(t)?;
        m.solve_unimodular(&rhs)
            .map_err(|_| Error::Domain("configured basis of 1 + pO is not a Z_p-basis".into()))
    }
}

/// `log(x)` for `x ≡ 1 mod p` in an unramified extension.
pub fn log_unramified(x: &UnramifiedScalar) -> Result<UnramifiedScalar> {
    let y = x.clone() - x.one_like();
    if y.valuation().is_some_and(|v| v < 1) {
        return domain("log needs x ≡ 1 mod p");
    }
    let n = x.precision();
    let p = x.context().prime();
    // x - 1 = p z; any lift of z works because every term carries p^(k - v(k)) with k - v(k) ≥ 1.
    let z = lift_precision(&crate::padic::scalar::PadicRing::divide_by_p_power(&y, 1)?, n);
    let mut acc = x.zero_like();
    let mut zpow = x.one_like();
    for k in 1..=(n as u64 + 64) {
        zpow = zpow * z.clone();
        let vk = crate::padic::scalar::val_u64(k, p);
        let shift = k - vk as u64;
        if shift >= n as u64 {
            continue;
        }
        let unit = PadicScalar::from_u64(p, n, k / p.pow(vk)).inverse()?;
        let scale = PadicScalar::from_u64(p, n, 1).mul_p_power(shift as u32) * unit;
        let term = zpow.scale(&scale);
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// Reinterprets the digits of `x` at precision `n` (an arbitrary lift).
fn lift_precision(x: &UnramifiedScalar, n: u32) -> UnramifiedScalar {
    let coeffs = x
        .coeffs()
        .iter()
        .map(|c| PadicScalar::from_u64(c.prime(), n, c.residue()))
        .collect();
    UnramifiedScalar::from_coeffs(x.context(), coeffs).expect("same degree")
}

/// Value of a classical character: one factor per prime component; the
/// `Z_p`-valued norm factor is folded into the first (degree-one) component.
#[derive(Clone, Debug, PartialEq)]
pub struct CharValue {
    pub factors: Vec<UnramifiedScalar>,
}

impl CharValue {
    pub fn multiply(&self, other: &Self) -> Self {
        Self { factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a.clone() * b.clone()).collect() }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.iter().all(|f| f.is_unit())
    }

    /// The value as a single `Z_p` scalar when every factor lies in `Z_p`.
    pub fn as_scalar(&self) -> Option<PadicScalar> {
        let mut acc: Option<PadicScalar> = None;
        for f in &self.factors {
            let s = f.as_scalar()?;
            acc = Some(match acc {
                None => s,
                Some(a) => a * s,
            });
        }
        acc
    }
}

/// The universal character `t ↦ ∏_j (1 + T_j)^{γ_j(t)}` on `1 + pO`.
#[derive(Clone, Debug)]
pub struct UniversalCharacter {
    pub structure: LocalStructure,
    pub basis: Vec<LocalPoint>,
    pub cap: u32,
}

impl UniversalCharacter {
    pub fn new(structure: LocalStructure, cap: u32) -> Self {
        let basis = structure.default_basis();
        Self { structure, basis, cap }
    }

    pub fn with_basis(structure: LocalStructure, basis: Vec<LocalPoint>, cap: u32) -> Result<Self> {
        if basis.len() != structure.degree() {
            return domain("basis size must equal the number of embeddings");
        }
        for b in &basis {
            if !structure.is_principal(b) {
                return domain("basis elements must lie in 1 + pO");
            }
        }
        Ok(Self { structure, basis, cap })
    }

    pub fn nvars(&self) -> usize {
        self.structure.degree()
    }

    pub fn eval(&self, t: &LocalPoint) -> Result<IwasawaSeries> {
        if !self.structure.is_principal(t) {
            return domain("universal character is evaluated on 1 + pO only");
        }
        let gammas = self.structure.log_coordinates(&self.basis, t)?;
        let ctx = self.structure.base();
        let d = self.nvars();
        let mut acc = IwasawaSeries::constant(ctx, d, self.cap, ctx.one());
        for (j, g) in gammas.iter().enumerate() {
            acc = acc * IwasawaSeries::binomial_power(ctx, d, self.cap, j, g);
        }
        Ok(acc)
    }

    /// The specialization point `T_j = k(e_j) − 1` of a classical weight.
    ///
    /// Supported when at most one prime component has residue degree above one,
    /// so that every coordinate lives in a single ring.
    pub fn classical_point(&self, exps: &[i64]) -> Result<Vec<UnramifiedScalar>> {
        let comps = self.structure.components();
        let big: Vec<usize> = (0..comps.len()).filter(|&c| comps[c].residue_degree() > 1).collect();
        if big.len() > 1 {
            return Err(Error::Unsupported(
                "specialization with several inert components needs a compositum".into(),
            ));
        }
        let target = big.first().copied().unwrap_or(0);
        let ring = &comps[target].ring;
        let chi = Character::Classical { exps: exps.to_vec(), nu: 0 };
        self.basis
            .iter()
            .map(|e| {
                let v = chi.eval_classical(&self.structure, e)?;
                let mut acc = UnramifiedScalar::from_int(ring, 1);
                for f in &v.factors {
                    acc = acc * embed(f, ring)?;
                }
                Ok(acc - UnramifiedScalar::from_int(ring, 1))
            })
            .collect()
    }
}

fn embed(x: &UnramifiedScalar, ring: &Arc<UnramifiedContext>) -> Result<UnramifiedScalar> {
    if Arc::ptr_eq(x.context(), ring) || x.context().as_ref() == ring.as_ref() {
        return Ok(x.clone());
    }
    let s = x.as_scalar().ok_or_else(|| Error::Unsupported("value outside Z_p cannot change rings".into()))?;
    Ok(UnramifiedScalar::from_scalar_in(ring, s))
}

/// A continuous character of `O^×` (with an optional norm twist `ν`).
#[derive(Clone, Debug)]
pub enum Character {
    /// `t ↦ ∏_τ τ(t)^{k_τ} · N(t)^ν`.
    Classical { exps: Vec<i64>, nu: i64 },
    Universal(UniversalCharacter),
}

/// Result of [`char_eval`].
#[derive(Clone, Debug)]
pub enum CharEval {
    Classical(CharValue),
    Universal(IwasawaSeries),
}

impl Character {
    pub fn trivial(d: usize) -> Self {
        Character::Classical { exps: vec![0; d], nu: 0 }
    }

    fn eval_classical(&self, s: &LocalStructure, t: &LocalPoint) -> Result<CharValue> {
        let Character::Classical { exps, nu } = self else {
            unreachable!("called on classical characters only")
        };
        if exps.len() != s.degree() {
            return domain(format!("weight has {} entries, expected {}", exps.len(), s.degree()));
        }
        s.check_point(t)?;
        let mut factors = Vec::with_capacity(t.len());
        for (c, x) in t.iter().enumerate() {
            if !x.is_unit() {
                return domain("characters are evaluated on units");
            }
            let mut acc = x.one_like();
            let mut conj = x.clone();
            for idx in s.embedding_range(c) {
                let k = exps[idx];
                let factor = if k >= 0 { conj.pow(k as u64) } else { conj.inverse()?.pow(k.unsigned_abs()) };
                acc = acc * factor;
                conj = conj.frobenius();
            }
            factors.push(acc);
        }
        let norm = s.norm(t).pow_i64(*nu)?;
        factors[0] = factors[0].scale(&norm);
        Ok(CharValue { factors })
    }
}

/// Evaluates a character at a point of `(O ⊗ Z_p)^×`.
pub fn char_eval(chi: &Character, s: &LocalStructure, t: &LocalPoint) -> Result<CharEval> {
    match chi {
        Character::Classical { .. } => Ok(CharEval::Classical(chi.eval_classical(s, t)?)),
        Character::Universal(u) => Ok(CharEval::Universal(u.eval(t)?)),
    }
}
