//! Characteristic series, Newton polygons and spectral projectors of Hecke
//! matrices at finite truncation.

use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::matrix::Matrix;
use crate::padic::scalar::bigint_valuation;
use crate::padic::character::LocalStructure;
use crate::padic::scalar::PadicRing;
use crate::ring::Ring;

pub type Slope = Ratio<i64>;

/// Coefficients of `det(1 − X·U)`, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSeries<R> {
    pub coeffs: Vec<R>,
}

impl<R: Ring> CharSeries<R> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        CharSeries { coeffs: poly_mul(&self.coeffs, &other.coeffs) }
    }
}

fn poly_mul<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Characteristic polynomial `det(λ − U)` by Berkowitz's division-free
/// algorithm, leading coefficient first.
pub fn charpoly<R: Ring>(u: &Matrix<R>) -> Result<Vec<R>> {
    if !u.is_square() || u.rows() == 0 {
        return domain("characteristic polynomial needs a non-empty square matrix");
    }
    let n = u.rows();
    let one = u.get(0, 0).one_like();
    let zero = one.zero_like();
    let mut v = vec![one.clone(), -u.get(0, 0).clone()];
    for r in 1..n {
        // Toeplitz column: 1, -a_rr, -C R, -C A R, ..., -C A^{r-1} R.
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(-u.get(r, r).clone());
        let mut col: Vec<R> = (0..r).map(|i| u.get(i, r).clone()).collect();
        for _ in 0..r {
            let mut dot = zero.clone();
            for (j, x) in col.iter().enumerate() {
                dot = dot + u.get(r, j).clone() * x.clone();
            }
            t.push(-dot);
            col = (0..r)
                .map(|i| {
                    let mut acc = zero.clone();
                    for (j, x) in col.iter().enumerate() {
                        acc = acc + u.get(i, j).clone() * x.clone();
                    }
                    acc
                })
                .collect();
        }
        let next: Vec<R> = (0..r + 2)
            .map(|i| {
                let mut acc = zero.clone();
                for j in 0..=i.min(r) {
                    acc = acc + t[i - j].clone() * v[j].clone();
                }
                acc
            })
            .collect();
        v = next;
    }
    Ok(v)
}

/// `det(1 − X·U)`: the characteristic polynomial read backwards.
pub fn char_series<R: Ring>(u: &Matrix<R>) -> Result<CharSeries<R>> {
    Ok(CharSeries { coeffs: charpoly(u)? })
}

/// Slopes of a Newton polygon with multiplicities, plus the part the working
/// precision cannot resolve.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolygon {
    pub segments: Vec<(Slope, usize)>,
    /// Roots whose slope is only bounded below: `(lower bound, count)`.
    /// Exact zero eigenvalues of a rational matrix are reported with bound `None`.
    pub tail: Option<(Option<Slope>, usize)>,
}

impl NewtonPolygon {
    /// Slopes listed with multiplicity.
    pub fn slopes(&self) -> Vec<Slope> {
        self.segments.iter().flat_map(|(s, m)| std::iter::repeat_n(*s, *m)).collect()
    }

    pub fn multiplicity(&self, slope: Slope) -> usize {
        self.segments.iter().filter(|(s, _)| *s == slope).map(|(_, m)| m).sum()
    }

    pub fn count_below(&self, h: Slope) -> usize {
        self.segments.iter().filter(|(s, _)| *s < h).map(|(_, m)| m).sum()
    }

    pub fn min_slope(&self) -> Option<Slope> {
        self.segments.first().map(|(s, _)| *s)
    }
}

/// Lower convex hull through integer points with increasing abscissae,
/// merging collinear runs so each vertex is leftmost.
fn lower_hull(points: &[(usize, i64)]) -> Vec<(Slope, usize)> {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Drop the middle vertex unless it lies strictly below the chord.
            let lhs = (y2 - y1) as i128 * (pt.0 - x1) as i128;
            let rhs = (pt.1 - y1) as i128 * (x2 - x1) as i128;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| (Slope::new(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64), w[1].0 - w[0].0))
        .collect()
}

fn hull_height(segments: &[(Slope, usize)], start: i64, x: usize) -> Slope {
    let mut y = Slope::from_integer(start);
    let mut pos = 0usize;
    for (s, m) in segments {
        if x <= pos + m {
            return y + *s * Slope::from_integer((x - pos) as i64);
        }
        y += *s * Slope::from_integer(*m as i64);
        pos += m;
    }
    y
}

/// Newton polygon of a characteristic series known to finite precision.
///
/// Interior coefficients that vanish at their precision are accepted only when
/// the hull already lies below what they could be; otherwise the polygon is
/// ambiguous and a precision error is returned.
pub fn newton_polygon<R: PadicRing>(s: &CharSeries<R>) -> Result<NewtonPolygon> {
    let c = &s.coeffs;
    if c[0].valuation() != Some(0) {
        return domain("characteristic series must have unit constant term");
    }
    let known: Vec<(usize, i64)> =
        c.iter().enumerate().filter_map(|(i, x)| x.valuation().map(|v| (i, v as i64))).collect();
    let segments = lower_hull(&known);
    let last = known.last().unwrap().0;
    for (i, x) in c.iter().enumerate().take(last) {
        if x.valuation().is_none() && Slope::from_integer(x.precision() as i64) < hull_height(&segments, 0, i) {
            return Err(Error::Precision(format!(
                "coefficient {i} vanishes mod p^{} but the polygon needs more digits there",
                x.precision()
            )));
        }
    }
    let tail = if last + 1 < c.len() {
        let v_last = known.last().unwrap().1;
        let bound = (last + 1..c.len())
            .map(|j| Slope::new(c[j].precision() as i64 - v_last, (j - last) as i64))
            .min()
            .unwrap();
        if let Some((s_last, _)) = segments.last() {
            if bound < *s_last {
                return Err(Error::Precision(format!(
                    "trailing coefficients vanish at precision but could still bend the polygon below slope {s_last}"
                )));
            }
        }
        Some((Some(bound), c.len() - 1 - last))
    } else {
        None
    };
    Ok(NewtonPolygon { segments, tail })
}

/// Newton polygon of an exact rational characteristic series; trailing zero
/// coefficients are zero eigenvalues.
pub fn newton_polygon_exact(coeffs: &[BigRational], p: u64) -> Result<NewtonPolygon> {
    let val = |x: &BigRational| rational_valuation(x, p).unwrap_or(i64::MAX);
    if coeffs.is_empty() || val(&coeffs[0]) != 0 {
        return domain("characteristic series must have unit constant term");
    }
    let known: Vec<(usize, i64)> =
        coeffs.iter().enumerate().filter(|(_, x)| !Zero::is_zero(*x)).map(|(i, x)| (i, val(x))).collect();
    let last = known.last().unwrap().0;
    let tail = (last + 1 < coeffs.len()).then(|| (None, coeffs.len() - 1 - last));
    Ok(NewtonPolygon { segments: lower_hull(&known), tail })
}

/// The ordinary projector `lim U^{n!}`, iterated until it stabilises.
pub fn e_ord<R: PadicRing>(u: &Matrix<R>) -> Result<Matrix<R>> {
    e_ord_with_cap(u, 400)
}

pub fn e_ord_with_cap<R: PadicRing>(u: &Matrix<R>, cap: u64) -> Result<Matrix<R>> {
    if !u.is_square() || u.rows() == 0 {
        return domain("e_ord needs a non-empty square matrix");
    }
    let mut e = u.clone();
    for n in 2..=cap {
        let next = e.pow(n);
        let sq = &next * &next;
        if next.eq_at(&e) && sq.eq_at(&next) {
            return Ok(next);
        }
        e = next;
    }
    let residual = (&(&e * &e) - &e).valuation();
    Err(Error::NoConvergence(format!(
        "U^(n!) did not stabilise after {cap} steps; E^2 - E has valuation {}",
        residual.map_or("infinite".to_string(), |v| v.to_string())
    )))
}

/// Rank of an idempotent, read off its trace.
pub fn idempotent_rank<R: PadicRing>(e: &Matrix<R>) -> Result<usize> {
    let tr = e.trace();
    (0..=e.rows())
        .find(|&r| tr.eq_at(&tr.from_int_like(r as i64)))
        .ok_or_else(|| Error::Identity("trace of the projector is not a rank".into()))
}

/// Checks that `E·U` is invertible on the image of `E`: the coefficient of
/// `det(1 − X·EU)` at the rank is a unit and nothing beyond it survives.
pub fn unit_block_ok<R: PadicRing>(u: &Matrix<R>, e: &Matrix<R>) -> Result<bool> {
    let r = idempotent_rank(e)?;
    let cs = char_series(&(e * u))?;
    Ok(cs.coeffs[r].valuation() == Some(0) && cs.coeffs[r + 1..].iter().all(|c| c.valuation().unwrap_or(u32::MAX) > 0))
}

/// Where the slope cut sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlopeCut {
    /// Strictly below `h`.
    Below(Slope),
    /// Slope exactly zero; resolved as `h = 1/(n+1)`, which no slope of an
    /// `n × n` matrix can equal.
    ZeroPlus,
}

/// A slope projector stored as `numerator / p^shift`.
#[derive(Clone, Debug)]
pub struct SlopeProjector<R: Ring> {
    pub numerator: Matrix<R>,
    pub shift: u32,
    pub rank: usize,
}

impl<R: PadicRing> SlopeProjector<R> {
    /// The projector itself, when it has integral entries.
    pub fn to_matrix(&self) -> Result<Matrix<R>> {
        let rows: Result<Vec<Vec<R>>> = (0..self.numerator.rows())
            .map(|i| self.numerator.row(i).iter().map(|x| x.divide_by_p_power(self.shift)).collect())
            .collect();
        Matrix::from_rows(rows?)
    }

    /// `N² = p^shift·N`.
    pub fn is_idempotent(&self) -> bool {
        let n = &self.numerator;
        let p = n.get(0, 0).from_int_like(n.get(0, 0).prime() as i64);
        (n * n).eq_at(&n.scale(&Ring::pow(&p, self.shift as u64)))
    }

    pub fn commutes_with(&self, u: &Matrix<R>) -> bool {
        (&self.numerator * u).eq_at(&(u * &self.numerator))
    }
}

/// Number of roots of slope below `h`, read from where the line of slope `h`
/// supports the polygon.
fn count_below<R: PadicRing>(cs: &CharSeries<R>, h: Slope) -> Result<usize> {
    let mut best: Option<(Slope, usize)> = None;
    let mut tie = false;
    for (i, c) in cs.coeffs.iter().enumerate() {
        if let Some(v) = c.valuation() {
            let height = Slope::from_integer(v as i64) - h * Slope::from_integer(i as i64);
            match best {
                Some((b, _)) if height > b => {}
                Some((b, _)) if height == b => tie = true,
                _ => {
                    best = Some((height, i));
                    tie = false;
                }
            }
        }
    }
    let (b, s) = best.expect("constant term is known");
    if tie {
        return domain(format!("slope {h} is attained by the Newton polygon"));
    }
    for (i, c) in cs.coeffs.iter().enumerate() {
        if c.valuation().is_none()
            && Slope::from_integer(c.precision() as i64) - h * Slope::from_integer(i as i64) <= b
        {
            return Err(Error::Precision(format!("coefficient {i} is too imprecise to place slope {h}")));
        }
    }
    Ok(s)
}

fn p_power<R: Ring + PadicRing>(sample: &R, k: u64) -> R {
    Ring::pow(&sample.from_int_like(sample.prime() as i64), k)
}

/// Division of `x` by `y` where `v(x) >= v(y)` is expected.
fn div_by<R: PadicRing>(x: &R, y: &R) -> Result<R> {
    let e = y.valuation().ok_or_else(|| Error::Precision("divisor vanishes at precision".into()))?;
    let unit = y.divide_by_p_power(e)?.try_inverse()?;
    let num = if x.valuation().is_none() {
        if x.precision() <= e {
            return Err(Error::Precision("quotient has no significant digits".into()));
        }
        x.zero_like().truncate(x.precision() - e)
    } else {
        x.divide_by_p_power(e)?
    };
    Ok(num * unit)
}

fn matrix_poly<R: Ring>(coeffs: &[R], a: &Matrix<R>) -> Matrix<R> {
    let n = a.rows();
    let sample = a.get(0, 0);
    let mut acc = Matrix::zeros(n, n, sample);
    for c in coeffs.iter().rev() {
        acc = &(&acc * a) + &Matrix::identity(n, sample).scale(c);
    }
    acc
}

/// The projector onto the generalized eigenspace of slope below the cut,
/// built from a Hensel factorisation of the characteristic polynomial of
/// `U^b` rescaled by `p^a` (`h = a/b`).
pub fn slope_projector<R: PadicRing>(u: &Matrix<R>, cut: SlopeCut) -> Result<SlopeProjector<R>> {
    let n = u.rows();
    let h = match cut {
        SlopeCut::Below(h) => h,
        SlopeCut::ZeroPlus => Slope::new(1, n as i64 + 1),
    };
    let cs = char_series(u)?;
    let sample = u.get(0, 0).clone();
    let s = if *h.numer() <= 0 { 0 } else { count_below(&cs, h)? };
    if s == 0 {
        return Ok(SlopeProjector { numerator: Matrix::zeros(n, n, &sample), shift: 0, rank: 0 });
    }
    if s == n {
        return Ok(SlopeProjector { numerator: Matrix::identity(n, &sample), shift: 0, rank: n });
    }
    let (a, b) = (*h.numer() as u64, *h.denom() as u64);
    let t = n - s;
    let ub = u.pow(b);
    let mut pa: Vec<R> = charpoly(&ub)?;
    pa.reverse();
    let scaled: Vec<R> = pa.iter().enumerate().map(|(j, c)| c.clone() * p_power(&sample, a * j as u64)).collect();
    let pivot = scaled[t].clone();
    let pt: Vec<R> = scaled.iter().map(|c| div_by(c, &pivot)).collect::<Result<_>>()?;

    // Hensel: P̃ = G·H with G monic of degree t, G ≡ Y^t and H ≡ 1 mod p.
    let prec = pt.iter().map(|c| c.precision()).min().unwrap();
    let zero = pt[0].zero_like();
    let mut g: Vec<R> = (0..=t).map(|j| if j == t { zero.one_like() } else { zero.clone() }).collect();
    let mut hh: Vec<R> = (0..=s).map(|j| if j == 0 { zero.one_like() } else { zero.clone() }).collect();
    let mut converged = false;
    for _ in 0..=2 * prec + 2 {
        let gh = poly_mul(&g, &hh);
        let err: Vec<R> = (0..=n).map(|j| pt[j].clone() - gh[j].clone()).collect();
        if err.iter().all(|e| e.is_zero()) {
            converged = true;
            break;
        }
        for j in 0..t {
            g[j] = g[j].clone() + err[j].clone();
        }
        for j in 0..=s {
            hh[j] = hh[j].clone() + err[t + j].clone();
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Hensel lifting of the slope factorisation stalled".into()));
    }

    let ga: Vec<R> = g.iter().enumerate().map(|(j, c)| c.clone() * p_power(&sample, a * (t - j) as u64)).collect();
    let bmat = matrix_poly(&ga, &ub);

    let mut chi = charpoly(&bmat)?;
    chi.reverse();
    let r: Vec<R> = chi[t..].to_vec();
    let v = r[0]
        .valuation()
        .ok_or_else(|| Error::Precision("the slope block is not resolved at this precision".into()))?;
    let u0 = r[0].divide_by_p_power(v)?.try_inverse()?;
    let mut w: Vec<R> = Vec::with_capacity(t);
    for j in 0..t {
        let mut acc = if j == 0 { zero.one_like() } else { zero.clone() };
        for i in 1..=j.min(s) {
            acc = acc - r[i].clone() * w[j - i].clone() * p_power(&sample, v as u64 * (i as u64 - 1));
        }
        w.push(acc * u0.clone());
    }
    let w_tilde: Vec<R> =
        w.iter().enumerate().map(|(j, c)| c.clone() * p_power(&sample, v as u64 * (t - 1 - j) as u64)).collect();
    let shift = v * t as u32;
    let large = &matrix_poly(&w_tilde, &bmat) * &matrix_poly(&r, &bmat);
    let numerator = &Matrix::identity(n, &sample).scale(&p_power(&sample, shift as u64)) - &large;
    Ok(SlopeProjector { numerator, shift, rank: s })
}

/// Classicity slope bounds per prime: `k_{τ_0} − 1` at the distinguished
/// prime, `min{k_τ + 1 : τ ∈ Σ_𝔭}` elsewhere.
pub fn classicity_thresholds(structure: &LocalStructure, k: &[i64]) -> Result<Vec<(String, Slope)>> {
    if k.len() != structure.degree() {
        return domain("one weight per embedding expected");
    }
    Ok(structure
        .components()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let range = structure.embedding_range(c);
            let bound = if c == 0 { k[0] - 1 } else { k[range].iter().min().unwrap() + 1 };
            (comp.label.clone(), Slope::from_integer(bound))
        })
        .collect())
}

/// Exact valuation of a nonzero rational.
pub fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if Zero::is_zero(x) {
        return None;
    }
    Some(bigint_valuation(x.numer(), p)? as i64 - bigint_valuation(x.denom(), p)? as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::scalar::{PadicContext, PadicScalar};

    fn diag(c: &PadicContext, d: &[i64]) -> Matrix<PadicScalar> {
        Matrix::diagonal(&d.iter().map(|&x| c.scalar(x)).collect::<Vec<_>>())
    }

    #[test]
    fn diagonal_series_and_polygon() {
        let c = PadicContext::new(5, 10).unwrap();
        let cs = char_series(&diag(&c, &[5, 1])).unwrap();
        assert_eq!(cs.coeffs, vec![c.one(), c.scalar(-6), c.scalar(5)]);
        let np = newton_polygon(&cs).unwrap();
        assert_eq!(np.segments, vec![(Slope::from_integer(0), 1), (Slope::from_integer(1), 1)]);
        let np = newton_polygon(&char_series(&diag(&c, &[1, 1])).unwrap()).unwrap();
        assert_eq!(np.segments, vec![(Slope::from_integer(0), 2)]);
        let zero = char_series(&diag(&c, &[0, 0])).unwrap();
        assert!(zero.coeffs[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn ordinary_projector_examples() {
        let c = PadicContext::new(5, 10).unwrap();
        assert_eq!(e_ord(&diag(&c, &[1, 5])).unwrap(), diag(&c, &[1, 0]));
        assert_eq!(e_ord(&diag(&c, &[0, 0])).unwrap(), diag(&c, &[0, 0]));
        assert_eq!(e_ord(&diag(&c, &[1, 1])).unwrap(), diag(&c, &[1, 1]));
    }

    #[test]
    fn slope_projector_examples() {
        let c = PadicContext::new(5, 10).unwrap();
        let u = diag(&c, &[1, 5]);
        let e = slope_projector(&u, SlopeCut::Below(Slope::new(1, 2))).unwrap();
        assert!(e.to_matrix().unwrap().eq_at(&diag(&c, &[1, 0])));
        let e = slope_projector(&u, SlopeCut::Below(Slope::from_integer(3))).unwrap();
        assert!(e.to_matrix().unwrap().eq_at(&diag(&c, &[1, 1])));
        assert!(slope_projector(&u, SlopeCut::Below(Slope::from_integer(1))).is_err());
    }

    #[test]
    fn projector_on_a_non_diagonal_block() {
        let c = PadicContext::new(3, 12).unwrap();
        // Slopes 0, 1, 2 mixed by a unimodular change of basis.
        let p = Matrix::from_rows(vec![
            vec![c.scalar(1), c.scalar(1), c.scalar(0)],
            vec![c.scalar(0), c.scalar(1), c.scalar(1)],
            vec![c.scalar(1), c.scalar(0), c.scalar(1)],
        ])
        .unwrap();
        let d = diag(&c, &[2, 3, 18]);
        let cols: Vec<Vec<PadicScalar>> = (0..3)
            .map(|j| {
                let e: Vec<PadicScalar> = (0..3).map(|i| if i == j { c.one() } else { c.zero() }).collect();
                p.solve_unimodular(&e).unwrap()
            })
            .collect();
        let pinv = Matrix::from_fn(3, 3, |i, j| cols[j][i]);
        let u = &(&p * &d) * &pinv;
        let e = slope_projector(&u, SlopeCut::Below(Slope::new(3, 2))).unwrap();
        assert_eq!(e.rank, 2);
        assert!(e.is_idempotent() && e.commutes_with(&u));
        let em = e.to_matrix().unwrap();
        for j in 0..3 {
            let col = p.column(j);
            let img = em.apply(&col);
            let expect: Vec<PadicScalar> = if j < 2 { col.clone() } else { vec![c.zero(); 3] };
            assert!(img.iter().zip(&expect).all(|(a, b)| a.eq_at(b)), "column {j}");
        }
    }

    #[test]
    fn thresholds() {
        let c = PadicContext::new(5, 6).unwrap();
        let s = LocalStructure::with_degrees(c, &[("p0".into(), 1), ("p1".into(), 2)]).unwrap();
        let t = classicity_thresholds(&s, &[6, 2, 4]).unwrap();
        assert_eq!(t[0].1, Slope::from_integer(5));
        assert_eq!(t[1].1, Slope::from_integer(3));
        let t = classicity_thresholds(&LocalStructure::rational(c), &[6]).unwrap();
        assert_eq!(t.len(), 1);
    }
}
