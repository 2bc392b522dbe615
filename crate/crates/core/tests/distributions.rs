use std::sync::Arc;

use padic_triple::distributions::*;
use padic_triple::matrix::Matrix;
use padic_triple::padic::{PadicContext, PadicRing, UnramifiedContext, UnramifiedScalar};
use padic_triple::ring::Ring;
use padic_triple::spectral::{char_series, Slope};

fn ring(p: u64, f: usize, n: u32) -> Arc<UnramifiedContext> {
    UnramifiedContext::standard(PadicContext::new(p, n).unwrap(), f).unwrap()
}

fn same(a: &[UnramifiedScalar], b: &[UnramifiedScalar]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.eq_at(y))
}

/// `P(x, y) ↦ Σ_i P(x, ix + py)` on `Sym^k` over `Z/p^N`, computed with plain
/// integer polynomial arithmetic in the basis `x^{k−j} y^j`.
fn brute_force_classical_u(p: i128, n: u32, k: usize) -> Vec<Vec<i128>> {
    let modulus = p.pow(n);
    // (ix + py)^j expanded in x^{j−l} y^l
    let mut out = vec![vec![0i128; k + 1]; k + 1];
    for i in 0..p {
        for j in 0..=k {
            // x^{k-j} (ix + py)^j = Σ_l C(j,l) i^{j-l} p^l x^{k-l} y^l
            let mut binom = 1i128;
            for l in 0..=j {
                let term = binom * i.pow((j - l) as u32) % modulus * p.pow(l as u32) % modulus;
                out[l][j] = (out[l][j] + term) % modulus;
                binom = binom * (j - l) as i128 / (l as i128 + 1);
            }
        }
    }
    out
}

#[test]
fn classical_up_matches_brute_force() {
    for k in 0..=4usize {
        let r = ring(3, 1, 10);
        let cu = classical_up_matrix(&r, &[k as i64]).unwrap();
        let bf = brute_force_classical_u(3, 10, k);
        for row in 0..=k {
            for col in 0..=k {
                // classical_up_matrix is the dual operator, so it is the transpose.
                let expect = UnramifiedScalar::from_int(&r, bf[col][row] as i64);
                assert!(cu.get(row, col).eq_at(&expect), "k={k} ({row},{col})");
            }
        }
    }
}

#[test]
fn projection_is_up_equivariant() {
    let r = ring(3, 1, 12);
    for k in 0..=3i64 {
        let space = DiskSpace::new(r.clone(), 1, k as usize + 1).unwrap();
        let cu = classical_up_matrix(&r, &[k]).unwrap();
        for i in 0..space.dim() {
            let (disk, jm) = space.split(i);
            let mu = Distribution::dual_basis(space.clone(), vec![k], disk, &jm);
            let lhs = classical_projection(&up_operator(&mu).unwrap()).unwrap();
            let rhs = cu.apply(&classical_projection(&mu).unwrap());
            assert!(same(&lhs, &rhs), "k={k} basis {i}");
        }
    }
}

#[test]
fn sym_quotient_eigenvalues_match_classical() {
    // det(1 − X·U) on the Sym^k quotient equals that of the brute-force matrix.
    let r = ring(3, 1, 12);
    for k in 1..=3usize {
        let bf = brute_force_classical_u(3, 12, k);
        let m = Matrix::from_fn(k + 1, k + 1, |i, j| UnramifiedScalar::from_int(&r, bf[i][j] as i64));
        let cu = classical_up_matrix(&r, &[k as i64]).unwrap();
        let a = char_series(&m).unwrap();
        let b = char_series(&cu).unwrap();
        assert!(same(&a.coeffs, &b.coeffs));
    }
}

#[test]
fn up_support_is_reachable_classes() {
    let r = ring(3, 1, 10);
    let space = DiskSpace::new(r.clone(), 2, 2).unwrap();
    for disk in 0..space.disks() {
        let mu = Distribution::dual_basis(space.clone(), vec![2], disk, &[1]);
        let img = up_operator(&mu).unwrap();
        for (i, v) in img.values.iter().enumerate() {
            if !v.is_zero() {
                let (s, _) = space.split(i);
                // s ≡ p·r + i for some digit i
                assert!((0..3).any(|d| (3 * disk + d) % 9 == s), "disk {disk} reaches {s}");
            }
        }
    }
}

#[test]
fn compactness_on_several_primes() {
    for (p, f, m) in [(3, 1, 1), (3, 1, 2), (5, 1, 2), (3, 2, 1)] {
        let space = DiskSpace::new(ring(p, f, 10), m, 2).unwrap();
        assert!(compactness_witness(&space, &vec![1; f]).unwrap());
    }
}

#[test]
fn bgg_mechanism_p3() {
    let r = ring(3, 1, 20);
    for k in 0..=3i64 {
        let space = DiskSpace::new(r.clone(), 1, k as usize + 3).unwrap();
        let check = bgg_check(&space, &[k], 0).unwrap();
        assert!(check.intertwines, "k={k}");
        assert!(check.min_slope_ok, "k={k}: {:?}", check.polygon);
        assert!(check.polygon.min_slope().unwrap() >= Slope::from_integer(k + 1));
    }
}

#[test]
fn bgg_exactness_level_zero() {
    for k in 0..=4 {
        assert!(bgg_exact_at_level_zero(&ring(3, 1, 10), &[k], 2).unwrap());
    }
    assert!(bgg_exact_at_level_zero(&ring(3, 2, 10), &[1, 2], 1).unwrap());
    assert!(bgg_exact_at_level_zero(&ring(3, 2, 10), &[0, 4], 1).unwrap());
}

#[test]
fn dual_pairing_intertwines_up() {
    for (p, f, k) in [(3u64, 1usize, vec![2i64]), (5, 1, vec![3]), (3, 2, vec![1, 2])] {
        let r = ring(p, f, 12);
        let degrees: Vec<usize> = k.iter().map(|&x| x as usize).collect();
        let space = DiskSpace::with_degrees(r.clone(), 1, degrees).unwrap();
        let ustar = dual_up_matrix(&r, &k).unwrap();
        let n2 = DualDistribution::dim(&k).unwrap();
        for i in 0..space.dim() {
            let (disk, jm) = space.split(i);
            let mu1 = Distribution::dual_basis(space.clone(), k.clone(), disk, &jm);
            let umu1 = up_operator(&mu1).unwrap();
            for j in 0..n2 {
                let mu2 = DualDistribution::dual_basis(r.clone(), k.clone(), j).unwrap();
                let umu2 = DualDistribution { values: ustar.apply(&mu2.values), ..mu2.clone() };
                let lhs = pair_dual(&umu1, &mu2).unwrap();
                let rhs = pair_dual(&mu1, &umu2).unwrap();
                assert!(lhs.eq_at(&rhs), "p={p} k={k:?} ({i},{j})");
            }
        }
    }
}

#[test]
fn dual_pairing_examples() {
    let r = ring(3, 1, 10);
    let space = DiskSpace::new(r.clone(), 1, 1).unwrap();
    let zero = UnramifiedScalar::zero(&r);
    let one = UnramifiedScalar::from_int(&r, 1);
    // k = 0: μ1(1)·μ2(1)
    let mu1 = Distribution::point_mass(space.clone(), vec![0], &zero).unwrap();
    let mu2 = DualDistribution { ring: r.clone(), weight: vec![0], values: vec![one.clone()] };
    assert!(pair_dual(&mu1, &mu2).unwrap().eq_at(&one));
    // δ at (1,0) against δ at (0,1), k = 1: 1·1 − 0·0
    let mu1 = Distribution::point_mass(space, vec![1], &zero).unwrap();
    let mu2 = DualDistribution { ring: r.clone(), weight: vec![1], values: vec![one.clone(), zero.clone()] };
    assert!(pair_dual(&mu1, &mu2).unwrap().eq_at(&one));
}
