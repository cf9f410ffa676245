mod common;

use std::time::Instant;

use common::oracles::projective_point_count;
use common::*;
use ncg_core::algebra::{hilbert_series, PresentedAlgebra};
use ncg_core::koszul::{
    clifford_algebra, clifford_level_consistency, commutative_semisimple_decompose, enumerate_projective_points,
    evaluate_commutative, quadratic_dual, quadratic_relation_space,
};
use ncg_core::scalars::{root_of_unity, Field, PrimeField};

/// `H_A(t) * H_B(-t)` through `n` terms.
fn pairing(ha: &[i64], hb: &[i64], n: usize) -> Vec<i64> {
    (0..n)
        .map(|k| (0..=k).map(|i| ha[i] * hb[k - i] * if (k - i) % 2 == 0 { 1 } else { -1 }).sum())
        .collect()
}

#[test]
fn relation_space_and_its_complement() {
    let f = gf13();
    for rels in [&S_RELS[..], &A_RELS[..]] {
        let pres = presentation(&f, rels);
        let dual = quadratic_dual(&pres).unwrap();
        let r = quadratic_relation_space(&pres).unwrap().dim();
        let rp = quadratic_relation_space(&dual).unwrap().dim();
        assert_eq!(r, rels.len());
        assert_eq!(r + rp, 9);
        let back = quadratic_relation_space(&quadratic_dual(&dual).unwrap()).unwrap();
        assert!(back.is_subspace_of(&f, &quadratic_relation_space(&pres).unwrap()));
        assert_eq!(back.dim(), r);
    }
}

#[test]
fn koszul_pairing_and_dual_dims() {
    let f = gf13();
    for (rels, dual_dims) in [(&S_RELS[..], vec![1, 3, 3, 1, 0, 0, 0]), (&A_RELS[..], vec![1, 3, 4, 4, 4, 4, 4])] {
        let pres = presentation(&f, rels);
        let a = PresentedAlgebra::new(&pres, 6).unwrap();
        let ad = PresentedAlgebra::new(&quadratic_dual(&pres).unwrap(), 6).unwrap();
        let ha = hilbert_series(&a, 6).unwrap().coeffs;
        let hd = hilbert_series(&ad, 6).unwrap().coeffs;
        assert_eq!(hd, dual_dims);
        let mut one = vec![0; 7];
        one[0] = 1;
        assert_eq!(pairing(&ha, &hd, 7), one);
    }
}

#[test]
fn dual_of_s_is_palindromic() {
    let f = gf13();
    let sd = PresentedAlgebra::new(&quadratic_dual(&presentation(&f, &S_RELS)).unwrap(), 5).unwrap();
    let h = hilbert_series(&sd, 5).unwrap().coeffs;
    let top = h.iter().rposition(|&c| c != 0).unwrap();
    assert_eq!(top, 3);
    for i in 0..=top {
        assert_eq!(h[i], h[top - i]);
    }
}

#[test]
fn clifford_algebra_is_four_points() {
    let start = Instant::now();
    let f = gf13();
    let ad = PresentedAlgebra::new(&quadratic_dual(&presentation(&f, &A_RELS)).unwrap(), 10).unwrap();
    let c = clifford_algebra(&ad, &poly(&f, "x^2")).unwrap();
    assert_eq!(c.algebra.dim(), 4);
    assert!(c.algebra.is_commutative());
    c.algebra.check_associative().unwrap();
    let blocks = commutative_semisimple_decompose(&c.algebra).unwrap();
    assert_eq!(blocks.len(), 4);
    assert!(blocks.iter().all(|b| b.dim == 1));
    assert!(clifford_level_consistency(&ad, &poly(&f, "x^2"), c.level).unwrap());
    // k^4 is the only 4-dimensional algebra with 2^4 idempotents.
    let mut idempotents = 0;
    for idx in 0..13u64.pow(4) {
        let e: Vec<u64> = (0..4).map(|k| idx / 13u64.pow(k) % 13).collect();
        if c.algebra.mul(&e, &e) == e {
            idempotents += 1;
        }
    }
    assert_eq!(idempotents, 16);
    assert!(start.elapsed().as_secs() < 5);
}

#[test]
fn clifford_rejects_bad_elements() {
    let f = gf13();
    let ad = PresentedAlgebra::new(&quadratic_dual(&presentation(&f, &A_RELS)).unwrap(), 10).unwrap();
    assert!(clifford_algebra(&ad, &poly(&f, "x")).is_err());
}

#[test]
fn conic_pair_has_four_points() {
    let f = gf13();
    let polys = vec![poly(&f, "x*y + z^2"), poly(&f, "x^2 - y^2")];
    let start = Instant::now();
    let pts = enumerate_projective_points(&polys, &f, 3);
    assert!(start.elapsed().as_secs() < 1);
    let oracle = projective_point_count(&[|x, y, z| x * y + z * z, |x, y, _| x * x + 13 * 13 - y * y]);
    assert_eq!(pts.len(), oracle);
    assert_eq!(pts.len(), 4);
    for p in &pts {
        assert_eq!(*p.iter().rev().find(|&&c| c != 0).unwrap(), 1);
        assert!(polys.iter().all(|q| evaluate_commutative(q, p) == 0));
    }
}

#[test]
fn roots_of_unity_have_exact_order() {
    for (p, n) in [(13u64, 4u64), (13, 3), (13, 12), (7, 6), (31, 5)] {
        let f = PrimeField::new(p).unwrap();
        let r = root_of_unity(&f, n).unwrap();
        assert!(f.is_one(&f.pow(&r, n)));
        assert!((1..n).all(|k| !f.is_one(&f.pow(&r, k))));
    }
    assert!(root_of_unity(&PrimeField::new(7).unwrap(), 4).is_err());
}
