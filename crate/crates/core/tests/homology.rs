mod common;

use common::*;
use ncg_core::endo::as_gorenstein_check;
use ncg_core::gmodule::{presentation_from_tabulated, shift_module, TabulatedModule};
use ncg_core::homology::{
    are_isomorphic_graded, check_cluster_tilting, compose, ext_graded_dims, free_resolution, hom_space, identity_hom,
    in_additive_closure, is_indecomposable, is_mcm, Window,
};

/// Alternating sum of `dim P_{i,d}` against `dim M_d` for every degree
/// that only sees computed steps.
fn euler_holds(m: &Module, steps: usize, w: &Window) -> bool {
    let res = free_resolution(m, steps, w).unwrap();
    let lo = m.lowest_degree().unwrap();
    let top = (lo + res.len() as i64 - 1).min(res.complete_internal_through());
    (lo..=top).all(|d| {
        let alt: i64 = (0..res.len())
            .map(|i| {
                let n = res.projective_basis(i, d).unwrap().len() as i64;
                if i % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum();
        alt == m.dim(d).unwrap() as i64
    })
}

#[test]
fn resolutions_are_complexes_and_exact() {
    let a = algebra(&A_RELS, 14);
    let w = Window::default();
    for m in [residue_field(&a), cone_module(&a, 0), big_x(&a)] {
        let res = free_resolution(&m, 4, &w).unwrap();
        assert!(res.check_d_squared().unwrap());
        assert!(res.check_exactness().unwrap());
        assert!(euler_holds(&m, 5, &w));
    }
}

#[test]
fn residue_field_resolution_shape() {
    let a = algebra(&A_RELS, 14);
    let res = free_resolution(&residue_field(&a), 4, &Window::default()).unwrap();
    assert_eq!(res.shifts(0), vec![0]);
    assert_eq!(res.shifts(1), vec![-1; 3]);
    // A is a hypersurface ring: from step 2 on the ranks stay at 4.
    assert_eq!(res.shifts(2).len(), 4);
    assert_eq!(res.shifts(3), vec![-3; 4]);
}

#[test]
fn a_is_gorenstein_on_both_sides() {
    let a = algebra(&A_RELS, 16);
    let aop = opposite(&a);
    let g = as_gorenstein_check(&a, &aop, 2, 1, &Window::default()).unwrap();
    assert!(g.pass && !g.inconclusive);
    for side in [&g.right, &g.left] {
        assert!(side.ext[0].is_zero());
        assert!(side.ext[1].is_zero());
        assert_eq!(side.ext[2].support(), vec![(-1, 1)]);
        assert!(side.ext[3].is_zero());
    }
    // Wrong parameters fail.
    assert!(!as_gorenstein_check(&a, &aop, 2, 2, &Window::default()).unwrap().pass);
}

#[test]
fn cones_are_mcm_and_indecomposable() {
    let a = algebra(&A_RELS, 16);
    let w = Window::default();
    for i in 0..4 {
        let m = cone_module(&a, i);
        let r = is_mcm(&m, &w).unwrap();
        assert!(r.is_mcm && !r.inconclusive, "X{}", i + 1);
        assert!(is_indecomposable(&m).unwrap());
    }
    assert!(!is_mcm(&residue_field(&a), &w).unwrap().is_mcm);
    assert!(!is_indecomposable(&big_x(&a)).unwrap());
}

#[test]
fn cones_are_pairwise_distinct_up_to_shift() {
    let a = algebra(&A_RELS, 16);
    let w = Window::default();
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            for s in -3..=3 {
                let r = are_isomorphic_graded(&cone_module(&a, i), &shift_module(&cone_module(&a, j), s), &w, 64, 0).unwrap();
                assert!(r.is_certified_negative(), "X{} vs X{}({s})", i + 1, j + 1);
            }
        }
    }
    let x1 = cone_module(&a, 0);
    assert!(are_isomorphic_graded(&x1, &x1.clone(), &w, 64, 0).unwrap().is_isomorphic());
}

#[test]
fn ext_zero_is_hom() {
    let a = algebra(&A_RELS, 14);
    let w = Window::new(-3, 3, 2, 8).unwrap();
    let pairs = [(cone_module(&a, 0), cone_module(&a, 1)), (big_x(&a), cone_module(&a, 2)), (residue_field(&a), free(&a))];
    for (m, n) in &pairs {
        let e = ext_graded_dims(m, n, 0, &w).unwrap();
        for (t, dim) in &e.dims {
            assert_eq!(*dim, hom_space(m, n, *t).unwrap().dim(), "degree {t}");
        }
    }
}

#[test]
fn ext_ignores_the_presentation() {
    let a = algebra(&A_RELS, 14);
    let w = Window::new(-4, 4, 3, 8).unwrap();
    let x = big_x(&a);
    let t = TabulatedModule::from_module(&x, &a, 0, 8).unwrap();
    let other = presentation_from_tabulated(&t).unwrap();
    let k = residue_field(&a);
    for i in 0..=3 {
        assert_eq!(ext_graded_dims(&k, &x, i, &w).unwrap().dims, ext_graded_dims(&k, &other, i, &w).unwrap().dims);
    }
}

#[test]
fn composition_is_associative_with_unit() {
    let a = algebra(&A_RELS, 10);
    let x = big_x(&a);
    let h0 = hom_space(&x, &x, 0).unwrap();
    let h1 = hom_space(&x, &x, 1).unwrap();
    let id = identity_hom(&x).unwrap();
    for p in h1.basis.iter().take(6) {
        assert_eq!(compose(&x, &x, &x, &id, p).unwrap().images, p.images);
        assert_eq!(compose(&x, &x, &x, p, &id).unwrap().images, p.images);
    }
    for p in h0.basis.iter().take(4) {
        for q in h1.basis.iter().take(4) {
            for r in h0.basis.iter().take(4) {
                let left = compose(&x, &x, &x, &compose(&x, &x, &x, p, q).unwrap(), r).unwrap();
                let right = compose(&x, &x, &x, p, &compose(&x, &x, &x, q, r).unwrap()).unwrap();
                assert_eq!(left.images, right.images);
            }
        }
    }
}

#[test]
fn additive_closure_membership() {
    let a = algebra(&A_RELS, 10);
    let x = big_x(&a);
    assert!(in_additive_closure(&free(&a), &x).unwrap());
    assert!(in_additive_closure(&shift_module(&cone_module(&a, 3), 2), &x).unwrap());
    assert!(!in_additive_closure(&residue_field(&a), &x).unwrap());
    let only_a = free(&a);
    assert!(!in_additive_closure(&cone_module(&a, 0), &only_a).unwrap());
}

#[test]
fn x_generates_the_mcm_category() {
    let a = algebra(&A_RELS, 16);
    let w = Window::default();
    let x = big_x(&a);
    let cones: Vec<Module> = (0..4).map(|i| cone_module(&a, i)).collect();
    let mut cands: Vec<(String, &Module)> = cones.iter().enumerate().map(|(i, m)| (format!("X{}", i + 1), m)).collect();
    let k = residue_field(&a);
    cands.push(("k".into(), &k));
    let r = check_cluster_tilting(&x, 1, &cands, &w).unwrap();
    assert!(r.x_is_mcm && r.vacuous);
    for c in &r.candidates[..4] {
        assert!(c.mcm && c.in_add);
    }
    assert!(!r.candidates[4].mcm);
}
