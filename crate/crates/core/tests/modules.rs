mod common;

use common::oracles::Cyclic;
use common::*;
use ncg_core::gmodule::{
    dual_module, presentation_rank_check, shift_module, truncate_module, twist_module, GradedAutomorphism,
    TabulatedModule, presentation_from_tabulated,
};
use ncg_core::homology::{are_isomorphic_graded, hom_space, Window};

#[test]
fn cone_dims_match_quotient_spans() {
    let a = algebra(&A_RELS, 8);
    let ideal = sparse_rels(&A_RELS);
    let lines = sparse_rels(&LINES);
    for (i, l) in lines.iter().enumerate() {
        let oracle = Cyclic {
            ideal: &ideal,
            right: vec![l.clone()],
        };
        let m = cone_module(&a, i);
        for d in 0..=4 {
            assert_eq!(m.dim(d as i64).unwrap(), oracle.dim(d), "X{} degree {d}", i + 1);
        }
        assert_eq!(m.dims(0, 4).unwrap(), vec![1, 2, 3, 4, 5]);
    }
}

#[test]
fn sum_and_shift_dims() {
    let a = algebra(&A_RELS, 8);
    let x = big_x(&a);
    assert_eq!(x.dims(-1, 3).unwrap(), vec![0, 5, 11, 17, 23]);
    let k = residue_field(&a);
    assert_eq!(k.dims(-1, 3).unwrap(), vec![0, 1, 0, 0, 0]);
    let x1 = cone_module(&a, 0);
    let shifted = shift_module(&x1, 2);
    for d in -3..=3 {
        assert_eq!(shifted.dim(d).unwrap(), x1.dim(d + 2).unwrap());
    }
    for d in 0..=5 {
        assert!(presentation_rank_check(&x, d).unwrap());
    }
}

#[test]
fn free_homs_are_pieces() {
    let a = algebra(&A_RELS, 8);
    let free = free(&a);
    for m in [cone_module(&a, 2), residue_field(&a), big_x(&a)] {
        for s in -1..=3 {
            assert_eq!(hom_space(&free, &m, s).unwrap().dim(), m.dim(s).unwrap());
        }
    }
}

#[test]
fn homs_between_cones_match_oracle() {
    let a = algebra(&A_RELS, 8);
    let ideal = sparse_rels(&A_RELS);
    let lines = sparse_rels(&LINES);
    let cones: Vec<Module> = (0..4).map(|i| cone_module(&a, i)).collect();
    for (i, src) in cones.iter().enumerate() {
        for (j, dst) in cones.iter().enumerate() {
            let oracle = Cyclic {
                ideal: &ideal,
                right: vec![lines[j].clone()],
            };
            for s in 0..=3 {
                let got = hom_space(src, dst, s as i64).unwrap().dim();
                assert_eq!(got, oracle.hom_from(Some(&lines[i]), s), "X{} -> X{}({s})", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn dual_dims_match_oracle_and_double_dual() {
    let a = algebra(&A_RELS, 12);
    let aop = opposite(&a);
    let ideal = sparse_rels(&A_RELS);
    let lines = sparse_rels(&LINES);
    let x1 = cone_module(&a, 0);
    let dual = dual_module(&x1, &aop, -2, 5).unwrap();
    let into_a = Cyclic {
        ideal: &ideal,
        right: Vec::new(),
    };
    for s in 0..=4 {
        assert_eq!(dual.dim(s as i64).unwrap(), into_a.hom_from(Some(&lines[0]), s), "degree {s}");
    }
    assert_eq!(dual.dim(-1).unwrap(), 0);
    let back = dual_module(&dual, &a, -2, 3).unwrap();
    assert_eq!(back.dims(0, 3).unwrap(), x1.dims(0, 3).unwrap());
}

#[test]
fn twist_round_trip() {
    let f = gf13();
    let a = algebra(&A_RELS, 8);
    let sigma = GradedAutomorphism::new(a.clone(), vec![poly(&f, "x"), poly(&f, "y"), poly(&f, "-z")], 4).unwrap();
    let inv = sigma.inverse().unwrap();
    let w = Window::default();
    for i in 0..4 {
        let m = cone_module(&a, i);
        let t = twist_module(&m, &sigma).unwrap();
        assert_eq!(t.dims(0, 5).unwrap(), m.dims(0, 5).unwrap());
        let back = twist_module(&t, &inv).unwrap();
        assert!(are_isomorphic_graded(&back, &m, &w, 64, 0).unwrap().is_isomorphic());
    }
    // z -> -z swaps the cones X1 and X2.
    let t1 = twist_module(&cone_module(&a, 0), &sigma).unwrap();
    assert!(are_isomorphic_graded(&t1, &cone_module(&a, 1), &w, 64, 0).unwrap().is_isomorphic());
}

#[test]
fn non_automorphisms_are_rejected() {
    let f = gf13();
    let a = algebra(&A_RELS, 6);
    let bad = GradedAutomorphism::new(a, vec![poly(&f, "x + y"), poly(&f, "y"), poly(&f, "z")], 4);
    assert!(bad.is_err());
}

#[test]
fn tabulation_round_trip() {
    let a = algebra(&A_RELS, 8);
    let x = big_x(&a);
    let t = TabulatedModule::from_module(&x, &a, 0, 6).unwrap();
    let back = presentation_from_tabulated(&t).unwrap();
    assert_eq!(back.dims(0, 6).unwrap(), x.dims(0, 6).unwrap());
    let tail = truncate_module(&cone_module(&a, 0), &a, 2).unwrap();
    assert_eq!(tail.dims(0, 5).unwrap(), vec![0, 0, 3, 4, 5, 6]);
}
