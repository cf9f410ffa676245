mod common;

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use common::oracles::{sparse, Cyclic};
use common::*;
use ncg_core::algebra::GradedAlgebra;
use ncg_core::endo::{endomorphism_algebra, EndomorphismAlgebra};
use ncg_core::freealg::{compare_words, poly_mul, MonomialOrder, NcPoly, Word};
use ncg_core::gmodule::{cyclic_module, direct_sum, shift_module, twist_module, GradedAutomorphism};
use ncg_core::homology::{free_resolution, hom_space, Window};
use ncg_core::koszul::{quadratic_dual, quadratic_relation_space};
use ncg_core::scalars::{Field, PrimeField};
use proptest::prelude::*;

fn a12() -> &'static Alg {
    static A: OnceLock<Alg> = OnceLock::new();
    A.get_or_init(|| algebra(&A_RELS, 12))
}

fn s10() -> &'static Alg {
    static S: OnceLock<Alg> = OnceLock::new();
    S.get_or_init(|| algebra(&S_RELS, 10))
}

fn end_x() -> &'static EndomorphismAlgebra<PrimeField> {
    static B: OnceLock<EndomorphismAlgebra<PrimeField>> = OnceLock::new();
    B.get_or_init(|| endomorphism_algebra(&big_x(a12()), 0, 4).unwrap())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u16..3, 0..=max_len).prop_map(Word)
}

fn arb_poly(max_len: usize) -> impl Strategy<Value = NcPoly<PrimeField>> {
    proptest::collection::vec((arb_word(max_len), 1u64..13), 0..5)
        .prop_map(|ts| NcPoly::from_terms(&gf13(), ts))
}

fn arb_linear() -> impl Strategy<Value = NcPoly<PrimeField>> {
    (0u64..13, 0u64..13, 0u64..13)
        .prop_filter("nonzero", |c| *c != (0, 0, 0))
        .prop_map(|(a, b, c)| NcPoly::from_terms(&gf13(), [(Word(vec![0]), a), (Word(vec![1]), b), (Word(vec![2]), c)]))
}

fn arb_vec(n: usize) -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(0u64..13, n)
}

/// Random quadratic relations in three variables.
fn arb_quadratic() -> impl Strategy<Value = Vec<NcPoly<PrimeField>>> {
    proptest::collection::vec(proptest::collection::vec(0u64..13, 9), 0..6).prop_map(|rows| {
        let f = gf13();
        rows.into_iter()
            .map(|r| {
                NcPoly::from_terms(
                    &f,
                    r.into_iter()
                        .enumerate()
                        .map(|(i, c)| (Word(vec![(i / 3) as u16, (i % 3) as u16]), c)),
                )
            })
            .filter(|p| !p.is_zero())
            .collect()
    })
}

fn random_element(alg: &dyn GradedAlgebra<PrimeField>, d: i64, seed: &[u64]) -> Vec<u64> {
    let n = alg.dim(d).unwrap();
    (0..n).map(|i| seed[i % seed.len()] * (i as u64 + 1) % 13).collect()
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn normal_forms_are_idempotent_and_multiplicative(p in arb_poly(4), q in arb_poly(4)) {
        for alg in [a12(), s10()] {
            let np = alg.normal_form(&p).unwrap();
            prop_assert_eq!(alg.normal_form(&np).unwrap(), np.clone());
            let nq = alg.normal_form(&q).unwrap();
            prop_assert_eq!(alg.normal_form(&p.mul(&q)).unwrap(), alg.normal_form(&np.mul(&nq)).unwrap());
        }
    }

    #[test]
    fn free_products_are_associative(p in arb_poly(3), q in arb_poly(3), r in arb_poly(3)) {
        let left = poly_mul(&poly_mul(&p, &q).unwrap(), &r).unwrap();
        let right = poly_mul(&p, &poly_mul(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn deglex_is_a_multiplicative_total_order(u in arb_word(4), v in arb_word(4), w in arb_word(3)) {
        let order = MonomialOrder::deglex(&[1, 1, 1]);
        let c = compare_words(&order, &u, &v);
        prop_assert_eq!(c == Ordering::Equal, u == v);
        prop_assert_eq!(compare_words(&order, &v, &u), c.reverse());
        prop_assert_eq!(compare_words(&order, &w.concat(&u), &w.concat(&v)), c);
        prop_assert_eq!(compare_words(&order, &u.concat(&w), &v.concat(&w)), c);
    }

    #[test]
    fn presented_backend_is_associative_and_unital(
        d in proptest::collection::vec(0i64..4, 3),
        seed in arb_vec(5),
    ) {
        let alg: &dyn GradedAlgebra<PrimeField> = a12().as_ref();
        let (a, b, c) = (random_element(alg, d[0], &seed), random_element(alg, d[1], &seed[1..]), random_element(alg, d[2], &seed[2..]));
        let ab = alg.mul(d[0], &a, d[1], &b).unwrap();
        let bc = alg.mul(d[1], &b, d[2], &c).unwrap();
        prop_assert_eq!(alg.mul(d[0] + d[1], &ab, d[2], &c).unwrap(), alg.mul(d[0], &a, d[1] + d[2], &bc).unwrap());
        prop_assert_eq!(alg.mul(0, &alg.unit(), d[0], &a).unwrap(), a.clone());
        prop_assert_eq!(alg.mul(d[0], &a, 0, &alg.unit()).unwrap(), a);
    }

    #[test]
    fn dual_relations_complement(rels in arb_quadratic()) {
        let f = gf13();
        let pres = ncg_core::gbasis::Presentation::new(&f, names(), vec![1, 1, 1], rels).unwrap();
        let r = quadratic_relation_space(&pres).unwrap();
        let dual = quadratic_dual(&pres).unwrap();
        let rp = quadratic_relation_space(&dual).unwrap();
        prop_assert_eq!(r.dim() + rp.dim(), 9);
        let back = quadratic_relation_space(&quadratic_dual(&dual).unwrap()).unwrap();
        prop_assert_eq!(back.dim(), r.dim());
        prop_assert!(back.is_subspace_of(&f, &r));
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn tabulated_backend_is_associative_and_unital(
        d in proptest::collection::vec(0i64..2, 3),
        seed in arb_vec(7),
    ) {
        let b = end_x().graded_algebra();
        let alg = b.as_ref();
        let (x, y, z) = (random_element(alg, d[0], &seed), random_element(alg, d[1], &seed[2..]), random_element(alg, d[2], &seed[4..]));
        let xy = alg.mul(d[0], &x, d[1], &y).unwrap();
        let yz = alg.mul(d[1], &y, d[2], &z).unwrap();
        prop_assert_eq!(alg.mul(d[0] + d[1], &xy, d[2], &z).unwrap(), alg.mul(d[0], &x, d[1] + d[2], &yz).unwrap());
        prop_assert_eq!(alg.mul(0, &alg.unit(), d[0], &x).unwrap(), x.clone());
        prop_assert_eq!(alg.mul(d[0], &x, 0, &alg.unit()).unwrap(), x);
    }

    #[test]
    fn sums_and_shifts_add_dims(l in arb_linear(), s in -2i64..3, t in -2i64..3) {
        let a = a12();
        let m = shift_module(&cyclic_module(a, &[l.clone()]).unwrap(), s);
        let n = shift_module(&residue_field(a), t);
        let dyn_a: Arc<dyn GradedAlgebra<PrimeField>> = a.clone();
        let sum = direct_sum(&dyn_a, &[&m, &n]).unwrap();
        let ideal = sparse_rels(&A_RELS);
        let oracle = Cyclic { ideal: &ideal, right: vec![sparse(&l)] };
        for d in -3..=4 {
            prop_assert_eq!(sum.dim(d).unwrap(), m.dim(d).unwrap() + n.dim(d).unwrap());
            if (0..=4).contains(&(d + s)) {
                prop_assert_eq!(m.dim(d).unwrap(), oracle.dim((d + s) as usize));
            } else if d + s < 0 {
                prop_assert_eq!(m.dim(d).unwrap(), 0);
            }
        }
    }

    #[test]
    fn free_homs_are_pieces(l in arb_linear(), s in -1i64..4) {
        let a = a12();
        let m = cyclic_module(a, &[l]).unwrap();
        prop_assert_eq!(hom_space(&free(a), &m, s).unwrap().dim(), m.dim(s).unwrap());
    }

    #[test]
    fn resolutions_are_exact(l in arb_linear(), two in any::<bool>()) {
        let a = a12();
        let mut gens = vec![l];
        if two {
            gens.push(poly(&gf13(), "z"));
        }
        let m = cyclic_module(a, &gens).unwrap();
        let res = free_resolution(&m, 3, &Window::new(-4, 4, 3, 6).unwrap()).unwrap();
        prop_assert!(res.check_d_squared().unwrap());
        prop_assert!(res.check_exactness().unwrap());
    }

    #[test]
    fn twists_keep_dims(flip in any::<bool>(), l in arb_linear()) {
        let f = gf13();
        let a = a12();
        let sign = if flip { f.neg(&f.one()) } else { f.one() };
        let images = vec![poly(&f, "x"), poly(&f, "y"), poly(&f, "z").scale(&sign)];
        let sigma = GradedAutomorphism::new(a.clone(), images, 4).unwrap();
        let m = cyclic_module(a, &[l]).unwrap();
        let t = twist_module(&m, &sigma).unwrap();
        prop_assert_eq!(t.dims(0, 5).unwrap(), m.dims(0, 5).unwrap());
        let back = twist_module(&t, &sigma.inverse().unwrap()).unwrap();
        prop_assert_eq!(back.relations(), m.relations());
    }
}
