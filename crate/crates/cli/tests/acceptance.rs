//! Acceptance gate: one line per criterion, each under a time limit.
//! Runs without the libtest harness so the lines are always printed.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use anyhow::{ensure, Context, Result};
use common::oracles::{end_dim, projective_point_count, quotient_dim};
use common::*;
use ncg_core::algebra::{
    check_associativity, hilbert_series, match_rational, parse_rational_function, GradedAlgebra, PresentedAlgebra,
};
use ncg_core::endo::{
    as_gorenstein_check, as_regular_over_r_check, check_nonnegative, degree_zero_algebra, endomorphism_algebra,
    gabriel_quiver, radical_and_idempotents,
};
use ncg_core::gbasis::truncated_groebner;
use ncg_core::gmodule::{dual_module, shift_module};
use ncg_core::homology::{
    are_isomorphic_graded, eval_iso_check, free_resolution, hom_space, is_indecomposable, is_mcm, Window,
};
use ncg_core::koszul::{
    clifford_algebra, commutative_semisimple_decompose, enumerate_projective_points, quadratic_dual,
    quadratic_relation_space,
};
use ncg_core::scalars::Field;

fn c1_hilbert() -> Result<()> {
    let s = algebra(&S_RELS, 6);
    let hs = hilbert_series(s.as_ref(), 6)?.coeffs;
    ensure!(hs == vec![1, 3, 6, 10, 15, 21, 28], "S dims {hs:?}");
    let (num, den) = parse_rational_function("1/(1-t)^3")?;
    ensure!(match_rational(&hs, &num, &den));
    let a = algebra(&A_RELS, 10);
    let ha = hilbert_series(a.as_ref(), 10)?.coeffs;
    ensure!(ha.iter().enumerate().all(|(n, &c)| c == 2 * n as i64 + 1), "A dims {ha:?}");
    let (num, den) = parse_rational_function("(1+t)/(1-t)^2")?;
    ensure!(match_rational(&ha, &num, &den));
    let f = gf13();
    for rels in [&S_RELS[..], &A_RELS[..]] {
        let gb = truncated_groebner(&presentation(&f, rels), 4)?;
        let sparse = sparse_rels(rels);
        for d in 0..=4 {
            ensure!(gb.normal_words(d as i64)?.len() == quotient_dim(d, &sparse, &[]), "oracle disagrees in degree {d}");
        }
    }
    Ok(())
}

fn c2_clifford() -> Result<()> {
    let f = gf13();
    let ad = PresentedAlgebra::new(&quadratic_dual(&presentation(&f, &A_RELS))?, 10)?;
    let c = clifford_algebra(&ad, &poly(&f, "x^2"))?;
    ensure!(c.algebra.dim() == 4, "dim {}", c.algebra.dim());
    ensure!(c.algebra.is_commutative());
    let blocks = commutative_semisimple_decompose(&c.algebra)?;
    ensure!(blocks.len() == 4 && blocks.iter().all(|b| b.dim == 1), "blocks {blocks:?}");
    Ok(())
}

fn c3_points() -> Result<()> {
    let f = gf13();
    let pts = enumerate_projective_points(&[poly(&f, "x*y + z^2"), poly(&f, "x^2 - y^2")], &f, 3);
    ensure!(pts.len() == 4, "{pts:?}");
    let oracle = projective_point_count(&[|x, y, z| x * y + z * z, |x, y, _| x * x + 169 - y * y]);
    ensure!(oracle == 4);
    Ok(())
}

fn c4_cones() -> Result<()> {
    let a = algebra(&A_RELS, 16);
    let w = Window::default();
    ensure!(w.homological_max >= 3 && w.internal_lo == -6 && w.internal_hi == 6);
    let cones: Vec<Module> = (0..4).map(|i| cone_module(&a, i)).collect();
    for (i, m) in cones.iter().enumerate() {
        let r = is_mcm(m, &w)?;
        ensure!(r.is_mcm && !r.inconclusive, "X{} not certified MCM", i + 1);
        ensure!(r.ext[..3].iter().all(|e| e.is_zero()));
        ensure!(is_indecomposable(m)?, "X{} decomposes", i + 1);
    }
    for i in 0..4 {
        for j in 0..4 {
            for s in -3..=3 {
                if i == j {
                    continue;
                }
                let r = are_isomorphic_graded(&cones[i], &shift_module(&cones[j], s), &w, 64, 0)?;
                ensure!(r.is_certified_negative(), "X{} vs X{}({s})", i + 1, j + 1);
            }
        }
    }
    Ok(())
}

fn c5_end_dims() -> Result<()> {
    let a = algebra(&A_RELS, 12);
    let b = endomorphism_algebra(&big_x(&a), -2, 3)?;
    let dims = b.dims();
    ensure!(dims == vec![(-2, 0), (-1, 0), (0, 9), (1, 27), (2, 45), (3, 63)], "{dims:?}");
    ensure!(check_nonnegative(&b));
    let coeffs: Vec<i64> = dims.iter().filter(|(d, _)| *d >= 0).map(|(_, n)| *n as i64).collect();
    let (num, den) = parse_rational_function("9*(1+t)/(1-t)^2")?;
    ensure!(match_rational(&coeffs, &num, &den));
    let (ideal, lines) = (sparse_rels(&A_RELS), sparse_rels(&LINES));
    for s in 0..=3 {
        ensure!(end_dim(&ideal, &lines, s) == dims[s + 2].1, "oracle disagrees in degree {s}");
    }
    Ok(())
}

fn c6_degree_zero() -> Result<()> {
    let f = gf13();
    let a = algebra(&A_RELS, 10);
    let b = endomorphism_algebra(&big_x(&a), 0, 2)?;
    let b0 = degree_zero_algebra(&b);
    ensure!(b0.dim() == 9);
    let an = radical_and_idempotents(&b0)?;
    ensure!(an.radical.len() == 4, "radical {}", an.radical.len());
    for r in &an.radical {
        for s in &an.radical {
            ensure!(b0.mul(r, s).iter().all(|c| f.is_zero(c)), "rad^2 != 0");
        }
    }
    ensure!(an.idempotents.len() == 5);
    let q = gabriel_quiver(&b0)?;
    ensure!(q.vertices.len() == 5 && q.num_arrows() == 4 && q.is_star_into_sink(4), "{q:?}");
    ensure!(q.vertices.len() + q.num_arrows() == b0.dim());
    Ok(())
}

fn c7_gorenstein() -> Result<()> {
    let a = algebra(&A_RELS, 16);
    let g = as_gorenstein_check(&a, &opposite(&a), 2, 1, &Window::default())?;
    for side in [&g.right, &g.left] {
        ensure!(side.ext[0].is_zero() && side.ext[1].is_zero() && side.ext[3].is_zero());
        ensure!(side.ext[2].support() == vec![(-1, 1)], "{:?}", side.ext[2]);
    }
    ensure!(g.pass && !g.inconclusive);
    Ok(())
}

fn c8_regular() -> Result<()> {
    let a = algebra(&A_RELS, 14);
    let w = Window::default();
    let b = endomorphism_algebra(&big_x(&a), 0, w.internal_hi + 2)?;
    let r = as_regular_over_r_check(&b.graded_algebra(), 2, 1, &w)?;
    ensure!(r.ext[0].is_zero() && r.ext[1].is_zero());
    ensure!(r.ext[2].support() == vec![(-1, 9)], "{:?}", r.ext[2]);
    ensure!(r.terminated_at == Some(2), "terminated at {:?}", r.terminated_at);
    ensure!(r.pass && !r.inconclusive);
    Ok(())
}

fn c9_evaluation() -> Result<()> {
    let a = algebra(&A_RELS, 12);
    let b = endomorphism_algebra(&big_x(&a), 0, 4)?;
    for (name, m) in [("A", free(&a)), ("X1", cone_module(&a, 0)), ("k", residue_field(&a))] {
        let ev = eval_iso_check(&b, true, &m, 0, 4)?;
        ensure!(ev.len() == 5 && ev.iter().all(|e| e.iso), "{name}: {ev:?}");
    }
    Ok(())
}

fn c10_properties() -> Result<()> {
    let f = gf13();
    let w = Window::default();
    let s = algebra(&S_RELS, 12);
    let a = algebra(&A_RELS, 16);
    let aop = opposite(&a);
    // Normal forms on products of basis words.
    for alg in [&s, &a] {
        for d in 0..=3 {
            for u in alg.basis(d)?.to_vec() {
                for v in alg.basis(2)?.to_vec() {
                    let p = ncg_core::freealg::NcPoly::monomial(&f, u.concat(&v), f.one());
                    let nf = alg.normal_form(&p)?;
                    ensure!(alg.normal_form(&nf)? == nf);
                }
            }
        }
        ensure!(check_associativity(alg.as_ref(), 5, 4)? > 0);
    }
    let x = big_x(&a);
    let b = endomorphism_algebra(&x, -2, 4)?;
    check_associativity(b.graded_algebra().as_ref(), 4, 5)?;
    // Resolutions and Hom(A, M(s)).
    let mut modules = vec![residue_field(&a), x.clone(), free(&a)];
    modules.extend((0..4).map(|i| cone_module(&a, i)));
    for m in &modules {
        let res = free_resolution(m, 4, &w)?;
        ensure!(res.check_d_squared()? && res.check_exactness()?);
        for t in -1..=3 {
            ensure!(hom_space(&free(&a), m, t)?.dim() == m.dim(t)?);
        }
    }
    let b_res = free_resolution(&ncg_core::gmodule::degree_zero_module(b.graded_algebra())?, 3, &w)?;
    ensure!(b_res.check_d_squared()? && b_res.check_exactness()?);
    // Quadratic duals and the Koszul pairing.
    for rels in [&S_RELS[..], &A_RELS[..]] {
        let pres = presentation(&f, rels);
        let dual = quadratic_dual(&pres)?;
        ensure!(quadratic_relation_space(&pres)?.dim() + quadratic_relation_space(&dual)?.dim() == 9);
        let ha = hilbert_series(&PresentedAlgebra::new(&pres, 6)?, 6)?.coeffs;
        let hd = hilbert_series(&PresentedAlgebra::new(&dual, 6)?, 6)?.coeffs;
        for k in 0..7 {
            let c: i64 = (0..=k).map(|i| ha[i] * hd[k - i] * if (k - i) % 2 == 0 { 1 } else { -1 }).sum();
            ensure!(c == i64::from(k == 0), "pairing coefficient {k} is {c}");
        }
    }
    // End over the opposite side.
    let xd = dual_module(&x, &aop, -4, 6)?;
    let bd = endomorphism_algebra(&xd, -2, 4)?;
    ensure!(bd.dims() == b.dims(), "{:?} vs {:?}", bd.dims(), b.dims());
    ensure!(a.dim(0)? == 1);
    Ok(())
}

fn c11_cli() -> Result<()> {
    let run = || -> Result<(i32, Vec<u8>)> {
        let out = Command::new(env!("CARGO_BIN_EXE_ncg")).arg("verify-example").output().context("spawn ncg")?;
        Ok((out.status.code().unwrap_or(-1), out.stdout))
    };
    let (code1, json1) = run()?;
    let (code2, json2) = run()?;
    ensure!(code1 == 0 && code2 == 0, "exit codes {code1}, {code2}");
    ensure!(json1 == json2, "reports differ between runs");
    let report: serde_json::Value = serde_json::from_slice(&json1)?;
    let stages: std::collections::BTreeSet<String> = report["checks"]
        .as_array()
        .context("checks")?
        .iter()
        .filter_map(|c| c["name"].as_str()?.split(' ').next().map(String::from))
        .collect();
    ensure!(stages.len() == 11, "stages {stages:?}");
    ensure!(report["verdict"] == "pass");
    Ok(())
}

type Criterion = (&'static str, u64, fn() -> Result<()>);

const CRITERIA: [Criterion; 11] = [
    ("Hilbert series of S and A", 5, c1_hilbert),
    ("C(A) is k^4", 5, c2_clifford),
    ("four points", 1, c3_points),
    ("cones are MCM, indecomposable, distinct", 60, c4_cones),
    ("End(X) dims", 120, c5_end_dims),
    ("structure of B_0", 30, c6_degree_zero),
    ("A is AS-Gorenstein", 60, c7_gorenstein),
    ("B is AS-regular over B_0", 300, c8_regular),
    ("evaluation isomorphism", 60, c9_evaluation),
    ("property suites", 600, c10_properties),
    ("verify-example end to end", 600, c11_cli),
];

fn main() {
    let mut failed = 0;
    for (i, (name, limit, check)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(Ok(())) if elapsed <= Duration::from_secs(*limit) => "PASS".to_string(),
            Ok(Ok(())) => format!("FAIL (over the {limit} s limit)"),
            Ok(Err(e)) => format!("FAIL ({e:#})"),
            Err(_) => "FAIL (panicked)".to_string(),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {:>2} {:<42} {:>8.2} s  {verdict}", i + 1, name, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
