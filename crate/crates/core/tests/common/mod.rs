#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use ncg_core::algebra::{GradedAlgebra, PresentedAlgebra};
use ncg_core::freealg::{parse_poly, NcPoly, Symbols};
use ncg_core::gbasis::{opposite_presentation, Presentation};
use ncg_core::gmodule::{cyclic_module, direct_sum, free_graded_module, GradedModule};
use ncg_core::scalars::{root_of_unity, PrimeField};

pub type Alg = Arc<PresentedAlgebra<PrimeField>>;
pub type Module = GradedModule<PrimeField>;

pub fn gf13() -> PrimeField {
    PrimeField::new(13).unwrap()
}

pub fn names() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

pub fn poly(f: &PrimeField, text: &str) -> NcPoly<PrimeField> {
    let mut consts = HashMap::new();
    consts.insert("i".to_string(), root_of_unity(f, 4).unwrap());
    let names = names();
    let sym = Symbols {
        generators: &names,
        constants: &consts,
    };
    parse_poly(f, text, &sym).unwrap()
}

pub fn presentation(f: &PrimeField, rels: &[&str]) -> Presentation<PrimeField> {
    let rels = rels.iter().map(|r| poly(f, r)).collect();
    Presentation::new(f, names(), vec![1, 1, 1], rels).unwrap()
}

pub const S_RELS: [&str; 3] = ["x*y + y*x - z^2", "x*z + z*x", "y*z + z*y"];
pub const A_RELS: [&str; 4] = ["x*y + y*x - z^2", "x*z + z*x", "y*z + z*y", "x^2 + y^2"];
pub const LINES: [&str; 4] = ["x - y + z", "x - y - z", "x + y + i*z", "x + y - i*z"];

pub fn algebra(rels: &[&str], d: i64) -> Alg {
    let f = gf13();
    Arc::new(PresentedAlgebra::new(&presentation(&f, rels), d).unwrap())
}

pub fn opposite(a: &Alg) -> Alg {
    let pres = opposite_presentation(a.presentation());
    Arc::new(PresentedAlgebra::new(&pres, a.valid_through()).unwrap())
}

pub fn dyn_alg(a: &Alg) -> Arc<dyn GradedAlgebra<PrimeField>> {
    a.clone()
}

pub fn cone_module(a: &Alg, i: usize) -> Module {
    let f = gf13();
    cyclic_module(a, &[poly(&f, LINES[i])]).unwrap()
}

pub fn free(a: &Alg) -> Module {
    free_graded_module(dyn_alg(a), &[0]).unwrap()
}

/// `A (+) X_1 (+) ... (+) X_4`.
pub fn big_x(a: &Alg) -> Module {
    let parts: Vec<Module> = std::iter::once(free(a)).chain((0..4).map(|i| cone_module(a, i))).collect();
    let refs: Vec<&Module> = parts.iter().collect();
    direct_sum(&dyn_alg(a), &refs).unwrap()
}

pub fn residue_field(a: &Alg) -> Module {
    let f = gf13();
    cyclic_module(a, &[poly(&f, "x"), poly(&f, "y"), poly(&f, "z")]).unwrap()
}

pub mod oracles;

/// Relations as sparse word lists for the oracles.
pub fn sparse_rels(rels: &[&str]) -> Vec<oracles::Sparse> {
    let f = gf13();
    rels.iter().map(|r| oracles::sparse(&poly(&f, r))).collect()
}
