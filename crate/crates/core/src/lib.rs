//! Finitely presented graded noncommutative algebras, their graded modules,
//! and degreewise-exact homological invariants over `GF(p)` and `QQ`.

pub mod algebra;
pub mod endo;
pub mod error;
pub mod freealg;
pub mod gbasis;
pub mod gmodule;
pub mod homology;
pub mod koszul;
pub mod linalg;
pub mod scalars;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/groebner.md")]
    mod groebner {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/endomorphisms.md")]
    mod endomorphisms {}
    #[doc = include_str!("../../../book/src/koszul.md")]
    mod koszul {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
