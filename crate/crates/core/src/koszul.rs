//! Quadratic duals, the finite-dimensional algebra `C(A) = A^![w^-1]_0`,
//! decomposition of commutative semisimple algebras and brute-force point
//! enumeration in projective space.

use serde::Serialize;

use crate::algebra::{is_central, GradedAlgebra, PresentedAlgebra};
use crate::endo::{radical_and_idempotents, FinDimAlgebra};
use crate::error::{Error, Result};
use crate::freealg::{NcPoly, Word};
use crate::gbasis::Presentation;
use crate::linalg::{inverse, kernel, mat_mul, mat_vec, rank, Matrix, Subspace};
use crate::scalars::{Field, PrimeField};

/// Coefficient rows of the quadratic relations, indexed by `a * n + b` for
/// the word `x_a x_b`.
pub fn quadratic_relation_space<F: Field>(pres: &Presentation<F>) -> Result<Subspace<F::Elem>> {
    let n = pres.num_generators();
    if pres.degrees().iter().any(|&d| d != 1) {
        return Err(Error::NotQuadratic);
    }
    let f = pres.field();
    let mut span = Subspace::zero(n * n);
    for r in pres.relations() {
        let mut v = vec![f.zero(); n * n];
        for (w, c) in r.terms() {
            let l = w.letters();
            if l.len() != 2 {
                return Err(Error::NotQuadratic);
            }
            v[l[0] as usize * n + l[1] as usize] = c.clone();
        }
        span.insert(f, &v);
    }
    Ok(span)
}

/// `A^! = T(V*) / (R^perp)` under the pairing `<x_a x_b, x_c* x_d*> =
/// delta_ac delta_bd`. Generators keep their names.
pub fn quadratic_dual<F: Field>(pres: &Presentation<F>) -> Result<Presentation<F>> {
    let f = pres.field();
    let n = pres.num_generators();
    let r = quadratic_relation_space(pres)?;
    let perp = if r.dim() == 0 {
        (0..n * n).map(|i| crate::linalg::unit_vec(f, n * n, i)).collect()
    } else {
        kernel(f, &Matrix::from_rows(n * n, r.basis()))
    };
    let rels = perp
        .iter()
        .map(|v| {
            NcPoly::from_terms(
                f,
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !f.is_zero(c))
                    .map(|(i, c)| (Word(vec![(i / n) as u16, (i % n) as u16]), c.clone())),
            )
        })
        .collect();
    Presentation::new(f, pres.names().to_vec(), vec![1; n], rels)
}

/// `C(A)` with the data of the direct system it was read from.
#[derive(Clone, Debug)]
pub struct Clifford<F: Field> {
    pub algebra: FinDimAlgebra<F>,
    /// Stable level `L`: `C(A)` is modelled on `A^!_{2L}`.
    pub level: i64,
    /// `dim A^!_{2k}` for the levels inspected.
    pub even_dims: Vec<usize>,
}

/// Right multiplication by `w^k` from degree `2L` to `2L + 2k`.
fn power_map<F: Field>(alg: &PresentedAlgebra<F>, w: &[F::Elem], from: i64, k: i64) -> Result<Matrix<F::Elem>> {
    let f = alg.field();
    let mut m = Matrix::identity(f, alg.dim(from)?);
    for s in 0..k {
        let step = alg.right_mul_by(from + 2 * s, 2, w)?;
        m = mat_mul(f, &step, &m);
    }
    Ok(m)
}

/// Multiplication on `A^!_{2L}` transported from `A^!_{4L}` through the
/// inverse of `.w^L`.
fn clifford_at_level<F: Field>(alg: &PresentedAlgebra<F>, w: &[F::Elem], level: i64) -> Result<FinDimAlgebra<F>> {
    let f = alg.field();
    let d = 2 * level;
    let n = alg.dim(d)?;
    let wl = power_map(alg, w, d, level)?;
    let inv = inverse(f, &wl).ok_or(Error::NotStabilized(level))?;
    // The unit is w^L.
    let unit = {
        let start = alg.unit();
        mat_vec(f, &power_map(alg, w, 0, level)?, &start)
    };
    let mut table = vec![vec![Vec::new(); n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let a = crate::linalg::unit_vec(f, n, i);
            let b = crate::linalg::unit_vec(f, n, j);
            let prod = alg.mul(d, &a, d, &b)?;
            *slot = mat_vec(f, &inv, &prod);
        }
    }
    Ok(FinDimAlgebra::from_fn(f, n, unit, |i, j| table[i][j].clone()))
}

/// `C(A) = A^![w^-1]_0` for a central element `w` of degree 2, read off
/// the first level `L` with `.w` bijective on `A^!_{2L} -> A^!_{2L+2}` and
/// on the next step.
pub fn clifford_algebra<F: Field>(adual: &PresentedAlgebra<F>, w: &NcPoly<F>) -> Result<Clifford<F>> {
    let f = adual.field();
    let pres = adual.presentation();
    match w.homogeneous_degree(pres.degrees()) {
        Some(Some(2)) | Some(None) => {}
        _ => return Err(Error::NonHomogeneous),
    }
    if !is_central(adual, w)? {
        return Err(Error::NotCentral);
    }
    let (_, wv) = adual.to_vector(w, 2)?;
    let bijective = |l: i64| -> Result<bool> {
        let m = adual.right_mul_by(2 * l, 2, &wv)?;
        Ok(m.rows() == m.cols() && rank(f, &m) == m.rows())
    };
    let mut even_dims = vec![adual.dim(0)?];
    let mut l = 0;
    loop {
        // Level l + 2 must exist, and 4l for the product.
        if 2 * (l + 2) > adual.valid_through() || 4 * l > adual.valid_through() {
            return Err(Error::NotStabilized(l));
        }
        even_dims.push(adual.dim(2 * (l + 1))?);
        if bijective(l)? && bijective(l + 1)? {
            even_dims.push(adual.dim(2 * (l + 2))?);
            break;
        }
        l += 1;
    }
    let algebra = clifford_at_level(adual, &wv, l)?;
    Ok(Clifford {
        algebra,
        level: l,
        even_dims,
    })
}

/// Whether `.w: A^!_{2L} -> A^!_{2L+2}` is an algebra isomorphism between
/// the models of `C(A)` at levels `L` and `L + 1`.
pub fn clifford_level_consistency<F: Field>(adual: &PresentedAlgebra<F>, w: &NcPoly<F>, level: i64) -> Result<bool> {
    let f = adual.field();
    let (_, wv) = adual.to_vector(w, 2)?;
    let c0 = clifford_at_level(adual, &wv, level)?;
    let c1 = clifford_at_level(adual, &wv, level + 1)?;
    let phi = adual.right_mul_by(2 * level, 2, &wv)?;
    let n = c0.dim();
    for i in 0..n {
        for j in 0..n {
            let lhs = mat_vec(f, &phi, c0.product(i, j));
            let a = phi.column(i);
            let b = phi.column(j);
            if lhs != c1.mul(&a, &b) {
                return Ok(false);
            }
        }
    }
    Ok(mat_vec(f, &phi, c0.unit()) == c1.unit())
}

/// One simple block of a split commutative semisimple algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldBlock {
    pub dim: usize,
}

/// Blocks `e F` for the primitive idempotents `e` of a commutative
/// semisimple algebra. `F = k^n` exactly when every block has dimension 1.
pub fn commutative_semisimple_decompose<F: Field>(alg: &FinDimAlgebra<F>) -> Result<Vec<FieldBlock>> {
    if !alg.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let an = radical_and_idempotents(alg)?;
    if !an.radical.is_empty() {
        return Err(Error::NotSemisimple(an.radical.len()));
    }
    let f = alg.field();
    Ok(an
        .idempotents
        .iter()
        .map(|e| {
            let cols: Vec<Vec<F::Elem>> = (0..alg.dim())
                .map(|j| alg.mul(e, &crate::linalg::unit_vec(f, alg.dim(), j)))
                .collect();
            FieldBlock {
                dim: Subspace::spanned_by(f, alg.dim(), &cols).dim(),
            }
        })
        .collect())
}

/// Evaluates a polynomial commutatively at a point.
pub fn evaluate_commutative<F: Field>(p: &NcPoly<F>, point: &[F::Elem]) -> F::Elem {
    let f = p.field();
    let mut acc = f.zero();
    for (w, c) in p.terms() {
        let mut t = c.clone();
        for &g in w.letters() {
            t = f.mul(&t, &point[g as usize]);
        }
        acc = f.add(&acc, &t);
    }
    acc
}

/// All common zeros in `P^{n-1}(GF(p))`, as canonical representatives with
/// last nonzero coordinate 1, in lexicographic order.
pub fn enumerate_projective_points(polys: &[NcPoly<PrimeField>], field: &PrimeField, n: usize) -> Vec<Vec<u64>> {
    let p = field.modulus();
    let mut out = Vec::new();
    // Position of the trailing 1; coordinates after it are 0.
    for last in 0..n {
        let free = last;
        let count = p.pow(free as u32);
        for idx in 0..count {
            let mut pt = vec![0u64; n];
            let mut x = idx;
            for c in pt.iter_mut().take(free) {
                *c = x % p;
                x /= p;
            }
            pt[last] = 1;
            if polys.iter().all(|q| evaluate_commutative(q, &pt) == 0) {
                out.push(pt);
            }
        }
    }
    out.sort();
    out
}
