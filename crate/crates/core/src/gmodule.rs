//! Finitely generated graded right modules.
//!
//! A [`GradedModule`] is `F / U` where `F = (+)_k A(-g_k)` is free on
//! generators of degree `g_k` and `U` is the submodule generated by a list of
//! homogeneous relations. The degree-`d` piece is computed as a quotient of
//! `F_d` by row reduction; its basis is the set of non-pivot coordinates, so
//! module coordinates are reproducible.
//!
//! Duals, twists of tabulated data and truncations have no canonical small
//! presentation; they go through [`TabulatedModule`] and
//! [`presentation_from_tabulated`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::{add_scaled_matrix, GradedAlgebra, PresentedAlgebra};
use crate::error::{Error, Result};
use crate::freealg::NcPoly;
use crate::gbasis::opposite_presentation;
use crate::homology::hom_space;
use crate::linalg::{inverse, mat_mul, mat_vec, rank, unit_vec, vec_add_scaled, BasisCoords, Matrix, Subspace};
use crate::scalars::Field;

/// An element of a free module: `comps[k]` is the coefficient of the
/// `k`-th generator, an element of `A_{degree - g_k}`; an empty vector
/// stands for zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElem<E> {
    pub degree: i64,
    pub comps: Vec<Vec<E>>,
}

#[derive(Debug)]
struct Piece<E> {
    offsets: Vec<usize>,
    free_dim: usize,
    sub: Subspace<E>,
    complement: Vec<usize>,
}

type ActionCache<E> = Mutex<HashMap<(i64, i64, usize), Arc<Matrix<E>>>>;

/// A graded right module given by generators and relations.
pub struct GradedModule<F: Field> {
    algebra: Arc<dyn GradedAlgebra<F>>,
    gens: Vec<i64>,
    relations: Vec<FreeElem<F::Elem>>,
    valid_through: i64,
    pieces: Mutex<HashMap<i64, Arc<Piece<F::Elem>>>>,
    actions: ActionCache<F::Elem>,
}

impl<F: Field> Clone for GradedModule<F> {
    fn clone(&self) -> Self {
        GradedModule {
            algebra: self.algebra.clone(),
            gens: self.gens.clone(),
            relations: self.relations.clone(),
            valid_through: self.valid_through,
            pieces: Mutex::new(HashMap::new()),
            actions: Mutex::new(HashMap::new()),
        }
    }
}

impl<F: Field> fmt::Debug for GradedModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedModule")
            .field("generator_degrees", &self.gens)
            .field("relations", &self.relations.len())
            .field("valid_through", &self.valid_through)
            .finish()
    }
}

/// Equal generators, relations and algebra object.
impl<F: Field> PartialEq for GradedModule<F> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.gens == other.gens
            && self.relations == other.relations
            && self.valid_through == other.valid_through
    }
}

pub(crate) fn same_algebra<F: Field>(a: &Arc<dyn GradedAlgebra<F>>, b: &Arc<dyn GradedAlgebra<F>>) -> bool {
    std::ptr::eq(
        Arc::as_ptr(a) as *const u8,
        Arc::as_ptr(b) as *const u8,
    )
}

/// Bound used for modules that are zero (no generators).
const UNBOUNDED: i64 = i64::MAX / 4;

impl<F: Field> GradedModule<F> {
    /// `valid_through` defaults to the largest degree whose free piece is
    /// fully known from the algebra.
    pub fn new(
        algebra: Arc<dyn GradedAlgebra<F>>,
        gens: Vec<i64>,
        relations: Vec<FreeElem<F::Elem>>,
        valid_through: Option<i64>,
    ) -> Result<Self> {
        let natural = gens
            .iter()
            .map(|g| algebra.valid_through() + g)
            .min()
            .unwrap_or(UNBOUNDED);
        let valid_through = valid_through.map_or(natural, |v| v.min(natural));
        for r in &relations {
            if r.comps.len() != gens.len() {
                return Err(Error::ShapeMismatch("relation has wrong number of components".into()));
            }
            for (k, c) in r.comps.iter().enumerate() {
                if c.is_empty() {
                    continue;
                }
                let e = r.degree - gens[k];
                if e > algebra.valid_through() || c.len() != algebra.dim(e)? {
                    return Err(Error::ShapeMismatch(format!(
                        "relation component {k} is not homogeneous of degree {e}"
                    )));
                }
            }
        }
        Ok(GradedModule {
            algebra,
            gens,
            relations,
            valid_through,
            pieces: Mutex::new(HashMap::new()),
            actions: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &Arc<dyn GradedAlgebra<F>> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    /// Generator degrees `g_k` (the free module is `(+) A(-g_k)`).
    pub fn generator_degrees(&self) -> &[i64] {
        &self.gens
    }

    /// Shifts `s_k = -g_k` in the `(+) A(s_k)` notation.
    pub fn shifts(&self) -> Vec<i64> {
        self.gens.iter().map(|g| -g).collect()
    }

    pub fn relations(&self) -> &[FreeElem<F::Elem>] {
        &self.relations
    }

    pub fn valid_through(&self) -> i64 {
        self.valid_through
    }

    /// Lowest degree that can be nonzero.
    pub fn lowest_degree(&self) -> Option<i64> {
        self.gens.iter().copied().min()
    }

    pub fn check_degree(&self, d: i64) -> Result<()> {
        if d > self.valid_through {
            return Err(Error::DegreeBeyondTruncation {
                degree: d,
                bound: self.valid_through,
            });
        }
        Ok(())
    }

    /// Dimension of the free piece `F_d` and the block offsets.
    pub fn free_layout(&self, d: i64) -> Result<(Vec<usize>, usize)> {
        let mut offsets = Vec::with_capacity(self.gens.len());
        let mut total = 0;
        for g in &self.gens {
            offsets.push(total);
            total += self.algebra.dim(d - g)?;
        }
        Ok((offsets, total))
    }

    fn piece(&self, d: i64) -> Result<Arc<Piece<F::Elem>>> {
        self.check_degree(d)?;
        if let Some(p) = self.pieces.lock().expect("cache").get(&d) {
            return Ok(p.clone());
        }
        let f = self.field();
        let (offsets, free_dim) = self.free_layout(d)?;
        let mut sub = Subspace::zero(free_dim);
        for r in &self.relations {
            let e = d - r.degree;
            if e < 0 {
                continue;
            }
            for j in 0..self.algebra.dim(e)? {
                let v = self.free_times_basis(r, e, j, &offsets, free_dim)?;
                sub.insert(f, &v);
            }
        }
        let complement = sub.non_pivots();
        let piece = Arc::new(Piece {
            offsets,
            free_dim,
            sub,
            complement,
        });
        self.pieces.lock().expect("cache").insert(d, piece.clone());
        Ok(piece)
    }

    /// `r * b_{e,j}` as a vector of `F_{deg r + e}` laid out by `offsets`.
    fn free_times_basis(
        &self,
        r: &FreeElem<F::Elem>,
        e: i64,
        j: usize,
        offsets: &[usize],
        free_dim: usize,
    ) -> Result<Vec<F::Elem>> {
        let f = self.field();
        let mut v = vec![f.zero(); free_dim];
        for (k, c) in r.comps.iter().enumerate() {
            if c.is_empty() || c.iter().all(|x| f.is_zero(x)) {
                continue;
            }
            let m = self.algebra.right_mul_matrix(r.degree - self.gens[k], e, j)?;
            let prod = mat_vec(f, &m, c);
            for (i, x) in prod.into_iter().enumerate() {
                v[offsets[k] + i] = x;
            }
        }
        Ok(v)
    }

    pub fn dim(&self, d: i64) -> Result<usize> {
        if self.gens.iter().all(|&g| d < g) {
            return Ok(0);
        }
        Ok(self.piece(d)?.complement.len())
    }

    /// Dimensions on `lo..=hi`.
    pub fn dims(&self, lo: i64, hi: i64) -> Result<Vec<usize>> {
        (lo..=hi).map(|d| self.dim(d)).collect()
    }

    /// Free coordinates of a module vector (zeros at pivot positions).
    pub fn lift(&self, d: i64, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let p = self.piece(d)?;
        let mut out = vec![self.field().zero(); p.free_dim];
        for (c, &i) in v.iter().zip(&p.complement) {
            out[i] = c.clone();
        }
        Ok(out)
    }

    /// Module coordinates of the class of a free vector.
    pub fn project(&self, d: i64, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if self.gens.iter().all(|&g| d < g) {
            return Ok(Vec::new());
        }
        let p = self.piece(d)?;
        let mut w = v.to_vec();
        p.sub.reduce(self.field(), &mut w);
        Ok(p.complement.iter().map(|&i| w[i].clone()).collect())
    }

    /// For each basis vector of `M_d`: the generator index `k` and the index
    /// of the algebra basis element `b` with the vector equal to `e_k b`.
    pub fn basis_positions(&self, d: i64) -> Result<Vec<(usize, usize)>> {
        if self.gens.iter().all(|&g| d < g) {
            return Ok(Vec::new());
        }
        let p = self.piece(d)?;
        Ok(p.complement
            .iter()
            .map(|&i| {
                let k = p.offsets.iter().rposition(|&o| o <= i).expect("block");
                (k, i - p.offsets[k])
            })
            .collect())
    }

    /// Block offsets of the free piece in degree `d`.
    pub fn offsets(&self, d: i64) -> Result<Vec<usize>> {
        Ok(self.free_layout(d)?.0)
    }

    /// Matrix of the action of `b_{e,j}` from `M_d` to `M_{d+e}`.
    pub fn action_matrix(&self, d: i64, e: i64, j: usize) -> Result<Arc<Matrix<F::Elem>>> {
        let key = (d, e, j);
        if let Some(m) = self.actions.lock().expect("cache").get(&key) {
            return Ok(m.clone());
        }
        let f = self.field();
        let src = self.dim(d)?;
        let tgt = self.dim(d + e)?;
        let mut cols = Vec::with_capacity(src);
        if src > 0 && tgt > 0 {
            let p = self.piece(d)?;
            let (offsets, free_dim) = self.free_layout(d + e)?;
            for &i in &p.complement {
                // The free basis vector i lies in block k at position i - offset.
                let k = p.offsets.iter().rposition(|&o| o <= i).expect("block");
                let mut comps = vec![Vec::new(); self.gens.len()];
                comps[k] = unit_vec(f, self.algebra.dim(d - self.gens[k])?, i - p.offsets[k]);
                let elem = FreeElem { degree: d, comps };
                let v = self.free_times_basis(&elem, e, j, &offsets, free_dim)?;
                cols.push(self.project(d + e, &v)?);
            }
        } else {
            cols = vec![vec![f.zero(); tgt]; src];
        }
        let m = Arc::new(Matrix::from_columns(tgt, &cols, f.zero()));
        self.actions.lock().expect("cache").insert(key, m.clone());
        Ok(m)
    }

    /// `v * b` for `v` in degree `d` and an algebra element `b` of degree `e`.
    pub fn act(&self, d: i64, v: &[F::Elem], e: i64, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let f = self.field();
        if self.relations.is_empty() {
            let (src, _) = self.free_layout(d)?;
            let (tgt, total) = self.free_layout(d + e)?;
            let mut out = vec![f.zero(); total];
            for (k, g) in self.gens.iter().enumerate() {
                let n = self.algebra.dim(d - g)?;
                let part = &v[src[k]..src[k] + n];
                if n == 0 || part.iter().all(|x| f.is_zero(x)) {
                    continue;
                }
                let w = self.algebra.mul(d - g, part, e, b)?;
                out[tgt[k]..tgt[k] + w.len()].clone_from_slice(&w);
            }
            return Ok(out);
        }
        let mut out = vec![f.zero(); self.dim(d + e)?];
        for (j, c) in b.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let m = self.action_matrix(d, e, j)?;
            vec_add_scaled(f, &mut out, c, &mat_vec(f, &m, v));
        }
        Ok(out)
    }

    /// Matrix of the action of an algebra element `b` of degree `e` on `M_d`.
    pub fn action_by(&self, d: i64, e: i64, b: &[F::Elem]) -> Result<Matrix<F::Elem>> {
        let f = self.field();
        let mut out = Matrix::zeros(f, self.dim(d + e)?, self.dim(d)?);
        for (j, c) in b.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            out = add_scaled_matrix(f, &out, c, &*self.action_matrix(d, e, j)?);
        }
        Ok(out)
    }

    /// Module coordinates of the `k`-th generator.
    pub fn generator_class(&self, k: usize) -> Result<Vec<F::Elem>> {
        let g = self.gens[k];
        let (offsets, free_dim) = self.free_layout(g)?;
        let mut v = vec![self.field().zero(); free_dim];
        for (i, c) in self.algebra.unit().into_iter().enumerate() {
            v[offsets[k] + i] = c;
        }
        self.project(g, &v)
    }

    /// Basis labels and dimension of the degree-`d` piece.
    pub fn module_piece(&self, d: i64) -> Result<(usize, Vec<String>)> {
        if self.gens.iter().all(|&g| d < g) {
            return Ok((0, Vec::new()));
        }
        let p = self.piece(d)?;
        let mut labels = Vec::new();
        for &i in &p.complement {
            let k = p.offsets.iter().rposition(|&o| o <= i).expect("block");
            let alg_labels = self.algebra.basis_labels(d - self.gens[k])?;
            labels.push(format!("e{k}*{}", alg_labels[i - p.offsets[k]]));
        }
        Ok((p.complement.len(), labels))
    }

    /// Whether every piece in `lo..=hi` is zero.
    pub fn is_zero_on(&self, lo: i64, hi: i64) -> Result<bool> {
        Ok(self.dims(lo, hi)?.iter().all(|&n| n == 0))
    }
}

/// `(+) A(s_i)`.
pub fn free_graded_module<F: Field>(alg: Arc<dyn GradedAlgebra<F>>, shifts: &[i64]) -> Result<GradedModule<F>> {
    GradedModule::new(alg, shifts.iter().map(|s| -s).collect(), Vec::new(), None)
}

/// `A / sum g_i A` for homogeneous elements `g_i` of a presented algebra.
pub fn cyclic_module<F: Field>(alg: &Arc<PresentedAlgebra<F>>, gens: &[NcPoly<F>]) -> Result<GradedModule<F>> {
    let mut relations = Vec::new();
    for g in gens {
        let (d, v) = alg.to_vector(g, 0)?;
        relations.push(FreeElem {
            degree: d,
            comps: vec![v],
        });
    }
    let dyn_alg: Arc<dyn GradedAlgebra<F>> = alg.clone();
    GradedModule::new(dyn_alg, vec![0], relations, None)
}

/// `e A(-g)` for an idempotent `e` of degree zero: the cyclic module with
/// the single relation `(1 - e)`.
pub fn idempotent_projective<F: Field>(alg: Arc<dyn GradedAlgebra<F>>, e: &[F::Elem], g: i64) -> Result<GradedModule<F>> {
    let f = alg.field().clone();
    let mut one_minus = alg.unit();
    vec_add_scaled(&f, &mut one_minus, &f.from_i64(-1), e);
    let rel = FreeElem {
        degree: g,
        comps: vec![one_minus],
    };
    GradedModule::new(alg, vec![g], vec![rel], None)
}

/// `A_0` as a right module, with every positive-degree piece acting by
/// zero. For a connected algebra this is the trivial module `k`.
pub fn degree_zero_module<F: Field>(alg: Arc<dyn GradedAlgebra<F>>) -> Result<GradedModule<F>> {
    let f = alg.field().clone();
    let mut degrees: Vec<i64> = alg.generators().iter().map(|(d, _)| *d).filter(|&d| d > 0).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut relations = Vec::new();
    for d in degrees {
        let n = alg.dim(d)?;
        for j in 0..n {
            relations.push(FreeElem {
                degree: d,
                comps: vec![unit_vec(&f, n, j)],
            });
        }
    }
    GradedModule::new(alg, vec![0], relations, None)
}

/// `M(n)`, with `M(n)_i = M_{n+i}`.
pub fn shift_module<F: Field>(m: &GradedModule<F>, n: i64) -> GradedModule<F> {
    GradedModule {
        algebra: m.algebra.clone(),
        gens: m.gens.iter().map(|g| g - n).collect(),
        relations: m
            .relations
            .iter()
            .map(|r| FreeElem {
                degree: r.degree - n,
                comps: r.comps.clone(),
            })
            .collect(),
        valid_through: if m.valid_through >= UNBOUNDED { UNBOUNDED } else { m.valid_through - n },
        pieces: Mutex::new(HashMap::new()),
        actions: Mutex::new(HashMap::new()),
    }
}

/// Block-diagonal direct sum.
pub fn direct_sum<F: Field>(alg: &Arc<dyn GradedAlgebra<F>>, ms: &[&GradedModule<F>]) -> Result<GradedModule<F>> {
    let mut gens = Vec::new();
    let mut relations = Vec::new();
    let total: usize = ms.iter().map(|m| m.gens.len()).sum();
    let mut valid = UNBOUNDED;
    for m in ms {
        if !same_algebra(alg, &m.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let offset = gens.len();
        gens.extend_from_slice(&m.gens);
        for r in &m.relations {
            let mut comps = vec![Vec::new(); total];
            for (k, c) in r.comps.iter().enumerate() {
                comps[offset + k] = c.clone();
            }
            relations.push(FreeElem {
                degree: r.degree,
                comps,
            });
        }
        valid = valid.min(m.valid_through);
    }
    GradedModule::new(alg.clone(), gens, relations, Some(valid))
}

/// A graded algebra automorphism of a presented algebra, given by the
/// images of the generators.
pub struct GradedAutomorphism<F: Field> {
    algebra: Arc<PresentedAlgebra<F>>,
    images: Vec<NcPoly<F>>,
    image_vectors: Vec<(i64, Vec<F::Elem>)>,
    matrices: Mutex<HashMap<i64, Arc<(Matrix<F::Elem>, Matrix<F::Elem>)>>>,
}

impl<F: Field> fmt::Debug for GradedAutomorphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedAutomorphism").field("images", &self.images).finish()
    }
}

impl<F: Field> GradedAutomorphism<F> {
    /// Validates that relations are preserved and that the map is
    /// invertible in every degree up to `check_through`.
    pub fn new(algebra: Arc<PresentedAlgebra<F>>, images: Vec<NcPoly<F>>, check_through: i64) -> Result<Self> {
        let pres = algebra.presentation();
        if images.len() != pres.num_generators() {
            return Err(Error::InvalidAutomorphism("one image per generator is required".into()));
        }
        let mut image_vectors = Vec::new();
        for (g, im) in images.iter().enumerate() {
            let deg = pres.degrees()[g] as i64;
            match im.homogeneous_degree(pres.degrees()) {
                Some(Some(d)) if d == deg => {}
                Some(None) => {}
                _ => {
                    return Err(Error::InvalidAutomorphism(format!(
                        "image of `{}` is not homogeneous of degree {deg}",
                        pres.names()[g]
                    )))
                }
            }
            image_vectors.push(algebra.to_vector(im, deg)?);
        }
        for r in pres.relations() {
            if !algebra.normal_form(&r.substitute(&images))?.is_zero() {
                return Err(Error::InvalidAutomorphism(format!(
                    "relation `{}` is not preserved",
                    r.display(pres.names(), pres.order())
                )));
            }
        }
        let sigma = GradedAutomorphism {
            algebra,
            images,
            image_vectors,
            matrices: Mutex::new(HashMap::new()),
        };
        for d in 1..=check_through.min(sigma.algebra.valid_through()) {
            sigma.matrices(d)?;
        }
        Ok(sigma)
    }

    pub fn identity(algebra: Arc<PresentedAlgebra<F>>) -> Result<Self> {
        let f = algebra.field().clone();
        let n = algebra.presentation().num_generators();
        let images = (0..n).map(|g| NcPoly::generator(&f, g)).collect();
        Self::new(algebra, images, 1)
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra<F>> {
        &self.algebra
    }

    pub fn images(&self) -> &[NcPoly<F>] {
        &self.images
    }

    /// The matrix of the automorphism on degree `d` and its inverse.
    fn matrices(&self, d: i64) -> Result<Arc<(Matrix<F::Elem>, Matrix<F::Elem>)>> {
        if let Some(m) = self.matrices.lock().expect("cache").get(&d) {
            return Ok(m.clone());
        }
        let alg = &self.algebra;
        let f = alg.field();
        let basis = alg.basis(d)?.to_vec();
        let mut cols = Vec::with_capacity(basis.len());
        for w in &basis {
            // sigma(w' x) = sigma(w') sigma(x).
            let mut acc_deg = 0;
            let mut acc = alg.unit();
            for &g in w.letters() {
                let (gd, gv) = &self.image_vectors[g as usize];
                acc = alg.mul(acc_deg, &acc, *gd, gv)?;
                acc_deg += gd;
            }
            cols.push(acc);
        }
        let m = Matrix::from_columns(basis.len(), &cols, f.zero());
        let inv = inverse(f, &m)
            .ok_or_else(|| Error::InvalidAutomorphism(format!("not invertible in degree {d}")))?;
        let pair = Arc::new((m, inv));
        self.matrices.lock().expect("cache").insert(d, pair.clone());
        Ok(pair)
    }

    pub fn apply(&self, d: i64, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        Ok(mat_vec(self.algebra.field(), &self.matrices(d)?.0, v))
    }

    pub fn apply_inverse(&self, d: i64, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        Ok(mat_vec(self.algebra.field(), &self.matrices(d)?.1, v))
    }

    /// The inverse automorphism.
    pub fn inverse(&self) -> Result<Self> {
        let pres = self.algebra.presentation();
        let f = self.algebra.field().clone();
        let mut images = Vec::new();
        for g in 0..pres.num_generators() {
            let d = pres.degrees()[g] as i64;
            let (_, x) = self.algebra.to_vector(&NcPoly::generator(&f, g), d)?;
            images.push(self.algebra.to_poly(d, &self.apply_inverse(d, &x)?)?);
        }
        Self::new(self.algebra.clone(), images, 1)
    }
}

/// The twist `M_sigma` with action `m * a = m sigma(a)`. A relation
/// `sum e_k r_k` of `M` becomes `sum e_k sigma^{-1}(r_k)`.
pub fn twist_module<F: Field>(m: &GradedModule<F>, sigma: &GradedAutomorphism<F>) -> Result<GradedModule<F>> {
    let sigma_alg: Arc<dyn GradedAlgebra<F>> = sigma.algebra.clone();
    if !same_algebra(&sigma_alg, &m.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let mut relations = Vec::new();
    for r in &m.relations {
        let comps = r
            .comps
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_empty() {
                    Ok(Vec::new())
                } else {
                    sigma.apply_inverse(r.degree - m.gens[k], c)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        relations.push(FreeElem {
            degree: r.degree,
            comps,
        });
    }
    GradedModule::new(m.algebra.clone(), m.gens.clone(), relations, Some(m.valid_through))
}

/// A module over a presented algebra given by its pieces on `lo..=hi` and
/// the matrices of the generators' actions.
#[derive(Clone, Debug)]
pub struct TabulatedModule<F: Field> {
    algebra: Arc<PresentedAlgebra<F>>,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    /// `(d, g)`: action of generator `g` from degree `d`.
    gen_actions: HashMap<(i64, usize), Matrix<F::Elem>>,
}

impl<F: Field> TabulatedModule<F> {
    pub fn new(
        algebra: Arc<PresentedAlgebra<F>>,
        lo: i64,
        dims: Vec<usize>,
        gen_actions: HashMap<(i64, usize), Matrix<F::Elem>>,
    ) -> Result<Self> {
        let hi = lo + dims.len() as i64 - 1;
        let degrees = algebra.presentation().degrees().to_vec();
        for d in lo..=hi {
            for (g, &gd) in degrees.iter().enumerate() {
                let t = d + gd as i64;
                if t > hi {
                    continue;
                }
                let m = gen_actions
                    .get(&(d, g))
                    .ok_or_else(|| Error::ShapeMismatch(format!("missing action of generator {g} on degree {d}")))?;
                if m.cols() != dims[(d - lo) as usize] || m.rows() != dims[(t - lo) as usize] {
                    return Err(Error::ShapeMismatch(format!("action of generator {g} on degree {d}")));
                }
            }
        }
        Ok(TabulatedModule {
            algebra,
            lo,
            hi,
            dims,
            gen_actions,
        })
    }

    /// Tabulates a module over a presented algebra on `lo..=hi`.
    pub fn from_module(m: &GradedModule<F>, algebra: &Arc<PresentedAlgebra<F>>, lo: i64, hi: i64) -> Result<Self> {
        let dyn_alg: Arc<dyn GradedAlgebra<F>> = algebra.clone();
        if !same_algebra(&dyn_alg, m.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let dims = m.dims(lo, hi)?;
        let mut gen_actions = HashMap::new();
        for (g, (gd, gv)) in algebra.generators().into_iter().enumerate() {
            for d in lo..=hi - gd {
                gen_actions.insert((d, g), m.action_by(d, gd, &gv)?);
            }
        }
        Self::new(algebra.clone(), lo, dims, gen_actions)
    }

    pub fn algebra(&self) -> &Arc<PresentedAlgebra<F>> {
        &self.algebra
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < self.lo || d > self.hi {
            0
        } else {
            self.dims[(d - self.lo) as usize]
        }
    }

    pub fn generator_action(&self, d: i64, g: usize) -> Option<&Matrix<F::Elem>> {
        self.gen_actions.get(&(d, g))
    }

    /// Action of the `j`-th normal word of degree `e` from degree `d`.
    pub fn word_action(&self, d: i64, e: i64, j: usize) -> Result<Matrix<F::Elem>> {
        let f = self.algebra.field();
        let word = self.algebra.basis(e)?[j].clone();
        let mut m = Matrix::identity(f, self.dim(d));
        let mut cur = d;
        for &g in word.letters() {
            let gd = self.algebra.presentation().degrees()[g as usize] as i64;
            let a = match self.gen_actions.get(&(cur, g as usize)) {
                Some(a) => a.clone(),
                None => Matrix::zeros(f, self.dim(cur + gd), self.dim(cur)),
            };
            m = mat_mul(f, &a, &m);
            cur += gd;
        }
        Ok(m)
    }

    /// Literal twist: generator `g` acts as `sigma(x_g)` did before.
    pub fn twist(&self, sigma: &GradedAutomorphism<F>) -> Result<Self> {
        if !Arc::ptr_eq(&self.algebra, sigma.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let f = self.algebra.field();
        let mut gen_actions = HashMap::new();
        for (g, (gd, _)) in self.algebra.generators().into_iter().enumerate() {
            let (_, image) = &sigma.image_vectors[g];
            for d in self.lo..=self.hi - gd {
                let mut acc = Matrix::zeros(f, self.dim(d + gd), self.dim(d));
                for (j, c) in image.iter().enumerate() {
                    if !f.is_zero(c) {
                        acc = add_scaled_matrix(f, &acc, c, &self.word_action(d, gd, j)?);
                    }
                }
                gen_actions.insert((d, g), acc);
            }
        }
        Self::new(self.algebra.clone(), self.lo, self.dims.clone(), gen_actions)
    }

    /// The pieces in degrees `>= n` (and nothing below).
    pub fn truncate(&self, n: i64) -> Result<Self> {
        let lo = n.max(self.lo);
        if lo > self.hi {
            return Self::new(self.algebra.clone(), n, vec![0], HashMap::new());
        }
        let dims = (lo..=self.hi).map(|d| self.dim(d)).collect();
        let gen_actions = self
            .gen_actions
            .iter()
            .filter(|((d, _), _)| *d >= lo)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Self::new(self.algebra.clone(), lo, dims, gen_actions)
    }
}

/// Re-presents a tabulated module: generators are chosen degree by degree
/// as a basis of the part not reached from lower generators; relations are
/// minimal generators of the kernel. The result is valid through the top
/// tabulated degree.
pub fn presentation_from_tabulated<F: Field>(t: &TabulatedModule<F>) -> Result<GradedModule<F>> {
    let alg = t.algebra();
    let f = alg.field().clone();
    let dyn_alg: Arc<dyn GradedAlgebra<F>> = alg.clone();
    let mut gens: Vec<i64> = Vec::new();
    let mut gen_vecs: Vec<Vec<F::Elem>> = Vec::new();
    let mut relations: Vec<FreeElem<F::Elem>> = Vec::new();
    let degrees = alg.presentation().degrees().to_vec();
    // Kernel pieces by degree, as subspaces of the free layout.
    let mut kernels: HashMap<i64, (Vec<usize>, Subspace<F::Elem>)> = HashMap::new();
    for d in t.lo..=t.hi {
        let tgt = t.dim(d);
        // Image of the free module on the generators found so far.
        let images = |gens: &[i64], gen_vecs: &[Vec<F::Elem>]| -> Result<(Vec<usize>, Vec<Vec<F::Elem>>)> {
            let mut offsets = Vec::new();
            let mut cols = Vec::new();
            for (k, &g) in gens.iter().enumerate() {
                offsets.push(cols.len());
                for j in 0..alg.dim(d - g)? {
                    let m = t.word_action(g, d - g, j)?;
                    cols.push(mat_vec(&f, &m, &gen_vecs[k]));
                }
            }
            Ok((offsets, cols))
        };
        let (_, cols) = images(&gens, &gen_vecs)?;
        let span = Subspace::spanned_by(&f, tgt, &cols);
        for c in span.non_pivots() {
            let v = unit_vec(&f, tgt, c);
            gens.push(d);
            gen_vecs.push(v);
        }
        let (offsets, cols) = images(&gens, &gen_vecs)?;
        let free_dim = cols.len();
        let map = Matrix::from_columns(tgt, &cols, f.zero());
        let kernel = crate::linalg::kernel(&f, &map);
        // Part of the kernel generated by lower-degree kernel elements.
        let mut lower = Subspace::zero(free_dim);
        for (g, &gd) in degrees.iter().enumerate() {
            let prev = d - gd as i64;
            if let Some((prev_offsets, prev_kernel)) = kernels.get(&prev) {
                for v in prev_kernel.basis() {
                    let comps: Vec<Vec<F::Elem>> = (0..prev_offsets.len())
                        .map(|k| {
                            let end = prev_offsets.get(k + 1).copied().unwrap_or(v.len());
                            v[prev_offsets[k]..end].to_vec()
                        })
                        .collect();
                    let mut comps = comps;
                    comps.resize(gens.len(), Vec::new());
                    let elem = FreeElem { degree: prev, comps };
                    let (_, gv) = &alg.generators()[g];
                    let prod = free_times(&dyn_alg, &gens, &elem, gd as i64, gv, &offsets, free_dim)?;
                    lower.insert(&f, &prod);
                }
            }
        }
        let mut full = lower.clone();
        for v in &kernel {
            if full.insert(&f, v) {
                let comps = (0..gens.len())
                    .map(|k| {
                        let end = offsets.get(k + 1).copied().unwrap_or(free_dim);
                        v[offsets[k]..end].to_vec()
                    })
                    .collect();
                relations.push(FreeElem { degree: d, comps });
            }
        }
        kernels.insert(d, (offsets, full));
    }
    GradedModule::new(dyn_alg, gens, relations, Some(t.hi))
}

/// `r * b` for a free element and an algebra element of degree `e`, laid out
/// by `offsets`.
fn free_times<F: Field>(
    alg: &Arc<dyn GradedAlgebra<F>>,
    gens: &[i64],
    r: &FreeElem<F::Elem>,
    e: i64,
    b: &[F::Elem],
    offsets: &[usize],
    free_dim: usize,
) -> Result<Vec<F::Elem>> {
    let f = alg.field();
    let mut v = vec![f.zero(); free_dim];
    for (k, c) in r.comps.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let prod = alg.mul(r.degree - gens[k], c, e, b)?;
        for (i, x) in prod.into_iter().enumerate() {
            v[offsets[k] + i] = f.add(&v[offsets[k] + i], &x);
        }
    }
    Ok(v)
}

/// `M_{>= n}`, re-presented from its pieces.
pub fn truncate_module<F: Field>(m: &GradedModule<F>, algebra: &Arc<PresentedAlgebra<F>>, n: i64) -> Result<GradedModule<F>> {
    let lo = n.max(m.lowest_degree().unwrap_or(n));
    let hi = m.valid_through();
    if lo > hi {
        return Err(Error::DegreeBeyondTruncation { degree: lo, bound: hi });
    }
    let t = TabulatedModule::from_module(m, algebra, lo, hi)?;
    presentation_from_tabulated(&t)
}

/// The dual `M^dagger = Hom_A(M, A)` as a right module over the opposite
/// algebra, tabulated from the hom spaces `Hom(M, A(s))` for `s` in
/// `lo..=hi` and re-presented. `op` must be presented by the reversed
/// relations of `M`'s algebra.
pub fn dual_module<F: Field>(m: &GradedModule<F>, op: &Arc<PresentedAlgebra<F>>, lo: i64, hi: i64) -> Result<GradedModule<F>> {
    let alg = m.algebra().clone();
    let f = alg.field().clone();
    let pres = alg
        .presentation()
        .ok_or_else(|| Error::HypothesisViolated("dual needs a presented algebra".into()))?;
    if opposite_presentation(pres) != *op.presentation() {
        return Err(Error::AlgebraMismatch);
    }
    let maxg = m.generator_degrees().iter().copied().max().unwrap_or(0);
    let needed = hi + 1 + maxg;
    if needed > alg.valid_through() {
        return Err(Error::WindowExceeded(format!(
            "dual up to degree {hi} needs the algebra through degree {needed}"
        )));
    }
    let a_free = free_graded_module(alg.clone(), &[0])?;
    let mut bases = Vec::new();
    for s in lo..=hi {
        let h = hom_space(m, &a_free, s)?;
        bases.push(h.basis.into_iter().map(|e| e.flatten()).collect::<Vec<_>>());
    }
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let coords: Vec<Option<BasisCoords<F::Elem>>> = bases
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let s = lo + i as i64;
            let total: usize = m
                .generator_degrees()
                .iter()
                .map(|g| alg.dim(g + s).unwrap_or(0))
                .sum();
            BasisCoords::new(&f, total, b)
        })
        .collect();
    let gens = op.generators();
    let mut gen_actions = HashMap::new();
    for (gi, (gd, gv)) in gens.iter().enumerate() {
        for s in lo..=hi - gd {
            let src = &bases[(s - lo) as usize];
            let tgt_coords = coords[(s + gd - lo) as usize].as_ref().expect("independent basis");
            let mut cols = Vec::new();
            for phi in src {
                // (phi . x)(e_k) = x * phi(e_k), left multiplication in A.
                let mut image = Vec::new();
                let mut off = 0;
                for g in m.generator_degrees() {
                    let n = alg.dim(g + s)?;
                    let part = &phi[off..off + n];
                    off += n;
                    let lm = alg.left_mul_by(*gd, gv, g + s)?;
                    image.extend(mat_vec(&f, &lm, part));
                }
                let c = tgt_coords
                    .coords(&f, &image)
                    .ok_or_else(|| Error::ShapeMismatch("dual action leaves the hom space".into()))?;
                cols.push(c);
            }
            gen_actions.insert((s, gi), Matrix::from_columns(dims[(s + gd - lo) as usize], &cols, f.zero()));
        }
    }
    let t = TabulatedModule::new(op.clone(), lo, dims, gen_actions)?;
    presentation_from_tabulated(&t)
}

/// Rank-nullity check of the presentation in degree `d`:
/// `dim M_d = dim F_d - rank(relations in degree d)`.
pub fn presentation_rank_check<F: Field>(m: &GradedModule<F>, d: i64) -> Result<bool> {
    let f = m.field();
    let (offsets, free_dim) = m.free_layout(d)?;
    let mut cols = Vec::new();
    for r in m.relations() {
        let e = d - r.degree;
        if e < 0 {
            continue;
        }
        for j in 0..m.algebra().dim(e)? {
            cols.push(m.free_times_basis(r, e, j, &offsets, free_dim)?);
        }
    }
    let r = if cols.is_empty() {
        0
    } else {
        rank(f, &Matrix::from_columns(free_dim, &cols, f.zero()))
    };
    Ok(m.dim(d)? == free_dim - r)
}
