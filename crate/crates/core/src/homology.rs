//! Hom spaces, minimal free resolutions and graded Ext, computed degree by
//! degree inside a [`Window`].
//!
//! Over an algebra whose degree-zero part is not the ground field, the terms
//! of a resolution are sums of indecomposable projectives `e A(-g)` for the
//! primitive idempotents `e` of `A_0`, so resolutions stay minimal.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::endo::{EndomorphismAlgebra, FinDimAlgebra};
use crate::error::{Error, Result};
use crate::gmodule::{same_algebra, GradedAutomorphism, GradedModule, twist_module};
use crate::linalg::{kernel, mat_vec, rank, unit_vec, vec_add_scaled, BasisCoords, Matrix, Subspace};
use crate::scalars::Field;

/// Degree ranges every answer is certified in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub internal_lo: i64,
    pub internal_hi: i64,
    pub homological_max: usize,
    /// Resolutions compute kernels up to this many degrees above the lowest
    /// generator of the module.
    pub algebra_degree_cap: i64,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            internal_lo: -6,
            internal_hi: 6,
            homological_max: 4,
            algebra_degree_cap: 8,
        }
    }
}

impl Window {
    pub fn new(internal_lo: i64, internal_hi: i64, homological_max: usize, algebra_degree_cap: i64) -> Result<Self> {
        if internal_lo > internal_hi {
            return Err(Error::WindowExceeded(format!("empty internal range {internal_lo}..{internal_hi}")));
        }
        Ok(Window {
            internal_lo,
            internal_hi,
            homological_max,
            algebra_degree_cap,
        })
    }

    pub fn internal(&self) -> std::ops::RangeInclusive<i64> {
        self.internal_lo..=self.internal_hi
    }
}

/// A degree-`shift` homomorphism, stored by the images of the generators of
/// the source presentation (`images[k]` lies in `N_{g_k + shift}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElem<E> {
    pub shift: i64,
    pub images: Vec<Vec<E>>,
}

impl<E: Clone> HomElem<E> {
    pub fn flatten(&self) -> Vec<E> {
        self.images.iter().flatten().cloned().collect()
    }
}

/// Basis of `Hom_{GrMod}(M, N(s))`.
#[derive(Clone, Debug)]
pub struct HomSpace<E> {
    pub shift: i64,
    pub basis: Vec<HomElem<E>>,
    block_dims: Vec<usize>,
    /// The basis has the identity in these flattened coordinates.
    free_cols: Vec<usize>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> HomSpace<E> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an element known to lie in the space.
    pub fn coords(&self, h: &HomElem<E>) -> Vec<E> {
        let flat: Vec<E> = h.images.iter().flatten().cloned().collect();
        self.free_cols.iter().map(|&c| flat[c].clone()).collect()
    }

    /// The element with the given coordinates.
    pub fn element<F: Field<Elem = E>>(&self, f: &F, coords: &[E]) -> HomElem<E> {
        let mut images: Vec<Vec<E>> = self.block_dims.iter().map(|&n| vec![f.zero(); n]).collect();
        for (c, b) in coords.iter().zip(&self.basis) {
            if f.is_zero(c) {
                continue;
            }
            for (img, bi) in images.iter_mut().zip(&b.images) {
                vec_add_scaled(f, img, c, bi);
            }
        }
        HomElem {
            shift: self.shift,
            images,
        }
    }
}

fn check_same<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> Result<()> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// `Hom(M, N(s))`: images `v_k` of the generators subject to
/// `sum_k v_k r_k = 0` for every relation `sum_k e_k r_k` of `M`.
pub fn hom_space<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>, s: i64) -> Result<HomSpace<F::Elem>> {
    check_same(m, n)?;
    let f = m.field();
    let gens = m.generator_degrees();
    for &g in gens {
        if g + s > n.valid_through() {
            return Err(Error::WindowExceeded(format!(
                "Hom(M, N({s})) needs N in degree {}, known through {}",
                g + s,
                n.valid_through()
            )));
        }
    }
    let block_dims = gens.iter().map(|g| n.dim(g + s)).collect::<Result<Vec<_>>>()?;
    let mut offsets = Vec::new();
    let mut total = 0;
    for b in &block_dims {
        offsets.push(total);
        total += b;
    }
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for r in m.relations() {
        let t = r.degree + s;
        if n.lowest_degree().is_none_or(|lo| t < lo) {
            continue;
        }
        if t > n.valid_through() {
            return Err(Error::WindowExceeded(format!(
                "Hom(M, N({s})) needs N in degree {t}, known through {}",
                n.valid_through()
            )));
        }
        let nt = n.dim(t)?;
        if nt == 0 {
            continue;
        }
        let mut block = Matrix::zeros(f, nt, total);
        for (k, c) in r.comps.iter().enumerate() {
            if c.is_empty() || block_dims[k] == 0 {
                continue;
            }
            let a = n.action_by(gens[k] + s, r.degree - gens[k], c)?;
            for i in 0..nt {
                for j in 0..block_dims[k] {
                    block.set(i, offsets[k] + j, a.get(i, j).clone());
                }
            }
        }
        for i in 0..nt {
            rows.push(block.row(i).to_vec());
        }
    }
    let sol = if rows.is_empty() {
        (0..total).map(|i| unit_vec(f, total, i)).collect()
    } else {
        kernel(f, &Matrix::from_rows(total, &rows))
    };
    // Each kernel vector has a unit entry in its own free column, zero in
    // the other free columns.
    let mut free_cols = Vec::with_capacity(sol.len());
    let mut seen = vec![false; total];
    for v in &sol {
        let c = (0..total)
            .find(|&c| !seen[c] && f.is_one(&v[c]) && sol.iter().filter(|w| !f.is_zero(&w[c])).count() == 1)
            .expect("canonical kernel basis");
        seen[c] = true;
        free_cols.push(c);
    }
    let basis = sol
        .into_iter()
        .map(|v| HomElem {
            shift: s,
            images: (0..gens.len()).map(|k| v[offsets[k]..offsets[k] + block_dims[k]].to_vec()).collect(),
        })
        .collect();
    Ok(HomSpace {
        shift: s,
        basis,
        block_dims,
        free_cols,
    })
}

/// Matrix of `h: M_d -> N_{d + s}`.
pub fn hom_matrix<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>, h: &HomElem<F::Elem>, d: i64) -> Result<Matrix<F::Elem>> {
    let f = m.field();
    let gens = m.generator_degrees();
    let rows = n.dim(d + h.shift)?;
    let mut cols = Vec::new();
    for (k, j) in m.basis_positions(d)? {
        if h.images[k].is_empty() || rows == 0 {
            cols.push(vec![f.zero(); rows]);
            continue;
        }
        let a = n.action_matrix(gens[k] + h.shift, d - gens[k], j)?;
        cols.push(mat_vec(f, &a, &h.images[k]));
    }
    Ok(Matrix::from_columns(rows, &cols, f.zero()))
}

/// `h(v)` for `v` in `M_d`.
pub fn apply_hom<F: Field>(
    m: &GradedModule<F>,
    n: &GradedModule<F>,
    h: &HomElem<F::Elem>,
    d: i64,
    v: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    let f = m.field();
    let gens = m.generator_degrees();
    let mut out = vec![f.zero(); n.dim(d + h.shift)?];
    for ((k, j), c) in m.basis_positions(d)?.into_iter().zip(v) {
        if f.is_zero(c) || h.images[k].is_empty() || out.is_empty() {
            continue;
        }
        let a = n.action_matrix(gens[k] + h.shift, d - gens[k], j)?;
        vec_add_scaled(f, &mut out, c, &mat_vec(f, &a, &h.images[k]));
    }
    Ok(out)
}

/// `g . f` (first `f`, then `g`) in `Hom(M, P(s + t))`.
pub fn compose<F: Field>(
    m: &GradedModule<F>,
    n: &GradedModule<F>,
    p: &GradedModule<F>,
    f: &HomElem<F::Elem>,
    g: &HomElem<F::Elem>,
) -> Result<HomElem<F::Elem>> {
    if f.images.len() != m.generator_degrees().len() || g.images.len() != n.generator_degrees().len() {
        return Err(Error::ShapeMismatch("homomorphism does not match its source".into()));
    }
    let images = m
        .generator_degrees()
        .iter()
        .zip(&f.images)
        .map(|(gk, v)| apply_hom(n, p, g, gk + f.shift, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomElem {
        shift: f.shift + g.shift,
        images,
    })
}

pub fn identity_hom<F: Field>(m: &GradedModule<F>) -> Result<HomElem<F::Elem>> {
    let images = (0..m.generator_degrees().len())
        .map(|k| m.generator_class(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomElem { shift: 0, images })
}

pub fn zero_hom<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>, s: i64) -> Result<HomElem<F::Elem>> {
    let f = m.field();
    let images = m
        .generator_degrees()
        .iter()
        .map(|g| Ok(vec![f.zero(); n.dim(g + s)?]))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomElem { shift: s, images })
}

/// Whether all generator images vanish.
pub fn hom_is_zero<F: Field>(f: &F, h: &HomElem<F::Elem>) -> bool {
    h.images.iter().flatten().all(|x| f.is_zero(x))
}

/// One term `P_i = (+) e_{c_k} A(-g_k)` of a resolution with its
/// differential.
#[derive(Clone, Debug)]
pub struct ResolutionStep<E> {
    pub generator_degrees: Vec<i64>,
    /// Index of the idempotent `e_{c_k}` of the degree-zero piece.
    pub idempotents: Vec<usize>,
    /// Image of each generator in the previous term (module coordinates of
    /// `M` for step 0, free coordinates otherwise).
    pub images: Vec<Vec<E>>,
    /// Kernel of this step was computed through this internal degree.
    pub computed_through: i64,
}

/// A minimal graded free resolution, truncated in homological and internal
/// degree.
#[derive(Debug)]
pub struct FreeResolution<F: Field> {
    algebra: std::sync::Arc<dyn GradedAlgebra<F>>,
    idempotents: Vec<Vec<F::Elem>>,
    /// `ambients[i]` is the target of the differential out of step `i`.
    ambients: Vec<GradedModule<F>>,
    pub steps: Vec<ResolutionStep<F::Elem>>,
    /// The last kernel vanished through the computed degree.
    pub terminated: bool,
    /// Some step found generators at the degree where kernel computation
    /// stopped.
    pub incomplete: bool,
}

/// Basis of `e A_n` as vectors of `A_n`.
fn idempotent_block<F: Field>(alg: &dyn GradedAlgebra<F>, e: &[F::Elem], n: i64, connected: bool) -> Result<Vec<Vec<F::Elem>>> {
    let f = alg.field();
    let dim = alg.dim(n)?;
    if connected {
        return Ok((0..dim).map(|i| unit_vec(f, dim, i)).collect());
    }
    let lm = alg.left_mul_by(0, e, n)?;
    Ok(Subspace::spanned_by(f, dim, &lm.columns()).basis().to_vec())
}

impl<F: Field> FreeResolution<F> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Shifts of step `i` in the `A(s)` notation.
    pub fn shifts(&self, i: usize) -> Vec<i64> {
        self.steps[i].generator_degrees.iter().map(|g| -g).collect()
    }

    /// Smallest internal degree through which every kernel was computed.
    pub fn complete_internal_through(&self) -> i64 {
        self.steps.iter().map(|s| s.computed_through).min().unwrap_or(i64::MAX)
    }

    fn connected(&self) -> bool {
        self.idempotents.len() == 1
    }

    /// The free module on the generators of step `i`.
    pub fn free_module(&self, i: usize) -> Result<GradedModule<F>> {
        GradedModule::new(self.algebra.clone(), self.steps[i].generator_degrees.clone(), Vec::new(), None)
    }

    /// Basis of `P_{i,d}` inside the free module on its generators.
    pub fn projective_basis(&self, i: usize, d: i64) -> Result<Vec<Vec<F::Elem>>> {
        projective_basis(
            self.algebra.as_ref(),
            &self.idempotents,
            &self.steps[i].generator_degrees,
            &self.steps[i].idempotents,
            d,
            self.connected(),
        )
    }

    /// Matrix of the differential out of `P_{i,d}` (columns indexed by
    /// [`Self::projective_basis`]).
    pub fn differential_matrix(&self, i: usize, d: i64) -> Result<Matrix<F::Elem>> {
        let basis = self.projective_basis(i, d)?;
        let cols = differential_columns(&self.ambients[i], &self.steps[i], &basis, d)?;
        Ok(Matrix::from_columns(self.ambients[i].dim(d)?, &cols, self.algebra.field().zero()))
    }

    /// `d_{i-1} d_i = 0` on every generator.
    pub fn check_d_squared(&self) -> Result<bool> {
        let f = self.algebra.field();
        for i in 1..self.steps.len() {
            let prev = &self.steps[i - 1];
            let src = &self.ambients[i];
            for (k, g) in self.steps[i].generator_degrees.iter().enumerate() {
                let v = &self.steps[i].images[k];
                let offsets = src.offsets(*g)?;
                let mut out = vec![f.zero(); self.ambients[i - 1].dim(*g)?];
                for (j, gj) in prev.generator_degrees.iter().enumerate() {
                    let n = self.algebra.dim(g - gj)?;
                    let part = &v[offsets[j]..offsets[j] + n];
                    let w = self.ambients[i - 1].act(*gj, &prev.images[j], g - gj, part)?;
                    vec_add_scaled(f, &mut out, &f.one(), &w);
                }
                if out.iter().any(|x| !f.is_zero(x)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `rank d_i + rank d_{i+1} = dim P_i` in every degree where both are
    /// known, and `d_0` onto `M`.
    pub fn check_exactness(&self) -> Result<bool> {
        let f = self.algebra.field();
        let top = self.complete_internal_through();
        let lo = self.ambients[0].lowest_degree().unwrap_or(0);
        for d in lo..=top {
            let mut ranks = Vec::new();
            for i in 0..self.steps.len() {
                ranks.push(rank(f, &self.differential_matrix(i, d)?));
            }
            if ranks[0] != self.ambients[0].dim(d)? {
                return Ok(false);
            }
            for i in 0..self.steps.len() {
                let dim = self.projective_basis(i, d)?.len();
                let next = ranks.get(i + 1).copied().unwrap_or(0);
                if i + 1 == self.steps.len() && !self.terminated {
                    continue;
                }
                if ranks[i] + next != dim {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn projective_basis<F: Field>(
    alg: &dyn GradedAlgebra<F>,
    idempotents: &[Vec<F::Elem>],
    gens: &[i64],
    idems: &[usize],
    d: i64,
    connected: bool,
) -> Result<Vec<Vec<F::Elem>>> {
    let f = alg.field();
    let dims = gens.iter().map(|g| alg.dim(d - g)).collect::<Result<Vec<_>>>()?;
    let total: usize = dims.iter().sum();
    let mut out = Vec::new();
    let mut off = 0;
    for (k, g) in gens.iter().enumerate() {
        for b in idempotent_block(alg, &idempotents[idems[k]], d - g, connected)? {
            let mut v = vec![f.zero(); total];
            v[off..off + dims[k]].clone_from_slice(&b);
            out.push(v);
        }
        off += dims[k];
    }
    Ok(out)
}

fn differential_columns<F: Field>(
    ambient: &GradedModule<F>,
    step: &ResolutionStep<F::Elem>,
    basis: &[Vec<F::Elem>],
    d: i64,
) -> Result<Vec<Vec<F::Elem>>> {
    let alg = ambient.algebra();
    let f = alg.field();
    let dims = step
        .generator_degrees
        .iter()
        .map(|g| alg.dim(d - g))
        .collect::<Result<Vec<_>>>()?;
    let n = ambient.dim(d)?;
    let mut cols = Vec::with_capacity(basis.len());
    for v in basis {
        let mut out = vec![f.zero(); n];
        let mut off = 0;
        for (k, g) in step.generator_degrees.iter().enumerate() {
            let part = &v[off..off + dims[k]];
            off += dims[k];
            if part.iter().all(|x| f.is_zero(x)) {
                continue;
            }
            let w = ambient.act(*g, &step.images[k], d - g, part)?;
            vec_add_scaled(f, &mut out, &f.one(), &w);
        }
        cols.push(out);
    }
    Ok(cols)
}

/// Minimal graded projective resolution of `M` with `steps + 1` terms
/// (or fewer if it terminates).
pub fn free_resolution<F: Field>(m: &GradedModule<F>, steps: usize, window: &Window) -> Result<FreeResolution<F>> {
    let alg = m.algebra().clone();
    let f = alg.field().clone();
    let zero = alg.degree_zero()?;
    let connected = alg.dim(0)? == 1;
    let idempotents = if connected {
        vec![alg.unit()]
    } else {
        zero.idempotents.clone()
    };
    let radical = if connected { Vec::new() } else { zero.radical.clone() };
    let a0 = alg.dim(0)?;
    let mut res = FreeResolution {
        algebra: alg.clone(),
        idempotents,
        ambients: vec![m.clone()],
        steps: Vec::new(),
        terminated: false,
        incomplete: false,
    };
    let Some(lowest) = m.lowest_degree() else {
        res.terminated = true;
        return Ok(res);
    };
    let cap = lowest + window.algebra_degree_cap;
    // Target subspaces of the current ambient; `None` means everything.
    let mut targets: Option<BTreeMap<i64, Vec<Vec<F::Elem>>>> = None;
    let mut top = cap.min(m.valid_through());
    for level in 0..=steps {
        let ambient = res.ambients[level].clone();
        top = top.min(ambient.valid_through());
        let lo = match &targets {
            None => lowest,
            Some(t) => match t.iter().find(|(_, v)| !v.is_empty()) {
                Some((d, _)) => *d,
                None => {
                    res.terminated = true;
                    break;
                }
            },
        };
        let mut step = ResolutionStep {
            generator_degrees: Vec::new(),
            idempotents: Vec::new(),
            images: Vec::new(),
            computed_through: top,
        };
        let mut kernels = BTreeMap::new();
        for d in lo..=top {
            let n = ambient.dim(d)?;
            let target: Vec<Vec<F::Elem>> = match &targets {
                None => (0..n).map(|i| unit_vec(&f, n, i)).collect(),
                Some(t) => t.get(&d).cloned().unwrap_or_default(),
            };
            let gens_before = step.generator_degrees.len();
            if !target.is_empty() {
                let basis = projective_basis(alg.as_ref(), &res.idempotents, &step.generator_degrees, &step.idempotents, d, connected)?;
                let cols = differential_columns(&ambient, &step, &basis, d)?;
                let mut reached = Subspace::spanned_by(&f, n, &cols);
                for t in &target {
                    for r in &radical {
                        reached.insert(&f, &ambient.act(d, t, 0, r)?);
                    }
                }
                for (c, e) in res.idempotents.iter().enumerate() {
                    for t in &target {
                        let w = if connected { t.clone() } else { ambient.act(d, t, 0, e)? };
                        if reached.insert(&f, &w) {
                            step.generator_degrees.push(d);
                            step.idempotents.push(c);
                            for b in 0..a0 {
                                reached.insert(&f, &ambient.act(d, &w, 0, &unit_vec(&f, a0, b))?);
                            }
                            step.images.push(w);
                        }
                    }
                }
            }
            if step.generator_degrees.is_empty() {
                continue;
            }
            let basis = projective_basis(alg.as_ref(), &res.idempotents, &step.generator_degrees, &step.idempotents, d, connected)?;
            let cols = differential_columns(&ambient, &step, &basis, d)?;
            let ker = kernel(&f, &Matrix::from_columns(n, &cols, f.zero()));
            let total = basis.first().map_or(0, |b| b.len());
            let vecs: Vec<Vec<F::Elem>> = ker
                .iter()
                .map(|c| {
                    let mut v = vec![f.zero(); total];
                    for (x, b) in c.iter().zip(&basis) {
                        vec_add_scaled(&f, &mut v, x, b);
                    }
                    v
                })
                .collect();
            if d == top && step.generator_degrees.len() > gens_before && level > 0 {
                res.incomplete = true;
            }
            kernels.insert(d, vecs);
        }
        res.steps.push(step);
        if kernels.values().all(|v| v.is_empty()) {
            res.terminated = true;
            break;
        }
        if level == steps {
            break;
        }
        let next = res.free_module(level)?;
        res.ambients.push(next);
        targets = Some(kernels);
    }
    Ok(res)
}

/// Graded dimensions of `Ext^i(M, N)` on the internal range of a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtDims {
    pub i: usize,
    /// Internal degree -> dimension, for degrees that could be certified.
    pub dims: BTreeMap<i64, usize>,
    /// Internal degrees skipped because a needed piece of `N` is beyond its
    /// truncation.
    pub uncertified: Vec<i64>,
    /// The resolution met generators at its degree cap.
    pub incomplete: bool,
}

impl ExtDims {
    pub fn is_zero(&self) -> bool {
        self.dims.values().all(|&d| d == 0)
    }

    /// Degrees with nonzero dimension.
    pub fn support(&self) -> Vec<(i64, usize)> {
        self.dims.iter().filter(|(_, &d)| d > 0).map(|(&t, &d)| (t, d)).collect()
    }
}

/// Basis of `Hom(P_i, N)_t = (+)_k N_{g_k + t} e_{c_k}`.
fn cochain_basis<F: Field>(res: &FreeResolution<F>, i: usize, n: &GradedModule<F>, t: i64) -> Result<(Vec<usize>, Vec<Vec<F::Elem>>)> {
    let f = n.field();
    let step = &res.steps[i];
    let dims = step
        .generator_degrees
        .iter()
        .map(|g| n.dim(g + t))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = dims.iter().sum();
    let mut offsets = Vec::new();
    let mut out = Vec::new();
    let mut off = 0;
    for (k, g) in step.generator_degrees.iter().enumerate() {
        offsets.push(off);
        if dims[k] > 0 {
            let vecs = if res.connected() {
                (0..dims[k]).map(|j| unit_vec(f, dims[k], j)).collect::<Vec<_>>()
            } else {
                let e = &res.idempotents[step.idempotents[k]];
                let m = n.action_by(g + t, 0, e)?;
                Subspace::spanned_by(f, dims[k], &m.columns()).basis().to_vec()
            };
            for b in vecs {
                let mut v = vec![f.zero(); total];
                v[off..off + dims[k]].clone_from_slice(&b);
                out.push(v);
            }
        }
        off += dims[k];
    }
    Ok((offsets, out))
}

/// Rank of `Hom(d_{i+1}, N)` on `Hom(P_i, N)_t`.
fn coboundary_rank<F: Field>(res: &FreeResolution<F>, i: usize, n: &GradedModule<F>, t: i64) -> Result<usize> {
    if i + 1 >= res.steps.len() {
        return Ok(0);
    }
    let f = n.field();
    let (offsets, basis) = cochain_basis(res, i, n, t)?;
    if basis.is_empty() {
        return Ok(0);
    }
    let src = &res.steps[i];
    let next = &res.steps[i + 1];
    let free = &res.ambients[i + 1];
    let mut rows_total = 0;
    let mut tgt_off = Vec::new();
    for g in &next.generator_degrees {
        tgt_off.push(rows_total);
        rows_total += n.dim(g + t)?;
    }
    if rows_total == 0 {
        return Ok(0);
    }
    let mut cols = Vec::with_capacity(basis.len());
    for v in &basis {
        let mut out = vec![f.zero(); rows_total];
        for (k, g) in next.generator_degrees.iter().enumerate() {
            let image = &next.images[k];
            let img_off = free.offsets(*g)?;
            for (j, gj) in src.generator_degrees.iter().enumerate() {
                let nj = n.dim(gj + t)?;
                let vj = &v[offsets[j]..offsets[j] + nj];
                if vj.iter().all(|x| f.is_zero(x)) {
                    continue;
                }
                let a_dim = res.algebra.dim(g - gj)?;
                let coeff = &image[img_off[j]..img_off[j] + a_dim];
                if coeff.iter().all(|x| f.is_zero(x)) {
                    continue;
                }
                let w = n.act(gj + t, vj, g - gj, coeff)?;
                let nk = w.len();
                vec_add_scaled(f, &mut out[tgt_off[k]..tgt_off[k] + nk], &f.one(), &w);
            }
        }
        cols.push(out);
    }
    Ok(rank(f, &Matrix::from_columns(rows_total, &cols, f.zero())))
}

/// `Ext^i(M, N)` from a resolution of `M`.
pub fn ext_from_resolution<F: Field>(res: &FreeResolution<F>, n: &GradedModule<F>, i: usize, window: &Window) -> Result<ExtDims> {
    if !same_algebra(&res.algebra, n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let mut out = ExtDims {
        i,
        dims: BTreeMap::new(),
        uncertified: Vec::new(),
        incomplete: res.incomplete,
    };
    if i + 1 >= res.steps.len() && !res.terminated && i >= res.steps.len().saturating_sub(1) {
        return Err(Error::IncompleteKernel {
            step: i,
            cap: window.algebra_degree_cap,
        });
    }
    for t in window.internal() {
        let needed = (i.saturating_sub(1)..=(i + 1).min(res.steps.len().saturating_sub(1)))
            .flat_map(|s| res.steps.get(s).map(|st| st.generator_degrees.clone()).unwrap_or_default())
            .map(|g| g + t)
            .max();
        if needed.is_some_and(|d| d > n.valid_through()) {
            out.uncertified.push(t);
            continue;
        }
        let dim_c = if i < res.steps.len() { cochain_basis(res, i, n, t)?.1.len() } else { 0 };
        let r_out = if i < res.steps.len() { coboundary_rank(res, i, n, t)? } else { 0 };
        let r_in = if i > 0 && i - 1 < res.steps.len() { coboundary_rank(res, i - 1, n, t)? } else { 0 };
        out.dims.insert(t, dim_c - r_out - r_in);
    }
    Ok(out)
}

/// `Ext^i(M, N)` on the window's internal range.
pub fn ext_graded_dims<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>, i: usize, window: &Window) -> Result<ExtDims> {
    if i > window.homological_max {
        return Err(Error::WindowExceeded(format!("Ext^{i} beyond homological bound {}", window.homological_max)));
    }
    let res = free_resolution(m, i + 1, window)?;
    ext_from_resolution(&res, n, i, window)
}

/// Per-`i` evidence for an MCM verdict.
#[derive(Clone, Debug, Serialize)]
pub struct McmReport {
    pub is_mcm: bool,
    pub ext: Vec<ExtDims>,
    /// Some degree could not be certified.
    pub inconclusive: bool,
}

/// `Ext^i(M, A) = 0` for `1 <= i <= homological_max` on the window.
pub fn is_mcm<F: Field>(m: &GradedModule<F>, window: &Window) -> Result<McmReport> {
    let a = GradedModule::new(m.algebra().clone(), vec![0], Vec::new(), None)?;
    let res = free_resolution(m, window.homological_max + 1, window)?;
    let mut ext = Vec::new();
    for i in 1..=window.homological_max {
        ext.push(ext_from_resolution(&res, &a, i, window)?);
    }
    let is_mcm = ext.iter().all(|e| e.is_zero());
    let inconclusive = ext.iter().any(|e| !e.uncertified.is_empty() || e.incomplete);
    Ok(McmReport {
        is_mcm,
        ext,
        inconclusive,
    })
}

/// `End(M)_0` as a finite-dimensional algebra in the composition order
/// `a * b = b . a`.
pub fn degree_zero_endomorphisms<F: Field>(m: &GradedModule<F>) -> Result<(HomSpace<F::Elem>, FinDimAlgebra<F>)> {
    let f = m.field().clone();
    let h = hom_space(m, m, 0)?;
    let id = identity_hom(m)?;
    let unit = h.coords(&id);
    let mut table = vec![vec![Vec::new(); h.dim()]; h.dim()];
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            table[i][j] = h.coords(&compose(m, m, m, &h.basis[i], &h.basis[j])?);
        }
    }
    let alg = FinDimAlgebra::from_fn(&f, h.dim(), unit, |i, j| table[i][j].clone());
    Ok((h, alg))
}

/// Whether `End(M)_0` is local.
pub fn is_indecomposable<F: Field>(m: &GradedModule<F>) -> Result<bool> {
    let (_, e) = degree_zero_endomorphisms(m)?;
    if e.dim() == 0 {
        return Ok(false);
    }
    let radical = e.radical()?;
    let top = e.dim() - radical.len();
    if top == 1 {
        return Ok(true);
    }
    match e.analyze() {
        Ok(an) => Ok(an.idempotents.len() == 1),
        Err(Error::NonSplit) => Err(Error::NonSplitResidue(top)),
        Err(err) => Err(err),
    }
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoResult<E> {
    /// A degree-zero map invertible in every checked degree.
    Isomorphic(HomElem<E>),
    /// No invertible map was found; `certified` when the search was
    /// exhaustive or the dimensions differ.
    NotFound { certified: bool, reason: String },
}

impl<E> IsoResult<E> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoResult::Isomorphic(_))
    }

    pub fn is_certified_negative(&self) -> bool {
        matches!(self, IsoResult::NotFound { certified: true, .. })
    }
}

/// Degrees on which modules are compared: from the lowest generator up to
/// the cap, clipped to what both modules know.
pub fn module_degrees<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>, window: &Window) -> (i64, i64) {
    let lo = m.lowest_degree().into_iter().chain(n.lowest_degree()).min().unwrap_or(0);
    let hi = (lo + window.algebra_degree_cap).min(m.valid_through()).min(n.valid_through());
    (lo, hi)
}

/// Search `Hom(M, N)_0` for an isomorphism. Exhaustive over finite fields
/// when the search space has at most `10^4` elements, else `trials` seeded
/// random combinations.
pub fn are_isomorphic_graded<F: Field>(
    m: &GradedModule<F>,
    n: &GradedModule<F>,
    window: &Window,
    trials: usize,
    seed: u64,
) -> Result<IsoResult<F::Elem>> {
    check_same(m, n)?;
    let f = m.field().clone();
    let (lo, hi) = module_degrees(m, n, window);
    let mut active = Vec::new();
    for d in lo..=hi {
        let (a, b) = (m.dim(d)?, n.dim(d)?);
        if a != b {
            return Ok(IsoResult::NotFound {
                certified: true,
                reason: format!("dimensions differ in degree {d}: {a} vs {b}"),
            });
        }
        if a > 0 {
            active.push(d);
        }
    }
    let h = hom_space(m, n, 0)?;
    if active.is_empty() {
        return Ok(IsoResult::Isomorphic(h.element(&f, &[])));
    }
    if h.dim() == 0 {
        return Ok(IsoResult::NotFound {
            certified: true,
            reason: "Hom(M, N)_0 = 0".into(),
        });
    }
    let mats: Vec<Vec<Matrix<F::Elem>>> = active
        .iter()
        .map(|&d| h.basis.iter().map(|b| hom_matrix(m, n, b, d)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let invertible = |c: &[F::Elem]| -> bool {
        mats.iter().all(|ms| {
            let mut acc = Matrix::zeros(&f, ms[0].rows(), ms[0].cols());
            for (x, mm) in c.iter().zip(ms) {
                if !f.is_zero(x) {
                    acc = crate::algebra::add_scaled_matrix(&f, &acc, x, mm);
                }
            }
            rank(&f, &acc) == acc.rows()
        })
    };
    let r = h.dim() as u32;
    let exhaustive = f.size().and_then(|q| q.checked_pow(r)).is_some_and(|n| n <= 10_000);
    if exhaustive {
        let elems = f.elements();
        let q = elems.len();
        let total = q.pow(r);
        for idx in 1..total {
            let mut c = Vec::with_capacity(r as usize);
            let mut x = idx;
            for _ in 0..r {
                c.push(elems[x % q].clone());
                x /= q;
            }
            if invertible(&c) {
                return Ok(IsoResult::Isomorphic(h.element(&f, &c)));
            }
        }
        return Ok(IsoResult::NotFound {
            certified: true,
            reason: format!("no invertible element among all {total} elements of Hom(M, N)_0"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let c: Vec<F::Elem> = (0..r).map(|_| f.random(&mut rng)).collect();
        if invertible(&c) {
            return Ok(IsoResult::Isomorphic(h.element(&f, &c)));
        }
    }
    Ok(IsoResult::NotFound {
        certified: false,
        reason: format!("no invertible element in {trials} random trials"),
    })
}

/// `M_sigma` against `M`.
pub fn nu_stability_check<F: Field>(
    m: &GradedModule<F>,
    sigma: &GradedAutomorphism<F>,
    window: &Window,
    trials: usize,
    seed: u64,
) -> Result<IsoResult<F::Elem>> {
    let twisted = twist_module(m, sigma)?;
    are_isomorphic_graded(&twisted, m, window, trials, seed)
}

/// Whether `M` is a direct summand of a finite sum of shifts of `X`:
/// `id_M` must be a sum of composites `M -> X(s) -> M`.
pub fn in_additive_closure<F: Field>(m: &GradedModule<F>, x: &GradedModule<F>) -> Result<bool> {
    check_same(m, x)?;
    let f = m.field().clone();
    let h = hom_space(m, m, 0)?;
    if h.dim() == 0 {
        return Ok(m.lowest_degree().is_none());
    }
    let id = h.coords(&identity_hom(m)?);
    let mut shifts: Vec<i64> = Vec::new();
    for gx in x.generator_degrees() {
        for gm in m.generator_degrees() {
            let s = gx - gm;
            if !shifts.contains(&s) {
                shifts.push(s);
            }
        }
    }
    let mut span = Subspace::zero(h.dim());
    for s in shifts {
        let to_x = hom_space(m, x, s)?;
        let from_x = hom_space(x, m, -s)?;
        for b in &to_x.basis {
            for a in &from_x.basis {
                span.insert(&f, &h.coords(&compose(m, x, m, b, a)?));
                if span.contains(&f, &id) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(span.contains(&f, &id))
}

/// Evidence for one candidate in a cluster-tilting check.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub name: String,
    pub mcm: bool,
    pub ext_vanishing: bool,
    pub in_add: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    pub n: usize,
    pub x_is_mcm: bool,
    /// `Ext^i(X, X) = 0` for `0 < i < n`; vacuous for `n = 1`.
    pub self_orthogonal: bool,
    pub vacuous: bool,
    pub candidates: Vec<CandidateReport>,
    pub inconclusive: bool,
}

/// Checks the `n`-cluster tilting conditions for `X` against candidates.
pub fn check_cluster_tilting<F: Field>(
    x: &GradedModule<F>,
    n: usize,
    candidates: &[(String, &GradedModule<F>)],
    window: &Window,
) -> Result<ClusterReport> {
    let mcm = is_mcm(x, window)?;
    let mut inconclusive = mcm.inconclusive;
    let orth = |a: &GradedModule<F>, b: &GradedModule<F>| -> Result<(bool, bool)> {
        if n <= 1 {
            return Ok((true, false));
        }
        let res = free_resolution(a, n, window)?;
        let mut ok = true;
        let mut inc = false;
        for i in 1..n {
            let e = ext_from_resolution(&res, b, i, window)?;
            ok &= e.is_zero();
            inc |= !e.uncertified.is_empty() || e.incomplete;
        }
        Ok((ok, inc))
    };
    let (self_orthogonal, inc) = orth(x, x)?;
    inconclusive |= inc;
    let mut reports = Vec::new();
    for (name, m) in candidates {
        let mm = is_mcm(m, window)?;
        inconclusive |= mm.inconclusive;
        let (o1, i1) = orth(x, m)?;
        let (o2, i2) = orth(m, x)?;
        inconclusive |= i1 || i2;
        reports.push(CandidateReport {
            name: name.clone(),
            mcm: mm.is_mcm,
            ext_vanishing: o1 && o2,
            in_add: in_additive_closure(m, x)?,
        });
    }
    Ok(ClusterReport {
        n,
        x_is_mcm: mcm.is_mcm,
        self_orthogonal,
        vacuous: n <= 1,
        candidates: reports,
        inconclusive,
    })
}

/// Per-degree evidence for the evaluation map `Hom(X, M) (x)_B X -> M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalDegree {
    pub degree: i64,
    pub tensor_dim: usize,
    pub image_dim: usize,
    pub module_dim: usize,
    pub iso: bool,
}

/// A subspace with a fixed basis and coordinate extraction.
struct Block<E> {
    vecs: Vec<Vec<E>>,
    coords: BasisCoords<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Block<E> {
    fn new<F: Field<Elem = E>>(f: &F, n: usize, spanning: &[Vec<E>]) -> Self {
        let vecs = Subspace::spanned_by(f, n, spanning).basis().to_vec();
        let coords = BasisCoords::new(f, n, &vecs).expect("echelon basis is independent");
        Block { vecs, coords }
    }

    fn len(&self) -> usize {
        self.vecs.len()
    }
}

/// Computes `(Hom(X, M) (x)_B X)_d` for `d` in `lo..=hi` and checks that
/// evaluation is bijective.
///
/// Splitting by the primitive idempotents `e_i` of `B_0` first gives
/// `V_d = (+)_i (+)_{a+b=d} Hom(X, M)_a e_i (x) e_i X_b`; the remaining
/// relations come from `e_i g e_j` for algebra generators `g` of `B`.
pub fn eval_iso_check<F: Field>(
    end: &EndomorphismAlgebra<F>,
    has_free_summand: bool,
    m: &GradedModule<F>,
    lo: i64,
    hi: i64,
) -> Result<Vec<EvalDegree>> {
    if !has_free_summand {
        return Err(Error::HypothesisViolated("X must contain A as a direct summand".into()));
    }
    let x = end.module();
    check_same(x, m)?;
    let f = x.field().clone();
    let b = end.algebra();
    if hi > b.valid_through() {
        return Err(Error::WindowExceeded(format!(
            "evaluation through degree {hi} needs End(X) through {hi}, known through {}",
            b.valid_through()
        )));
    }
    let xlo = x.lowest_degree().unwrap_or(0);
    let xmax = x.generator_degrees().iter().copied().max().unwrap_or(0);
    let Some(mlo) = m.lowest_degree() else {
        return Ok((lo..=hi)
            .map(|d| EvalDegree {
                degree: d,
                tensor_dim: 0,
                image_dim: 0,
                module_dim: 0,
                iso: true,
            })
            .collect());
    };
    let idem = b
        .degree_zero()?
        .idempotents
        .iter()
        .map(|e| end.element(0, e))
        .collect::<Result<Vec<_>>>()?;
    let a_lo = mlo - xmax;
    let mut homs: BTreeMap<i64, HomSpace<F::Elem>> = BTreeMap::new();
    for a in a_lo..=hi - xlo {
        homs.insert(a, hom_space(x, m, a)?);
    }
    // Hom(X, M)_a e_i, in coordinates of Hom(X, M)_a.
    let mut hom_blocks: BTreeMap<(usize, i64), Block<F::Elem>> = BTreeMap::new();
    for (&a, h) in &homs {
        for (i, e) in idem.iter().enumerate() {
            let vecs = h
                .basis
                .iter()
                .map(|g| Ok(h.coords(&compose(x, x, m, e, g)?)))
                .collect::<Result<Vec<_>>>()?;
            hom_blocks.insert((i, a), Block::new(&f, h.dim(), &vecs));
        }
    }
    // e_i X_b.
    let mut x_blocks: BTreeMap<(usize, i64), Block<F::Elem>> = BTreeMap::new();
    for bdeg in xlo..=hi - a_lo {
        let n = x.dim(bdeg)?;
        for (i, e) in idem.iter().enumerate() {
            let mm = hom_matrix(x, x, e, bdeg)?;
            x_blocks.insert((i, bdeg), Block::new(&f, n, &mm.columns()));
        }
    }
    // Relation maps beta = e_i . g . e_j (as maps), sending e_j X into e_i X.
    let mut betas: Vec<(usize, usize, i64, HomElem<F::Elem>)> = Vec::new();
    for (c, g) in b.generators() {
        if c > hi - lo {
            continue;
        }
        let gm = end.element(c, &g)?;
        for (i, ei) in idem.iter().enumerate() {
            for (j, ej) in idem.iter().enumerate() {
                let beta = compose(x, x, x, &compose(x, x, x, ej, &gm)?, ei)?;
                if !hom_is_zero(&f, &beta) {
                    betas.push((i, j, c, beta));
                }
            }
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        let mut layout: BTreeMap<(usize, i64), (usize, usize)> = BTreeMap::new();
        let mut total = 0;
        for i in 0..idem.len() {
            for a in a_lo..=d - xlo {
                let (ha, xb) = (hom_blocks[&(i, a)].len(), x_blocks[&(i, d - a)].len());
                if ha * xb > 0 {
                    layout.insert((i, a), (total, xb));
                    total += ha * xb;
                }
            }
        }
        let md = m.dim(d)?;
        let mut ev_cols = Vec::with_capacity(total);
        for &(i, a) in layout.keys() {
            let xv = &x_blocks[&(i, d - a)].vecs;
            for hv in &hom_blocks[&(i, a)].vecs {
                let fmat = hom_matrix(x, m, &homs[&a].element(&f, hv), d - a)?;
                for v in xv {
                    ev_cols.push(mat_vec(&f, &fmat, v));
                }
            }
        }
        let image_dim = if total == 0 { 0 } else { rank(&f, &Matrix::from_columns(md, &ev_cols, f.zero())) };
        // Relations lie in the kernel of evaluation, so their span can grow
        // at most to total - image_dim.
        let bound = total - image_dim;
        let mut rel = Subspace::zero(total);
        'search: for (i, j, c, beta) in &betas {
            for a in a_lo..=d - c - xlo {
                let bdeg = d - c - a;
                let xs = &x_blocks[&(*j, bdeg)];
                let fs = &hom_blocks[&(*i, a)];
                if xs.len() == 0 || fs.len() == 0 {
                    continue;
                }
                let beta_mat = hom_matrix(x, x, beta, bdeg)?;
                let beta_x: Vec<Vec<F::Elem>> = xs
                    .vecs
                    .iter()
                    .map(|v| x_blocks[&(*i, bdeg + c)].coords.coords(&f, &mat_vec(&f, &beta_mat, v)).expect("e_i X"))
                    .collect();
                for (p, hv) in fs.vecs.iter().enumerate() {
                    let fe = homs[&a].element(&f, hv);
                    let fb = compose(x, x, m, beta, &fe)?;
                    let fb_coords = hom_blocks[&(*j, a + c)]
                        .coords
                        .coords(&f, &homs[&(a + c)].coords(&fb))
                        .expect("Hom e_j");
                    for q in 0..xs.len() {
                        let mut v = vec![f.zero(); total];
                        // (f . beta) (x) x
                        if let Some(&(off, xb)) = layout.get(&(*j, a + c)) {
                            for (r, cf) in fb_coords.iter().enumerate() {
                                v[off + r * xb + q] = cf.clone();
                            }
                        }
                        // - f (x) beta(x)
                        if let Some(&(off, xb)) = layout.get(&(*i, a)) {
                            for (r, cf) in beta_x[q].iter().enumerate() {
                                let idx = off + p * xb + r;
                                v[idx] = f.sub(&v[idx], cf);
                            }
                        }
                        rel.insert(&f, &v);
                        if rel.dim() == bound {
                            break 'search;
                        }
                    }
                }
            }
        }
        let tensor_dim = total - rel.dim();
        out.push(EvalDegree {
            degree: d,
            tensor_dim,
            image_dim,
            module_dim: md,
            iso: tensor_dim == md && image_dim == md,
        });
    }
    Ok(out)
}
