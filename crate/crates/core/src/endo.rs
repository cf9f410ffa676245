//! Finite-dimensional algebras (radical, primitive idempotents, Gabriel
//! quiver) and the graded endomorphism algebra `End_A(X)` with its
//! regularity checks.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{GradedAlgebra, PresentedAlgebra, TabulatedAlgebra};
use crate::error::{Error, Result};
use crate::gmodule::{degree_zero_module, GradedModule};
use crate::homology::{
    ext_from_resolution, free_resolution, hom_matrix, hom_space, identity_hom, ExtDims, HomElem, HomSpace, Window,
};
use crate::linalg::{kernel, mat_vec, solve, unit_vec, vec_add_scaled, Matrix, Subspace};
use crate::scalars::Field;

/// A finite-dimensional algebra given by structure constants on a basis.
#[derive(Clone, Debug)]
pub struct FinDimAlgebra<F: Field> {
    field: F,
    dim: usize,
    /// `table[i][j]` = coordinates of `b_i * b_j`.
    table: Vec<Vec<Vec<F::Elem>>>,
    unit: Vec<F::Elem>,
}

/// Result of [`radical_and_idempotents`].
#[derive(Clone, Debug)]
pub struct Analysis<E> {
    pub radical: Vec<Vec<E>>,
    pub radical_squared_dim: usize,
    /// Primitive orthogonal idempotents summing to the identity, ordered by
    /// first nonzero coordinate.
    pub idempotents: Vec<Vec<E>>,
    /// For each idempotent, the index of its simple block (isomorphic
    /// projectives share a block).
    pub block_of: Vec<usize>,
}

impl<F: Field> FinDimAlgebra<F> {
    pub fn from_fn(field: &F, dim: usize, unit: Vec<F::Elem>, mut product: impl FnMut(usize, usize) -> Vec<F::Elem>) -> Self {
        let table = (0..dim).map(|i| (0..dim).map(|j| product(i, j)).collect()).collect();
        FinDimAlgebra {
            field: field.clone(),
            dim,
            table,
            unit,
        }
    }

    /// `k[t]/(m(t))` with basis `1, t, ..., t^(n-1)`; `m` monic, coefficients
    /// low to high, length `n + 1`.
    pub fn truncated_polynomial(field: &F, m: &[F::Elem]) -> Self {
        let n = m.len() - 1;
        let reduce = |mut c: Vec<F::Elem>| -> Vec<F::Elem> {
            for k in (n..c.len()).rev() {
                let lead = c[k].clone();
                if field.is_zero(&lead) {
                    continue;
                }
                for (i, mi) in m.iter().enumerate().take(n) {
                    let t = field.mul(&lead, mi);
                    c[k - n + i] = field.sub(&c[k - n + i], &t);
                }
                c[k] = field.zero();
            }
            c.truncate(n);
            c
        };
        Self::from_fn(field, n, unit_vec(field, n, 0), |i, j| {
            let mut c = vec![field.zero(); 2 * n];
            c[i + j] = field.one();
            reduce(c)
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[F::Elem] {
        &self.unit
    }

    pub fn product(&self, i: usize, j: usize) -> &[F::Elem] {
        &self.table[i][j]
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                vec_add_scaled(f, &mut out, &f.mul(x, y), &self.table[i][j]);
            }
        }
        out
    }

    /// Matrix of `x -> a x`.
    pub fn left_matrix(&self, a: &[F::Elem]) -> Matrix<F::Elem> {
        let cols: Vec<_> = (0..self.dim).map(|j| self.mul(a, &unit_vec(&self.field, self.dim, j))).collect();
        Matrix::from_columns(self.dim, &cols, self.field.zero())
    }

    /// Exhaustive associativity and unit check on basis triples.
    pub fn check_associative(&self) -> Result<()> {
        let f = &self.field;
        for i in 0..self.dim {
            let bi = unit_vec(f, self.dim, i);
            if self.mul(&self.unit, &bi) != bi || self.mul(&bi, &self.unit) != bi {
                return Err(Error::NotAssociative(format!("unit fails on basis element {i}")));
            }
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let left = self.mul(&self.table[i][j], &unit_vec(f, self.dim, k));
                    let right = self.mul(&bi, &self.table[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative(format!("basis triple ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Jacobson radical as the kernel of the trace form
    /// `(a, b) -> Tr(x -> a b x)`; valid when the characteristic is zero or
    /// exceeds the dimension.
    pub fn radical(&self) -> Result<Vec<Vec<F::Elem>>> {
        let f = &self.field;
        let p = f.characteristic();
        if p != 0 && p <= self.dim as u64 {
            return Err(Error::FieldTooSmall {
                characteristic: p,
                dim: self.dim,
            });
        }
        let traces: Vec<Vec<F::Elem>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let m = self.left_matrix(&self.table[i][j]);
                        let mut t = f.zero();
                        for k in 0..self.dim {
                            t = f.add(&t, m.get(k, k));
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        let form = Matrix::from_rows(self.dim, &traces);
        Ok(kernel(f, &form))
    }

    /// Full analysis: radical, its square, primitive idempotents, blocks.
    pub fn analyze(&self) -> Result<Analysis<F::Elem>> {
        radical_and_idempotents(self)
    }
}

fn span_products<F: Field>(alg: &FinDimAlgebra<F>, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Subspace<F::Elem> {
    let f = alg.field();
    let mut s = Subspace::zero(alg.dim());
    for x in a {
        for y in b {
            s.insert(f, &alg.mul(x, y));
        }
    }
    s
}

/// Radical (trace-form kernel) and a complete set of primitive orthogonal
/// idempotents lifted from the semisimple quotient.
pub fn radical_and_idempotents<F: Field>(alg: &FinDimAlgebra<F>) -> Result<Analysis<F::Elem>> {
    let f = alg.field().clone();
    let n = alg.dim();
    let radical = alg.radical()?;
    let rad_space = Subspace::spanned_by(&f, n, &radical);
    // The radical must be a nilpotent ideal.
    let mut power = rad_space.clone();
    let mut steps = 0;
    while power.dim() > 0 {
        power = span_products(alg, power.basis(), rad_space.basis());
        steps += 1;
        if steps > n + 1 {
            return Err(Error::NotAssociative("trace-form radical is not nilpotent".into()));
        }
    }
    let rad2 = span_products(alg, rad_space.basis(), rad_space.basis());

    // Split the semisimple quotient inside `alg`, working modulo the radical.
    let quotient = Quotient {
        alg,
        rad: &rad_space,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut finished = Vec::new();
    let mut pending = vec![alg.unit().to_vec()];
    while let Some(e) = pending.pop() {
        match quotient.split(&e, &mut rng)? {
            None => finished.push(e),
            Some((a, b)) => {
                pending.push(a);
                pending.push(b);
            }
        }
    }

    // Lift: sequentially in corners of the complement of the lifted ones.
    let mut lifted: Vec<Vec<F::Elem>> = Vec::new();
    let mut rest = alg.unit().to_vec();
    let count = finished.len();
    for (idx, ebar) in finished.iter().enumerate() {
        if idx + 1 == count {
            lifted.push(rest.clone());
            break;
        }
        let x = alg.mul(&alg.mul(&rest, ebar), &rest);
        let e = lift_idempotent(alg, x);
        let mut r = rest.clone();
        vec_add_scaled(&f, &mut r, &f.from_i64(-1), &e);
        rest = r;
        lifted.push(e);
    }
    if lifted.is_empty() {
        // Zero algebra.
        return Ok(Analysis {
            radical,
            radical_squared_dim: 0,
            idempotents: Vec::new(),
            block_of: Vec::new(),
        });
    }
    lifted.sort_by_key(|e| {
        let first = e.iter().position(|c| !f.is_zero(c)).unwrap_or(usize::MAX);
        (first, e.iter().map(|c| f.to_i64(c).unwrap_or(0)).collect::<Vec<_>>())
    });

    // Blocks: e_i and e_j are in one block iff e_i A e_j is not inside rad.
    let mut block_of = vec![usize::MAX; lifted.len()];
    let mut blocks = 0;
    for i in 0..lifted.len() {
        if block_of[i] != usize::MAX {
            continue;
        }
        block_of[i] = blocks;
        for j in i + 1..lifted.len() {
            if block_of[j] == usize::MAX && !corner_in_radical(alg, &lifted[i], &lifted[j], &rad_space) {
                block_of[j] = blocks;
            }
        }
        blocks += 1;
    }
    Ok(Analysis {
        radical: rad_space.basis().to_vec(),
        radical_squared_dim: rad2.dim(),
        idempotents: lifted,
        block_of,
    })
}

fn corner_in_radical<F: Field>(alg: &FinDimAlgebra<F>, e1: &[F::Elem], e2: &[F::Elem], rad: &Subspace<F::Elem>) -> bool {
    let f = alg.field();
    (0..alg.dim()).all(|k| {
        let x = alg.mul(&alg.mul(e1, &unit_vec(f, alg.dim(), k)), e2);
        rad.contains(f, &x)
    })
}

/// `e <- 3e^2 - 2e^3` until idempotent; converges because the defect is
/// nilpotent.
fn lift_idempotent<F: Field>(alg: &FinDimAlgebra<F>, mut e: Vec<F::Elem>) -> Vec<F::Elem> {
    let f = alg.field();
    let three = f.from_i64(3);
    let minus_two = f.from_i64(-2);
    loop {
        let e2 = alg.mul(&e, &e);
        if e2 == e {
            return e;
        }
        let e3 = alg.mul(&e2, &e);
        let mut next = vec![f.zero(); alg.dim()];
        vec_add_scaled(f, &mut next, &three, &e2);
        vec_add_scaled(f, &mut next, &minus_two, &e3);
        e = next;
    }
}

struct Quotient<'a, F: Field> {
    alg: &'a FinDimAlgebra<F>,
    rad: &'a Subspace<F::Elem>,
}

impl<F: Field> Quotient<'_, F> {
    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let mut v = v.to_vec();
        self.rad.reduce(self.alg.field(), &mut v);
        v
    }

    fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.reduce(&self.alg.mul(a, b))
    }

    /// Splits an idempotent `e` (mod radical) into two nonzero orthogonal
    /// idempotents, or returns `None` when `e` is primitive.
    #[allow(clippy::type_complexity)]
    fn split(&self, e: &[F::Elem], rng: &mut ChaCha8Rng) -> Result<Option<(Vec<F::Elem>, Vec<F::Elem>)>> {
        let f = self.alg.field();
        let n = self.alg.dim();
        // Corner eAe modulo the radical.
        let mut corner = Subspace::zero(n);
        for k in 0..n {
            let x = self.mul(&self.mul(e, &unit_vec(f, n, k)), e);
            corner.insert(f, &x);
        }
        let basis = corner.basis().to_vec();
        if basis.len() <= 1 {
            return Ok(None);
        }
        let mut tries = Vec::new();
        for b in &basis {
            tries.push(b.clone());
        }
        for _ in 0..64 {
            let mut a = vec![f.zero(); n];
            for b in &basis {
                vec_add_scaled(f, &mut a, &f.random(rng), b);
            }
            tries.push(a);
        }
        for a in tries {
            let a = self.reduce(&a);
            let m = self.min_poly(e, &a);
            if m.len() <= 2 {
                continue;
            }
            if let Some(u) = splitting_polynomial(f, &m) {
                let idem = self.eval(e, &a, &u);
                let mut other = e.to_vec();
                vec_add_scaled(f, &mut other, &f.from_i64(-1), &idem);
                let other = self.reduce(&other);
                if idem.iter().any(|c| !f.is_zero(c)) && other.iter().any(|c| !f.is_zero(c)) {
                    return Ok(Some((idem, other)));
                }
            }
        }
        Err(Error::NonSplit)
    }

    /// Minimal polynomial of `a` in the corner with identity `e`, monic,
    /// coefficients low to high.
    fn min_poly(&self, e: &[F::Elem], a: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.alg.field();
        let n = self.alg.dim();
        let mut powers = vec![self.reduce(e)];
        loop {
            let next = self.mul(powers.last().expect("nonempty"), a);
            let m = Matrix::from_columns(n, &powers, f.zero());
            if let Some(c) = solve(f, &m, &next) {
                let mut poly: Vec<F::Elem> = c.iter().map(|x| f.neg(x)).collect();
                poly.push(f.one());
                return poly;
            }
            powers.push(next);
        }
    }

    fn eval(&self, e: &[F::Elem], a: &[F::Elem], u: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.alg.field();
        let mut acc = vec![f.zero(); self.alg.dim()];
        for c in u.iter().rev() {
            acc = self.mul(&acc, a);
            vec_add_scaled(f, &mut acc, c, e);
        }
        self.reduce(&acc)
    }
}

/// For a monic `m` with a root `r` and another coprime factor, returns `u`
/// with `u = 1 mod (t - r)^k` and `u = 0 mod m / (t - r)^k`.
fn splitting_polynomial<F: Field>(f: &F, m: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let roots = poly_roots(f, m);
    let r = roots.first()?;
    let lin = vec![f.neg(r), f.one()];
    let mut p = vec![f.one()];
    let mut rest = m.to_vec();
    loop {
        let (q, rem) = poly_divmod(f, &rest, &lin);
        if rem.iter().all(|c| f.is_zero(c)) {
            rest = q;
            p = poly_mul(f, &p, &lin);
        } else {
            break;
        }
    }
    if rest.len() <= 1 {
        return None;
    }
    // s*p + t*rest = 1; u = t*rest.
    let (g, _s, t) = poly_xgcd(f, &p, &rest);
    debug_assert_eq!(g.len(), 1);
    let u = poly_mul(f, &t, &rest);
    let (_, u) = poly_divmod(f, &u, m);
    Some(u)
}

fn trim<F: Field>(f: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
    while p.len() > 1 && f.is_zero(p.last().expect("nonempty")) {
        p.pop();
    }
    if p.is_empty() {
        p.push(f.zero());
    }
    p
}

fn poly_mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            f.mul_add_assign(&mut out[i + j], x, y);
        }
    }
    trim(f, out)
}

fn poly_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
            f.sub(&x, &y)
        })
        .collect();
    trim(f, out)
}

fn poly_divmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let b = trim(f, b.to_vec());
    let mut r = trim(f, a.to_vec());
    let lead_inv = f.inv(b.last().expect("nonempty")).expect("nonzero divisor");
    if r.len() < b.len() {
        return (vec![f.zero()], r);
    }
    let mut q = vec![f.zero(); r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + b.len() - 1], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            let t = f.mul(&c, bi);
            r[k + i] = f.sub(&r[k + i], &t);
        }
        q[k] = c;
    }
    (trim(f, q), trim(f, r))
}

#[allow(clippy::type_complexity)]
fn poly_xgcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], vec![f.zero()]);
    let (mut t0, mut t1) = (vec![f.zero()], vec![f.one()]);
    while !(r1.len() == 1 && f.is_zero(&r1[0])) {
        let (q, r) = poly_divmod(f, &r0, &r1);
        let s = poly_sub(f, &s0, &poly_mul(f, &q, &s1));
        let t = poly_sub(f, &t0, &poly_mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = f.inv(r0.last().expect("nonempty")).expect("nonzero gcd");
    let scale = |p: Vec<F::Elem>| p.iter().map(|c| f.mul(c, &inv)).collect::<Vec<_>>();
    (scale(r0), scale(s0), scale(t0))
}

/// Roots in the base field: exhaustive for prime fields; rational roots of
/// moderate height for the rationals.
fn poly_roots<F: Field>(f: &F, m: &[F::Elem]) -> Vec<F::Elem> {
    let eval = |x: &F::Elem| {
        let mut acc = f.zero();
        for c in m.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    };
    let candidates: Vec<F::Elem> = if f.size().is_some() {
        f.elements()
    } else {
        let mut c = Vec::new();
        for num in -64i64..=64 {
            for den in 1i64..=16 {
                let v = f.div(&f.from_i64(num), &f.from_i64(den)).expect("nonzero");
                if !c.contains(&v) {
                    c.push(v);
                }
            }
        }
        c
    };
    candidates.into_iter().filter(|x| f.is_zero(&eval(x))).collect()
}

/// A quiver with named vertices and arrow multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub mult: usize,
}

impl Quiver {
    pub fn num_arrows(&self) -> usize {
        self.arrows.iter().map(|a| a.mult).sum()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0; n]; n];
        for a in &self.arrows {
            m[a.src][a.dst] += a.mult;
        }
        m
    }

    /// The quiver with every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    src: a.dst,
                    dst: a.src,
                    mult: a.mult,
                })
                .collect(),
        }
    }

    /// Isomorphism up to vertex relabelling: vertices are first bucketed
    /// by (in-degree, out-degree), then permutations within buckets are
    /// searched.
    pub fn is_isomorphic(&self, other: &Quiver) -> bool {
        let n = self.vertices.len();
        if n != other.vertices.len() || self.num_arrows() != other.num_arrows() {
            return false;
        }
        let a = self.adjacency();
        let b = other.adjacency();
        let sig = |m: &Vec<Vec<usize>>, v: usize| {
            let out: usize = m[v].iter().sum();
            let inn: usize = m.iter().map(|r| r[v]).sum();
            (inn, out, m[v][v])
        };
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn search(
            v: usize,
            n: usize,
            a: &[Vec<usize>],
            b: &[Vec<usize>],
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            ok: &dyn Fn(usize, usize) -> bool,
        ) -> bool {
            if v == n {
                return true;
            }
            for w in 0..n {
                if used[w] || !ok(v, w) {
                    continue;
                }
                if (0..v).any(|u| a[u][v] != b[perm[u]][w] || a[v][u] != b[w][perm[u]]) {
                    continue;
                }
                perm[v] = w;
                used[w] = true;
                if search(v + 1, n, a, b, perm, used, ok) {
                    return true;
                }
                used[w] = false;
            }
            false
        }
        let ok = |v: usize, w: usize| sig(&a, v) == sig(&b, w);
        search(0, n, &a, &b, &mut perm, &mut used, &ok)
    }

    /// Whether all arrows end in one vertex that is the target of exactly
    /// `sources` distinct single arrows and no other arrows exist.
    pub fn is_star_into_sink(&self, sources: usize) -> bool {
        let n = self.vertices.len();
        if n != sources + 1 {
            return false;
        }
        let mut star = Quiver {
            vertices: self.vertices.clone(),
            arrows: Vec::new(),
        };
        for s in 0..sources {
            star.arrows.push(Arrow {
                src: s,
                dst: sources,
                mult: 1,
            });
        }
        self.is_isomorphic(&star)
    }
}

/// Gabriel quiver: one vertex per block of primitive idempotents; arrows
/// `i -> j` counted by `dim e_j (rad/rad^2) e_i`.
pub fn gabriel_quiver<F: Field>(alg: &FinDimAlgebra<F>) -> Result<Quiver> {
    let an = radical_and_idempotents(alg)?;
    gabriel_quiver_from(alg, &an)
}

pub fn gabriel_quiver_from<F: Field>(alg: &FinDimAlgebra<F>, an: &Analysis<F::Elem>) -> Result<Quiver> {
    let f = alg.field();
    let n = alg.dim();
    let rad = Subspace::spanned_by(f, n, &an.radical);
    let rad2 = span_products(alg, rad.basis(), rad.basis());
    let blocks = an.block_of.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let reps: Vec<&Vec<F::Elem>> = (0..blocks)
        .map(|b| &an.idempotents[an.block_of.iter().position(|&x| x == b).expect("block")])
        .collect();
    let mut arrows = Vec::new();
    for (i, ei) in reps.iter().enumerate() {
        for (j, ej) in reps.iter().enumerate() {
            // e_j rad e_i modulo e_j rad^2 e_i.
            let mut top = Subspace::zero(n);
            let mut low = Subspace::zero(n);
            for r in rad.basis() {
                top.insert(f, &alg.mul(&alg.mul(ej, r), ei));
            }
            for r in rad2.basis() {
                low.insert(f, &alg.mul(&alg.mul(ej, r), ei));
            }
            let mult = top.dim() - low.dim();
            if mult > 0 {
                arrows.push(Arrow { src: i, dst: j, mult });
            }
        }
    }
    Ok(Quiver {
        vertices: (0..blocks).map(|i| format!("e{i}")).collect(),
        arrows,
    })
}

/// `B = End_A(X) = (+)_i Hom(X, X(i))` on a window of internal degrees.
///
/// The algebra structure uses the diagrammatic order `a * b = b . a`
/// (first `a`, then `b`), so `X` is a right `B`-module and arrows of the
/// Gabriel quiver of `B_0` follow the direction of the maps.
#[derive(Debug)]
pub struct EndomorphismAlgebra<F: Field> {
    module: GradedModule<F>,
    lo: i64,
    hi: i64,
    pieces: BTreeMap<i64, HomSpace<F::Elem>>,
    algebra: Arc<TabulatedAlgebra<F>>,
}

impl<F: Field> EndomorphismAlgebra<F> {
    pub fn module(&self) -> &GradedModule<F> {
        &self.module
    }

    pub fn algebra(&self) -> &Arc<TabulatedAlgebra<F>> {
        &self.algebra
    }

    /// The same algebra behind the trait object used for modules over it.
    pub fn graded_algebra(&self) -> Arc<dyn GradedAlgebra<F>> {
        self.algebra.clone()
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn piece(&self, d: i64) -> Option<&HomSpace<F::Elem>> {
        self.pieces.get(&d)
    }

    /// `(degree, dim B_degree)` over the whole window, negatives included.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.pieces.iter().map(|(d, h)| (*d, h.dim())).collect()
    }

    /// The homomorphism with coordinates `c` in `B_d`.
    pub fn element(&self, d: i64, c: &[F::Elem]) -> Result<HomElem<F::Elem>> {
        let h = self
            .pieces
            .get(&d)
            .ok_or(Error::DegreeBeyondTruncation { degree: d, bound: self.hi })?;
        Ok(h.element(self.module.field(), c))
    }
}

/// Builds `Hom(X, X(i))` for `lo <= i <= hi` and tabulates products of the
/// non-negative part.
pub fn endomorphism_algebra<F: Field>(x: &GradedModule<F>, lo: i64, hi: i64) -> Result<EndomorphismAlgebra<F>> {
    if hi < 0 {
        return Err(Error::WindowExceeded("End(X) needs a window reaching degree 0".into()));
    }
    let f = x.field().clone();
    let mut pieces = BTreeMap::new();
    for i in lo.min(0)..=hi {
        pieces.insert(i, hom_space(x, x, i)?);
    }
    let dims: Vec<usize> = (0..=hi).map(|d| pieces[&d].dim()).collect();
    let labels = (0..=hi)
        .map(|d| (0..dims[d as usize]).map(|i| format!("b{d}_{i}")).collect())
        .collect();
    let unit = pieces[&0].coords(&identity_hom(x)?);
    // Matrices of basis maps on the degrees where generator images live.
    let gen_degs: Vec<i64> = {
        let mut g = x.generator_degrees().to_vec();
        g.sort_unstable();
        g.dedup();
        g
    };
    let mut mats: HashMap<(i64, usize, i64), Matrix<F::Elem>> = HashMap::new();
    for e in 0..=hi {
        for (j, b) in pieces[&e].basis.iter().enumerate() {
            for d in 0..=hi - e {
                for g in &gen_degs {
                    mats.insert((e, j, g + d), hom_matrix(x, x, b, g + d)?);
                }
            }
        }
    }
    let gens = x.generator_degrees().to_vec();
    let algebra = TabulatedAlgebra::from_products(&f, dims, labels, unit, |d, i, e, j| {
        let a = &pieces[&d].basis[i];
        let images = gens
            .iter()
            .zip(&a.images)
            .map(|(g, v)| mat_vec(&f, &mats[&(e, j, g + d)], v))
            .collect();
        Ok(pieces[&(d + e)].coords(&HomElem { shift: d + e, images }))
    })?;
    Ok(EndomorphismAlgebra {
        module: x.clone(),
        lo,
        hi,
        pieces,
        algebra: Arc::new(algebra),
    })
}

/// Every negative-degree piece in the window is zero.
pub fn check_nonnegative<F: Field>(b: &EndomorphismAlgebra<F>) -> bool {
    b.pieces.range(..0).all(|(_, h)| h.dim() == 0)
}

/// `B_0` with the composition product.
pub fn degree_zero_algebra<F: Field>(b: &EndomorphismAlgebra<F>) -> FinDimAlgebra<F> {
    b.algebra.degree_zero_algebra()
}

/// Ext evidence for a regularity or Gorenstein check.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub d: usize,
    pub ell: i64,
    pub ext: Vec<ExtDims>,
    /// Expected total dimension of `Ext^d`, concentrated in degree `-ell`.
    pub expected_top_dim: usize,
    /// Homological length of the resolution if it ended within the window.
    pub terminated_at: Option<usize>,
    pub pass: bool,
    /// The window was too small to decide.
    pub inconclusive: bool,
}

fn ext_pattern_ok(ext: &[ExtDims], d: usize, ell: i64, top_dim: usize) -> bool {
    ext.iter().all(|e| {
        if e.i == d {
            e.support() == vec![(-ell, top_dim)]
        } else {
            e.is_zero()
        }
    })
}

/// `B_0` as a right `B`-module, `B_{>=1}` acting by zero, resolved over
/// `B`: `Ext^i_B(B_0, B) = 0` for `i < d` and `Ext^d_B(B_0, B)` equal to
/// `dim B_0` in degree `-ell`.
pub fn as_regular_over_r_check<F: Field>(
    b: &Arc<dyn GradedAlgebra<F>>,
    d: usize,
    ell: i64,
    window: &Window,
) -> Result<RegularityReport> {
    let top = d.min(window.homological_max);
    let b0 = degree_zero_module(b.clone())?;
    let bb = GradedModule::new(b.clone(), vec![0], Vec::new(), None)?;
    let res = free_resolution(&b0, top + 1, window)?;
    let mut ext = Vec::new();
    for i in 0..=top {
        ext.push(ext_from_resolution(&res, &bb, i, window)?);
    }
    let dim0 = b.dim(0)?;
    let terminated_at = if res.terminated { Some(res.len() - 1) } else { None };
    let inconclusive = top < d || ext.iter().any(|e| !e.uncertified.is_empty() && !e.is_zero()) || res.incomplete;
    let pass = !inconclusive && ext_pattern_ok(&ext, d, ell, dim0) && terminated_at == Some(d);
    Ok(RegularityReport {
        d,
        ell,
        ext,
        expected_top_dim: dim0,
        terminated_at,
        pass,
        inconclusive,
    })
}

/// Gorenstein evidence for both sides of a connected algebra.
#[derive(Clone, Debug, Serialize)]
pub struct GorensteinReport {
    pub right: RegularityReport,
    pub left: RegularityReport,
    pub pass: bool,
    pub inconclusive: bool,
}

fn gorenstein_side<F: Field>(a: &Arc<PresentedAlgebra<F>>, d: usize, ell: i64, window: &Window) -> Result<RegularityReport> {
    let dyn_a: Arc<dyn GradedAlgebra<F>> = a.clone();
    let top = (d + 1).min(window.homological_max);
    let k = degree_zero_module(dyn_a.clone())?;
    let free = GradedModule::new(dyn_a, vec![0], Vec::new(), None)?;
    let res = free_resolution(&k, top + 1, window)?;
    let mut ext = Vec::new();
    for i in 0..=top {
        ext.push(ext_from_resolution(&res, &free, i, window)?);
    }
    let inconclusive = top < d || ext.iter().any(|e| !e.uncertified.is_empty() || e.incomplete);
    let pass = !inconclusive && ext_pattern_ok(&ext, d, ell, 1);
    Ok(RegularityReport {
        d,
        ell,
        ext,
        expected_top_dim: 1,
        terminated_at: if res.terminated { Some(res.len() - 1) } else { None },
        pass,
        inconclusive,
    })
}

/// `Ext^i(k, A)` on both sides for `0 <= i <= min(d + 1, homological_max)`:
/// zero except `i = d`, one-dimensional in degree `-ell`.
pub fn as_gorenstein_check<F: Field>(
    a: &Arc<PresentedAlgebra<F>>,
    op: &Arc<PresentedAlgebra<F>>,
    d: usize,
    ell: i64,
    window: &Window,
) -> Result<GorensteinReport> {
    let dim0 = a.dim(0)?;
    if dim0 != 1 {
        return Err(Error::NotConnected(dim0));
    }
    let right = gorenstein_side(a, d, ell, window)?;
    let left = gorenstein_side(op, d, ell, window)?;
    let inconclusive = right.inconclusive || left.inconclusive;
    Ok(GorensteinReport {
        pass: right.pass && left.pass,
        inconclusive,
        right,
        left,
    })
}

#[cfg(test)]
mod findim_tests {
    use super::*;
    use crate::scalars::PrimeField;

    fn gf13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    /// Upper triangular 2x2 matrices: basis e11, e12, e22.
    fn upper_triangular(f: &PrimeField) -> FinDimAlgebra<PrimeField> {
        let idx = [(0, 0), (0, 1), (1, 1)];
        FinDimAlgebra::from_fn(f, 3, vec![1, 0, 1], |i, j| {
            let (a, b) = idx[i];
            let (c, d) = idx[j];
            let mut v = vec![0; 3];
            if b == c {
                v[idx.iter().position(|&p| p == (a, d)).unwrap()] = 1;
            }
            v
        })
    }

    #[test]
    fn upper_triangular_analysis() {
        let f = gf13();
        let alg = upper_triangular(&f);
        alg.check_associative().unwrap();
        let an = radical_and_idempotents(&alg).unwrap();
        assert_eq!(an.radical.len(), 1);
        assert_eq!(an.idempotents.len(), 2);
        let q = gabriel_quiver(&alg).unwrap();
        assert_eq!(q.vertices.len(), 2);
        assert_eq!(q.num_arrows(), 1);
    }

    #[test]
    fn semisimple_split() {
        let f = gf13();
        // k[t]/(t^4 - 1) = k^4 over GF(13).
        let alg = FinDimAlgebra::truncated_polynomial(&f, &[12, 0, 0, 0, 1]);
        let an = radical_and_idempotents(&alg).unwrap();
        assert!(an.radical.is_empty());
        assert_eq!(an.idempotents.len(), 4);
        let mut sum = vec![0; 4];
        for (i, e) in an.idempotents.iter().enumerate() {
            assert_eq!(&alg.mul(e, e), e);
            vec_add_scaled(&f, &mut sum, &1, e);
            for g in &an.idempotents[i + 1..] {
                assert!(alg.mul(e, g).iter().all(|&c| c == 0));
            }
        }
        assert_eq!(sum, alg.unit().to_vec());
        assert_eq!(gabriel_quiver(&alg).unwrap().num_arrows(), 0);
    }

    #[test]
    fn dual_numbers_have_a_loop() {
        let f = gf13();
        let alg = FinDimAlgebra::truncated_polynomial(&f, &[0, 0, 1]);
        let q = gabriel_quiver(&alg).unwrap();
        assert_eq!(q.vertices.len(), 1);
        assert_eq!(q.arrows, vec![Arrow { src: 0, dst: 0, mult: 1 }]);
    }

    #[test]
    fn matrix_algebra_is_one_block() {
        let f = gf13();
        let alg = FinDimAlgebra::from_fn(&f, 4, vec![1, 0, 0, 1], |i, j| {
            let (a, b) = (i / 2, i % 2);
            let (c, d) = (j / 2, j % 2);
            let mut v = vec![0; 4];
            if b == c {
                v[a * 2 + d] = 1;
            }
            v
        });
        let an = radical_and_idempotents(&alg).unwrap();
        assert_eq!(an.idempotents.len(), 2);
        assert_eq!(an.block_of, vec![0, 0]);
        assert_eq!(gabriel_quiver(&alg).unwrap().vertices.len(), 1);
    }

    #[test]
    fn errors() {
        let f = PrimeField::new(3).unwrap();
        let alg = FinDimAlgebra::truncated_polynomial(&f, &[1, 0, 0, 0, 1]);
        assert!(matches!(alg.radical(), Err(Error::FieldTooSmall { .. })));
        // t^2 + 2 over GF(13): 2 is not a square mod 13, so k[t]/(t^2+2) is a field.
        let g = gf13();
        let alg = FinDimAlgebra::truncated_polynomial(&g, &[2, 0, 1]);
        assert!(matches!(radical_and_idempotents(&alg), Err(Error::NonSplit)));
    }

    #[test]
    fn quiver_isomorphism() {
        let star = Quiver {
            vertices: (0..5).map(|i| i.to_string()).collect(),
            arrows: (1..5).map(|s| Arrow { src: s, dst: 0, mult: 1 }).collect(),
        };
        assert!(star.is_star_into_sink(4));
        assert!(!star.opposite().is_star_into_sink(4));
    }
}
