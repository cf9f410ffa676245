//! Dense exact linear algebra over a [`Field`]: reduced row echelon form,
//! rank, kernels, solving, and incrementally maintained subspaces.
//!
//! Vectors are `Vec<F::Elem>`; matrices are row-major. Every routine is
//! deterministic: pivots are chosen as the first nonzero entry scanning rows
//! top to bottom and columns left to right.

use crate::scalars::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<E>], zero: E) -> Self {
        let mut m = Self::filled(rows, columns.len(), zero);
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<E>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn is_zero_with(&self, zero: &E) -> bool {
        self.data.iter().all(|x| x == zero)
    }
}

/// `a * b`.
pub fn mat_mul<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "matrix shapes do not compose");
    let mut out = Matrix::zeros(field, a.rows, b.cols);
    for i in 0..a.rows {
        let out_row = &mut out.data[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let aik = &a.data[i * a.cols + k];
            if field.is_zero(aik) {
                continue;
            }
            let b_row = &b.data[k * b.cols..(k + 1) * b.cols];
            for (o, bkj) in out_row.iter_mut().zip(b_row) {
                field.mul_add_assign(o, aik, bkj);
            }
        }
    }
    out
}

/// `m * v`.
pub fn mat_vec<F: Field>(field: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(m.cols, v.len(), "matrix and vector shapes differ");
    let mut out = vec![field.zero(); m.rows];
    for (j, vj) in v.iter().enumerate() {
        if field.is_zero(vj) {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            field.mul_add_assign(o, &m.data[i * m.cols + j], vj);
        }
    }
    out
}

pub fn vec_add_scaled<F: Field>(field: &F, acc: &mut [F::Elem], c: &F::Elem, v: &[F::Elem]) {
    if field.is_zero(c) {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        field.mul_add_assign(a, c, x);
    }
}

pub fn is_zero_vec<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| field.is_zero(x))
}

pub fn scale_vec<F: Field>(field: &F, c: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|x| field.mul(c, x)).collect()
}

pub fn unit_vec<F: Field>(field: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// In-place reduced row echelon form; returns the pivot column of each
/// nonzero row (the nonzero rows are moved to the top).
pub fn rref<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let x = field.mul(m.get(r, j), &inv);
            m.set(r, j, x);
        }
        let pivot_row: Vec<F::Elem> = m.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if field.is_zero(&f) {
                continue;
            }
            let nf = field.neg(&f);
            let row = &mut m.data[i * cols + c..(i + 1) * cols];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                field.mul_add_assign(x, &nf, y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // Eliminate along the shorter side.
    if m.rows <= m.cols {
        let mut a = m.clone();
        rref(field, &mut a).len()
    } else {
        let mut a = m.transpose();
        rref(field, &mut a).len()
    }
}

/// Basis of the right kernel `{v : m v = 0}` in the canonical form read off
/// the reduced echelon form (one vector per free column, free entry 1).
pub fn kernel<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = m.cols;
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(a.get(r, free));
        }
        out.push(v);
    }
    out
}

/// Some solution of `m x = rhs`, if one exists.
pub fn solve<F: Field>(field: &F, m: &Matrix<F::Elem>, rhs: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(m.rows, rhs.len());
    let mut aug = Matrix::zeros(field, m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, rhs[i].clone());
    }
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![field.zero(); m.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug.get(r, m.cols).clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = Matrix::zeros(field, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, field.one());
    }
    let pivots = rref(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Some(inv)
}

/// A subspace of `F^n` held as fully reduced echelon rows.
///
/// Rows are kept sorted by pivot column; each pivot column is zero in every
/// other row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<E> {
    dim_ambient: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn zero(dim_ambient: usize) -> Self {
        Subspace {
            dim_ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots; the standard vectors on them span a
    /// complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.dim_ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim_ambient).filter(|&c| !is_pivot[c]).collect()
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> Subspace<E> {
    pub fn spanned_by<F: Field<Elem = E>>(field: &F, dim_ambient: usize, vectors: &[Vec<E>]) -> Self {
        let mut s = Self::zero(dim_ambient);
        if vectors.is_empty() {
            return s;
        }
        let mut m = Matrix::from_rows(dim_ambient, vectors);
        let pivots = rref(field, &mut m);
        s.rows = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        s.pivots = pivots;
        s
    }

    pub fn full<F: Field<Elem = E>>(field: &F, dim_ambient: usize) -> Self {
        Subspace {
            dim_ambient,
            rows: (0..dim_ambient).map(|i| unit_vec(field, dim_ambient, i)).collect(),
            pivots: (0..dim_ambient).collect(),
        }
    }

    /// Reduce `v` modulo the subspace; the result vanishes on pivot columns.
    pub fn reduce<F: Field<Elem = E>>(&self, field: &F, v: &mut [E]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if field.is_zero(&v[p]) {
                continue;
            }
            let c = field.neg(&v[p]);
            for (x, y) in v[p..].iter_mut().zip(&row[p..]) {
                field.mul_add_assign(x, &c, y);
            }
        }
    }

    pub fn contains<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        is_zero_vec(field, &w)
    }

    /// Adds `v` to the subspace; returns whether the dimension grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, field: &F, v: &[E]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        let Some(p) = w.iter().position(|x| !field.is_zero(x)) else {
            return false;
        };
        let inv = field.inv(&w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = field.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if field.is_zero(&row[p]) {
                continue;
            }
            let c = field.neg(&row[p]);
            for (x, y) in row.iter_mut().zip(&w) {
                field.mul_add_assign(x, &c, y);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, w);
        true
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in
    /// the subspace.
    pub fn echelon_coords<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Option<Vec<E>> {
        if !self.contains(field, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of<F: Field<Elem = E>>(&self, field: &F, other: &Subspace<E>) -> bool {
        self.rows.iter().all(|r| other.contains(field, r))
    }
}

/// Coordinates with respect to a fixed, linearly independent list of basis
/// vectors.
#[derive(Debug, Clone)]
pub struct BasisCoords<E> {
    echelon: Subspace<E>,
    /// `echelon.rows[i] = sum_j transform[i][j] * basis[j]`.
    transform: Vec<Vec<E>>,
    len: usize,
}

impl<E: Clone + PartialEq + std::fmt::Debug> BasisCoords<E> {
    /// Fails (returns `None`) if the vectors are linearly dependent.
    pub fn new<F: Field<Elem = E>>(field: &F, dim_ambient: usize, basis: &[Vec<E>]) -> Option<Self> {
        let n = basis.len();
        let aug_rows: Vec<Vec<E>> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut r = b.clone();
                r.extend(unit_vec(field, n, i));
                r
            })
            .collect();
        let mut m = Matrix::from_rows(dim_ambient + n, &aug_rows);
        if n == 0 {
            return Some(BasisCoords {
                echelon: Subspace::zero(dim_ambient),
                transform: Vec::new(),
                len: 0,
            });
        }
        let pivots = rref(field, &mut m);
        if pivots.len() < n || pivots.iter().any(|&p| p >= dim_ambient) {
            return None;
        }
        let rows: Vec<Vec<E>> = (0..n).map(|i| m.row(i)[..dim_ambient].to_vec()).collect();
        let transform: Vec<Vec<E>> = (0..n).map(|i| m.row(i)[dim_ambient..].to_vec()).collect();
        Some(BasisCoords {
            echelon: Subspace {
                dim_ambient,
                rows,
                pivots,
            },
            transform,
            len: n,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn span(&self) -> &Subspace<E> {
        &self.echelon
    }

    pub fn coords<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Option<Vec<E>> {
        let ec = self.echelon.echelon_coords(field, v)?;
        let mut out = vec![field.zero(); self.len];
        for (c, t) in ec.iter().zip(&self.transform) {
            vec_add_scaled(field, &mut out, c, t);
        }
        Some(out)
    }
}
