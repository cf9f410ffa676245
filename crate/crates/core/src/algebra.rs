//! Graded algebras as queryable oracles.
//!
//! [`PresentedAlgebra`] is backed by a truncated Gröbner basis and uses the
//! normal words of each degree, sorted descending, as its basis.
//! [`TabulatedAlgebra`] stores structure constants directly; it is how
//! endomorphism algebras are represented. Homological code only talks to the
//! [`GradedAlgebra`] trait, so it runs unchanged over both.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::endo::FinDimAlgebra;
use crate::error::{Error, Result};
use crate::freealg::{format_word, parse_poly, NcPoly, Symbols, Word};
use crate::gbasis::{opposite_presentation, truncated_groebner, Presentation, TruncatedGb};
use crate::linalg::{mat_mul, mat_vec, rank, unit_vec, vec_add_scaled, Matrix, Subspace};
use crate::scalars::{Field, Rationals};

/// Primitive idempotents and radical of the degree-zero piece.
#[derive(Clone, Debug)]
pub struct DegreeZero<E> {
    /// Complete set of primitive orthogonal idempotents.
    pub idempotents: Vec<Vec<E>>,
    /// Basis of the Jacobson radical of the degree-zero piece.
    pub radical: Vec<Vec<E>>,
}

/// A locally finite `N`-graded algebra known through `valid_through`.
pub trait GradedAlgebra<F: Field>: Send + Sync + fmt::Debug {
    fn field(&self) -> &F;

    /// Largest degree whose piece and products are known.
    fn valid_through(&self) -> i64;

    /// Dimension of the degree-`d` piece; zero for negative `d`.
    fn dim(&self, d: i64) -> Result<usize>;

    fn basis_labels(&self, d: i64) -> Result<Vec<String>>;

    /// Matrix of `v -> v * b_j` from degree `d` to `d + e`, where `b_j` is
    /// the `j`-th basis element of degree `e`.
    fn right_mul_matrix(&self, d: i64, e: i64, j: usize) -> Result<Arc<Matrix<F::Elem>>>;

    /// Algebra generators as `(degree, coordinates)`; the degree-zero part
    /// together with the positive generators generates the algebra.
    fn generators(&self) -> Vec<(i64, Vec<F::Elem>)>;

    fn degree_zero(&self) -> Result<Arc<DegreeZero<F::Elem>>>;

    /// The identity, as coordinates of the degree-zero piece.
    fn unit(&self) -> Vec<F::Elem>;

    /// The defining presentation, when there is one.
    fn presentation(&self) -> Option<&Presentation<F>> {
        None
    }

    fn check_degree(&self, d: i64) -> Result<()> {
        if d > self.valid_through() {
            return Err(Error::DegreeBeyondTruncation {
                degree: d,
                bound: self.valid_through(),
            });
        }
        Ok(())
    }

    /// Product of homogeneous elements `a` (degree `d1`) and `b` (degree `d2`).
    fn mul(&self, d1: i64, a: &[F::Elem], d2: i64, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim(d1 + d2)?];
        for (j, c) in b.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let m = self.right_mul_matrix(d1, d2, j)?;
            vec_add_scaled(f, &mut out, c, &mat_vec(f, &m, a));
        }
        Ok(out)
    }

    /// Matrix of `v -> v * b` from degree `d` to `d + e`.
    fn right_mul_by(&self, d: i64, e: i64, b: &[F::Elem]) -> Result<Matrix<F::Elem>> {
        let f = self.field();
        let mut out = Matrix::zeros(f, self.dim(d + e)?, self.dim(d)?);
        for (j, c) in b.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let m = self.right_mul_matrix(d, e, j)?;
            out = add_scaled_matrix(f, &out, c, &m);
        }
        Ok(out)
    }

    /// Matrix of `v -> a * v` from degree `d` to `e + d`.
    fn left_mul_by(&self, e: i64, a: &[F::Elem], d: i64) -> Result<Matrix<F::Elem>> {
        let f = self.field();
        let n = self.dim(d)?;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(mat_vec(f, &*self.right_mul_matrix(e, d, j)?, a));
        }
        Ok(Matrix::from_columns(self.dim(e + d)?, &cols, f.zero()))
    }
}

pub(crate) fn add_scaled_matrix<F: Field>(
    f: &F,
    a: &Matrix<F::Elem>,
    c: &F::Elem,
    b: &Matrix<F::Elem>,
) -> Matrix<F::Elem> {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let mut x = a.get(i, j).clone();
            f.mul_add_assign(&mut x, c, b.get(i, j));
            out.set(i, j, x);
        }
    }
    out
}

type MatCache<E> = Mutex<HashMap<(i64, i64, usize), Arc<Matrix<E>>>>;

/// An algebra given by a homogeneous presentation, complete through a
/// degree bound.
pub struct PresentedAlgebra<F: Field> {
    gb: TruncatedGb<F>,
    bases: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
    cache: MatCache<F::Elem>,
    unit_zero: OnceLock<Arc<DegreeZero<F::Elem>>>,
}

impl<F: Field> fmt::Debug for PresentedAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedAlgebra")
            .field("generators", &self.presentation().names())
            .field("relations", &self.presentation().display_relations())
            .field("valid_through", &self.valid_through())
            .finish()
    }
}

/// Completes the presentation through `d` and caches the normal-word bases.
pub fn build_presented_algebra<F: Field>(pres: &Presentation<F>, d: i64) -> Result<PresentedAlgebra<F>> {
    PresentedAlgebra::new(pres, d)
}

impl<F: Field> PresentedAlgebra<F> {
    pub fn new(pres: &Presentation<F>, d: i64) -> Result<Self> {
        let gb = truncated_groebner(pres, d)?;
        let order = pres.order();
        let mut bases = gb.normal_words_through(d);
        for b in bases.iter_mut() {
            b.sort_by(|u, v| order.compare(v, u));
        }
        let index = bases
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
            .collect();
        Ok(PresentedAlgebra {
            gb,
            bases,
            index,
            cache: Mutex::new(HashMap::new()),
            unit_zero: OnceLock::new(),
        })
    }

    pub fn presentation(&self) -> &Presentation<F> {
        self.gb.presentation()
    }

    pub fn groebner_basis(&self) -> &TruncatedGb<F> {
        &self.gb
    }

    /// Normal-word basis of degree `d`, descending.
    pub fn basis(&self, d: i64) -> Result<&[Word]> {
        self.check_degree(d)?;
        if d < 0 {
            return Ok(&[]);
        }
        Ok(&self.bases[d as usize])
    }

    /// Coordinates of a homogeneous polynomial; returns its degree too.
    /// The zero polynomial is reported in degree `hint`.
    pub fn to_vector(&self, p: &NcPoly<F>, hint: i64) -> Result<(i64, Vec<F::Elem>)> {
        let degrees = self.presentation().degrees();
        let d = match p.homogeneous_degree(degrees) {
            None => return Err(Error::NonHomogeneous),
            Some(d) => d.unwrap_or(hint),
        };
        let nf = self.gb.normal_form(p)?;
        let f = self.field();
        let mut v = vec![f.zero(); self.dim(d)?];
        for (w, c) in nf.terms() {
            v[self.index[d as usize][w]] = c.clone();
        }
        Ok((d, v))
    }

    /// The polynomial with the given coordinates in degree `d`.
    pub fn to_poly(&self, d: i64, v: &[F::Elem]) -> Result<NcPoly<F>> {
        let basis = self.basis(d)?;
        Ok(NcPoly::from_terms(
            self.field(),
            basis.iter().cloned().zip(v.iter().cloned()),
        ))
    }

    pub fn normal_form(&self, p: &NcPoly<F>) -> Result<NcPoly<F>> {
        self.gb.normal_form(p)
    }

    /// `v * x_g` for generator `g`, from degree `d`.
    fn generator_matrix(&self, d: i64, g: usize) -> Result<Arc<Matrix<F::Elem>>> {
        let gd = self.presentation().degrees()[g] as i64;
        let key = (d, -1 - g as i64, 0);
        if let Some(m) = self.cache.lock().expect("cache").get(&key) {
            return Ok(m.clone());
        }
        let f = self.field();
        let target = d + gd;
        let rows = self.dim(target)?;
        let src = self.basis(d)?;
        let mut cols = Vec::with_capacity(src.len());
        for w in src {
            let mut col = vec![f.zero(); rows];
            for (u, c) in self.gb.reduce_word(&w.concat(&Word::letter(g)))? {
                col[self.index[target as usize][&u]] = c;
            }
            cols.push(col);
        }
        let m = Arc::new(Matrix::from_columns(rows, &cols, f.zero()));
        self.cache.lock().expect("cache").insert(key, m.clone());
        Ok(m)
    }

    /// Builds the presented opposite algebra with the same truncation.
    pub fn opposite(&self) -> Result<PresentedAlgebra<F>> {
        PresentedAlgebra::new(&opposite_presentation(self.presentation()), self.valid_through())
    }

    /// Matrix identifying degree `d` of this algebra with degree `d` of
    /// `op` (its opposite) by word reversal.
    pub fn reversal_matrix(&self, op: &PresentedAlgebra<F>, d: i64) -> Result<Matrix<F::Elem>> {
        let f = self.field();
        let cols = self
            .basis(d)?
            .iter()
            .map(|w| {
                let p = NcPoly::monomial(f, w.reversed(), f.one());
                Ok(op.to_vector(&p, d)?.1)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(op.dim(d)?, &cols, f.zero()))
    }

    /// Matrix of the algebra endomorphism determined by generator images on
    /// the degree-`d` piece.
    pub fn substitution_matrix(&self, images: &[NcPoly<F>], d: i64) -> Result<Matrix<F::Elem>> {
        let f = self.field();
        let cols = self
            .basis(d)?
            .iter()
            .map(|w| {
                let p = NcPoly::monomial(f, w.clone(), f.one()).substitute(images);
                Ok(self.to_vector(&p, d)?.1)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.dim(d)?, &cols, f.zero()))
    }
}

impl<F: Field> GradedAlgebra<F> for PresentedAlgebra<F> {
    fn field(&self) -> &F {
        self.gb.field()
    }

    fn presentation(&self) -> Option<&Presentation<F>> {
        Some(self.gb.presentation())
    }

    fn valid_through(&self) -> i64 {
        self.gb.complete_through()
    }

    fn dim(&self, d: i64) -> Result<usize> {
        Ok(self.basis(d)?.len())
    }

    fn basis_labels(&self, d: i64) -> Result<Vec<String>> {
        let names = self.presentation().names();
        Ok(self.basis(d)?.iter().map(|w| format_word(w, names)).collect())
    }

    fn right_mul_matrix(&self, d: i64, e: i64, j: usize) -> Result<Arc<Matrix<F::Elem>>> {
        self.check_degree(d + e)?;
        let key = (d, e, j);
        if let Some(m) = self.cache.lock().expect("cache").get(&key) {
            return Ok(m.clone());
        }
        let f = self.field();
        let word = self.basis(e)?[j].clone();
        let m = if word.is_empty() {
            Arc::new(Matrix::identity(f, self.dim(d)?))
        } else {
            // v * (prefix * x) = (v * prefix) * x; prefixes of normal words
            // are normal.
            let last = *word.letters().last().expect("nonempty") as usize;
            let prefix = word.slice(0, word.len() - 1);
            let pe = e - self.presentation().degrees()[last] as i64;
            let pj = self.index[pe as usize][&prefix];
            let pm = self.right_mul_matrix(d, pe, pj)?;
            let gm = self.generator_matrix(d + pe, last)?;
            Arc::new(mat_mul(f, &gm, &pm))
        };
        self.cache.lock().expect("cache").insert(key, m.clone());
        Ok(m)
    }

    fn generators(&self) -> Vec<(i64, Vec<F::Elem>)> {
        let f = self.field();
        (0..self.presentation().num_generators())
            .filter_map(|g| {
                let p = NcPoly::generator(f, g);
                let d = self.presentation().degrees()[g] as i64;
                if d > self.valid_through() {
                    return None;
                }
                self.to_vector(&p, d).ok()
            })
            .collect()
    }

    fn degree_zero(&self) -> Result<Arc<DegreeZero<F::Elem>>> {
        Ok(self
            .unit_zero
            .get_or_init(|| {
                Arc::new(DegreeZero {
                    idempotents: vec![vec![self.field().one()]],
                    radical: Vec::new(),
                })
            })
            .clone())
    }

    fn unit(&self) -> Vec<F::Elem> {
        vec![self.field().one()]
    }
}

/// An algebra given by structure constants in degrees `0..=valid_through`.
pub struct TabulatedAlgebra<F: Field> {
    field: F,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// `right[(d, e)][j]`: right multiplication by `b_{e,j}` on degree `d`.
    right: HashMap<(i64, i64), Vec<Arc<Matrix<F::Elem>>>>,
    unit: Vec<F::Elem>,
    generators: Vec<(i64, Vec<F::Elem>)>,
    zero: OnceLock<std::result::Result<Arc<DegreeZero<F::Elem>>, Error>>,
}

impl<F: Field> fmt::Debug for TabulatedAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TabulatedAlgebra").field("dims", &self.dims).finish()
    }
}

impl<F: Field> TabulatedAlgebra<F> {
    /// `product(d, i, e, j)` must return the coordinates of `b_{d,i} * b_{e,j}`
    /// for all `d + e <= valid_through`.
    pub fn from_products(
        field: &F,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        unit: Vec<F::Elem>,
        mut product: impl FnMut(i64, usize, i64, usize) -> Result<Vec<F::Elem>>,
    ) -> Result<Self> {
        let top = dims.len() as i64 - 1;
        let mut right = HashMap::new();
        for d in 0..=top {
            for e in 0..=top - d {
                let mut mats = Vec::with_capacity(dims[e as usize]);
                for j in 0..dims[e as usize] {
                    let cols = (0..dims[d as usize])
                        .map(|i| product(d, i, e, j))
                        .collect::<Result<Vec<_>>>()?;
                    mats.push(Arc::new(Matrix::from_columns(dims[(d + e) as usize], &cols, field.zero())));
                }
                right.insert((d, e), mats);
            }
        }
        let mut alg = TabulatedAlgebra {
            field: field.clone(),
            dims,
            labels,
            right,
            unit,
            generators: Vec::new(),
            zero: OnceLock::new(),
        };
        alg.generators = alg.compute_generators()?;
        Ok(alg)
    }

    /// Basis of degree zero plus, in each positive degree, a complement of
    /// the span of products of lower positive degrees.
    fn compute_generators(&self) -> Result<Vec<(i64, Vec<F::Elem>)>> {
        let f = &self.field;
        let mut gens = Vec::new();
        for i in 0..self.dims[0] {
            gens.push((0, unit_vec(f, self.dims[0], i)));
        }
        for d in 1..self.dims.len() as i64 {
            let n = self.dims[d as usize];
            let mut span = Subspace::zero(n);
            for a in 1..d {
                for i in 0..self.dims[a as usize] {
                    let v = unit_vec(f, self.dims[a as usize], i);
                    for j in 0..self.dims[(d - a) as usize] {
                        let w = mat_vec(f, &self.right[&(a, d - a)][j], &v);
                        span.insert(f, &w);
                    }
                }
            }
            for c in span.non_pivots() {
                gens.push((d, unit_vec(f, n, c)));
            }
        }
        Ok(gens)
    }

    /// The degree-zero piece as a finite-dimensional algebra.
    pub fn degree_zero_algebra(&self) -> FinDimAlgebra<F> {
        let n = self.dims[0];
        let m = &self.right[&(0, 0)];
        let f = &self.field;
        FinDimAlgebra::from_fn(f, n, self.unit.clone(), |i, j| mat_vec(f, &m[j], &unit_vec(f, n, i)))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

impl<F: Field> GradedAlgebra<F> for TabulatedAlgebra<F> {
    fn field(&self) -> &F {
        &self.field
    }

    fn valid_through(&self) -> i64 {
        self.dims.len() as i64 - 1
    }

    fn dim(&self, d: i64) -> Result<usize> {
        self.check_degree(d)?;
        Ok(if d < 0 { 0 } else { self.dims[d as usize] })
    }

    fn basis_labels(&self, d: i64) -> Result<Vec<String>> {
        self.check_degree(d)?;
        Ok(if d < 0 { Vec::new() } else { self.labels[d as usize].clone() })
    }

    fn right_mul_matrix(&self, d: i64, e: i64, j: usize) -> Result<Arc<Matrix<F::Elem>>> {
        self.check_degree(d + e)?;
        if d < 0 || e < 0 {
            return Ok(Arc::new(Matrix::zeros(&self.field, self.dim(d + e)?, self.dim(d)?)));
        }
        Ok(self.right[&(d, e)][j].clone())
    }

    fn generators(&self) -> Vec<(i64, Vec<F::Elem>)> {
        self.generators.clone()
    }

    fn degree_zero(&self) -> Result<Arc<DegreeZero<F::Elem>>> {
        self.zero
            .get_or_init(|| {
                let b0 = self.degree_zero_algebra();
                let analysis = b0.analyze()?;
                Ok(Arc::new(DegreeZero {
                    idempotents: analysis.idempotents.clone(),
                    radical: analysis.radical.clone(),
                }))
            })
            .clone()
    }

    fn unit(&self) -> Vec<F::Elem> {
        self.unit.clone()
    }
}

/// Spot-checks `(ab)c = a(bc)` and the unit on basis triples with degree
/// sum at most `bound`; returns the number of triples checked.
pub fn check_associativity<F: Field>(alg: &dyn GradedAlgebra<F>, bound: i64, max_per_degree: usize) -> Result<usize> {
    let f = alg.field();
    let bound = bound.min(alg.valid_through());
    let mut checked = 0;
    let unit = alg.unit();
    for d1 in 0..=bound {
        for i in 0..alg.dim(d1)?.min(max_per_degree) {
            let a = unit_vec(f, alg.dim(d1)?, i);
            if alg.mul(0, &unit, d1, &a)? != a || alg.mul(d1, &a, 0, &unit)? != a {
                return Err(Error::NotAssociative(format!("unit fails on degree {d1} basis {i}")));
            }
            for d2 in 0..=bound - d1 {
                for j in 0..alg.dim(d2)?.min(max_per_degree) {
                    let b = unit_vec(f, alg.dim(d2)?, j);
                    let ab = alg.mul(d1, &a, d2, &b)?;
                    for d3 in 0..=bound - d1 - d2 {
                        for k in 0..alg.dim(d3)?.min(max_per_degree) {
                            let c = unit_vec(f, alg.dim(d3)?, k);
                            let left = alg.mul(d1 + d2, &ab, d3, &c)?;
                            let bc = alg.mul(d2, &b, d3, &c)?;
                            let right = alg.mul(d1, &a, d2 + d3, &bc)?;
                            if left != right {
                                return Err(Error::NotAssociative(format!(
                                    "degrees ({d1},{d2},{d3}) basis ({i},{j},{k})"
                                )));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Graded dimensions `c_0..c_D` with an optional matched rational form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub coeffs: Vec<i64>,
    pub rational: Option<(Vec<i64>, Vec<i64>)>,
}

pub fn hilbert_series<F: Field>(alg: &dyn GradedAlgebra<F>, d: i64) -> Result<HilbertSeries> {
    alg.check_degree(d)?;
    Ok(HilbertSeries {
        coeffs: (0..=d).map(|e| alg.dim(e).map(|n| n as i64)).collect::<Result<_>>()?,
        rational: None,
    })
}

impl HilbertSeries {
    /// Whether `num/den` expands to the stored coefficients; on success the
    /// rational form is attached. Agreement is certified only through the
    /// stored degree.
    pub fn match_rational(&mut self, num: &[i64], den: &[i64]) -> bool {
        let ok = match_rational(&self.coeffs, num, den);
        if ok {
            self.rational = Some((num.to_vec(), den.to_vec()));
        }
        ok
    }
}

/// `coeffs == num/den` as power series through `coeffs.len()` terms,
/// checked as `coeffs * den == num (mod t^n)` in exact integers.
pub fn match_rational(coeffs: &[i64], num: &[i64], den: &[i64]) -> bool {
    if den.first().copied().unwrap_or(0) == 0 {
        return false;
    }
    let n = coeffs.len();
    (0..n).all(|k| {
        let mut s = BigInt::zero();
        for (i, d) in den.iter().enumerate().take(k + 1) {
            s += BigInt::from(coeffs[k - i]) * BigInt::from(*d);
        }
        s == BigInt::from(num.get(k).copied().unwrap_or(0))
    })
}

/// Power-series expansion of `num/den` to `n` terms (exact division by the
/// constant term of `den`, which must be a unit).
pub fn expand_rational(num: &[i64], den: &[i64], n: usize) -> Option<Vec<i64>> {
    let d0 = *den.first()?;
    if d0 != 1 && d0 != -1 {
        return None;
    }
    let mut out: Vec<i64> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = num.get(k).copied().unwrap_or(0) as i128;
        for i in 1..=k.min(den.len().saturating_sub(1)) {
            s -= den[i] as i128 * out[k - i] as i128;
        }
        out.push(i64::try_from(s * d0 as i128).ok()?);
    }
    Some(out)
}

/// Parses `numerator/denominator` univariate integer polynomials in `t`,
/// e.g. `9*(1+t)/(1-t)^2`. The single top-level `/` separates the two.
pub fn parse_rational_function(text: &str) -> Result<(Vec<i64>, Vec<i64>)> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                if split.is_some() {
                    return Err(Error::Parse {
                        line: 1,
                        column: i + 1,
                        message: "more than one `/`".into(),
                    });
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    let (num, den) = match split {
        Some(i) => (&text[..i], &text[i + 1..]),
        None => (text, "1"),
    };
    let offset = split.map(|i| i + 1).unwrap_or(0);
    let num = parse_univariate(num).map_err(|e| shift_column(e, 0))?;
    let den = parse_univariate(den).map_err(|e| shift_column(e, offset))?;
    Ok((num, den))
}

fn shift_column(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column: column + by,
            message,
        },
        e => e,
    }
}

fn parse_univariate(text: &str) -> Result<Vec<i64>> {
    let q = Rationals;
    let names = vec!["t".to_string()];
    let consts = HashMap::new();
    let p = parse_poly(
        &q,
        text,
        &Symbols {
            generators: &names,
            constants: &consts,
        },
    )?;
    let deg = p.terms().keys().map(|w| w.len()).max().unwrap_or(0);
    let mut out = vec![0i64; deg + 1];
    for (w, c) in p.terms() {
        if !c.denom().is_one() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "coefficients must be integers".into(),
            });
        }
        out[w.len()] = i64::try_from(c.numer()).map_err(|_| Error::Overflow)?;
    }
    Ok(out)
}

/// Whether `f` commutes with every generator modulo the ideal.
pub fn is_central<F: Field>(alg: &PresentedAlgebra<F>, f: &NcPoly<F>) -> Result<bool> {
    let pres = alg.presentation();
    let deg = f.homogeneous_degree(pres.degrees()).ok_or(Error::NonHomogeneous)?.unwrap_or(0);
    let maxg = pres.degrees().iter().copied().max().unwrap_or(0) as i64;
    alg.check_degree(deg + maxg)?;
    for g in 0..pres.num_generators() {
        let x = NcPoly::generator(pres.field(), g);
        let c = f.mul(&x).sub(&x.mul(f));
        if !alg.normal_form(&c)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether left and right multiplication by `f` are injective from every
/// degree `0..=window`.
pub fn is_regular_element<F: Field>(alg: &PresentedAlgebra<F>, f: &NcPoly<F>, window: i64) -> Result<bool> {
    let deg = f
        .homogeneous_degree(alg.presentation().degrees())
        .ok_or(Error::NonHomogeneous)?
        .unwrap_or(0);
    alg.check_degree(deg + window)?;
    let (_, v) = alg.to_vector(f, deg)?;
    for d in 0..=window {
        let n = alg.dim(d)?;
        if n == 0 {
            continue;
        }
        let left = alg.left_mul_by(deg, &v, d)?;
        let right = alg.right_mul_by(d, deg, &v)?;
        let field = alg.field();
        if rank(field, &left) < n || rank(field, &right) < n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `alg / (extra)`, recompleted through `d`.
pub fn quotient_algebra<F: Field>(
    alg: &PresentedAlgebra<F>,
    extra: Vec<NcPoly<F>>,
    d: i64,
) -> Result<PresentedAlgebra<F>> {
    PresentedAlgebra::new(&alg.presentation().with_relations(extra)?, d)
}

/// Whether the cached multiplication tables agree with normal forms of
/// concatenated words in degrees `d1` and `d2`.
pub fn product_matrix_check<F: Field>(alg: &PresentedAlgebra<F>, d1: i64, d2: i64) -> Result<bool> {
    let f = alg.field();
    for (i, u) in alg.basis(d1)?.iter().enumerate() {
        for (j, v) in alg.basis(d2)?.iter().enumerate() {
            let via_table = alg.mul(d1, &unit_vec(f, alg.dim(d1)?, i), d2, &unit_vec(f, alg.dim(d2)?, j))?;
            let direct = alg.to_vector(&NcPoly::monomial(f, u.concat(v), f.one()), d1 + d2)?.1;
            if via_table != direct {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
