//! Brute-force reference computations in the free algebra on three
//! letters over GF(13). They share nothing with the library beyond the
//! polynomial parser.

use ncg_core::freealg::NcPoly;
use ncg_core::scalars::PrimeField;

pub const P: u64 = 13;

/// A homogeneous polynomial as `(word, coefficient)` pairs.
pub type Sparse = Vec<(Vec<u16>, u64)>;

pub fn sparse(p: &NcPoly<PrimeField>) -> Sparse {
    p.terms().iter().map(|(w, c)| (w.0.clone(), *c)).collect()
}

fn index(word: &[u16]) -> usize {
    word.iter().fold(0, |acc, &l| acc * 3 + l as usize)
}

fn word_of(mut i: usize, len: usize) -> Vec<u16> {
    let mut w = vec![0u16; len];
    for slot in w.iter_mut().rev() {
        *slot = (i % 3) as u16;
        i /= 3;
    }
    w
}

fn pow3(d: usize) -> usize {
    3usize.pow(d as u32)
}

fn inv(a: u64) -> u64 {
    let mut r = 1;
    for _ in 0..P - 2 {
        r = r * a % P;
    }
    r
}

/// Rank by plain Gaussian elimination mod 13.
pub fn rank(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let s = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = *x * s % P;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let m = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + P * P - m * rows[r][j]) % P;
                }
            }
        }
        r += 1;
    }
    r
}

/// `u * f * v` as a dense vector of length `3^(|u| + deg f + |v|)`.
fn sandwich(u: &[u16], f: &Sparse, v: &[u16], d: usize) -> Vec<u64> {
    let mut out = vec![0; pow3(d)];
    for (w, c) in f {
        let word: Vec<u16> = u.iter().chain(w).chain(v).copied().collect();
        let i = index(&word);
        out[i] = (out[i] + c) % P;
    }
    out
}

/// Spanning rows of `(I + l_1 T + ... )_d`, where `I` is the two-sided
/// ideal generated by `two_sided` and each `l` generates a right ideal.
pub fn span_rows(d: usize, two_sided: &[Sparse], right: &[Sparse]) -> Vec<Vec<u64>> {
    let mut rows = Vec::new();
    for r in two_sided {
        let k = r[0].0.len();
        if k > d {
            continue;
        }
        for a in 0..=d - k {
            for ui in 0..pow3(a) {
                for vi in 0..pow3(d - k - a) {
                    rows.push(sandwich(&word_of(ui, a), r, &word_of(vi, d - k - a), d));
                }
            }
        }
    }
    for l in right {
        let k = l[0].0.len();
        if k > d {
            continue;
        }
        for vi in 0..pow3(d - k) {
            rows.push(sandwich(&[], l, &word_of(vi, d - k), d));
        }
    }
    if rows.is_empty() {
        rows.push(vec![0; pow3(d)]);
    }
    rows
}

/// `dim (T / (I + sum l T))_d`.
pub fn quotient_dim(d: usize, two_sided: &[Sparse], right: &[Sparse]) -> usize {
    pow3(d) - rank(span_rows(d, two_sided, right))
}

/// A cyclic right module `T / (I + sum l T)`.
#[derive(Clone)]
pub struct Cyclic<'a> {
    pub ideal: &'a [Sparse],
    pub right: Vec<Sparse>,
}

impl Cyclic<'_> {
    pub fn dim(&self, d: usize) -> usize {
        quotient_dim(d, self.ideal, &self.right)
    }

    /// `dim Hom(M, self(s))_0` for `M = A / l A` (or `A` when `l` is
    /// `None`): elements `n` of degree `s` with `n l = 0`.
    pub fn hom_from(&self, l: Option<&Sparse>, s: usize) -> usize {
        let ks = rank(span_rows(s, self.ideal, &self.right));
        let Some(l) = l else {
            return pow3(s) - ks;
        };
        let deg = l[0].0.len();
        let k_next = span_rows(s + deg, self.ideal, &self.right);
        let base = rank(k_next.clone());
        let mut with_images = k_next;
        for ni in 0..pow3(s) {
            with_images.push(sandwich(&word_of(ni, s), l, &[], s + deg));
        }
        let image_rank = rank(with_images) - base;
        pow3(s) - image_rank - ks
    }
}

/// `dim Hom(X, X(s))_0` for `X = A (+) A/l_1 A (+) ...`, summing over
/// pairs of summands.
pub fn end_dim(ideal: &[Sparse], lines: &[Sparse], s: usize) -> usize {
    let mut summands: Vec<(Option<&Sparse>, Cyclic)> = vec![(
        None,
        Cyclic {
            ideal,
            right: Vec::new(),
        },
    )];
    for l in lines {
        summands.push((
            Some(l),
            Cyclic {
                ideal,
                right: vec![l.clone()],
            },
        ));
    }
    let mut total = 0;
    for (src, _) in &summands {
        for (_, dst) in &summands {
            total += dst.hom_from(*src, s);
        }
    }
    total
}

/// Projective solutions of commutative equations in three variables, by
/// counting nonzero affine solutions.
pub fn projective_point_count(eqs: &[fn(u64, u64, u64) -> u64]) -> usize {
    let mut affine = 0;
    for x in 0..P {
        for y in 0..P {
            for z in 0..P {
                if (x, y, z) != (0, 0, 0) && eqs.iter().all(|e| e(x, y, z) % P == 0) {
                    affine += 1;
                }
            }
        }
    }
    assert_eq!(affine % (P as usize - 1), 0);
    affine / (P as usize - 1)
}
