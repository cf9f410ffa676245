//! Degree-truncated two-sided Gröbner bases for homogeneous ideals of the
//! free algebra, normal forms and normal-word enumeration.
//!
//! Completion runs degree by degree: in degree `d` the input relations of
//! degree `d` and all overlap S-polynomials of degree `d` are reduced modulo
//! the basis found so far, and the reduced row echelon form of the results
//! gives the new basis elements. Because everything is homogeneous, elements
//! of degree `d` never interact with reductions in lower degrees, so the
//! outcome is the reduced Gröbner basis through `d` and depends only on the
//! presentation and the order.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::freealg::{MonomialOrder, NcPoly, OrderKey, Word};
use crate::scalars::Field;

/// A homogeneous presentation `k<x_1..x_n> / (relations)`.
#[derive(Clone, Debug)]
pub struct Presentation<F: Field> {
    field: F,
    names: Vec<String>,
    order: MonomialOrder,
    relations: Vec<NcPoly<F>>,
}

impl<F: Field> PartialEq for Presentation<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.names == other.names
            && self.order == other.order
            && self.relations == other.relations
    }
}

impl<F: Field> Presentation<F> {
    /// Builds a presentation with declaration-order precedence. Zero
    /// relations are dropped; every other relation must be homogeneous of
    /// positive degree.
    pub fn new(field: &F, names: Vec<String>, degrees: Vec<u32>, relations: Vec<NcPoly<F>>) -> Result<Self> {
        let order = MonomialOrder::deglex(&degrees);
        Self::with_order(field, names, order, relations)
    }

    pub fn with_order(
        field: &F,
        names: Vec<String>,
        order: MonomialOrder,
        relations: Vec<NcPoly<F>>,
    ) -> Result<Self> {
        if names.len() != order.num_generators() {
            return Err(Error::ShapeMismatch("one degree per generator".into()));
        }
        if order.degrees().contains(&0) {
            return Err(Error::HypothesisViolated("generator degrees must be positive".into()));
        }
        let mut kept = Vec::new();
        for r in relations {
            if r.field() != field {
                return Err(Error::FieldMismatch);
            }
            if r.is_zero() {
                continue;
            }
            match r.homogeneous_degree(order.degrees()) {
                None => return Err(Error::NonHomogeneousRelation(r.display(&names, &order))),
                Some(Some(0)) => {
                    return Err(Error::HypothesisViolated("relation of degree 0".into()));
                }
                _ => kept.push(r),
            }
        }
        Ok(Presentation {
            field: field.clone(),
            names,
            order,
            relations: kept,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        self.order.degrees()
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn relations(&self) -> &[NcPoly<F>] {
        &self.relations
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn max_relation_degree(&self) -> i64 {
        self.relations
            .iter()
            .filter_map(|r| r.homogeneous_degree(self.degrees()).flatten())
            .max()
            .unwrap_or(0)
    }

    /// The same generators with extra relations appended.
    pub fn with_relations(&self, extra: Vec<NcPoly<F>>) -> Result<Self> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        Self::with_order(&self.field, self.names.clone(), self.order.clone(), rels)
    }

    pub fn display_relations(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|r| r.display(&self.names, &self.order))
            .collect()
    }
}

/// Presentation of the opposite algebra: every relation word reversed.
pub fn opposite_presentation<F: Field>(pres: &Presentation<F>) -> Presentation<F> {
    Presentation {
        field: pres.field.clone(),
        names: pres.names.clone(),
        order: pres.order.clone(),
        relations: pres.relations.iter().map(|r| r.reversed()).collect(),
    }
}

/// A polynomial in rank space: words spelled by generator ranks, so the
/// derived ordering of [`OrderKey`] is the monomial order.
type KeyPoly<E> = BTreeMap<OrderKey, E>;

#[derive(Clone, Debug)]
struct Element<E> {
    lead: Vec<u16>,
    degree: i64,
    terms: Vec<(OrderKey, E)>,
}

/// A reduced Gröbner basis complete through degree `complete_through`.
#[derive(Clone, Debug)]
pub struct TruncatedGb<F: Field> {
    pres: Presentation<F>,
    elements: Vec<Element<F::Elem>>,
    leads: HashMap<Vec<u16>, usize>,
    lead_lengths: Vec<usize>,
    complete_through: i64,
    rank_degrees: Vec<u32>,
}

/// Completes the presentation's ideal through degree `d`.
pub fn truncated_groebner<F: Field>(pres: &Presentation<F>, d: i64) -> Result<TruncatedGb<F>> {
    let needed = pres.max_relation_degree();
    if d < needed {
        return Err(Error::TruncationTooLow { requested: d, needed });
    }
    let field = pres.field();
    let order = pres.order();
    let n = pres.num_generators();
    let mut rank_degrees = vec![0u32; n];
    for g in 0..n {
        let k = order.key(&Word::letter(g));
        rank_degrees[k.1[0] as usize] = pres.degrees()[g];
    }
    let mut gb = TruncatedGb {
        pres: pres.clone(),
        elements: Vec::new(),
        leads: HashMap::new(),
        lead_lengths: Vec::new(),
        complete_through: d,
        rank_degrees,
    };

    let mut by_degree: BTreeMap<i64, Vec<KeyPoly<F::Elem>>> = BTreeMap::new();
    for r in pres.relations() {
        let deg = r.homogeneous_degree(pres.degrees()).flatten().unwrap_or(0);
        if deg <= d {
            let kp: KeyPoly<F::Elem> = r.terms().iter().map(|(w, c)| (order.key(w), c.clone())).collect();
            by_degree.entry(deg).or_default().push(kp);
        }
    }

    for deg in 1..=d {
        let candidates = by_degree.remove(&deg).unwrap_or_default();
        if candidates.is_empty() {
            continue;
        }
        let reduced: Vec<KeyPoly<F::Elem>> = candidates
            .into_iter()
            .map(|p| gb.reduce_keys(p))
            .filter(|p| !p.is_empty())
            .collect();
        let new_elements = echelon(field, reduced);
        for el in new_elements {
            let idx = gb.elements.len();
            let lead = el.last_key_value().map(|(k, _)| k.1.clone()).expect("nonzero");
            let terms: Vec<(OrderKey, F::Elem)> = el.into_iter().rev().collect();
            gb.leads.insert(lead.clone(), idx);
            if !gb.lead_lengths.contains(&lead.len()) {
                gb.lead_lengths.push(lead.len());
                gb.lead_lengths.sort_unstable();
            }
            gb.elements.push(Element {
                lead,
                degree: deg,
                terms,
            });
            // Overlaps of the new element with every element so far,
            // itself included, in both positions.
            for other in 0..=idx {
                for (a, b) in [(idx, other), (other, idx)] {
                    for s in gb.overlaps(a, b) {
                        let (sdeg, spoly) = s;
                        if sdeg <= d {
                            by_degree.entry(sdeg).or_default().push(spoly);
                        }
                    }
                    if a == b {
                        break;
                    }
                }
            }
        }
    }
    Ok(gb)
}

/// Reduced row echelon form of homogeneous polynomials of equal degree;
/// columns ordered by the monomial order, largest first.
fn echelon<F: Field>(field: &F, polys: Vec<KeyPoly<F::Elem>>) -> Vec<KeyPoly<F::Elem>> {
    let mut rows: Vec<KeyPoly<F::Elem>> = Vec::new();
    for mut p in polys {
        // Reduce against the existing rows (each row's lead is its last key).
        loop {
            let mut changed = false;
            for r in &rows {
                let lead = r.last_key_value().expect("nonzero").0;
                if let Some(c) = p.get(lead).cloned() {
                    sub_scaled(field, &mut p, &c, r);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if p.is_empty() {
            continue;
        }
        let lc = p.last_key_value().expect("nonzero").1.clone();
        let inv = field.inv(&lc).expect("nonzero leading coefficient");
        for v in p.values_mut() {
            *v = field.mul(v, &inv);
        }
        // Back-substitute into earlier rows.
        let lead = p.last_key_value().expect("nonzero").0.clone();
        for r in rows.iter_mut() {
            if let Some(c) = r.get(&lead).cloned() {
                sub_scaled(field, r, &c, &p);
            }
        }
        rows.push(p);
    }
    rows.sort_by(|a, b| a.last_key_value().unwrap().0.cmp(b.last_key_value().unwrap().0));
    rows
}

fn sub_scaled<F: Field>(field: &F, p: &mut KeyPoly<F::Elem>, c: &F::Elem, q: &KeyPoly<F::Elem>) {
    for (k, v) in q {
        let t = field.mul(c, v);
        let e = p.entry(k.clone()).or_insert_with(|| field.zero());
        *e = field.sub(e, &t);
        if field.is_zero(e) {
            p.remove(k);
        }
    }
}

impl<F: Field> TruncatedGb<F> {
    pub fn presentation(&self) -> &Presentation<F> {
        &self.pres
    }

    pub fn complete_through(&self) -> i64 {
        self.complete_through
    }

    pub fn field(&self) -> &F {
        self.pres.field()
    }

    /// Basis elements, monic, in order of discovery (by degree).
    pub fn elements(&self) -> Vec<NcPoly<F>> {
        let order = self.pres.order();
        self.elements
            .iter()
            .map(|e| {
                NcPoly::from_terms(
                    self.field(),
                    e.terms.iter().map(|(k, c)| (order.word_of_key(k), c.clone())),
                )
            })
            .collect()
    }

    pub fn leading_words(&self) -> Vec<Word> {
        let order = self.pres.order();
        self.elements
            .iter()
            .map(|e| order.word_of_key(&OrderKey(e.degree, e.lead.clone())))
            .collect()
    }

    fn rank_word_degree(&self, w: &[u16]) -> i64 {
        w.iter().map(|&r| self.rank_degrees[r as usize] as i64).sum()
    }

    /// Proper overlaps: a suffix of lead(a) equal to a prefix of lead(b).
    fn overlaps(&self, a: usize, b: usize) -> Vec<(i64, KeyPoly<F::Elem>)> {
        let u = &self.elements[a].lead;
        let v = &self.elements[b].lead;
        let mut out = Vec::new();
        let max = u.len().min(v.len());
        for s in 1..max {
            if u[u.len() - s..] != v[..s] {
                continue;
            }
            let left = &u[..u.len() - s];
            let right = &v[s..];
            let deg = self.elements[a].degree + self.rank_word_degree(right);
            let mut p: KeyPoly<F::Elem> = BTreeMap::new();
            for (k, c) in &self.elements[a].terms {
                let mut w = k.1.clone();
                w.extend_from_slice(right);
                add_into(self.field(), &mut p, OrderKey(deg, w), c);
            }
            let neg_one = self.field().from_i64(-1);
            for (k, c) in &self.elements[b].terms {
                let mut w = left.to_vec();
                w.extend_from_slice(&k.1);
                add_into(self.field(), &mut p, OrderKey(deg, w), &self.field().mul(&neg_one, c));
            }
            if !p.is_empty() {
                out.push((deg, p));
            }
        }
        out
    }

    /// Leftmost occurrence of a leading word in `w`, shortest first.
    fn find_reducer(&self, w: &[u16]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for &l in &self.lead_lengths {
                if start + l > w.len() {
                    break;
                }
                if let Some(&idx) = self.leads.get(&w[start..start + l]) {
                    return Some((start, idx));
                }
            }
        }
        None
    }

    fn reduce_keys(&self, mut work: KeyPoly<F::Elem>) -> KeyPoly<F::Elem> {
        let field = self.field();
        let mut result = BTreeMap::new();
        while let Some((key, c)) = work.pop_last() {
            match self.find_reducer(&key.1) {
                None => {
                    result.insert(key, c);
                }
                Some((start, idx)) => {
                    let el = &self.elements[idx];
                    let prefix = &key.1[..start];
                    let suffix = &key.1[start + el.lead.len()..];
                    let negc = field.neg(&c);
                    // The leading term cancels `key` exactly; skip it.
                    for (k, a) in el.terms.iter().skip(1) {
                        let mut w = Vec::with_capacity(key.1.len());
                        w.extend_from_slice(prefix);
                        w.extend_from_slice(&k.1);
                        w.extend_from_slice(suffix);
                        add_into(field, &mut work, OrderKey(key.0, w), &field.mul(&negc, a));
                    }
                }
            }
        }
        result
    }

    fn check_degree(&self, d: i64) -> Result<()> {
        if d > self.complete_through {
            return Err(Error::DegreeBeyondTruncation {
                degree: d,
                bound: self.complete_through,
            });
        }
        Ok(())
    }

    /// Whether `w` avoids every leading word.
    pub fn is_normal(&self, w: &Word) -> bool {
        let k = self.pres.order().key(w);
        self.find_reducer(&k.1).is_none()
    }

    /// Fully reduced representative of `f`; every term must lie in degrees
    /// covered by the truncation.
    pub fn normal_form(&self, f: &NcPoly<F>) -> Result<NcPoly<F>> {
        if f.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        let order = self.pres.order();
        let mut work = BTreeMap::new();
        for (w, c) in f.terms() {
            let k = order.key(w);
            self.check_degree(k.0)?;
            work.insert(k, c.clone());
        }
        let r = self.reduce_keys(work);
        Ok(NcPoly::from_terms(
            self.field(),
            r.into_iter().map(|(k, c)| (order.word_of_key(&k), c)),
        ))
    }

    /// Normal form of a single word, as (word, coefficient) pairs in
    /// descending order.
    pub fn reduce_word(&self, w: &Word) -> Result<Vec<(Word, F::Elem)>> {
        let order = self.pres.order();
        let k = order.key(w);
        self.check_degree(k.0)?;
        let mut work = BTreeMap::new();
        work.insert(k, self.field().one());
        let r = self.reduce_keys(work);
        Ok(r.into_iter().rev().map(|(k, c)| (order.word_of_key(&k), c)).collect())
    }

    /// Normal words of degree `d`, ascending in the monomial order.
    pub fn normal_words(&self, d: i64) -> Result<Vec<Word>> {
        self.check_degree(d)?;
        if d < 0 {
            return Ok(Vec::new());
        }
        Ok(self.normal_words_through(d).pop().unwrap_or_default())
    }

    /// Normal words of every degree `0..=d`, each list ascending.
    pub fn normal_words_through(&self, d: i64) -> Vec<Vec<Word>> {
        let d = d.min(self.complete_through).max(-1);
        let mut layers: Vec<Vec<Vec<u16>>> = Vec::new();
        for e in 0..=d {
            let mut layer = Vec::new();
            if e == 0 {
                layer.push(Vec::new());
            } else {
                for (r, &gd) in self.rank_degrees.iter().enumerate() {
                    let prev = e - gd as i64;
                    if prev < 0 {
                        continue;
                    }
                    for w in &layers[prev as usize] {
                        let mut v = w.clone();
                        v.push(r as u16);
                        if !self.has_lead_suffix(&v) {
                            layer.push(v);
                        }
                    }
                }
                layer.sort();
            }
            layers.push(layer);
        }
        let order = self.pres.order();
        layers
            .into_iter()
            .enumerate()
            .map(|(e, l)| {
                l.into_iter()
                    .map(|v| order.word_of_key(&OrderKey(e as i64, v)))
                    .collect()
            })
            .collect()
    }

    fn has_lead_suffix(&self, w: &[u16]) -> bool {
        self.lead_lengths
            .iter()
            .any(|&l| l <= w.len() && self.leads.contains_key(&w[w.len() - l..]))
    }
}

fn add_into<F: Field>(field: &F, p: &mut KeyPoly<F::Elem>, k: OrderKey, c: &F::Elem) {
    if field.is_zero(c) {
        return;
    }
    match p.get_mut(&k) {
        Some(x) => {
            let s = field.add(x, c);
            if field.is_zero(&s) {
                p.remove(&k);
            } else {
                *x = s;
            }
        }
        None => {
            p.insert(k, c.clone());
        }
    }
}

/// Normal form, as a free function.
pub fn normal_form<F: Field>(gb: &TruncatedGb<F>, f: &NcPoly<F>) -> Result<NcPoly<F>> {
    gb.normal_form(f)
}

/// Normal words of degree `d`, ascending.
pub fn normal_words<F: Field>(gb: &TruncatedGb<F>, d: i64) -> Result<Vec<Word>> {
    gb.normal_words(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{parse_poly, Symbols};
    use crate::linalg::{rank, Matrix};
    use crate::scalars::PrimeField;
    use std::collections::HashMap as Map;

    fn pres(names: &[&str], rels: &[&str]) -> Presentation<PrimeField> {
        let f = PrimeField::new(13).unwrap();
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let consts = Map::new();
        let sym = Symbols {
            generators: &names,
            constants: &consts,
        };
        let rels = rels.iter().map(|r| parse_poly(&f, r, &sym).unwrap()).collect();
        let n = names.len();
        Presentation::new(&f, names, vec![1; n], rels).unwrap()
    }

    fn s_rels() -> Vec<&'static str> {
        vec!["x*y+y*x-z^2", "x*z+z*x", "y*z+z*y"]
    }

    fn counts(gb: &TruncatedGb<PrimeField>, d: i64) -> Vec<usize> {
        gb.normal_words_through(d).iter().map(|l| l.len()).collect()
    }

    fn words_of_len(n: usize, len: usize) -> Vec<Vec<u16>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..n as u16).map(move |g| {
                        let mut v = w.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Dimension of the degree-d quotient by brute force: rank of the span
    /// of all u*r*v in the space of degree-d words.
    fn oracle_dim(p: &Presentation<PrimeField>, d: usize) -> usize {
        let n = p.num_generators();
        let words = words_of_len(n, d);
        let index: Map<Vec<u16>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = Vec::new();
        for r in p.relations() {
            let rd = r.terms().keys().next().unwrap().len();
            if rd > d {
                continue;
            }
            for left in 0..=d - rd {
                for u in words_of_len(n, left) {
                    for v in words_of_len(n, d - rd - left) {
                        let mut row = vec![0u64; words.len()];
                        for (w, c) in r.terms() {
                            let mut full = u.clone();
                            full.extend_from_slice(&w.0);
                            full.extend_from_slice(&v);
                            let i = index[&full];
                            row[i] = (row[i] + c) % 13;
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let f = PrimeField::new(13).unwrap();
        let m = Matrix::from_rows(words.len(), &rows);
        words.len() - if rows.is_empty() { 0 } else { rank(&f, &m) }
    }

    #[test]
    fn commutative_plane() {
        let p = pres(&["x", "y"], &["y*x-x*y"]);
        let gb = truncated_groebner(&p, 4).unwrap();
        assert_eq!(gb.elements().len(), 1);
        assert_eq!(gb.complete_through(), 4);
        assert_eq!(counts(&gb, 4), vec![1, 2, 3, 4, 5]);
        let f = p.field();
        let yx = NcPoly::monomial(f, Word(vec![1, 0]), 1);
        let xy = NcPoly::monomial(f, Word(vec![0, 1]), 1);
        assert_eq!(gb.normal_form(&yx).unwrap(), xy);
    }

    #[test]
    fn example_algebras() {
        let s = pres(&["x", "y", "z"], &s_rels());
        let gb = truncated_groebner(&s, 6).unwrap();
        assert_eq!(counts(&gb, 6), vec![1, 3, 6, 10, 15, 21, 28]);
        let mut rels = s_rels();
        rels.push("x^2+y^2");
        let a = pres(&["x", "y", "z"], &rels);
        let gb = truncated_groebner(&a, 6).unwrap();
        assert_eq!(counts(&gb, 6), vec![1, 3, 5, 7, 9, 11, 13]);
        for d in 0..=4 {
            assert_eq!(oracle_dim(&s, d), counts(&truncated_groebner(&s, 4).unwrap(), 4)[d]);
            assert_eq!(oracle_dim(&a, d), counts(&gb, 4)[d]);
        }
        // NF(y^2) = -x^2 in A.
        let f = a.field();
        let y2 = NcPoly::monomial(f, Word(vec![1, 1]), 1);
        let x2 = NcPoly::monomial(f, Word(vec![0, 0]), 12);
        assert_eq!(gb.normal_form(&y2).unwrap(), x2);
        let rel = parse_poly(f, "x*z+z*x", &Symbols { generators: a.names(), constants: &Map::new() }).unwrap();
        assert!(gb.normal_form(&rel).unwrap().is_zero());
    }

    #[test]
    fn normal_word_lists() {
        let s = pres(&["x", "y", "z"], &s_rels());
        let gb = truncated_groebner(&s, 3).unwrap();
        assert_eq!(
            gb.normal_words(1).unwrap(),
            vec![Word(vec![0]), Word(vec![1]), Word(vec![2])]
        );
        assert_eq!(gb.normal_words(2).unwrap().len(), 6);
        assert!(matches!(gb.normal_words(4), Err(Error::DegreeBeyondTruncation { .. })));
    }

    #[test]
    fn errors() {
        let f = PrimeField::new(13).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        let consts = Map::new();
        let sym = Symbols {
            generators: &names,
            constants: &consts,
        };
        let bad = parse_poly(&f, "x*y - x", &sym).unwrap();
        assert!(matches!(
            Presentation::new(&f, names.clone(), vec![1, 1], vec![bad]),
            Err(Error::NonHomogeneousRelation(_))
        ));
        let p = pres(&["x", "y"], &["x*y*x"]);
        assert!(matches!(truncated_groebner(&p, 2), Err(Error::TruncationTooLow { .. })));
    }

    #[test]
    fn deterministic() {
        let mut rels = s_rels();
        rels.push("x^2+y^2");
        let a = pres(&["x", "y", "z"], &rels);
        let g1 = truncated_groebner(&a, 7).unwrap();
        let g2 = truncated_groebner(&a, 7).unwrap();
        assert_eq!(g1.elements(), g2.elements());
    }

    #[test]
    fn opposite_reverses() {
        let p = pres(&["x", "y"], &["x*x*y"]);
        let op = opposite_presentation(&p);
        assert_eq!(op.relations()[0], NcPoly::monomial(p.field(), Word(vec![1, 0, 0]), 1));
        assert_eq!(opposite_presentation(&op), p);
    }
}
