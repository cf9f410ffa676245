//! Words and polynomials in the free algebra `k<x_1, ..., x_n>` with
//! positively graded generators, the degree-lexicographic monomial orders,
//! and the expression grammar used by presentation files.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalars::Field;

/// A word in the generators; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(vec![g as u16])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, degrees: &[u32]) -> i64 {
        self.0.iter().map(|&g| degrees[g as usize] as i64).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    /// Positions where `pattern` occurs as a contiguous subword.
    pub fn occurrences(&self, pattern: &Word) -> impl Iterator<Item = usize> + '_ {
        let n = pattern.0.len();
        let pat = pattern.0.clone();
        (0..=self.0.len().saturating_sub(n))
            .filter(move |&i| n <= self.0.len() && self.0[i..i + n] == pat[..])
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

/// Degree-lexicographic order: weighted degree first, then the leftmost
/// differing letter decides by generator precedence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    degrees: Vec<u32>,
    rank: Vec<u16>,
}

impl MonomialOrder {
    /// Declaration order precedence: generator 0 is the smallest letter.
    pub fn deglex(degrees: &[u32]) -> Self {
        MonomialOrder {
            degrees: degrees.to_vec(),
            rank: (0..degrees.len() as u16).collect(),
        }
    }

    /// `precedence` lists the generators from smallest to largest.
    pub fn with_precedence(degrees: &[u32], precedence: &[usize]) -> Result<Self> {
        let n = degrees.len();
        let mut rank = vec![u16::MAX; n];
        if precedence.len() != n {
            return Err(Error::ShapeMismatch("precedence is not a permutation".into()));
        }
        for (r, &g) in precedence.iter().enumerate() {
            if g >= n || rank[g] != u16::MAX {
                return Err(Error::ShapeMismatch("precedence is not a permutation".into()));
            }
            rank[g] = r as u16;
        }
        Ok(MonomialOrder {
            degrees: degrees.to_vec(),
            rank,
        })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn num_generators(&self) -> usize {
        self.degrees.len()
    }

    pub fn compare(&self, u: &Word, v: &Word) -> Ordering {
        u.degree(&self.degrees)
            .cmp(&v.degree(&self.degrees))
            .then_with(|| {
                for (a, b) in u.0.iter().zip(&v.0) {
                    match self.rank[*a as usize].cmp(&self.rank[*b as usize]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                u.0.len().cmp(&v.0.len())
            })
    }

    /// A key whose natural ordering is this monomial order.
    pub fn key(&self, w: &Word) -> OrderKey {
        OrderKey(
            w.degree(&self.degrees),
            w.0.iter().map(|&g| self.rank[g as usize]).collect(),
        )
    }

    pub fn word_of_key(&self, key: &OrderKey) -> Word {
        let mut inv = vec![0u16; self.rank.len()];
        for (g, &r) in self.rank.iter().enumerate() {
            inv[r as usize] = g as u16;
        }
        Word(key.1.iter().map(|&r| inv[r as usize]).collect())
    }
}

/// Sort key realising a [`MonomialOrder`] through derived `Ord`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey(pub i64, pub Vec<u16>);

/// `compare_words` from the public contract.
pub fn compare_words(order: &MonomialOrder, u: &Word, v: &Word) -> Ordering {
    order.compare(u, v)
}

/// A polynomial: a finite map from words to nonzero coefficients.
#[derive(Clone)]
pub struct NcPoly<F: Field> {
    field: F,
    terms: BTreeMap<Word, F::Elem>,
}

impl<F: Field> PartialEq for NcPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.terms == other.terms
    }
}

impl<F: Field> Eq for NcPoly<F> {}

impl<F: Field> fmt::Debug for NcPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (w, self.field.format(c))))
            .finish()
    }
}

impl<F: Field> NcPoly<F> {
    pub fn zero(field: &F) -> Self {
        NcPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::monomial(field, Word::empty(), c)
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn generator(field: &F, g: usize) -> Self {
        Self::monomial(field, Word::letter(g), field.one())
    }

    pub fn monomial(field: &F, w: Word, c: F::Elem) -> Self {
        let mut p = Self::zero(field);
        if !field.is_zero(&c) {
            p.terms.insert(w, c);
        }
        p
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (Word, F::Elem)>) -> Self {
        let mut p = Self::zero(field);
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Word, F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> F::Elem {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, w: Word, c: &F::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                let s = self.field.add(x, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&w);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let mut out = Self::zero(&self.field);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), &self.field.mul(a, b));
            }
        }
        Ok(out)
    }

    /// Sum; panics on mismatched fields (use [`NcPoly::try_add`] otherwise).
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("polynomials over the same field")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("polynomials over the same field")
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field);
        }
        NcPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), self.field.mul(c, x)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The common degree of all terms, `None` for inhomogeneous input.
    /// The zero polynomial is homogeneous of every degree; `Some(None)`.
    pub fn homogeneous_degree(&self, degrees: &[u32]) -> Option<Option<i64>> {
        let mut deg = None;
        for w in self.terms.keys() {
            let d = w.degree(degrees);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        Some(deg)
    }

    pub fn is_homogeneous(&self, degrees: &[u32]) -> bool {
        self.homogeneous_degree(degrees).is_some()
    }

    /// Largest term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Word, &F::Elem)> {
        self.terms.iter().max_by(|a, b| order.compare(a.0, b.0))
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Word, &F::Elem)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| order.compare(b.0, a.0));
        t
    }

    /// Reverses every word (the anti-automorphism onto the opposite algebra).
    pub fn reversed(&self) -> Self {
        NcPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())).collect(),
        }
    }

    /// Substitutes `images[g]` for each generator `g`.
    pub fn substitute(&self, images: &[NcPoly<F>]) -> Self {
        let mut out = Self::zero(&self.field);
        for (w, c) in &self.terms {
            let mut t = Self::constant(&self.field, c.clone());
            for &g in &w.0 {
                t = t.mul(&images[g as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Renders with generator names, terms descending under `order`.
    pub fn display(&self, names: &[String], order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut s = String::new();
        for (i, (w, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let negative = f.characteristic() != 0
                && f.to_i64(c).is_some_and(|v| v as u64 > f.characteristic() / 2)
                || f.characteristic() == 0 && f.format(c).starts_with('-');
            let mag = if negative { f.neg(c) } else { c.clone() };
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let word = format_word(w, names);
            if w.is_empty() {
                s.push_str(&f.format(&mag));
            } else if f.is_one(&mag) {
                s.push_str(&word);
            } else {
                s.push_str(&format!("{}*{}", f.format(&mag), word));
            }
        }
        s
    }
}

/// `x*y*y` renders as `x*y^2`.
pub fn format_word(w: &Word, names: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    let l = w.letters();
    while i < l.len() {
        let mut j = i;
        while j < l.len() && l[j] == l[i] {
            j += 1;
        }
        let name = &names[l[i] as usize];
        if j - i == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{}^{}", name, j - i));
        }
        i = j;
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `poly_add` from the public contract.
pub fn poly_add<F: Field>(f: &NcPoly<F>, g: &NcPoly<F>) -> Result<NcPoly<F>> {
    f.try_add(g)
}

/// `poly_mul` from the public contract.
pub fn poly_mul<F: Field>(f: &NcPoly<F>, g: &NcPoly<F>) -> Result<NcPoly<F>> {
    f.try_mul(g)
}

/// Name resolution for the expression grammar.
pub struct Symbols<'a, F: Field> {
    pub generators: &'a [String],
    pub constants: &'a HashMap<String, F::Elem>,
}

/// Parses an expression: integers, names, `+ - * ^`, parentheses.
/// Juxtaposition is rejected and nothing commutes.
pub fn parse_poly<F: Field>(field: &F, text: &str, symbols: &Symbols<'_, F>) -> Result<NcPoly<F>> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        field,
        symbols,
        tokens,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.error("expected operator or end of expression"));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), start + 1));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), start + 1));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Op(c), i + 1));
            i += 1;
        } else {
            return Err(Error::Parse {
                line: 1,
                column: i + 1,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a, 'b, F: Field> {
    field: &'a F,
    symbols: &'a Symbols<'b, F>,
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl<F: Field> Parser<'_, '_, F> {
    fn error(&self, message: &str) -> Error {
        let column = self
            .tokens
            .get(self.pos)
            .map(|t| t.1)
            .unwrap_or_else(|| self.tokens.last().map(|t| t.1 + 1).unwrap_or(1));
        Error::Parse {
            line: 1,
            column,
            message: message.to_string(),
        }
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<NcPoly<F>> {
        let mut acc = if self.peek_op() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            if self.peek_op() == Some('+') {
                self.pos += 1;
            }
            self.term()?
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NcPoly<F>> {
        let mut acc = self.power()?;
        while self.peek_op() == Some('*') {
            self.pos += 1;
            let f = self.power()?;
            acc = acc.mul(&f);
        }
        if let Some((Tok::Name(_) | Tok::Int(_), _)) = self.tokens.get(self.pos) {
            return Err(self.error("juxtaposition is not allowed; use `*`"));
        }
        if self.peek_op() == Some('(') {
            return Err(self.error("juxtaposition is not allowed; use `*`"));
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<NcPoly<F>> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some((Tok::Int(n), _)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.error("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<NcPoly<F>> {
        let Some((tok, _)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of expression"));
        };
        match tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(NcPoly::constant(self.field, self.field.from_bigint(&n)))
            }
            Tok::Name(name) => {
                self.pos += 1;
                if let Some(g) = self.symbols.generators.iter().position(|s| *s == name) {
                    Ok(NcPoly::generator(self.field, g))
                } else if let Some(c) = self.symbols.constants.get(&name) {
                    Ok(NcPoly::constant(self.field, c.clone()))
                } else {
                    self.pos -= 1;
                    Err(self.error(&format!("unknown name `{name}`")))
                }
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op('-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Tok::Op(c) => Err(self.error(&format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::PrimeField;
    use proptest::prelude::*;

    fn setup() -> (PrimeField, Vec<String>, HashMap<String, u64>) {
        (
            PrimeField::new(13).unwrap(),
            vec!["x".into(), "y".into(), "z".into()],
            HashMap::new(),
        )
    }

    fn p(text: &str) -> NcPoly<PrimeField> {
        let (f, names, consts) = setup();
        parse_poly(
            &f,
            text,
            &Symbols {
                generators: &names,
                constants: &consts,
            },
        )
        .unwrap()
    }

    #[test]
    fn addition_examples() {
        assert!(poly_add(&p("x*y"), &p("-x*y")).unwrap().is_zero());
        assert_eq!(poly_add(&p("x*y+y*x"), &p("z^2")).unwrap(), p("x*y + y*x + z*z"));
        assert_eq!(poly_add(&p("x^2+y^2"), &p("-y^2")).unwrap(), p("x^2"));
    }

    #[test]
    fn field_mismatch() {
        let f7 = PrimeField::new(7).unwrap();
        let g = NcPoly::generator(&f7, 0);
        assert_eq!(poly_add(&p("x"), &g), Err(Error::FieldMismatch));
        assert_eq!(poly_mul(&p("x"), &g), Err(Error::FieldMismatch));
    }

    #[test]
    fn multiplication_examples() {
        assert_ne!(p("x").mul(&p("y")), p("y").mul(&p("x")));
        assert_eq!(p("(x-y)*(x+y)"), p("x^2 + x*y - y*x - y^2"));
        assert_eq!(p("1").mul(&p("x*y+z")), p("x*y+z"));
    }

    #[test]
    fn order_examples() {
        let ord = MonomialOrder::deglex(&[1, 1, 1]);
        let w = |s: &[u16]| Word(s.to_vec());
        assert_eq!(compare_words(&ord, &w(&[0, 1]), &w(&[1, 0])), Ordering::Less);
        assert_eq!(compare_words(&ord, &w(&[0]), &w(&[0])), Ordering::Equal);
        assert_eq!(compare_words(&ord, &w(&[0, 1, 0]), &w(&[2])), Ordering::Greater);
    }

    #[test]
    fn weighted_degrees_and_precedence() {
        let ord = MonomialOrder::with_precedence(&[1, 2], &[1, 0]).unwrap();
        // y has degree 2, so x*x and y tie on degree; precedence y < x.
        assert_eq!(ord.compare(&Word(vec![1]), &Word(vec![0, 0])), Ordering::Less);
        assert!(MonomialOrder::with_precedence(&[1, 1], &[0, 0]).is_err());
    }

    #[test]
    fn parse_errors() {
        let (f, names, consts) = setup();
        let sym = Symbols {
            generators: &names,
            constants: &consts,
        };
        let err = parse_poly(&f, "x y", &sym).unwrap_err();
        assert!(matches!(err, Error::Parse { column: 3, .. }), "{err:?}");
        assert!(parse_poly(&f, "2x", &sym).is_err());
        assert!(parse_poly(&f, "x^", &sym).is_err());
        assert!(parse_poly(&f, "w + 1", &sym).is_err());
        assert!(parse_poly(&f, "(x + y", &sym).is_err());
    }

    #[test]
    fn display_round_trips() {
        let (f, names, consts) = setup();
        let ord = MonomialOrder::deglex(&[1, 1, 1]);
        let q = p("x*y + y*x - z^2 + 3*x*z");
        let s = q.display(&names, &ord);
        assert_eq!(s, "-z^2 + y*x + 3*x*z + x*y");
        let back = parse_poly(
            &f,
            &s,
            &Symbols {
                generators: &names,
                constants: &consts,
            },
        )
        .unwrap();
        assert_eq!(back, q);
    }

    fn all_words(max_len: usize, n: u16) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for g in 0..n {
                    let mut v = w.0.clone();
                    v.push(g);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn deglex_is_strict_total_multiplicative_order() {
        let ord = MonomialOrder::deglex(&[1, 1, 1]);
        let words = all_words(4, 3);
        let mut sorted = words.clone();
        sorted.sort_by(|a, b| ord.compare(a, b));
        for pair in sorted.windows(2) {
            assert_eq!(ord.compare(&pair[0], &pair[1]), Ordering::Less);
        }
        for u in words.iter().filter(|w| w.len() <= 2) {
            for v in words.iter().filter(|w| w.len() <= 2) {
                if ord.compare(u, v) == Ordering::Less {
                    for w in all_words(1, 3) {
                        assert_eq!(ord.compare(&w.concat(u), &w.concat(v)), Ordering::Less);
                        assert_eq!(ord.compare(&u.concat(&w), &v.concat(&w)), Ordering::Less);
                    }
                }
            }
        }
        let keyed: Vec<Word> = {
            let mut k: Vec<_> = words.iter().map(|w| ord.key(w)).collect();
            k.sort();
            k.iter().map(|k| ord.word_of_key(k)).collect()
        };
        assert_eq!(keyed, sorted);
    }

    fn arb_poly() -> impl Strategy<Value = NcPoly<PrimeField>> {
        let f = PrimeField::new(13).unwrap();
        proptest::collection::vec((proptest::collection::vec(0u16..3, 0..3), 0u64..13), 0..4)
            .prop_map(move |ts| NcPoly::from_terms(&f, ts.into_iter().map(|(w, c)| (Word(w), c))))
    }

    proptest! {
        #[test]
        fn multiplication_is_associative_and_unital(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            let one = NcPoly::one(a.field());
            prop_assert_eq!(one.mul(&a), a.clone());
            prop_assert_eq!(a.mul(&one), a);
        }
    }
}
