//! Exact base fields: prime fields `GF(p)` and the rationals.
//!
//! Fields are runtime values (a prime field carries its modulus) and all
//! arithmetic goes through the field object, in the style of
//! `field.mul(&a, &b)`. Elements are plain data with a canonical form, so
//! equality of elements is equality of values.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Which field a workspace or command runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime(u64),
    Rational,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Prime(p) => write!(f, "GF({p})"),
            FieldKind::Rational => write!(f, "QQ"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "QQ" || t == "Q" {
            return Ok(FieldKind::Rational);
        }
        let bad = || Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected `GF(p)` or `QQ`, found `{s}`"),
        };
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let p: u64 = inner.parse().map_err(|_| bad())?;
        if !is_prime(p) || p >= (1 << 31) {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("{p} is not a prime below 2^31"),
            });
        }
        Ok(FieldKind::Prime(p))
    }
}

/// Trial-division primality test; moduli are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field. Elements are kept in canonical form by every operation.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `acc += a * b`.
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
    /// Characteristic, 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Number of elements for finite fields.
    fn size(&self) -> Option<u64>;
    /// All elements in canonical order (finite fields only).
    fn elements(&self) -> Vec<Self::Elem>;
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;
    /// Integer value when the element is an integer in a natural way
    /// (the canonical representative for prime fields).
    fn to_i64(&self, a: &Self::Elem) -> Option<i64>;
    fn format(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }
}

/// The prime field `GF(p)` with `p < 2^31`; elements are `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(Error::UnsupportedField(format!("GF({p})")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        r.to_u64().unwrap_or(0)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on signed values.
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.from_i64(t0))
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn mul_add_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn size(&self) -> Option<u64> {
        Some(self.p)
    }
    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn to_i64(&self, a: &u64) -> Option<i64> {
        Some(*a as i64)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn mul_add_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn size(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Vec<BigRational> {
        Vec::new()
    }
    fn random<R: Rng>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }
    fn to_i64(&self, a: &BigRational) -> Option<i64> {
        if a.is_integer() {
            a.to_integer().to_i64()
        } else {
            None
        }
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.to_integer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom().abs())
        }
    }
}

/// Multiplicative order of a nonzero element of a finite field.
fn multiplicative_order<F: Field>(field: &F, a: &F::Elem, bound: u64) -> Option<u64> {
    let mut x = a.clone();
    for m in 1..=bound {
        if field.is_one(&x) {
            return Some(m);
        }
        x = field.mul(&x, a);
    }
    None
}

/// An element of multiplicative order exactly `n`, found by exhaustive
/// search in increasing canonical order.
///
/// Over the rationals only `n = 1` and `n = 2` have answers.
pub fn root_of_unity<F: Field>(field: &F, n: u64) -> Result<F::Elem> {
    if n == 0 {
        return Err(Error::NoSuchRoot {
            field: field.kind().to_string(),
            order: n,
        });
    }
    match field.kind() {
        FieldKind::Rational => match n {
            1 => Ok(field.one()),
            2 => Ok(field.from_i64(-1)),
            _ => Err(Error::UnsupportedField(format!(
                "QQ has no primitive root of unity of order {n}"
            ))),
        },
        FieldKind::Prime(p) => {
            if (p - 1) % n != 0 {
                return Err(Error::NoSuchRoot {
                    field: field.kind().to_string(),
                    order: n,
                });
            }
            field
                .elements()
                .into_iter()
                .skip(1)
                .find(|a| multiplicative_order(field, a, n) == Some(n))
                .ok_or(Error::NoSuchRoot {
                    field: field.kind().to_string(),
                    order: n,
                })
        }
    }
}

/// Rational number `num/den` as a field element, `None` if `den` vanishes.
pub fn ratio<F: Field>(field: &F, num: &BigInt, den: &BigInt) -> Option<F::Elem> {
    field.div(&field.from_bigint(num), &field.from_bigint(den))
}
