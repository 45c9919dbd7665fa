//! Exact arithmetic for prime fields GF(p) and extension fields GF(p^m).
//!
//! Elements are identified by their canonical integer index: the element with
//! coefficient vector (c_0, .., c_{m-1}) over GF(p) has index sum(c_i * p^i),
//! so index 0 is the additive identity and index 1 the multiplicative one.
//! Multiplication and inversion run off generator-power tables, which caps the
//! supported order at 2^16.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order (tables are O(q)).
pub const MAX_ORDER: u64 = 1 << 16;

/// Orders up to this get a full q*q addition table.
const ADD_TABLE_MAX: u32 = 256;

/// A field element, identified by its canonical index in `[0, q)`.
///
/// An `Element` is only meaningful relative to the [`FiniteField`] it was
/// drawn from; all arithmetic goes through the field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub u16);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The arithmetic context GF(p^m), immutable once built.
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// Monic irreducible of degree m over GF(p), low-to-high; `None` iff m = 1.
    modulus: Option<Vec<u16>>,
    generator: Element,
    /// exp[i] = g^(i mod (q-1)), doubled to 2(q-1) entries so products skip the mod.
    exp: Vec<u16>,
    /// log[a] = discrete log of a base g, for a != 0; log[0] is unused.
    log: Vec<u16>,
    /// Flat q*q sum table for small fields.
    add_table: Option<Vec<u16>>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.m)
        }
    }
}

impl FiniteField {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Arc<Self>> {
        Self::new(p, 1, None)
    }

    /// GF(p^m) with the default (lexicographically smallest) irreducible modulus.
    pub fn extension(p: u32, m: u32) -> Result<Arc<Self>> {
        Self::new(p, m, None)
    }

    /// Builds GF(p^m). When `modulus` is given it must be monic of degree m
    /// over GF(p) (coefficients low-to-high) and is verified irreducible;
    /// otherwise the lexicographically smallest monic irreducible of degree m
    /// (compared by integer index) is selected.
    pub fn new(p: u32, m: u32, modulus: Option<&[u16]>) -> Result<Arc<Self>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m < 1 {
            return Err(Error::PreconditionViolated(
                "extension degree m must be at least 1".into(),
            ));
        }
        let q = (p as u128).checked_pow(m).filter(|&q| q <= MAX_ORDER as u128);
        let q = match q {
            Some(q) => q as u32,
            None => {
                return Err(Error::OrderTooLarge {
                    q: (p as u128).saturating_pow(m),
                    max: MAX_ORDER,
                })
            }
        };

        let modulus = if m == 1 {
            if modulus.is_some() {
                return Err(Error::PreconditionViolated(
                    "prime fields take no modulus".into(),
                ));
            }
            None
        } else {
            let coeffs = match modulus {
                Some(given) => {
                    validate_modulus_shape(given, p, m)?;
                    let coeffs = given.to_vec();
                    if !is_irreducible(&coeffs, p) {
                        return Err(Error::ModulusReducible(poly_string(&coeffs)));
                    }
                    coeffs
                }
                None => smallest_irreducible(p, m),
            };
            Some(coeffs)
        };

        let generator = find_generator(p, m, q, modulus.as_deref());

        // Power tables: exp over two full periods of the multiplicative group,
        // log as its inverse on nonzero elements.
        let period = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * period];
        let mut log = vec![0u16; q as usize];
        let mut cur: u32 = 1;
        for i in 0..period {
            exp[i] = cur as u16;
            exp[i + period] = cur as u16;
            log[cur as usize] = i as u16;
            cur = slow_mul(cur, generator, p, m, modulus.as_deref());
        }
        debug_assert_eq!(cur, 1, "generator order must divide q-1 exactly");

        let add_table = (q <= ADD_TABLE_MAX).then(|| {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = slow_add(a, b, p, m) as u16;
                }
            }
            table
        });

        Ok(Arc::new(FiniteField {
            p,
            m,
            q,
            modulus,
            generator: Element(generator as u16),
            exp,
            log,
            add_table,
        }))
    }

    /// Parses a field spec string: `"p"`, `"p^m"`, or `"p^m/modulus-index"`,
    /// where the modulus index encodes the coefficients low-to-high in base p
    /// (e.g. `2^2/7` selects x^2+x+1 over GF(2)).
    pub fn from_spec(spec: &str) -> Result<Arc<Self>> {
        let bad = |msg: &str| Error::PreconditionViolated(format!("field spec {spec:?}: {msg}"));
        let (base, modulus_index) = match spec.split_once('/') {
            Some((base, idx)) => {
                let idx: u64 = idx.parse().map_err(|_| bad("modulus index must be an integer"))?;
                (base, Some(idx))
            }
            None => (spec, None),
        };
        let (p, m) = match base.split_once('^') {
            Some((p, m)) => (
                p.parse::<u32>().map_err(|_| bad("characteristic must be an integer"))?,
                m.parse::<u32>().map_err(|_| bad("degree must be an integer"))?,
            ),
            None => (base.parse::<u32>().map_err(|_| bad("expected p, p^m or p^m/index"))?, 1),
        };
        match modulus_index {
            None => Self::new(p, m, None),
            Some(idx) => {
                if !is_prime(p as u64) {
                    return Err(Error::NotPrime(p as u64));
                }
                if m < 1 || (p as u128).checked_pow(m + 1).is_none() {
                    return Err(bad("degree out of range"));
                }
                let digits = index_to_digits(idx, p as u64, (m + 1) as usize);
                if idx >= (p as u64).pow(m + 1) {
                    return Err(bad("modulus index out of range for degree m"));
                }
                Self::new(p, m, Some(&digits))
            }
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order q = p^m.
    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low-to-high; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u16]> {
        self.modulus.as_deref()
    }

    /// Modulus encoded as its integer index, matching the field spec syntax.
    pub fn modulus_index(&self) -> Option<u64> {
        self.modulus
            .as_ref()
            .map(|c| digits_to_index(c, self.p as u64))
    }

    /// Spec string that reconstructs this exact field via [`Self::from_spec`].
    pub fn spec_string(&self) -> String {
        match self.modulus_index() {
            None => format!("{}", self.p),
            Some(idx) => format!("{}^{}/{}", self.p, self.m, idx),
        }
    }

    /// Smallest-index primitive element.
    #[inline]
    pub fn generator(&self) -> Element {
        self.generator
    }

    /// generator^i, reduced modulo the group order.
    pub fn generator_pow(&self, i: u64) -> Element {
        Element(self.exp[(i % (self.q as u64 - 1)) as usize])
    }

    /// Checked element construction from an index.
    pub fn element(&self, index: u64) -> Result<Element> {
        if index < self.q as u64 {
            Ok(Element(index as u16))
        } else {
            Err(Error::PreconditionViolated(format!(
                "element index {index} out of range for {self}"
            )))
        }
    }

    /// All q elements in increasing index order.
    pub fn all_elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.q).map(|i| Element(i as u16))
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        debug_assert!(a.index() < self.q as usize && b.index() < self.q as usize);
        if let Some(table) = &self.add_table {
            return Element(table[a.index() * self.q as usize + b.index()]);
        }
        Element(slow_add(a.0 as u32, b.0 as u32, self.p, self.m) as u16)
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return if a.is_zero() {
                a
            } else {
                Element((self.p - a.0 as u32) as u16)
            };
        }
        let mut idx = 0u32;
        let mut rem = a.0 as u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            let c = rem % self.p;
            rem /= self.p;
            if c != 0 {
                idx += (self.p - c) * place;
            }
            place *= self.p;
        }
        Element(idx as u16)
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        if self.p == 2 {
            // characteristic 2: subtraction is addition
            return self.add(a, b);
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a.is_zero() || b.is_zero() {
            return Element::ZERO;
        }
        Element(self.exp[self.log[a.index()] as usize + self.log[b.index()] as usize])
    }

    /// Multiplicative inverse; errors on zero.
    #[inline]
    pub fn inv(&self, a: Element) -> Result<Element> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let period = (self.q - 1) as usize;
        Ok(Element(self.exp[period - self.log[a.index()] as usize]))
    }

    #[inline]
    pub fn div(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with 0^0 = 1.
    pub fn pow(&self, a: Element, e: u64) -> Element {
        if e == 0 {
            return Element::ONE;
        }
        if a.is_zero() {
            return Element::ZERO;
        }
        let period = self.q as u64 - 1;
        let idx = (self.log[a.index()] as u64 * (e % period)) % period;
        Element(self.exp[idx as usize])
    }

    /// Errors unless `other` is the same field (same p, m, modulus).
    pub fn check_same(&self, other: &FiniteField) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(
                self.spec_string(),
                other.spec_string(),
            ))
        }
    }
}

/// Deterministic trial-division primality; plenty for p < 2^16.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn validate_modulus_shape(coeffs: &[u16], p: u32, m: u32) -> Result<()> {
    let want = (m + 1) as usize;
    if coeffs.len() != want || coeffs[want - 1] != 1 {
        return Err(Error::PreconditionViolated(format!(
            "modulus must be monic of degree {m} over GF({p})"
        )));
    }
    if coeffs.iter().any(|&c| c as u32 >= p) {
        return Err(Error::PreconditionViolated(format!(
            "modulus coefficients must lie below p={p}"
        )));
    }
    Ok(())
}

fn index_to_digits(index: u64, base: u64, len: usize) -> Vec<u16> {
    let mut digits = vec![0u16; len];
    let mut rem = index;
    for d in digits.iter_mut() {
        *d = (rem % base) as u16;
        rem /= base;
    }
    digits
}

fn digits_to_index(digits: &[u16], base: u64) -> u64 {
    digits
        .iter()
        .rev()
        .fold(0u64, |acc, &d| acc * base + d as u64)
}

fn poly_string(coeffs: &[u16]) -> String {
    coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

// ---- GF(p)[x] helpers used only while constructing a field ----

/// Remainder of `num` modulo the monic polynomial `den`, over GF(p).
fn gfp_rem(num: &[u16], den: &[u16], p: u32) -> Vec<u16> {
    let mut rem: Vec<u32> = num.iter().map(|&c| c as u32).collect();
    let d = den.len() - 1;
    debug_assert_eq!(den[d], 1);
    while rem.len() > d {
        let lead = *rem.last().unwrap();
        let top = rem.len() - 1;
        if lead != 0 {
            for (t, &dc) in den.iter().enumerate().take(d) {
                let pos = top - d + t;
                rem[pos] = (rem[pos] + (p - dc as u32 % p) % p * lead) % p;
            }
        }
        rem.pop();
    }
    while rem.last() == Some(&0) {
        rem.pop();
    }
    rem.iter().map(|&c| c as u16).collect()
}

/// Trial division against every monic polynomial of degree up to m/2.
fn is_irreducible(coeffs: &[u16], p: u32) -> bool {
    let m = coeffs.len() - 1;
    for d in 1..=m / 2 {
        for lower in 0..(p as u64).pow(d as u32) {
            let mut div = index_to_digits(lower, p as u64, d);
            div.push(1);
            if gfp_rem(coeffs, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest (by integer index) monic irreducible of degree m.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u16> {
    for lower in 0..(p as u64).pow(m) {
        let mut cand = index_to_digits(lower, p as u64, m as usize);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("a monic irreducible of every degree exists over GF(p)")
}

// ---- table-free element arithmetic, used to bootstrap the tables ----

fn slow_add(a: u32, b: u32, p: u32, m: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    if m == 1 {
        return (a + b) % p;
    }
    let (mut idx, mut place) = (0u32, 1u32);
    let (mut ra, mut rb) = (a, b);
    for _ in 0..m {
        idx += (ra % p + rb % p) % p * place;
        ra /= p;
        rb /= p;
        place *= p;
    }
    idx
}

fn slow_mul(a: u32, b: u32, p: u32, m: u32, modulus: Option<&[u16]>) -> u32 {
    if m == 1 {
        return (a as u64 * b as u64 % p as u64) as u32;
    }
    let modulus = modulus.expect("extension fields carry a modulus");
    let da = index_to_digits(a as u64, p as u64, m as usize);
    let db = index_to_digits(b as u64, p as u64, m as usize);
    let mut prod = vec![0u32; 2 * m as usize - 1];
    for (i, &ca) in da.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ca as u32 * cb as u32) % p;
        }
    }
    // reduce by the monic modulus, highest term first
    for i in (m as usize..prod.len()).rev() {
        let c = prod[i];
        if c != 0 {
            prod[i] = 0;
            for (t, &mc) in modulus.iter().enumerate().take(m as usize) {
                prod[i - m as usize + t] =
                    (prod[i - m as usize + t] + (p - mc as u32 % p) % p * c) % p;
            }
        }
    }
    let mut idx = 0u64;
    for (i, &c) in prod.iter().enumerate().take(m as usize) {
        idx += c as u64 * (p as u64).pow(i as u32);
    }
    idx as u32
}

/// Smallest-index element of full multiplicative order q-1.
fn find_generator(p: u32, m: u32, q: u32, modulus: Option<&[u16]>) -> u32 {
    'candidates: for g in 1..q {
        let mut x = g;
        let mut order = 1u32;
        while x != 1 {
            x = slow_mul(x, g, p, m, modulus);
            order += 1;
            if order > q {
                continue 'candidates; // cannot happen in a field, but stay finite
            }
        }
        if order == q - 1 {
            return g;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}
