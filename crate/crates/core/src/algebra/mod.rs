//! Arithmetic contexts: binary extension fields GF(2^w) and the
//! ring of binary polynomials modulo M_p(x).
//!
//! In both cases α is the residue of `x`. Elements are plain bit vectors
//! ([`Element`]); an [`Algebra`] gives them meaning.

mod field;
pub mod poly;
mod ring;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub(crate) use field::with_field;
pub use field::{BinaryField, ClmulField, FieldOps, TableField};
pub use ring::{is_prime, mp_factorization, mp_poly, order_of_two_mod, PolyRing, MpFactorization, MAX_RING_PRIME};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("field width w={0} is outside 2..=16")]
    BadWidth(u32),
    #[error("modulus {modulus:#x} does not have degree {w}")]
    ModulusDegree { w: u32, modulus: u128 },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u128),
    #[error("ring parameter p={0} is not an odd prime")]
    NotPrime(u32),
    #[error("ring parameter p={0} exceeds the supported maximum of {MAX_RING_PRIME}")]
    RingTooLarge(u32),
    #[error("element {0} does not belong to this algebra")]
    AlgebraMismatch(Element),
    #[error("element {0} is not a unit")]
    NotAUnit(Element),
    #[error("bad algebra descriptor `{0}`")]
    BadDescriptor(String),
}

/// A field or ring element as a bit vector: bit `k` is the coefficient of `x^k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub u128);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    #[inline]
    pub fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x:{:x}", self.0)
    }
}

/// Default field moduli, bit `k` = coefficient of `x^k`. All are primitive,
/// so α = x generates the multiplicative group.
pub const DEFAULT_MODULI: [u32; 15] = [
    0x7, 0xb, 0x13, 0x25, 0x43, 0x89, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443, 0x8003,
    0x1100b,
];

pub fn default_modulus(w: u32) -> Option<u32> {
    (2..=16).contains(&w).then(|| DEFAULT_MODULI[(w - 2) as usize])
}

/// Serializable description of an algebra.
///
/// Text form: `field w=<int> poly=0x<hex>` or `ring p=<int>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraSpec {
    Field { w: u32, modulus: u32 },
    Ring { p: u32 },
}

impl AlgebraSpec {
    pub fn field(w: u32) -> Result<Self, AlgebraError> {
        let modulus = default_modulus(w).ok_or(AlgebraError::BadWidth(w))?;
        Ok(AlgebraSpec::Field { w, modulus })
    }

    pub fn ring(p: u32) -> Self {
        AlgebraSpec::Ring { p }
    }

    /// Parses the CLI flag form: `w=4,poly=0x13` (poly optional) for fields,
    /// `p=17` for rings.
    pub fn from_field_flag(s: &str) -> Result<Self, AlgebraError> {
        parse_field_kv(s.split(',').map(str::trim), s)
    }

    pub fn from_ring_flag(s: &str) -> Result<Self, AlgebraError> {
        parse_ring_kv(s.split(',').map(str::trim), s)
    }
}

fn parse_field_kv<'a>(
    parts: impl Iterator<Item = &'a str>,
    whole: &str,
) -> Result<AlgebraSpec, AlgebraError> {
    let bad = || AlgebraError::BadDescriptor(whole.to_string());
    let mut w = None;
    let mut modulus = None;
    for part in parts.filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(bad)?;
        match key {
            "w" => w = Some(value.parse::<u32>().map_err(|_| bad())?),
            "poly" => {
                let hex = value
                    .strip_prefix("0x")
                    .or_else(|| value.strip_prefix("0X"))
                    .ok_or_else(bad)?;
                modulus = Some(u32::from_str_radix(hex, 16).map_err(|_| bad())?);
            }
            _ => return Err(bad()),
        }
    }
    let w = w.ok_or_else(bad)?;
    let modulus = match modulus {
        Some(m) => m,
        None => default_modulus(w).ok_or(AlgebraError::BadWidth(w))?,
    };
    Ok(AlgebraSpec::Field { w, modulus })
}

fn parse_ring_kv<'a>(
    parts: impl Iterator<Item = &'a str>,
    whole: &str,
) -> Result<AlgebraSpec, AlgebraError> {
    let bad = || AlgebraError::BadDescriptor(whole.to_string());
    let mut p = None;
    for part in parts.filter(|p| !p.is_empty()) {
        match part.split_once('=') {
            Some(("p", v)) => p = Some(v.parse::<u32>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    Ok(AlgebraSpec::Ring { p: p.ok_or_else(bad)? })
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraSpec::Field { w, modulus } => write!(f, "field w={w} poly={modulus:#x}"),
            AlgebraSpec::Ring { p } => write!(f, "ring p={p}"),
        }
    }
}

impl FromStr for AlgebraSpec {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        match words.next() {
            Some("field") => parse_field_kv(words, s),
            Some("ring") => parse_ring_kv(words, s),
            _ => Err(AlgebraError::BadDescriptor(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Field(BinaryField),
    Ring(PolyRing),
}

/// An immutable arithmetic context. Cheap to share behind an `Arc`.
#[derive(Clone, Debug)]
pub struct Algebra {
    spec: AlgebraSpec,
    kind: Kind,
    order: u32,
    /// alpha_pows[k] = α^k for 0 ≤ k < O(α).
    alpha_pows: Vec<Element>,
    alpha_logs: HashMap<u128, u32>,
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Self, AlgebraError> {
        match spec {
            AlgebraSpec::Field { w, modulus } => Self::field(w, modulus),
            AlgebraSpec::Ring { p } => Self::ring(p),
        }
    }

    /// GF(2^w) defined by `modulus`.
    pub fn field(w: u32, modulus: u32) -> Result<Self, AlgebraError> {
        if !(2..=16).contains(&w) {
            return Err(AlgebraError::BadWidth(w));
        }
        let m = modulus as u128;
        if poly::degree(m) != Some(w) {
            return Err(AlgebraError::ModulusDegree { w, modulus: m });
        }
        if !poly::is_irreducible(m) {
            return Err(AlgebraError::ReducibleModulus(m));
        }
        let bf = BinaryField::new(m);
        let mut alpha_pows = vec![Element::ONE];
        let mut v = bf.mul_bits(1, 2);
        while v != 1 {
            alpha_pows.push(Element(v));
            v = bf.mul_bits(v, 2);
        }
        Ok(Self::assemble(
            AlgebraSpec::Field { w, modulus },
            Kind::Field(bf),
            alpha_pows,
        ))
    }

    /// The ring modulo M_p(x); O(α) = p.
    pub fn ring(p: u32) -> Result<Self, AlgebraError> {
        let ring = PolyRing::new(p)?;
        let alpha_pows = (0..p).map(|k| Element(ring.x_pow(k))).collect();
        Ok(Self::assemble(AlgebraSpec::Ring { p }, Kind::Ring(ring), alpha_pows))
    }

    fn assemble(spec: AlgebraSpec, kind: Kind, alpha_pows: Vec<Element>) -> Self {
        let alpha_logs = alpha_pows
            .iter()
            .enumerate()
            .map(|(k, e)| (e.0, k as u32))
            .collect();
        Algebra {
            spec,
            kind,
            order: alpha_pows.len() as u32,
            alpha_pows,
            alpha_logs,
        }
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, Kind::Field(_))
    }

    /// Number of bits in an element.
    pub fn width(&self) -> u32 {
        match &self.kind {
            Kind::Field(f) => f.degree(),
            Kind::Ring(r) => r.width(),
        }
    }

    pub fn contains(&self, a: Element) -> bool {
        a.0 >> self.width() == 0
    }

    pub fn check(&self, a: Element) -> Result<Element, AlgebraError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(AlgebraError::AlgebraMismatch(a))
        }
    }

    /// Reduces an arbitrary bit polynomial into the algebra.
    pub fn reduce(&self, bits: u128) -> Element {
        match &self.kind {
            Kind::Field(f) => Element(poly::rem(bits, f.modulus())),
            Kind::Ring(r) => Element(r.reduce(bits)),
        }
    }

    /// Multiplicative order of α.
    pub fn order_of_alpha(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        Element(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        match &self.kind {
            Kind::Field(f) => Element(f.mul_bits(a.0, b.0)),
            Kind::Ring(r) => Element(r.mul(a.0, b.0)),
        }
    }

    pub fn try_add(&self, a: Element, b: Element) -> Result<Element, AlgebraError> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn try_mul(&self, a: Element, b: Element) -> Result<Element, AlgebraError> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    /// α^k with `k` reduced modulo O(α); negative exponents are allowed.
    pub fn alpha_pow(&self, k: i64) -> Element {
        let idx = k.rem_euclid(self.order as i64) as usize;
        self.alpha_pows[idx]
    }

    /// The exponent `k ∈ [0, O(α))` with α^k = a, if `a` is a power of α.
    pub fn alpha_log(&self, a: Element) -> Option<u32> {
        self.alpha_logs.get(&a.0).copied()
    }

    pub fn is_unit(&self, a: Element) -> bool {
        match &self.kind {
            Kind::Field(_) => !a.is_zero() && self.contains(a),
            Kind::Ring(r) => self.contains(a) && r.is_unit(a.0),
        }
    }

    pub fn inv(&self, a: Element) -> Result<Element, AlgebraError> {
        let a = self.check(a)?;
        if !self.is_unit(a) {
            return Err(AlgebraError::NotAUnit(a));
        }
        Ok(match &self.kind {
            Kind::Field(f) => Element(f.inv_bits(a.0)),
            Kind::Ring(r) => Element(r.inv(a.0).expect("unit has an inverse")),
        })
    }

    pub fn pow(&self, a: Element, mut e: u64) -> Element {
        let mut result = Element::ONE;
        let mut base = a;
        while e != 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// The fields this algebra decomposes into: itself for a field, the
    /// residue fields GF(2)[x]/f_k for each factor f_k of M_p in a ring.
    pub fn components(&self) -> &[BinaryField] {
        match &self.kind {
            Kind::Field(f) => std::slice::from_ref(f),
            Kind::Ring(r) => r.components(),
        }
    }

    /// Image of `a` in component `k`.
    pub fn project(&self, k: usize, a: Element) -> u128 {
        match &self.kind {
            Kind::Field(_) => a.0,
            Kind::Ring(r) => r.project(k, a.0),
        }
    }

    /// Inverse of [`Algebra::project`] across all components.
    pub fn lift(&self, parts: &[u128]) -> Element {
        match &self.kind {
            Kind::Field(_) => Element(parts[0]),
            Kind::Ring(r) => Element(r.lift(parts)),
        }
    }

    pub fn as_ring(&self) -> Option<&PolyRing> {
        match &self.kind {
            Kind::Ring(r) => Some(r),
            Kind::Field(_) => None,
        }
    }

    /// Iterates over every element. Only sensible for small widths.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0u128..(1u128 << self.width())).map(Element)
    }
}

impl AlgebraSpec {
    pub fn build(self) -> Result<Algebra, AlgebraError> {
        Algebra::new(self)
    }
}
