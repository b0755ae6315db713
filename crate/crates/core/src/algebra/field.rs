//! Binary extension fields GF(2^d).
//!
//! [`FieldOps`] is the scalar interface the elimination kernels in
//! [`crate::linalg`] are generic over. Two representations implement it:
//! [`TableField`] (log/antilog tables, `u16` symbols, degree ≤ 16) and
//! [`ClmulField`] (shift-and-reduce on `u128`, degree ≤ 126). The latter backs
//! the residue fields of large rings modulo M_p(x).

use std::fmt::Debug;

use super::poly;

pub trait FieldOps: Send + Sync {
    type Elem: Copy + Eq + Send + Sync + Debug + Default;

    fn degree(&self) -> u32;
    fn modulus(&self) -> u128;

    fn zero(&self) -> Self::Elem {
        Self::Elem::default()
    }
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: Self::Elem) -> bool {
        a == Self::Elem::default()
    }
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: Self::Elem) -> Self::Elem;

    /// Reduces an arbitrary binary polynomial into the field.
    fn embed(&self, bits: u128) -> Self::Elem;
    fn bits(&self, a: Self::Elem) -> u128;

    /// `dst[k] += f * src[k]` for every `k`.
    fn mul_add_row(&self, dst: &mut [Self::Elem], src: &[Self::Elem], f: Self::Elem) {
        if self.is_zero(f) {
            return;
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.add(*d, self.mul(f, s));
            }
        }
    }

    /// `row[k] *= f` for every `k`.
    fn scale_row(&self, row: &mut [Self::Elem], f: Self::Elem) {
        for v in row.iter_mut() {
            *v = self.mul(*v, f);
        }
    }
}

/// GF(2^d) for `d ≤ 16` with exp/log tables built from a primitive element.
///
/// The table generator is the smallest primitive element, which need not be
/// the residue of `x`; this keeps table multiplication available even when
/// `x` has small order.
#[derive(Clone)]
pub struct TableField {
    degree: u32,
    modulus: u32,
    /// exp[k] = g^k, doubled so log sums need no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
    group_order: usize,
}

impl Debug for TableField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TableField")
            .field("degree", &self.degree)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl TableField {
    /// Builds the tables. `modulus` must be irreducible of degree `2..=16`.
    pub(crate) fn new(modulus: u32) -> Self {
        let degree = poly::degree(modulus as u128).expect("zero modulus");
        debug_assert!((1..=16).contains(&degree));
        let size = 1usize << degree;
        let group_order = size - 1;
        let generator = (2..size as u32)
            .find(|&g| multiplicative_order(g as u128, modulus as u128, group_order) == group_order)
            .unwrap_or(1);
        let mut exp = vec![0u16; 2 * group_order];
        let mut log = vec![0u16; size];
        let mut v = 1u128;
        for (k, slot) in exp.iter_mut().enumerate().take(group_order) {
            *slot = v as u16;
            log[v as usize] = k as u16;
            v = poly::mul_mod(v, generator as u128, modulus as u128);
        }
        for k in group_order..2 * group_order {
            exp[k] = exp[k - group_order];
        }
        TableField {
            degree,
            modulus,
            exp,
            log,
            group_order,
        }
    }
}

fn multiplicative_order(a: u128, modulus: u128, group_order: usize) -> usize {
    // Only called on small fields; a direct walk is fine.
    let mut v = a;
    for k in 1..=group_order {
        if v == 1 {
            return k;
        }
        v = poly::mul_mod(v, a, modulus);
    }
    0
}

impl FieldOps for TableField {
    type Elem = u16;

    fn degree(&self) -> u32 {
        self.degree
    }
    fn modulus(&self) -> u128 {
        self.modulus as u128
    }
    fn one(&self) -> u16 {
        1
    }
    #[inline]
    fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }
    #[inline]
    fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }
    fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        let l = self.log[a as usize] as usize;
        self.exp[(self.group_order - l) % self.group_order]
    }
    fn embed(&self, bits: u128) -> u16 {
        poly::rem(bits, self.modulus as u128) as u16
    }
    fn bits(&self, a: u16) -> u128 {
        a as u128
    }

    fn mul_add_row(&self, dst: &mut [u16], src: &[u16], f: u16) {
        if f == 0 {
            return;
        }
        let lf = self.log[f as usize] as usize;
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d ^= self.exp[lf + self.log[s as usize] as usize];
            }
        }
    }

    fn scale_row(&self, row: &mut [u16], f: u16) {
        if f == 0 {
            row.fill(0);
            return;
        }
        let lf = self.log[f as usize] as usize;
        for v in row.iter_mut() {
            if *v != 0 {
                *v = self.exp[lf + self.log[*v as usize] as usize];
            }
        }
    }
}

/// GF(2)[x]/(f) by shift-and-reduce multiplication; `deg f ≤ 126`.
#[derive(Clone, Debug)]
pub struct ClmulField {
    degree: u32,
    modulus: u128,
}

impl ClmulField {
    pub(crate) fn new(modulus: u128) -> Self {
        let degree = poly::degree(modulus).expect("zero modulus");
        assert!(degree <= 126, "modulus degree {degree} exceeds 126");
        ClmulField { degree, modulus }
    }
}

impl FieldOps for ClmulField {
    type Elem = u128;

    fn degree(&self) -> u32 {
        self.degree
    }
    fn modulus(&self) -> u128 {
        self.modulus
    }
    fn one(&self) -> u128 {
        1
    }
    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        a ^ b
    }
    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        poly::mul_mod(a, b, self.modulus)
    }
    fn inv(&self, a: u128) -> u128 {
        poly::inv_mod(a, self.modulus).expect("inverse of zero")
    }
    fn embed(&self, bits: u128) -> u128 {
        poly::rem(bits, self.modulus)
    }
    fn bits(&self, a: u128) -> u128 {
        a
    }
}

/// A binary field in whichever representation suits its degree.
#[derive(Clone, Debug)]
pub enum BinaryField {
    Table(TableField),
    Clmul(ClmulField),
}

impl BinaryField {
    /// `modulus` must be irreducible; tables are used up to degree 16.
    pub(crate) fn new(modulus: u128) -> Self {
        match poly::degree(modulus) {
            Some(d) if d <= 16 => BinaryField::Table(TableField::new(modulus as u32)),
            _ => BinaryField::Clmul(ClmulField::new(modulus)),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            BinaryField::Table(f) => f.degree(),
            BinaryField::Clmul(f) => f.degree(),
        }
    }

    pub fn modulus(&self) -> u128 {
        match self {
            BinaryField::Table(f) => f.modulus(),
            BinaryField::Clmul(f) => f.modulus(),
        }
    }

    /// Product of two reduced bit-vector elements.
    pub fn mul_bits(&self, a: u128, b: u128) -> u128 {
        match self {
            BinaryField::Table(f) => f.mul(a as u16, b as u16) as u128,
            BinaryField::Clmul(f) => f.mul(a, b),
        }
    }

    pub fn inv_bits(&self, a: u128) -> u128 {
        match self {
            BinaryField::Table(f) => f.inv(a as u16) as u128,
            BinaryField::Clmul(f) => f.inv(a),
        }
    }
}

/// Runs `$body` with `$f` bound to the concrete field representation.
macro_rules! with_field {
    ($bf:expr, $f:ident => $body:expr) => {
        match $bf {
            $crate::algebra::BinaryField::Table($f) => $body,
            $crate::algebra::BinaryField::Clmul($f) => $body,
        }
    };
}
pub(crate) use with_field;
