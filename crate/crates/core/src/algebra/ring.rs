//! The ring R_p = GF(2)[x] / M_p(x), with M_p(x) = 1 + x + ... + x^(p-1).
//!
//! Residues are kept with degree ≤ p − 2. Products are formed cyclically
//! modulo x^p + 1 (a multiple of M_p) and then folded by the substitution
//! x^(p−1) ← 1 + x + ... + x^(p−2).
//!
//! M_p is squarefree for odd p, so R_p splits as a product of fields, one per
//! irreducible factor of M_p. Invertibility questions over R_p are answered
//! factor by factor and results are lifted back with CRT idempotents.

use super::field::BinaryField;
use super::poly;
use super::AlgebraError;

/// Largest supported ring prime; residues must fit in 126 bits.
pub const MAX_RING_PRIME: u32 = 127;

/// Irreducible factorization of M_p(x) over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpFactorization {
    pub p: u32,
    /// Irreducible factors, ascending by bit pattern. Their product is M_p.
    pub factors: Vec<u128>,
}

impl MpFactorization {
    pub fn product(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &f| poly::mul(acc, f))
    }

    /// Common degree of all factors (the multiplicative order of 2 mod p).
    pub fn factor_degree(&self) -> u32 {
        poly::degree(self.factors[0]).unwrap_or(0)
    }
}

/// Bit pattern of M_p(x).
pub fn mp_poly(p: u32) -> u128 {
    (1u128 << p) - 1
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicative order of 2 modulo an odd prime `p`.
pub fn order_of_two_mod(p: u32) -> u32 {
    let mut v = 2 % p;
    let mut k = 1;
    while v != 1 {
        v = (v * 2) % p;
        k += 1;
    }
    k
}

/// Factors M_p(x). All factors share the degree ord_p(2).
pub fn mp_factorization(p: u32) -> Result<MpFactorization, AlgebraError> {
    check_ring_prime(p)?;
    let d = order_of_two_mod(p);
    let factors = poly::equal_degree_factors(mp_poly(p), d);
    Ok(MpFactorization { p, factors })
}

fn check_ring_prime(p: u32) -> Result<(), AlgebraError> {
    if p < 3 || !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    if p > MAX_RING_PRIME {
        return Err(AlgebraError::RingTooLarge(p));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct PolyRing {
    p: u32,
    /// Mask of the p − 1 residue bits.
    mask: u128,
    factorization: MpFactorization,
    components: Vec<BinaryField>,
    /// e_k ≡ 1 mod f_k and ≡ 0 mod every other factor.
    idempotents: Vec<u128>,
}

impl PolyRing {
    pub fn new(p: u32) -> Result<Self, AlgebraError> {
        let factorization = mp_factorization(p)?;
        let mp = mp_poly(p);
        let components = factorization
            .factors
            .iter()
            .map(|&f| BinaryField::new(f))
            .collect();
        let idempotents = factorization
            .factors
            .iter()
            .map(|&f| {
                let cofactor = poly::divrem(mp, f).0;
                let c_inv = poly::inv_mod(poly::rem(cofactor, f), f)
                    .expect("M_p is squarefree, cofactors are coprime");
                poly::mul_mod(poly::rem(cofactor, mp), c_inv, mp)
            })
            .collect();
        Ok(PolyRing {
            p,
            mask: (1u128 << (p - 1)) - 1,
            factorization,
            components,
            idempotents,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn modulus(&self) -> u128 {
        mp_poly(self.p)
    }

    pub fn width(&self) -> u32 {
        self.p - 1
    }

    pub fn factorization(&self) -> &MpFactorization {
        &self.factorization
    }

    pub fn components(&self) -> &[BinaryField] {
        &self.components
    }

    pub fn is_irreducible_modulus(&self) -> bool {
        self.components.len() == 1
    }

    /// Folds a polynomial of degree < p into the residue range.
    #[inline]
    fn fold(&self, v: u128) -> u128 {
        if v >> (self.p - 1) & 1 == 1 {
            (v ^ (1u128 << (self.p - 1))) ^ self.mask
        } else {
            v
        }
    }

    /// Reduces any polynomial of degree < 128 modulo M_p.
    pub fn reduce(&self, bits: u128) -> u128 {
        let p = self.p;
        // x^p ≡ 1 mod (x^p + 1) first, then fold.
        let mut v = 0u128;
        let mut rest = bits;
        while rest != 0 {
            v ^= rest & ((1u128 << p) - 1);
            rest >>= p;
        }
        self.fold(v)
    }

    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let p = self.p;
        let full = (1u128 << p) - 1;
        let mut acc = 0u128;
        let mut b = b;
        let mut k = 0;
        while b != 0 {
            if b & 1 == 1 {
                // a · x^k mod (x^p + 1) is a cyclic rotation within p bits.
                let rot = if k == 0 {
                    a
                } else {
                    ((a << k) | (a >> (p - k))) & full
                };
                acc ^= rot;
            }
            b >>= 1;
            k += 1;
        }
        self.fold(acc)
    }

    /// α^k for α = x, 0 ≤ k < p.
    pub fn x_pow(&self, k: u32) -> u128 {
        debug_assert!(k < self.p);
        self.fold(1u128 << k)
    }

    pub fn is_unit(&self, a: u128) -> bool {
        a != 0 && poly::gcd(self.modulus(), a) == 1
    }

    pub fn inv(&self, a: u128) -> Option<u128> {
        if a == 0 {
            return None;
        }
        poly::inv_mod(a, self.modulus())
    }

    /// Image of a residue in the `k`-th component field.
    pub fn project(&self, k: usize, a: u128) -> u128 {
        poly::rem(a, self.components[k].modulus())
    }

    /// Unique residue with the given component images.
    pub fn lift(&self, parts: &[u128]) -> u128 {
        debug_assert_eq!(parts.len(), self.components.len());
        let mut acc = 0u128;
        for (&part, &e) in parts.iter().zip(&self.idempotents) {
            if part != 0 {
                acc ^= self.mul(part, e);
            }
        }
        acc
    }
}
