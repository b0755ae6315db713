//! Binary polynomials packed into a `u128`, bit `k` holding the coefficient
//! of `x^k`. Every routine keeps intermediate values below 128 bits, so any
//! modulus of degree at most 126 is supported.

/// Degree of `a`, or `None` for the zero polynomial.
#[inline]
pub fn degree(a: u128) -> Option<u32> {
    if a == 0 {
        None
    } else {
        Some(127 - a.leading_zeros())
    }
}

/// Plain product. Caller guarantees `deg(a) + deg(b) < 128`.
pub fn mul(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Quotient and remainder of `a / b`. Panics if `b` is zero.
pub fn divrem(a: u128, b: u128) -> (u128, u128) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut q = 0u128;
    let mut r = a;
    while let Some(dr) = degree(r) {
        if dr < db {
            break;
        }
        let shift = dr - db;
        q |= 1u128 << shift;
        r ^= b << shift;
    }
    (q, r)
}

#[inline]
pub fn rem(a: u128, b: u128) -> u128 {
    divrem(a, b).1
}

/// `a * b mod modulus` by interleaved shift-and-reduce. Inputs must already
/// be reduced; `deg(modulus) <= 126`.
pub fn mul_mod(a: u128, b: u128, modulus: u128) -> u128 {
    let d = degree(modulus).expect("zero modulus");
    let top = 1u128 << d;
    let mut a = a;
    let mut b = b;
    let mut acc = 0u128;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc
}

pub fn pow_mod(base: u128, mut exp: u128, modulus: u128) -> u128 {
    let mut result = rem(1, modulus);
    let mut b = rem(base, modulus);
    while exp != 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    result
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Returns `(g, u)` with `g = gcd(a, m)` and `u * a ≡ g (mod m)`.
pub fn ext_gcd(a: u128, m: u128) -> (u128, u128) {
    let (mut r0, mut r1) = (m, rem(a, m));
    let (mut s0, mut s1) = (0u128, 1u128);
    while r1 != 0 {
        let (q, r) = divrem(r0, r1);
        r0 = r1;
        r1 = r;
        // Bezout coefficients stay below deg(m), so the product cannot overflow.
        let s = s0 ^ mul(q, s1);
        s0 = s1;
        s1 = s;
    }
    (r0, rem(s0, m))
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    let (g, u) = ext_gcd(a, m);
    (g == 1).then_some(u)
}

/// Irreducibility over GF(2) via Rabin's test.
pub fn is_irreducible(f: u128) -> bool {
    let d = match degree(f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    // x^(2^d) ≡ x (mod f), and gcd(x^(2^(d/q)) - x, f) = 1 for each prime q | d.
    let x = rem(2, f);
    let frob = |k: u32| {
        let mut y = x;
        for _ in 0..k {
            y = mul_mod(y, y, f);
        }
        y
    };
    if frob(d) != x {
        return false;
    }
    prime_factors(d as u64)
        .into_iter()
        .all(|q| gcd(f, frob(d / q as u32) ^ x) == 1)
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a squarefree `f` whose irreducible factors all have degree `d`
/// (equal-degree factorization, trace variant for characteristic 2).
/// Factors are returned in ascending numeric order.
pub fn equal_degree_factors(f: u128, d: u32) -> Vec<u128> {
    let mut out = Vec::new();
    split_equal_degree(f, d, &mut out);
    out.sort_unstable();
    out
}

fn split_equal_degree(f: u128, d: u32, out: &mut Vec<u128>) {
    let deg_f = degree(f).expect("zero polynomial");
    if deg_f == d {
        out.push(f);
        return;
    }
    // Deterministic candidate sweep; the trace map Tr(a) = a + a^2 + ... + a^(2^(d-1))
    // takes values in GF(2) on each factor field, so some small `a` separates
    // any two distinct factors.
    let mut a: u128 = 2;
    loop {
        let ar = rem(a, f);
        let mut t = ar;
        let mut sq = ar;
        for _ in 1..d {
            sq = mul_mod(sq, sq, f);
            t ^= sq;
        }
        let g = gcd(f, t);
        if let Some(dg) = degree(g) {
            if dg > 0 && dg < deg_f {
                split_equal_degree(g, d, out);
                split_equal_degree(divrem(f, g).0, d, out);
                return;
            }
        }
        a += 1;
    }
}
