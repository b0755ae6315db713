//! Test-side oracles. Everything here is written from first principles
//! (shift-and-add polynomial arithmetic, Leibniz determinants, Gauss-Jordan)
//! so the library can be checked against something that shares no code.

#![allow(dead_code)]

use std::sync::Arc;

use sdcode::linalg::Matrix;
use sdcode::{Algebra, Element};

pub fn gf16() -> Arc<Algebra> {
    Arc::new(Algebra::field(4, 0x13).unwrap())
}

pub fn gf256() -> Arc<Algebra> {
    Arc::new(Algebra::field(8, 0x11d).unwrap())
}

pub fn ring(p: u32) -> Arc<Algebra> {
    Arc::new(Algebra::ring(p).unwrap())
}

fn degree(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

fn clmul(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    for k in 0..64 {
        if b >> k & 1 == 1 {
            acc ^= a << k;
        }
    }
    acc
}

fn poly_rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m);
    while degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Reference arithmetic modulo a fixed binary polynomial (irreducible for a
/// field, `1 + x + … + x^(p−1)` for the ring).
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub modulus: u128,
}

impl Oracle {
    pub fn field(modulus: u128) -> Self {
        Oracle { modulus }
    }

    pub fn ring(p: u32) -> Self {
        assert!(p <= 61, "oracle products must fit in u128");
        Oracle { modulus: (1u128 << p) - 1 }
    }

    pub fn for_algebra(alg: &Algebra) -> Self {
        match alg.spec() {
            sdcode::AlgebraSpec::Field { modulus, .. } => Oracle::field(modulus as u128),
            sdcode::AlgebraSpec::Ring { p } => Oracle::ring(p),
        }
    }

    pub fn degree(&self) -> u32 {
        degree(self.modulus) as u32
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(poly_rem(clmul(a.0, b.0), self.modulus))
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        Element(a.0 ^ b.0)
    }

    /// x^k with k reduced into [0, period).
    pub fn x_pow(&self, k: i64, period: i64) -> Element {
        let mut e = k.rem_euclid(period);
        let mut acc = Element::ONE;
        while e > 0 {
            acc = self.mul(acc, Element(2));
            e -= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: Element) -> bool {
        a.0 != 0 && poly_gcd(self.modulus, a.0) == 1
    }

    /// Inverse in a field by exhaustive search (fields here are small).
    pub fn inv(&self, a: Element) -> Option<Element> {
        let size = 1u128 << self.degree();
        (1..size).map(Element).find(|&b| self.mul(a, b) == Element::ONE)
    }

    /// Leibniz expansion; in characteristic 2 signs vanish.
    pub fn det(&self, m: &[Vec<Element>]) -> Element {
        let n = m.len();
        let mut used = vec![false; n];
        self.det_rec(m, 0, &mut used)
    }

    fn det_rec(&self, m: &[Vec<Element>], row: usize, used: &mut [bool]) -> Element {
        if row == m.len() {
            return Element::ONE;
        }
        let mut acc = Element::ZERO;
        for c in 0..m.len() {
            if used[c] || m[row][c].is_zero() {
                continue;
            }
            used[c] = true;
            let rest = self.det_rec(m, row + 1, used);
            used[c] = false;
            acc = self.add(acc, self.mul(m[row][c], rest));
        }
        acc
    }

    /// Gauss-Jordan over a field. `None` when singular.
    pub fn solve(&self, m: &[Vec<Element>], b: &[Element]) -> Option<Vec<Element>> {
        let n = m.len();
        let mut a: Vec<Vec<Element>> = m
            .iter()
            .zip(b)
            .map(|(row, &bi)| {
                let mut r = row.clone();
                r.push(bi);
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let inv = self.inv(a[col][col])?;
            for v in a[col].iter_mut() {
                *v = self.mul(*v, inv);
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    let pivot_row = a[col].clone();
                    for (v, &pv) in a[r].iter_mut().zip(&pivot_row) {
                        let t = self.mul(f, pv);
                        *v = self.add(*v, t);
                    }
                }
            }
        }
        Some(a.into_iter().map(|r| r[n]).collect())
    }
}

pub fn rows_of(m: &Matrix) -> Vec<Vec<Element>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All irreducible binary polynomials of exact degree `d`, by trial division.
pub fn irreducibles(d: u32) -> Vec<u128> {
    let is_irred = |f: u128| {
        (2u128..(1u128 << (d / 2 + 1)))
            .filter(|&g| degree(g) >= 1 && degree(g) as u32 <= d / 2)
            .all(|g| poly_rem(f, g) != 0)
    };
    ((1u128 << d)..(1u128 << (d + 1))).filter(|&f| is_irred(f)).collect()
}

pub fn poly_product(fs: &[u128]) -> u128 {
    fs.iter().fold(1u128, |acc, &f| clmul(acc, f))
}
