//! Parity-check matrices for SD codes.
//!
//! Every matrix has `m·r + s` rows and `r·n` columns. The sector in stripe
//! row `i` on disk `j` owns column `n·i + j`. Row `k < m·r` is a local row of
//! block `⌊k/m⌋` and is zero outside columns `n·⌊k/m⌋ .. n·⌊k/m⌋ + n`; the last
//! `s` rows are global and have no zero entries.
//!
//! Two explicit families are provided:
//!
//! * [`build_h1`] (m = 1, s = 2): local rows of ones; global entries
//!   `α^(in+j)` and `α^(2in−j)` at column `in + j`.
//! * [`build_h2`] (m = 2, s = 2): local row pairs `1, α^j`; global entries
//!   `α^(3in−j)` and `α^(2(in+j))`.
//!
//! Both are SD whenever `r·n ≤ O(α)`.

pub mod format;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraSpec, Element};
use crate::linalg::Matrix;

pub use format::{parse_matrix, read_matrix, write_matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("r·n = {rn} exceeds O(α) = {order}; the construction needs r·n ≤ O(α)")]
    OrderTooSmall { rn: usize, order: u32 },
    #[error("invalid code parameters: {0}")]
    BadParams(String),
    #[error("global entry at row {row}, column {col} is zero")]
    ZeroGlobalEntry { row: usize, col: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// m = 1, s = 2.
    Construction1,
    /// m = 2, s = 2.
    Construction2,
    /// Fixed local rows, caller-supplied global rows.
    Generic,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Construction1 => "construction1",
            Family::Construction2 => "construction2",
            Family::Generic => "generic",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "construction1" => Ok(Family::Construction1),
            "construction2" => Ok(Family::Construction2),
            "generic" => Ok(Family::Generic),
            _ => Err(format!("unknown family `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    /// Disks.
    pub n: usize,
    /// Whole-disk parities per stripe row.
    pub m: usize,
    /// Extra parity sectors per stripe.
    pub s: usize,
    /// Sectors per disk in a stripe.
    pub r: usize,
    pub algebra: AlgebraSpec,
    pub family: Family,
}

impl CodeSpec {
    pub fn check_rows(&self) -> usize {
        self.m * self.r + self.s
    }

    pub fn len(&self) -> usize {
        self.r * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of data symbols in a stripe.
    pub fn dimension(&self) -> usize {
        self.len().saturating_sub(self.check_rows())
    }

    #[inline]
    pub fn column(&self, row: usize, disk: usize) -> usize {
        self.n * row + disk
    }

    /// Checks the parameter invariants against a built algebra.
    pub fn validate(&self, alg: &Algebra) -> Result<(), ConstructError> {
        if self.m == 0 || self.m >= self.n {
            return Err(ConstructError::BadParams(format!(
                "need 0 < m < n, got m={} n={}",
                self.m, self.n
            )));
        }
        if self.r == 0 {
            return Err(ConstructError::BadParams("need r ≥ 1".into()));
        }
        if self.check_rows() > self.len() {
            return Err(ConstructError::BadParams(format!(
                "m·r + s = {} exceeds r·n = {}",
                self.check_rows(),
                self.len()
            )));
        }
        let fixed = match self.family {
            Family::Construction1 => Some((1, 2)),
            Family::Construction2 => Some((2, 2)),
            Family::Generic => None,
        };
        if let Some((m, s)) = fixed {
            if (self.m, self.s) != (m, s) {
                return Err(ConstructError::BadParams(format!(
                    "{} requires m={m} s={s}",
                    self.family
                )));
            }
            if self.len() > alg.order_of_alpha() as usize {
                return Err(ConstructError::OrderTooSmall {
                    rn: self.len(),
                    order: alg.order_of_alpha(),
                });
            }
        } else if self.n > alg.order_of_alpha() as usize {
            return Err(ConstructError::BadParams(format!(
                "local rows need n ≤ O(α) = {}",
                alg.order_of_alpha()
            )));
        }
        Ok(())
    }
}

/// A parity-check matrix together with its code parameters.
#[derive(Clone)]
pub struct ParityCheckMatrix {
    spec: CodeSpec,
    algebra: Arc<Algebra>,
    h: Matrix,
}

impl fmt::Debug for ParityCheckMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParityCheckMatrix")
            .field("spec", &self.spec)
            .field("h", &self.h)
            .finish()
    }
}

impl PartialEq for ParityCheckMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.h == other.h
    }
}

impl ParityCheckMatrix {
    /// Wraps `h` after checking its shape and that entries lie in the algebra.
    /// The zero pattern is not enforced; see [`validate_structure`].
    pub fn new(spec: CodeSpec, algebra: Arc<Algebra>, h: Matrix) -> Result<Self, ConstructError> {
        if spec.algebra != algebra.spec() {
            return Err(ConstructError::ShapeMismatch(format!(
                "spec declares `{}`, algebra is `{}`",
                spec.algebra,
                algebra.spec()
            )));
        }
        if h.rows() != spec.check_rows() || h.cols() != spec.len() {
            return Err(ConstructError::ShapeMismatch(format!(
                "matrix is {}x{}, parameters need {}x{}",
                h.rows(),
                h.cols(),
                spec.check_rows(),
                spec.len()
            )));
        }
        if let Some(bad) = h.data().iter().find(|e| !algebra.contains(**e)) {
            return Err(ConstructError::ShapeMismatch(format!(
                "entry {bad} is outside the algebra"
            )));
        }
        Ok(ParityCheckMatrix { spec, algebra, h })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn get(&self, row: usize, col: usize) -> Element {
        self.h.get(row, col)
    }

    /// Overwrites one entry. Used to build perturbed variants.
    pub fn set(&mut self, row: usize, col: usize, v: Element) {
        self.h.set(row, col, v);
    }

    pub fn into_parts(self) -> (CodeSpec, Arc<Algebra>, Matrix) {
        (self.spec, self.algebra, self.h)
    }
}

/// The two global entries of the m = 1 construction at column `in + j`.
pub fn construction1_globals(alg: &Algebra, n: usize, i: usize, j: usize) -> [Element; 2] {
    let (i, j, n) = (i as i64, j as i64, n as i64);
    [alg.alpha_pow(i * n + j), alg.alpha_pow(2 * i * n - j)]
}

/// The two global entries of the m = 2 construction at column `in + j`.
pub fn construction2_globals(alg: &Algebra, n: usize, i: usize, j: usize) -> [Element; 2] {
    let (i, j, n) = (i as i64, j as i64, n as i64);
    [alg.alpha_pow(3 * i * n - j), alg.alpha_pow(2 * (i * n + j))]
}

fn fill_local_rows(alg: &Algebra, h: &mut Matrix, n: usize, m: usize, r: usize) {
    for i in 0..r {
        for t in 0..m {
            for j in 0..n {
                h.set(m * i + t, n * i + j, alg.alpha_pow((t * j) as i64));
            }
        }
    }
}

fn build_explicit(
    r: usize,
    n: usize,
    alg: &Arc<Algebra>,
    family: Family,
    m: usize,
    globals: fn(&Algebra, usize, usize, usize) -> [Element; 2],
) -> Result<ParityCheckMatrix, ConstructError> {
    let spec = CodeSpec {
        n,
        m,
        s: 2,
        r,
        algebra: alg.spec(),
        family,
    };
    spec.validate(alg)?;
    let mut h = Matrix::zeros(spec.check_rows(), spec.len());
    fill_local_rows(alg, &mut h, n, m, r);
    for i in 0..r {
        for j in 0..n {
            let [g0, g1] = globals(alg, n, i, j);
            h.set(m * r, n * i + j, g0);
            h.set(m * r + 1, n * i + j, g1);
        }
    }
    ParityCheckMatrix::new(spec, alg.clone(), h)
}

/// The `(r + 2) × rn` matrix of the m = 1, s = 2 construction.
pub fn build_h1(r: usize, n: usize, alg: &Arc<Algebra>) -> Result<ParityCheckMatrix, ConstructError> {
    build_explicit(r, n, alg, Family::Construction1, 1, construction1_globals)
}

/// The `(2r + 2) × rn` matrix of the m = 2, s = 2 construction.
pub fn build_h2(r: usize, n: usize, alg: &Arc<Algebra>) -> Result<ParityCheckMatrix, ConstructError> {
    build_explicit(r, n, alg, Family::Construction2, 2, construction2_globals)
}

/// Local rows in the construction-2 style (parity `t` of block `i` holds
/// `α^(t·j)` at column `in + j`), global rows as supplied (`s` rows of `rn`
/// nonzero entries).
pub fn build_h_generic(
    n: usize,
    m: usize,
    s: usize,
    r: usize,
    global_rows: &[Vec<Element>],
    alg: &Arc<Algebra>,
) -> Result<ParityCheckMatrix, ConstructError> {
    let spec = CodeSpec {
        n,
        m,
        s,
        r,
        algebra: alg.spec(),
        family: Family::Generic,
    };
    if global_rows.len() != s || global_rows.iter().any(|row| row.len() != r * n) {
        return Err(ConstructError::ShapeMismatch(format!(
            "global rows must be {s} x {}",
            r * n
        )));
    }
    spec.validate(alg)?;
    let mut h = Matrix::zeros(spec.check_rows(), spec.len());
    fill_local_rows(alg, &mut h, n, m, r);
    for (k, row) in global_rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v.is_zero() {
                return Err(ConstructError::ZeroGlobalEntry { row: m * r + k, col: c });
            }
            h.set(m * r + k, c, v);
        }
    }
    ParityCheckMatrix::new(spec, alg.clone(), h)
}

/// Checks the zero pattern: local row `k` is zero outside block `⌊k/m⌋`, and
/// every global entry is nonzero.
pub fn validate_structure(pcm: &ParityCheckMatrix) -> bool {
    structure_violation(pcm).is_none()
}

/// First `(row, col)` breaking the zero pattern, if any.
pub fn structure_violation(pcm: &ParityCheckMatrix) -> Option<(usize, usize)> {
    let CodeSpec { n, m, r, .. } = *pcm.spec();
    let h = pcm.h();
    if h.rows() != pcm.spec().check_rows() || h.cols() != pcm.spec().len() {
        return Some((0, 0));
    }
    for row in 0..h.rows() {
        if row < m * r {
            let block = row / m;
            let inside = n * block..n * block + n;
            if let Some(c) = (0..h.cols()).find(|c| !inside.contains(c) && !h.get(row, *c).is_zero()) {
                return Some((row, c));
            }
        } else if let Some(c) = (0..h.cols()).find(|&c| h.get(row, c).is_zero()) {
            return Some((row, c));
        }
    }
    None
}
