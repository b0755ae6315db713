//! Dense matrices over an [`Algebra`].
//!
//! Invertibility, rank and solving go through the algebra's component
//! fields: a field is its own single component, while the ring modulo M_p
//! splits into one residue field per irreducible factor of M_p. A matrix over
//! the ring is invertible exactly when every component image is. The
//! determinant is computed directly in the algebra by cofactor expansion and
//! serves as an independent check on that route.

pub mod kernel;

use std::fmt;

use thiserror::Error;

use crate::algebra::{with_field, Algebra, BinaryField, Element, FieldOps};

pub use kernel::SolveFailure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("index out of range or not strictly increasing")]
    IndexOutOfRange,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {0} exceeds the cofactor-expansion limit of {MAX_DET_DIM}")]
    TooLarge(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("singular system")]
    SingularSystem,
    #[error("inconsistent system")]
    Inconsistent,
}

/// Largest dimension accepted by [`determinant`].
pub const MAX_DET_DIM: usize = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| format!("{:x}", e.0)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Element>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Element::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Element::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Element>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Element {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Element) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Element] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Element] {
        &self.data
    }

    /// `self · v`.
    pub fn mul_vec(&self, alg: &Algebra, v: &[Element]) -> Result<Vec<Element>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Element::ZERO, |acc, (&a, &b)| alg.add(acc, alg.mul(a, b)))
            })
            .collect())
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

fn strictly_increasing_below(ids: &[usize], bound: usize) -> bool {
    ids.windows(2).all(|w| w[0] < w[1]) && ids.last().is_none_or(|&last| last < bound)
}

pub fn submatrix(m: &Matrix, row_ids: &[usize], col_ids: &[usize]) -> Result<Matrix, LinalgError> {
    if !strictly_increasing_below(row_ids, m.rows) || !strictly_increasing_below(col_ids, m.cols) {
        return Err(LinalgError::IndexOutOfRange);
    }
    let data = row_ids
        .iter()
        .flat_map(|&r| col_ids.iter().map(move |&c| m.get(r, c)))
        .collect();
    Ok(Matrix {
        rows: row_ids.len(),
        cols: col_ids.len(),
        data,
    })
}

/// Determinant by cofactor expansion along the first row, computed in the
/// algebra itself (valid over the ring). Limited to [`MAX_DET_DIM`].
pub fn determinant(alg: &Algebra, m: &Matrix) -> Result<Element, LinalgError> {
    m.require_square()?;
    if m.rows > MAX_DET_DIM {
        return Err(LinalgError::TooLarge(m.rows));
    }
    let cols: Vec<usize> = (0..m.cols).collect();
    Ok(cofactor_det(alg, m, 0, &cols))
}

fn cofactor_det(alg: &Algebra, m: &Matrix, row: usize, cols: &[usize]) -> Element {
    match cols.len() {
        0 => Element::ONE,
        1 => m.get(row, cols[0]),
        _ => {
            let mut acc = Element::ZERO;
            let mut rest = Vec::with_capacity(cols.len() - 1);
            for (k, &c) in cols.iter().enumerate() {
                let a = m.get(row, c);
                if a.is_zero() {
                    continue;
                }
                rest.clear();
                rest.extend(cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &c)| c));
                // Signs vanish in characteristic 2.
                acc = alg.add(acc, alg.mul(a, cofactor_det(alg, m, row + 1, &rest)));
            }
            acc
        }
    }
}

/// The entries of `m` embedded in one component field.
fn embed<F: FieldOps>(f: &F, m: &Matrix) -> Vec<F::Elem> {
    m.data.iter().map(|e| f.embed(e.0)).collect()
}

fn each_component<T>(alg: &Algebra, mut op: impl FnMut(&BinaryField) -> T) -> Vec<T> {
    alg.components().iter().map(&mut op).collect()
}

pub fn is_invertible(alg: &Algebra, m: &Matrix) -> Result<bool, LinalgError> {
    m.require_square()?;
    Ok(has_full_column_rank(alg, m))
}

/// Full column rank in every component; equivalently, `m` has a left inverse.
pub fn has_full_column_rank(alg: &Algebra, m: &Matrix) -> bool {
    alg.components().iter().all(|bf| {
        with_field!(bf, f => {
            let mut a = embed(f, m);
            kernel::full_column_rank(f, &mut a, m.rows, m.cols)
        })
    })
}

/// Row rank in each component field. A field algebra yields one entry; the
/// ring yields one per irreducible factor of M_p.
pub fn rank(alg: &Algebra, m: &Matrix) -> Vec<usize> {
    each_component(alg, |bf| {
        with_field!(bf, f => {
            let mut a = embed(f, m);
            kernel::rank(f, &mut a, m.rows, m.cols)
        })
    })
}

/// Solves the square system `m · x = b`.
pub fn solve(alg: &Algebra, m: &Matrix, b: &[Element]) -> Result<Vec<Element>, LinalgError> {
    m.require_square()?;
    solve_left(alg, m, b).map_err(|e| match e {
        LinalgError::Inconsistent => LinalgError::SingularSystem,
        other => other,
    })
}

/// Solves `m · x = b` for `m` of full column rank (possibly tall). Reports
/// [`LinalgError::SingularSystem`] for dependent columns and
/// [`LinalgError::Inconsistent`] when `b` lies outside the column space.
pub fn solve_left(alg: &Algebra, m: &Matrix, b: &[Element]) -> Result<Vec<Element>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::ShapeMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    let mut parts: Vec<Vec<u128>> = Vec::with_capacity(alg.components().len());
    let mut inconsistent = false;
    for bf in alg.components() {
        let res = with_field!(bf, f => {
            let mut a = embed(f, m);
            let mut rhs: Vec<_> = b.iter().map(|e| f.embed(e.0)).collect();
            kernel::solve_full_column_rank(f, &mut a, m.rows, m.cols, &mut rhs)
                .map(|x| x.into_iter().map(|v| f.bits(v)).collect::<Vec<u128>>())
        });
        match res {
            Ok(x) => parts.push(x),
            Err(SolveFailure::RankDeficient) => return Err(LinalgError::SingularSystem),
            Err(SolveFailure::Inconsistent) => inconsistent = true,
        }
    }
    if inconsistent {
        return Err(LinalgError::Inconsistent);
    }
    Ok((0..m.cols)
        .map(|i| {
            let comps: Vec<u128> = parts.iter().map(|x| x[i]).collect();
            alg.lift(&comps)
        })
        .collect())
}
