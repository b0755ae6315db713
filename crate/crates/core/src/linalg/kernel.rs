//! Gaussian elimination over any [`FieldOps`] scalar.
//!
//! Matrices are dense row-major slices. Pivot choice is the first nonzero
//! entry scanning down the column from the current row, so results are
//! deterministic.

use crate::algebra::FieldOps;

/// Outcome of forward elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    /// `(row, col)` of each pivot, in order. Row `i` of the reduced matrix
    /// holds pivot `i`.
    pub pivots: Vec<(usize, usize)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduces `a` (rows × cols) to row echelon form with unit pivots, applying
/// the same row operations to `rhs` when given. When `stop_early` is set,
/// returns as soon as a column without pivot is found.
pub fn forward_eliminate<F: FieldOps>(
    f: &F,
    a: &mut [F::Elem],
    rows: usize,
    cols: usize,
    mut rhs: Option<&mut [F::Elem]>,
    stop_early: bool,
) -> Echelon {
    debug_assert_eq!(a.len(), rows * cols);
    let mut pivots = Vec::with_capacity(rows.min(cols));
    let mut next = 0;
    for c in 0..cols {
        if next == rows {
            if stop_early {
                break;
            }
            continue;
        }
        let Some(p) = (next..rows).find(|&r| !f.is_zero(a[r * cols + c])) else {
            if stop_early {
                break;
            }
            continue;
        };
        if p != next {
            swap_rows(a, cols, p, next);
            if let Some(b) = rhs.as_deref_mut() {
                b.swap(p, next);
            }
        }
        let inv = f.inv(a[next * cols + c]);
        {
            let row = &mut a[next * cols + c..(next + 1) * cols];
            f.scale_row(row, inv);
        }
        if let Some(b) = rhs.as_deref_mut() {
            b[next] = f.mul(b[next], inv);
        }
        let (head, tail) = a.split_at_mut((next + 1) * cols);
        let pivot_row = &head[next * cols + c..];
        for (k, row) in tail.chunks_exact_mut(cols).enumerate() {
            let factor = row[c];
            if f.is_zero(factor) {
                continue;
            }
            f.mul_add_row(&mut row[c..], pivot_row, factor);
            if let Some(b) = rhs.as_deref_mut() {
                let kk = next + 1 + k;
                b[kk] = f.add(b[kk], f.mul(factor, b[next]));
            }
        }
        pivots.push((next, c));
        next += 1;
    }
    Echelon { pivots }
}

fn swap_rows<T>(a: &mut [T], cols: usize, i: usize, j: usize) {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let (head, tail) = a.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

pub fn rank<F: FieldOps>(f: &F, a: &mut [F::Elem], rows: usize, cols: usize) -> usize {
    forward_eliminate(f, a, rows, cols, None, false).rank()
}

/// True iff the rows × cols matrix has rank `cols`. Destroys `a`.
pub fn full_column_rank<F: FieldOps>(f: &F, a: &mut [F::Elem], rows: usize, cols: usize) -> bool {
    if cols > rows {
        return false;
    }
    forward_eliminate(f, a, rows, cols, None, true).rank() == cols
}

/// Why a system has no unique solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveFailure {
    /// The columns are dependent.
    RankDeficient,
    /// Full column rank, but the right-hand side is outside the column space.
    Inconsistent,
}

/// Solves `a · x = b` for a rows × cols matrix of full column rank
/// (rows ≥ cols). Destroys `a` and `b`.
pub fn solve_full_column_rank<F: FieldOps>(
    f: &F,
    a: &mut [F::Elem],
    rows: usize,
    cols: usize,
    b: &mut [F::Elem],
) -> Result<Vec<F::Elem>, SolveFailure> {
    if cols > rows {
        return Err(SolveFailure::RankDeficient);
    }
    let ech = forward_eliminate(f, a, rows, cols, Some(b), true);
    if ech.rank() < cols {
        return Err(SolveFailure::RankDeficient);
    }
    if b[cols..].iter().any(|&v| !f.is_zero(v)) {
        return Err(SolveFailure::Inconsistent);
    }
    // Full column rank: pivot i sits at (i, i). Back substitution.
    let mut x = vec![f.zero(); cols];
    for i in (0..cols).rev() {
        let mut acc = b[i];
        for j in i + 1..cols {
            let v = a[i * cols + j];
            if !f.is_zero(v) {
                acc = f.add(acc, f.mul(v, x[j]));
            }
        }
        x[i] = acc;
    }
    Ok(x)
}
