//! Erasure patterns and exhaustive SD verification.
//!
//! A code is SD when every combination of `m` failed disks plus `s` further
//! failed sectors can be recovered, i.e. the columns of H belonging to the
//! erased sectors are linearly independent. [`is_sd`] enumerates all such
//! patterns and checks each one.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{with_field, FieldOps};
use crate::construct::{CodeSpec, ParityCheckMatrix};
use crate::linalg::{kernel, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdError {
    #[error("invalid erasure pattern: {0}")]
    PatternInvalid(String),
    #[error("{erased} erased columns exceed the {rows} parity-check rows")]
    TooManyErasures { erased: usize, rows: usize },
    #[error("cannot shorten from r={r} to r={r_new}; need 1 ≤ r_new < r")]
    BadRowCount { r: usize, r_new: usize },
    #[error("r={r_new} leaves {cols} columns for {checks} parity checks")]
    ShortenedTooFar { r_new: usize, cols: usize, checks: usize },
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

/// Failed disks plus individually failed sectors `(row, disk)`.
///
/// Both lists are kept sorted; the text form is `d=1,3 s=0:2,4:0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErasurePattern {
    disks: Vec<usize>,
    sectors: Vec<(usize, usize)>,
}

impl ErasurePattern {
    /// Sorts the inputs and rejects duplicates. Range checks against a code
    /// happen in [`ErasurePattern::validate`].
    pub fn new(mut disks: Vec<usize>, mut sectors: Vec<(usize, usize)>) -> Result<Self, SdError> {
        disks.sort_unstable();
        sectors.sort_unstable();
        if disks.windows(2).any(|w| w[0] == w[1]) {
            return Err(SdError::PatternInvalid("repeated disk".into()));
        }
        if sectors.windows(2).any(|w| w[0] == w[1]) {
            return Err(SdError::PatternInvalid("repeated sector".into()));
        }
        if let Some(&(row, disk)) = sectors.iter().find(|(_, d)| disks.binary_search(d).is_ok()) {
            return Err(SdError::PatternInvalid(format!(
                "sector {row}:{disk} lies on a failed disk"
            )));
        }
        Ok(ErasurePattern { disks, sectors })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn disks(&self) -> &[usize] {
        &self.disks
    }

    pub fn sectors(&self) -> &[(usize, usize)] {
        &self.sectors
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty() && self.sectors.is_empty()
    }

    /// Range checks against `spec`. Patterns may be smaller than `m` disks and
    /// `s` sectors, but not larger.
    pub fn validate(&self, spec: &CodeSpec) -> Result<(), SdError> {
        if let Some(d) = self.disks.iter().find(|&&d| d >= spec.n) {
            return Err(SdError::PatternInvalid(format!("disk {d} out of range")));
        }
        if let Some((row, disk)) = self.sectors.iter().find(|(r, d)| *r >= spec.r || *d >= spec.n) {
            return Err(SdError::PatternInvalid(format!("sector {row}:{disk} out of range")));
        }
        if self.disks.len() > spec.m {
            return Err(SdError::PatternInvalid(format!(
                "{} failed disks exceed m={}",
                self.disks.len(),
                spec.m
            )));
        }
        Ok(())
    }

    /// Columns of the sectors this pattern erases, ascending, without
    /// validation.
    fn columns_unchecked(&self, spec: &CodeSpec) -> Vec<usize> {
        let mut cols = Vec::with_capacity(self.disks.len() * spec.r + self.sectors.len());
        for row in 0..spec.r {
            cols.extend(self.disks.iter().map(|&d| spec.column(row, d)));
        }
        cols.extend(self.sectors.iter().map(|&(row, d)| spec.column(row, d)));
        cols.sort_unstable();
        cols
    }
}

impl fmt::Display for ErasurePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let disks: Vec<String> = self.disks.iter().map(usize::to_string).collect();
        let sectors: Vec<String> = self.sectors.iter().map(|(r, d)| format!("{r}:{d}")).collect();
        write!(f, "d={} s={}", disks.join(","), sectors.join(","))
    }
}

impl FromStr for ErasurePattern {
    type Err = SdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| SdError::PatternInvalid(format!("{why} in `{s}`"));
        let mut disks = Vec::new();
        let mut sectors = Vec::new();
        for part in s.split_whitespace() {
            let (key, list) = part.split_once('=').ok_or_else(|| bad("missing `=`"))?;
            let items = list.split(',').filter(|x| !x.is_empty());
            match key {
                "d" => {
                    for item in items {
                        disks.push(item.parse().map_err(|_| bad("bad disk index"))?);
                    }
                }
                "s" => {
                    for item in items {
                        let (r, d) = item.split_once(':').ok_or_else(|| bad("sector needs row:disk"))?;
                        sectors.push((
                            r.parse().map_err(|_| bad("bad sector row"))?,
                            d.parse().map_err(|_| bad("bad sector disk"))?,
                        ));
                    }
                }
                _ => return Err(bad("unknown key")),
            }
        }
        ErasurePattern::new(disks, sectors)
    }
}

/// Sorted column indices erased by `p`: every row of each failed disk plus
/// the listed sectors.
pub fn erased_columns(p: &ErasurePattern, spec: &CodeSpec) -> Result<Vec<usize>, SdError> {
    p.validate(spec)?;
    Ok(p.columns_unchecked(spec))
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `C(n, m) · C((n − m)·r, s)`.
pub fn pattern_count(spec: &CodeSpec) -> u128 {
    binomial(spec.n as u64, spec.m as u64)
        * binomial(((spec.n - spec.m) * spec.r) as u64, spec.s as u64)
}

/// Lexicographic k-subsets of `0..n`.
#[derive(Clone, Debug)]
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All patterns with exactly `m` failed disks and `s` failed sectors on the
/// surviving disks, in lexicographic order: disk sets first, then sector
/// sets ordered by `(row, disk)`.
pub fn enumerate_patterns(spec: &CodeSpec) -> impl Iterator<Item = ErasurePattern> + '_ {
    Combinations::new(spec.n, spec.m).flat_map(move |disks| {
        let pool: Vec<(usize, usize)> = (0..spec.r)
            .flat_map(|row| (0..spec.n).map(move |d| (row, d)))
            .filter(|(_, d)| !disks.contains(d))
            .collect();
        Combinations::new(pool.len(), spec.s).map(move |pick| ErasurePattern {
            disks: disks.clone(),
            sectors: pick.iter().map(|&k| pool[k]).collect(),
        })
    })
}

trait ColumnRank: Sync {
    fn full_column_rank(&self, cols: &[usize]) -> bool;
}

/// H embedded once in a component field so per-pattern work is just a
/// gather and an elimination.
struct Embedded<'a, F: FieldOps> {
    field: &'a F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: FieldOps> ColumnRank for Embedded<'_, F> {
    fn full_column_rank(&self, cols: &[usize]) -> bool {
        let k = cols.len();
        let mut sub = Vec::with_capacity(self.rows * k);
        for row in self.data.chunks_exact(self.cols) {
            sub.extend(cols.iter().map(|&c| row[c]));
        }
        kernel::full_column_rank(self.field, &mut sub, self.rows, k)
    }
}

/// Decides whether sets of H's columns are independent over every component
/// field of the algebra.
pub struct Decodability<'a> {
    spec: CodeSpec,
    parts: Vec<Box<dyn ColumnRank + 'a>>,
}

impl<'a> Decodability<'a> {
    pub fn new(pcm: &'a ParityCheckMatrix) -> Self {
        let h: &Matrix = pcm.h();
        let parts = pcm
            .algebra()
            .components()
            .iter()
            .map(|bf| -> Box<dyn ColumnRank + 'a> {
                with_field!(bf, f => Box::new(Embedded {
                    field: f,
                    rows: h.rows(),
                    cols: h.cols(),
                    data: h.data().iter().map(|e| f.embed(e.0)).collect(),
                }))
            })
            .collect();
        Decodability { spec: *pcm.spec(), parts }
    }

    pub fn columns_independent(&self, cols: &[usize]) -> bool {
        if cols.is_empty() {
            return true;
        }
        if cols.len() > self.spec.check_rows() {
            return false;
        }
        self.parts.iter().all(|p| p.full_column_rank(cols))
    }

    fn pattern_ok(&self, p: &ErasurePattern) -> bool {
        self.columns_independent(&p.columns_unchecked(&self.spec))
    }
}

/// True iff the erased columns of H are independent (full column rank over
/// every component field).
pub fn is_pattern_decodable(pcm: &ParityCheckMatrix, p: &ErasurePattern) -> Result<bool, SdError> {
    let cols = erased_columns(p, pcm.spec())?;
    let rows = pcm.spec().check_rows();
    if cols.len() > rows {
        return Err(SdError::TooManyErasures {
            erased: cols.len(),
            rows,
        });
    }
    Ok(Decodability::new(pcm).columns_independent(&cols))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdReport {
    pub sd: bool,
    /// First failing pattern in enumeration order.
    pub witness: Option<ErasurePattern>,
    /// Patterns up to and including the witness, or all patterns when SD.
    pub patterns_checked: u64,
}

/// Knobs for [`is_sd_with`]. None of them change the report.
#[derive(Default)]
pub struct SdOptions<'a> {
    /// Worker threads; `None` uses the ambient rayon pool.
    pub jobs: Option<usize>,
    /// Patterns per parallel batch; 0 selects a default.
    pub chunk_size: usize,
    /// Called after each batch with (patterns done, total).
    pub progress: Option<&'a (dyn Fn(u64, u128) + Sync)>,
    /// Incremented once per pattern actually evaluated.
    pub evaluations: Option<&'a AtomicU64>,
}

pub const DEFAULT_CHUNK: usize = 4096;

pub fn is_sd(pcm: &ParityCheckMatrix) -> SdReport {
    is_sd_with(pcm, &SdOptions::default()).expect("ambient pool needs no setup")
}

pub fn is_sd_with(pcm: &ParityCheckMatrix, opts: &SdOptions<'_>) -> Result<SdReport, SdError> {
    match opts.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| SdError::Pool(e.to_string()))?;
            Ok(pool.install(|| check_all(pcm, opts)))
        }
        None => Ok(check_all(pcm, opts)),
    }
}

fn check_all(pcm: &ParityCheckMatrix, opts: &SdOptions<'_>) -> SdReport {
    let oracle = Decodability::new(pcm);
    let spec = pcm.spec();
    let total = pattern_count(spec);
    let chunk_size = if opts.chunk_size == 0 { DEFAULT_CHUNK } else { opts.chunk_size };
    let mut patterns = enumerate_patterns(spec);
    let mut done: u64 = 0;
    let mut chunk = Vec::with_capacity(chunk_size);
    loop {
        chunk.clear();
        chunk.extend(patterns.by_ref().take(chunk_size));
        if chunk.is_empty() {
            break;
        }
        let failed = chunk.par_iter().position_first(|p| {
            if let Some(c) = opts.evaluations {
                c.fetch_add(1, Ordering::Relaxed);
            }
            !oracle.pattern_ok(p)
        });
        if let Some(k) = failed {
            return SdReport {
                sd: false,
                witness: Some(chunk[k].clone()),
                patterns_checked: done + k as u64 + 1,
            };
        }
        done += chunk.len() as u64;
        if let Some(progress) = opts.progress {
            progress(done, total);
        }
    }
    SdReport {
        sd: true,
        witness: None,
        patterns_checked: done,
    }
}

/// Restricts the code to stripes whose rows `r_new..r` are zero and drops
/// those coordinates: keeps the first `r_new·n` columns, the first `m·r_new`
/// local rows and all global rows.
pub fn shorten(pcm: &ParityCheckMatrix, r_new: usize) -> Result<ParityCheckMatrix, SdError> {
    let spec = *pcm.spec();
    if r_new == 0 || r_new >= spec.r {
        return Err(SdError::BadRowCount { r: spec.r, r_new });
    }
    let new_spec = CodeSpec { r: r_new, ..spec };
    if new_spec.check_rows() > new_spec.len() {
        return Err(SdError::ShortenedTooFar {
            r_new,
            cols: new_spec.len(),
            checks: new_spec.check_rows(),
        });
    }
    let keep_rows: Vec<usize> = (0..spec.m * r_new)
        .chain(spec.m * spec.r..spec.check_rows())
        .collect();
    let keep_cols: Vec<usize> = (0..r_new * spec.n).collect();
    let h = crate::linalg::submatrix(pcm.h(), &keep_rows, &keep_cols)
        .expect("index sets are in range and increasing");
    Ok(ParityCheckMatrix::new(new_spec, pcm.algebra().clone(), h).expect("shape follows from spec"))
}
