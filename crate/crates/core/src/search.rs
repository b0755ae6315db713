//! Monte Carlo search for SD codes with shortening-based pruning.
//!
//! Each trial draws random nonzero global rows one stripe row at a time and
//! tests r = 1, 2, … in order. The coefficients for r are a prefix of those
//! for r + 1, so the code at r is a shortening of the code at r + 1. Shortening
//! preserves the SD property, hence once a trial fails at some r every larger
//! r fails too and is never built or tested.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, AlgebraSpec, Element};
use crate::construct::{build_h_generic, construction1_globals, construction2_globals, ParityCheckMatrix};
use crate::sdcheck::{is_sd_with, ErasurePattern, SdOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Where global-row coefficients come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoefficientSource {
    #[default]
    Random,
    /// The m = 1 construction's global entries (needs m = 1, s = 2).
    Construction1,
    /// The m = 2 construction's global entries (needs m = 2, s = 2).
    Construction2,
}

impl std::str::FromStr for CoefficientSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(CoefficientSource::Random),
            "construction1" => Ok(CoefficientSource::Construction1),
            "construction2" => Ok(CoefficientSource::Construction2),
            _ => Err(format!("unknown coefficient source `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub r_max: usize,
    pub trials: u64,
    pub seed: u64,
    pub algebra: AlgebraSpec,
    pub source: CoefficientSource,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub jobs: Option<usize>,
}

impl SearchConfig {
    pub fn validate(&self, alg: &Algebra) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::BadConfig(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.r_max == 0 {
            return bad("rmax must be at least 1".into());
        }
        if self.m == 0 || self.m >= self.n {
            return bad(format!("need 0 < m < n, got m={} n={}", self.m, self.n));
        }
        let order = alg.order_of_alpha() as usize;
        if self.r_max * self.n > order {
            return bad(format!(
                "rmax·n = {} exceeds O(α) = {order}; pick a smaller rmax or a larger algebra",
                self.r_max * self.n
            ));
        }
        let needs = match self.source {
            CoefficientSource::Random => None,
            CoefficientSource::Construction1 => Some((1, 2)),
            CoefficientSource::Construction2 => Some((2, 2)),
        };
        if let Some((m, s)) = needs {
            if (self.m, self.s) != (m, s) {
                return bad(format!("{:?} coefficients need m={m} s={s}", self.source));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    /// Digest of the coefficients of the last matrix tested.
    pub digest: String,
    /// Largest r verified SD; 0 if none.
    pub achieved_r: usize,
    /// First r that failed, with its witness.
    pub failed_at: Option<(usize, ErasurePattern)>,
}

impl fmt::Display for TrialRecord {
    /// `trial  achieved_r  failed_at  witness  coeff_digest`, tab-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failed_at {
            Some((r, w)) => write!(f, "{}\t{}\t{r}\t{w}\t{}", self.trial, self.achieved_r, self.digest),
            None => write!(f, "{}\t{}\t-\t-\t{}", self.trial, self.achieved_r, self.digest),
        }
    }
}

impl std::str::FromStr for TrialRecord {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let cols: Vec<&str> = line.split('\t').collect();
        let [trial, achieved, failed, witness, digest] = cols[..] else {
            return Err(format!("expected 5 tab-separated fields in `{line}`"));
        };
        let num = |s: &str| s.parse::<u64>().map_err(|_| format!("bad number `{s}`"));
        let failed_at = match (failed, witness) {
            ("-", "-") => None,
            (r, w) => Some((num(r)? as usize, w.parse::<ErasurePattern>().map_err(|e| e.to_string())?)),
        };
        Ok(TrialRecord {
            trial: num(trial)?,
            digest: digest.to_string(),
            achieved_r: num(achieved)? as usize,
            failed_at,
        })
    }
}

pub type GlobalRows = Vec<Vec<Element>>;

/// Independent generator stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform nonzero element, by rejecting zero.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, alg: &Algebra) -> Element {
    let top = 1u128 << alg.width();
    loop {
        let v = rng.gen_range(0..top);
        if v != 0 {
            return Element(v);
        }
    }
}

/// Appends `n` fresh random nonzero entries to each global row. Existing
/// entries are untouched.
pub fn extend_global_rows<R: Rng + ?Sized>(
    rng: &mut R,
    rows: &[Vec<Element>],
    n: usize,
    alg: &Algebra,
) -> GlobalRows {
    rows.iter()
        .map(|row| {
            let mut row = row.clone();
            row.extend((0..n).map(|_| random_nonzero(rng, alg)));
            row
        })
        .collect()
}

/// Source-aware extension by one stripe row.
fn extend_rows(
    source: CoefficientSource,
    rng: &mut ChaCha8Rng,
    rows: &[Vec<Element>],
    n: usize,
    alg: &Algebra,
) -> GlobalRows {
    let block = rows.first().map_or(0, |r| r.len() / n);
    let explicit = match source {
        CoefficientSource::Random => return extend_global_rows(rng, rows, n, alg),
        CoefficientSource::Construction1 => construction1_globals,
        CoefficientSource::Construction2 => construction2_globals,
    };
    rows.iter()
        .enumerate()
        .map(|(k, row)| {
            let mut row = row.clone();
            row.extend((0..n).map(|j| explicit(alg, n, block, j)[k]));
            row
        })
        .collect()
}

pub fn digest_rows(rows: &[Vec<Element>]) -> String {
    let mut hasher = Sha256::new();
    for row in rows {
        for e in row {
            hasher.update(e.0.to_le_bytes());
        }
    }
    let out = hasher.finalize();
    out[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Regenerates the global rows a trial uses at stripe height `r`.
pub fn trial_rows(cfg: &SearchConfig, alg: &Algebra, trial: u64, r: usize) -> GlobalRows {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut rows: GlobalRows = vec![Vec::new(); cfg.s];
    for _ in 0..r {
        rows = extend_rows(cfg.source, &mut rng, &rows, cfg.n, alg);
    }
    rows
}

/// Rebuilds the matrix a trial tests at stripe height `r`, with no pruning.
pub fn trial_matrix(
    cfg: &SearchConfig,
    alg: &Arc<Algebra>,
    trial: u64,
    r: usize,
) -> Result<ParityCheckMatrix, SearchError> {
    let rows = trial_rows(cfg, alg, trial, r);
    build_h_generic(cfg.n, cfg.m, cfg.s, r, &rows, alg).map_err(|e| SearchError::BadConfig(e.to_string()))
}

/// Observes pattern evaluations: called once per tested (trial, r) with the
/// number of patterns evaluated for it.
pub type Probe<'a> = &'a (dyn Fn(u64, usize, u64) + Sync);

pub fn run_search(cfg: &SearchConfig) -> Result<Vec<TrialRecord>, SearchError> {
    run_search_with_probe(cfg, &|_, _, _| {})
}

pub fn run_search_with_probe(cfg: &SearchConfig, probe: Probe<'_>) -> Result<Vec<TrialRecord>, SearchError> {
    let alg = Arc::new(Algebra::new(cfg.algebra)?);
    cfg.validate(&alg)?;
    let work = || -> Result<Vec<TrialRecord>, SearchError> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &alg, t, probe))
            .collect()
    };
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| SearchError::BadConfig(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn run_trial(cfg: &SearchConfig, alg: &Arc<Algebra>, trial: u64, probe: Probe<'_>) -> Result<TrialRecord, SearchError> {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut rows: GlobalRows = vec![Vec::new(); cfg.s];
    let mut achieved_r = 0;
    let mut failed_at = None;
    for r in 1..=cfg.r_max {
        rows = extend_rows(cfg.source, &mut rng, &rows, cfg.n, alg);
        let pcm = build_h_generic(cfg.n, cfg.m, cfg.s, r, &rows, alg)
            .map_err(|e| SearchError::BadConfig(e.to_string()))?;
        let evaluations = AtomicU64::new(0);
        let report = is_sd_with(
            &pcm,
            &SdOptions {
                evaluations: Some(&evaluations),
                ..Default::default()
            },
        )
        .map_err(|e| SearchError::BadConfig(e.to_string()))?;
        probe(trial, r, evaluations.load(Ordering::Relaxed));
        if report.sd {
            achieved_r = r;
        } else {
            failed_at = Some((r, report.witness.expect("failing report has a witness")));
            break;
        }
    }
    Ok(TrialRecord {
        trial,
        digest: digest_rows(&rows),
        achieved_r,
        failed_at,
    })
}
