//! Sector-Disk (SD) erasure codes.
//!
//! An SD code protects an `r × n` stripe against any `m` whole-disk failures
//! plus `s` additional sector failures. This crate builds the two explicit
//! constructions for `m = 1, s = 2` and `m = 2, s = 2` over GF(2^w) or over
//! the ring of binary polynomials modulo `M_p(x) = 1 + x + … + x^(p−1)`,
//! verifies the SD property exhaustively, encodes and decodes stripes, and
//! runs a pruned Monte Carlo search for codes at other parameters.
//!
//! ```
//! use std::sync::Arc;
//! use sdcode::{build_h1, is_sd, Algebra};
//!
//! let gf16 = Arc::new(Algebra::field(4, 0x13).unwrap());
//! let h = build_h1(3, 5, &gf16).unwrap();
//! let report = is_sd(&h);
//! assert!(report.sd);
//! assert_eq!(report.patterns_checked, 330);
//! ```

pub mod algebra;
pub mod cli;
pub mod codec;
pub mod construct;
pub mod linalg;
pub mod sdcheck;
pub mod search;
pub mod text;

pub use algebra::{Algebra, AlgebraError, AlgebraSpec, Element};
pub use codec::{decode, default_parity_pattern, encode, CodecError, Stripe};
pub use construct::{build_h1, build_h2, build_h_generic, CodeSpec, ConstructError, Family, ParityCheckMatrix};
pub use linalg::{LinalgError, Matrix};
pub use sdcheck::{is_pattern_decodable, is_sd, shorten, ErasurePattern, SdError, SdReport};
pub use search::{run_search, SearchConfig, SearchError, TrialRecord};

/// GF(2^w) with table arithmetic on `u16` symbols.
pub type TableGf = algebra::TableField;
/// GF(2^d) with carry-less arithmetic on `u128` symbols.
pub type ClmulGf = algebra::ClmulField;
