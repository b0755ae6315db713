//! Systematic encoding and erasure decoding of stripes.
//!
//! Parity lives on the last `m` disks plus the trailing `s` data-disk sectors
//! of the last stripe row ([`default_parity_pattern`]). Data symbols fill the
//! remaining positions in ascending column order.

use std::io::{self, Read, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraSpec, Element};
use crate::construct::{CodeSpec, Family, ParityCheckMatrix};
use crate::linalg::{self, LinalgError, Matrix};
use crate::sdcheck::{erased_columns, ErasurePattern};
use crate::text::{self, FormatError, Lines, ParseError, Params, RowDisplay};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("{s} parity sectors do not fit in the {available} data-disk sectors")]
    TooManyParitySectors { s: usize, available: usize },
    #[error("parity positions are not decodable for this matrix")]
    SingularParitySupport,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("missing symbols are not recoverable")]
    UndecodablePattern,
    #[error("present symbols violate the parity checks")]
    InconsistentSyndrome,
    #[error("stripe does not match the code: {0}")]
    SpecMismatch(String),
}

/// Parity support: disks `n−m..n` and the last `s` data-disk positions
/// walking backwards from `(r−1, n−m−1)`.
pub fn default_parity_pattern(spec: &CodeSpec) -> Result<ErasurePattern, CodecError> {
    let data_disks = spec.n - spec.m;
    let available = data_disks * spec.r;
    if spec.s > available {
        return Err(CodecError::TooManyParitySectors { s: spec.s, available });
    }
    let sectors = (0..spec.s)
        .map(|k| {
            let row = spec.r - 1 - k / data_disks;
            let disk = data_disks - 1 - k % data_disks;
            (row, disk)
        })
        .collect();
    let disks = (data_disks..spec.n).collect();
    Ok(ErasurePattern::new(disks, sectors).expect("parity positions are distinct"))
}

/// An r × n grid of symbols with availability flags, stored row-major so
/// that index `n·i + j` is the H column of (row i, disk j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stripe {
    pub spec: CodeSpec,
    symbols: Vec<Element>,
    present: Vec<bool>,
}

impl Stripe {
    pub fn complete(spec: CodeSpec, symbols: Vec<Element>) -> Result<Self, CodecError> {
        let present = vec![true; symbols.len()];
        Self::with_presence(spec, symbols, present)
    }

    pub fn with_presence(spec: CodeSpec, symbols: Vec<Element>, present: Vec<bool>) -> Result<Self, CodecError> {
        for len in [symbols.len(), present.len()] {
            if len != spec.len() {
                return Err(CodecError::LengthMismatch {
                    expected: spec.len(),
                    got: len,
                });
            }
        }
        Ok(Stripe { spec, symbols, present })
    }

    pub fn get(&self, row: usize, disk: usize) -> Option<Element> {
        let c = self.spec.column(row, disk);
        self.present[c].then_some(self.symbols[c])
    }

    pub fn symbols(&self) -> &[Element] {
        &self.symbols
    }

    pub fn present(&self) -> &[bool] {
        &self.present
    }

    pub fn is_complete(&self) -> bool {
        self.present.iter().all(|&p| p)
    }

    pub fn missing(&self) -> Vec<usize> {
        (0..self.present.len()).filter(|&c| !self.present[c]).collect()
    }

    /// Marks a position missing and clears its symbol.
    pub fn erase(&mut self, col: usize) {
        self.present[col] = false;
        self.symbols[col] = Element::ZERO;
    }

    /// Erases every sector of `p`.
    pub fn erase_pattern(&mut self, p: &ErasurePattern) -> Result<(), CodecError> {
        let cols = erased_columns(p, &self.spec).map_err(|e| CodecError::SpecMismatch(e.to_string()))?;
        for c in cols {
            self.erase(c);
        }
        Ok(())
    }

    /// Symbolwise sum of two complete stripes of the same code.
    pub fn add(&self, other: &Stripe) -> Stripe {
        Stripe {
            spec: self.spec,
            symbols: self
                .symbols
                .iter()
                .zip(&other.symbols)
                .map(|(a, b)| Element(a.0 ^ b.0))
                .collect(),
            present: self.present.iter().zip(&other.present).map(|(a, b)| *a && *b).collect(),
        }
    }
}

fn same_code(pcm: &ParityCheckMatrix, spec: &CodeSpec) -> Result<(), CodecError> {
    let h = pcm.spec();
    if (h.n, h.m, h.s, h.r, h.algebra) != (spec.n, spec.m, spec.s, spec.r, spec.algebra) {
        return Err(CodecError::SpecMismatch(format!(
            "matrix n={} m={} s={} r={}, stripe n={} m={} s={} r={}",
            h.n, h.m, h.s, h.r, spec.n, spec.m, spec.s, spec.r
        )));
    }
    Ok(())
}

/// Positions holding data, ascending.
pub fn data_positions(spec: &CodeSpec) -> Result<Vec<usize>, CodecError> {
    let parity = parity_positions(spec)?;
    Ok((0..spec.len()).filter(|c| parity.binary_search(c).is_err()).collect())
}

fn parity_positions(spec: &CodeSpec) -> Result<Vec<usize>, CodecError> {
    let pattern = default_parity_pattern(spec)?;
    Ok(erased_columns(&pattern, spec).expect("default pattern is in range"))
}

/// Sum over `cols` of `H[:, c] · v[c]`.
fn partial_syndrome(alg: &Algebra, h: &Matrix, cols: impl Iterator<Item = usize> + Clone, v: &[Element]) -> Vec<Element> {
    (0..h.rows())
        .map(|row| {
            cols.clone().fold(Element::ZERO, |acc, c| {
                let (a, b) = (h.get(row, c), v[c]);
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    alg.add(acc, alg.mul(a, b))
                }
            })
        })
        .collect()
}

pub fn encode(pcm: &ParityCheckMatrix, data: &[Element]) -> Result<Stripe, CodecError> {
    let spec = *pcm.spec();
    let alg = pcm.algebra();
    let data_pos = data_positions(&spec)?;
    if data.len() != data_pos.len() {
        return Err(CodecError::LengthMismatch {
            expected: data_pos.len(),
            got: data.len(),
        });
    }
    if let Some(bad) = data.iter().find(|e| !alg.contains(**e)) {
        return Err(CodecError::SpecMismatch(format!("data symbol {bad} outside the algebra")));
    }
    let parity_pos = parity_positions(&spec)?;
    let mut symbols = vec![Element::ZERO; spec.len()];
    for (&c, &d) in data_pos.iter().zip(data) {
        symbols[c] = d;
    }
    // H_P · parity = H_D · data (characteristic 2).
    let rhs = partial_syndrome(alg, pcm.h(), data_pos.iter().copied(), &symbols);
    let all_rows: Vec<usize> = (0..pcm.h().rows()).collect();
    let hp = linalg::submatrix(pcm.h(), &all_rows, &parity_pos).expect("indices in range");
    let parity = linalg::solve(alg, &hp, &rhs).map_err(|_| CodecError::SingularParitySupport)?;
    for (&c, p) in parity_pos.iter().zip(parity) {
        symbols[c] = p;
    }
    Stripe::complete(spec, symbols)
}

/// Recovers every missing symbol. Fails if the missing columns of H are
/// dependent, or if the present symbols contradict the parity checks.
pub fn decode(pcm: &ParityCheckMatrix, st: &Stripe) -> Result<Stripe, CodecError> {
    same_code(pcm, &st.spec)?;
    let alg = pcm.algebra();
    let h = pcm.h();
    let missing = st.missing();
    let known = (0..st.spec.len()).filter(|&c| st.present[c]);
    let rhs = partial_syndrome(alg, h, known, &st.symbols);
    if missing.is_empty() {
        if rhs.iter().any(|e| !e.is_zero()) {
            return Err(CodecError::InconsistentSyndrome);
        }
        return Ok(st.clone());
    }
    if missing.len() > h.rows() {
        return Err(CodecError::UndecodablePattern);
    }
    let all_rows: Vec<usize> = (0..h.rows()).collect();
    let hm = linalg::submatrix(h, &all_rows, &missing).expect("indices in range");
    let values = linalg::solve_left(alg, &hm, &rhs).map_err(|e| match e {
        LinalgError::Inconsistent => CodecError::InconsistentSyndrome,
        _ => CodecError::UndecodablePattern,
    })?;
    let mut symbols = st.symbols.clone();
    for (&c, v) in missing.iter().zip(values) {
        symbols[c] = v;
    }
    Stripe::complete(st.spec, symbols)
}

pub const STRIPE_HEADER: &str = "SDCODE-STRIPE v1";

pub fn write_stripe<W: Write>(st: &Stripe, alg: &Algebra, mut out: W) -> io::Result<()> {
    let spec = &st.spec;
    writeln!(out, "{STRIPE_HEADER}")?;
    writeln!(out, "{}", spec.algebra)?;
    writeln!(out, "params n={} m={} s={} r={}", spec.n, spec.m, spec.s, spec.r)?;
    for row in 0..spec.r {
        let cells: Vec<Option<Element>> = (0..spec.n).map(|d| st.get(row, d)).collect();
        writeln!(out, "{}", RowDisplay { alg, row: &cells })?;
    }
    Ok(())
}

pub fn read_stripe<R: Read>(mut input: R) -> Result<(Stripe, Arc<Algebra>), FormatError> {
    let mut buf = String::new();
    input.read_to_string(&mut buf)?;
    Ok(parse_stripe(&buf)?)
}

/// Parses a stripe file. The family is not recorded in stripe files and is
/// reported as [`Family::Generic`]; only (n, m, s, r, algebra) must agree
/// with the matrix used to decode.
pub fn parse_stripe(text: &str) -> Result<(Stripe, Arc<Algebra>), ParseError> {
    let mut lines = Lines::new(text);
    text::expect_header(&mut lines, STRIPE_HEADER)?;
    let (algebra, alg) = text::parse_algebra_line(&mut lines)?;
    let params = Params::parse(&mut lines)?;
    let spec = CodeSpec {
        n: params.get_usize("n")?,
        m: params.get_usize("m")?,
        s: params.get_usize("s")?,
        r: params.get_usize("r")?,
        algebra,
        family: Family::Generic,
    };
    if spec.n == 0 || spec.r == 0 {
        return Err(ParseError::new(params.line, 1, "n and r must be positive"));
    }
    let mut symbols = Vec::with_capacity(spec.len());
    let mut present = Vec::with_capacity(spec.len());
    for row in 0..spec.r {
        let (n, line) = lines.expect_line(&format!("stripe row {row}"))?;
        for cell in text::parse_element_row(&alg, n, line, spec.n, true)? {
            present.push(cell.is_some());
            symbols.push(cell.unwrap_or(Element::ZERO));
        }
    }
    lines.expect_end()?;
    let st = Stripe::with_presence(spec, symbols, present).expect("rows parsed to shape");
    Ok((st, Arc::new(alg)))
}

/// Parses a whitespace-separated list of element tokens (data files).
/// Lines starting with `#` are comments.
pub fn parse_data(text: &str, alg: &Algebra) -> Result<Vec<Element>, ParseError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for (col, tok) in text::tokens(line) {
            out.push(text::parse_element(alg, tok).map_err(|m| ParseError::new(idx + 1, col, m))?);
        }
    }
    Ok(out)
}

/// Checks that a stripe's algebra matches the matrix's.
pub fn check_algebra(pcm: &ParityCheckMatrix, spec: AlgebraSpec) -> Result<(), CodecError> {
    if pcm.algebra().spec() != spec {
        return Err(CodecError::SpecMismatch(format!(
            "matrix algebra `{}`, stripe algebra `{}`",
            pcm.algebra().spec(),
            spec
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_h1, build_h2};
    use crate::sdcheck::enumerate_patterns;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf16() -> Arc<Algebra> {
        Arc::new(Algebra::field(4, 0x13).unwrap())
    }

    fn random_data(alg: &Algebra, len: usize, rng: &mut ChaCha8Rng) -> Vec<Element> {
        let top = 1u128 << alg.width();
        (0..len).map(|_| Element(rng.gen_range(0..top))).collect()
    }

    #[test]
    fn parity_pattern_examples() {
        let alg = gf16();
        let spec = *build_h1(3, 5, &alg).unwrap().spec();
        let p = default_parity_pattern(&spec).unwrap();
        assert_eq!(p.disks(), &[4]);
        assert_eq!(p.sectors(), &[(2, 2), (2, 3)]);
        let spec = *build_h2(3, 5, &alg).unwrap().spec();
        let p = default_parity_pattern(&spec).unwrap();
        assert_eq!(p.disks(), &[3, 4]);
        assert_eq!(p.sectors(), &[(2, 1), (2, 2)]);
        let spec0 = CodeSpec { s: 0, ..spec };
        assert!(default_parity_pattern(&spec0).unwrap().sectors().is_empty());
        // s larger than one row wraps to the previous row.
        let wide = CodeSpec { s: 5, ..spec };
        let p = default_parity_pattern(&wide).unwrap();
        assert_eq!(p.sectors(), &[(1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]);
        let too_wide = CodeSpec { s: 10, ..spec };
        assert_eq!(
            default_parity_pattern(&too_wide),
            Err(CodecError::TooManyParitySectors { s: 10, available: 9 })
        );
    }

    #[test]
    fn zero_data_encodes_to_zero() {
        let h = build_h1(3, 5, &gf16()).unwrap();
        assert_eq!(h.spec().dimension(), 10);
        let st = encode(&h, &[Element::ZERO; 10]).unwrap();
        assert!(st.symbols().iter().all(|e| e.is_zero()));
        assert_eq!(
            encode(&h, &[Element::ZERO; 9]),
            Err(CodecError::LengthMismatch { expected: 10, got: 9 })
        );
    }

    #[test]
    fn encoded_stripe_is_in_null_space() {
        let alg = gf16();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for h in [build_h1(3, 5, &alg).unwrap(), build_h2(3, 5, &alg).unwrap()] {
            let data = random_data(&alg, h.spec().dimension(), &mut rng);
            let st = encode(&h, &data).unwrap();
            let syn = h.h().mul_vec(&alg, st.symbols()).unwrap();
            assert!(syn.iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn encoding_is_linear() {
        let alg = gf16();
        let h = build_h2(3, 5, &alg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k = h.spec().dimension();
        let a = random_data(&alg, k, &mut rng);
        let b = random_data(&alg, k, &mut rng);
        let ab: Vec<Element> = a.iter().zip(&b).map(|(x, y)| alg.add(*x, *y)).collect();
        assert_eq!(
            encode(&h, &ab).unwrap(),
            encode(&h, &a).unwrap().add(&encode(&h, &b).unwrap())
        );
    }

    #[test]
    fn decode_recovers_every_sd_pattern() {
        let alg = gf16();
        let h = build_h1(3, 5, &alg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in enumerate_patterns(h.spec()) {
            let data = random_data(&alg, h.spec().dimension(), &mut rng);
            let st = encode(&h, &data).unwrap();
            let mut damaged = st.clone();
            damaged.erase_pattern(&p).unwrap();
            assert_eq!(decode(&h, &damaged).unwrap(), st, "pattern {p}");
        }
    }

    #[test]
    fn decode_rejects_inconsistent_and_oversized() {
        let alg = gf16();
        let h = build_h1(3, 5, &alg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let st = encode(&h, &random_data(&alg, 10, &mut rng)).unwrap();
        assert_eq!(decode(&h, &st).unwrap(), st);

        let mut bad = st.clone();
        bad.symbols[0] = alg.add(bad.symbols[0], Element::ONE);
        assert_eq!(decode(&h, &bad), Err(CodecError::InconsistentSyndrome));
        // One erasure plus a corrupted present symbol in the same row.
        bad.erase(14);
        assert_eq!(decode(&h, &bad), Err(CodecError::InconsistentSyndrome));

        let mut too_many = st.clone();
        for c in 0..6 {
            too_many.erase(c);
        }
        assert_eq!(decode(&h, &too_many), Err(CodecError::UndecodablePattern));
    }

    #[test]
    fn stripe_file_round_trip() {
        let alg = gf16();
        let h = build_h2(3, 5, &alg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut st = encode(&h, &random_data(&alg, h.spec().dimension(), &mut rng)).unwrap();
        st.erase(4);
        st.erase(9);
        let mut buf = Vec::new();
        write_stripe(&st, &alg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("SDCODE-STRIPE v1\nfield w=4 poly=0x13\nparams n=5 m=2 s=2 r=3\n"));
        let (back, _) = parse_stripe(&text).unwrap();
        assert_eq!(back.symbols(), st.symbols());
        assert_eq!(back.present(), st.present());
        assert_eq!(
            decode(&h, &back).unwrap().symbols(),
            decode(&h, &st).unwrap().symbols()
        );
    }

    #[test]
    fn data_file_parsing() {
        let alg = gf16();
        let data = parse_data("# data\n1 0 a^3\nx:f\n", &alg).unwrap();
        assert_eq!(data, vec![Element::ONE, Element::ZERO, alg.alpha_pow(3), Element(15)]);
        let err = parse_data("1 0\n a^q", &alg).unwrap_err();
        assert_eq!((err.line, err.column), (2, 2));
    }
}
