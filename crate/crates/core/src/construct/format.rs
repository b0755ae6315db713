//! `SDCODE-H v1` matrix files.
//!
//! ```text
//! SDCODE-H v1
//! field w=4 poly=0x13
//! params n=5 m=1 s=2 r=3 family=construction1
//! 1 1 1 1 1 0 0 0 0 0 0 0 0 0 0
//! ...
//! ```

use std::io::{self, Read, Write};
use std::sync::Arc;

use super::{structure_violation, CodeSpec, ConstructError, Family, ParityCheckMatrix};
use crate::linalg::Matrix;
use crate::text::{self, FormatError, Lines, ParseError, Params, RowDisplay};

pub const MATRIX_HEADER: &str = "SDCODE-H v1";

pub fn write_matrix<W: Write>(pcm: &ParityCheckMatrix, mut out: W) -> io::Result<()> {
    let spec = pcm.spec();
    writeln!(out, "{MATRIX_HEADER}")?;
    writeln!(out, "{}", spec.algebra)?;
    writeln!(
        out,
        "params n={} m={} s={} r={} family={}",
        spec.n, spec.m, spec.s, spec.r, spec.family
    )?;
    let alg = pcm.algebra();
    for row in 0..pcm.h().rows() {
        let entries: Vec<_> = pcm.h().row(row).iter().copied().map(Some).collect();
        writeln!(out, "{}", RowDisplay { alg, row: &entries })?;
    }
    Ok(())
}

pub fn read_matrix<R: Read>(mut input: R) -> Result<ParityCheckMatrix, FormatError> {
    let mut buf = String::new();
    input.read_to_string(&mut buf)?;
    Ok(parse_matrix(&buf)?)
}

pub fn parse_matrix(text: &str) -> Result<ParityCheckMatrix, ParseError> {
    let mut lines = Lines::new(text);
    text::expect_header(&mut lines, MATRIX_HEADER)?;
    let (algebra_spec, alg) = text::parse_algebra_line(&mut lines)?;
    let params = Params::parse(&mut lines)?;
    let (fcol, fam) = params.get_str("family")?;
    let family: Family = fam
        .parse()
        .map_err(|e: String| ParseError::new(params.line, fcol, e))?;
    let spec = CodeSpec {
        n: params.get_usize("n")?,
        m: params.get_usize("m")?,
        s: params.get_usize("s")?,
        r: params.get_usize("r")?,
        algebra: algebra_spec,
        family,
    };
    spec.validate(&alg)
        .map_err(|e| ParseError::new(params.line, 1, e.to_string()))?;

    let (rows, cols) = (spec.check_rows(), spec.len());
    let mut data = Vec::with_capacity(rows * cols);
    let mut row_lines = Vec::with_capacity(rows);
    for k in 0..rows {
        let (n, line) = lines.expect_line(&format!("matrix row {k}"))?;
        let row = text::parse_element_row(&alg, n, line, cols, false)?;
        data.extend(row.into_iter().flatten());
        row_lines.push((n, line));
    }
    lines.expect_end()?;

    let h = Matrix::new(rows, cols, data).expect("row parsing enforces the shape");
    let pcm = ParityCheckMatrix::new(spec, Arc::new(alg), h).map_err(|e| match e {
        ConstructError::ShapeMismatch(m) => ParseError::new(params.line, 1, m),
        other => ParseError::new(params.line, 1, other.to_string()),
    })?;
    if let Some((row, col)) = structure_violation(&pcm) {
        let (n, line) = row_lines[row];
        let column = text::tokens(line).nth(col).map_or(1, |(c, _)| c);
        let why = if row < spec.m * spec.r {
            "nonzero entry outside the row's local block"
        } else {
            "zero entry in a global row"
        };
        return Err(ParseError::new(n, column, why));
    }
    Ok(pcm)
}
