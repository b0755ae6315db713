//! Line-oriented text formats shared by the matrix, stripe and data files.
//!
//! Element tokens: `0`, `1`, `a^<int>` (a power of α, exponent taken modulo
//! O(α)), or `x:<hex>` (raw bit vector). Writers emit `a^k` whenever the
//! element is a power of α other than 1.

use std::collections::HashMap;
use std::fmt;
use std::io;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraSpec, Element};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub fn format_element(alg: &Algebra, e: Element) -> String {
    if e.is_zero() {
        return "0".into();
    }
    if e == Element::ONE {
        return "1".into();
    }
    match alg.alpha_log(e) {
        Some(k) => format!("a^{k}"),
        None => format!("x:{:x}", e.0),
    }
}

pub fn parse_element(alg: &Algebra, tok: &str) -> Result<Element, String> {
    let e = match tok {
        "0" => Element::ZERO,
        "1" => Element::ONE,
        _ => {
            if let Some(exp) = tok.strip_prefix("a^") {
                let k: i64 = exp
                    .parse()
                    .map_err(|_| format!("bad exponent in `{tok}`"))?;
                alg.alpha_pow(k)
            } else if let Some(hex) = tok.strip_prefix("x:") {
                let bits = u128::from_str_radix(hex, 16).map_err(|_| format!("bad hex in `{tok}`"))?;
                Element(bits)
            } else {
                return Err(format!("unrecognized element token `{tok}`"));
            }
        }
    };
    alg.check(e)
        .map_err(|_| format!("`{tok}` is wider than the algebra's {} bits", alg.width()))
}

/// Whitespace-separated tokens with 1-based starting columns.
pub fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_ascii_whitespace().map(move |tok| {
        let offset = tok.as_ptr() as usize - line.as_ptr() as usize;
        (offset + 1, tok)
    })
}

/// Numbered, non-blank lines of a document.
pub struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
            last_line: 0,
        }
    }

    /// Next line, skipping blank lines. Line numbers are 1-based.
    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.inner.by_ref() {
            self.last_line = idx + 1;
            if !line.trim().is_empty() {
                return Some((idx + 1, line));
            }
        }
        None
    }

    pub fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let after = self.last_line + 1;
        self.next_line()
            .ok_or_else(|| ParseError::new(after, 1, format!("unexpected end of input, expected {what}")))
    }

    pub fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.next_line() {
            None => Ok(()),
            Some((n, _)) => Err(ParseError::new(n, 1, "unexpected trailing content")),
        }
    }
}

pub fn expect_header(lines: &mut Lines<'_>, header: &str) -> Result<(), ParseError> {
    let (n, line) = lines.expect_line(header)?;
    if line.trim() != header {
        return Err(ParseError::new(n, 1, format!("expected `{header}`")));
    }
    Ok(())
}

pub fn parse_algebra_line(lines: &mut Lines<'_>) -> Result<(AlgebraSpec, Algebra), ParseError> {
    let (n, line) = lines.expect_line("algebra descriptor")?;
    let spec: AlgebraSpec = line.trim().parse().map_err(|e| ParseError::new(n, 1, format!("{e}")))?;
    let alg = Algebra::new(spec).map_err(|e| ParseError::new(n, 1, format!("{e}")))?;
    Ok((spec, alg))
}

/// `params k=v k=v ...` as an ordered key lookup.
pub struct Params {
    pub line: usize,
    values: HashMap<String, (usize, String)>,
}

impl Params {
    pub fn parse(lines: &mut Lines<'_>) -> Result<Self, ParseError> {
        let (n, line) = lines.expect_line("params line")?;
        let mut toks = tokens(line);
        match toks.next() {
            Some((_, "params")) => {}
            _ => return Err(ParseError::new(n, 1, "expected `params ...`")),
        }
        let mut values = HashMap::new();
        for (col, tok) in toks {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| ParseError::new(n, col, format!("expected key=value, got `{tok}`")))?;
            if values.insert(k.to_string(), (col, v.to_string())).is_some() {
                return Err(ParseError::new(n, col, format!("duplicate key `{k}`")));
            }
        }
        Ok(Params { line: n, values })
    }

    pub fn get_str(&self, key: &str) -> Result<(usize, &str), ParseError> {
        self.values
            .get(key)
            .map(|(c, v)| (*c, v.as_str()))
            .ok_or_else(|| ParseError::new(self.line, 1, format!("missing `{key}=`")))
    }

    pub fn get_usize(&self, key: &str) -> Result<usize, ParseError> {
        let (col, v) = self.get_str(key)?;
        v.parse()
            .map_err(|_| ParseError::new(self.line, col, format!("`{key}` must be a non-negative integer")))
    }
}

/// Parses one line of exactly `expect` element tokens. `?` is returned as
/// `None` when `allow_missing` is set.
pub fn parse_element_row(
    alg: &Algebra,
    line_no: usize,
    line: &str,
    expect: usize,
    allow_missing: bool,
) -> Result<Vec<Option<Element>>, ParseError> {
    let mut out = Vec::with_capacity(expect);
    for (col, tok) in tokens(line) {
        if out.len() == expect {
            return Err(ParseError::new(line_no, col, format!("expected {expect} tokens, found more")));
        }
        if allow_missing && tok == "?" {
            out.push(None);
            continue;
        }
        let e = parse_element(alg, tok).map_err(|m| ParseError::new(line_no, col, m))?;
        out.push(Some(e));
    }
    if out.len() != expect {
        return Err(ParseError::new(
            line_no,
            line.len() + 1,
            format!("expected {expect} tokens, found {}", out.len()),
        ));
    }
    Ok(out)
}

/// Joins element tokens of one row.
pub struct RowDisplay<'a> {
    pub alg: &'a Algebra,
    pub row: &'a [Option<Element>],
}

impl fmt::Display for RowDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.row.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match e {
                Some(e) => f.write_str(&format_element(self.alg, *e))?,
                None => f.write_str("?")?,
            }
        }
        Ok(())
    }
}
