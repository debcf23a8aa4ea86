//! HMX v1 text format.
//!
//! ```text
//! hmx 1
//! order <d>
//! dims <n1> ... <nd>
//! backend exact | backend modp <p>
//! <one canonical scalar per line, row-major>
//! ```
//!
//! Every line, including the last, ends with a single LF.

use std::fmt::Write as _;

use thiserror::Error;

use super::{AnyHypermatrix, Hypermatrix};
use crate::scalar::{Backend, Fp, Modulus, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("hmx {line}:{column}: {message}")]
pub struct HmxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl<S: Scalar> Hypermatrix<S> {
    /// Canonical HMX text.
    pub fn to_hmx(&self) -> String {
        let mut out = String::with_capacity(32 + 4 * self.entries.len());
        out.push_str("hmx 1\n");
        let _ = writeln!(out, "order {}", self.order());
        out.push_str("dims");
        for n in &self.dims {
            let _ = write!(out, " {n}");
        }
        out.push('\n');
        match self.backend() {
            Backend::Exact => out.push_str("backend exact\n"),
            Backend::ModP(p) => {
                let _ = writeln!(out, "backend modp {p}");
            }
        }
        for x in &self.entries {
            let _ = writeln!(out, "{x}");
        }
        out
    }
}

struct Lines<'a> {
    lines: Vec<&'a str>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> HmxError {
    HmxError {
        line,
        column,
        message: message.into(),
    }
}

impl<'a> Lines<'a> {
    fn split(text: &'a str) -> Result<Self, HmxError> {
        if let Some(pos) = text.find(|c: char| !c.is_ascii()) {
            let line = text[..pos].matches('\n').count() + 1;
            let col = pos - text[..pos].rfind('\n').map_or(0, |p| p + 1) + 1;
            return Err(err(line, col, "non-ASCII character"));
        }
        let Some(body) = text.strip_suffix('\n') else {
            let line = text.matches('\n').count() + 1;
            let col = text.len() - text.rfind('\n').map_or(0, |p| p + 1) + 1;
            return Err(err(line, col, "missing final LF"));
        };
        let lines: Vec<&str> = body.split('\n').collect();
        for (i, l) in lines.iter().enumerate() {
            if let Some(c) = l.find('\r') {
                return Err(err(i + 1, c + 1, "CR not allowed; use LF line endings"));
            }
        }
        Ok(Lines { lines })
    }

    fn get(&self, i: usize, what: &str) -> Result<&'a str, HmxError> {
        self.lines
            .get(i)
            .copied()
            .ok_or_else(|| err(i + 1, 1, format!("unexpected end of input, expected {what}")))
    }
}

/// Splits on single spaces, returning `(column, token)` pairs.
fn tokens(line: &str, lineno: usize) -> Result<Vec<(usize, &str)>, HmxError> {
    let mut out = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        if tok.is_empty() {
            return Err(err(lineno, col, "expected exactly one space between tokens"));
        }
        out.push((col, tok));
        col += tok.len() + 1;
    }
    Ok(out)
}

fn number(tok: (usize, &str), lineno: usize, what: &str) -> Result<u64, HmxError> {
    let (col, text) = tok;
    let canonical = !text.is_empty()
        && text.bytes().all(|b| b.is_ascii_digit())
        && !(text.len() > 1 && text.starts_with('0'));
    if !canonical {
        return Err(err(lineno, col, format!("expected {what}, found `{text}`")));
    }
    text.parse()
        .map_err(|_| err(lineno, col, format!("{what} `{text}` out of range")))
}

fn keyword(
    toks: &[(usize, &str)],
    lineno: usize,
    expect: &str,
) -> Result<(), HmxError> {
    match toks.first() {
        Some((_, t)) if *t == expect => Ok(()),
        Some((c, t)) => Err(err(lineno, *c, format!("expected `{expect}`, found `{t}`"))),
        None => Err(err(lineno, 1, format!("expected `{expect}`"))),
    }
}

/// Parses HMX text into whichever backend its header names.
pub fn parse_any(text: &str) -> Result<AnyHypermatrix, HmxError> {
    let lines = Lines::split(text)?;

    let l1 = tokens(lines.get(0, "`hmx 1`")?, 1)?;
    keyword(&l1, 1, "hmx")?;
    match l1.get(1) {
        Some((_, "1")) if l1.len() == 2 => {}
        Some((c, v)) => return Err(err(1, *c, format!("unsupported version `{v}`"))),
        None => return Err(err(1, 4, "missing version")),
    }

    let l2 = tokens(lines.get(1, "`order <d>`")?, 2)?;
    keyword(&l2, 2, "order")?;
    if l2.len() != 2 {
        return Err(err(2, 1, "expected `order <d>`"));
    }
    let order = number(l2[1], 2, "order")? as usize;
    if order == 0 {
        return Err(err(2, l2[1].0, "order must be positive"));
    }

    let l3 = tokens(lines.get(2, "`dims ...`")?, 3)?;
    keyword(&l3, 3, "dims")?;
    if l3.len() != order + 1 {
        // first surplus token, or just past the end of a short line
        let col = match l3.get(order + 1) {
            Some((c, _)) => *c,
            None => l3.last().map_or(1, |(c, t)| c + t.len()),
        };
        return Err(err(
            3,
            col,
            format!("expected {order} dimensions, found {}", l3.len() - 1),
        ));
    }
    let mut dims = Vec::with_capacity(order);
    for &tok in &l3[1..] {
        let n = number(tok, 3, "dimension")? as usize;
        if n == 0 {
            return Err(err(3, tok.0, "dimension must be positive"));
        }
        dims.push(n);
    }
    let count = dims
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .ok_or_else(|| err(3, 1, "entry count overflows"))?;

    let l4 = tokens(lines.get(3, "`backend ...`")?, 4)?;
    keyword(&l4, 4, "backend")?;
    let backend = match l4.get(1) {
        Some((_, "exact")) if l4.len() == 2 => Backend::Exact,
        Some((_, "modp")) if l4.len() == 3 => Backend::ModP(number(l4[2], 4, "prime")?),
        Some((c, t)) => return Err(err(4, *c, format!("unknown backend `{t}`"))),
        None => return Err(err(4, 8, "missing backend")),
    };

    let body = &lines.lines[4..];
    if body.len() != count {
        let line = 5 + body.len().min(count);
        return Err(err(
            line,
            1,
            format!("expected {count} entries for dims {dims:?}, found {}", body.len()),
        ));
    }

    match backend {
        Backend::Exact => Ok(AnyHypermatrix::Exact(entries::<Rational>(body, dims, ())?)),
        Backend::ModP(p) => {
            let modulus = Modulus::new(p).map_err(|e| err(4, l4[2].0, e.to_string()))?;
            Ok(AnyHypermatrix::ModP(entries::<Fp>(body, dims, modulus)?))
        }
    }
}

fn entries<S: Scalar>(
    body: &[&str],
    dims: Vec<usize>,
    ctx: S::Context,
) -> Result<Hypermatrix<S>, HmxError> {
    let values = body
        .iter()
        .enumerate()
        .map(|(i, line)| S::parse_canonical(line, &ctx).map_err(|e| err(i + 5, 1, e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Hypermatrix::new(dims, values, ctx).map_err(|e| err(3, 1, e.to_string()))
}
