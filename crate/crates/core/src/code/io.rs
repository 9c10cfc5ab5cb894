//! The `QPC 1` text format.
//!
//! ```text
//! QPC 1
//! n=6 m=6
//! gb ell=3 a=0,1 b=0,2
//! 0: 0:X 1:X 3:X 5:X
//! ...
//! ```
//!
//! The `gb` line is optional. Rows appear in order, one per line, with
//! strictly increasing columns. `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use super::{GbSpec, SparseCheckMatrix};
use crate::error::{Error, Result};
use crate::pauli::Pauli;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_list(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad exponent `{t}`")))
        })
        .collect()
}

fn key_value<'a>(line: usize, tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=<value>`, found `{tok}`")))
}

/// Parses a code file. With `validate`, rows must pairwise commute.
pub fn parse_code(text: &str, validate: bool) -> Result<SparseCheckMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, magic) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["QPC", "1"] {
        return Err(parse_err(
            ln,
            format!("expected header `QPC 1`, found `{magic}`"),
        ));
    }

    let (ln, dims) = lines
        .next()
        .ok_or_else(|| parse_err(ln + 1, "missing `n=<int> m=<int>` line"))?;
    let toks: Vec<&str> = dims.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(ln, "expected `n=<int> m=<int>`"));
    }
    let n: usize = key_value(ln, toks[0], "n")?
        .parse()
        .map_err(|_| parse_err(ln, "bad value for n"))?;
    let m: usize = key_value(ln, toks[1], "m")?
        .parse()
        .map_err(|_| parse_err(ln, "bad value for m"))?;

    let mut gb = None;
    let mut rows = Vec::with_capacity(m);
    let mut last_line = ln;
    for (ln, line) in lines {
        last_line = ln;
        if let Some(rest) = line.strip_prefix("gb ") {
            if gb.is_some() || !rows.is_empty() {
                return Err(parse_err(
                    ln,
                    "`gb` line must precede the rows and appear once",
                ));
            }
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(parse_err(ln, "expected `gb ell=<int> a=<list> b=<list>`"));
            }
            let ell = key_value(ln, toks[0], "ell")?
                .parse()
                .map_err(|_| parse_err(ln, "bad value for ell"))?;
            let a = parse_list(ln, key_value(ln, toks[1], "a")?)?;
            let b = parse_list(ln, key_value(ln, toks[2], "b")?)?;
            let spec = GbSpec::new(ell, a, b).map_err(|e| parse_err(ln, e.to_string()))?;
            if 2 * spec.ell != n || 2 * spec.ell != m {
                return Err(parse_err(
                    ln,
                    format!("gb ell={} inconsistent with n={n} m={m}", spec.ell),
                ));
            }
            gb = Some(spec);
            continue;
        }

        let (idx, body) = line
            .split_once(':')
            .ok_or_else(|| parse_err(ln, "expected `<row>: <col>:<S> ...`"))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| parse_err(ln, "bad row index"))?;
        if idx != rows.len() {
            return Err(parse_err(
                ln,
                format!("expected row {}, found row {idx}", rows.len()),
            ));
        }
        if idx >= m {
            return Err(parse_err(ln, format!("row {idx} exceeds m={m}")));
        }
        let mut row: Vec<(usize, Pauli)> = Vec::new();
        for tok in body.split_whitespace() {
            let (col, sym) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(ln, format!("bad entry `{tok}`")))?;
            let col: usize = col
                .parse()
                .map_err(|_| parse_err(ln, format!("bad column in `{tok}`")))?;
            let mut chars = sym.chars();
            let p = match (chars.next().and_then(Pauli::from_char), chars.next()) {
                (Some(p), None) if !p.is_identity() => p,
                _ => {
                    return Err(parse_err(
                        ln,
                        format!("symbol must be X, Y or Z in `{tok}`"),
                    ))
                }
            };
            if col >= n {
                return Err(parse_err(ln, format!("column {col} out of range (n={n})")));
            }
            if let Some(&(prev, _)) = row.last() {
                if col == prev {
                    return Err(parse_err(ln, format!("duplicate column {col}")));
                }
                if col < prev {
                    return Err(parse_err(ln, format!("columns not increasing at {col}")));
                }
            }
            row.push((col, p));
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(parse_err(
            last_line,
            format!("expected {m} rows, found {}", rows.len()),
        ));
    }

    let mut h = SparseCheckMatrix::new(n, rows)?;
    if let Some(spec) = gb {
        h = h.with_gb(spec);
    }
    if validate {
        h.validate_orthogonality()?;
    }
    Ok(h)
}

/// Canonical textual form. [`parse_code`] inverts it exactly.
pub fn write_code(h: &SparseCheckMatrix) -> String {
    let mut out = String::new();
    out.push_str("QPC 1\n");
    let _ = writeln!(out, "n={} m={}", h.n(), h.m());
    if let Some(gb) = h.gb_spec() {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "gb ell={} a={} b={}", gb.ell, join(&gb.a), join(&gb.b));
    }
    for (i, row) in h.rows().iter().enumerate() {
        let _ = write!(out, "{i}:");
        for &(j, p) in row {
            let _ = write!(out, " {j}:{p}");
        }
        out.push('\n');
    }
    out
}

pub fn load_code(path: impl AsRef<Path>, validate: bool) -> Result<SparseCheckMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_code(&text, validate)
}

pub fn save_code(h: &SparseCheckMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_code(h)).map_err(|e| Error::io(path, e))
}
