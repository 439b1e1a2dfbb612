//! Plain-text splitting files.
//!
//! ```text
//! # comments run to the end of the line
//! dim 2
//! A
//! 0+0j 1+0j
//! 1+0j 0+0j
//!
//! B
//! 1+0j 0+0j
//! 0+0j -1+0j
//! ```

use std::fmt::Write;
use std::path::Path;

use num_complex::Complex64;
use trotter_core::linalg::{ComplexMatrix, HermitianOperator};
use trotter_core::trotter::Splitting;

use crate::error::{CliError, CliResult};

/// Parses `re+imj`, `re-imj`, `re` or `imj`.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let value = match token.strip_suffix('j') {
        None => Complex64::new(token.parse().ok()?, 0.0),
        Some(body) => {
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
            match split {
                Some(i) => {
                    let im = match &body[i..] {
                        "+" => 1.0,
                        "-" => -1.0,
                        s => s.parse().ok()?,
                    };
                    Complex64::new(body[..i].parse().ok()?, im)
                }
                None => Complex64::new(0.0, body.parse().ok()?),
            }
        }
    };
    (value.re.is_finite() && value.im.is_finite()).then_some(value)
}

/// Shortest round-trip form, so that reloading reproduces every bit.
pub fn format_complex(z: Complex64) -> String {
    format!("{:?}{:+?}j", z.re, z.im)
}

struct Lines<'a> {
    path: String,
    inner: std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(path: String, text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Self {
            path,
            inner: lines.into_iter().peekable(),
            last: 0,
        }
    }

    fn error(&self, line: usize, message: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> CliResult<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(self.error(
                self.last + 1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn block(&mut self, name: &str, dim: usize) -> CliResult<ComplexMatrix> {
        let (n, line) = self.next(&format!("block {name}"))?;
        if line != name {
            return Err(self.error(n, format!("expected block header `{name}`, found `{line}`")));
        }
        let mut rows = Vec::with_capacity(dim);
        for r in 0..dim {
            let (n, line) = match self.inner.peek() {
                Some(&(n, l)) if l != "B" => {
                    self.next("matrix row")?;
                    (n, l)
                }
                _ => {
                    return Err(self.error(
                        self.last + 1,
                        format!("block {name}: expected {dim} rows, found {r}"),
                    ))
                }
            };
            let row = line
                .split_whitespace()
                .map(|tok| {
                    parse_complex(tok).ok_or_else(|| {
                        self.error(n, format!("block {name}: bad complex entry `{tok}`"))
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            if row.len() != dim {
                return Err(self.error(
                    n,
                    format!("block {name}: expected {dim} entries, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        Ok(ComplexMatrix::from_rows(&rows)?)
    }
}

/// Parses the text of a splitting file; `path` is used in messages.
pub fn parse_splitting(path: &str, text: &str) -> CliResult<Splitting> {
    let mut lines = Lines::new(path.to_string(), text);
    let (n, header) = lines.next("`dim d`")?;
    let dim = header
        .strip_prefix("dim")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| lines.error(n, format!("expected `dim d` with d >= 1, found `{header}`")))?;
    let a = lines.block("A", dim)?;
    let b = lines.block("B", dim)?;
    if let Some(&(n, extra)) = lines.inner.peek() {
        return Err(lines.error(
            n,
            format!("block B: expected {dim} rows, found extra line `{extra}`"),
        ));
    }
    let hermitian = |m: ComplexMatrix, name: &str| {
        HermitianOperator::new(m)
            .map_err(|e| CliError::InvalidInput(format!("{path}: block {name}: {e}")))
    };
    let a = hermitian(a, "A")?;
    let b = hermitian(b, "B")?;
    Ok(Splitting::new(a, b)?)
}

pub fn load_splitting(path: &Path) -> CliResult<Splitting> {
    let text = std::fs::read_to_string(path)?;
    parse_splitting(&path.display().to_string(), &text)
}

/// Inverse of [`parse_splitting`].
pub fn format_splitting(a: &ComplexMatrix, b: &ComplexMatrix) -> String {
    let mut out = format!("dim {}\n", a.dim());
    for (name, m) in [("A", a), ("B", b)] {
        if name == "B" {
            out.push('\n');
        }
        writeln!(out, "{name}").unwrap();
        for r in 0..m.dim() {
            let row: Vec<String> = (0..m.dim()).map(|c| format_complex(m.get(r, c))).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
    out
}
