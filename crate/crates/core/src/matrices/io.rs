//! Matrix text format:
//!
//! ```text
//! n <order> field <fieldspec>
//! <n lines of n whitespace-separated element encodings>
//! ```

use std::fmt;
use std::str::FromStr;

use crate::fields::{Fe, Field};

use super::{Matrix, MatrixError};

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {} field {}", self.n, self.field)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|e| e.0.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> MatrixError {
    MatrixError::Parse { line, msg: msg.into() }
}

/// Reads one matrix block from `lines`, skipping leading blank lines.
/// `lines` yields `(1-based line number, text)`.
fn read_block<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<Option<Matrix>, MatrixError> {
    let (hline, header) = loop {
        match lines.next() {
            None => return Ok(None),
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((no, l)) => break (no, l.trim()),
        }
    };
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "n" || tokens[2] != "field" {
        return Err(parse_err(hline, format!("expected \"n <order> field <fieldspec>\", got {header:?}")));
    }
    let n: usize = tokens[1].parse().map_err(|_| parse_err(hline, format!("bad order {:?}", tokens[1])))?;
    let field: Field = tokens[3].parse().map_err(|e| parse_err(hline, format!("{e}")))?;
    let mut data = Vec::with_capacity(n * n);
    for r in 0..n {
        let (no, l) = lines.next().ok_or_else(|| parse_err(hline + r + 1, "unexpected end of input"))?;
        let row: Vec<&str> = l.split_whitespace().collect();
        if row.len() != n {
            return Err(parse_err(no, format!("row {} has {} entries, expected {n}", r + 1, row.len())));
        }
        for (c, tok) in row.iter().enumerate() {
            let v: u64 = tok.parse().map_err(|_| parse_err(no, format!("entry ({}, {}) is not an integer", r + 1, c + 1)))?;
            let e = field.element(v).map_err(|e| parse_err(no, format!("entry ({}, {}): {e}", r + 1, c + 1)))?;
            data.push(e);
        }
    }
    Ok(Some(Matrix::from_vec(&field, n, data)?))
}

impl FromStr for Matrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l));
        let m = read_block(&mut lines)?.ok_or_else(|| parse_err(1, "empty input"))?;
        if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(parse_err(no, "trailing content after matrix"));
        }
        Ok(m)
    }
}

impl Matrix {
    /// Inline form `"a b; c d"` over a given field.
    pub fn parse_inline(field: &Field, text: &str) -> Result<Matrix, MatrixError> {
        let rows: Vec<Vec<Fe>> = text
            .split(';')
            .enumerate()
            .map(|(r, row)| {
                row.split_whitespace()
                    .map(|t| {
                        let v: u64 = t.parse().map_err(|_| parse_err(1, format!("row {}: {t:?} is not an integer", r + 1)))?;
                        Ok(field.element(v)?)
                    })
                    .collect::<Result<Vec<_>, MatrixError>>()
            })
            .collect::<Result<_, _>>()?;
        Matrix::from_rows(field, &rows)
    }
}

/// Extracts every matrix that follows a line of the form `<label> =`.
/// Other lines (report headers, `key = value` pairs) are ignored.
pub fn parse_labelled_blocks(text: &str) -> Result<Vec<(String, Matrix)>, MatrixError> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    while let Some((_, l)) = lines.next() {
        let t = l.trim();
        if let Some(label) = t.strip_suffix('=') {
            let label = label.trim();
            if !label.is_empty() && !label.contains(char::is_whitespace) {
                if let Some(m) = read_block(&mut lines)? {
                    out.push((label.to_string(), m));
                }
            }
        }
    }
    Ok(out)
}
