//! Text formats: MatrixMarket (`array` and `coordinate`, `general` only) and
//! CSV with optional complex literals (`re+imi`, `re-imi`).
//!
//! Serializers print every component with 17 significant digits, so
//! `parse(serialize(m)) == m` bit for bit.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

fn parse_header(line: &str) -> Result<(Layout, Field)> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(Error::parse(1, "missing `%%MatrixMarket` banner"));
    }
    if tokens.len() != 5 {
        return Err(Error::parse(1, format!("banner needs 4 fields after %%MatrixMarket, got {}", tokens.len() - 1)));
    }
    if tokens[1] != "matrix" {
        return Err(Error::parse(1, format!("unsupported object `{}`", tokens[1])));
    }
    let layout = match tokens[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(Error::parse(1, format!("unknown format `{other}`"))),
    };
    let field = match tokens[3].as_str() {
        "real" => Field::Real,
        "complex" => Field::Complex,
        "integer" => Field::Integer,
        other => return Err(Error::parse(1, format!("unsupported field `{other}`"))),
    };
    match tokens[4].as_str() {
        "general" => Ok((layout, field)),
        q @ ("symmetric" | "hermitian" | "skew-symmetric") => Err(Error::UnsupportedQualifier(q.to_string())),
        other => Err(Error::parse(1, format!("unknown symmetry `{other}`"))),
    }
}

fn parse_number(token: &str, field: Field, line: usize) -> Result<f64> {
    match field {
        Field::Integer => token
            .parse::<i64>()
            .map(|v| v as f64)
            .map_err(|_| Error::parse(line, format!("`{token}` is not an integer"))),
        _ => token.parse::<f64>().map_err(|_| Error::parse(line, format!("`{token}` is not a number"))),
    }
}

fn parse_value(tokens: &[&str], field: Field, line: usize) -> Result<Complex64> {
    let expected = if field == Field::Complex { 2 } else { 1 };
    if tokens.len() != expected {
        return Err(Error::parse(line, format!("expected {expected} value(s), got {}", tokens.len())));
    }
    let re = parse_number(tokens[0], field, line)?;
    let im = if field == Field::Complex { parse_number(tokens[1], field, line)? } else { 0.0 };
    Ok(Complex64::new(re, im))
}

fn parse_index(token: &str, n: usize, line: usize) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(Error::parse(line, format!("index `{token}` outside 1..={n}"))),
    }
}

/// Parses a MatrixMarket `matrix` with `general` symmetry. Dense `array`
/// bodies are column-major; missing `coordinate` entries are zero and
/// duplicates are rejected.
pub fn parse_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (layout, field) = match lines.next() {
        Some((_, header)) => parse_header(header)?,
        None => return Err(Error::parse(1, "empty input")),
    };
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = body.next().ok_or_else(|| Error::parse(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::parse(size_line, format!("bad size token `{t}`"))))
        .collect::<Result<_>>()?;
    let want = if layout == Layout::Array { 2 } else { 3 };
    if dims.len() != want {
        return Err(Error::parse(size_line, format!("size line needs {want} integers, got {}", dims.len())));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    let n = rows;
    if n == 0 {
        return Err(Error::parse(size_line, "matrix dimension must be at least 1"));
    }

    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    match layout {
        Layout::Array => {
            let mut count = 0;
            for (line, text) in body {
                let tokens: Vec<&str> = text.split_whitespace().collect();
                let value = parse_value(&tokens, field, line)?;
                if count == n * n {
                    return Err(Error::parse(line, format!("more than {} values for a {n}x{n} array", n * n)));
                }
                // column-major
                let (i, j) = (count % n, count / n);
                entries[i * n + j] = value;
                count += 1;
            }
            if count != n * n {
                return Err(Error::parse(
                    text.lines().count(),
                    format!("expected {} values for a {n}x{n} array, got {count}", n * n),
                ));
            }
        }
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut seen = vec![false; n * n];
            let mut count = 0;
            for (line, text) in body {
                let tokens: Vec<&str> = text.split_whitespace().collect();
                if tokens.len() < 2 {
                    return Err(Error::parse(line, "coordinate entry needs row and column indices"));
                }
                if count == nnz {
                    return Err(Error::parse(line, format!("more than the declared {nnz} entries")));
                }
                let i = parse_index(tokens[0], n, line)?;
                let j = parse_index(tokens[1], n, line)?;
                if seen[i * n + j] {
                    return Err(Error::parse(line, format!("duplicate entry ({}, {})", i + 1, j + 1)));
                }
                seen[i * n + j] = true;
                entries[i * n + j] = parse_value(&tokens[2..], field, line)?;
                count += 1;
            }
            if count != nnz {
                return Err(Error::parse(text.lines().count(), format!("declared {nnz} entries, found {count}")));
            }
        }
    }
    Matrix::new(n, entries)
}

fn is_real_entry(z: Complex64) -> bool {
    z.im.to_bits() == 0
}

/// Dense `array` MatrixMarket text; `complex` field if any entry has a
/// nonzero (or negative-zero) imaginary part.
pub fn to_matrix_market(m: &Matrix) -> String {
    let n = m.dim();
    let complex = !m.entries().iter().all(|&z| is_real_entry(z));
    let mut out = String::new();
    let field = if complex { "complex" } else { "real" };
    writeln!(out, "%%MatrixMarket matrix array {field} general").unwrap();
    writeln!(out, "{n} {n}").unwrap();
    for j in 0..n {
        for i in 0..n {
            let z = m.get(i, j);
            if complex {
                writeln!(out, "{:.16e} {:.16e}", z.re, z.im).unwrap();
            } else {
                writeln!(out, "{:.16e}", z.re).unwrap();
            }
        }
    }
    out
}

fn parse_csv_entry(cell: &str, line: usize) -> Result<Complex64> {
    let bad = || Error::parse(line, format!("`{cell}` is not a number"));
    let Some(body) = cell.strip_suffix('i') else {
        return cell.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    let im = im.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// One matrix row per line, cells separated by commas. Blank lines are
/// ignored.
pub fn parse_csv(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let row: Vec<Complex64> =
            raw.split(',').map(|cell| parse_csv_entry(cell.trim(), line)).collect::<Result<_>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::parse(line, format!("row has {} entries, expected {w}", row.len())))
            }
            _ => {}
        }
        rows.push(row);
    }
    let Some(cols) = width else {
        return Err(Error::parse(1, "empty input"));
    };
    if rows.len() != cols {
        return Err(Error::NonSquare { rows: rows.len(), cols });
    }
    Matrix::new(cols, rows.into_iter().flatten().collect())
}

fn csv_entry(z: Complex64) -> String {
    if is_real_entry(z) {
        format!("{:.16e}", z.re)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{:.16e}{sign}{:.16e}i", z.re, z.im.abs())
    }
}

pub fn to_csv(m: &Matrix) -> String {
    let n = m.dim();
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| csv_entry(m.get(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
