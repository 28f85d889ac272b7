//! Matrix Market input and output.
//!
//! Matrices: `coordinate` or `array` format, `real`, `integer` or `pattern`
//! field, `symmetric` or (verified) `general` symmetry. Vectors: `array real
//! general` with a single column.

use crate::operators::{DenseSymMatrix, Diagonal, OperatorError, SparseSymMatrix, SymmetricOperator};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MtxError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Operator(#[from] OperatorError),
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, MtxError> {
    Err(MtxError::Parse {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
}

/// Parsed banner line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MtxHeader {
    pub format: Format,
    pub field: Field,
    pub symmetry: Symmetry,
}

/// A matrix read from file, in the storage that matches its format.
#[derive(Debug, Clone, PartialEq)]
pub enum MtxMatrix {
    Sparse(SparseSymMatrix),
    Dense(DenseSymMatrix),
}

impl MtxMatrix {
    /// Stored nonzeros: one triangle for sparse input, all nonzero entries for
    /// dense input.
    pub fn nnz(&self) -> usize {
        match self {
            MtxMatrix::Sparse(m) => m.nnz(),
            MtxMatrix::Dense(m) => m.nnz(),
        }
    }

    pub fn to_dense(&self) -> DenseSymMatrix {
        match self {
            MtxMatrix::Sparse(m) => m.to_dense(),
            MtxMatrix::Dense(m) => m.clone(),
        }
    }
}

impl Diagonal for MtxMatrix {
    fn diagonal(&self) -> Vec<f64> {
        match self {
            MtxMatrix::Sparse(m) => m.diagonal(),
            MtxMatrix::Dense(m) => m.diagonal(),
        }
    }
}

impl SymmetricOperator for MtxMatrix {
    fn dim(&self) -> usize {
        match self {
            MtxMatrix::Sparse(m) => m.dim(),
            MtxMatrix::Dense(m) => m.dim(),
        }
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        match self {
            MtxMatrix::Sparse(m) => m.apply_into(x, y),
            MtxMatrix::Dense(m) => m.apply_into(x, y),
        }
    }
}

/// Lines that carry data, with 1-based line numbers; comments and blank
/// lines are skipped.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_data(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            return Some((i + 1, t));
        }
        None
    }
}

pub fn parse_header(line: &str) -> Result<(MtxHeader, &'static str), MtxError> {
    let tokens: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return parse_err(1, "missing %%MatrixMarket banner");
    }
    if tokens.len() != 5 {
        return parse_err(1, format!("banner needs 4 fields after %%MatrixMarket, found {}", tokens.len() - 1));
    }
    if tokens[1] != "matrix" {
        return parse_err(1, format!("unsupported object '{}'", tokens[1]));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        other => return parse_err(1, format!("unsupported format '{other}'")),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return parse_err(1, format!("unsupported field '{other}'")),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return parse_err(1, format!("unsupported symmetry '{other}'")),
    };
    if format == Format::Array && field == Field::Pattern {
        return parse_err(1, "pattern field is only valid for coordinate format");
    }
    let kind = match format {
        Format::Coordinate => "coordinate",
        Format::Array => "array",
    };
    Ok((MtxHeader { format, field, symmetry }, kind))
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, MtxError> {
    tok.parse::<usize>()
        .or_else(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

fn parse_value(line: usize, tok: &str, field: Field) -> Result<f64, MtxError> {
    let v = match field {
        Field::Integer => tok.parse::<i64>().map(|v| v as f64).ok(),
        _ => tok.parse::<f64>().ok(),
    };
    match v {
        Some(v) if v.is_finite() => Ok(v),
        Some(_) => parse_err(line, format!("non-finite value '{tok}'")),
        None => parse_err(line, format!("invalid value '{tok}'")),
    }
}

fn read_to_string(path: &Path) -> Result<String, MtxError> {
    fs::read_to_string(path).map_err(|source| MtxError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<MtxMatrix, MtxError> {
    parse_matrix(&read_to_string(path.as_ref())?)
}

/// Parses a symmetric matrix from Matrix Market text.
pub fn parse_matrix(text: &str) -> Result<MtxMatrix, MtxError> {
    let banner = text.lines().next().unwrap_or("");
    let (header, _) = parse_header(banner)?;
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    lines.inner.next();
    let Some((size_line, size)) = lines.next_data() else {
        return parse_err(2, "missing size line");
    };
    let dims: Vec<&str> = size.split_whitespace().collect();
    match header.format {
        Format::Coordinate => {
            if dims.len() != 3 {
                return parse_err(size_line, "coordinate size line needs 'rows cols entries'");
            }
            let rows = parse_usize(size_line, dims[0], "row count")?;
            let cols = parse_usize(size_line, dims[1], "column count")?;
            let nnz = parse_usize(size_line, dims[2], "entry count")?;
            if rows != cols {
                return parse_err(size_line, format!("matrix is not square ({rows} x {cols})"));
            }
            if rows == 0 {
                return parse_err(size_line, "matrix dimension must be at least 1");
            }
            let n = rows;
            let mut triplets = Vec::with_capacity(nnz);
            let mut general = Vec::new();
            for _ in 0..nnz {
                let Some((ln, entry)) = lines.next_data() else {
                    return parse_err(text.lines().count() + 1, format!("expected {nnz} entries, found {}", triplets.len() + general.len()));
                };
                let toks: Vec<&str> = entry.split_whitespace().collect();
                let want = if header.field == Field::Pattern { 2 } else { 3 };
                if toks.len() != want {
                    return parse_err(ln, format!("expected {want} fields, found {}", toks.len()));
                }
                let r = parse_usize(ln, toks[0], "row index")?;
                let c = parse_usize(ln, toks[1], "column index")?;
                if r == 0 || c == 0 || r > n || c > n {
                    return parse_err(ln, format!("index ({r}, {c}) out of range 1..={n}"));
                }
                let v = if header.field == Field::Pattern {
                    1.0
                } else {
                    parse_value(ln, toks[2], header.field)?
                };
                match header.symmetry {
                    Symmetry::Symmetric => {
                        if r < c {
                            return parse_err(ln, format!("entry ({r}, {c}) lies above the diagonal of a symmetric file"));
                        }
                        triplets.push((r - 1, c - 1, v));
                    }
                    Symmetry::General => general.push((ln, r - 1, c - 1, v)),
                }
            }
            if let Some((ln, _)) = lines.next_data() {
                return parse_err(ln, format!("more than {nnz} entries"));
            }
            if header.symmetry == Symmetry::General {
                triplets = fold_general(&general)?;
            }
            Ok(MtxMatrix::Sparse(SparseSymMatrix::from_triplets(n, &triplets)?))
        }
        Format::Array => {
            if dims.len() != 2 {
                return parse_err(size_line, "array size line needs 'rows cols'");
            }
            let rows = parse_usize(size_line, dims[0], "row count")?;
            let cols = parse_usize(size_line, dims[1], "column count")?;
            if rows != cols {
                return parse_err(size_line, format!("matrix is not square ({rows} x {cols})"));
            }
            if rows == 0 {
                return parse_err(size_line, "matrix dimension must be at least 1");
            }
            let n = rows;
            let mut entries = vec![0.0; n * n];
            let mut last_line = size_line;
            // Column-major; symmetric files list the lower triangle only.
            for j in 0..n {
                let start = if header.symmetry == Symmetry::Symmetric { j } else { 0 };
                for i in start..n {
                    let Some((ln, tok)) = lines.next_data() else {
                        return parse_err(last_line + 1, "too few array entries");
                    };
                    last_line = ln;
                    let v = parse_value(ln, tok, header.field)?;
                    entries[i * n + j] = v;
                    if header.symmetry == Symmetry::Symmetric {
                        entries[j * n + i] = v;
                    }
                }
            }
            if let Some((ln, _)) = lines.next_data() {
                return parse_err(ln, "too many array entries");
            }
            if header.symmetry == Symmetry::General {
                for i in 0..n {
                    for j in 0..i {
                        if entries[i * n + j] != entries[j * n + i] {
                            return parse_err(
                                size_line,
                                format!("general matrix is not symmetric at ({}, {})", i + 1, j + 1),
                            );
                        }
                    }
                }
            }
            Ok(MtxMatrix::Dense(DenseSymMatrix::new(n, entries)?))
        }
    }
}

/// Checks that a general coordinate listing is exactly symmetric and keeps
/// its lower triangle.
fn fold_general(entries: &[(usize, usize, usize, f64)]) -> Result<Vec<(usize, usize, f64)>, MtxError> {
    use std::collections::BTreeMap;
    let mut sums: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    for &(ln, r, c, v) in entries {
        let e = sums.entry((r, c)).or_insert((0.0, ln));
        e.0 += v;
    }
    let mut lower = Vec::new();
    for (&(r, c), &(v, ln)) in &sums {
        let mirror = sums.get(&(c, r)).map_or(0.0, |m| m.0);
        if v != mirror {
            return parse_err(ln, format!("general matrix is not symmetric at ({}, {})", r + 1, c + 1));
        }
        if r >= c {
            lower.push((r, c, v));
        }
    }
    Ok(lower)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>, MtxError> {
    parse_vector(&read_to_string(path.as_ref())?)
}

/// Parses an `n x 1` array-format real vector.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, MtxError> {
    let (header, _) = parse_header(text.lines().next().unwrap_or(""))?;
    if header.format != Format::Array || header.symmetry != Symmetry::General || header.field == Field::Pattern {
        return parse_err(1, "vectors must be 'array real general'");
    }
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    lines.inner.next();
    let Some((size_line, size)) = lines.next_data() else {
        return parse_err(2, "missing size line");
    };
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 2 {
        return parse_err(size_line, "array size line needs 'rows cols'");
    }
    let rows = parse_usize(size_line, dims[0], "row count")?;
    let cols = parse_usize(size_line, dims[1], "column count")?;
    if cols != 1 {
        return parse_err(size_line, format!("expected a single column, found {cols}"));
    }
    if rows == 0 {
        return parse_err(size_line, "vector must have at least one entry");
    }
    let mut v = Vec::with_capacity(rows);
    let mut last_line = size_line;
    while v.len() < rows {
        let Some((ln, tok)) = lines.next_data() else {
            return parse_err(last_line + 1, format!("expected {rows} entries, found {}", v.len()));
        };
        last_line = ln;
        v.push(parse_value(ln, tok, header.field)?);
    }
    if let Some((ln, _)) = lines.next_data() {
        return parse_err(ln, format!("more than {rows} entries"));
    }
    Ok(v)
}

/// Formats `v` as an array-format column with 17 significant digits.
pub fn format_vector(v: &[f64]) -> String {
    let mut s = String::from("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(s, "{} 1", v.len());
    for &x in v {
        let x = if x == 0.0 { 0.0 } else { x };
        let _ = writeln!(s, "{x:.16e}");
    }
    s
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<(), MtxError> {
    let path = path.as_ref();
    fs::write(path, format_vector(v)).map_err(|source| MtxError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Formats the lower triangle of a sparse matrix as a symmetric coordinate
/// file.
pub fn format_matrix(m: &SparseSymMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
    let _ = writeln!(s, "{} {} {}", m.dim(), m.dim(), m.nnz());
    for (r, c, v) in m.iter() {
        let _ = writeln!(s, "{} {} {v:.16e}", r + 1, c + 1);
    }
    s
}

pub fn write_matrix(path: impl AsRef<Path>, m: &SparseSymMatrix) -> Result<(), MtxError> {
    let path = path.as_ref();
    fs::write(path, format_matrix(m)).map_err(|source| MtxError::Io {
        path: path.to_path_buf(),
        source,
    })
}
