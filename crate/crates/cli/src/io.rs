//! Matrix Market matrices (array or coordinate, real, general) and
//! one-value-per-line vectors.
//!
//! Array-format payloads are column-major per the format definition. Values
//! are written with Rust's shortest round-trip float formatting, so an
//! array-format save/load cycle is bit-exact.

use nalgebra::{DMatrix, DVector};
use std::fmt::Write as _;
use std::path::Path;

use crate::{HarnessError, Result};

/// Dense size guard for loaded matrices (entries, not bytes).
pub const MAX_DENSE_ENTRIES: usize = 10_000_000;

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Loads a Matrix Market file. Only `matrix` objects with `real` field and
/// `general` symmetry are accepted, in `array` or `coordinate` format.
pub fn load_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text = read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(parse_err(
            path,
            hline + 1,
            "header must be `%%MatrixMarket matrix <format> <field> <symmetry>`",
        ));
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") {
        return Err(parse_err(path, hline + 1, "only `matrix` objects are supported"));
    }
    let format = tokens[2].to_ascii_lowercase();
    if format != "array" && format != "coordinate" {
        return Err(parse_err(
            path,
            hline + 1,
            format!("unsupported format `{}` (array or coordinate)", tokens[2]),
        ));
    }
    if !tokens[3].eq_ignore_ascii_case("real") {
        return Err(parse_err(
            path,
            hline + 1,
            format!("unsupported field `{}` (only real)", tokens[3]),
        ));
    }
    if !tokens[4].eq_ignore_ascii_case("general") {
        return Err(parse_err(
            path,
            hline + 1,
            format!("unsupported symmetry `{}` (only general)", tokens[4]),
        ));
    }

    // Skip comments, find the size line.
    let mut size_line = None;
    for (idx, line) in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some((idx, trimmed.to_string()));
        break;
    }
    let (sidx, size) = size_line.ok_or_else(|| parse_err(path, hline + 2, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();

    let parse_dim = |tok: &str, what: &str| -> Result<usize> {
        tok.parse::<usize>()
            .map_err(|_| parse_err(path, sidx + 1, format!("invalid {what} `{tok}`")))
    };

    match format.as_str() {
        "array" => {
            if dims.len() != 2 {
                return Err(parse_err(path, sidx + 1, "array size line must be `rows cols`"));
            }
            let n = parse_dim(dims[0], "row count")?;
            let d = parse_dim(dims[1], "column count")?;
            if n == 0 || d == 0 {
                return Err(parse_err(path, sidx + 1, "dimensions must be positive"));
            }
            if n.saturating_mul(d) > MAX_DENSE_ENTRIES {
                return Err(HarnessError::Invalid(format!(
                    "{n}×{d} exceeds the {MAX_DENSE_ENTRIES}-entry dense limit"
                )));
            }
            let mut values = Vec::with_capacity(n * d);
            for (idx, line) in lines {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('%') {
                    continue;
                }
                for tok in trimmed.split_whitespace() {
                    let v: f64 = tok.parse().map_err(|_| {
                        parse_err(path, idx + 1, format!("invalid value `{tok}`"))
                    })?;
                    values.push(v);
                }
            }
            if values.len() != n * d {
                return Err(parse_err(
                    path,
                    sidx + 1,
                    format!("expected {} values, found {}", n * d, values.len()),
                ));
            }
            // Column-major payload.
            Ok(DMatrix::from_vec(n, d, values))
        }
        _ => {
            if dims.len() != 3 {
                return Err(parse_err(
                    path,
                    sidx + 1,
                    "coordinate size line must be `rows cols nnz`",
                ));
            }
            let n = parse_dim(dims[0], "row count")?;
            let d = parse_dim(dims[1], "column count")?;
            let nnz = parse_dim(dims[2], "nonzero count")?;
            if n == 0 || d == 0 {
                return Err(parse_err(path, sidx + 1, "dimensions must be positive"));
            }
            if n.saturating_mul(d) > MAX_DENSE_ENTRIES {
                return Err(HarnessError::Invalid(format!(
                    "{n}×{d} exceeds the {MAX_DENSE_ENTRIES}-entry dense limit"
                )));
            }
            let mut out = DMatrix::zeros(n, d);
            let mut seen = 0usize;
            for (idx, line) in lines {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('%') {
                    continue;
                }
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(parse_err(path, idx + 1, "entry must be `i j value`"));
                }
                let i: usize = toks[0]
                    .parse()
                    .map_err(|_| parse_err(path, idx + 1, format!("invalid row `{}`", toks[0])))?;
                let j: usize = toks[1].parse().map_err(|_| {
                    parse_err(path, idx + 1, format!("invalid column `{}`", toks[1]))
                })?;
                let v: f64 = toks[2].parse().map_err(|_| {
                    parse_err(path, idx + 1, format!("invalid value `{}`", toks[2]))
                })?;
                if i == 0 || i > n || j == 0 || j > d {
                    return Err(parse_err(
                        path,
                        idx + 1,
                        format!("index ({i}, {j}) outside {n}×{d}"),
                    ));
                }
                out[(i - 1, j - 1)] += v;
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(
                    path,
                    sidx + 1,
                    format!("expected {nnz} entries, found {seen}"),
                ));
            }
            Ok(out)
        }
    }
}

/// Writes a dense matrix in array format (column-major, shortest round-trip
/// float formatting).
pub fn save_matrix(path: &Path, a: &DMatrix<f64>) -> Result<()> {
    let (n, d) = a.shape();
    let mut text = String::new();
    let _ = writeln!(text, "%%MatrixMarket matrix array real general");
    let _ = writeln!(text, "{n} {d}");
    for j in 0..d {
        for i in 0..n {
            let _ = writeln!(text, "{}", a[(i, j)]);
        }
    }
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes a matrix in coordinate format (nonzeros only, 1-based indices).
pub fn save_matrix_coordinate(path: &Path, a: &DMatrix<f64>) -> Result<()> {
    let (n, d) = a.shape();
    let mut entries = Vec::new();
    for j in 0..d {
        for i in 0..n {
            if a[(i, j)] != 0.0 {
                entries.push((i + 1, j + 1, a[(i, j)]));
            }
        }
    }
    let mut text = String::new();
    let _ = writeln!(text, "%%MatrixMarket matrix coordinate real general");
    let _ = writeln!(text, "{n} {d} {}", entries.len());
    for (i, j, v) in entries {
        let _ = writeln!(text, "{i} {j} {v}");
    }
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a one-value-per-line vector; blank lines and `#`/`%` comments skip.
pub fn load_vector(path: &Path) -> Result<DVector<f64>> {
    let text = read_to_string(path)?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let v: f64 = trimmed
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("invalid value `{trimmed}`")))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(HarnessError::Invalid(format!(
            "{} contains no values",
            path.display()
        )));
    }
    Ok(DVector::from_vec(values))
}

pub fn save_vector(path: &Path, b: &DVector<f64>) -> Result<()> {
    let mut text = String::new();
    for v in b.iter() {
        let _ = writeln!(text, "{v}");
    }
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}
