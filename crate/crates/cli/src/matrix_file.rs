//! Text format for target unitaries.
//!
//! ```text
//! # comments start with '#'
//! 2
//! 0,0 1,0
//! 1,0 0,0
//! ```
//!
//! The first non-comment line holds the order `N`; each of the next `N`
//! lines holds one matrix row of `N` whitespace-separated `re,im` pairs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gatesynth_core::matrix::qubits_for_dim;
use gatesynth_core::{Complex64, ComplexMatrix};
use thiserror::Error;

/// Largest deviation from `U·U† = I` accepted for a loaded target.
pub const UNITARITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error("cannot read matrix file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not square: expected {expected} {what}, found {found}")]
    NotSquare {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix order {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix is not unitary: max |U·U† − I| entry is {0:.3e} (tolerance {UNITARITY_TOLERANCE:e})")]
    NotUnitary(f64),
}

/// A validated target read from a matrix file.
#[derive(Debug, Clone)]
pub struct LoadedMatrix {
    pub matrix: ComplexMatrix,
    pub qubits: usize,
}

pub fn load_matrix_file(path: impl AsRef<Path>) -> Result<LoadedMatrix, MatrixFileError> {
    parse_matrix(&fs::read_to_string(path)?)
}

/// Parses and validates the text of a matrix file.
pub fn parse_matrix(text: &str) -> Result<LoadedMatrix, MatrixFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(MatrixFileError::Parse {
        line: 1,
        msg: "missing matrix order".into(),
    })?;
    let order: usize = header.parse().map_err(|_| MatrixFileError::Parse {
        line,
        msg: format!("expected the matrix order, found `{header}`"),
    })?;
    if order == 0 {
        return Err(MatrixFileError::Parse {
            line,
            msg: "matrix order must be positive".into(),
        });
    }

    let mut data = Vec::with_capacity(order * order);
    let mut rows = 0;
    for (line, text) in lines {
        let row = parse_row(line, text)?;
        if row.len() != order {
            return Err(MatrixFileError::NotSquare {
                what: "entries per row",
                expected: order,
                found: row.len(),
            });
        }
        data.extend(row);
        rows += 1;
    }
    if rows != order {
        return Err(MatrixFileError::NotSquare {
            what: "rows",
            expected: order,
            found: rows,
        });
    }

    let qubits = qubits_for_dim(order).ok_or(MatrixFileError::NotPowerOfTwo(order))?;
    let matrix = ComplexMatrix::from_vec(order, data).expect("entry count checked");
    let deviation = matrix.unitarity_deviation();
    if deviation > UNITARITY_TOLERANCE {
        return Err(MatrixFileError::NotUnitary(deviation));
    }
    Ok(LoadedMatrix { matrix, qubits })
}

fn parse_row(line: usize, text: &str) -> Result<Vec<Complex64>, MatrixFileError> {
    text.split_whitespace()
        .map(|tok| {
            let bad = || MatrixFileError::Parse {
                line,
                msg: format!("`{tok}` is not a `re,im` pair"),
            };
            let (re, im) = tok.split_once(',').ok_or_else(bad)?;
            Ok(Complex64::new(
                re.parse().map_err(|_| bad())?,
                im.parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// Writes a matrix in the file format. Entries use the shortest decimal form
/// that parses back to the same `f64`.
pub fn render_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{}\n", m.dim());
    for r in 0..m.dim() {
        let row: Vec<String> = m.row(r).iter().map(|z| format!("{:?},{:?}", z.re, z.im)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
