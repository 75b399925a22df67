//! The G/T/C/Q circuit table.
//!
//! One row per gate slot: gate name, target qubit, control qubit and angle
//! index, with 1-based qubit labels. Fields a gate does not use are 0 and an
//! empty slot is `0, 0, 0, 0`:
//!
//! ```text
//! G, T, C, Q
//! Control X, 2, 1, 0
//! 0, 0, 0, 0
//! Single V, 2, 0, 0
//! ```
//!
//! Fields may be separated by commas or by whitespace. Blank lines, lines
//! starting with `#` and the header row are skipped when parsing.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

use crate::circuit::{AngleGrid, DecodedGate, PlacedGate, Variant};
use crate::gates::ElementaryGate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct TableError {
    pub line: usize,
    pub kind: TableErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableErrorKind {
    #[error("expected 4 fields (G, T, C, Q), found {0}")]
    FieldCount(usize),
    #[error("unrecognized gate name `{0}`")]
    GateName(String),
    #[error("`{0}` is not a non-negative integer")]
    NotInteger(String),
    #[error("qubit {label} outside the {qubits}-qubit register")]
    QubitOutOfRange { label: u32, qubits: usize },
    #[error("angle index {index} outside the grid of {count} angles")]
    AngleOutOfRange { index: u32, count: u32 },
}

/// Renders one row per slot, preceded by the `G, T, C, Q` header.
pub fn render_table(circuit: &[DecodedGate]) -> String {
    let mut out = String::from("G, T, C, Q\n");
    for gate in circuit {
        out.push_str(&render_row(gate));
        out.push('\n');
    }
    out
}

pub fn render_row(gate: &DecodedGate) -> String {
    match gate {
        DecodedGate::Noop => "0, 0, 0, 0".to_string(),
        DecodedGate::Active(g) => {
            let mut row = String::new();
            let control = g.control.map_or(0, |c| c + 1);
            let _ = write!(row, "{}, {}, {}, {}", g.name(), g.target + 1, control, g.angle_idx);
            row
        }
    }
}

/// Parses a table for a `qubits`-wide register, resolving angle indices on `grid`.
pub fn parse_table(text: &str, qubits: usize, grid: &AngleGrid) -> Result<Vec<DecodedGate>, TableError> {
    let mut circuit = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_fields(line);
        if is_header(&fields) {
            continue;
        }
        let gate = parse_row(&fields, qubits, grid).map_err(|kind| TableError { line: idx + 1, kind })?;
        circuit.push(gate);
    }
    Ok(circuit)
}

fn split_fields(line: &str) -> Vec<String> {
    if line.contains(',') {
        return line.split(',').map(|f| f.trim().to_string()).collect();
    }
    let tokens: Vec<&str> = line.split_whitespace().collect();
    // A whitespace-separated gate name spans two tokens, e.g. `Control X 2 1 0`.
    if tokens.len() == 5 {
        let mut fields = alloc::vec![format!("{} {}", tokens[0], tokens[1])];
        fields.extend(tokens[2..].iter().map(|t| t.to_string()));
        fields
    } else {
        tokens.into_iter().map(str::to_string).collect()
    }
}

fn is_header(fields: &[String]) -> bool {
    fields.len() == 4 && fields[0].eq_ignore_ascii_case("g") && fields[1].eq_ignore_ascii_case("t")
}

fn parse_int(s: &str) -> Result<u32, TableErrorKind> {
    s.parse().map_err(|_| TableErrorKind::NotInteger(s.into()))
}

fn parse_name(s: &str) -> Result<Option<(Variant, ElementaryGate)>, TableErrorKind> {
    if s == "0" {
        return Ok(None);
    }
    let bad = || TableErrorKind::GateName(s.into());
    let mut parts = s.split_whitespace();
    let (Some(variant), Some(gate), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let variant = variant.parse::<Variant>().map_err(|_| bad())?;
    let gate = gate.parse::<ElementaryGate>().map_err(|_| bad())?;
    Ok(Some((variant, gate)))
}

fn parse_row(fields: &[String], qubits: usize, grid: &AngleGrid) -> Result<DecodedGate, TableErrorKind> {
    if fields.len() != 4 {
        return Err(TableErrorKind::FieldCount(fields.len()));
    }
    let name = parse_name(&fields[0])?;
    let target = parse_int(&fields[1])?;
    let control = parse_int(&fields[2])?;
    let angle = parse_int(&fields[3])?;
    let Some((variant, gate)) = name else {
        return Ok(DecodedGate::Noop);
    };
    for label in [target, control] {
        if label as usize > qubits {
            return Err(TableErrorKind::QubitOutOfRange { label, qubits });
        }
    }
    if target == 0 {
        return Err(TableErrorKind::QubitOutOfRange { label: 0, qubits });
    }
    if gate.is_rotation() && angle >= grid.count() {
        return Err(TableErrorKind::AngleOutOfRange {
            index: angle,
            count: grid.count(),
        });
    }
    let control = (control as usize).checked_sub(1);
    Ok(PlacedGate::new(variant, gate, target as usize - 1, control, angle, grid)
        .map_or(DecodedGate::Noop, DecodedGate::Active))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_cost, circuit_unitary};
    use crate::fitness::correctness;
    use crate::targets;

    const GROVER_TABLE: &str = "\
G T C Q
Control X, 2, 1, 0
0, 0, 0, 0
Single V, 2, 0, 0
0, 0, 0, 0
Single V, 1, 0, 0
Control X, 2, 1, 0
Single V, 1, 0, 0
0, 0, 0, 0
";

    fn grid() -> AngleGrid {
        AngleGrid::default()
    }

    #[test]
    fn renders_rows() {
        let g = AngleGrid::default();
        let cx = PlacedGate::new(Variant::Control, ElementaryGate::X, 1, Some(0), 0, &g).unwrap();
        assert_eq!(render_row(&DecodedGate::Active(cx)), "Control X, 2, 1, 0");
        let v = PlacedGate::new(Variant::Single, ElementaryGate::V, 1, None, 0, &g).unwrap();
        assert_eq!(render_row(&DecodedGate::Active(v)), "Single V, 2, 0, 0");
        assert_eq!(render_row(&DecodedGate::Noop), "0, 0, 0, 0");
        let mc = PlacedGate::new(Variant::MultiControl, ElementaryGate::X, 2, Some(0), 0, &g).unwrap();
        assert_eq!(render_row(&DecodedGate::Active(mc)), "Multicontrol X, 3, 1, 0");
        let rz = PlacedGate::new(Variant::Single, ElementaryGate::Rz, 0, None, 6, &g).unwrap();
        assert_eq!(render_row(&DecodedGate::Active(rz)), "Single Rz, 1, 0, 6");
    }

    #[test]
    fn grover_reference_table_is_exact() {
        let c = parse_table(GROVER_TABLE, 2, &grid()).unwrap();
        assert_eq!(c.len(), 8);
        let u = circuit_unitary(&c, 2).unwrap();
        let cval = correctness(&u, &targets::grover_diffusion(2)).unwrap();
        assert!((cval - 1.0).abs() < 1e-12);
        assert_eq!(circuit_cost(&c), 7);
    }

    #[test]
    fn whitespace_rows_and_comments() {
        let text = "# comment\n\nControl X 2 1 0\n0 0 0 0\nSingle Ry 1 0 4\n";
        let c = parse_table(text, 2, &grid()).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(render_row(&c[0]), "Control X, 2, 1, 0");
        assert!(c[1].is_noop());
        assert_eq!(render_row(&c[2]), "Single Ry, 1, 0, 4");
    }

    #[test]
    fn equal_control_and_target_is_an_empty_slot() {
        let c = parse_table("Control X, 2, 2, 0\n", 2, &grid()).unwrap();
        assert_eq!(c, [DecodedGate::Noop]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_table("G, T, C, Q\nSingle X, 5, 0, 0\n", 2, &grid()).unwrap_err();
        assert_eq!(err, TableError { line: 2, kind: TableErrorKind::QubitOutOfRange { label: 5, qubits: 2 } });
        let err = parse_table("0,0,0,0\nControl H, 1, 2, 0", 2, &grid()).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, TableErrorKind::GateName(_)));
        let err = parse_table("Single X, 1, 0", 2, &grid()).unwrap_err();
        assert_eq!(err.kind, TableErrorKind::FieldCount(3));
        let err = parse_table("Single X, one, 0, 0", 2, &grid()).unwrap_err();
        assert!(matches!(err.kind, TableErrorKind::NotInteger(_)));
        let err = parse_table("Single Rx, 1, 0, 17", 2, &grid()).unwrap_err();
        assert_eq!(err.kind, TableErrorKind::AngleOutOfRange { index: 17, count: 17 });
        let err = parse_table("Single X, 0, 0, 0", 2, &grid()).unwrap_err();
        assert!(matches!(err.kind, TableErrorKind::QubitOutOfRange { label: 0, .. }));
    }

    #[test]
    fn render_then_parse_round_trips() {
        let c = parse_table(GROVER_TABLE, 2, &grid()).unwrap();
        assert_eq!(parse_table(&render_table(&c), 2, &grid()).unwrap(), c);
    }
}
