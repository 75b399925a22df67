//! Elementary gates and the unitaries of controlled gates.
//!
//! Controlled gates are built on a local block of `d + 1` consecutive qubits,
//! `d` being the distance between control and target, and then embedded into
//! the full register with identity factors on either side.

use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use num_traits::Float;
use thiserror::Error;

use crate::matrix::{qubits_for_dim, ComplexMatrix};

/// A 2×2 matrix as `[[u00, u01], [u10, u11]]`.
pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("unknown gate name `{0}`")]
    UnknownGate(alloc::string::String),
    #[error("control and target coincide (distance 0)")]
    ZeroDistance,
    #[error("placement ({target}, {control}) is not normalized: one index must be 0")]
    NotNormalized { target: usize, control: usize },
    #[error("local gate of order {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },
    #[error("local gate on {width} qubit(s) at qubit {low} does not fit a {qubits}-qubit register")]
    OutsideRegister {
        width: usize,
        low: usize,
        qubits: usize,
    },
}

/// The single-qubit gates available to the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementaryGate {
    X,
    Y,
    Z,
    /// Square root of NOT.
    V,
    /// Inverse of `V`.
    Vdg,
    Rx,
    Ry,
    Rz,
}

impl ElementaryGate {
    pub const ALL: [ElementaryGate; 8] = [
        ElementaryGate::X,
        ElementaryGate::Y,
        ElementaryGate::Z,
        ElementaryGate::V,
        ElementaryGate::Vdg,
        ElementaryGate::Rx,
        ElementaryGate::Ry,
        ElementaryGate::Rz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementaryGate::X => "X",
            ElementaryGate::Y => "Y",
            ElementaryGate::Z => "Z",
            ElementaryGate::V => "V",
            ElementaryGate::Vdg => "Vdg",
            ElementaryGate::Rx => "Rx",
            ElementaryGate::Ry => "Ry",
            ElementaryGate::Rz => "Rz",
        }
    }

    /// Rotation gates use their angle; every other gate ignores it.
    pub fn is_rotation(self) -> bool {
        matches!(
            self,
            ElementaryGate::Rx | ElementaryGate::Ry | ElementaryGate::Rz
        )
    }

    /// The gate's 2×2 matrix. Rotations follow `R_a(θ) = cos(θ/2)·I − i·sin(θ/2)·a`.
    pub fn matrix(self, theta: f64) -> Mat2 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let half = 0.5 * theta;
        let (s, c) = (Float::sin(half), Float::cos(half));
        match self {
            ElementaryGate::X => [[zero, one], [one, zero]],
            ElementaryGate::Y => [[zero, -i], [i, zero]],
            ElementaryGate::Z => [[one, zero], [zero, -one]],
            ElementaryGate::V => {
                let p = Complex64::new(0.5, 0.5);
                let m = Complex64::new(0.5, -0.5);
                [[p, m], [m, p]]
            }
            ElementaryGate::Vdg => {
                let p = Complex64::new(0.5, 0.5);
                let m = Complex64::new(0.5, -0.5);
                [[m, p], [p, m]]
            }
            ElementaryGate::Rx => [
                [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
            ],
            ElementaryGate::Ry => [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ],
            ElementaryGate::Rz => [
                [Complex64::new(c, -s), zero],
                [zero, Complex64::new(c, s)],
            ],
        }
    }
}

impl fmt::Display for ElementaryGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementaryGate {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, GateError> {
        let gate = match s.trim().to_ascii_lowercase().as_str() {
            "x" | "not" => ElementaryGate::X,
            "y" => ElementaryGate::Y,
            "z" => ElementaryGate::Z,
            "v" => ElementaryGate::V,
            "vdg" | "vdag" | "v+" | "v†" | "vdagger" => ElementaryGate::Vdg,
            "rx" => ElementaryGate::Rx,
            "ry" => ElementaryGate::Ry,
            "rz" => ElementaryGate::Rz,
            _ => return Err(GateError::UnknownGate(s.trim().into())),
        };
        Ok(gate)
    }
}

/// The 2×2 matrix of `gate` at angle `theta` (radians).
pub fn single_gate_matrix(gate: ElementaryGate, theta: f64) -> ComplexMatrix {
    ComplexMatrix::from_2x2(gate.matrix(theta))
}

/// Bit positions handed to the controlled-gate block constructions.
///
/// Both constructions write 2×2 blocks at index pairs `(i, j)` that share the
/// bit `2^target` and differ in the bit `2^control`. The bit named `target`
/// is therefore the one conditioned on and the bit named `control` is the one
/// the 2×2 gate acts on. [`LocalPlacement::for_roles`] performs that exchange
/// so callers can think in terms of a gate's own control and target.
///
/// Bit positions count from the least significant bit of the local block
/// index. Exactly one of the two must be 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalPlacement {
    pub target: usize,
    pub control: usize,
}

impl LocalPlacement {
    pub fn new(target: usize, control: usize) -> Result<Self, GateError> {
        if target == control {
            return Err(GateError::ZeroDistance);
        }
        if target.min(control) != 0 {
            return Err(GateError::NotNormalized { target, control });
        }
        Ok(LocalPlacement { target, control })
    }

    /// Placement for a gate acting on local bit `acted` and conditioned on
    /// local bit `condition`.
    pub fn for_roles(acted: usize, condition: usize) -> Result<Self, GateError> {
        Self::new(condition, acted)
    }

    /// Distance between the two bits.
    pub fn distance(&self) -> usize {
        self.target.abs_diff(self.control)
    }

    /// Order of the local block, `2^(d+1)`.
    pub fn block_dim(&self) -> usize {
        1 << (self.distance() + 1)
    }

    fn checked(&self) -> Result<usize, GateError> {
        let d = self.distance();
        if d == 0 {
            return Err(GateError::ZeroDistance);
        }
        if self.target.min(self.control) != 0 {
            return Err(GateError::NotNormalized {
                target: self.target,
                control: self.control,
            });
        }
        Ok(d)
    }
}

/// Writes one 2×2 block. `i` has the acted-on bit set, `j` has it clear.
#[inline]
fn write_block(m: &mut ComplexMatrix, u: &Mat2, i: usize, j: usize) -> usize {
    m[(j, j)] = u[0][0];
    m[(j, i)] = u[0][1];
    m[(i, j)] = u[1][0];
    m[(i, i)] = u[1][1];
    4
}

/// Single-control construction; returns the matrix and the number of entry writes.
pub(crate) fn single_control_counted(
    u: &Mat2,
    placement: LocalPlacement,
) -> Result<(ComplexMatrix, usize), GateError> {
    let d = placement.checked()?;
    let mut m = ComplexMatrix::identity(placement.block_dim());
    let t = 1usize << placement.target;
    let c = t + (1usize << placement.control);
    let last = (1usize << (d - 1)) - 1;
    let mut writes = 0;
    for k in 0..=last {
        let i = c + 2 * k;
        let j = t + 2 * k;
        writes += write_block(&mut m, u, i, j);
    }
    Ok((m, writes))
}

/// Multi-control construction; returns the matrix and the number of entry writes.
pub(crate) fn multi_control_counted(
    u: &Mat2,
    placement: LocalPlacement,
) -> Result<(ComplexMatrix, usize), GateError> {
    let d = placement.checked()?;
    let mut m = ComplexMatrix::identity(placement.block_dim());
    let t = 1usize << placement.target;
    let c = t + (1usize << placement.control);
    let last = (1usize << (d - 1)) - 1;
    let i = c + 2 * last;
    let j = t + 2 * last;
    let writes = write_block(&mut m, u, i, j);
    Ok((m, writes))
}

/// Controlled gate with one control on a `2^(d+1)` block. The bits strictly
/// between the two placement bits are left free. Runs in `O(2^d)`.
pub fn build_single_control(u: &Mat2, placement: LocalPlacement) -> Result<ComplexMatrix, GateError> {
    single_control_counted(u, placement).map(|(m, _)| m)
}

/// Controlled gate where every bit strictly between the two placement bits is
/// an additional control. A single block write, independent of `d`.
pub fn build_multi_control(u: &Mat2, placement: LocalPlacement) -> Result<ComplexMatrix, GateError> {
    multi_control_counted(u, placement).map(|(m, _)| m)
}

/// `I_{2^low} ⊗ local ⊗ I_{2^(n − low − w)}` for a local gate on `w` qubits.
///
/// Qubit 0 is the most significant bit of the register index, so the local
/// block covers qubits `low..low + w`.
pub fn embed_in_register(
    local: &ComplexMatrix,
    low: usize,
    qubits: usize,
) -> Result<ComplexMatrix, GateError> {
    let width = local_width(local, low, qubits)?;
    let left = ComplexMatrix::identity(1 << low);
    let right = ComplexMatrix::identity(1 << (qubits - low - width));
    Ok(left.kron(local).kron(&right))
}

fn local_width(local: &ComplexMatrix, low: usize, qubits: usize) -> Result<usize, GateError> {
    let width = qubits_for_dim(local.dim()).ok_or(GateError::NotPowerOfTwo { dim: local.dim() })?;
    if low + width > qubits {
        return Err(GateError::OutsideRegister {
            width,
            low,
            qubits,
        });
    }
    Ok(width)
}

/// Register-level action of a placed gate: every pair of rows `(r, r | target)`
/// with `r & target == 0` and all `condition` bits set is mixed by `u`; other
/// rows are untouched. Masks are bits of the register index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowPairAction {
    pub u: Mat2,
    pub target: usize,
    pub condition: usize,
}

impl RowPairAction {
    /// Computes `acc ← G · acc` in place, where `G` is the full-register gate.
    pub fn apply(&self, acc: &mut ComplexMatrix) {
        let n = acc.dim();
        debug_assert!(self.target.is_power_of_two() && self.target < n);
        debug_assert_eq!(self.condition & self.target, 0);
        let [[a, b], [c, d]] = self.u;
        let zero = Complex64::new(0.0, 0.0);
        let data = acc.as_mut_slice();
        for r0 in 0..n {
            if r0 & self.target != 0 || r0 & self.condition != self.condition {
                continue;
            }
            let r1 = r0 | self.target;
            let (head, tail) = data.split_at_mut(r1 * n);
            let rows = head[r0 * n..(r0 + 1) * n].iter_mut().zip(&mut tail[..n]);
            if b == zero && c == zero {
                for (x, y) in rows {
                    *x *= a;
                    *y *= d;
                }
            } else if a == zero && d == zero {
                for (x, y) in rows {
                    let p = *x;
                    *x = b * *y;
                    *y = c * p;
                }
            } else {
                for (x, y) in rows {
                    let (p, q) = (*x, *y);
                    *x = a * p + b * q;
                    *y = c * p + d * q;
                }
            }
        }
    }
}
