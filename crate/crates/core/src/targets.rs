//! Built-in target unitaries.

use alloc::string::String;
use core::f64::consts::{FRAC_1_SQRT_2, TAU};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use num_traits::Float;
use thiserror::Error;

use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("unknown target `{0}` (expected toffoli, grover_diffusion, qft or teleport_sender)")]
    Unknown(String),
    #[error("target `{name}` is defined on {fixed} qubits, not {requested}")]
    FixedWidth {
        name: &'static str,
        fixed: usize,
        requested: usize,
    },
    #[error("target needs at least one qubit")]
    NoQubits,
}

/// Names of the built-in targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Toffoli,
    GroverDiffusion,
    Qft,
    TeleportSender,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Toffoli => "toffoli",
            Builtin::GroverDiffusion => "grover_diffusion",
            Builtin::Qft => "qft",
            Builtin::TeleportSender => "teleport_sender",
        }
    }

    /// Register width used when none is requested.
    pub fn default_qubits(self) -> usize {
        match self {
            Builtin::Toffoli | Builtin::TeleportSender => 3,
            Builtin::GroverDiffusion | Builtin::Qft => 2,
        }
    }

    pub fn build(self, qubits: usize) -> Result<ComplexMatrix, TargetError> {
        if qubits == 0 {
            return Err(TargetError::NoQubits);
        }
        match self {
            Builtin::Toffoli | Builtin::TeleportSender if qubits != 3 => Err(TargetError::FixedWidth {
                name: self.name(),
                fixed: 3,
                requested: qubits,
            }),
            Builtin::Toffoli => Ok(toffoli()),
            Builtin::TeleportSender => Ok(teleport_sender()),
            Builtin::GroverDiffusion => Ok(grover_diffusion(qubits)),
            Builtin::Qft => Ok(qft(qubits)),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = TargetError;

    fn from_str(s: &str) -> Result<Self, TargetError> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "toffoli" | "ccx" => Ok(Builtin::Toffoli),
            "grover_diffusion" | "grover" | "diffusion" => Ok(Builtin::GroverDiffusion),
            "qft" => Ok(Builtin::Qft),
            "teleport_sender" | "teleport" => Ok(Builtin::TeleportSender),
            _ => Err(TargetError::Unknown(s.trim().into())),
        }
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn permutation(dim: usize, image: impl Fn(usize) -> usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        m[(image(col), col)] = one();
    }
    m
}

/// Identity on three qubits except |110⟩ ↔ |111⟩.
pub fn toffoli() -> ComplexMatrix {
    permutation(8, |i| if i >= 6 { i ^ 1 } else { i })
}

/// `2|s⟩⟨s| − I` with `|s⟩` the uniform superposition.
pub fn grover_diffusion(qubits: usize) -> ComplexMatrix {
    let n = 1usize << qubits;
    let off = 2.0 / n as f64;
    ComplexMatrix::from_fn(n, |i, j| {
        Complex64::new(if i == j { off - 1.0 } else { off }, 0.0)
    })
}

/// Discrete Fourier transform `F[j][k] = ω^{jk}/√N`, `ω = e^{2πi/N}`.
pub fn qft(qubits: usize) -> ComplexMatrix {
    let n = 1usize << qubits;
    let norm = 1.0 / Float::sqrt(n as f64);
    ComplexMatrix::from_fn(n, |j, k| {
        // Reduce the exponent first so large products stay exact.
        let e = (j * k) % n;
        Complex64::from_polar(norm, TAU * e as f64 / n as f64)
    })
}

/// Bell-basis change on qubits 1 and 2: CNOT (control 1, target 2), then H on
/// qubit 1; qubit 3 is untouched.
pub fn teleport_sender() -> ComplexMatrix {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let hadamard = ComplexMatrix::from_2x2([[h, h], [h, -h]]);
    let i2 = ComplexMatrix::identity(2);
    let h1 = hadamard.kron(&i2).kron(&i2);
    let cnot = permutation(8, |i| if i & 0b100 != 0 { i ^ 0b010 } else { i });
    h1.mat_mul(&cnot).expect("same dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn column(m: &ComplexMatrix, j: usize) -> Vec<Complex64> {
        (0..m.dim()).map(|i| m[(i, j)]).collect()
    }

    /// Applies a linear map given by its action on basis indices.
    fn apply_state(state: &mut [Complex64], op: &dyn Fn(usize) -> Vec<(usize, Complex64)>) {
        let mut out = vec![c(0., 0.); state.len()];
        for (idx, amp) in state.iter().enumerate() {
            if *amp == c(0., 0.) {
                continue;
            }
            for (to, w) in op(idx) {
                out[to] += amp * w;
            }
        }
        state.copy_from_slice(&out);
    }

    #[test]
    fn toffoli_swaps_the_last_pair() {
        let t = toffoli();
        let mut expected = vec![c(0., 0.); 8];
        expected[7] = c(1., 0.);
        assert_eq!(column(&t, 6), expected);
        assert_eq!(t.trace(), c(6., 0.));
        assert!(t.is_unitary(1e-15));
    }

    #[test]
    fn grover_two_qubit_entries() {
        let d = grover_diffusion(2);
        assert_eq!(d[(0, 0)], c(-0.5, 0.));
        assert_eq!(d[(0, 1)], c(0.5, 0.));
        for n in 1..=4 {
            let d = grover_diffusion(n);
            let dd = d.mat_mul(&d).unwrap();
            assert!(dd.approx_eq(&ComplexMatrix::identity(1 << n), 1e-12));
        }
    }

    #[test]
    fn qft_entries() {
        let h = FRAC_1_SQRT_2;
        let f1 = qft(1);
        assert!(f1.approx_eq(&ComplexMatrix::from_2x2([[c(h, 0.), c(h, 0.)], [c(h, 0.), c(-h, 0.)]]), 1e-15));
        let f2 = qft(2);
        assert!((f2[(1, 1)] - c(0., 0.5)).norm() < 1e-15);
        for n in 1..=4 {
            let f = qft(n);
            let dim = 1usize << n;
            // Brute-force F·F† entry by entry.
            for i in 0..dim {
                for j in 0..dim {
                    let s: Complex64 = (0..dim).map(|k| f[(i, k)] * f[(j, k)].conj()).sum();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((s - c(e, 0.)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn teleport_sender_action() {
        let u = teleport_sender();
        assert!(u.is_unitary(1e-12));
        let h = FRAC_1_SQRT_2;
        let mut expected = vec![c(0., 0.); 8];
        expected[0] = c(h, 0.);
        expected[4] = c(h, 0.);
        let col = column(&u, 0);
        for (a, b) in col.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-15);
        }
        // Qubit 3 is a tensor factor: U = A ⊗ I₂.
        for i in 0..8 {
            for j in 0..8 {
                if (i & 1) != (j & 1) {
                    assert_eq!(u[(i, j)], c(0., 0.));
                } else {
                    assert_eq!(u[(i, j)], u[(i ^ (i & 1), j ^ (j & 1))]);
                }
            }
        }
    }

    #[test]
    fn builtins_match_state_enumeration() {
        let h = FRAC_1_SQRT_2;
        // Toffoli: flip qubit 3 when qubits 1 and 2 are set.
        let t = toffoli();
        // Teleport sender: CNOT 1→2, then H on qubit 1.
        let s = teleport_sender();
        for basis in 0..8 {
            let mut state = vec![c(0., 0.); 8];
            state[basis] = c(1., 0.);
            let mut tof = state.clone();
            apply_state(&mut tof, &|i| vec![(if i & 0b110 == 0b110 { i ^ 1 } else { i }, c(1., 0.))]);
            assert_eq!(column(&t, basis), tof);

            let mut tel = state.clone();
            apply_state(&mut tel, &|i| vec![(if i & 0b100 != 0 { i ^ 0b010 } else { i }, c(1., 0.))]);
            apply_state(&mut tel, &|i| {
                let sign = if i & 0b100 != 0 { -h } else { h };
                vec![(i & 0b011, c(h, 0.)), (i | 0b100, c(sign, 0.))]
            });
            for (a, b) in column(&s, basis).iter().zip(&tel) {
                assert!((a - b).norm() < 1e-15);
            }
        }
        // Diffusion: reflect about the uniform state, amplitude by amplitude.
        for n in 1..=4 {
            let dim = 1usize << n;
            let d = grover_diffusion(n);
            for basis in 0..dim {
                let mean = 1.0 / dim as f64;
                for i in 0..dim {
                    let amp = if i == basis { 1.0 } else { 0.0 };
                    assert!((d[(i, basis)] - c(2.0 * mean - amp, 0.)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!("Toffoli".parse::<Builtin>().unwrap(), Builtin::Toffoli);
        assert_eq!("grover-diffusion".parse::<Builtin>().unwrap(), Builtin::GroverDiffusion);
        assert!(matches!("qpe".parse::<Builtin>(), Err(TargetError::Unknown(_))));
        assert!(matches!(
            Builtin::Toffoli.build(4),
            Err(TargetError::FixedWidth { fixed: 3, requested: 4, .. })
        ));
        for b in [Builtin::Toffoli, Builtin::GroverDiffusion, Builtin::Qft, Builtin::TeleportSender] {
            let m = b.build(b.default_qubits()).unwrap();
            assert!(m.is_unitary(1e-12), "{b}");
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
        }
    }
}
