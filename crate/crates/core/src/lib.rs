//! Decomposition of unitary matrices into low-cost quantum gate sequences.
//!
//! Candidate circuits are fixed-length integer strings, four integers per gate
//! (gate, target, control, angle). They are scored against a target unitary
//! by a phase-insensitive correctness measure combined with a gate cost, and
//! searched with the group leaders optimization algorithm.
//!
//! The crate is `no_std` and only needs an allocator.
//!
//! ```
//! use gatesynth_core::{fitness::Problem, gloa::{run, GloaParams}, targets};
//!
//! let problem = Problem::with_defaults(targets::grover_diffusion(2), 6).unwrap();
//! let params = GloaParams { num_groups: 4, group_size: 8, max_iterations: 20, seed: 7, ..Default::default() };
//! let outcome = run(&problem, params).unwrap();
//! assert!(outcome.best.c <= 1.0);
//! ```

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod fitness;
pub mod gates;
pub mod gloa;
pub mod matrix;
pub mod table;
pub mod targets;

pub use num_complex::Complex64;

pub use circuit::{
    circuit_cost, circuit_unitary, decode, gate_cost, AngleGrid, DecodedGate, GateSet, GateSetEntry, Gene, Genotype,
    PlacedGate, Variant,
};
pub use fitness::{correctness, objective, EvaluationResult, ObjectiveWeights, Problem, Score};
pub use gates::{ElementaryGate, LocalPlacement};
pub use gloa::{run, run_with, Gloa, GloaParams, IterationRecord, RunOutcome, Scorer, SequentialScorer};
pub use matrix::ComplexMatrix;
pub use table::{parse_table, render_table};
