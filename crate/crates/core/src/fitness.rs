//! Correctness, cost and the combined objective.

use alloc::vec::Vec;

use thiserror::Error;

use crate::circuit::{circuit_cost, decode, decode_gene, AngleGrid, CircuitError, DecodedGate, GateSet, GeneBounds, Genotype, Workspace};
use crate::matrix::{qubits_for_dim, ComplexMatrix, MatrixError};

/// Weights of correctness and cost in the objective; they sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveWeights {
    alpha: f64,
    beta: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightsError {
    #[error("weights must lie in [0, 1], got alpha = {alpha}, beta = {beta}")]
    OutOfRange { alpha: f64, beta: f64 },
    #[error("alpha + beta must equal 1, got {0}")]
    BadSum(f64),
}

impl ObjectiveWeights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, WeightsError> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(WeightsError::OutOfRange { alpha, beta });
        }
        if (alpha + beta - 1.0).abs() > 1e-9 {
            return Err(WeightsError::BadSum(alpha + beta));
        }
        Ok(ObjectiveWeights { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights {
            alpha: 0.9,
            beta: 0.1,
        }
    }
}

/// `|Tr(u_g · u_f†)| / N`, insensitive to a global phase on either matrix.
///
/// Rounding can push the overlap of identical unitaries a few ulps past 1;
/// the result is clamped to `[0, 1]`.
pub fn correctness(u_f: &ComplexMatrix, u_g: &ComplexMatrix) -> Result<f64, MatrixError> {
    let tr = u_g.trace_with_dagger(u_f)?;
    Ok((tr.norm() / u_f.dim() as f64).min(1.0))
}

/// `|1 − (α·C + β/cost)|`; the cost term is dropped for an empty circuit.
pub fn objective(c: f64, cost: u32, w: ObjectiveWeights) -> f64 {
    let cost_term = if cost == 0 { 0.0 } else { w.beta / cost as f64 };
    (1.0 - (w.alpha * c + cost_term)).abs()
}

/// Objective value with its two ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub y: f64,
    pub c: f64,
    pub cost: u32,
}

/// A scored genotype together with its decoded circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    pub y: f64,
    pub c: f64,
    pub cost: u32,
    pub circuit: Vec<DecodedGate>,
}

impl EvaluationResult {
    pub fn score(&self) -> Score {
        Score {
            y: self.y,
            c: self.c,
            cost: self.cost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("target of order {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("target is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("circuits need at least one gate slot")]
    NoGateSlots,
}

/// Everything needed to score a genotype against a target unitary.
#[derive(Debug, Clone)]
pub struct Problem {
    target: ComplexMatrix,
    qubits: usize,
    max_gates: usize,
    gate_set: GateSet,
    grid: AngleGrid,
    weights: ObjectiveWeights,
}

impl Problem {
    /// Targets must be unitary within 1e-8 and of order `2^n`.
    pub fn new(
        target: ComplexMatrix,
        max_gates: usize,
        gate_set: GateSet,
        grid: AngleGrid,
        weights: ObjectiveWeights,
    ) -> Result<Self, ProblemError> {
        let qubits = qubits_for_dim(target.dim()).ok_or(ProblemError::NotPowerOfTwo(target.dim()))?;
        let deviation = target.unitarity_deviation();
        if deviation > 1e-8 {
            return Err(ProblemError::NotUnitary(deviation));
        }
        if max_gates == 0 {
            return Err(ProblemError::NoGateSlots);
        }
        Ok(Problem {
            target,
            qubits,
            max_gates,
            gate_set,
            grid,
            weights,
        })
    }

    /// Problem with the standard gate set, π/8 angles and weights (0.9, 0.1).
    pub fn with_defaults(target: ComplexMatrix, max_gates: usize) -> Result<Self, ProblemError> {
        Self::new(target, max_gates, GateSet::standard(), AngleGrid::default(), ObjectiveWeights::default())
    }

    pub fn target(&self) -> &ComplexMatrix {
        &self.target
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn max_gates(&self) -> usize {
        self.max_gates
    }

    pub fn gate_set(&self) -> &GateSet {
        &self.gate_set
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn weights(&self) -> ObjectiveWeights {
        self.weights
    }

    pub fn bounds(&self) -> GeneBounds {
        GeneBounds::new(&self.gate_set, self.qubits, &self.grid)
    }

    pub fn workspace(&self) -> Workspace {
        Workspace::new(self.qubits)
    }

    /// Decode, simulate, and score.
    pub fn evaluate(&self, genotype: &Genotype) -> Result<EvaluationResult, CircuitError> {
        let circuit = decode(genotype, &self.gate_set, self.qubits, &self.grid)?;
        let score = self.score_circuit(&circuit, &mut self.workspace());
        Ok(EvaluationResult {
            y: score.y,
            c: score.c,
            cost: score.cost,
            circuit,
        })
    }

    /// Scores a circuit of the problem's width.
    pub fn score_circuit(&self, circuit: &[DecodedGate], ws: &mut Workspace) -> Score {
        let cost = circuit_cost(circuit);
        let u_f = ws.accumulate(circuit);
        let c = correctness(u_f, &self.target).expect("workspace matches target order");
        Score {
            y: objective(c, cost, self.weights),
            c,
            cost,
        }
    }

    /// Scores a genotype already known to be within [`Problem::bounds`].
    pub fn score(&self, genotype: &Genotype, ws: &mut Workspace) -> Score {
        debug_assert!(self.bounds().contains(genotype));
        let circuit: Vec<DecodedGate> = genotype
            .genes
            .iter()
            .map(|g| decode_gene(g, &self.gate_set, &self.grid))
            .collect();
        self.score_circuit(&circuit, ws)
    }
}
