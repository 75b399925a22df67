//! Integer-string circuit genotypes and their decoded circuits.
//!
//! A gene is four integers: gate id, target qubit, control qubit and angle
//! index. Qubit labels in genes are 1-based; control 0 means "no control".
//! Gate id 0 is the empty slot.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::gates::{
    build_multi_control, build_single_control, ElementaryGate, GateError, LocalPlacement, RowPairAction,
};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("gene {gene}: {field} = {value} is outside 0..={max}")]
    GeneOutOfRange {
        gene: usize,
        field: GeneField,
        value: u32,
        max: u32,
    },
    #[error("gene {gene}: target qubit must be at least 1")]
    MissingTarget { gene: usize },
    #[error("gate set must contain at least one gate")]
    EmptyGateSet,
    #[error("invalid gate set entry `{0}`")]
    BadGateSetEntry(String),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("angle step must be positive and at most 2π, got {0}")]
    BadAngleStep(f64),
    #[error("circuit needs {needed} qubits but the register has {qubits}")]
    RegisterTooSmall { needed: usize, qubits: usize },
}

/// The four fields of a gene, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneField {
    Gate,
    Target,
    Control,
    Angle,
}

impl GeneField {
    pub const ALL: [GeneField; 4] = [
        GeneField::Gate,
        GeneField::Target,
        GeneField::Control,
        GeneField::Angle,
    ];
}

impl fmt::Display for GeneField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneField::Gate => "gate",
            GeneField::Target => "target",
            GeneField::Control => "control",
            GeneField::Angle => "angle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gene {
    pub gate_id: u32,
    pub target: u32,
    pub control: u32,
    pub angle_idx: u32,
}

impl Gene {
    pub const fn new(gate_id: u32, target: u32, control: u32, angle_idx: u32) -> Self {
        Gene {
            gate_id,
            target,
            control,
            angle_idx,
        }
    }

    pub fn field(&self, f: GeneField) -> u32 {
        match f {
            GeneField::Gate => self.gate_id,
            GeneField::Target => self.target,
            GeneField::Control => self.control,
            GeneField::Angle => self.angle_idx,
        }
    }

    pub fn set_field(&mut self, f: GeneField, value: u32) {
        match f {
            GeneField::Gate => self.gate_id = value,
            GeneField::Target => self.target = value,
            GeneField::Control => self.control = value,
            GeneField::Angle => self.angle_idx = value,
        }
    }
}

/// A fixed-length gene string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    pub genes: Vec<Gene>,
}

impl Genotype {
    pub fn new(genes: Vec<Gene>) -> Self {
        Genotype { genes }
    }

    /// All slots empty. Target labels are set to 1 so the genotype stays in bounds.
    pub fn empty(len: usize) -> Self {
        Genotype {
            genes: alloc::vec![Gene::new(0, 1, 0, 0); len],
        }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// Number of integer variables, four per gene.
    pub fn num_variables(&self) -> usize {
        4 * self.genes.len()
    }

    /// Variable `v` in the flat integer string.
    pub fn variable(&self, v: usize) -> u32 {
        self.genes[v / 4].field(GeneField::ALL[v % 4])
    }

    pub fn set_variable(&mut self, v: usize, value: u32) {
        self.genes[v / 4].set_field(GeneField::ALL[v % 4], value);
    }

    /// The flat integer string, e.g. `2 3 2 0 3 2 1 0`.
    pub fn to_integers(&self) -> Vec<u32> {
        (0..self.num_variables()).map(|v| self.variable(v)).collect()
    }

    /// Inverse of [`Genotype::to_integers`]; `None` when the length is not a multiple of four.
    pub fn from_integers(values: &[u32]) -> Option<Self> {
        if !values.len().is_multiple_of(4) {
            return None;
        }
        Some(Genotype {
            genes: values
                .chunks_exact(4)
                .map(|g| Gene::new(g[0], g[1], g[2], g[3]))
                .collect(),
        })
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.genes.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} {} {} {}", g.gate_id, g.target, g.control, g.angle_idx)?;
        }
        Ok(())
    }
}

/// How a base gate is placed in the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Single,
    Control,
    /// Every qubit between control and target is also a control.
    MultiControl,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::Single => "Single",
            Variant::Control => "Control",
            Variant::MultiControl => "Multicontrol",
        }
    }

    pub fn needs_control(self) -> bool {
        !matches!(self, Variant::Single)
    }
}

impl FromStr for Variant {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, CircuitError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "single" => Ok(Variant::Single),
            "control" | "controlled" => Ok(Variant::Control),
            "multicontrol" | "multi-control" | "multicontrolled" => Ok(Variant::MultiControl),
            _ => Err(CircuitError::BadGateSetEntry(s.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GateSetEntry {
    pub gate: ElementaryGate,
    pub variant: Variant,
}

impl GateSetEntry {
    pub const fn new(gate: ElementaryGate, variant: Variant) -> Self {
        GateSetEntry { gate, variant }
    }
}

impl fmt::Display for GateSetEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.variant.label(), self.gate)
    }
}

impl FromStr for GateSetEntry {
    type Err = CircuitError;

    /// Accepts `control:V`, `Control V` or a bare gate name (single variant).
    fn from_str(s: &str) -> Result<Self, CircuitError> {
        let s = s.trim();
        let mut parts = s.split(|c: char| c == ':' || c.is_whitespace()).filter(|p| !p.is_empty());
        let (first, second) = (parts.next(), parts.next());
        if parts.next().is_some() {
            return Err(CircuitError::BadGateSetEntry(s.into()));
        }
        match (first, second) {
            (Some(gate), None) => Ok(GateSetEntry::new(gate.parse()?, Variant::Single)),
            (Some(variant), Some(gate)) => Ok(GateSetEntry::new(gate.parse()?, variant.parse()?)),
            _ => Err(CircuitError::BadGateSetEntry(s.into())),
        }
    }
}

/// Ordered gate roster; gene gate id `k ≥ 1` selects entry `k − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateSet {
    entries: Vec<GateSetEntry>,
}

impl GateSet {
    pub fn new(entries: Vec<GateSetEntry>) -> Result<Self, CircuitError> {
        if entries.is_empty() {
            return Err(CircuitError::EmptyGateSet);
        }
        Ok(GateSet { entries })
    }

    /// Paulis, V, V†, and the three rotations as single and controlled gates,
    /// followed by the multi-controlled X.
    pub fn standard() -> Self {
        let mut entries = Vec::with_capacity(17);
        for variant in [Variant::Single, Variant::Control] {
            for gate in ElementaryGate::ALL {
                entries.push(GateSetEntry::new(gate, variant));
            }
        }
        entries.push(GateSetEntry::new(ElementaryGate::X, Variant::MultiControl));
        GateSet { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[GateSetEntry] {
        &self.entries
    }

    /// Entry for a 1-based gate id; `None` for 0 or out-of-range ids.
    pub fn get(&self, gate_id: u32) -> Option<GateSetEntry> {
        (gate_id as usize).checked_sub(1).and_then(|i| self.entries.get(i).copied())
    }

    /// 1-based id of an entry.
    pub fn id_of(&self, entry: GateSetEntry) -> Option<u32> {
        self.entries.iter().position(|e| *e == entry).map(|i| i as u32 + 1)
    }
}

impl Default for GateSet {
    fn default() -> Self {
        Self::standard()
    }
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", e.variant.label().to_ascii_lowercase(), e.gate)?;
        }
        Ok(())
    }
}

impl FromStr for GateSet {
    type Err = CircuitError;

    /// `default`/`standard`, or a comma-separated list of entries.
    fn from_str(s: &str) -> Result<Self, CircuitError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("default") || s.eq_ignore_ascii_case("standard") {
            return Ok(GateSet::standard());
        }
        let entries = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()?;
        GateSet::new(entries)
    }
}

/// Quantized rotation angles `k·step`, `0 ≤ k < count`, all within `[0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleGrid {
    step: f64,
    count: u32,
}

impl AngleGrid {
    pub fn with_step(step: f64) -> Result<Self, CircuitError> {
        if !(step > 0.0 && step <= TAU) {
            return Err(CircuitError::BadAngleStep(step));
        }
        let count = (TAU / step + 1e-9) as u32 + 1;
        Ok(AngleGrid { step, count })
    }

    /// Multiples of π/8 in `[0, 2π]`: 17 angles.
    pub fn pi_eighths() -> Self {
        Self::with_step(0.125 * PI).expect("valid step")
    }

    /// Multiples of 0.005 rad in `[0, 2π]`.
    pub fn fine() -> Self {
        Self::with_step(0.005).expect("valid step")
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn value(&self, k: u32) -> f64 {
        k as f64 * self.step
    }
}

impl Default for AngleGrid {
    fn default() -> Self {
        Self::pi_eighths()
    }
}

/// Legal ranges of the gene fields for one problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneBounds {
    pub gates: u32,
    pub qubits: u32,
    pub angles: u32,
}

impl GeneBounds {
    pub fn new(gate_set: &GateSet, qubits: usize, grid: &AngleGrid) -> Self {
        GeneBounds {
            gates: gate_set.len() as u32,
            qubits: qubits as u32,
            angles: grid.count(),
        }
    }

    /// Inclusive range of a field.
    pub fn range(&self, f: GeneField) -> (u32, u32) {
        match f {
            GeneField::Gate => (0, self.gates),
            GeneField::Target => (1, self.qubits),
            GeneField::Control => (0, self.qubits),
            GeneField::Angle => (0, self.angles - 1),
        }
    }

    pub fn random_value<R: Rng + ?Sized>(&self, f: GeneField, rng: &mut R) -> u32 {
        let (lo, hi) = self.range(f);
        rng.gen_range(lo..=hi)
    }

    pub fn random_gene<R: Rng + ?Sized>(&self, rng: &mut R) -> Gene {
        let mut g = Gene::default();
        for f in GeneField::ALL {
            g.set_field(f, self.random_value(f, rng));
        }
        g
    }

    pub fn random_genotype<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Genotype {
        Genotype::new((0..len).map(|_| self.random_gene(rng)).collect())
    }

    pub fn contains(&self, g: &Genotype) -> bool {
        self.check(g).is_ok()
    }

    pub fn check(&self, g: &Genotype) -> Result<(), CircuitError> {
        for (i, gene) in g.genes.iter().enumerate() {
            for f in GeneField::ALL {
                let v = gene.field(f);
                let (lo, hi) = self.range(f);
                if v < lo {
                    return Err(CircuitError::MissingTarget { gene: i });
                }
                if v > hi {
                    return Err(CircuitError::GeneOutOfRange {
                        gene: i,
                        field: f,
                        value: v,
                        max: hi,
                    });
                }
            }
        }
        Ok(())
    }
}

/// An active gate with 0-based qubit indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedGate {
    pub variant: Variant,
    pub gate: ElementaryGate,
    pub target: usize,
    /// `Some` exactly for controlled variants; never equal to `target`.
    pub control: Option<usize>,
    /// 0 for gates that ignore the angle.
    pub angle_idx: u32,
    pub theta: f64,
}

impl PlacedGate {
    /// Gate with the given variant; for controlled variants a missing or
    /// coinciding control yields `None`.
    pub fn new(
        variant: Variant,
        gate: ElementaryGate,
        target: usize,
        control: Option<usize>,
        angle_idx: u32,
        grid: &AngleGrid,
    ) -> Option<Self> {
        let control = if variant.needs_control() {
            match control {
                Some(c) if c != target => Some(c),
                _ => return None,
            }
        } else {
            None
        };
        let (angle_idx, theta) = if gate.is_rotation() {
            (angle_idx, grid.value(angle_idx))
        } else {
            (0, 0.0)
        };
        Some(PlacedGate {
            variant,
            gate,
            target,
            control,
            angle_idx,
            theta,
        })
    }

    /// Lowest qubit touched and the distance spanned (0 for single gates).
    pub fn span(&self) -> (usize, usize) {
        match self.control {
            Some(c) => (c.min(self.target), c.abs_diff(self.target)),
            None => (self.target, 0),
        }
    }

    /// Local block of the gate on qubits `low..=low + d`, as the block
    /// constructions produce it.
    pub fn local_matrix(&self) -> ComplexMatrix {
        let u = self.gate.matrix(self.theta);
        let Some(control) = self.control else {
            return ComplexMatrix::from_2x2(u);
        };
        let (low, d) = self.span();
        // Lower qubit labels are more significant within the block.
        let acted = low + d - self.target;
        let condition = low + d - control;
        let placement = LocalPlacement::for_roles(acted, condition).expect("distinct qubits");
        match self.variant {
            Variant::Control => build_single_control(&u, placement),
            Variant::MultiControl => build_multi_control(&u, placement),
            Variant::Single => unreachable!(),
        }
        .expect("valid placement")
    }

    /// The same gate as a row-pair update of an `n`-qubit register unitary.
    pub fn row_pair_action(&self, qubits: usize) -> RowPairAction {
        let bit = |q: usize| 1usize << (qubits - 1 - q);
        let condition = match (self.variant, self.control) {
            (Variant::Control, Some(c)) => bit(c),
            (Variant::MultiControl, Some(_)) => {
                let (low, d) = self.span();
                (low..=low + d).filter(|&q| q != self.target).map(bit).sum()
            }
            _ => 0,
        };
        RowPairAction {
            u: self.gate.matrix(self.theta),
            target: bit(self.target),
            condition,
        }
    }

    pub fn name(&self) -> GateName {
        GateName {
            variant: self.variant,
            gate: self.gate,
        }
    }
}

/// Display helper producing `Single V`, `Control X`, `Multicontrol X`.
#[derive(Debug, Clone, Copy)]
pub struct GateName {
    pub variant: Variant,
    pub gate: ElementaryGate,
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.variant.label(), self.gate)
    }
}

/// One circuit slot after decoding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecodedGate {
    Noop,
    Active(PlacedGate),
}

impl DecodedGate {
    pub fn is_noop(&self) -> bool {
        matches!(self, DecodedGate::Noop)
    }

    pub fn active(&self) -> Option<&PlacedGate> {
        match self {
            DecodedGate::Active(g) => Some(g),
            DecodedGate::Noop => None,
        }
    }
}

/// Decodes each gene into a circuit slot. Empty slots stay in place.
pub fn decode(
    genotype: &Genotype,
    gate_set: &GateSet,
    qubits: usize,
    grid: &AngleGrid,
) -> Result<Vec<DecodedGate>, CircuitError> {
    GeneBounds::new(gate_set, qubits, grid).check(genotype)?;
    Ok(genotype
        .genes
        .iter()
        .map(|g| decode_gene(g, gate_set, grid))
        .collect())
}

/// Decodes one in-bounds gene.
pub fn decode_gene(gene: &Gene, gate_set: &GateSet, grid: &AngleGrid) -> DecodedGate {
    let Some(entry) = gate_set.get(gene.gate_id) else {
        return DecodedGate::Noop;
    };
    let target = gene.target as usize - 1;
    let control = (gene.control as usize).checked_sub(1);
    match PlacedGate::new(entry.variant, entry.gate, target, control, gene.angle_idx, grid) {
        Some(g) => DecodedGate::Active(g),
        None => DecodedGate::Noop,
    }
}

/// Reusable buffer for accumulating circuit unitaries.
#[derive(Debug, Clone)]
pub struct Workspace {
    qubits: usize,
    acc: ComplexMatrix,
}

impl Workspace {
    pub fn new(qubits: usize) -> Self {
        Workspace {
            qubits,
            acc: ComplexMatrix::identity(1 << qubits),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Accumulates the circuit and returns a view of its unitary.
    ///
    /// Gates are applied as in-place row updates rather than through
    /// embedded `2^n × 2^n` products.
    pub fn accumulate(&mut self, circuit: &[DecodedGate]) -> &ComplexMatrix {
        let dim = self.acc.dim();
        let data = self.acc.as_mut_slice();
        data.fill(Complex64::new(0.0, 0.0));
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        for gate in circuit.iter().filter_map(DecodedGate::active) {
            gate.row_pair_action(self.qubits).apply(&mut self.acc);
        }
        &self.acc
    }
}

/// `U_k ··· U_2 · U_1` for the circuit's gates in order; empty slots are identity.
pub fn circuit_unitary(circuit: &[DecodedGate], qubits: usize) -> Result<ComplexMatrix, CircuitError> {
    let needed = required_qubits(circuit);
    if needed > qubits {
        return Err(CircuitError::RegisterTooSmall { needed, qubits });
    }
    let mut ws = Workspace::new(qubits);
    Ok(ws.accumulate(circuit).clone())
}

/// Smallest register holding every gate of the circuit.
pub fn required_qubits(circuit: &[DecodedGate]) -> usize {
    circuit
        .iter()
        .filter_map(DecodedGate::active)
        .map(|g| {
            let (low, d) = g.span();
            low + d + 1
        })
        .max()
        .unwrap_or(0)
}

/// 1 for a single gate, `2·d` for a controlled gate and `3·d` for a
/// multi-controlled gate spanning distance `d`; 0 for an empty slot.
pub fn gate_cost(gate: &DecodedGate) -> u32 {
    match gate {
        DecodedGate::Noop => 0,
        DecodedGate::Active(g) => {
            let (_, d) = g.span();
            match g.variant {
                Variant::Single => 1,
                Variant::Control => 2 * d as u32,
                Variant::MultiControl => 3 * d as u32,
            }
        }
    }
}

pub fn circuit_cost(circuit: &[DecodedGate]) -> u32 {
    circuit.iter().map(gate_cost).sum()
}
