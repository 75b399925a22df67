//! Group leaders optimization over circuit genotypes.
//!
//! The population is split into disjoint groups, each led by its best member.
//! Every iteration runs three phases:
//!
//! 1. a mutation sweep, where each member is recombined field by field from
//!    itself, its group leader and a fresh random genotype;
//! 2. a one-way parameter transfer, where single variables are copied into a
//!    group from members of other groups;
//! 3. a leader refresh.
//!
//! Both the mutation and the transfer keep a candidate only when it strictly
//! lowers the member's objective.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{GeneBounds, GeneField, Genotype, Workspace};
use crate::fitness::{EvaluationResult, Problem, Score};

/// Random stream driving a run.
pub type SearchRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("need at least 2 groups, got {0}")]
    TooFewGroups(usize),
    #[error("groups need at least one member")]
    EmptyGroups,
    #[error("rates must be non-negative, got r1 = {0}, r2 = {1}, r3 = {2}")]
    NegativeRate(f64, f64, f64),
    #[error("rates r1 + r2 + r3 must equal 1, got {0}")]
    RatesSum(f64),
}

/// Configuration of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct GloaParams {
    pub num_groups: usize,
    pub group_size: usize,
    /// Share of fields kept from the old member.
    pub r1: f64,
    /// Share of fields taken from the group leader.
    pub r2: f64,
    /// Share of fields drawn at random.
    pub r3: f64,
    /// Transfer attempts per group and iteration; `None` means
    /// `num_variables / 2 − 1` with four variables per gene.
    pub transfers_per_group: Option<usize>,
    pub max_iterations: usize,
    pub seed: u64,
    /// Stop as soon as the best objective is at or below this value.
    pub target_objective: Option<f64>,
}

impl Default for GloaParams {
    fn default() -> Self {
        GloaParams {
            num_groups: 15,
            group_size: 25,
            r1: 0.8,
            r2: 0.1,
            r3: 0.1,
            transfers_per_group: None,
            max_iterations: 500,
            seed: 0,
            target_objective: None,
        }
    }
}

impl GloaParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.num_groups < 2 {
            return Err(ParamError::TooFewGroups(self.num_groups));
        }
        if self.group_size == 0 {
            return Err(ParamError::EmptyGroups);
        }
        if self.r1 < 0.0 || self.r2 < 0.0 || self.r3 < 0.0 {
            return Err(ParamError::NegativeRate(self.r1, self.r2, self.r3));
        }
        let sum = self.r1 + self.r2 + self.r3;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(ParamError::RatesSum(sum));
        }
        Ok(())
    }

    /// Transfer attempts per group for genotypes of `max_gates` genes.
    pub fn transfers_for(&self, max_gates: usize) -> usize {
        self.transfers_per_group
            .unwrap_or_else(|| (4 * max_gates / 2).saturating_sub(1))
    }
}

/// Scores batches of genotypes for one problem.
///
/// Implementations must return the same scores as [`Problem::score`]; the
/// optimizer's trajectory then does not depend on how the batch is split up.
pub trait Scorer {
    fn score_batch(&mut self, problem: &Problem, genotypes: &[Genotype], out: &mut Vec<Score>);

    fn score_one(&mut self, problem: &Problem, genotype: &Genotype) -> Score {
        let mut out = Vec::with_capacity(1);
        self.score_batch(problem, core::slice::from_ref(genotype), &mut out);
        out[0]
    }
}

/// Scores on the calling thread with one reusable workspace.
#[derive(Debug, Default)]
pub struct SequentialScorer {
    ws: Option<Workspace>,
}

impl SequentialScorer {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Scorer for SequentialScorer {
    fn score_batch(&mut self, problem: &Problem, genotypes: &[Genotype], out: &mut Vec<Score>) {
        let ws = match &mut self.ws {
            Some(ws) if ws.qubits() == problem.qubits() => ws,
            slot => slot.insert(problem.workspace()),
        };
        out.clear();
        out.extend(genotypes.iter().map(|g| problem.score(g, ws)));
    }

    fn score_one(&mut self, problem: &Problem, genotype: &Genotype) -> Score {
        let ws = match &mut self.ws {
            Some(ws) if ws.qubits() == problem.qubits() => ws,
            slot => slot.insert(problem.workspace()),
        };
        problem.score(genotype, ws)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub genotype: Genotype,
    pub score: Score,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub members: Vec<Member>,
    /// Index of the member with the lowest objective (first one on ties).
    pub leader: usize,
}

impl Group {
    fn new(members: Vec<Member>) -> Self {
        let mut g = Group { members, leader: 0 };
        g.refresh_leader();
        g
    }

    pub fn leader(&self) -> &Member {
        &self.members[self.leader]
    }

    pub fn refresh_leader(&mut self) {
        self.leader = argmin(&self.members);
    }
}

fn argmin(members: &[Member]) -> usize {
    let mut best = 0;
    for (i, m) in members.iter().enumerate().skip(1) {
        if m.score.y < members[best].score.y {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub groups: Vec<Group>,
}

impl Population {
    pub fn size(&self) -> usize {
        self.groups.iter().map(|g| g.members.len()).sum()
    }

    /// Group and member index of the best member overall.
    pub fn best_position(&self) -> (usize, usize) {
        let mut best = (0, self.groups[0].leader);
        for (gi, g) in self.groups.iter().enumerate().skip(1) {
            if g.leader().score.y < self.groups[best.0].leader().score.y {
                best = (gi, g.leader);
            }
        }
        best
    }

    pub fn best(&self) -> &Member {
        let (g, m) = self.best_position();
        &self.groups[g].members[m]
    }
}

/// Draws every gene field uniformly from its legal range and scores the members.
pub fn init_population<R: Rng + ?Sized>(
    problem: &Problem,
    params: &GloaParams,
    rng: &mut R,
    scorer: &mut dyn Scorer,
) -> Population {
    let bounds = problem.bounds();
    let total = params.num_groups * params.group_size;
    let genotypes: Vec<Genotype> = (0..total)
        .map(|_| bounds.random_genotype(problem.max_gates(), rng))
        .collect();
    let mut scores = Vec::with_capacity(total);
    scorer.score_batch(problem, &genotypes, &mut scores);
    let mut members = genotypes
        .into_iter()
        .zip(scores)
        .map(|(genotype, score)| Member { genotype, score });
    let groups = (0..params.num_groups)
        .map(|_| Group::new(members.by_ref().take(params.group_size).collect()))
        .collect();
    Population { groups }
}

/// Field-wise recombination: each field comes from `old` with probability
/// `r1`, from `leader` with probability `r2`, and is redrawn otherwise.
pub fn mutate_member<R: Rng + ?Sized>(
    old: &Genotype,
    leader: &Genotype,
    params: &GloaParams,
    bounds: &GeneBounds,
    rng: &mut R,
) -> Genotype {
    assert_eq!(old.len(), leader.len(), "genotype lengths differ");
    let mut out = old.clone();
    for (gene, lead) in out.genes.iter_mut().zip(&leader.genes) {
        for f in GeneField::ALL {
            let u: f64 = rng.gen();
            if u < params.r1 {
                continue;
            }
            let value = if u < params.r1 + params.r2 {
                lead.field(f)
            } else {
                bounds.random_value(f, rng)
            };
            gene.set_field(f, value);
        }
    }
    out
}

/// Runs `attempts` one-variable transfers into group `target_group`. Donors
/// come from other groups and are never modified.
pub fn transfer_into_group<R: Rng + ?Sized>(
    pop: &mut Population,
    target_group: usize,
    attempts: usize,
    problem: &Problem,
    rng: &mut R,
    scorer: &mut dyn Scorer,
) {
    let num_groups = pop.groups.len();
    assert!(num_groups >= 2, "parameter transfer needs two groups");
    for _ in 0..attempts {
        let member = rng.gen_range(0..pop.groups[target_group].members.len());
        let mut donor_group = rng.gen_range(0..num_groups - 1);
        if donor_group >= target_group {
            donor_group += 1;
        }
        let donor = rng.gen_range(0..pop.groups[donor_group].members.len());
        let receiver = &pop.groups[target_group].members[member].genotype;
        let variable = rng.gen_range(0..receiver.num_variables());

        let value = pop.groups[donor_group].members[donor].genotype.variable(variable);
        if receiver.variable(variable) == value {
            continue;
        }
        let mut candidate = receiver.clone();
        candidate.set_variable(variable, value);
        let score = scorer.score_one(problem, &candidate);
        let slot = &mut pop.groups[target_group].members[member];
        if score.y < slot.score.y {
            *slot = Member {
                genotype: candidate,
                score,
            };
        }
    }
}

/// One transfer phase over all groups, in group order.
pub fn transfer_step<R: Rng + ?Sized>(
    pop: &mut Population,
    params: &GloaParams,
    problem: &Problem,
    rng: &mut R,
    scorer: &mut dyn Scorer,
) {
    let attempts = params.transfers_for(problem.max_gates());
    for g in 0..pop.groups.len() {
        transfer_into_group(pop, g, attempts, problem, rng, scorer);
    }
}

/// Best objective after an iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub best_y: f64,
    pub best_c: f64,
    pub best_cost: u32,
}

impl fmt::Display for IterationRecord {
    /// `iter, best_y, best_c, best_cost`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, {:.8}, {:.8}, {}",
            self.iteration, self.best_y, self.best_c, self.best_cost
        )
    }
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub best_genotype: Genotype,
    pub best: EvaluationResult,
    /// Entry 0 describes the initial population.
    pub log: Vec<IterationRecord>,
    pub iterations_run: usize,
}

/// Stepwise driver of a run.
pub struct Gloa<'p> {
    problem: &'p Problem,
    params: GloaParams,
    rng: SearchRng,
    population: Population,
    iteration: usize,
    log: Vec<IterationRecord>,
    candidates: Vec<Genotype>,
    scores: Vec<Score>,
}

impl<'p> Gloa<'p> {
    /// Validates the parameters and builds the initial population.
    pub fn new(problem: &'p Problem, params: GloaParams, scorer: &mut dyn Scorer) -> Result<Self, ParamError> {
        params.validate()?;
        let mut rng = SearchRng::seed_from_u64(params.seed);
        let population = init_population(problem, &params, &mut rng, scorer);
        let mut gloa = Gloa {
            problem,
            params,
            rng,
            population,
            iteration: 0,
            log: Vec::new(),
            candidates: Vec::new(),
            scores: Vec::new(),
        };
        gloa.record();
        Ok(gloa)
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn log(&self) -> &[IterationRecord] {
        &self.log
    }

    pub fn latest(&self) -> IterationRecord {
        *self.log.last().expect("log starts with the initial population")
    }

    /// True once the iteration budget is spent or the target objective is met.
    pub fn finished(&self) -> bool {
        self.iteration >= self.params.max_iterations
            || matches!(self.params.target_objective, Some(t) if self.latest().best_y <= t)
    }

    /// Runs one iteration and returns its log entry.
    pub fn step(&mut self, scorer: &mut dyn Scorer) -> IterationRecord {
        self.mutation_sweep(scorer);
        transfer_step(&mut self.population, &self.params, self.problem, &mut self.rng, scorer);
        for g in &mut self.population.groups {
            g.refresh_leader();
        }
        self.iteration += 1;
        self.record()
    }

    /// Candidates are drawn in member order against the leaders as they stood
    /// at the start of the sweep, then scored as one batch.
    fn mutation_sweep(&mut self, scorer: &mut dyn Scorer) {
        let bounds = self.problem.bounds();
        self.candidates.clear();
        for group in &self.population.groups {
            let leader = &group.leader().genotype;
            for m in &group.members {
                let cand = mutate_member(&m.genotype, leader, &self.params, &bounds, &mut self.rng);
                self.candidates.push(cand);
            }
        }
        scorer.score_batch(self.problem, &self.candidates, &mut self.scores);
        let mut fresh = self.candidates.drain(..).zip(self.scores.iter().copied());
        for group in &mut self.population.groups {
            for m in &mut group.members {
                let (genotype, score) = fresh.next().expect("one candidate per member");
                if score.y < m.score.y {
                    *m = Member { genotype, score };
                }
            }
        }
    }

    fn record(&mut self) -> IterationRecord {
        let best = self.population.best().score;
        let rec = IterationRecord {
            iteration: self.iteration,
            best_y: best.y,
            best_c: best.c,
            best_cost: best.cost,
        };
        self.log.push(rec);
        rec
    }

    pub fn into_outcome(self) -> RunOutcome {
        let best_genotype = self.population.best().genotype.clone();
        let best = self
            .problem
            .evaluate(&best_genotype)
            .expect("population genotypes stay in bounds");
        RunOutcome {
            best_genotype,
            best,
            log: self.log,
            iterations_run: self.iteration,
        }
    }
}

/// Runs to completion, calling `observe` after every iteration.
pub fn run_with(
    problem: &Problem,
    params: GloaParams,
    scorer: &mut dyn Scorer,
    mut observe: impl FnMut(&IterationRecord),
) -> Result<RunOutcome, ParamError> {
    let mut gloa = Gloa::new(problem, params, scorer)?;
    observe(&gloa.latest());
    while !gloa.finished() {
        let rec = gloa.step(scorer);
        observe(&rec);
    }
    Ok(gloa.into_outcome())
}

/// Sequential run.
pub fn run(problem: &Problem, params: GloaParams) -> Result<RunOutcome, ParamError> {
    run_with(problem, params, &mut SequentialScorer::new(), |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::targets;

    fn small_params(seed: u64) -> GloaParams {
        GloaParams {
            num_groups: 4,
            group_size: 6,
            max_iterations: 15,
            seed,
            ..GloaParams::default()
        }
    }

    #[test]
    fn default_transfer_count() {
        assert_eq!(GloaParams::default().transfers_for(8), 15);
        assert_eq!(GloaParams::default().transfers_for(12), 23);
        let p = GloaParams {
            transfers_per_group: Some(3),
            ..GloaParams::default()
        };
        assert_eq!(p.transfers_for(8), 3);
    }

    #[test]
    fn parameter_validation() {
        assert!(GloaParams::default().validate().is_ok());
        let bad = |f: fn(&mut GloaParams)| {
            let mut p = GloaParams::default();
            f(&mut p);
            p.validate().unwrap_err()
        };
        assert_eq!(bad(|p| p.num_groups = 1), ParamError::TooFewGroups(1));
        assert_eq!(bad(|p| p.group_size = 0), ParamError::EmptyGroups);
        assert!(matches!(bad(|p| p.r1 = 0.5), ParamError::RatesSum(_)));
        assert!(matches!(bad(|p| { p.r1 = 1.2; p.r2 = -0.2 }), ParamError::NegativeRate(..)));
    }

    #[test]
    fn degenerate_rates() {
        let problem = Problem::with_defaults(targets::toffoli(), 8).unwrap();
        let bounds = problem.bounds();
        let mut rng = SearchRng::seed_from_u64(3);
        let old = bounds.random_genotype(8, &mut rng);
        let leader = bounds.random_genotype(8, &mut rng);
        let keep = GloaParams { r1: 1.0, r2: 0.0, r3: 0.0, ..GloaParams::default() };
        let follow = GloaParams { r1: 0.0, r2: 1.0, r3: 0.0, ..GloaParams::default() };
        for _ in 0..50 {
            assert_eq!(mutate_member(&old, &leader, &keep, &bounds, &mut rng), old);
            assert_eq!(mutate_member(&old, &leader, &follow, &bounds, &mut rng), leader);
        }
    }

    #[test]
    fn initial_population_is_seeded_and_in_bounds() {
        let problem = Problem::with_defaults(targets::qft(2), 8).unwrap();
        let params = small_params(11);
        let make = || {
            let mut rng = SearchRng::seed_from_u64(params.seed);
            init_population(&problem, &params, &mut rng, &mut SequentialScorer::new())
        };
        let a = make();
        assert_eq!(a, make());
        assert_eq!(a.size(), 24);
        for g in &a.groups {
            for m in &g.members {
                assert!(problem.bounds().contains(&m.genotype));
                assert_eq!(m.score, problem.score(&m.genotype, &mut problem.workspace()));
                assert!(g.leader().score.y <= m.score.y);
            }
        }
    }

    #[test]
    fn zero_transfers_leave_population_unchanged() {
        let problem = Problem::with_defaults(targets::toffoli(), 4).unwrap();
        let params = GloaParams { transfers_per_group: Some(0), ..small_params(5) };
        let mut rng = SearchRng::seed_from_u64(5);
        let mut scorer = SequentialScorer::new();
        let mut pop = init_population(&problem, &params, &mut rng, &mut scorer);
        let before = pop.clone();
        transfer_step(&mut pop, &params, &problem, &mut rng, &mut scorer);
        assert_eq!(pop, before);
    }

    #[test]
    fn transfer_only_touches_the_receiving_group() {
        let problem = Problem::with_defaults(targets::grover_diffusion(2), 6).unwrap();
        let params = small_params(8);
        let mut rng = SearchRng::seed_from_u64(8);
        let mut scorer = SequentialScorer::new();
        let mut pop = init_population(&problem, &params, &mut rng, &mut scorer);
        for g in 0..pop.groups.len() {
            let before = pop.clone();
            let best_before: f64 = before.groups[g].members.iter().map(|m| m.score.y).fold(f64::INFINITY, f64::min);
            transfer_into_group(&mut pop, g, 40, &problem, &mut rng, &mut scorer);
            for (h, (a, b)) in pop.groups.iter().zip(&before.groups).enumerate() {
                if h != g {
                    assert_eq!(a, b);
                }
            }
            for (new, old) in pop.groups[g].members.iter().zip(&before.groups[g].members) {
                assert!(new.score.y <= old.score.y);
            }
            let best_after = pop.groups[g].members.iter().map(|m| m.score.y).fold(f64::INFINITY, f64::min);
            assert!(best_after <= best_before);
        }
    }

    #[test]
    fn identity_target_is_solved_at_iteration_zero() {
        let problem = Problem::with_defaults(ComplexMatrix::identity(4), 4).unwrap();
        let params = GloaParams { max_iterations: 0, seed: 1, ..GloaParams::default() };
        let out = run(&problem, params).unwrap();
        assert_eq!(out.iterations_run, 0);
        assert!(out.log[0].best_y <= 0.1);
    }

    #[test]
    fn runs_are_reproducible_and_monotone() {
        let problem = Problem::with_defaults(targets::grover_diffusion(2), 6).unwrap();
        let a = run(&problem, small_params(42)).unwrap();
        let b = run(&problem, small_params(42)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.log.len(), 16);
        for w in a.log.windows(2) {
            assert!(w[1].best_y <= w[0].best_y);
        }
        assert_eq!(a.best.y, a.log.last().unwrap().best_y);
    }

    #[test]
    fn leaders_are_group_minima_after_every_step() {
        let problem = Problem::with_defaults(targets::toffoli(), 5).unwrap();
        let mut scorer = SequentialScorer::new();
        let mut gloa = Gloa::new(&problem, small_params(9), &mut scorer).unwrap();
        while !gloa.finished() {
            gloa.step(&mut scorer);
            for g in &gloa.population().groups {
                let min = g.members.iter().map(|m| m.score.y).fold(f64::INFINITY, f64::min);
                assert_eq!(g.leader().score.y, min);
                assert_eq!(g.members.len(), 6);
            }
        }
    }

    #[test]
    fn early_stop_on_target_objective() {
        let problem = Problem::with_defaults(ComplexMatrix::identity(2), 2).unwrap();
        let params = GloaParams { target_objective: Some(0.2), max_iterations: 100, ..small_params(2) };
        let out = run(&problem, params).unwrap();
        assert_eq!(out.iterations_run, 0);
    }
}
