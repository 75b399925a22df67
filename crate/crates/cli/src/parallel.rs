//! Scoring on a worker pool.

use gatesynth_core::fitness::Score;
use gatesynth_core::{Genotype, Problem, Scorer, SequentialScorer};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Scores each batch across a rayon pool.
///
/// Scores land in input order and every genotype is scored independently, so
/// a run produces the same trajectory as with [`SequentialScorer`].
pub struct ParallelScorer {
    pool: ThreadPool,
    single: SequentialScorer,
}

impl ParallelScorer {
    /// `threads == 0` sizes the pool to the available cores.
    pub fn new(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        Ok(ParallelScorer {
            pool: ThreadPoolBuilder::new().num_threads(threads).build()?,
            single: SequentialScorer::new(),
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Scorer for ParallelScorer {
    fn score_batch(&mut self, problem: &Problem, genotypes: &[Genotype], out: &mut Vec<Score>) {
        self.pool.install(|| {
            genotypes
                .par_iter()
                .map_init(|| problem.workspace(), |ws, g| problem.score(g, ws))
                .collect_into_vec(out)
        });
    }

    // Single transfers are too small to be worth a round trip to the pool.
    fn score_one(&mut self, problem: &Problem, genotype: &Genotype) -> Score {
        self.single.score_one(problem, genotype)
    }
}
