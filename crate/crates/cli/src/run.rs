//! Running searches and re-scoring circuit tables.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use gatesynth_core::fitness::{ProblemError, Score};
use gatesynth_core::gloa::ParamError;
use gatesynth_core::table::TableError;
use gatesynth_core::{parse_table, render_table, Gloa, Problem, Scorer, SequentialScorer};
use rayon::ThreadPoolBuildError;
use thiserror::Error;

use crate::config::{ReevaluateConfig, RunConfig};
use crate::parallel::ParallelScorer;
use crate::report::{ReportParams, RunReport};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("cannot start worker threads: {0}")]
    Threads(#[from] ThreadPoolBuildError),
    #[error("cannot write report to {}: {source}", path.display())]
    WriteReport { path: PathBuf, source: io::Error },
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
    #[error("cannot read table {}: {source}", path.display())]
    ReadTable { path: PathBuf, source: io::Error },
    #[error("{}:{}: {}", path.display(), source.line, source.kind)]
    Table { path: PathBuf, source: TableError },
}

/// Runs the search, streaming the iteration log to `log`.
///
/// The report goes to the configured output file, or after the log when none
/// is set.
pub fn execute(cfg: &RunConfig, log: &mut dyn Write) -> Result<RunReport, RunError> {
    let started = Instant::now();
    let problem = cfg.build_problem()?;
    let mut scorer: Box<dyn Scorer> = match cfg.threads {
        1 => Box::new(SequentialScorer::new()),
        n => Box::new(ParallelScorer::new(n)?),
    };

    let mut gloa = Gloa::new(&problem, cfg.params.clone(), scorer.as_mut())?;
    writeln!(log, "# iteration, best_y, best_c, best_cost")?;
    writeln!(log, "{}", gloa.latest())?;
    while !gloa.finished() {
        let rec = gloa.step(scorer.as_mut());
        let due = cfg.report_every > 0 && rec.iteration % cfg.report_every == 0;
        if due || gloa.finished() {
            writeln!(log, "{rec}")?;
        }
    }
    let outcome = gloa.into_outcome();

    let report = RunReport {
        target: cfg.problem.target.spec.to_string(),
        qubits: cfg.qubits(),
        max_gates: cfg.max_gates,
        seed: cfg.params.seed,
        params: report_params(cfg, &problem),
        iterations_run: outcome.iterations_run,
        best: outcome.best.score(),
        genotype: outcome.best_genotype,
        table: render_table(&outcome.best.circuit),
        wall_time: started.elapsed(),
    };
    let text = report.render();
    match &cfg.out {
        Some(path) => fs::write(path, &text).map_err(|source| RunError::WriteReport {
            path: path.clone(),
            source,
        })?,
        None => log.write_all(text.as_bytes())?,
    }
    Ok(report)
}

fn report_params(cfg: &RunConfig, problem: &Problem) -> ReportParams {
    let p = &cfg.params;
    ReportParams {
        groups: p.num_groups,
        group_size: p.group_size,
        r1: p.r1,
        r2: p.r2,
        r3: p.r3,
        transfers: cfg.transfers(),
        iterations: p.max_iterations,
        alpha: problem.weights().alpha(),
        beta: problem.weights().beta(),
        angle_step: problem.grid().step(),
        angle_count: problem.grid().count(),
        gate_set: problem.gate_set().to_string(),
    }
}

/// Score of an existing circuit against a target.
#[derive(Debug, Clone, PartialEq)]
pub struct Reevaluation {
    pub target: String,
    pub qubits: usize,
    pub score: Score,
    /// The circuit as parsed, rendered back to a table.
    pub table: String,
}

impl fmt::Display for Reevaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target = \"{}\"", self.target.replace('\\', "\\\\").replace('"', "\\\""))?;
        writeln!(f, "n = {}", self.qubits)?;
        writeln!(f, "y = {:?}", self.score.y)?;
        writeln!(f, "c = {:?}", self.score.c)?;
        writeln!(f, "cost = {}", self.score.cost)
    }
}

/// Scores the circuit in a table file. A run report is accepted as well; its
/// `table` field is used.
pub fn reevaluate(cfg: &ReevaluateConfig) -> Result<Reevaluation, RunError> {
    let text = fs::read_to_string(&cfg.table).map_err(|source| RunError::ReadTable {
        path: cfg.table.clone(),
        source,
    })?;
    let (table, first_line) = table_text(&text);
    let p = &cfg.problem;
    let circuit = parse_table(table, p.target.qubits, &p.grid).map_err(|mut e| {
        e.line += first_line - 1;
        RunError::Table {
            path: cfg.table.clone(),
            source: e,
        }
    })?;
    let problem = Problem::new(
        p.target.matrix.clone(),
        circuit.len().max(1),
        p.gate_set.clone(),
        p.grid,
        p.weights,
    )?;
    let score = problem.score_circuit(&circuit, &mut problem.workspace());
    Ok(Reevaluation {
        target: p.target.spec.to_string(),
        qubits: p.target.qubits,
        score,
        table: render_table(&circuit),
    })
}

/// The table part of `text` and the file line it starts on.
fn table_text(text: &str) -> (&str, usize) {
    let Ok(doc) = text.parse::<toml::Table>() else {
        return (text, 1);
    };
    let Some(table) = doc.get("table").and_then(|v| v.as_str()) else {
        return (text, 1);
    };
    match text.find(table) {
        Some(offset) if !table.is_empty() => (&text[offset..offset + table.len()], 1 + text[..offset].matches('\n').count()),
        _ => (text, 1),
    }
}
