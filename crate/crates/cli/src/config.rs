//! Command-line and config-file handling.
//!
//! Every setting can come from a flag, from a TOML config file (`--config`)
//! or from the built-in defaults, in that order of precedence.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use gatesynth_core::circuit::CircuitError;
use gatesynth_core::fitness::{ProblemError, WeightsError};
use gatesynth_core::gloa::ParamError;
use gatesynth_core::targets::{Builtin, TargetError};
use gatesynth_core::{AngleGrid, ComplexMatrix, GateSet, GloaParams, ObjectiveWeights, Problem};
use serde::Deserialize;
use thiserror::Error;

use crate::matrix_file::{load_matrix_file, MatrixFileError};

/// Default number of gate slots per circuit.
pub const DEFAULT_MAX_GATES: usize = 8;
/// Default interval, in iterations, between streamed log lines.
pub const DEFAULT_REPORT_EVERY: usize = 50;

#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "gatesynth",
    version,
    about = "Search for a low-cost gate sequence implementing a target unitary",
    arg_required_else_help = true
)]
pub struct Cli {
    /// TOML file with default settings; flags take precedence over it
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Built-in target: toffoli, grover_diffusion, qft or teleport_sender
    #[arg(long)]
    pub target: Option<String>,
    /// Target unitary read from a matrix file
    #[arg(long, value_name = "FILE")]
    pub matrix_file: Option<PathBuf>,
    /// Register width; must agree with the target
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Gate slots per candidate circuit [default: 8]
    #[arg(long)]
    pub max_gates: Option<usize>,
    /// Optimizer iterations [default: 500]
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Number of groups [default: 15]
    #[arg(long)]
    pub groups: Option<usize>,
    /// Members per group [default: 25]
    #[arg(long)]
    pub group_size: Option<usize>,
    /// Probability of keeping a field from the member [default: 0.8]
    #[arg(long)]
    pub r1: Option<f64>,
    /// Probability of taking a field from the group leader [default: 0.1]
    #[arg(long)]
    pub r2: Option<f64>,
    /// Probability of redrawing a field at random [default: 0.1]
    #[arg(long)]
    pub r3: Option<f64>,
    /// Transfer attempts per group and iteration [default: 2·max_gates − 1]
    #[arg(long)]
    pub transfers: Option<usize>,
    /// Weight of correctness in the objective [default: 0.9]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Weight of inverse cost in the objective [default: 0.1]
    #[arg(long)]
    pub beta: Option<f64>,
    /// Rotation angle grid: default (steps of π/8), h2 (steps of 0.005) or custom
    #[arg(long, value_name = "PRESET")]
    pub angle_preset: Option<String>,
    /// Step of the custom angle grid, in radians
    #[arg(long, value_name = "RADIANS")]
    pub angle_step: Option<f64>,
    /// Gate set: `default` or a comma list such as `single:X,control:V,multicontrol:X`
    #[arg(long, value_name = "LIST")]
    pub gate_set: Option<String>,
    /// Random seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the final report to this file instead of standard output
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Print a log line every this many iterations; 0 prints only the last [default: 50]
    #[arg(long, value_name = "N")]
    pub report_every: Option<usize>,
    /// Worker threads for scoring; 1 scores on the main thread, 0 uses all cores [default: 1]
    #[arg(long)]
    pub threads: Option<usize>,
    /// Score the circuit in this G/T/C/Q table (or report) against the target instead of searching
    #[arg(long, value_name = "TABLE")]
    pub reevaluate: Option<PathBuf>,
}

/// The same settings as [`Cli`], read from a config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub target: Option<String>,
    pub matrix_file: Option<PathBuf>,
    pub qubits: Option<usize>,
    pub max_gates: Option<usize>,
    pub iterations: Option<usize>,
    pub groups: Option<usize>,
    pub group_size: Option<usize>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub r3: Option<f64>,
    pub transfers: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub angle_preset: Option<String>,
    pub angle_step: Option<f64>,
    pub gate_set: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub report_every: Option<usize>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::ReadFile {
            path: path.to_owned(),
            source,
        })?;
        let mut cfg: FileConfig = toml::from_str(&text).map_err(|source| ConfigError::FileSyntax {
            path: path.to_owned(),
            source,
        })?;
        // Paths in a config file are relative to the file itself.
        if let (Some(dir), Some(m)) = (path.parent(), cfg.matrix_file.as_mut()) {
            if m.is_relative() {
                *m = dir.join(&*m);
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("cannot read config file {}: {source}", path.display())]
    ReadFile { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {}: {source}", path.display())]
    FileSyntax { path: PathBuf, source: toml::de::Error },
    #[error("no target given; use --target or --matrix-file")]
    MissingTarget,
    #[error("--target and --matrix-file are mutually exclusive")]
    ConflictingTargets,
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error("{}: {source}", path.display())]
    MatrixFile { path: PathBuf, source: MatrixFileError },
    #[error("inconsistent qubit count: the target acts on {target} qubits but {requested} were requested")]
    InconsistentQubits { target: usize, requested: usize },
    #[error("invalid optimizer rates: {0}")]
    Rates(ParamError),
    #[error("invalid optimizer parameters: {0}")]
    Params(ParamError),
    #[error("invalid objective weights: {0}")]
    Weights(#[from] WeightsError),
    #[error("unknown angle preset `{0}` (expected default, h2 or custom)")]
    AnglePreset(String),
    #[error("--angle-step requires the custom angle preset")]
    StepWithoutCustom,
    #[error("the custom angle preset requires --angle-step")]
    CustomWithoutStep,
    #[error("invalid gate set: {0}")]
    GateSet(CircuitError),
    #[error("invalid angle grid: {0}")]
    AngleGrid(CircuitError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Where the target unitary comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSpec {
    Builtin(Builtin),
    File(PathBuf),
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Builtin(b) => write!(f, "{b}"),
            TargetSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// A resolved target together with its register width.
#[derive(Debug, Clone)]
pub struct Target {
    pub spec: TargetSpec,
    pub qubits: usize,
    pub matrix: ComplexMatrix,
}

impl Target {
    /// Builds or loads the target; `qubits`, when given, must agree with it.
    pub fn resolve(spec: TargetSpec, qubits: Option<usize>) -> Result<Self, ConfigError> {
        let (matrix, actual) = match &spec {
            TargetSpec::Builtin(b) => {
                let n = qubits.unwrap_or(b.default_qubits());
                match b.build(n) {
                    Ok(m) => (m, n),
                    Err(TargetError::FixedWidth { fixed, requested, .. }) => {
                        return Err(ConfigError::InconsistentQubits {
                            target: fixed,
                            requested,
                        })
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            TargetSpec::File(path) => {
                let loaded = load_matrix_file(path).map_err(|source| ConfigError::MatrixFile {
                    path: path.clone(),
                    source,
                })?;
                (loaded.matrix, loaded.qubits)
            }
        };
        if let Some(requested) = qubits.filter(|&q| q != actual) {
            return Err(ConfigError::InconsistentQubits {
                target: actual,
                requested,
            });
        }
        Ok(Target {
            spec,
            qubits: actual,
            matrix,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnglePreset {
    /// Multiples of π/8 in `[0, 2π]`.
    Default,
    /// Multiples of 0.005 rad in `[0, 2π]`.
    H2,
    Custom(f64),
}

impl AnglePreset {
    pub fn grid(self) -> Result<AngleGrid, CircuitError> {
        match self {
            AnglePreset::Default => Ok(AngleGrid::pi_eighths()),
            AnglePreset::H2 => Ok(AngleGrid::fine()),
            AnglePreset::Custom(step) => AngleGrid::with_step(step),
        }
    }

    fn from_settings(preset: Option<&str>, step: Option<f64>) -> Result<Self, ConfigError> {
        let preset = preset.map(|p| p.trim().to_ascii_lowercase());
        match (preset.as_deref(), step) {
            (None | Some("custom"), Some(step)) => Ok(AnglePreset::Custom(step)),
            (Some("custom"), None) => Err(ConfigError::CustomWithoutStep),
            (Some("default" | "h2"), Some(_)) => Err(ConfigError::StepWithoutCustom),
            (None | Some("default"), None) => Ok(AnglePreset::Default),
            (Some("h2"), None) => Ok(AnglePreset::H2),
            (Some(other), _) => Err(ConfigError::AnglePreset(other.to_owned())),
        }
    }
}

/// Settings shared by searching and re-evaluation.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub target: Target,
    pub gate_set: GateSet,
    pub angles: AnglePreset,
    pub grid: AngleGrid,
    pub weights: ObjectiveWeights,
}

/// A validated search configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub max_gates: usize,
    pub params: GloaParams,
    pub out: Option<PathBuf>,
    pub report_every: usize,
    pub threads: usize,
}

impl RunConfig {
    pub fn qubits(&self) -> usize {
        self.problem.target.qubits
    }

    pub fn transfers(&self) -> usize {
        self.params.transfers_for(self.max_gates)
    }

    pub fn build_problem(&self) -> Result<Problem, ProblemError> {
        let p = &self.problem;
        Problem::new(p.target.matrix.clone(), self.max_gates, p.gate_set.clone(), p.grid, p.weights)
    }
}

/// Scoring of an existing circuit table.
#[derive(Debug, Clone)]
pub struct ReevaluateConfig {
    pub table: PathBuf,
    pub problem: ProblemConfig,
}

#[derive(Debug, Clone)]
pub enum Command {
    Run(RunConfig),
    Reevaluate(ReevaluateConfig),
}

/// Parses arguments (including the program name) and the optional config file.
pub fn parse_config<I, T>(argv: I) -> Result<Command, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    resolve(cli, file)
}

/// Merges flags over file values over defaults and validates the result.
pub fn resolve(cli: Cli, file: FileConfig) -> Result<Command, ConfigError> {
    macro_rules! pick {
        ($field:ident) => {
            cli.$field.clone().or(file.$field.clone())
        };
    }

    // A flag naming one kind of target replaces a file's target of either kind.
    let (target, matrix_file) = if cli.target.is_some() || cli.matrix_file.is_some() {
        (cli.target.clone(), cli.matrix_file.clone())
    } else {
        (file.target.clone(), file.matrix_file.clone())
    };
    let spec = match (target, matrix_file) {
        (Some(_), Some(_)) => return Err(ConfigError::ConflictingTargets),
        (Some(name), None) => TargetSpec::Builtin(name.parse()?),
        (None, Some(path)) => TargetSpec::File(path),
        (None, None) => return Err(ConfigError::MissingTarget),
    };
    let target = Target::resolve(spec, pick!(qubits))?;

    let gate_set = match pick!(gate_set) {
        Some(list) => list.parse().map_err(ConfigError::GateSet)?,
        None => GateSet::standard(),
    };
    let angles = AnglePreset::from_settings(pick!(angle_preset).as_deref(), pick!(angle_step))?;
    let grid = angles.grid().map_err(ConfigError::AngleGrid)?;
    let defaults = ObjectiveWeights::default();
    let weights = ObjectiveWeights::new(
        pick!(alpha).unwrap_or(defaults.alpha()),
        pick!(beta).unwrap_or(defaults.beta()),
    )?;
    let problem = ProblemConfig {
        target,
        gate_set,
        angles,
        grid,
        weights,
    };

    if let Some(table) = cli.reevaluate {
        return Ok(Command::Reevaluate(ReevaluateConfig { table, problem }));
    }

    let base = GloaParams::default();
    let params = GloaParams {
        num_groups: pick!(groups).unwrap_or(base.num_groups),
        group_size: pick!(group_size).unwrap_or(base.group_size),
        r1: pick!(r1).unwrap_or(base.r1),
        r2: pick!(r2).unwrap_or(base.r2),
        r3: pick!(r3).unwrap_or(base.r3),
        transfers_per_group: pick!(transfers),
        max_iterations: pick!(iterations).unwrap_or(base.max_iterations),
        seed: pick!(seed).unwrap_or(base.seed),
        target_objective: None,
    };
    params.validate().map_err(|e| match e {
        ParamError::NegativeRate(..) | ParamError::RatesSum(_) => ConfigError::Rates(e),
        _ => ConfigError::Params(e),
    })?;

    let cfg = RunConfig {
        problem,
        max_gates: pick!(max_gates).unwrap_or(DEFAULT_MAX_GATES),
        params,
        out: pick!(out),
        report_every: pick!(report_every).unwrap_or(DEFAULT_REPORT_EVERY),
        threads: pick!(threads).unwrap_or(1),
    };
    // Surfaces target and slot-count problems before any work starts.
    cfg.build_problem()?;
    Ok(Command::Run(cfg))
}
