//! Library side of the `clonebound` command-line tool: configuration, report
//! assembly and JSON/CSV emission. `main.rs` only parses flags and writes the
//! output.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clonebound::bounds::{
    asymptotics_check, criteria, multi_state_bound, simplex_bound, two_state_bound, AsymptoticEntry,
    CloningScenario, CriteriaReport,
};
use clonebound::circuit::{build_circuit, simulate_with_priors, CloneRunReport};
use clonebound::optimize::{simplex_min, SimplexProgram, MAX_VERTEX_STATES};
use clonebound::Tolerances;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest allowed `|<Psi_+|Psi_-> - <Phi_+|Phi_->|` in a simulation report.
const OVERLAP_DRIFT: f64 = 1e-12;
/// Slack when comparing the joint-program bound with the pairwise sum.
const SHARPENING_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Invariant(#[from] clonebound::Error),
}

impl CliError {
    /// 1 for unreadable or malformed input, 2 for inputs that parse but
    /// violate a model invariant.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bound,
    Criteria,
    Table1,
    Simulate,
    Optimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Scalar inputs a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    F,
    Phi,
    PMinus,
    Alpha0,
    Theta,
    Eps,
}

impl FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(SweepParam::F),
            "phi" => Ok(SweepParam::Phi),
            "p-minus" | "p_minus" => Ok(SweepParam::PMinus),
            "alpha0" => Ok(SweepParam::Alpha0),
            "theta" => Ok(SweepParam::Theta),
            "eps" => Ok(SweepParam::Eps),
            other => Err(CliError::Parse(format!(
                "unknown sweep parameter {other:?} (expected f, phi, p-minus, alpha0, theta or eps)"
            ))),
        }
    }
}

/// `name:start:stop:steps`, `steps >= 2` evenly spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, steps] = parts[..] else {
            return Err(CliError::Parse(format!("sweep {s:?} is not name:start:stop:steps")));
        };
        let real = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Parse(format!("sweep bound {v:?} is not a finite number")))
        };
        let steps: usize = steps
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("sweep steps {steps:?} is not an integer")))?;
        if steps < 2 {
            return Err(CliError::Parse(format!("sweep needs at least 2 steps, got {steps}")));
        }
        Ok(Sweep { param: name.trim().parse()?, start: real(start)?, stop: real(stop)?, steps })
    }
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64;
                (self.start * (last - t) + self.stop * t) / last
            })
            .collect()
    }
}

/// Numeric flags; unset values fall back to per-command defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Params {
    pub originals: Option<usize>,
    pub copies: Option<usize>,
    pub alpha0: Option<f64>,
    pub theta: Option<f64>,
    pub f: Option<f64>,
    pub phi: Option<f64>,
    pub p_minus: Option<f64>,
    pub eps: Option<f64>,
}

impl Params {
    fn with(mut self, param: SweepParam, value: f64) -> Self {
        match param {
            SweepParam::F => self.f = Some(value),
            SweepParam::Phi => self.phi = Some(value),
            SweepParam::PMinus => self.p_minus = Some(value),
            SweepParam::Alpha0 => self.alpha0 = Some(value),
            SweepParam::Theta => self.theta = Some(value),
            SweepParam::Eps => self.eps = Some(value),
        }
        self
    }

    fn counts(&self) -> Result<(usize, usize)> {
        match (self.originals, self.copies) {
            (Some(n), Some(l)) => Ok((n, l)),
            _ => Err(CliError::Parse("--N and --L are required".into())),
        }
    }

    fn real(value: Option<f64>, flag: &str) -> Result<f64> {
        value.ok_or_else(|| CliError::Parse(format!("{flag} is required")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Scenario JSON (`bound`, `optimize`).
    pub input_path: Option<PathBuf>,
    /// Simplex-program JSON (`optimize`).
    pub program_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub sweep: Option<Sweep>,
    pub tolerances: Tolerances,
    pub params: Params,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input_path: None,
            program_path: None,
            output_format: OutputFormat::Json,
            sweep: None,
            tolerances: Tolerances::default(),
            params: Params::default(),
        }
    }
}

/// Emitted report text plus any invariant violations found while producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub violations: Vec<String>,
}

impl RunOutput {
    pub fn exit_code(&self) -> u8 {
        if self.violations.is_empty() {
            0
        } else {
            2
        }
    }
}

/// `bound` output. Overlaps and priors are absent for scenario files.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub m: usize,
    #[serde(rename = "N")]
    pub originals: usize,
    #[serde(rename = "L")]
    pub copies: usize,
    pub f: Option<f64>,
    pub phi: Option<f64>,
    pub p_minus: Option<f64>,
    pub bound: f64,
    pub perfect_cloning_possible: Option<bool>,
    /// Joint-program bound, reported for more than two states.
    pub simplex_bound: Option<f64>,
}

/// One line of the `table1` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Line {
    #[serde(rename = "N")]
    pub originals: usize,
    #[serde(rename = "L")]
    pub copies: usize,
    pub eps: f64,
    pub criterion: String,
    /// `small_overlap` (f = eps) or `near_identical` (f = 1 - eps).
    pub regime: &'static str,
    pub f: f64,
    pub value: f64,
    pub prediction: f64,
    pub residual: f64,
}

/// `simulate` CSV row: the scalar part of [`CloneRunReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateRow {
    #[serde(rename = "N")]
    pub originals: usize,
    #[serde(rename = "L")]
    pub copies: usize,
    pub alpha0: f64,
    pub theta: f64,
    pub p_minus: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub predicted_delta_minus: f64,
    #[serde(rename = "achieved_R")]
    pub achieved_r: f64,
    #[serde(rename = "bound_R")]
    pub bound_r: f64,
    pub mu_minus: f64,
    pub nu_minus: f64,
    pub ancilla_residual: f64,
    pub norm_drift: f64,
    pub input_overlap: f64,
    pub output_overlap: f64,
    pub saturated: bool,
}

impl From<&CloneRunReport> for SimulateRow {
    fn from(r: &CloneRunReport) -> Self {
        SimulateRow {
            originals: r.originals,
            copies: r.copies,
            alpha0: r.alpha0,
            theta: r.theta,
            p_minus: r.p_minus,
            delta_plus: r.delta_plus,
            delta_minus: r.delta_minus,
            predicted_delta_minus: r.predicted_delta_minus,
            achieved_r: r.achieved_r,
            bound_r: r.bound_r,
            mu_minus: r.mu_minus,
            nu_minus: r.nu_minus,
            ancilla_residual: r.ancilla_residual,
            norm_drift: r.norm_drift,
            input_overlap: r.input_overlap,
            output_overlap: r.output_overlap,
            saturated: r.saturated,
        }
    }
}

/// `optimize` output. The bound comparison is present for scenario input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub m: usize,
    pub simplex_min: f64,
    pub point: Vec<f64>,
    /// `2 simplex_min`.
    pub simplex_bound: Option<f64>,
    /// Sum of the pairwise two-state bounds.
    pub pairwise_bound: Option<f64>,
    /// `simplex_bound - pairwise_bound`, never negative.
    pub sharpening: Option<f64>,
}

#[derive(Serialize)]
struct OptimizeRow {
    m: usize,
    simplex_min: f64,
    point: String,
    simplex_bound: Option<f64>,
    pairwise_bound: Option<f64>,
    sharpening: Option<f64>,
}

impl From<&OptimizeReport> for OptimizeRow {
    fn from(r: &OptimizeReport) -> Self {
        OptimizeRow {
            m: r.m,
            simplex_min: r.simplex_min,
            point: r.point.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
            simplex_bound: r.simplex_bound,
            pairwise_bound: r.pairwise_bound,
            sharpening: r.sharpening,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

/// Malformed JSON is a parse error; JSON that is well formed but describes an
/// invalid scenario or program is an invariant violation.
fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => {
            CliError::Invariant(clonebound::Error::InvalidScenario(format!("{}: {e}", path.display())))
        }
        _ => CliError::Parse(format!("{}: {e}", path.display())),
    })
}

/// Points of the sweep, or the single unswept configuration.
fn sweep_params(config: &RunConfig) -> Vec<Params> {
    match &config.sweep {
        Some(s) => s.points().into_iter().map(|v| config.params.with(s.param, v)).collect(),
        None => vec![config.params],
    }
}

/// Evaluates every point in parallel, keeping input order.
fn evaluate<T: Send>(config: &RunConfig, f: impl Fn(&Params) -> Result<T> + Send + Sync) -> Result<Vec<T>> {
    sweep_params(config).par_iter().map(f).collect()
}

/// JSON is a single object for an unswept single-item report and a list
/// otherwise; CSV is always one row per item.
fn emit<T: Serialize, R: Serialize>(
    config: &RunConfig,
    items: &[T],
    list: bool,
    row: impl Fn(&T) -> R,
) -> Result<String> {
    match config.output_format {
        OutputFormat::Json => {
            let text = if !list && config.sweep.is_none() && items.len() == 1 {
                serde_json::to_string_pretty(&items[0])
            } else {
                serde_json::to_string_pretty(items)
            };
            text.map(|t| t + "\n").map_err(|e| CliError::Parse(e.to_string()))
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for item in items {
                w.serialize(row(item)).map_err(|e| CliError::Parse(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Parse(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Parse(e.to_string()))
        }
    }
}

fn reject_sweep(config: &RunConfig, what: &str) -> Result<()> {
    match config.sweep {
        Some(_) => Err(CliError::Parse(format!("--sweep is not supported {what}"))),
        None => Ok(()),
    }
}

fn run_bound(config: &RunConfig) -> Result<RunOutput> {
    let reports = if let Some(path) = &config.input_path {
        reject_sweep(config, "with --scenario")?;
        let sc: CloningScenario = parse_json(path)?;
        vec![scenario_bound(&sc)?]
    } else {
        evaluate(config, |p| {
            let (n, l) = p.counts()?;
            let f = Params::real(p.f, "--f")?;
            let phi = p.phi.unwrap_or(1.0);
            let p_minus = p.p_minus.unwrap_or(0.5);
            let sc = CloningScenario::pure_pair(f, phi, p_minus, n, l)?;
            let b = two_state_bound(&sc)?;
            Ok(BoundReport {
                m: 2,
                originals: n,
                copies: l,
                f: Some(f),
                phi: Some(phi),
                p_minus: Some(p_minus),
                bound: b.value,
                perfect_cloning_possible: Some(b.perfect_cloning_possible),
                simplex_bound: None,
            })
        })?
    };
    Ok(RunOutput { text: emit(config, &reports, false, Clone::clone)?, violations: Vec::new() })
}

fn scenario_bound(sc: &CloningScenario) -> Result<BoundReport> {
    let (bound, perfect, simplex) = if sc.len() == 2 {
        let b = two_state_bound(sc)?;
        (b.value, Some(b.perfect_cloning_possible), None)
    } else {
        let joint = if sc.len() <= MAX_VERTEX_STATES { Some(simplex_bound(sc)?.value) } else { None };
        (multi_state_bound(sc)?, None, joint)
    };
    Ok(BoundReport {
        m: sc.len(),
        originals: sc.originals(),
        copies: sc.copies(),
        f: None,
        phi: None,
        p_minus: None,
        bound,
        perfect_cloning_possible: perfect,
        simplex_bound: simplex,
    })
}

fn run_criteria(config: &RunConfig) -> Result<RunOutput> {
    let reports: Vec<CriteriaReport> = evaluate(config, |p| {
        let (n, l) = p.counts()?;
        Ok(criteria(Params::real(p.f, "--f")?, n, l)?)
    })?;
    Ok(RunOutput { text: emit(config, &reports, false, |r| *r)?, violations: Vec::new() })
}

fn run_table1(config: &RunConfig) -> Result<RunOutput> {
    let tables: Vec<Vec<Table1Line>> = evaluate(config, |p| {
        let (n, l) = p.counts()?;
        let eps = p.eps.unwrap_or(1e-3);
        let line = |criterion: String, regime, e: AsymptoticEntry| Table1Line {
            originals: n,
            copies: l,
            eps,
            criterion,
            regime,
            f: e.f,
            value: e.value,
            prediction: e.prediction,
            residual: e.residual,
        };
        Ok(asymptotics_check(n, l, eps)?
            .into_iter()
            .flat_map(|row| {
                [
                    line(row.criterion.to_string(), "small_overlap", row.small_overlap),
                    line(row.criterion.to_string(), "near_identical", row.near_identical),
                ]
            })
            .collect())
    })?;
    let lines: Vec<Table1Line> = tables.into_iter().flatten().collect();
    Ok(RunOutput { text: emit(config, &lines, true, Clone::clone)?, violations: Vec::new() })
}

fn run_simulate(config: &RunConfig) -> Result<RunOutput> {
    let tol = config.tolerances;
    let reports: Vec<CloneRunReport> = evaluate(config, |p| {
        let (n, l) = p.counts()?;
        let alpha0 = Params::real(p.alpha0, "--alpha0")?;
        let theta = p.theta.unwrap_or(0.0);
        let plan = build_circuit(n, l, alpha0, theta)?;
        Ok(simulate_with_priors(&plan, p.p_minus.unwrap_or(0.5), &tol)?)
    })?;
    let mut violations = Vec::new();
    for r in &reports {
        let at = format!("N={} L={} alpha0={} theta={} p_minus={}", r.originals, r.copies, r.alpha0, r.theta, r.p_minus);
        if !r.saturated {
            violations.push(format!("{at}: circuit does not saturate the bound (R = {}, bound = {})", r.achieved_r, r.bound_r));
        }
        if (r.input_overlap - r.output_overlap).abs() > OVERLAP_DRIFT {
            violations.push(format!("{at}: overlap changed from {} to {}", r.input_overlap, r.output_overlap));
        }
    }
    Ok(RunOutput { text: emit(config, &reports, false, |r: &CloneRunReport| SimulateRow::from(r))?, violations })
}

fn run_optimize(config: &RunConfig) -> Result<RunOutput> {
    reject_sweep(config, "for optimize")?;
    let report = match (&config.program_path, &config.input_path) {
        (Some(path), None) => {
            let prog: SimplexProgram = parse_json(path)?;
            let min = simplex_min(&prog)?;
            OptimizeReport {
                m: prog.m,
                simplex_min: min.value,
                point: min.point,
                simplex_bound: None,
                pairwise_bound: None,
                sharpening: None,
            }
        }
        (None, Some(path)) => {
            let sc: CloningScenario = parse_json(path)?;
            let joint = simplex_bound(&sc)?;
            let pairwise = multi_state_bound(&sc)?;
            OptimizeReport {
                m: sc.len(),
                simplex_min: joint.value / 2.0,
                point: joint.deviations,
                simplex_bound: Some(joint.value),
                pairwise_bound: Some(pairwise),
                sharpening: Some(joint.value - pairwise),
            }
        }
        _ => return Err(CliError::Parse("optimize needs exactly one of --program and --scenario".into())),
    };
    let mut violations = Vec::new();
    if let (Some(joint), Some(pairwise)) = (report.simplex_bound, report.pairwise_bound) {
        if joint < pairwise - SHARPENING_SLACK {
            violations.push(format!("joint bound {joint} is below the pairwise sum {pairwise}"));
        }
    }
    Ok(RunOutput { text: emit(config, &[report], false, |r: &OptimizeReport| OptimizeRow::from(r))?, violations })
}

/// Runs one command and returns the emitted report.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    if let Some(s) = &config.sweep {
        let applies = match config.command {
            Command::Bound => matches!(s.param, SweepParam::F | SweepParam::Phi | SweepParam::PMinus),
            Command::Criteria => s.param == SweepParam::F,
            Command::Table1 => s.param == SweepParam::Eps,
            Command::Simulate => matches!(s.param, SweepParam::Alpha0 | SweepParam::Theta | SweepParam::PMinus),
            Command::Optimize => false,
        };
        if !applies {
            return Err(CliError::Parse(format!("{:?} cannot be swept for this command", s.param)));
        }
    }
    match config.command {
        Command::Bound => run_bound(config),
        Command::Criteria => run_criteria(config),
        Command::Table1 => run_table1(config),
        Command::Simulate => run_simulate(config),
        Command::Optimize => run_optimize(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s: Sweep = "p-minus:0.1:0.5:5".parse().unwrap();
        assert_eq!(s.param, SweepParam::PMinus);
        assert_eq!(s.points(), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        for bad in ["f:0:1", "f:0:1:1", "f:a:1:3", "f:0:inf:3", "g:0:1:3", "f:0:1:2.5"] {
            assert!(matches!(bad.parse::<Sweep>(), Err(CliError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn sweeps_only_vary_inputs_the_command_reads() {
        let mut cfg = RunConfig::new(Command::Criteria);
        cfg.params = Params { originals: Some(1), copies: Some(2), ..Params::default() };
        cfg.sweep = Some("theta:0:0.2:3".parse().unwrap());
        assert!(matches!(run(&cfg), Err(CliError::Parse(_))));
    }
}
