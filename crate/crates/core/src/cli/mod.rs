//! Command-line front end.
//!
//! Four subcommands read a JSON race file (see [`RaceSpecFile`]) or inline
//! distributions and print a [`ResultDocument`] as pretty JSON:
//!
//! - `analyze SPEC`: track constant, bookie distribution, fairness.
//! - `optimize SPEC [--beta B] [--mode full|partial|side-info] [--check]`
//!   `[--grid-resolution K] [--output FILE]`: the optimal strategy, its
//!   utility and decomposition, optionally checked against the grid oracle.
//! - `simulate SPEC [--beta B] [-n N] [--seed S] [--output FILE]`: replays
//!   the optimal full-investment strategy and writes the cumulative log-wealth
//!   as CSV (`race,cum_log2_wealth`).
//! - `divergence --p .. --q .. --alpha A` or the conditional form with
//!   `--p-y`, `--p-cond`, `--q-cond` (rows separated by `;`).
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input, 3 incompatible
//! mode or unsupported order, 4 `--check` disagreement (the document is
//! still written).

mod document;
mod format;
mod spec_file;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

pub use document::{
    AllocationDoc, CheckDoc, DecompositionDoc, DivergenceDoc, DivergenceKind, GridCheck, InputEcho,
    KktDoc, MarketSummary, ResultDocument, SimulationDoc, Tolerances,
};
pub use format::{format_f64, to_json, DigitsFormatter, Num};
pub use spec_file::{BetaSpec, HorseSpec, Mode, RaceSpecFile, SideInfoSpec};

use crate::divergence::{cond_renyi_div, renyi_div, Order};
use crate::market::{RaceMarket, SideInfoMarket};
use crate::oracle::{
    grid_search_full, grid_search_limit, grid_search_partial, grid_search_side_info, kkt_residual,
    simulate_growth, summarize_growth, GridSpec,
};
use crate::strategy::{
    dispatch, optimal_side_info, Allocation, BetaParam, ConditionalAllocation, Limit, Optimum,
};
use crate::utility::{
    decompose_full, decompose_kelly, decompose_side_info, doubling_rate, limit_utilities,
    utility_full, utility_side_info,
};
use crate::Error;

/// Largest amount by which a grid point may beat the analytic optimum.
pub const DOMINANCE_TOLERANCE: f64 = 1e-9;
/// Largest amount by which the analytic optimum may beat the best grid point.
pub const GRID_GAP_TOLERANCE: f64 = 5e-3;
/// Largest KKT residual accepted for a partial-investment optimum.
pub const KKT_TOLERANCE: f64 = 1e-8;
/// Agreement between a limiting optimum and its closed-form value.
pub const BOUND_TOLERANCE: f64 = 1e-9;
/// Default `--grid-resolution` is the largest `k ≤ 400` whose grid has at
/// most this many points.
pub const DEFAULT_GRID_POINTS: f64 = 1e6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INCOMPATIBLE: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Incompatible(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INVALID_INPUT,
            CliError::Incompatible(_) => EXIT_INCOMPATIBLE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedOrder | Error::NotApplicable(_) => CliError::Incompatible(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// What a run produced. `main` copies this to the process streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "racebet", version, about = "Risk-sensitive optimal betting on horse races")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Track constant, bookie distribution and fairness of a race.
    Analyze { spec: PathBuf },
    /// Optimal strategy for a risk parameter.
    Optimize {
        spec: PathBuf,
        /// kelly, +inf, -inf or a nonzero decimal; overrides the file.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Compare against the grid oracle (and KKT conditions in partial mode).
        #[arg(long)]
        check: bool,
        #[arg(long)]
        grid_resolution: Option<u32>,
        /// Write the document here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded replay of the optimal full-investment strategy.
    Simulate {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(short = 'n', default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here; the summary then goes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rényi divergence in bits, plain or conditional.
    Divergence {
        /// Comma-separated probabilities.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        /// Order; 1 gives the Kullback-Leibler divergence.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        p_y: Option<String>,
        /// Conditional table, one row per signal: `a,b;c,d`.
        #[arg(long, allow_hyphen_values = true)]
        p_cond: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q_cond: Option<String>,
        /// JSON file with any of `p`, `q`, `alpha`, `p_y`, `p_cond`, `q_cond`.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INVALID_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze { spec } => {
            let doc = cmd_analyze(&load_spec(&spec)?)?;
            emit(&doc, EXIT_OK, None)
        }
        Command::Optimize { spec, beta, mode, check, grid_resolution, output } => {
            let spec = load_spec(&spec)?;
            let options = OptimizeOptions { beta, mode, check, grid_resolution };
            let (doc, code) = cmd_optimize(&spec, &options)?;
            emit(&doc, code, output.as_deref())
        }
        Command::Simulate { spec, beta, n, seed, output } => {
            let spec = load_spec(&spec)?;
            let file = output.as_ref().map(|p| p.display().to_string());
            let (doc, csv) = cmd_simulate(&spec, beta.as_deref(), n, seed, file)?;
            let summary = to_json(&doc).map_err(internal)?;
            match output {
                Some(path) => {
                    write_file(&path, &csv)?;
                    Ok(Outcome { code: EXIT_OK, stdout: summary, stderr: String::new() })
                }
                None => Ok(Outcome { code: EXIT_OK, stdout: csv, stderr: summary }),
            }
        }
        Command::Divergence { p, q, alpha, p_y, p_cond, q_cond, file } => {
            let mut inputs = match file {
                Some(path) => DivergenceInputs::from_file(&path)?,
                None => DivergenceInputs::default(),
            };
            inputs.p = vector_flag("--p", p)?.or(inputs.p);
            inputs.q = vector_flag("--q", q)?.or(inputs.q);
            inputs.p_y = vector_flag("--p-y", p_y)?.or(inputs.p_y);
            inputs.p_cond = table_flag("--p-cond", p_cond)?.or(inputs.p_cond);
            inputs.q_cond = table_flag("--q-cond", q_cond)?.or(inputs.q_cond);
            inputs.alpha = alpha.or(inputs.alpha);
            emit(&cmd_divergence(inputs)?, EXIT_OK, None)
        }
    }
}

fn emit(doc: &ResultDocument, code: i32, output: Option<&Path>) -> Result<Outcome, CliError> {
    let text = to_json(doc).map_err(internal)?;
    let stderr = if code == EXIT_CHECK_FAILED {
        "error: oracle check failed; see check.failures\n".to_string()
    } else {
        String::new()
    };
    match output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome { code, stdout: String::new(), stderr })
        }
        None => Ok(Outcome { code, stdout: text, stderr }),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn internal(e: serde_json::Error) -> CliError {
    CliError::Internal(e.to_string())
}

fn load_spec(path: &Path) -> Result<RaceSpecFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    RaceSpecFile::parse(&text)
}

/// The race without side information. Probabilities come from the horses or,
/// when a joint table is present, from its column sums.
fn race_market_for(spec: &RaceSpecFile) -> Result<RaceMarket, CliError> {
    if spec.side_info.is_some() {
        let joint = spec.side_info_market()?;
        return Ok(RaceMarket::new(joint.horse_probs(), joint.odds().to_vec())?);
    }
    spec.race_market()
}

fn resolve_beta(flag: Option<&str>, spec: &RaceSpecFile) -> Result<BetaParam, CliError> {
    match (flag, &spec.beta) {
        (Some(text), _) => text.parse().map_err(|e| CliError::Input(format!("--beta: {e}"))),
        (None, Some(b)) => b.to_param(),
        (None, None) => Err(CliError::Input("beta: give --beta or a `beta` field in the spec".into())),
    }
}

pub fn cmd_analyze(spec: &RaceSpecFile) -> Result<ResultDocument, CliError> {
    let mut doc = ResultDocument::new("analyze", InputEcho { spec: Some(spec.clone()), ..Default::default() });
    doc.market = Some(match spec.side_info {
        Some(_) => MarketSummary::side_info(&spec.side_info_market()?),
        None => MarketSummary::race(&spec.race_market()?),
    });
    Ok(doc)
}

/// Flags of `optimize`; `None` falls back to the spec file.
#[derive(Debug, Clone, Default)]
pub struct OptimizeOptions {
    pub beta: Option<String>,
    pub mode: Option<Mode>,
    pub check: bool,
    pub grid_resolution: Option<u32>,
}

/// Returns the document and its exit code (0, or 4 when the check failed).
pub fn cmd_optimize(spec: &RaceSpecFile, opts: &OptimizeOptions) -> Result<(ResultDocument, i32), CliError> {
    let beta = resolve_beta(opts.beta.as_deref(), spec)?;
    let mode = opts.mode.or(spec.mode).unwrap_or(Mode::Full);
    let echo = InputEcho {
        spec: Some(spec.clone()),
        beta: Some(beta.to_string()),
        mode: Some(mode),
        grid_resolution: opts.grid_resolution,
        ..Default::default()
    };
    let mut doc = ResultDocument::new("optimize", echo);
    let mut checker = opts.check.then(Checker::default);

    match mode {
        Mode::Full | Mode::Partial => {
            let market = race_market_for(spec)?;
            doc.market = Some(MarketSummary::race(&market));
            match dispatch(&market, beta, mode == Mode::Partial)? {
                Optimum::Full(b) => {
                    let utility = full_utility(&market, &b, beta);
                    doc.allocation = Some(AllocationDoc::full(&b)?);
                    doc.utility_bits = Some(utility.into());
                    doc.decomposition = match beta {
                        BetaParam::Finite(x) if x < 1.0 => Some(decompose_full(&market, &b, x)?.into()),
                        BetaParam::ZeroLimit => Some(decompose_kelly(&market, &b)?.into()),
                        _ => None,
                    };
                    if let Some(c) = checker.as_mut() {
                        c.check_full(&market, beta, utility, opts.grid_resolution)?;
                    }
                }
                Optimum::Partial(sol) => {
                    let beta = sol_beta(beta);
                    doc.allocation = Some(AllocationDoc::partial_solution(&sol)?);
                    doc.utility_bits = Some(sol.utility.into());
                    if sol.allocation.cash() == 0.0 {
                        let b = Allocation::new(sol.allocation.bets().to_vec())?;
                        doc.decomposition = Some(decompose_full(&market, &b, beta)?.into());
                    }
                    if let Some(c) = checker.as_mut() {
                        c.check_partial(&market, beta, &sol, opts.grid_resolution)?;
                    }
                }
            }
        }
        Mode::SideInfo => {
            let market = spec.side_info_market()?;
            let signals = &spec.side_info.as_ref().expect("checked by side_info_market").signals;
            doc.market = Some(MarketSummary::side_info(&market));
            let (table, weights, beta) = match beta {
                BetaParam::Finite(x) if x < 1.0 => {
                    let (table, weights) = optimal_side_info(&market, x)?;
                    (table, Some(weights), x)
                }
                BetaParam::ZeroLimit => (ConditionalAllocation::new(market.conditional())?, None, 0.0),
                other => {
                    return Err(CliError::Incompatible(format!(
                        "side-info mode supports kelly and finite β < 1, not {other}"
                    )))
                }
            };
            let utility = utility_side_info(&market, &table, beta);
            doc.allocation = Some(AllocationDoc::conditional(signals, &table, weights)?);
            doc.utility_bits = Some(utility.into());
            if beta != 0.0 {
                doc.decomposition = Some(decompose_side_info(&market, &table, beta)?.into());
            }
            if let Some(c) = checker.as_mut() {
                c.check_side_info(&market, beta, utility, opts.grid_resolution)?;
            }
        }
    }

    let code = match checker {
        Some(c) => {
            let check = c.finish()?;
            let code = if check.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
            doc.check = Some(check);
            code
        }
        None => EXIT_OK,
    };
    Ok((doc, code))
}

/// `optimal_partial` only runs for finite β.
fn sol_beta(beta: BetaParam) -> f64 {
    match beta {
        BetaParam::Finite(x) => x,
        _ => unreachable!("partial solutions come from finite β"),
    }
}

fn full_utility(market: &RaceMarket, b: &Allocation, beta: BetaParam) -> f64 {
    match beta {
        BetaParam::Finite(x) => utility_full(market, b, x),
        BetaParam::ZeroLimit => doubling_rate(market, b),
        BetaParam::PlusInfinity => limit_utilities(market, b).0,
        BetaParam::MinusInfinity => limit_utilities(market, b).1,
    }
}

/// Resolution used when `--grid-resolution` is absent.
pub fn default_grid_resolution(dimension: usize) -> Option<u32> {
    (2..=400u32)
        .rev()
        .find(|&k| GridSpec::new(k, dimension).is_ok_and(|g| g.n_points() <= DEFAULT_GRID_POINTS))
}

fn grid_for(dimension: usize, resolution: Option<u32>) -> Result<GridSpec, CliError> {
    let k = match resolution {
        Some(k) => k,
        None => default_grid_resolution(dimension).ok_or_else(|| {
            CliError::Incompatible(format!("no grid of resolution ≥ 2 fits {dimension} coordinates"))
        })?,
    };
    GridSpec::new(k, dimension).map_err(|e| CliError::Input(format!("--grid-resolution: {e}")))
}

/// Collects the comparison of an analytic optimum against the oracles.
#[derive(Default)]
struct Checker {
    analytic: f64,
    grid: Option<GridCheck>,
    kkt: Option<KktDoc>,
    bound: Option<f64>,
    failures: Vec<String>,
}

impl Checker {
    fn record_grid(&mut self, grid: &GridSpec, allocation: AllocationDoc, value: f64, analytic: f64) {
        self.analytic = analytic;
        let gap = analytic - value;
        if value > analytic + DOMINANCE_TOLERANCE || value.is_nan() {
            self.failures.push(format!(
                "grid value {} exceeds analytic {} by more than {DOMINANCE_TOLERANCE}",
                format_f64(value),
                format_f64(analytic)
            ));
        }
        // Limits are checked against their closed form instead; the grid
        // need not contain the optimum.
        if self.bound.is_none() && !(gap <= GRID_GAP_TOLERANCE) {
            self.failures.push(format!(
                "analytic {} exceeds grid value {} by more than {GRID_GAP_TOLERANCE}",
                format_f64(analytic),
                format_f64(value)
            ));
        }
        self.grid = Some(GridCheck {
            resolution: grid.resolution(),
            points: grid.n_points(),
            allocation,
            value: value.into(),
            gap: gap.into(),
        });
    }

    fn check_full(
        &mut self,
        market: &RaceMarket,
        beta: BetaParam,
        analytic: f64,
        resolution: Option<u32>,
    ) -> Result<(), CliError> {
        let grid = grid_for(market.len(), resolution)?;
        let limit = match beta {
            BetaParam::PlusInfinity => Some(Limit::PlusInfinity),
            BetaParam::MinusInfinity => Some(Limit::MinusInfinity),
            _ => None,
        };
        let (b, value) = match (limit, beta) {
            (Some(which), _) => {
                let bound = match which {
                    Limit::PlusInfinity => market
                        .odds()
                        .iter()
                        .zip(market.probs())
                        .filter(|(_, &p)| p > 0.0)
                        .map(|(o, _)| *o)
                        .fold(f64::NEG_INFINITY, f64::max)
                        .log2(),
                    Limit::MinusInfinity => market.track_constant().log2(),
                };
                if !((analytic - bound).abs() <= BOUND_TOLERANCE) {
                    self.failures.push(format!(
                        "analytic {} differs from the closed-form limit {}",
                        format_f64(analytic),
                        format_f64(bound)
                    ));
                }
                self.bound = Some(bound);
                grid_search_limit(market, which, &grid)?
            }
            (None, BetaParam::Finite(x)) => grid_search_full(market, x, &grid)?,
            (None, _) => grid_search_full(market, 0.0, &grid)?,
        };
        self.record_grid(&grid, AllocationDoc::full(&b)?, value, analytic);
        Ok(())
    }

    fn check_partial(
        &mut self,
        market: &RaceMarket,
        beta: f64,
        sol: &crate::strategy::PartialSolution,
        resolution: Option<u32>,
    ) -> Result<(), CliError> {
        let grid = grid_for(market.len() + 1, resolution)?;
        let (b, value) = grid_search_partial(market, beta, &grid)?;
        let support = b.bets().iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(i, _)| i).collect();
        self.record_grid(&grid, AllocationDoc::partial(&b, support)?, value, sol.utility);
        let kkt = kkt_residual(market, beta, &sol.allocation, sol.gamma_cap)?;
        if !(kkt.max_gap() < KKT_TOLERANCE) {
            self.failures.push(format!(
                "KKT residual {} is not below {KKT_TOLERANCE}",
                format_f64(kkt.max_gap())
            ));
        }
        self.kkt = Some(kkt.into());
        Ok(())
    }

    fn check_side_info(
        &mut self,
        market: &SideInfoMarket,
        beta: f64,
        analytic: f64,
        resolution: Option<u32>,
    ) -> Result<(), CliError> {
        let grid = grid_for(market.n_horses(), resolution)?;
        let (table, value) = grid_search_side_info(market, beta, &grid)?;
        let signals: Vec<String> = (0..market.n_signals()).map(|y| y.to_string()).collect();
        self.record_grid(&grid, AllocationDoc::conditional(&signals, &table, None)?, value, analytic);
        Ok(())
    }

    fn finish(self) -> Result<CheckDoc, CliError> {
        let grid = self.grid.ok_or_else(|| CliError::Internal("check ran without a grid".into()))?;
        Ok(CheckDoc {
            passed: self.failures.is_empty(),
            tolerances: Tolerances {
                dominance: DOMINANCE_TOLERANCE,
                grid_gap: GRID_GAP_TOLERANCE,
                kkt: KKT_TOLERANCE,
                bound: BOUND_TOLERANCE,
            },
            analytic: self.analytic.into(),
            grid,
            kkt: self.kkt,
            bound: self.bound.map(Num),
            failures: self.failures,
        })
    }
}

/// Returns the summary document and the trajectory CSV.
pub fn cmd_simulate(
    spec: &RaceSpecFile,
    beta: Option<&str>,
    n: usize,
    seed: u64,
    trajectory_file: Option<String>,
) -> Result<(ResultDocument, String), CliError> {
    if n == 0 {
        return Err(CliError::Input("-n: at least one race is required".into()));
    }
    let beta = resolve_beta(beta, spec)?;
    let market = race_market_for(spec)?;
    let b = match dispatch(&market, beta, false)? {
        Optimum::Full(b) => b,
        Optimum::Partial(_) => unreachable!("partial investment was not requested"),
    };
    let trajectory = simulate_growth(&market, &b, n, seed);
    let summary = summarize_growth(&market, &b, &trajectory);

    let mut csv = String::with_capacity(24 * (n + 1));
    csv.push_str("race,cum_log2_wealth\n");
    for (i, w) in trajectory.log_wealth.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", i + 1, format_f64(*w)));
    }

    let echo = InputEcho {
        spec: Some(spec.clone()),
        beta: Some(beta.to_string()),
        n: Some(n),
        seed: Some(seed),
        ..Default::default()
    };
    let mut doc = ResultDocument::new("simulate", echo);
    doc.market = Some(MarketSummary::race(&market));
    doc.allocation = Some(AllocationDoc::full(&b)?);
    doc.utility_bits = Some(full_utility(&market, &b, beta).into());
    doc.simulation = Some(SimulationDoc::new(&summary, seed, trajectory_file));
    Ok((doc, csv))
}

/// Inputs of `divergence`, from flags or a JSON file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergenceInputs {
    pub p: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub p_y: Option<Vec<f64>>,
    pub p_cond: Option<Vec<Vec<f64>>>,
    pub q_cond: Option<Vec<Vec<f64>>>,
}

impl DivergenceInputs {
    fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Input(format!("{path}: {}", e.into_inner()))
        })
    }
}

pub fn cmd_divergence(inputs: DivergenceInputs) -> Result<ResultDocument, CliError> {
    let alpha = inputs.alpha.ok_or_else(|| CliError::Input("--alpha is required".into()))?;
    let order = Order::new(alpha).map_err(|e| CliError::Input(format!("--alpha: {e}")))?;
    let echo = InputEcho {
        p: inputs.p.clone(),
        q: inputs.q.clone(),
        alpha: Some(alpha),
        p_y: inputs.p_y.clone(),
        p_cond: inputs.p_cond.clone(),
        q_cond: inputs.q_cond.clone(),
        ..Default::default()
    };
    let mut doc = ResultDocument::new("divergence", echo);
    let conditional = inputs.p_cond.is_some() || inputs.q_cond.is_some() || inputs.p_y.is_some();
    let (kind, bits) = if conditional {
        let missing = |flag: &str| CliError::Input(format!("{flag} is required for the conditional form"));
        let p_cond = inputs.p_cond.ok_or_else(|| missing("--p-cond"))?;
        let q_cond = inputs.q_cond.ok_or_else(|| missing("--q-cond"))?;
        let p_y = inputs.p_y.ok_or_else(|| missing("--p-y"))?;
        (DivergenceKind::Conditional, cond_renyi_div(&p_cond, &q_cond, &p_y, order)?)
    } else {
        let p = inputs.p.ok_or_else(|| CliError::Input("--p is required".into()))?;
        let q = inputs.q.ok_or_else(|| CliError::Input("--q is required".into()))?;
        let kind = match order {
            Order::One => DivergenceKind::KullbackLeibler,
            Order::Alpha(_) => DivergenceKind::Renyi,
        };
        (kind, renyi_div(&p, &q, order)?)
    };
    doc.divergence = Some(DivergenceDoc { kind, alpha, bits: bits.into() });
    Ok(doc)
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("{flag}: `{}` is not a number", s.trim())))
        })
        .collect()
}

fn vector_flag(flag: &str, text: Option<String>) -> Result<Option<Vec<f64>>, CliError> {
    text.map(|t| parse_list(flag, &t)).transpose()
}

fn table_flag(flag: &str, text: Option<String>) -> Result<Option<Vec<Vec<f64>>>, CliError> {
    text.map(|t| t.split(';').map(|row| parse_list(flag, row)).collect()).transpose()
}
