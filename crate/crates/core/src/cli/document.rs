//! The JSON document printed by every command.
//!
//! Fields that do not apply to a command are omitted. Scalars that can be
//! infinite use [`Num`], so `±∞` appear as the strings `"inf"` and `"-inf"`.

use serde::{Deserialize, Serialize};

use super::format::Num;
use super::spec_file::{Mode, RaceSpecFile};
use super::CliError;
use crate::market::{FairnessTag, RaceMarket, SideInfoMarket};
use crate::oracle::{GrowthSummary, KktReport};
use crate::strategy::{Allocation, ConditionalAllocation, PartialAllocation, PartialSolution};
use crate::utility::DecompositionReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    pub input: InputEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub market: Option<MarketSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocation: Option<AllocationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility_bits: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<DivergenceDoc>,
}

impl ResultDocument {
    pub fn new(command: &str, input: InputEcho) -> Self {
        Self {
            command: command.into(),
            input,
            market: None,
            allocation: None,
            utility_bits: None,
            decomposition: None,
            check: None,
            simulation: None,
            divergence: None,
        }
    }
}

/// The inputs as understood after defaults were applied.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<RaceSpecFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_cond: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_cond: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketSummary {
    pub n_horses: usize,
    pub probs: Vec<f64>,
    pub odds: Vec<f64>,
    pub track_constant: f64,
    pub bookie_distribution: Vec<f64>,
    pub fairness: FairnessTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_signals: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal_probs: Option<Vec<f64>>,
}

impl MarketSummary {
    pub fn race(market: &RaceMarket) -> Self {
        Self {
            n_horses: market.len(),
            probs: market.probs().to_vec(),
            odds: market.odds().to_vec(),
            track_constant: market.track_constant(),
            bookie_distribution: market.bookie_distribution(),
            fairness: market.classify_fairness().tag,
            n_signals: None,
            signal_probs: None,
        }
    }

    pub fn side_info(market: &SideInfoMarket) -> Self {
        Self {
            n_horses: market.n_horses(),
            probs: market.horse_probs(),
            odds: market.odds().to_vec(),
            track_constant: market.track_constant(),
            bookie_distribution: market.bookie_distribution(),
            fairness: market.classify_fairness().tag,
            n_signals: Some(market.n_signals()),
            signal_probs: Some(market.signal_probs()),
        }
    }
}

/// A strategy, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AllocationDoc {
    Full {
        bets: Vec<f64>,
    },
    Partial {
        cash: f64,
        bets: Vec<f64>,
        support: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma_cap: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gammas: Option<Vec<f64>>,
    },
    Conditional {
        signals: Vec<String>,
        table: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signal_weights: Option<Vec<f64>>,
    },
}

impl AllocationDoc {
    /// Each constructor re-validates the numbers it is about to emit.
    pub fn full(b: &Allocation) -> Result<Self, CliError> {
        Allocation::new(b.bets().to_vec()).map_err(revalidation)?;
        Ok(Self::Full { bets: b.bets().to_vec() })
    }

    pub fn partial(b: &PartialAllocation, support: Vec<usize>) -> Result<Self, CliError> {
        PartialAllocation::new(b.cash(), b.bets().to_vec()).map_err(revalidation)?;
        Ok(Self::Partial { cash: b.cash(), bets: b.bets().to_vec(), support, gamma_cap: None, gammas: None })
    }

    pub fn partial_solution(sol: &PartialSolution) -> Result<Self, CliError> {
        let mut doc = Self::partial(&sol.allocation, sol.support.clone())?;
        if let Self::Partial { gamma_cap, gammas, .. } = &mut doc {
            *gamma_cap = sol.gamma_cap;
            *gammas = sol.gammas.clone();
        }
        Ok(doc)
    }

    pub fn conditional(
        signals: &[String],
        b: &ConditionalAllocation,
        signal_weights: Option<Vec<f64>>,
    ) -> Result<Self, CliError> {
        ConditionalAllocation::new(b.table().to_vec()).map_err(revalidation)?;
        Ok(Self::Conditional { signals: signals.to_vec(), table: b.table().to_vec(), signal_weights })
    }
}

fn revalidation(e: crate::Error) -> CliError {
    CliError::Internal(format!("optimizer produced an invalid allocation: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub log_c: Num,
    pub bookie_term: Num,
    pub gambler_term: Num,
    pub total: Num,
    pub direct: Num,
    pub residual: Num,
    pub interior: bool,
}

impl From<DecompositionReport> for DecompositionDoc {
    fn from(r: DecompositionReport) -> Self {
        Self {
            log_c: r.log_c.into(),
            bookie_term: r.bookie_term.into(),
            gambler_term: r.gambler_term.into(),
            total: r.total.into(),
            direct: r.direct.into(),
            residual: r.residual.into(),
            interior: r.interior,
        }
    }
}

/// Outcome of `optimize --check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub passed: bool,
    pub tolerances: Tolerances,
    pub analytic: Num,
    pub grid: GridCheck,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kkt: Option<KktDoc>,
    /// Closed-form value of the limiting optimum, for `β = ±∞`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Num>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// How far the grid may exceed the analytic value.
    pub dominance: f64,
    /// How far the analytic value may exceed the grid (discretization).
    pub grid_gap: f64,
    pub kkt: f64,
    /// Agreement with the closed-form limit.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCheck {
    pub resolution: u32,
    pub points: f64,
    pub allocation: AllocationDoc,
    pub value: Num,
    /// `analytic − value`.
    pub gap: Num,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktDoc {
    pub mu: Num,
    pub stationarity_gap: Num,
    pub feasibility_gap: Num,
    pub cash_stationarity_gap: Num,
    pub cash_feasibility_gap: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_gamma_gap: Option<Num>,
    pub max_gap: Num,
}

impl From<KktReport> for KktDoc {
    fn from(r: KktReport) -> Self {
        Self {
            mu: r.mu.into(),
            stationarity_gap: r.stationarity_gap.into(),
            feasibility_gap: r.feasibility_gap.into(),
            cash_stationarity_gap: r.cash_stationarity_gap.into(),
            cash_feasibility_gap: r.cash_feasibility_gap.into(),
            mu_gamma_gap: r.mu_gamma_gap.map(Num),
            max_gap: r.max_gap().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDoc {
    pub n_races: usize,
    pub seed: u64,
    pub growth_rate: Num,
    pub std_error: Num,
    pub band_low: Num,
    pub band_high: Num,
    pub doubling_rate: Num,
    pub within_band: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory_file: Option<String>,
}

impl SimulationDoc {
    pub fn new(s: &GrowthSummary, seed: u64, trajectory_file: Option<String>) -> Self {
        Self {
            n_races: s.n_races,
            seed,
            growth_rate: s.growth_rate.into(),
            std_error: s.std_error.into(),
            band_low: s.band_low.into(),
            band_high: s.band_high.into(),
            doubling_rate: s.doubling_rate.into(),
            within_band: s.within_band,
            trajectory_file,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceKind {
    Renyi,
    KullbackLeibler,
    Conditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceDoc {
    pub kind: DivergenceKind,
    pub alpha: f64,
    pub bits: Num,
}
