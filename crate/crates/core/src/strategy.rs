//! Optimal betting strategies for every risk parameter β.
//!
//! | β                 | optimum                                            |
//! |-------------------|----------------------------------------------------|
//! | β → −∞            | `b_i = c / o_i`, a constant payoff of `c`          |
//! | β < 1, β ≠ 0      | `g_i ∝ p_i^{1/(1−β)} o_i^{β/(1−β)}`                 |
//! | β → 0             | proportional betting `b = p`                       |
//! | β ≥ 1             | everything on a horse maximizing `p_i^{1/β} o_i`   |
//! | β → +∞            | everything on a horse with the largest odds        |
//!
//! Ties between horses always resolve to the smallest index.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::market::{RaceMarket, SideInfoMarket};
use crate::numeric::{argmax_first, ln0, log_sum_exp, normalize_log_weights};
use crate::utility::utility_partial;
use crate::{Bits, Error, Result};

/// Largest `|β|` accepted as a finite parameter.
pub const BETA_MAGNITUDE_CAP: f64 = 1e6;

/// Closed-form optimizers need `β ≤ 1 − BETA_GAP_BELOW_ONE`.
pub const BETA_GAP_BELOW_ONE: f64 = 1e-9;

/// Tolerance used when validating caller-supplied allocations.
const ALLOCATION_TOLERANCE: f64 = 1e-9;

/// The risk parameter, including its three limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaParam {
    Finite(f64),
    /// β → 0, the doubling rate.
    ZeroLimit,
    PlusInfinity,
    MinusInfinity,
}

impl BetaParam {
    pub fn finite(beta: f64) -> Result<Self> {
        if beta == 0.0 || !beta.is_finite() || beta.abs() > BETA_MAGNITUDE_CAP {
            return Err(Error::BetaOutOfRange {
                beta,
                range: "nonzero with |β| ≤ 1e6 (use kelly, +inf or -inf for the limits)",
            });
        }
        Ok(Self::Finite(beta))
    }
}

impl FromStr for BetaParam {
    type Err = Error;

    /// Accepts `kelly`, `+inf`, `inf`, `-inf`, or a nonzero decimal.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kelly" => Ok(Self::ZeroLimit),
            "+inf" | "inf" | "+infinity" | "infinity" => Ok(Self::PlusInfinity),
            "-inf" | "-infinity" => Ok(Self::MinusInfinity),
            other => {
                let beta: f64 = other.parse().map_err(|_| Error::BetaOutOfRange {
                    beta: f64::NAN,
                    range: "kelly, +inf, -inf, or a nonzero decimal",
                })?;
                Self::finite(beta)
            }
        }
    }
}

impl std::fmt::Display for BetaParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(b) => write!(f, "{b}"),
            Self::ZeroLimit => f.write_str("kelly"),
            Self::PlusInfinity => f.write_str("+inf"),
            Self::MinusInfinity => f.write_str("-inf"),
        }
    }
}

/// Which end of the β axis for [`optimal_limit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    PlusInfinity,
    MinusInfinity,
}

/// Fractions of wealth bet on each horse; all wealth is invested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    bets: Vec<f64>,
}

impl Allocation {
    /// Validates a probability vector, renormalizing small rounding errors.
    pub fn new(bets: Vec<f64>) -> Result<Self> {
        if bets.is_empty() {
            return Err(Error::InvalidAllocation("no bets".into()));
        }
        if let Some((i, b)) = bets.iter().enumerate().find(|(_, b)| !(**b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidAllocation(format!("bets[{i}] = {b} is negative")));
        }
        let sum: f64 = bets.iter().sum();
        if (sum - 1.0).abs() > ALLOCATION_TOLERANCE {
            return Err(Error::InvalidAllocation(format!("bets sum to {sum}")));
        }
        Ok(Self { bets: bets.into_iter().map(|b| b / sum).collect() })
    }

    /// Everything on horse `index`.
    pub fn point_mass(len: usize, index: usize) -> Self {
        let mut bets = vec![0.0; len];
        bets[index] = 1.0;
        Self { bets }
    }

    pub fn bets(&self) -> &[f64] {
        &self.bets
    }

    pub fn len(&self) -> usize {
        self.bets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bets.is_empty()
    }

    /// Every horse receives a positive bet.
    pub fn is_interior(&self) -> bool {
        self.bets.iter().all(|&b| b > 0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.bets
    }

    pub(crate) fn from_normalized(bets: Vec<f64>) -> Self {
        debug_assert!((bets.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        Self { bets }
    }
}

/// Bets plus a withheld cash fraction `b_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialAllocation {
    cash: f64,
    bets: Vec<f64>,
}

impl PartialAllocation {
    pub fn new(cash: f64, bets: Vec<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&cash) {
            return Err(Error::InvalidAllocation(format!("cash = {cash} outside [0, 1]")));
        }
        if let Some((i, b)) = bets.iter().enumerate().find(|(_, b)| !(**b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidAllocation(format!("bets[{i}] = {b} is negative")));
        }
        let sum = cash + bets.iter().sum::<f64>();
        if (sum - 1.0).abs() > ALLOCATION_TOLERANCE {
            return Err(Error::InvalidAllocation(format!("cash and bets sum to {sum}")));
        }
        Ok(Self { cash: cash / sum, bets: bets.into_iter().map(|b| b / sum).collect() })
    }

    /// Invest everything according to `allocation`.
    pub fn fully_invested(allocation: &Allocation) -> Self {
        Self { cash: 0.0, bets: allocation.bets().to_vec() }
    }

    pub fn cash(&self) -> f64 {
        self.cash
    }

    pub fn bets(&self) -> &[f64] {
        &self.bets
    }
}

/// One betting PMF per signal value, `b(·|y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalAllocation {
    table: Vec<Vec<f64>>,
}

impl ConditionalAllocation {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let rows = table
            .into_iter()
            .enumerate()
            .map(|(y, row)| {
                Allocation::new(row)
                    .map(Allocation::into_vec)
                    .map_err(|e| Error::InvalidAllocation(format!("row {y}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { table: rows })
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.table[y]
    }
}

/// Optimum of the partial-investment problem.
///
/// When the odds are subfair the allocation has the threshold form
/// `b_i = γ_i b_0` with `b_0 = 1/(1 + Σ γ_i)`, and `gamma_cap`/`gammas` hold
/// `Γ` and the `γ_i`. With `c ≥ 1` everything is invested and both are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSolution {
    pub allocation: PartialAllocation,
    /// Horses receiving a positive bet, in index order.
    pub support: Vec<usize>,
    pub gamma_cap: Option<f64>,
    pub gammas: Option<Vec<f64>>,
    pub utility: Bits,
}

/// Result of [`dispatch`].
#[derive(Debug, Clone, PartialEq)]
pub enum Optimum {
    Full(Allocation),
    Partial(PartialSolution),
}

/// Maximizer of `U_β` over full-investment strategies for `β < 1`, `β ≠ 0`.
pub fn optimal_full(market: &RaceMarket, beta: f64) -> Result<Allocation> {
    check_regular_beta(beta)?;
    let log_w = regular_log_weights(market.probs(), market.odds(), beta);
    Ok(Allocation::from_normalized(normalize_log_weights(&log_w)))
}

/// Proportional betting, optimal for the doubling rate.
pub fn kelly(market: &RaceMarket) -> Allocation {
    Allocation::from_normalized(market.probs().to_vec())
}

/// For `β ≥ 1`: all wealth on the first horse maximizing `p_i^{1/β} o_i`.
pub fn optimal_degenerate(market: &RaceMarket, beta: f64) -> Result<Allocation> {
    if !(beta >= 1.0) || !beta.is_finite() {
        return Err(Error::BetaOutOfRange { beta, range: "[1, ∞)" });
    }
    let best = argmax_first(
        market.probs().iter().zip(market.odds()).map(|(p, o)| p.ln() / beta + o.ln()),
    );
    Ok(Allocation::point_mass(market.len(), best))
}

/// Maximizer of the limiting utility at β → ±∞.
pub fn optimal_limit(market: &RaceMarket, which: Limit) -> Allocation {
    match which {
        Limit::PlusInfinity => {
            let best = argmax_first(market.odds().iter().copied());
            Allocation::point_mass(market.len(), best)
        }
        Limit::MinusInfinity => Allocation::from_normalized(market.bookie_distribution()),
    }
}

/// Optimal conditional strategy `g(x|y)` given side information, plus the
/// auxiliary signal weights `g(y)` that appear in the decomposition.
pub fn optimal_side_info(
    market: &SideInfoMarket,
    beta: f64,
) -> Result<(ConditionalAllocation, Vec<f64>)> {
    check_regular_beta(beta)?;
    let mut rows = Vec::with_capacity(market.n_signals());
    let mut log_signal = Vec::with_capacity(market.n_signals());
    for (row, py) in market.conditional().iter().zip(market.signal_probs()) {
        let log_w = regular_log_weights(row, market.odds(), beta);
        let ln_z = log_sum_exp(log_w.iter().copied());
        assert!(ln_z.is_finite(), "conditional row with no mass");
        rows.push(normalize_log_weights(&log_w));
        log_signal.push(py.ln() + (1.0 - beta) * ln_z);
    }
    Ok((ConditionalAllocation { table: rows }, normalize_log_weights(&log_signal)))
}

/// Best strategy when part of the wealth may be held back as cash.
///
/// With `c ≥ 1` investing everything is optimal and the full-investment
/// optimum is returned. Otherwise horses are ranked by `p_i o_i` and every
/// prefix of that ranking is tried as the support.
pub fn optimal_partial(market: &RaceMarket, beta: f64) -> Result<PartialSolution> {
    check_regular_beta(beta)?;
    if market.classify_fairness().is_fair_or_better() {
        let full = PartialAllocation::fully_invested(&optimal_full(market, beta)?);
        let utility = utility_partial(market, &full, beta);
        return Ok(PartialSolution {
            support: support_of(full.bets()),
            allocation: full,
            gamma_cap: None,
            gammas: None,
            utility,
        });
    }

    let returns = market.expected_returns();
    let mut order: Vec<usize> = (0..market.len()).collect();
    order.sort_by(|&a, &b| returns[b].total_cmp(&returns[a]));

    let mut best: Option<PartialSolution> = None;
    let (mut prob_in, mut inv_odds_in) = (0.0, 0.0);
    for k in 0..=market.len() {
        if k > 0 {
            let i = order[k - 1];
            prob_in += market.probs()[i];
            inv_odds_in += 1.0 / market.odds()[i];
        }
        let Some(candidate) = threshold_candidate(market, beta, 1.0 - prob_in, 1.0 - inv_odds_in)
        else {
            continue;
        };
        if best.as_ref().is_none_or(|b| candidate.utility > b.utility) {
            best = Some(candidate);
        }
    }
    // the empty support always yields Γ = 1
    Ok(best.expect("the empty support is always a valid candidate"))
}

/// Allocation induced by a candidate support through `Γ`, or `None` when the
/// candidate's formulas are undefined.
fn threshold_candidate(
    market: &RaceMarket,
    beta: f64,
    numerator: f64,
    denominator: f64,
) -> Option<PartialSolution> {
    if !(numerator > 0.0) || !(denominator > 0.0) {
        return None;
    }
    let gamma_cap = numerator / denominator;
    let ln_cap = gamma_cap.ln();
    let gammas: Vec<f64> = market
        .probs()
        .iter()
        .zip(market.odds())
        .map(|(p, o)| {
            let scaled = ((p.ln() + beta * o.ln() - ln_cap) / (1.0 - beta)).exp();
            (scaled - 1.0 / o).max(0.0)
        })
        .collect();
    if !gamma_cap.is_finite() || gammas.iter().any(|g| !g.is_finite()) {
        return None;
    }
    let cash = 1.0 / (1.0 + gammas.iter().sum::<f64>());
    let bets: Vec<f64> = gammas.iter().map(|g| g * cash).collect();
    let allocation = PartialAllocation { cash, bets };
    let utility = utility_partial(market, &allocation, beta);
    if !utility.is_finite() {
        return None;
    }
    Some(PartialSolution {
        support: support_of(&allocation.bets),
        allocation,
        gamma_cap: Some(gamma_cap),
        gammas: Some(gammas),
        utility,
    })
}

/// Converts withheld cash into the risk-free bet `r`: `b'_i = r_i b_0 + b_i`.
/// Never lowers the utility when `c ≥ 1`.
pub fn prop7_transform(market: &RaceMarket, partial: &PartialAllocation) -> Result<Allocation> {
    if !market.classify_fairness().is_fair_or_better() {
        return Err(Error::NotApplicable("moving cash into bets requires c ≥ 1"));
    }
    if partial.bets().len() != market.len() {
        return Err(Error::LengthMismatch { expected: market.len(), actual: partial.bets().len() });
    }
    let r = market.bookie_distribution();
    let bets = r.iter().zip(partial.bets()).map(|(ri, bi)| ri * partial.cash() + bi).collect();
    Allocation::new(bets)
}

/// Routes to the optimizer matching `beta`.
///
/// With `partial_allowed`, finite `β < 1` goes to [`optimal_partial`]. Other
/// regimes are only supported with partial investment when `c ≥ 1`, where
/// investing everything is optimal.
pub fn dispatch(market: &RaceMarket, beta: BetaParam, partial_allowed: bool) -> Result<Optimum> {
    if partial_allowed {
        if let BetaParam::Finite(b) = beta {
            if b < 1.0 {
                return optimal_partial(market, b).map(Optimum::Partial);
            }
        }
        if !market.classify_fairness().is_fair_or_better() {
            return Err(Error::NotApplicable(
                "partial investment with subfair odds is only solved for finite β < 1",
            ));
        }
    }
    let allocation = match beta {
        BetaParam::ZeroLimit => kelly(market),
        BetaParam::PlusInfinity => optimal_limit(market, Limit::PlusInfinity),
        BetaParam::MinusInfinity => optimal_limit(market, Limit::MinusInfinity),
        BetaParam::Finite(b) if b >= 1.0 => optimal_degenerate(market, b)?,
        BetaParam::Finite(b) => optimal_full(market, b)?,
    };
    Ok(Optimum::Full(allocation))
}

/// `(ln p_i + β ln o_i) / (1 − β)`; `−∞` for horses with zero probability.
fn regular_log_weights(probs: &[f64], odds: &[f64], beta: f64) -> Vec<f64> {
    probs
        .iter()
        .zip(odds)
        .map(|(&p, &o)| (ln0(p) + beta * o.ln()) / (1.0 - beta))
        .collect()
}

pub(crate) fn check_regular_beta(beta: f64) -> Result<()> {
    if beta == 0.0 || !(beta > -BETA_MAGNITUDE_CAP) || !(beta < 1.0 - BETA_GAP_BELOW_ONE) {
        return Err(Error::BetaOutOfRange { beta, range: "(−1e6, 0) ∪ (0, 1 − 1e-9)" });
    }
    Ok(())
}

fn support_of(bets: &[f64]) -> Vec<usize> {
    bets.iter().enumerate().filter(|(_, &b)| b > 0.0).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utility::{limit_utilities, utility_full};

    fn market(p: &[f64], o: &[f64]) -> RaceMarket {
        RaceMarket::new(p.to_vec(), o.to_vec()).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn optimal_full_examples() {
        let g = optimal_full(&market(&[0.5, 0.5], &[2.0, 2.0]), 0.5).unwrap();
        assert_close(g.bets(), &[0.5, 0.5], 1e-15);
        let g = optimal_full(&market(&[0.6, 0.4], &[2.0, 2.0]), 0.5).unwrap();
        assert_close(g.bets(), &[9.0 / 13.0, 4.0 / 13.0], 1e-15);
        let g = optimal_full(&market(&[0.6, 0.4], &[2.0, 2.0]), -1.0).unwrap();
        let (a, b) = (0.6f64.sqrt(), 0.4f64.sqrt());
        assert_close(g.bets(), &[a / (a + b), b / (a + b)], 1e-15);
        assert!((g.bets()[0] - 0.5505102572168219).abs() < 1e-12);
    }

    #[test]
    fn optimal_full_rejects_out_of_range_beta() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        for beta in [0.0, 1.0, 2.0, 1.0 - 1e-10, -2e6, f64::NAN] {
            assert!(matches!(optimal_full(&m, beta), Err(Error::BetaOutOfRange { .. })), "{beta}");
        }
        assert!(optimal_full(&m, 1.0 - 1e-8).is_ok());
    }

    #[test]
    fn optimal_full_near_one_concentrates_without_overflow() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        let g = optimal_full(&m, 1.0 - 1e-8).unwrap();
        assert!(g.bets().iter().all(|b| b.is_finite()));
        assert!((g.bets()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kelly_is_proportional() {
        for p in [vec![0.5, 0.5], vec![0.6, 0.4], vec![0.5, 0.3, 0.2]] {
            let o = vec![3.0; p.len()];
            assert_eq!(kelly(&market(&p, &o)).bets(), &p[..]);
        }
    }

    #[test]
    fn degenerate_examples() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        let b = optimal_degenerate(&m, 1.0).unwrap();
        assert_eq!(b.bets(), &[1.0, 0.0]);
        assert!((utility_full(&m, &b, 1.0) - 1.2f64.log2()).abs() < 1e-15);
        assert!((1.2f64.log2() - 0.26303440583379).abs() < 1e-12);

        let b = optimal_degenerate(&market(&[0.5, 0.5], &[2.0, 2.0]), 1.0).unwrap();
        assert_eq!(b.bets(), &[1.0, 0.0]);

        let b = optimal_degenerate(&market(&[0.1, 0.9], &[100.0, 1.0]), 2.0).unwrap();
        assert_eq!(b.bets(), &[1.0, 0.0]);

        assert!(optimal_degenerate(&m, 0.5).is_err());
    }

    #[test]
    fn limit_examples() {
        let m = market(&[0.2, 0.3, 0.5], &[2.0, 4.0, 8.0]);
        let best = optimal_limit(&m, Limit::PlusInfinity);
        assert_eq!(best.bets(), &[0.0, 0.0, 1.0]);
        assert!((limit_utilities(&m, &best).0 - 3.0).abs() < 1e-15);

        let worst = optimal_limit(&m, Limit::MinusInfinity);
        assert_close(worst.bets(), &[4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0], 1e-15);
        let (_, lo) = limit_utilities(&m, &worst);
        assert!((lo - (8.0f64 / 7.0).log2()).abs() < 1e-14);
        assert!(((8.0f64 / 7.0).log2() - 0.19264507794239583).abs() < 1e-15);

        let fair = market(&[0.3, 0.7], &[2.0, 2.0]);
        let w = optimal_limit(&fair, Limit::MinusInfinity);
        for (b, o) in w.bets().iter().zip(fair.odds()) {
            assert_eq!(b * o, 1.0);
        }
    }

    #[test]
    fn side_info_rows_for_uninformative_signal() {
        let m = market(&[0.6, 0.3, 0.1], &[2.0, 3.5, 9.0]);
        let g = optimal_full(&m, 0.4).unwrap();
        let si = SideInfoMarket::independent(&m, &[0.25, 0.75]).unwrap();
        let (table, gy) = optimal_side_info(&si, 0.4).unwrap();
        for row in table.table() {
            assert_close(row, g.bets(), 1e-14);
        }
        assert_close(&gy, &[0.25, 0.75], 1e-14);

        let single = SideInfoMarket::independent(&m, &[1.0]).unwrap();
        let (table, gy) = optimal_side_info(&single, 0.4).unwrap();
        assert_close(table.row(0), g.bets(), 1e-14);
        assert_eq!(gy, vec![1.0]);
    }

    #[test]
    fn perfect_side_info_bets_on_the_known_winner() {
        let si = SideInfoMarket::new(
            vec![vec![0.5, 0.0, 0.0], vec![0.0, 0.3, 0.0], vec![0.0, 0.0, 0.2]],
            vec![1.5, 4.0, 6.0],
        )
        .unwrap();
        let (table, _) = optimal_side_info(&si, 0.5).unwrap();
        for (y, row) in table.table().iter().enumerate() {
            let mut e = vec![0.0; 3];
            e[y] = 1.0;
            assert_eq!(row, &e);
        }
    }

    #[test]
    fn partial_example_subfair() {
        let m = market(&[0.9, 0.1], &[1.5, 1.5]);
        let sol = optimal_partial(&m, 0.5).unwrap();
        assert_eq!(sol.support, vec![0]);
        assert!((sol.gamma_cap.unwrap() - 0.3).abs() < 1e-14);
        let gammas = sol.gammas.as_ref().unwrap();
        assert!((gammas[0] - 77.0 / 6.0).abs() < 1e-12);
        assert_eq!(gammas[1], 0.0);
        // b_0 = 1 / (1 + 77/6) = 6/83
        assert!((sol.allocation.cash() - 6.0 / 83.0).abs() < 1e-14);
        assert!((sol.allocation.bets()[0] - 77.0 / 83.0).abs() < 1e-14);
        assert_eq!(sol.allocation.bets()[1], 0.0);
    }

    #[test]
    fn partial_all_cash_when_no_horse_beats_threshold() {
        let m = market(&[0.5, 0.5], &[1.0, 1.0]);
        let sol = optimal_partial(&m, 0.5).unwrap();
        assert_eq!(sol.gamma_cap, Some(1.0));
        assert_eq!(sol.allocation.cash(), 1.0);
        assert!(sol.support.is_empty());
        assert_eq!(sol.utility, 0.0);
    }

    #[test]
    fn partial_invests_everything_when_fair() {
        for o in [[2.0, 2.0], [2.0, 2.5]] {
            let m = market(&[0.7, 0.3], &o);
            let sol = optimal_partial(&m, 0.5).unwrap();
            assert_eq!(sol.allocation.cash(), 0.0);
            assert_eq!(sol.allocation.bets(), optimal_full(&m, 0.5).unwrap().bets());
            assert!(sol.gamma_cap.is_none());
        }
    }

    #[test]
    fn cash_transform_examples() {
        let m = market(&[0.5, 0.5], &[2.0, 2.0]);
        let all_cash = PartialAllocation::new(1.0, vec![0.0, 0.0]).unwrap();
        assert_eq!(prop7_transform(&m, &all_cash).unwrap().bets(), &[0.5, 0.5]);
        let no_cash = PartialAllocation::new(0.0, vec![0.3, 0.7]).unwrap();
        assert_eq!(prop7_transform(&m, &no_cash).unwrap().bets(), &[0.3, 0.7]);
        let mixed = PartialAllocation::new(0.4, vec![0.6, 0.0]).unwrap();
        let b = prop7_transform(&m, &mixed).unwrap();
        assert_close(b.bets(), &[0.8, 0.2], 1e-15);
        for beta in [-2.0, -0.5, 0.5, 1.0, 2.0] {
            let before = utility_partial(&m, &mixed, beta);
            let after = utility_full(&m, &b, beta);
            assert!(after >= before, "β = {beta}: {after} < {before}");
        }
        let subfair = market(&[0.5, 0.5], &[1.5, 1.5]);
        assert!(matches!(prop7_transform(&subfair, &mixed), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn dispatch_routes() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        assert_eq!(dispatch(&m, BetaParam::ZeroLimit, false).unwrap(), Optimum::Full(kelly(&m)));
        assert!(matches!(
            dispatch(&m, BetaParam::Finite(0.5), true).unwrap(),
            Optimum::Partial(_)
        ));
        assert_eq!(
            dispatch(&m, BetaParam::PlusInfinity, false).unwrap(),
            Optimum::Full(optimal_limit(&m, Limit::PlusInfinity))
        );
        assert_eq!(
            dispatch(&m, BetaParam::Finite(2.0), false).unwrap(),
            Optimum::Full(optimal_degenerate(&m, 2.0).unwrap())
        );
        let subfair = market(&[0.6, 0.4], &[1.5, 1.5]);
        assert!(dispatch(&subfair, BetaParam::ZeroLimit, true).is_err());
    }

    #[test]
    fn beta_parsing() {
        assert_eq!("kelly".parse::<BetaParam>().unwrap(), BetaParam::ZeroLimit);
        assert_eq!("+inf".parse::<BetaParam>().unwrap(), BetaParam::PlusInfinity);
        assert_eq!("-inf".parse::<BetaParam>().unwrap(), BetaParam::MinusInfinity);
        assert_eq!("-0.5".parse::<BetaParam>().unwrap(), BetaParam::Finite(-0.5));
        assert!("0".parse::<BetaParam>().is_err());
        assert!("2e6".parse::<BetaParam>().is_err());
        assert!("banana".parse::<BetaParam>().is_err());
    }
}
