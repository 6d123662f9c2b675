//! Evaluation of `U_β` and its divergence decompositions.
//!
//! `U_β(b) = (1/β) log₂ Σ_i p_i (b_i o_i)^β` is the logarithm of a weighted
//! power mean of the payoffs. Conventions at the boundary: a zero payoff
//! contributes nothing when `β > 0` and makes the utility `−∞` when `β < 0`.
//!
//! The decompositions compute the odds, bookie and gambler terms through
//! [`crate::divergence`] and the utility through a direct power-mean sum, so
//! the reported residual compares two independent evaluations.

use serde::Serialize;

use crate::divergence::{
    cond_renyi_div_unchecked, kl_div_unchecked, product_joint, renyi_div_unchecked, Order,
};
use crate::market::{RaceMarket, SideInfoMarket};
use crate::numeric::{ln0, log_sum_exp, LN_2};
use crate::strategy::{
    check_regular_beta, optimal_full, optimal_side_info, Allocation, ConditionalAllocation,
    PartialAllocation,
};
use crate::{Bits, Error, Result};

/// `log c + bookie − gambler` next to the directly evaluated utility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub log_c: Bits,
    pub bookie_term: Bits,
    pub gambler_term: Bits,
    pub total: Bits,
    pub direct: Bits,
    /// `|total − direct|`; zero when both are the same infinity.
    pub residual: f64,
    /// False when some outcome with positive probability receives no bet.
    pub interior: bool,
}

impl DecompositionReport {
    fn new(log_c: Bits, bookie_term: Bits, gambler_term: Bits, direct: Bits, interior: bool) -> Self {
        let total = log_c + bookie_term - gambler_term;
        let residual = if total == direct { 0.0 } else { (total - direct).abs() };
        Self { log_c, bookie_term, gambler_term, total, direct, residual, interior }
    }
}

/// `U_β` for a full-investment allocation. At `β = 0` this is the doubling rate.
pub fn utility_full(market: &RaceMarket, b: &Allocation, beta: f64) -> Bits {
    assert_eq!(b.len(), market.len(), "allocation length must match the market");
    let payoffs = b.bets().iter().zip(market.odds()).map(|(b, o)| b * o);
    power_mean_bits(market.probs().iter().copied().zip(payoffs), beta)
}

/// `E[log₂ S] = Σ p_i log₂(b_i o_i)`.
pub fn doubling_rate(market: &RaceMarket, b: &Allocation) -> Bits {
    assert_eq!(b.len(), market.len(), "allocation length must match the market");
    let mut acc = 0.0;
    for ((p, bi), o) in market.probs().iter().zip(b.bets()).zip(market.odds()) {
        if *bi == 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += p * (bi * o).log2();
    }
    acc
}

/// `(1/β) log₂ Σ p_i (b_0 + b_i o_i)^β`.
pub fn utility_partial(market: &RaceMarket, b: &PartialAllocation, beta: f64) -> Bits {
    assert_eq!(b.bets().len(), market.len(), "allocation length must match the market");
    let cash = b.cash();
    let payoffs = b.bets().iter().zip(market.odds()).map(move |(b, o)| cash + b * o);
    power_mean_bits(market.probs().iter().copied().zip(payoffs), beta)
}

/// `(1/β) log₂ Σ_{x,y} p(x,y) (b(x|y) o(x))^β`.
pub fn utility_side_info(market: &SideInfoMarket, b: &ConditionalAllocation, beta: f64) -> Bits {
    assert_eq!(b.table().len(), market.n_signals(), "one row per signal");
    let odds = market.odds();
    let terms = market.joint().iter().zip(b.table()).flat_map(|(p_row, b_row)| {
        p_row.iter().copied().zip(b_row.iter().zip(odds).map(|(b, o)| b * o))
    });
    power_mean_bits(terms, beta)
}

/// Limits of `U_β` as β → +∞ and β → −∞: `(log₂ max b_i o_i, log₂ min b_i o_i)`.
pub fn limit_utilities(market: &RaceMarket, b: &Allocation) -> (Bits, Bits) {
    let payoffs = b.bets().iter().zip(market.odds()).map(|(b, o)| b * o);
    let (lo, hi) = payoffs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
        (lo.min(s), hi.max(s))
    });
    (hi.log2(), lo.log2())
}

/// Splits `U_β(b)` into `log c + D_{1/(1−β)}(p‖r) − D_{1−β}(g‖b)` for `β < 1`, `β ≠ 0`.
pub fn decompose_full(market: &RaceMarket, b: &Allocation, beta: f64) -> Result<DecompositionReport> {
    check_regular_beta(beta)?;
    check_len(market.len(), b.len())?;
    let g = optimal_full(market, beta)?;
    let r = market.bookie_distribution();
    let bookie = renyi_div_unchecked(market.probs(), &r, Order::Alpha(1.0 / (1.0 - beta)));
    let gambler = renyi_div_unchecked(g.bets(), b.bets(), Order::Alpha(1.0 - beta));
    Ok(DecompositionReport::new(
        market.track_constant().log2(),
        bookie,
        gambler,
        utility_full(market, b, beta),
        b.is_interior(),
    ))
}

/// Doubling-rate split `log c + D(p‖r) − D(p‖b)`.
pub fn decompose_kelly(market: &RaceMarket, b: &Allocation) -> Result<DecompositionReport> {
    check_len(market.len(), b.len())?;
    if let Some(index) = b.bets().iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroBet { index });
    }
    let r = market.bookie_distribution();
    Ok(DecompositionReport::new(
        market.track_constant().log2(),
        kl_div_unchecked(market.probs(), &r),
        kl_div_unchecked(market.probs(), b.bets()),
        doubling_rate(market, b),
        true,
    ))
}

/// Side-information split
/// `log c + D_{1/(1−β)}(p_{X|Y}‖r_X|p_Y) − D_{1−β}(g_{X|Y} g_Y ‖ b_{X|Y} g_Y)`.
pub fn decompose_side_info(
    market: &SideInfoMarket,
    b: &ConditionalAllocation,
    beta: f64,
) -> Result<DecompositionReport> {
    check_regular_beta(beta)?;
    check_len(market.n_signals(), b.table().len())?;
    for row in b.table() {
        check_len(market.n_horses(), row.len())?;
    }
    let (g, g_y) = optimal_side_info(market, beta)?;
    let p_y = market.signal_probs();
    let p_cond = market.conditional();
    let r_rows = vec![market.bookie_distribution(); market.n_signals()];
    let bookie = cond_renyi_div_unchecked(&p_cond, &r_rows, &p_y, 1.0 / (1.0 - beta));
    let gambler = renyi_div_unchecked(
        &product_joint(g.table(), &g_y),
        &product_joint(b.table(), &g_y),
        Order::Alpha(1.0 - beta),
    );
    let interior = market
        .joint()
        .iter()
        .zip(b.table())
        .all(|(p_row, b_row)| p_row.iter().zip(b_row).all(|(p, b)| *p == 0.0 || *b > 0.0));
    Ok(DecompositionReport::new(
        market.track_constant().log2(),
        bookie,
        gambler,
        utility_side_info(market, b, beta),
        interior,
    ))
}

/// `(1/β) log₂ Σ w_i s_i^β` over `(weight, payoff)` pairs, in the log domain.
/// Zero weights are skipped. `β = 0` gives `Σ w_i log₂ s_i`.
pub(crate) fn power_mean_bits<I>(terms: I, beta: f64) -> Bits
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut logs = Vec::new();
    let mut geometric = 0.0;
    for (w, s) in terms {
        if w == 0.0 {
            continue;
        }
        let ln_s = ln0(s);
        if ln_s == f64::NEG_INFINITY && beta <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if beta == 0.0 {
            geometric += w * ln_s;
        } else {
            logs.push(w.ln() + beta * ln_s);
        }
    }
    if beta == 0.0 {
        return geometric / LN_2;
    }
    log_sum_exp(logs.iter().copied()) / (beta * LN_2)
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}
