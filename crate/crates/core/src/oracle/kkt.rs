use serde::Serialize;

use crate::market::RaceMarket;
use crate::strategy::{check_regular_beta, PartialAllocation};
use crate::{Error, Result};

/// Residuals of the optimality conditions for the partial-investment problem.
///
/// With `S_i = b_0 + b_i o_i`, an allocation is optimal iff for some `μ`
///
/// ```text
/// Σ_i p_i S_i^{β−1}   = μ if b_0 > 0,  ≤ μ if b_0 = 0
/// p_i o_i S_i^{β−1}   = μ if b_i > 0,  ≤ μ if b_i = 0
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KktReport {
    pub mu: f64,
    /// Largest `|p_i o_i S_i^{β−1} − μ|` over horses with a bet.
    pub stationarity_gap: f64,
    /// Largest violation `max(0, p_i o_i S_i^{β−1} − μ)` over horses without a bet.
    pub feasibility_gap: f64,
    pub cash_stationarity_gap: f64,
    pub cash_feasibility_gap: f64,
    /// `|μ − Γ b_0^{β−1}|` when a threshold `Γ` was supplied and `b_0 > 0`.
    pub mu_gamma_gap: Option<f64>,
}

impl KktReport {
    pub fn max_gap(&self) -> f64 {
        [
            self.stationarity_gap,
            self.feasibility_gap,
            self.cash_stationarity_gap,
            self.cash_feasibility_gap,
            self.mu_gamma_gap.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Evaluates the KKT system at `sol`. `μ` comes from the cash equation when
/// `b_0 > 0`, otherwise from the first horse with a bet.
pub fn kkt_residual(
    market: &RaceMarket,
    beta: f64,
    sol: &PartialAllocation,
    gamma_cap: Option<f64>,
) -> Result<KktReport> {
    check_regular_beta(beta)?;
    if sol.bets().len() != market.len() {
        return Err(Error::LengthMismatch { expected: market.len(), actual: sol.bets().len() });
    }
    let cash = sol.cash();
    let marginal: Vec<f64> = sol
        .bets()
        .iter()
        .zip(market.odds())
        .map(|(b, o)| (cash + b * o).powf(beta - 1.0))
        .collect();
    let cash_derivative: f64 = market.probs().iter().zip(&marginal).map(|(p, m)| p * m).sum();
    let bet_derivative: Vec<f64> = market
        .expected_returns()
        .iter()
        .zip(&marginal)
        .map(|(po, m)| po * m)
        .collect();

    let mu = if cash > 0.0 {
        cash_derivative
    } else {
        let active = sol
            .bets()
            .iter()
            .position(|&b| b > 0.0)
            .ok_or(Error::NotEvaluable("no cash and no bets"))?;
        bet_derivative[active]
    };

    let mut stationarity_gap: f64 = 0.0;
    let mut feasibility_gap: f64 = 0.0;
    for (b, d) in sol.bets().iter().zip(&bet_derivative) {
        if *b > 0.0 {
            stationarity_gap = stationarity_gap.max((d - mu).abs());
        } else {
            feasibility_gap = feasibility_gap.max((d - mu).max(0.0));
        }
    }
    let (cash_stationarity_gap, cash_feasibility_gap) = if cash > 0.0 {
        ((cash_derivative - mu).abs(), 0.0)
    } else {
        (0.0, (cash_derivative - mu).max(0.0))
    };
    let mu_gamma_gap = match gamma_cap {
        Some(g) if cash > 0.0 => Some((mu - g * cash.powf(beta - 1.0)).abs()),
        _ => None,
    };
    Ok(KktReport {
        mu,
        stationarity_gap,
        feasibility_gap,
        cash_stationarity_gap,
        cash_feasibility_gap,
        mu_gamma_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::optimal_partial;

    fn market(p: &[f64], o: &[f64]) -> RaceMarket {
        RaceMarket::new(p.to_vec(), o.to_vec()).unwrap()
    }

    #[test]
    fn optimum_satisfies_conditions() {
        let m = market(&[0.9, 0.1], &[1.5, 1.5]);
        let sol = optimal_partial(&m, 0.5).unwrap();
        let report = kkt_residual(&m, 0.5, &sol.allocation, sol.gamma_cap).unwrap();
        assert!(report.max_gap() < 1e-8, "{report:?}");
        // μ = Γ b_0^{β−1} = 0.3 · (6/83)^{−1/2}
        let expected = 0.3 * (6.0f64 / 83.0).powf(-0.5);
        assert!((report.mu - expected).abs() < 1e-12);
        assert!((report.mu - 1.1158).abs() < 1e-4);
    }

    #[test]
    fn shifted_cash_breaks_stationarity() {
        let m = market(&[0.9, 0.1], &[1.5, 1.5]);
        let sol = optimal_partial(&m, 0.5).unwrap();
        let cash = sol.allocation.cash() + 0.05;
        let scale = (1.0 - cash) / (1.0 - sol.allocation.cash());
        let bets = sol.allocation.bets().iter().map(|b| b * scale).collect();
        let shifted = PartialAllocation::new(cash, bets).unwrap();
        let report = kkt_residual(&m, 0.5, &shifted, None).unwrap();
        assert!(report.stationarity_gap > 1e-3, "{report:?}");
    }

    #[test]
    fn all_cash_is_optimal_below_threshold() {
        let m = market(&[0.5, 0.5], &[1.0, 1.0]);
        let cash = PartialAllocation::new(1.0, vec![0.0, 0.0]).unwrap();
        let report = kkt_residual(&m, 0.5, &cash, Some(1.0)).unwrap();
        assert_eq!(report.mu, 1.0);
        assert_eq!(report.feasibility_gap, 0.0);
        assert_eq!(report.max_gap(), 0.0);
    }

    #[test]
    fn full_investment_in_subfair_market_violates_cash_condition() {
        let m = market(&[0.6, 0.4], &[1.8, 1.8]);
        let invested = PartialAllocation::new(0.0, vec![0.6, 0.4]).unwrap();
        let report = kkt_residual(&m, -0.5, &invested, None).unwrap();
        assert!(report.cash_feasibility_gap > 0.0);
    }
}
