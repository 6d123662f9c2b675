use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::market::RaceMarket;
use crate::strategy::Allocation;
use crate::utility::doubling_rate;
use crate::Bits;

/// Races simulated per parallel work unit.
const CHUNK: usize = 1 << 13;

/// Cumulative `log₂(γ_n / γ_0)` after each race.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WealthTrajectory {
    pub n_races: usize,
    pub log_wealth: Vec<Bits>,
    pub seed: u64,
}

/// Empirical growth rate against the doubling rate, with a 3σ CLT band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub n_races: usize,
    pub growth_rate: Bits,
    pub std_error: f64,
    pub band_low: Bits,
    pub band_high: Bits,
    pub doubling_rate: Bits,
    pub within_band: bool,
}

/// Sample mean of `S^β` and the resulting utility estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub utility: Bits,
    pub mean_power: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

/// Uniform draw in `[0, 1)` for race `index` under `seed`.
///
/// The stream is a ChaCha8 keystream addressed by race index, so any range of
/// races can be regenerated without replaying the ones before it.
pub fn race_uniform(seed: u64, index: u64) -> f64 {
    let mut rng = stream_at(seed, index);
    to_unit(rng.next_u64())
}

/// Runs `n_races` independent races with a fixed strategy.
pub fn simulate_growth(market: &RaceMarket, b: &Allocation, n_races: usize, seed: u64) -> WealthTrajectory {
    assert_eq!(b.len(), market.len(), "allocation length must match the market");
    let increments: Vec<f64> = b.bets().iter().zip(market.odds()).map(|(b, o)| (b * o).log2()).collect();
    let steps = per_race(market, n_races, seed, |winner| increments[winner]);
    let mut acc = 0.0;
    let log_wealth = steps
        .into_iter()
        .map(|s| {
            acc += s;
            acc
        })
        .collect();
    WealthTrajectory { n_races, log_wealth, seed }
}

/// Compares the trajectory's average increment with the doubling rate.
pub fn summarize_growth(market: &RaceMarket, b: &Allocation, trajectory: &WealthTrajectory) -> GrowthSummary {
    let n = trajectory.n_races;
    let theory = doubling_rate(market, b);
    let last = trajectory.log_wealth.last().copied().unwrap_or(0.0);
    if !last.is_finite() || n < 2 {
        let growth_rate = if n == 0 { 0.0 } else { last / n as f64 };
        return GrowthSummary {
            n_races: n,
            growth_rate,
            std_error: f64::INFINITY,
            band_low: f64::NEG_INFINITY,
            band_high: f64::INFINITY,
            doubling_rate: theory,
            within_band: false,
        };
    }
    let mean = last / n as f64;
    let mut prev = 0.0;
    let mut ss = 0.0;
    for &w in &trajectory.log_wealth {
        let d = w - prev - mean;
        ss += d * d;
        prev = w;
    }
    let std_error = (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt();
    let (band_low, band_high) = (mean - 3.0 * std_error, mean + 3.0 * std_error);
    GrowthSummary {
        n_races: n,
        growth_rate: mean,
        std_error,
        band_low,
        band_high,
        doubling_rate: theory,
        within_band: band_low <= theory && theory <= band_high,
    }
}

/// Monte Carlo estimate of `U_β = (1/β) log₂ E[S^β]`.
pub fn estimate_ubeta(market: &RaceMarket, b: &Allocation, beta: f64, n_samples: usize, seed: u64) -> Bits {
    estimate_ubeta_detailed(market, b, beta, n_samples, seed).utility
}

pub fn estimate_ubeta_detailed(
    market: &RaceMarket,
    b: &Allocation,
    beta: f64,
    n_samples: usize,
    seed: u64,
) -> MonteCarloEstimate {
    assert!(n_samples > 0, "at least one sample is required");
    assert_eq!(b.len(), market.len(), "allocation length must match the market");
    let powers: Vec<f64> = b.bets().iter().zip(market.odds()).map(|(b, o)| (b * o).powf(beta)).collect();
    let draws = per_race(market, n_samples, seed, |winner| powers[winner]);
    let n = n_samples as f64;
    let mean_power = draws.iter().sum::<f64>() / n;
    let std_error = if n_samples > 1 && mean_power.is_finite() {
        let ss: f64 = draws.iter().map(|x| (x - mean_power).powi(2)).sum();
        (ss / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        f64::INFINITY
    };
    let utility = mean_power.log2() / beta;
    MonteCarloEstimate { utility, mean_power, std_error, n_samples }
}

/// Evaluates `f(winner)` for each race, in race order. Work is split into
/// fixed chunks that seek directly into the stream, so the output does not
/// depend on the thread count.
fn per_race<F>(market: &RaceMarket, n: usize, seed: u64, f: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync,
{
    let cdf = cumulative(market.probs());
    let mut out = vec![0.0; n];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk, slot)| {
        let mut rng = stream_at(seed, (chunk * CHUNK) as u64);
        for s in slot.iter_mut() {
            *s = f(sample_winner(&cdf, to_unit(rng.next_u64())));
        }
    });
    out
}

fn stream_at(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // one u64 per race = two 32-bit words
    rng.set_word_pos(2 * index as u128);
    rng
}

fn to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn sample_winner(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn market(p: &[f64], o: &[f64]) -> RaceMarket {
        RaceMarket::new(p.to_vec(), o.to_vec()).unwrap()
    }

    #[test]
    fn stream_is_addressable_by_race_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for i in 0..50 {
            assert_eq!(race_uniform(42, i), to_unit(rng.next_u64()));
        }
    }

    #[test]
    fn chunk_boundaries_do_not_change_the_stream() {
        let m = market(&[0.3, 0.7], &[3.0, 1.5]);
        let b = Allocation::new(vec![0.3, 0.7]).unwrap();
        let n = CHUNK * 2 + 17;
        let t = simulate_growth(&m, &b, n, 9);
        let cdf = cumulative(m.probs());
        let mut acc = 0.0;
        for i in 0..n {
            let w = sample_winner(&cdf, race_uniform(9, i as u64));
            acc += (b.bets()[w] * m.odds()[w]).log2();
            assert_eq!(t.log_wealth[i], acc);
        }
    }

    #[test]
    fn risk_free_strategy_grows_at_log_c() {
        let m = market(&[0.2, 0.3, 0.5], &[2.0, 4.0, 8.0]);
        let r = Allocation::new(m.bookie_distribution()).unwrap();
        let t = simulate_growth(&m, &r, 1000, 3);
        let log_c = m.track_constant().log2();
        let mut prev = 0.0;
        for w in &t.log_wealth {
            assert!((w - prev - log_c).abs() < 1e-14);
            prev = *w;
        }
        let est = estimate_ubeta(&m, &r, -3.0, 500, 1);
        assert!((est - log_c).abs() < 1e-14);
    }

    #[test]
    fn deterministic_per_seed() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        let b = Allocation::new(vec![0.6, 0.4]).unwrap();
        assert_eq!(simulate_growth(&m, &b, 5000, 7), simulate_growth(&m, &b, 5000, 7));
        assert_ne!(simulate_growth(&m, &b, 5000, 7), simulate_growth(&m, &b, 5000, 8));
    }

    #[test]
    fn unbacked_winner_ruins() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        let b = Allocation::new(vec![1.0, 0.0]).unwrap();
        let t = simulate_growth(&m, &b, 200, 1);
        assert_eq!(*t.log_wealth.last().unwrap(), f64::NEG_INFINITY);
        let first_loss = t.log_wealth.iter().position(|w| w.is_infinite()).unwrap();
        assert!(t.log_wealth[first_loss..].iter().all(|w| *w == f64::NEG_INFINITY));
        assert!(t.log_wealth[..first_loss].iter().all(|w| w.is_finite()));
        let s = summarize_growth(&m, &b, &t);
        assert!(!s.within_band && s.growth_rate == f64::NEG_INFINITY);
    }

    #[test]
    fn single_sample_is_log_payoff() {
        let m = market(&[0.6, 0.4], &[2.0, 3.0]);
        let b = Allocation::new(vec![0.5, 0.5]).unwrap();
        let w = sample_winner(&cumulative(m.probs()), race_uniform(11, 0));
        let expected = (b.bets()[w] * m.odds()[w]).log2();
        for beta in [-2.0, 0.5, 3.0] {
            assert!((estimate_ubeta(&m, &b, beta, 1, 11) - expected).abs() < 1e-14);
        }
    }
}
