use rayon::prelude::*;

use crate::market::{RaceMarket, SideInfoMarket};
use crate::strategy::{Allocation, ConditionalAllocation, Limit, PartialAllocation};
use crate::utility::{power_mean_bits, utility_side_info};
use crate::{Bits, Error, Result};

/// Upper bound on the number of grid points a search may visit.
pub const MAX_GRID_POINTS: f64 = 1e7;

/// The points `n / k` where `n` ranges over compositions of `k` into
/// `dimension` nonnegative integer parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    resolution: u32,
    dimension: usize,
}

impl GridSpec {
    pub fn new(resolution: u32, dimension: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidGrid(format!("resolution {resolution} < 2")));
        }
        if dimension == 0 {
            return Err(Error::InvalidGrid("dimension 0".into()));
        }
        let spec = Self { resolution, dimension };
        let points = spec.n_points();
        if points > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge { points, limit: MAX_GRID_POINTS });
        }
        Ok(spec)
    }

    /// Grid over full-investment allocations of `market`.
    pub fn for_full(market: &RaceMarket, resolution: u32) -> Result<Self> {
        Self::new(resolution, market.len())
    }

    /// Grid over `(cash, bets…)`.
    pub fn for_partial(market: &RaceMarket, resolution: u32) -> Result<Self> {
        Self::new(resolution, market.len() + 1)
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `C(k + d − 1, d − 1)`, as a float so huge grids do not overflow.
    pub fn n_points(&self) -> f64 {
        let k = self.resolution as f64;
        (1..self.dimension).fold(1.0, |acc, j| acc * (k + j as f64) / j as f64).round()
    }

    /// Best point under `objective`, visiting compositions in lexicographic
    /// order; the first maximizer wins ties regardless of thread count.
    fn argmax<F>(&self, objective: F) -> (Vec<u32>, f64)
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let k = self.resolution;
        let d = self.dimension;
        let scale = 1.0 / k as f64;
        let chunks: Vec<(Vec<u32>, f64)> = (0..=k)
            .into_par_iter()
            .map(|head| {
                let mut point = vec![0.0; d];
                let mut best: Option<(Vec<u32>, f64)> = None;
                let tail = Compositions::new(k - head, d - 1);
                let mut visit = |counts: Vec<u32>| {
                    for (x, &c) in point.iter_mut().zip(&counts) {
                        *x = c as f64 * scale;
                    }
                    let value = objective(&point);
                    if best.as_ref().is_none_or(|(_, v)| value > *v) {
                        best = Some((counts, value));
                    }
                };
                if d == 1 {
                    if head == k {
                        visit(vec![k]);
                    }
                } else {
                    for rest in tail {
                        let mut counts = Vec::with_capacity(d);
                        counts.push(head);
                        counts.extend(rest);
                        visit(counts);
                    }
                }
                best
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        chunks
            .into_iter()
            .reduce(|best, next| if next.1 > best.1 { next } else { best })
            .expect("a grid always has at least one point")
    }
}

/// Compositions of `total` into `parts` nonnegative integers, in
/// lexicographic order from `(0, …, 0, total)` to `(total, 0, …, 0)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Self {
        let mut current = vec![0; parts];
        if let Some(last) = current.last_mut() {
            *last = total;
        }
        Self { current, started: false, done: parts == 0 }
    }

    fn advance(&mut self) -> bool {
        let c = &mut self.current;
        let d = c.len();
        if d < 2 {
            return false;
        }
        let mut i = d - 2;
        loop {
            if c[d - 1] > 0 {
                c[i] += 1;
                c[d - 1] -= 1;
                return true;
            }
            c[d - 1] += c[i];
            c[i] = 0;
            if i == 0 {
                return false;
            }
            i -= 1;
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(self.current.clone())
    }
}

/// Exhaustive search for the best full-investment allocation on the grid.
pub fn grid_search_full(
    market: &RaceMarket,
    beta: f64,
    grid: &GridSpec,
) -> Result<(Allocation, Bits)> {
    check_beta(beta)?;
    check_dimension(grid, market.len())?;
    let (counts, value) = grid.argmax(|b| {
        let payoffs = b.iter().zip(market.odds()).map(|(b, o)| b * o);
        power_mean_bits(market.probs().iter().copied().zip(payoffs), beta)
    });
    Ok((Allocation::new(to_fractions(&counts, grid.resolution))?, value))
}

/// Exhaustive search over `(cash, bets…)`.
pub fn grid_search_partial(
    market: &RaceMarket,
    beta: f64,
    grid: &GridSpec,
) -> Result<(PartialAllocation, Bits)> {
    check_beta(beta)?;
    check_dimension(grid, market.len() + 1)?;
    let (counts, value) = grid.argmax(|x| {
        let cash = x[0];
        let payoffs = x[1..].iter().zip(market.odds()).map(move |(b, o)| cash + b * o);
        power_mean_bits(market.probs().iter().copied().zip(payoffs), beta)
    });
    let fractions = to_fractions(&counts, grid.resolution);
    let allocation = PartialAllocation::new(fractions[0], fractions[1..].to_vec())?;
    Ok((allocation, value))
}

/// Side-information search. The objective is a sum of per-signal terms that
/// each depend on one row only, so every row is searched on its own grid.
pub fn grid_search_side_info(
    market: &SideInfoMarket,
    beta: f64,
    grid: &GridSpec,
) -> Result<(ConditionalAllocation, Bits)> {
    check_beta(beta)?;
    check_dimension(grid, market.n_horses())?;
    let rows = market
        .joint()
        .iter()
        .map(|p_row| {
            let (counts, _) = grid.argmax(|b| {
                let payoffs = b.iter().zip(market.odds()).map(|(b, o)| b * o);
                power_mean_bits(p_row.iter().copied().zip(payoffs), beta)
            });
            to_fractions(&counts, grid.resolution)
        })
        .collect();
    let table = ConditionalAllocation::new(rows)?;
    let value = utility_side_info(market, &table, beta);
    Ok((table, value))
}

/// Search under the limiting objective `log₂ max b_i o_i` (`+∞`) or
/// `log₂ min b_i o_i` (`−∞`), taken over horses with positive probability.
pub fn grid_search_limit(
    market: &RaceMarket,
    which: Limit,
    grid: &GridSpec,
) -> Result<(Allocation, Bits)> {
    check_dimension(grid, market.len())?;
    let (counts, value) = grid.argmax(|b| {
        let payoffs = b
            .iter()
            .zip(market.odds())
            .zip(market.probs())
            .filter(|(_, &p)| p > 0.0)
            .map(|((b, o), _)| b * o);
        let s = match which {
            Limit::PlusInfinity => payoffs.fold(f64::NEG_INFINITY, f64::max),
            Limit::MinusInfinity => payoffs.fold(f64::INFINITY, f64::min),
        };
        s.log2()
    });
    Ok((Allocation::new(to_fractions(&counts, grid.resolution))?, value))
}

fn to_fractions(counts: &[u32], k: u32) -> Vec<f64> {
    counts.iter().map(|&c| c as f64 / k as f64).collect()
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(Error::BetaOutOfRange { beta, range: "finite (0 scores the doubling rate)" });
    }
    Ok(())
}

fn check_dimension(grid: &GridSpec, expected: usize) -> Result<()> {
    if grid.dimension != expected {
        return Err(Error::InvalidGrid(format!(
            "grid dimension {} does not match {expected}",
            grid.dimension
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{optimal_full, optimal_partial};
    use crate::utility::utility_full;

    fn market(p: &[f64], o: &[f64]) -> RaceMarket {
        RaceMarket::new(p.to_vec(), o.to_vec()).unwrap()
    }

    #[test]
    fn compositions_are_lexicographic_and_complete() {
        let all: Vec<Vec<u32>> = Compositions::new(2, 3).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0, 2],
                vec![0, 1, 1],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![2, 0, 0]
            ]
        );
        assert_eq!(Compositions::new(5, 1).collect::<Vec<_>>(), vec![vec![5]]);
        let g = GridSpec::new(10, 4).unwrap();
        assert_eq!(Compositions::new(10, 4).count() as f64, g.n_points());
    }

    #[test]
    fn grid_spec_limits() {
        assert!(matches!(GridSpec::new(1, 2), Err(Error::InvalidGrid(_))));
        assert!(matches!(GridSpec::new(400, 5), Err(Error::GridTooLarge { .. })));
        assert_eq!(GridSpec::new(400, 2).unwrap().n_points(), 401.0);
    }

    #[test]
    fn full_search_matches_closed_form() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        let grid = GridSpec::for_full(&m, 400).unwrap();
        let (b, v) = grid_search_full(&m, 0.5, &grid).unwrap();
        let g = optimal_full(&m, 0.5).unwrap();
        let u = utility_full(&m, &g, 0.5);
        assert!(u >= v - 1e-12);
        assert!(u - v < 1e-5);
        assert!((b.bets()[0] - g.bets()[0]).abs() <= 1.0 / 400.0);
    }

    #[test]
    fn expected_return_search_hits_a_vertex() {
        let m = market(&[0.2, 0.5, 0.3], &[6.0, 2.2, 3.1]);
        let grid = GridSpec::for_full(&m, 100).unwrap();
        let (b, _) = grid_search_full(&m, 1.0, &grid).unwrap();
        assert_eq!(b.bets().iter().filter(|&&x| x == 1.0).count(), 1);
    }

    #[test]
    fn single_horse_is_trivial() {
        let m = market(&[1.0], &[1.7]);
        let (b, v) = grid_search_full(&m, 0.5, &GridSpec::for_full(&m, 10).unwrap()).unwrap();
        assert_eq!(b.bets(), &[1.0]);
        assert!((v - 1.7f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn partial_search_examples() {
        let m = market(&[0.9, 0.1], &[1.5, 1.5]);
        let (b, v) = grid_search_partial(&m, 0.5, &GridSpec::for_partial(&m, 400).unwrap()).unwrap();
        assert!((b.cash() - 0.0722891566).abs() <= 1.0 / 400.0);
        let sol = optimal_partial(&m, 0.5).unwrap();
        assert!(sol.utility >= v - 1e-12 && sol.utility - v < 1e-6);

        let superfair = market(&[0.3, 0.7], &[2.5, 1.8]);
        let (b, _) = grid_search_partial(&superfair, 0.5, &GridSpec::for_partial(&superfair, 100).unwrap())
            .unwrap();
        assert!(b.cash() <= 1.0 / 100.0);

        let losing = market(&[0.5, 0.5], &[1.0, 1.0]);
        let (b, _) = grid_search_partial(&losing, 0.5, &GridSpec::for_partial(&losing, 50).unwrap()).unwrap();
        assert_eq!(b.cash(), 1.0);
    }

    #[test]
    fn zero_beta_scores_the_doubling_rate() {
        let m = market(&[0.6, 0.4], &[2.0, 2.0]);
        let (b, v) = grid_search_full(&m, 0.0, &GridSpec::for_full(&m, 10).unwrap()).unwrap();
        assert_eq!(b.bets(), &[0.6, 0.4]);
        assert!((v - 0.029049405545331364).abs() < 1e-12);
    }

    #[test]
    fn limit_searches() {
        let m = market(&[0.2, 0.5, 0.3], &[6.0, 2.0, 3.0]);
        let g = GridSpec::for_full(&m, 6).unwrap();
        let (b, v) = grid_search_limit(&m, Limit::PlusInfinity, &g).unwrap();
        assert_eq!(b.bets(), &[1.0, 0.0, 0.0]);
        assert_eq!(v, 6f64.log2());
        // r = (1/6, 1/2, 1/3) lies on this grid, and c = 1.
        let (b, v) = grid_search_limit(&m, Limit::MinusInfinity, &g).unwrap();
        assert!((b.bets()[1] - 0.5).abs() < 1e-15);
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let m = market(&[0.5, 0.5], &[2.0, 2.0]);
        let g = GridSpec::new(10, 3).unwrap();
        assert!(matches!(grid_search_full(&m, 0.5, &g), Err(Error::InvalidGrid(_))));
    }
}
