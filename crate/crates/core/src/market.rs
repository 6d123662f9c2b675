//! Race markets: winning probabilities, odds, and what the odds imply.
//!
//! Odds are quoted "o-for-1": a unit stake on horse `i` returns `o_i` in
//! total if the horse wins and nothing otherwise.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Input probabilities may deviate from a unit sum by at most this much.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Half-width of the band around `c = 1` classified as fair.
pub const FAIRNESS_TOLERANCE: f64 = 1e-12;

/// A single race with `m ≥ 1` horses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaceMarket {
    probs: Vec<f64>,
    odds: Vec<f64>,
}

impl RaceMarket {
    /// Validates the inputs and renormalizes `probs` to sum to one.
    pub fn new(probs: Vec<f64>, odds: Vec<f64>) -> Result<Self> {
        if probs.len() != odds.len() {
            return Err(Error::LengthMismatch { expected: probs.len(), actual: odds.len() });
        }
        if probs.is_empty() {
            return Err(Error::EmptyMarket);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveProbability { index, value });
            }
        }
        validate_odds(&odds)?;
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        let probs = probs.into_iter().map(|p| p / sum).collect();
        Ok(Self { probs, odds })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn odds(&self) -> &[f64] {
        &self.odds
    }

    /// Number of horses.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `c = [Σ 1/o_i]⁻¹`.
    pub fn track_constant(&self) -> f64 {
        track_constant(&self.odds)
    }

    /// The distribution implied by the odds, `r_i = c / o_i`.
    pub fn bookie_distribution(&self) -> Vec<f64> {
        bookie_distribution(&self.odds)
    }

    pub fn classify_fairness(&self) -> Fairness {
        Fairness::from_track_constant(self.track_constant())
    }

    /// `p_i · o_i`, the expected return of a unit bet on each horse.
    pub fn expected_returns(&self) -> Vec<f64> {
        self.probs.iter().zip(&self.odds).map(|(p, o)| p * o).collect()
    }
}

/// Joint law of the winner `X` and a signal `Y` observed before betting.
///
/// `joint[y][x]` is `P(Y = y, X = x)`. Horses may have zero probability,
/// signals may not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideInfoMarket {
    joint: Vec<Vec<f64>>,
    odds: Vec<f64>,
}

impl SideInfoMarket {
    pub fn new(joint: Vec<Vec<f64>>, odds: Vec<f64>) -> Result<Self> {
        if odds.is_empty() {
            return Err(Error::EmptyMarket);
        }
        if joint.is_empty() {
            return Err(Error::InvalidDistribution("no signals".into()));
        }
        validate_odds(&odds)?;
        let mut sum = 0.0;
        for (y, row) in joint.iter().enumerate() {
            if row.len() != odds.len() {
                return Err(Error::LengthMismatch { expected: odds.len(), actual: row.len() });
            }
            for (x, &v) in row.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::InvalidDistribution(format!(
                        "joint[{y}][{x}] = {v} is not a nonnegative probability"
                    )));
                }
            }
            let row_sum: f64 = row.iter().sum();
            if row_sum <= 0.0 {
                return Err(Error::ZeroSignalProbability { index: y });
            }
            sum += row_sum;
        }
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        let joint = joint
            .into_iter()
            .map(|row| row.into_iter().map(|v| v / sum).collect())
            .collect();
        Ok(Self { joint, odds })
    }

    /// Market where every signal is uninformative: `p(x, y) = p(x) p(y)`.
    pub fn independent(market: &RaceMarket, signal_probs: &[f64]) -> Result<Self> {
        let joint = signal_probs
            .iter()
            .map(|&py| market.probs().iter().map(|&px| px * py).collect())
            .collect();
        Self::new(joint, market.odds().to_vec())
    }

    pub fn joint(&self) -> &[Vec<f64>] {
        &self.joint
    }

    pub fn odds(&self) -> &[f64] {
        &self.odds
    }

    pub fn n_horses(&self) -> usize {
        self.odds.len()
    }

    pub fn n_signals(&self) -> usize {
        self.joint.len()
    }

    /// Marginal `p(y)`; strictly positive.
    pub fn signal_probs(&self) -> Vec<f64> {
        self.joint.iter().map(|row| row.iter().sum()).collect()
    }

    /// Marginal `p(x)`; may contain zeros.
    pub fn horse_probs(&self) -> Vec<f64> {
        let mut px = vec![0.0; self.n_horses()];
        for row in &self.joint {
            for (acc, v) in px.iter_mut().zip(row) {
                *acc += v;
            }
        }
        px
    }

    /// Rows `p(·|y)`.
    pub fn conditional(&self) -> Vec<Vec<f64>> {
        self.joint
            .iter()
            .map(|row| {
                let py: f64 = row.iter().sum();
                row.iter().map(|v| v / py).collect()
            })
            .collect()
    }

    pub fn track_constant(&self) -> f64 {
        track_constant(&self.odds)
    }

    pub fn bookie_distribution(&self) -> Vec<f64> {
        bookie_distribution(&self.odds)
    }

    pub fn classify_fairness(&self) -> Fairness {
        Fairness::from_track_constant(self.track_constant())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FairnessTag {
    Subfair,
    Fair,
    Superfair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fairness {
    pub tag: FairnessTag,
    pub c: f64,
}

impl Fairness {
    pub fn from_track_constant(c: f64) -> Self {
        let tag = if (c - 1.0).abs() <= FAIRNESS_TOLERANCE {
            FairnessTag::Fair
        } else if c < 1.0 {
            FairnessTag::Subfair
        } else {
            FairnessTag::Superfair
        };
        Self { tag, c }
    }

    /// `c ≥ 1` up to the fairness band.
    pub fn is_fair_or_better(&self) -> bool {
        self.tag != FairnessTag::Subfair
    }
}

pub(crate) fn validate_odds(odds: &[f64]) -> Result<()> {
    for (index, &value) in odds.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveOdds { index, value });
        }
    }
    Ok(())
}

pub(crate) fn track_constant(odds: &[f64]) -> f64 {
    1.0 / odds.iter().map(|o| 1.0 / o).sum::<f64>()
}

pub(crate) fn bookie_distribution(odds: &[f64]) -> Vec<f64> {
    let c = track_constant(odds);
    odds.iter().map(|o| c / o).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn market(p: &[f64], o: &[f64]) -> RaceMarket {
        RaceMarket::new(p.to_vec(), o.to_vec()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(RaceMarket::new(vec![0.5, 0.5], vec![2.0, 2.0]).is_ok());
        assert!(matches!(
            RaceMarket::new(vec![0.6, 0.5], vec![2.0, 2.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(
            RaceMarket::new(vec![0.6, 0.4], vec![2.0, -1.0]),
            Err(Error::NonPositiveOdds { index: 1, value: -1.0 })
        );
        assert_eq!(
            RaceMarket::new(vec![1.0, 0.0], vec![2.0, 2.0]),
            Err(Error::NonPositiveProbability { index: 1, value: 0.0 })
        );
        assert!(matches!(
            RaceMarket::new(vec![1.0], vec![2.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert_eq!(RaceMarket::new(vec![], vec![]), Err(Error::EmptyMarket));
    }

    #[test]
    fn small_normalization_error_is_absorbed() {
        let m = market(&[0.3333333333, 0.3333333333, 0.3333333334], &[3.0, 3.0, 3.0]);
        assert!((m.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn track_constant_examples() {
        assert_eq!(market(&[0.5, 0.5], &[2.0, 2.0]).track_constant(), 1.0);
        let c = market(&[0.2, 0.3, 0.5], &[2.0, 4.0, 8.0]).track_constant();
        assert!((c - 8.0 / 7.0).abs() < 1e-15);
        let c = market(&[0.5, 0.5], &[1.5, 1.5]).track_constant();
        assert!((c - 0.75).abs() < 1e-15);
    }

    #[test]
    fn bookie_distribution_examples() {
        assert_eq!(market(&[0.5, 0.5], &[2.0, 2.0]).bookie_distribution(), vec![0.5, 0.5]);
        let r = market(&[0.2, 0.3, 0.5], &[2.0, 4.0, 8.0]).bookie_distribution();
        for (a, b) in r.iter().zip([4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let r = market(&[0.5, 0.5], &[1.5, 1.5]).bookie_distribution();
        assert!((r[0] - 0.5).abs() < 1e-15 && (r[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fairness_examples() {
        assert_eq!(market(&[0.5, 0.5], &[2.0, 2.0]).classify_fairness().tag, FairnessTag::Fair);
        assert_eq!(market(&[0.5, 0.5], &[1.5, 1.5]).classify_fairness().tag, FairnessTag::Subfair);
        assert_eq!(
            market(&[0.2, 0.3, 0.5], &[2.0, 4.0, 8.0]).classify_fairness().tag,
            FairnessTag::Superfair
        );
        // exact reciprocals land in the fair band
        assert_eq!(
            market(&[0.2, 0.3, 0.5], &[3.0, 3.0, 3.0]).classify_fairness().tag,
            FairnessTag::Fair
        );
    }

    #[test]
    fn side_info_marginals() {
        let m = SideInfoMarket::new(vec![vec![0.5, 0.0], vec![0.1, 0.4]], vec![2.0, 2.0]).unwrap();
        assert_eq!(m.signal_probs(), vec![0.5, 0.5]);
        assert_eq!(m.horse_probs(), vec![0.6, 0.4]);
        assert_eq!(m.conditional()[1], vec![0.2, 0.8]);
        assert_eq!(
            SideInfoMarket::new(vec![vec![0.0, 0.0], vec![0.5, 0.5]], vec![2.0, 2.0]),
            Err(Error::ZeroSignalProbability { index: 0 })
        );
        assert!(matches!(
            SideInfoMarket::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]], vec![2.0, 2.0]),
            Err(Error::NotNormalized { .. })
        ));
    }

    fn arb_market() -> impl Strategy<Value = RaceMarket> {
        (1usize..8)
            .prop_flat_map(|m| {
                (
                    proptest::collection::vec(0.01f64..1.0, m),
                    proptest::collection::vec(1.01f64..50.0, m),
                )
            })
            .prop_map(|(w, o)| {
                let s: f64 = w.iter().sum();
                RaceMarket::new(w.iter().map(|x| x / s).collect(), o).unwrap()
            })
    }

    proptest! {
        #[test]
        fn bookie_distribution_is_a_pmf(m in arb_market()) {
            let r = m.bookie_distribution();
            prop_assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            prop_assert!(r.iter().all(|&x| x > 0.0));
        }

        #[test]
        fn fairness_reports_track_constant(m in arb_market()) {
            prop_assert_eq!(m.classify_fairness().c, m.track_constant());
        }

        #[test]
        fn track_constant_is_permutation_invariant(m in arb_market(), seed in any::<u64>()) {
            let mut idx: Vec<usize> = (0..m.len()).collect();
            let len = idx.len();
            for i in (1..len).rev() {
                idx.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
            }
            let p: Vec<f64> = idx.iter().map(|&i| m.probs()[i]).collect();
            let o: Vec<f64> = idx.iter().map(|&i| m.odds()[i]).collect();
            let shuffled = RaceMarket::new(p, o).unwrap();
            prop_assert!((shuffled.track_constant() - m.track_constant()).abs() <= 1e-14 * m.track_constant());
        }
    }
}
