//! Risk-sensitive betting on horse races.
//!
//! The utility of a betting strategy `b` on a race with winning probabilities
//! `p` and odds `o` (paid "o-for-1") is
//!
//! ```text
//! U_β(b) = (1/β) · log₂ Σ_i p_i (b_i o_i)^β
//! ```
//!
//! which interpolates between the worst-case payoff (β → −∞), the doubling
//! rate (β → 0), the expected return (β = 1) and the best-case payoff
//! (β → +∞). For β < 1 the utility splits into an odds term, a Rényi
//! divergence between `p` and the bookie distribution, and a Rényi divergence
//! between the optimal strategy and `b`.
//!
//! Modules:
//!
//! - [`market`]: validated race markets and the odds-derived quantities.
//! - [`divergence`]: Rényi, Kullback-Leibler and conditional Rényi divergences in bits.
//! - [`strategy`]: optimal allocations for every β regime, with side
//!   information and with partial investment.
//! - [`utility`]: utility evaluation and the divergence decompositions.
//! - [`oracle`]: brute-force simplex search, KKT certificates and Monte Carlo.
//! - [`cli`]: the command-line front end over JSON race files.
//!
//! ```
//! use racebet::market::RaceMarket;
//! use racebet::strategy::optimal_full;
//! use racebet::utility::decompose_full;
//!
//! let market = RaceMarket::new(vec![0.6, 0.4], vec![2.0, 2.0]).unwrap();
//! let g = optimal_full(&market, 0.5).unwrap();
//! assert!((g.bets()[0] - 9.0 / 13.0).abs() < 1e-12);
//!
//! let report = decompose_full(&market, &g, 0.5).unwrap();
//! assert!(report.residual < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod divergence;
mod error;
pub mod market;
mod numeric;
pub mod oracle;
pub mod strategy;
pub mod utility;

pub use error::{Error, Result};

/// Quantities measured in bits. May be `±∞` but never NaN.
pub type Bits = f64;
