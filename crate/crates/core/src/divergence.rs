//! Rényi divergences between finite distributions, in bits.
//!
//! Zero-probability conventions: `0^a = 0` for `a > 0`, so outcomes with
//! `p(x) = 0` never contribute. When `p(x) > 0 = q(x)` the divergence is `+∞`
//! for orders above one; below one the term simply vanishes.

use crate::numeric::{ln0, log_sum_exp, LN_2};
use crate::{Bits, Error, Result};

/// Tolerance on the unit sum of a distribution passed to this module.
const PMF_TOLERANCE: f64 = 1e-9;

/// Order of a Rényi divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    /// Any positive order other than one.
    Alpha(f64),
    /// The Kullback-Leibler limit.
    One,
}

impl Order {
    /// `alpha == 1.0` maps to [`Order::One`].
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidOrder(alpha));
        }
        Ok(if alpha == 1.0 { Order::One } else { Order::Alpha(alpha) })
    }

    pub fn alpha(self) -> f64 {
        match self {
            Order::Alpha(a) => a,
            Order::One => 1.0,
        }
    }
}

/// `D_α(p‖q) = 1/(α−1) · log₂ Σ p(x)^α q(x)^{1−α}`; KL divergence at order one.
pub fn renyi_div(p: &[f64], q: &[f64], order: Order) -> Result<Bits> {
    check_pair(p, q)?;
    Ok(renyi_div_unchecked(p, q, check_order(order)?))
}

/// `D(p‖q) = Σ p(x) log₂(p(x)/q(x))`.
pub fn kl_div(p: &[f64], q: &[f64]) -> Result<Bits> {
    check_pair(p, q)?;
    Ok(kl_div_unchecked(p, q))
}

/// Signal-averaged conditional Rényi divergence
///
/// ```text
/// D_α(p_{X|Y} ‖ q_{X|Y} | p_Y) = α/(α−1) · log₂ Σ_y p(y) [Σ_x p(x|y)^α q(x|y)^{1−α}]^{1/α}
/// ```
///
/// Rows of `p_cond` and `q_cond` are indexed by signal. Signals with
/// `p(y) = 0` are skipped together with their rows. Only defined for `α ≠ 1`.
pub fn cond_renyi_div(
    p_cond: &[Vec<f64>],
    q_cond: &[Vec<f64>],
    p_y: &[f64],
    order: Order,
) -> Result<Bits> {
    let alpha = match check_order(order)? {
        Order::One => return Err(Error::UnsupportedOrder),
        Order::Alpha(a) => a,
    };
    check_pmf(p_y, "p_y")?;
    if p_cond.len() != p_y.len() {
        return Err(Error::LengthMismatch { expected: p_y.len(), actual: p_cond.len() });
    }
    if q_cond.len() != p_y.len() {
        return Err(Error::LengthMismatch { expected: p_y.len(), actual: q_cond.len() });
    }
    for ((py, p), q) in p_y.iter().zip(p_cond).zip(q_cond) {
        if *py > 0.0 {
            check_pair(p, q)?;
        }
    }
    Ok(cond_renyi_div_unchecked(p_cond, q_cond, p_y, alpha))
}

/// Flattened joint `p(x|y) p(y)`, signal-major.
pub fn product_joint(cond: &[Vec<f64>], p_y: &[f64]) -> Vec<f64> {
    cond.iter()
        .zip(p_y)
        .flat_map(|(row, &py)| row.iter().map(move |&v| v * py))
        .collect()
}

pub(crate) fn renyi_div_unchecked(p: &[f64], q: &[f64], order: Order) -> Bits {
    if p == q {
        // exact, instead of a rounding residue of either sign
        return 0.0;
    }
    match order {
        Order::One => kl_div_unchecked(p, q),
        Order::Alpha(alpha) => match log_power_sum(p, q, alpha) {
            None => f64::INFINITY,
            Some(ln_sum) => {
                // α < 1 with disjoint supports: ln_sum = −∞ and the ratio is +∞
                let d = ln_sum / ((alpha - 1.0) * LN_2);
                if d.is_nan() {
                    f64::INFINITY
                } else {
                    d
                }
            }
        },
    }
}

pub(crate) fn kl_div_unchecked(p: &[f64], q: &[f64]) -> Bits {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return f64::INFINITY;
        }
        acc += pi * (pi / qi).log2();
    }
    acc
}

pub(crate) fn cond_renyi_div_unchecked(
    p_cond: &[Vec<f64>],
    q_cond: &[Vec<f64>],
    p_y: &[f64],
    alpha: f64,
) -> Bits {
    let mut weighted = p_y.iter().enumerate().filter(|(_, &w)| w > 0.0);
    if let (Some((y, _)), None) = (weighted.next(), weighted.next()) {
        // a single signal carries all the weight
        return renyi_div_unchecked(&p_cond[y], &q_cond[y], Order::Alpha(alpha));
    }
    if p_cond == q_cond {
        return 0.0;
    }
    let mut outer = Vec::with_capacity(p_y.len());
    for ((&py, p), q) in p_y.iter().zip(p_cond).zip(q_cond) {
        if py == 0.0 {
            continue;
        }
        match log_power_sum(p, q, alpha) {
            None => return f64::INFINITY,
            Some(inner) => outer.push(py.ln() + inner / alpha),
        }
    }
    let ln_sum = log_sum_exp(outer.iter().copied());
    let d = alpha * ln_sum / ((alpha - 1.0) * LN_2);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// `ln Σ p^α q^{1−α}`, or `None` on a support violation with `α > 1`.
fn log_power_sum(p: &[f64], q: &[f64], alpha: f64) -> Option<f64> {
    let mut terms = Vec::with_capacity(p.len());
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            if alpha > 1.0 {
                return None;
            }
            continue;
        }
        terms.push(alpha * pi.ln() + (1.0 - alpha) * ln0(qi));
    }
    Some(log_sum_exp(terms.iter().copied()))
}

fn check_order(order: Order) -> Result<Order> {
    match order {
        Order::One => Ok(Order::One),
        Order::Alpha(a) => Order::new(a),
    }
}

fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { expected: p.len(), actual: q.len() });
    }
    check_pmf(p, "p")?;
    check_pmf(q, "q")
}

fn check_pmf(v: &[f64], name: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidDistribution(format!("{name} is empty")));
    }
    if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("{name}[{i}] = {x} is not a probability")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > PMF_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("{name} sums to {sum}")));
    }
    Ok(())
}
