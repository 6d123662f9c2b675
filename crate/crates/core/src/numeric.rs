//! Small floating-point helpers shared by the divergence and utility code.

pub(crate) const LN_2: f64 = std::f64::consts::LN_2;

/// `ln Σ exp(x_i)`, returning `-∞` for an empty or all-`-∞` input.
///
/// Accepts `+∞` entries (the result is then `+∞`).
pub(crate) fn log_sum_exp<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = terms.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = iter.map(|x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Natural log that maps `0` to `-∞` without warnings.
#[inline]
pub(crate) fn ln0(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// Index of the first maximum; ties go to the smallest index.
pub(crate) fn argmax_first<I: IntoIterator<Item = f64>>(values: I) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if i == 0 || v > best_val {
            best = i;
            best_val = v;
        }
    }
    best
}

/// Softmax of log-weights. Terms at `-∞` receive weight zero.
pub(crate) fn normalize_log_weights(log_w: &[f64]) -> Vec<f64> {
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    debug_assert!(max.is_finite(), "no finite log-weight");
    let w: Vec<f64> = log_w.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|x| x / sum).collect()
}
