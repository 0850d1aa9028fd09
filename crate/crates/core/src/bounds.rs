//! One-sided confidence bounds on a sample mean.
//!
//! Two families, each in a plain form and a predictive form:
//!
//! - Hoeffding bounds need a known range bound `b` on `|Z|` and hold without
//!   distributional assumptions.
//! - Student-t bounds use the sample standard deviation and hold under the
//!   usual normality-of-the-mean approximation.
//!
//! The plain forms (`hoeffding_upper`, `t_upper`) bound the true mean from
//! the sample at hand. The predictive forms (`predict_hoeffding_upper`,
//! `predict_t_upper`) answer a different question asked during candidate
//! selection: "if a fresh sample of size `k` is drawn later and the plain
//! bound is recomputed on it, how large is that bound likely to be?" Both
//! predictive forms are deliberately inflated so that optimizing against
//! them leaves slack for the later test: the Hoeffding form drops the
//! factor two inside the square root, and the t form doubles the deviation
//! term.

use std::collections::HashMap;

use crate::real::Real;
use crate::special;
use crate::stats;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("sample vector is empty")]
    EmptySample,
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("confidence parameter must lie strictly inside (0, 1)")]
    InvalidConfidence,
    #[error("range bound must be finite and nonnegative")]
    InvalidRange,
    #[error("predicted sample size must be at least {need}")]
    InvalidPredictionCount { need: usize },
}

fn check_delta<R: Real>(delta: R) -> Result<(), BoundError> {
    if !(delta > R::zero() && delta < R::one()) {
        return Err(BoundError::InvalidConfidence);
    }
    Ok(())
}

fn check_range<R: Real>(b: R) -> Result<(), BoundError> {
    if !b.is_finite() || b < R::zero() {
        return Err(BoundError::InvalidRange);
    }
    Ok(())
}

/// Hoeffding upper confidence bound:
/// `mean(z) + b * sqrt(ln(1/delta) / (2 m))`.
///
/// With probability at least `1 - delta` over the draw of `z` (i.i.d.,
/// `|Z| <= b`), the true mean does not exceed the returned value.
pub fn hoeffding_upper<R: Real>(z: &[R], b: R, delta: R) -> Result<R, BoundError> {
    if z.is_empty() {
        return Err(BoundError::EmptySample);
    }
    check_range(b)?;
    check_delta(delta)?;
    let m = R::of(z.len() as f64);
    Ok(stats::mean(z) + b * (delta.recip().ln() / (R::of(2.0) * m)).sqrt())
}

/// Predicted Hoeffding bound for a future sample of size `k`:
/// `mean(z) + b * sqrt(ln(1/delta) / k)`.
///
/// The missing factor two in the denominator (relative to the plain bound
/// at size `k`) is intentional: the prediction is wider than the bound the
/// future sample is expected to produce, which biases candidate selection
/// toward weights that pass the later test with margin.
pub fn predict_hoeffding_upper<R: Real>(
    z: &[R],
    b: R,
    delta: R,
    k: usize,
) -> Result<R, BoundError> {
    if z.is_empty() {
        return Err(BoundError::EmptySample);
    }
    check_range(b)?;
    check_delta(delta)?;
    if k < 1 {
        return Err(BoundError::InvalidPredictionCount { need: 1 });
    }
    Ok(stats::mean(z) + b * (delta.recip().ln() / R::of(k as f64)).sqrt())
}

/// Quantile of Student's t distribution: the value `t` with
/// `P(T_dof <= t) = p`, for `p` strictly inside `(0, 1)` and `dof >= 1`.
///
/// Computed from first principles via the inverse regularized incomplete
/// beta function (`x = nu / (nu + t^2)` maps the two-sided tail mass onto
/// `I_x(nu/2, 1/2)`). Absolute error stays below 1e-6 across the ranges
/// the bounds use; the unit tests pin reference values to that tolerance.
pub fn t_quantile(p: f64, dof: usize) -> Result<f64, BoundError> {
    if dof < 1 {
        return Err(BoundError::TooFewSamples { need: 1, got: 0 });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(BoundError::InvalidConfidence);
    }
    let nu = dof as f64;
    // Two-sided tail mass corresponding to the one-sided probability p.
    let tail2 = 2.0 * if p >= 0.5 { 1.0 - p } else { p };
    let x = special::inv_inc_beta(0.5 * nu, 0.5, tail2);
    let t = if x > 0.0 {
        (nu * (1.0 - x) / x).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(if p >= 0.5 { t } else { -t })
}

/// Student-t upper confidence bound:
/// `mean(z) + (std(z) / sqrt(m)) * t_quantile(1 - delta, m - 1)`,
/// with the unbiased (`m - 1` denominator) standard deviation and
/// `m = z.len()`. Requires at least two samples.
pub fn t_upper<R: Real>(z: &[R], delta: R) -> Result<R, BoundError> {
    if z.len() < 2 {
        return Err(BoundError::TooFewSamples {
            need: 2,
            got: z.len(),
        });
    }
    check_delta(delta)?;
    let m = z.len();
    let q = t_quantile(1.0 - delta.wide(), m - 1)?;
    Ok(stats::mean(z) + stats::sample_std(z) / R::of(m as f64).sqrt() * R::of(q))
}

/// Predicted Student-t bound for a future sample of size `k`:
/// `mean(z) + 2 * (std(z) / sqrt(k)) * t_quantile(1 - delta, k - 1)`.
///
/// The doubled deviation term plays the same conservatism role as the
/// missing factor two in `predict_hoeffding_upper`: it anticipates both
/// the future bound's own width and the sampling error of the current
/// estimate. Requires two samples for the standard deviation and `k >= 2`
/// for the quantile.
pub fn predict_t_upper<R: Real>(z: &[R], delta: R, k: usize) -> Result<R, BoundError> {
    if z.len() < 2 {
        return Err(BoundError::TooFewSamples {
            need: 2,
            got: z.len(),
        });
    }
    check_delta(delta)?;
    if k < 2 {
        return Err(BoundError::InvalidPredictionCount { need: 2 });
    }
    let q = t_quantile(1.0 - delta.wide(), k - 1)?;
    Ok(stats::mean(z)
        + R::of(2.0) * stats::sample_std(z) / R::of(k as f64).sqrt() * R::of(q))
}

/// Memoized t-quantile lookups keyed by `(confidence, dof)`.
///
/// The selection loops ask for the same handful of quantiles thousands of
/// times; callers hold one table per run so repeated queries cost a hash
/// lookup instead of an inverse-beta solve.
#[derive(Default, Debug)]
pub struct TQuantileTable {
    cache: HashMap<(u64, u32), f64>,
}

impl TQuantileTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, p: f64, dof: usize) -> Result<f64, BoundError> {
        let key = (p.to_bits(), dof as u32);
        if let Some(&q) = self.cache.get(&key) {
            return Ok(q);
        }
        let q = t_quantile(p, dof)?;
        self.cache.insert(key, q);
        Ok(q)
    }
}
