//! Regression trainers that must certify a discrimination constraint on
//! held-out data before returning weights.
//!
//! All trainers share one shape:
//!
//! 1. split the data into a candidate partition `D1` and a safety
//!    partition `D2` (deterministic prefix split, optional seeded shuffle),
//! 2. minimize a candidate objective on `D1` that switches to a barrier
//!    value whenever a predicted confidence bound on the constraint
//!    exceeds the tolerance,
//! 3. recompute the real confidence bound on `D2` for the chosen weights
//!    and return them only if it passes; otherwise return
//!    [`RegressionOutcome::NoSolutionFound`].
//!
//! The constraint statistic is the paired error difference `Z`: for each
//! pair of one type-0 and one type-1 point, the prediction error on the
//! first minus the prediction error on the second. Bounding `mean(Z)` and
//! `mean(-Z)` simultaneously (each at confidence `delta / 2`) bounds the
//! absolute discrimination statistic.
//!
//! Two bound families give two trainers: the distribution-free Hoeffding
//! form (needs a range scale `b`, data-hungry) and the Student-t form
//! (needs only sample moments, approximate under non-normality). A third
//! entry point generalizes the t-form to arbitrary user-supplied
//! constraint estimators.

use std::fmt;

use crate::baselines::{least_squares, sample_mse, BaselineError};
use crate::bounds::{
    hoeffding_upper, predict_hoeffding_upper, predict_t_upper, t_upper, BoundError,
};
use crate::data::Dataset;
use crate::optimize::{minimize_candidate, SearchConfig};
use crate::real::Real;
use crate::rng::Stream;
use crate::stats;

/// Stream label for the optional pre-split shuffle.
const SHUFFLE_STREAM: u64 = 0x5348_5546;

/// Objective value marking an infeasible candidate in the general trainer.
const GENERAL_BARRIER: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RegressionError {
    #[error("tolerance eps must be nonnegative and finite")]
    InvalidTolerance,
    #[error("penalty lambda must be nonnegative and finite")]
    InvalidPenalty,
    #[error("dataset must contain both point types")]
    MissingType,
    #[error("need at least {need} error-difference pairs, got {got}")]
    TooFewPairs { need: usize, got: usize },
    #[error("dataset must hold at least {need} rows, got {got}")]
    DatasetTooSmall { need: usize, got: usize },
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}

/// Why a trainer declined to return weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NsfReason {
    /// A partition ended up without one of the two point types, so the
    /// constraint statistic does not exist there.
    PartitionMissingType,
    /// A constraint estimator produced fewer than two samples, too few
    /// for a t statistic.
    DegenerateEstimate,
    /// The candidate weights failed the held-out confidence-bound check.
    SafetyTestFailed,
}

impl fmt::Display for NsfReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NsfReason::PartitionMissingType => "a partition is missing one point type",
            NsfReason::DegenerateEstimate => "a constraint estimate had fewer than two samples",
            NsfReason::SafetyTestFailed => "the held-out safety test failed",
        };
        f.write_str(s)
    }
}

/// Outcome of a constrained trainer: weights that passed the safety test,
/// or an explicit refusal. The refusal is a sanctioned result, not an
/// error; error values are reserved for invalid inputs.
#[derive(Clone, Debug, PartialEq)]
pub enum RegressionOutcome<R> {
    Solution(Vec<R>),
    NoSolutionFound(NsfReason),
}

impl<R> RegressionOutcome<R> {
    pub fn is_solution(&self) -> bool {
        matches!(self, RegressionOutcome::Solution(_))
    }

    pub fn weights(&self) -> Option<&[R]> {
        match self {
            RegressionOutcome::Solution(w) => Some(w),
            RegressionOutcome::NoSolutionFound(_) => None,
        }
    }
}

/// One behavioral constraint for the general trainer: an estimator mapping
/// `(theta, dataset)` to a vector of unbiased per-sample estimates of
/// `g(theta)` (constraint satisfied when `g <= 0`), and the confidence
/// level the bound on it must hold at.
pub struct ConstraintSpec<R: Real> {
    pub estimator:
        Box<dyn Fn(&[R], &Dataset<R>) -> Result<Vec<R>, RegressionError> + Send + Sync>,
    pub delta: R,
    /// Short label used in diagnostics.
    pub tag: String,
}

impl<R: Real> ConstraintSpec<R> {
    pub fn new(
        tag: impl Into<String>,
        delta: R,
        estimator: impl Fn(&[R], &Dataset<R>) -> Result<Vec<R>, RegressionError>
            + Send
            + Sync
            + 'static,
    ) -> Self {
        ConstraintSpec {
            estimator: Box::new(estimator),
            delta,
            tag: tag.into(),
        }
    }
}

fn check_delta<R: Real>(delta: R) -> Result<(), RegressionError> {
    if !(delta > R::zero() && delta < R::one()) {
        return Err(BoundError::InvalidConfidence.into());
    }
    Ok(())
}

fn check_eps<R: Real>(eps: R) -> Result<(), RegressionError> {
    // Zero is admitted as a degenerate tolerance: every bound is then in
    // the barrier branch and every safety test with positive width fails.
    if !eps.is_finite() || eps < R::zero() {
        return Err(RegressionError::InvalidTolerance);
    }
    Ok(())
}

fn check_range<R: Real>(b: R) -> Result<(), RegressionError> {
    if !b.is_finite() || b < R::zero() {
        return Err(BoundError::InvalidRange.into());
    }
    Ok(())
}

fn check_lambda<R: Real>(lambda: R) -> Result<(), RegressionError> {
    if !lambda.is_finite() || lambda < R::zero() {
        return Err(RegressionError::InvalidPenalty);
    }
    Ok(())
}

/// Paired error differences `Z`.
///
/// The i-th type-0 point (in dataset order) is paired with the i-th
/// type-1 point; each entry is the prediction error of the type-0 member
/// minus the prediction error of the type-1 member. The vector has length
/// `min(m0, m1)`; surplus points of the majority type are unused.
pub fn paired_error_diffs<R: Real>(
    theta: &[R],
    d: &Dataset<R>,
) -> Result<Vec<R>, RegressionError> {
    if d.m0() == 0 || d.m1() == 0 {
        return Err(RegressionError::MissingType);
    }
    let pairs = d.m0().min(d.m1());
    let mut e0 = Vec::with_capacity(pairs);
    let mut e1 = Vec::with_capacity(pairs);
    for i in 0..d.m() {
        let side = if d.t(i) == 0 { &mut e0 } else { &mut e1 };
        if side.len() < pairs {
            side.push(d.predict(theta, i) - d.y(i));
        }
    }
    Ok(e0.iter().zip(&e1).map(|(&a, &b)| a - b).collect())
}

/// Paired prediction differences: same pairing as [`paired_error_diffs`]
/// but comparing raw predictions (`theta . x0 - theta . x1`), ignoring
/// labels. This is the per-pair estimate behind a "the model's outputs
/// must not differ between types" constraint.
pub fn paired_prediction_diffs<R: Real>(
    theta: &[R],
    d: &Dataset<R>,
) -> Result<Vec<R>, RegressionError> {
    if d.m0() == 0 || d.m1() == 0 {
        return Err(RegressionError::MissingType);
    }
    let pairs = d.m0().min(d.m1());
    let mut p0 = Vec::with_capacity(pairs);
    let mut p1 = Vec::with_capacity(pairs);
    for i in 0..d.m() {
        let side = if d.t(i) == 0 { &mut p0 } else { &mut p1 };
        if side.len() < pairs {
            side.push(d.predict(theta, i));
        }
    }
    Ok(p0.iter().zip(&p1).map(|(&a, &b)| a - b).collect())
}

fn negated<R: Real>(z: &[R]) -> Vec<R> {
    z.iter().map(|&v| -v).collect()
}

/// Candidate objective for the Hoeffding trainer.
///
/// Computes the two predicted Hoeffding bounds (on `Z` and `-Z`, each at
/// `delta / 2`, for a future sample of size `k`). If their max is within
/// `eps`, returns the sample mean squared error on `d1`; otherwise returns
/// the barrier value `b^2 + u*b - eps` where `u` is that max. The barrier
/// dominates every in-tolerance value on normalized data and grows with
/// the violation, steering the search back toward feasibility.
pub fn hoeffding_candidate_objective<R: Real>(
    theta: &[R],
    d1: &Dataset<R>,
    delta: R,
    eps: R,
    b: R,
    k: usize,
) -> Result<R, RegressionError> {
    check_eps(eps)?;
    let z = paired_error_diffs(theta, d1)?;
    let half = delta / R::of(2.0);
    let up = predict_hoeffding_upper(&z, b, half, k)?;
    let down = predict_hoeffding_upper(&negated(&z), b, half, k)?;
    let u = up.max(down);
    if u <= eps {
        Ok(sample_mse(theta, d1))
    } else {
        Ok(b * b + u * b - eps)
    }
}

/// Safety bound for the Hoeffding trainer: the larger of the two
/// one-sided Hoeffding bounds on `Z` and `-Z`, each at `delta / 2`. This
/// upper-bounds the absolute discrimination statistic with probability at
/// least `1 - delta` (when `b` bounds the range of `Z`; see the crate
/// docs for the caveat on `b`'s scale).
pub fn hoeffding_safety_bound<R: Real>(
    theta: &[R],
    d2: &Dataset<R>,
    delta: R,
    b: R,
) -> Result<R, RegressionError> {
    let z = paired_error_diffs(theta, d2)?;
    let half = delta / R::of(2.0);
    let up = hoeffding_upper(&z, b, half)?;
    let down = hoeffding_upper(&negated(&z), b, half)?;
    Ok(up.max(down))
}

/// Candidate objective for the Student-t trainer.
///
/// Same switch structure as [`hoeffding_candidate_objective`] with the
/// predicted t bounds. Inside tolerance the value is
/// `sample MSE + lambda * mean(Z)` (the linear term lets a positive
/// penalty trade accuracy for actively reducing the statistic); the
/// barrier is `b^2 + u*b + (lambda - 1) * eps`. The t-form needs no range
/// scale for its bounds, but the barrier still needs `b` to dominate the
/// in-tolerance values; callers pass the same scale the Hoeffding form
/// would use.
#[allow(clippy::too_many_arguments)]
pub fn ttest_candidate_objective<R: Real>(
    theta: &[R],
    d1: &Dataset<R>,
    delta: R,
    eps: R,
    k: usize,
    lambda: R,
    b: R,
) -> Result<R, RegressionError> {
    check_eps(eps)?;
    check_lambda(lambda)?;
    check_range(b)?;
    let z = paired_error_diffs(theta, d1)?;
    if z.len() < 2 {
        return Err(RegressionError::TooFewPairs { need: 2, got: z.len() });
    }
    let half = delta / R::of(2.0);
    let up = predict_t_upper(&z, half, k)?;
    let down = predict_t_upper(&negated(&z), half, k)?;
    let u = up.max(down);
    if u <= eps {
        Ok(sample_mse(theta, d1) + lambda * stats::mean(&z))
    } else {
        Ok(b * b + u * b + (lambda - R::one()) * eps)
    }
}

/// Safety bound for the Student-t trainer: the larger of the two
/// one-sided t bounds on `Z` and `-Z`, each at `delta / 2`. Requires at
/// least two pairs.
pub fn ttest_safety_bound<R: Real>(
    theta: &[R],
    d2: &Dataset<R>,
    delta: R,
) -> Result<R, RegressionError> {
    let z = paired_error_diffs(theta, d2)?;
    if z.len() < 2 {
        return Err(RegressionError::TooFewPairs { need: 2, got: z.len() });
    }
    let half = delta / R::of(2.0);
    let up = t_upper(&z, half)?;
    let down = t_upper(&negated(&z), half)?;
    Ok(up.max(down))
}

/// Splits per the config (optional seeded shuffle, then prefix split).
fn partition<R: Real>(d: &Dataset<R>, cfg: &SearchConfig<R>) -> (Dataset<R>, Dataset<R>) {
    let f = cfg.d1_fraction;
    assert!(
        f > R::zero() && f < R::one(),
        "candidate-partition fraction must lie in (0, 1)"
    );
    if cfg.shuffle {
        let mut stream = Stream::substream(cfg.seed, SHUFFLE_STREAM);
        d.shuffled(&mut stream).split_prefix(f)
    } else {
        d.split_prefix(f)
    }
}

/// Starting point for the candidate search: the caller's, or the
/// least-squares fit of the candidate partition when unspecified.
fn search_start<R: Real>(
    d1: &Dataset<R>,
    cfg: &SearchConfig<R>,
) -> Result<Vec<R>, RegressionError> {
    if cfg.initial.is_empty() {
        Ok(least_squares(d1)?.weights)
    } else {
        Ok(cfg.initial.clone())
    }
}

/// Hoeffding-bound trainer.
///
/// Partitions `d`, minimizes [`hoeffding_candidate_objective`] on the
/// candidate partition (predicting the bound a safety sample of size
/// `|D2|` will produce), then returns the weights only if
/// [`hoeffding_safety_bound`] on the safety partition is within `eps`.
/// Distribution-free but data-hungry: expect refusals until the sample
/// count is large.
pub fn ndlr<R: Real>(
    d: &Dataset<R>,
    delta: R,
    eps: R,
    b: R,
    cfg: &SearchConfig<R>,
) -> Result<RegressionOutcome<R>, RegressionError> {
    check_delta(delta)?;
    check_eps(eps)?;
    check_range(b)?;
    if d.m() < 2 {
        return Err(RegressionError::DatasetTooSmall { need: 2, got: d.m() });
    }
    let (d1, d2) = partition(d, cfg);
    if d1.m0() == 0 || d1.m1() == 0 || d2.m0() == 0 || d2.m1() == 0 {
        return Ok(RegressionOutcome::NoSolutionFound(
            NsfReason::PartitionMissingType,
        ));
    }
    let k = d2.m();
    let local = cfg.starting_at(search_start(&d1, cfg)?);
    let min = minimize_candidate(
        |theta| {
            hoeffding_candidate_objective(theta, &d1, delta, eps, b, k)
                .expect("inputs validated before the search")
        },
        &local,
    );
    let bound = hoeffding_safety_bound(&min.weights, &d2, delta, b)?;
    Ok(if bound <= eps {
        RegressionOutcome::Solution(min.weights)
    } else {
        RegressionOutcome::NoSolutionFound(NsfReason::SafetyTestFailed)
    })
}

/// Student-t trainer, with optional linear penalty.
///
/// `lambda = 0` is the plain form; `lambda > 0` adds `lambda * mean(Z)` to
/// the in-tolerance objective. `barrier_b` sets the barrier scale; when
/// absent it defaults to three times the largest absolute label observed
/// in `d`, which dominates any attainable in-tolerance objective value.
/// Needs far less data than [`ndlr`] but its guarantee leans on the
/// normality approximation of the paired-difference mean.
pub fn qndlr<R: Real>(
    d: &Dataset<R>,
    delta: R,
    eps: R,
    lambda: R,
    barrier_b: Option<R>,
    cfg: &SearchConfig<R>,
) -> Result<RegressionOutcome<R>, RegressionError> {
    check_delta(delta)?;
    check_eps(eps)?;
    check_lambda(lambda)?;
    let b = barrier_b.unwrap_or_else(|| R::of(3.0) * d.max_abs_y());
    check_range(b)?;
    if d.m() < 2 {
        return Err(RegressionError::DatasetTooSmall { need: 2, got: d.m() });
    }
    let (d1, d2) = partition(d, cfg);
    if d1.m0() == 0 || d1.m1() == 0 || d2.m0() == 0 || d2.m1() == 0 {
        return Ok(RegressionOutcome::NoSolutionFound(
            NsfReason::PartitionMissingType,
        ));
    }
    // The t statistic needs two pairs on each side.
    if d1.m0().min(d1.m1()) < 2 || d2.m0().min(d2.m1()) < 2 {
        return Ok(RegressionOutcome::NoSolutionFound(
            NsfReason::DegenerateEstimate,
        ));
    }
    let k = d2.m();
    let local = cfg.starting_at(search_start(&d1, cfg)?);
    let min = minimize_candidate(
        |theta| {
            ttest_candidate_objective(theta, &d1, delta, eps, k, lambda, b)
                .expect("inputs validated before the search")
        },
        &local,
    );
    let bound = ttest_safety_bound(&min.weights, &d2, delta)?;
    Ok(if bound <= eps {
        RegressionOutcome::Solution(min.weights)
    } else {
        RegressionOutcome::NoSolutionFound(NsfReason::SafetyTestFailed)
    })
}

/// General quasi-Seldonian trainer over arbitrary constraint estimators.
///
/// Maximizes `f_hat` on the candidate partition subject to, for every
/// constraint `i`, the predicted t bound
/// `mean(g_i) + 2 * std(g_i) / sqrt(k) * t(1 - delta_i, k - 1) <= 0`
/// with `k = |D2|` (infeasible points take a constant barrier plus the
/// total violation). The safety stage recomputes each estimate on the
/// safety partition and requires its plain t upper bound at `1 - delta_i`
/// to be `<= 0`, normalizing by the number of available estimates (which
/// is `|D2|` for per-point estimators, and the pair count for paired
/// estimators, making the two-sided paired specialization coincide with
/// [`qndlr`]'s safety decision).
///
/// Each constraint is tested independently at its own confidence level.
pub fn quasi_seldonian_general<R: Real>(
    d: &Dataset<R>,
    constraints: &[ConstraintSpec<R>],
    f_hat: impl Fn(&[R], &Dataset<R>) -> R,
    cfg: &SearchConfig<R>,
) -> Result<RegressionOutcome<R>, RegressionError> {
    for c in constraints {
        check_delta(c.delta)?;
    }
    if d.m() < 2 {
        return Err(RegressionError::DatasetTooSmall { need: 2, got: d.m() });
    }
    let (d1, d2) = partition(d, cfg);
    let k = d2.m();
    if k < 2 {
        return Err(BoundError::InvalidPredictionCount { need: 2 }.into());
    }
    // Estimators must produce usable vectors on the candidate partition
    // before the search starts; a failure here is a refusal, not a panic.
    let start = search_start(&d1, cfg)?;
    for c in constraints {
        match (c.estimator)(&start, &d1) {
            Ok(v) if v.len() >= 2 => {}
            _ => {
                return Ok(RegressionOutcome::NoSolutionFound(
                    NsfReason::DegenerateEstimate,
                ))
            }
        }
    }
    let barrier = R::of(GENERAL_BARRIER);
    let local = cfg.starting_at(start);
    let min = minimize_candidate(
        |theta| {
            let mut violation = R::zero();
            let mut feasible = true;
            for c in constraints {
                let bound = match (c.estimator)(theta, &d1) {
                    Ok(v) if v.len() >= 2 => {
                        predict_t_upper(&v, c.delta, k).unwrap_or_else(|_| barrier)
                    }
                    _ => barrier,
                };
                if bound > R::zero() {
                    feasible = false;
                    violation += bound;
                }
            }
            if feasible {
                -f_hat(theta, &d1)
            } else {
                barrier + violation
            }
        },
        &local,
    );
    for c in constraints {
        let v = match (c.estimator)(&min.weights, &d2) {
            Ok(v) if v.len() >= 2 => v,
            _ => {
                return Ok(RegressionOutcome::NoSolutionFound(
                    NsfReason::DegenerateEstimate,
                ))
            }
        };
        if t_upper(&v, c.delta)? > R::zero() {
            return Ok(RegressionOutcome::NoSolutionFound(
                NsfReason::SafetyTestFailed,
            ));
        }
    }
    Ok(RegressionOutcome::Solution(min.weights))
}
