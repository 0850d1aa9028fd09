//! Primitives for learning under probabilistic behavioral constraints.
//!
//! The central object is a training routine that is allowed to decline:
//! instead of always returning weights, it returns either a solution that
//! passed a held-out statistical safety test, or the explicit verdict
//! `NoSolutionFound`. This makes "I cannot certify a safe answer on this
//! much data" a first-class, well-behaved outcome rather than a silent
//! failure mode.
//!
//! What lives where:
//!
//! - [`bounds`]: one-sided confidence bounds on a sample mean (Hoeffding and
//!   Student-t forms), plus inflated variants that predict the bound a
//!   future, larger sample will produce. The t-distribution quantile is
//!   computed here from first principles.
//! - [`optimize`]: a derivative-free simplex search with seeded restarts,
//!   used for every candidate-selection step.
//! - [`data`]: a dense labeled dataset with a binary group tag per point and
//!   the deterministic prefix split used to form candidate and safety
//!   partitions.
//! - [`synthgen`]: a synthetic regression problem with two point types and
//!   known closed-form risk and discrimination values, used as ground truth
//!   in experiments.
//! - [`baselines`]: exact least squares and a penalty-regularized variant
//!   that trades accuracy against the sample discrimination statistic.
//! - [`regression`]: the constrained regression trainers. Both take the
//!   candidate/safety partition route: optimize a barrier-augmented
//!   objective on the first partition, then certify the result on the
//!   second with a confidence bound, returning `NoSolutionFound` when the
//!   certificate does not hold.
//! - [`rl`]: offline policy selection over box-uniform policy distributions
//!   with importance-sampling return estimates and per-candidate safety
//!   tests against the behavior policy's own performance.
//! - [`rng`]: the named random generator and sampling transforms that make
//!   every seeded run reproducible bit for bit.
//!
//! All numeric code is generic over the scalar type through [`real::Real`]
//! (instantiable at `f32` or `f64`); the aliases below fix the common
//! double-precision choices.

pub mod baselines;
pub mod bounds;
pub mod data;
pub mod optimize;
pub mod real;
pub mod regression;
pub mod rl;
pub mod rng;
pub mod stats;
pub mod synthgen;

mod special;

/// Double-precision dataset.
pub type Dataset64 = data::Dataset<f64>;
/// Double-precision labeled point.
pub type LabeledPoint64 = data::LabeledPoint<f64>;
/// Double-precision search configuration.
pub type SearchConfig64 = optimize::SearchConfig<f64>;
/// Double-precision trainer outcome.
pub type RegressionOutcome64 = regression::RegressionOutcome<f64>;
/// Double-precision box-uniform policy distribution.
pub type BoxDistribution64 = rl::BoxDistribution<f64>;
/// Double-precision logged episode.
pub type EpisodeRecord64 = rl::EpisodeRecord<f64>;
/// Double-precision policy-selection problem.
pub type RLProblem64 = rl::RLProblem<f64>;
