//! Batch policy selection with per-constraint safety tests.
//!
//! The setting: a behavior distribution over policies generated a log of
//! episodes, one episode per sampled policy, each episode recording the
//! policy, a primary return, and one return per behavioral constraint.
//! From a fixed list of candidate policy distributions, the selector must
//! pick one that (with high confidence) does not degrade any constraint
//! return relative to the behavior distribution, or refuse.
//!
//! The selection procedure, for `l` candidates and per-constraint
//! confidence `delta_j`, splits each constraint's confidence across the
//! `l + 1` t-tests it runs (one threshold estimate plus one test per
//! candidate), so a union bound over all tests spends exactly `delta_j`:
//!
//! 1. threshold: `beta_j` is the one-sided t upper bound, at confidence
//!    `1 - delta_j / (l+1)`, on the mean behavior constraint return;
//! 2. per candidate `i`: importance-weight the in-support episodes by
//!    `c_i * pdf_i(p) / pdf_b(p)` (with `c_i` the behavior mass of the
//!    candidate's support, correcting for conditioning on in-support
//!    episodes); the candidate is unsafe if fewer than two episodes land
//!    in its support or the t lower bound on the weighted constraint
//!    return falls below `beta_j`;
//! 3. among safe candidates, return the one with the highest
//!    importance-weighted primary return, first best winning ties; refuse
//!    if none is safe.
//!
//! Policy distributions are axis-aligned boxes with uniform density, so
//! support checks, densities, and the support-mass constant `c_i` are all
//! closed-form. Candidate supports must sit inside the behavior support;
//! this is checked once at problem construction and nothing ever
//! evaluates a candidate density outside it.
//!
//! A two-parameter toy environment with closed-form expected returns
//! stands in for a real simulator, so selection quality (violation rates,
//! refusal rates) can be measured against exact ground truth.

use crate::bounds::t_upper;
use crate::real::Real;
use crate::rng::Stream;

/// Unit conversion between the two blood-glucose scales: episode returns
/// score concentrations in mg/dL, penalty formulas are stated in mmol/L.
pub const MG_DL_PER_MMOL: f64 = 18.018018;

/// Policies with first coordinate below this produce hypoglycemia-prone
/// glucose levels in the standard toy environment: their expected
/// constraint return sits strictly below every ridge policy's.
pub const HYPO_THRESHOLD_P1: f64 = 0.2;

/// Glucose level (mmol/L) maximizing the expected primary return in the
/// standard toy environment. Derived by minimizing the expected penalty
/// over the dip/none/spike noise mixture; the maximizer is interior to
/// the branch where the dip and the noiseless sample stay below the
/// penalty vertex and the spike lands above it.
pub const STANDARD_RIDGE_GLUCOSE: f64 = 5.7;

/// Midpoint-grid resolution per axis for ground-truth box averages.
const GROUND_TRUTH_GRID: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RlError {
    #[error("box bounds must be finite with lower < upper in every dimension")]
    InvalidBox,
    #[error("need at least {need} episodes, got {got}")]
    TooFewEpisodes { need: usize, got: usize },
    #[error("problem needs at least one candidate distribution")]
    NoCandidates,
    #[error("candidate support is not contained in the behavior support")]
    SupportNotContained,
    #[error("confidence delta must lie in (0, 1)")]
    InvalidConfidence,
    #[error("episode {episode} policy lies outside the behavior support")]
    OutsideBehaviorSupport { episode: usize },
    #[error("episode {episode} holds a non-finite value")]
    NonFinite { episode: usize },
    #[error("episode {episode} carries {got} constraint returns, problem declares {want}")]
    ConstraintCountMismatch { episode: usize, want: usize, got: usize },
    #[error("got {got} thresholds for {want} constraints")]
    ThresholdCountMismatch { want: usize, got: usize },
    #[error("threshold values must be finite")]
    NonFiniteThreshold,
    #[error("no episode falls inside the candidate support")]
    NoSupportedEpisodes,
    #[error("policy lies outside the admissible box")]
    OutsideAdmissible,
}

/// Uniform distribution over a two-dimensional axis-aligned box.
/// Invariant: lower < upper in both dimensions, all bounds finite.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDistribution<R> {
    lower: [R; 2],
    upper: [R; 2],
}

impl<R: Real> BoxDistribution<R> {
    pub fn new(lower: [R; 2], upper: [R; 2]) -> Result<Self, RlError> {
        for d in 0..2 {
            if !(lower[d].is_finite() && upper[d].is_finite() && lower[d] < upper[d]) {
                return Err(RlError::InvalidBox);
            }
        }
        Ok(BoxDistribution { lower, upper })
    }

    pub fn lower(&self) -> [R; 2] {
        self.lower
    }

    pub fn upper(&self) -> [R; 2] {
        self.upper
    }

    pub fn volume(&self) -> R {
        (self.upper[0] - self.lower[0]) * (self.upper[1] - self.lower[1])
    }

    /// Membership in the closed box.
    pub fn contains(&self, p: &[R; 2]) -> bool {
        (0..2).all(|d| self.lower[d] <= p[d] && p[d] <= self.upper[d])
    }

    /// Whether `other`'s support is a subset of this box's.
    pub fn contains_box(&self, other: &BoxDistribution<R>) -> bool {
        (0..2).all(|d| self.lower[d] <= other.lower[d] && other.upper[d] <= self.upper[d])
    }

    pub fn intersection_volume(&self, other: &BoxDistribution<R>) -> R {
        let mut v = R::one();
        for d in 0..2 {
            let lo = self.lower[d].max(other.lower[d]);
            let hi = self.upper[d].min(other.upper[d]);
            if hi <= lo {
                return R::zero();
            }
            v *= hi - lo;
        }
        v
    }

    /// Draws a policy uniformly from the box. Consumes exactly one
    /// generator word per dimension.
    pub fn sample(&self, stream: &mut Stream) -> [R; 2] {
        [
            R::of(stream.uniform_in(self.lower[0].wide(), self.upper[0].wide())),
            R::of(stream.uniform_in(self.lower[1].wide(), self.upper[1].wide())),
        ]
    }
}

/// Density of the box distribution at `p`: `1 / volume` inside the closed
/// box, zero outside.
pub fn box_pdf<R: Real>(mu: &BoxDistribution<R>, p: &[R; 2]) -> R {
    if mu.contains(p) {
        R::one() / mu.volume()
    } else {
        R::zero()
    }
}

/// Probability mass that `outer` assigns to `inner`'s support: the
/// intersection volume over `outer`'s volume, in closed form.
pub fn overlap_mass<R: Real>(inner: &BoxDistribution<R>, outer: &BoxDistribution<R>) -> R {
    inner.intersection_volume(outer) / outer.volume()
}

/// One logged episode: the policy that generated it, its primary return,
/// and one return per behavioral constraint. Invariant: all values finite.
#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeRecord<R> {
    pub policy: [R; 2],
    pub primary: R,
    pub constraints: Vec<R>,
}

/// A selection problem: the behavior distribution the episodes were drawn
/// from, the candidate distributions to choose between, and the
/// per-constraint confidence levels.
#[derive(Clone, Debug)]
pub struct RLProblem<R> {
    behavior: BoxDistribution<R>,
    candidates: Vec<BoxDistribution<R>>,
    deltas: Vec<R>,
}

impl<R: Real> RLProblem<R> {
    /// Validates that at least one candidate exists, every candidate's
    /// support sits inside the behavior support, and every confidence
    /// level lies in (0, 1).
    pub fn new(
        behavior: BoxDistribution<R>,
        candidates: Vec<BoxDistribution<R>>,
        deltas: Vec<R>,
    ) -> Result<Self, RlError> {
        if candidates.is_empty() {
            return Err(RlError::NoCandidates);
        }
        if !candidates.iter().all(|c| behavior.contains_box(c)) {
            return Err(RlError::SupportNotContained);
        }
        if !deltas.iter().all(|&d| d > R::zero() && d < R::one()) {
            return Err(RlError::InvalidConfidence);
        }
        Ok(RLProblem {
            behavior,
            candidates,
            deltas,
        })
    }

    pub fn behavior(&self) -> &BoxDistribution<R> {
        &self.behavior
    }

    pub fn candidates(&self) -> &[BoxDistribution<R>] {
        &self.candidates
    }

    pub fn deltas(&self) -> &[R] {
        &self.deltas
    }
}

/// Result of a selection run: the index of the chosen candidate (into the
/// problem's candidate list), or an explicit refusal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RLOutcome {
    Chosen(usize),
    NoSolutionFound,
}

impl RLOutcome {
    pub fn is_solution(&self) -> bool {
        matches!(self, RLOutcome::Chosen(_))
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            RLOutcome::Chosen(i) => Some(*i),
            RLOutcome::NoSolutionFound => None,
        }
    }
}

/// Primary penalty for a blood-glucose sample `bg` in mg/dL: quadratic
/// distance of `bg` in mmol/L from the target level 6, weighted five
/// times harsher below target (hypoglycemia) than above.
pub fn reward_r<R: Real>(bg: R) -> R {
    let x = bg / R::of(MG_DL_PER_MMOL) - R::of(6.0);
    if x < R::zero() {
        -(x * x) / R::of(5.0)
    } else {
        -(x * x) / R::of(10.0)
    }
}

/// Constraint penalty: the hypoglycemia branch of [`reward_r`] alone,
/// zero at or above target. Satisfies `reward_r1(bg) >= reward_r(bg)`
/// everywhere.
pub fn reward_r1<R: Real>(bg: R) -> R {
    let x = bg / R::of(MG_DL_PER_MMOL) - R::of(6.0);
    if x < R::zero() {
        -(x * x) / R::of(5.0)
    } else {
        R::zero()
    }
}

fn validate_episodes<R: Real>(
    episodes: &[EpisodeRecord<R>],
    problem: &RLProblem<R>,
) -> Result<(), RlError> {
    if episodes.len() < 2 {
        return Err(RlError::TooFewEpisodes {
            need: 2,
            got: episodes.len(),
        });
    }
    let n = problem.deltas.len();
    for (k, e) in episodes.iter().enumerate() {
        if e.constraints.len() != n {
            return Err(RlError::ConstraintCountMismatch {
                episode: k,
                want: n,
                got: e.constraints.len(),
            });
        }
        let finite = e.policy.iter().all(|v| v.is_finite())
            && e.primary.is_finite()
            && e.constraints.iter().all(|v| v.is_finite());
        if !finite {
            return Err(RlError::NonFinite { episode: k });
        }
        if !problem.behavior.contains(&e.policy) {
            return Err(RlError::OutsideBehaviorSupport { episode: k });
        }
    }
    Ok(())
}

/// Importance-weighted return estimate for one candidate distribution:
/// `c * sum(w_k * ret_k) / count` over the episodes inside the
/// candidate's support, with `w_k` the candidate-to-behavior density
/// ratio and `c` the behavior mass of the candidate's support. Unbiased
/// for the expected return under the candidate distribution.
pub fn importance_estimate<R: Real>(
    episodes: &[EpisodeRecord<R>],
    candidate: &BoxDistribution<R>,
    behavior: &BoxDistribution<R>,
    select: impl Fn(&EpisodeRecord<R>) -> R,
) -> Result<R, RlError> {
    if !behavior.contains_box(candidate) {
        return Err(RlError::SupportNotContained);
    }
    let c = overlap_mass(candidate, behavior);
    let mut total = R::zero();
    let mut count = 0usize;
    for e in episodes {
        if candidate.contains(&e.policy) {
            total += box_pdf(candidate, &e.policy) / box_pdf(behavior, &e.policy) * select(e);
            count += 1;
        }
    }
    if count == 0 {
        return Err(RlError::NoSupportedEpisodes);
    }
    Ok(c * total / R::of(count as f64))
}

fn negated<R: Real>(z: &[R]) -> Vec<R> {
    z.iter().map(|&v| -v).collect()
}

/// Shared selection core. `thresholds` overrides the data-derived
/// `beta_j` when present; `enforce` disables the safety tests entirely
/// (for the unconstrained baseline).
fn select_candidate<R: Real>(
    episodes: &[EpisodeRecord<R>],
    problem: &RLProblem<R>,
    thresholds: Option<&[R]>,
    enforce: bool,
) -> Result<RLOutcome, RlError> {
    validate_episodes(episodes, problem)?;
    let l = problem.candidates.len();
    let n = problem.deltas.len();
    let share = R::of((l + 1) as f64);
    let budget: Vec<R> = problem.deltas.iter().map(|&dj| dj / share).collect();
    let beta: Vec<R> = match thresholds {
        Some(t) => {
            if t.len() != n {
                return Err(RlError::ThresholdCountMismatch {
                    want: n,
                    got: t.len(),
                });
            }
            if !t.iter().all(|v| v.is_finite()) {
                return Err(RlError::NonFiniteThreshold);
            }
            t.to_vec()
        }
        None => (0..n)
            .map(|j| {
                let z: Vec<R> = episodes.iter().map(|e| e.constraints[j]).collect();
                t_upper(&z, budget[j]).expect("episode count and confidence already validated")
            })
            .collect(),
    };
    let mut best: Option<(usize, R)> = None;
    for (i, cand) in problem.candidates.iter().enumerate() {
        let c = overlap_mass(cand, &problem.behavior);
        // Per-episode scale c * pdf_i(p) / pdf_b(p) for in-support episodes.
        let scaled: Vec<(usize, R)> = episodes
            .iter()
            .enumerate()
            .filter(|(_, e)| cand.contains(&e.policy))
            .map(|(k, e)| {
                (
                    k,
                    c * (box_pdf(cand, &e.policy) / box_pdf(&problem.behavior, &e.policy)),
                )
            })
            .collect();
        if enforce && n > 0 {
            // A t test needs two samples; fewer in-support episodes means
            // the candidate cannot be certified.
            if scaled.len() < 2 {
                continue;
            }
            let safe = (0..n).all(|j| {
                let rho: Vec<R> = scaled
                    .iter()
                    .map(|&(k, cw)| cw * episodes[k].constraints[j])
                    .collect();
                let lower = -t_upper(&negated(&rho), budget[j])
                    .expect("length and confidence already validated");
                lower >= beta[j]
            });
            if !safe {
                continue;
            }
        }
        let perf = match importance_estimate(episodes, cand, &problem.behavior, |e| e.primary) {
            Ok(v) => v,
            // Only reachable with the safety tests off (or no constraints):
            // an inestimable candidate never beats an estimable one.
            Err(RlError::NoSupportedEpisodes) => R::neg_infinity(),
            Err(e) => return Err(e),
        };
        let better = match best {
            None => true,
            Some((_, bp)) => perf > bp,
        };
        if better {
            best = Some((i, perf));
        }
    }
    Ok(match best {
        Some((i, _)) => RLOutcome::Chosen(i),
        None => RLOutcome::NoSolutionFound,
    })
}

/// Constrained selection with data-derived thresholds: candidate `i` is
/// safe for constraint `j` when the t lower bound on its weighted
/// constraint return is at least the t upper bound on the raw behavior
/// constraint return, both at confidence `1 - delta_j / (l+1)`. Returns
/// the best safe candidate by estimated primary return, or refuses.
pub fn quasi_seldonian_rl<R: Real>(
    episodes: &[EpisodeRecord<R>],
    problem: &RLProblem<R>,
) -> Result<RLOutcome, RlError> {
    select_candidate(episodes, problem, None, true)
}

/// Constrained selection against fixed thresholds: identical to
/// [`quasi_seldonian_rl`] except `beta_j` is supplied by the caller
/// instead of estimated from the behavior returns.
pub fn absolute_threshold_constraint<R: Real>(
    episodes: &[EpisodeRecord<R>],
    problem: &RLProblem<R>,
    thresholds: &[R],
) -> Result<RLOutcome, RlError> {
    select_candidate(episodes, problem, Some(thresholds), true)
}

/// Baseline with the safety tests disabled: every candidate is eligible
/// and the best estimated primary return wins, so a candidate is always
/// returned.
pub fn unconstrained_rl<R: Real>(
    episodes: &[EpisodeRecord<R>],
    problem: &RLProblem<R>,
) -> Result<RLOutcome, RlError> {
    select_candidate(episodes, problem, None, false)
}

/// Two-parameter stochastic environment with closed-form expected
/// returns.
///
/// A policy `p` in the admissible box maps to a glucose level
/// `G(p) = base + ridge_gain * p1 + cross_gain * p2` (mmol/L). One
/// episode draws `samples_per_episode` glucose samples at
/// `G(p) + noise`, where the noise is equiprobably `-dip`, `0`, or
/// `+spike`, and sums [`reward_r`] and [`reward_r1`] over the samples
/// (converting to mg/dL first). Since the noise is a three-point mixture,
/// the expected returns are exact three-term averages, giving analytic
/// ground truth for every policy and (by integration) every policy box.
///
/// The standard parameters put the best expected primary return on the
/// glucose level [`STANDARD_RIDGE_GLUCOSE`]: below it the dip samples
/// pay the harsh hypoglycemia penalty, above it the spike samples drift
/// far over target. Low `p1` forces low `G`, so policies there degrade
/// the constraint return (hypoglycemia), while the asymmetric noise keeps
/// them competitive on the primary return; an unconstrained selector is
/// regularly lured into them.
#[derive(Clone, Debug)]
pub struct ToyEnv<R> {
    /// Glucose level at p = (0, 0), mmol/L.
    pub base: R,
    /// Glucose gain along the first policy coordinate.
    pub ridge_gain: R,
    /// Glucose gain along the second policy coordinate.
    pub cross_gain: R,
    /// Magnitude of the downward noise outcome.
    pub dip: R,
    /// Magnitude of the upward noise outcome.
    pub spike: R,
    /// Glucose samples per episode.
    pub samples_per_episode: usize,
    /// Policies the environment accepts; also the behavior support.
    pub admissible: BoxDistribution<R>,
}

impl<R: Real> ToyEnv<R> {
    pub fn standard() -> Self {
        ToyEnv {
            base: R::of(4.5),
            ridge_gain: R::of(3.0),
            cross_gain: R::of(0.5),
            dip: R::of(0.5),
            spike: R::of(2.5),
            samples_per_episode: 3,
            admissible: BoxDistribution::new([R::zero(), R::zero()], [R::one(), R::one()])
                .expect("unit box"),
        }
    }

    /// Standard parameters with the noise removed; episodes become
    /// deterministic and equal the closed-form expectations exactly.
    pub fn noiseless() -> Self {
        ToyEnv {
            dip: R::zero(),
            spike: R::zero(),
            ..Self::standard()
        }
    }

    /// Glucose level in mmol/L for a policy.
    pub fn glucose_level(&self, p: &[R; 2]) -> R {
        self.base + self.ridge_gain * p[0] + self.cross_gain * p[1]
    }

    fn sample_rewards(&self, g: R, noise: R) -> (R, R) {
        let bg = R::of(MG_DL_PER_MMOL) * (g + noise);
        (reward_r(bg), reward_r1(bg))
    }

    /// Runs one episode. Consumes exactly `samples_per_episode` generator
    /// words (one per noise draw).
    pub fn episode(&self, p: [R; 2], stream: &mut Stream) -> Result<EpisodeRecord<R>, RlError> {
        if !self.admissible.contains(&p) {
            return Err(RlError::OutsideAdmissible);
        }
        let g = self.glucose_level(&p);
        let mut r = R::zero();
        let mut r1 = R::zero();
        for _ in 0..self.samples_per_episode {
            let noise = match stream.index(3) {
                0 => -self.dip,
                1 => R::zero(),
                _ => self.spike,
            };
            let (a, b) = self.sample_rewards(g, noise);
            r += a;
            r1 += b;
        }
        Ok(EpisodeRecord {
            policy: p,
            primary: r,
            constraints: vec![r1],
        })
    }

    /// Exact expected episode returns `(E[r | p], E[r1 | p])`: the
    /// three-point noise mixture makes the expectation a three-term
    /// average per sample. With the noise zeroed out this walks the same
    /// accumulation as [`ToyEnv::episode`], so noise-free episodes match
    /// it bit for bit.
    pub fn expected_returns(&self, p: &[R; 2]) -> (R, R) {
        let g = self.glucose_level(p);
        if self.dip == R::zero() && self.spike == R::zero() {
            let mut r = R::zero();
            let mut r1 = R::zero();
            for _ in 0..self.samples_per_episode {
                let (a, b) = self.sample_rewards(g, R::zero());
                r += a;
                r1 += b;
            }
            return (r, r1);
        }
        let k = R::of(self.samples_per_episode as f64);
        let third = R::of(3.0);
        let (la, lb) = self.sample_rewards(g, -self.dip);
        let (ma, mb) = self.sample_rewards(g, R::zero());
        let (ha, hb) = self.sample_rewards(g, self.spike);
        (k * (la + ma + ha) / third, k * (lb + mb + hb) / third)
    }

    pub fn expected_r(&self, p: &[R; 2]) -> R {
        self.expected_returns(p).0
    }

    pub fn expected_r1(&self, p: &[R; 2]) -> R {
        self.expected_returns(p).1
    }

    /// Average expected returns over a policy box, by midpoint rule on a
    /// fixed grid. The integrand is piecewise quadratic in the policy
    /// with a continuous derivative at the branch seams, so the grid
    /// error is negligible against the tolerances used on it.
    pub fn box_expected_returns(&self, b: &BoxDistribution<R>) -> (R, R) {
        let n = GROUND_TRUTH_GRID;
        let nf = R::of(n as f64);
        let half = R::of(0.5);
        let (lo, hi) = (b.lower(), b.upper());
        let mut sum_r = R::zero();
        let mut sum_r1 = R::zero();
        for i in 0..n {
            let x = lo[0] + (R::of(i as f64) + half) / nf * (hi[0] - lo[0]);
            for j in 0..n {
                let y = lo[1] + (R::of(j as f64) + half) / nf * (hi[1] - lo[1]);
                let (a, c) = self.expected_returns(&[x, y]);
                sum_r += a;
                sum_r1 += c;
            }
        }
        let cells = nf * nf;
        (sum_r / cells, sum_r1 / cells)
    }

    pub fn box_expected_r(&self, b: &BoxDistribution<R>) -> R {
        self.box_expected_returns(b).0
    }

    pub fn box_expected_r1(&self, b: &BoxDistribution<R>) -> R {
        self.box_expected_returns(b).1
    }

    /// Policy on the best-expected-primary-return glucose level for the
    /// standard parameters, at the given second coordinate:
    /// `p1 = (STANDARD_RIDGE_GLUCOSE - base - cross_gain * p2) / ridge_gain`.
    pub fn ridge_policy(&self, p2: R) -> [R; 2] {
        let p1 = (R::of(STANDARD_RIDGE_GLUCOSE) - self.base - self.cross_gain * p2)
            / self.ridge_gain;
        [p1, p2]
    }

    /// The 27 candidate boxes: three shapes, each a quarter of the
    /// admissible area (half-by-half, wide, and tall), placed at the
    /// left/center/right and bottom/middle/top of each axis. Edge
    /// placements share the admissible boundary exactly, so every tile
    /// sits inside the admissible box. Order: shapes outermost, then
    /// horizontal placement, then vertical.
    pub fn tiled_candidates(&self) -> Vec<BoxDistribution<R>> {
        let shapes = [(0.5, 0.5), (0.625, 0.4), (0.4, 0.625)];
        let lo = self.admissible.lower();
        let hi = self.admissible.upper();
        let mut out = Vec::with_capacity(27);
        for &(fw, fh) in &shapes {
            let xs = axis_slots(lo[0], hi[0], R::of(fw));
            let ys = axis_slots(lo[1], hi[1], R::of(fh));
            for &(x0, x1) in &xs {
                for &(y0, y1) in &ys {
                    out.push(
                        BoxDistribution::new([x0, y0], [x1, y1])
                            .expect("tile bounds inside a valid box"),
                    );
                }
            }
        }
        out
    }

    /// Draws `m` episodes with policies sampled from `policy_dist`, which
    /// must sit inside the admissible box. Consumes exactly
    /// `2 + samples_per_episode` generator words per episode (policy,
    /// then noise).
    pub fn episodes_from(
        &self,
        policy_dist: &BoxDistribution<R>,
        m: usize,
        stream: &mut Stream,
    ) -> Result<Vec<EpisodeRecord<R>>, RlError> {
        if !self.admissible.contains_box(policy_dist) {
            return Err(RlError::OutsideAdmissible);
        }
        (0..m)
            .map(|_| {
                let p = policy_dist.sample(stream);
                self.episode(p, stream)
            })
            .collect()
    }
}

/// Left, centered, and right placements of a window of width
/// `frac * (hi - lo)` inside `[lo, hi]`; the edge placements reuse the
/// interval's own endpoints so containment is exact.
fn axis_slots<R: Real>(lo: R, hi: R, frac: R) -> [(R, R); 3] {
    let span = hi - lo;
    let w = frac * span;
    let mid = lo + (span - w) / R::of(2.0);
    [(lo, lo + w), (mid, mid + w), (hi - w, hi)]
}
