//! Derivative-free minimization for candidate selection.
//!
//! The candidate objectives are cheap to evaluate, nonsmooth at the barrier
//! switch, and low-dimensional, which is exactly the regime where a
//! Nelder-Mead simplex search with a few seeded restarts is a sturdy
//! default. The search is fully deterministic given its seed.

use crate::real::Real;
use crate::rng::Stream;

/// Knobs for candidate selection. One struct covers both the optimizer and
/// the data-partition step, since the two travel together through every
/// trainer call.
#[derive(Clone, Debug)]
pub struct SearchConfig<R: Real> {
    /// Fraction of the data assigned to the candidate partition; the rest
    /// is held out for the safety test.
    pub d1_fraction: R,
    /// Shuffle rows (seeded) before the prefix split. Off by default: the
    /// generators already produce exchangeable rows, and a fixed split
    /// keeps runs reproducible byte for byte.
    pub shuffle: bool,
    /// Starting point. Trainers treat an empty vector as "start from the
    /// unconstrained least-squares fit of the candidate partition".
    pub initial: Vec<R>,
    /// Edge length of the initial simplex and scale of restart jitter.
    pub init_step: R,
    /// Total objective-evaluation budget across all restarts.
    pub max_evals: usize,
    /// Convergence: spread of objective values across the simplex.
    pub f_tolerance: R,
    /// Convergence: simplex diameter in the infinity norm.
    pub x_tolerance: R,
    /// Extra seeded starts after the first descent, each jittered around
    /// the best point found so far.
    pub restarts: usize,
    /// Seed for restart jitter (and the pre-split shuffle when enabled).
    pub seed: u64,
}

impl<R: Real> Default for SearchConfig<R> {
    fn default() -> Self {
        SearchConfig {
            d1_fraction: R::of(0.2),
            shuffle: false,
            initial: Vec::new(),
            init_step: R::of(0.5),
            max_evals: 4000,
            f_tolerance: R::of(1e-8),
            x_tolerance: R::of(1e-8),
            restarts: 2,
            seed: 0,
        }
    }
}

impl<R: Real> SearchConfig<R> {
    /// Same configuration with a different starting point.
    pub fn starting_at(&self, initial: Vec<R>) -> Self {
        SearchConfig {
            initial,
            ..self.clone()
        }
    }
}

/// Result of a search: the best point ever evaluated, which by
/// construction is never worse than any simplex vertex visited.
#[derive(Clone, Debug)]
pub struct Minimum<R> {
    pub weights: Vec<R>,
    pub value: R,
    /// True when at least one restart met a convergence tolerance rather
    /// than exhausting its evaluation budget.
    pub converged: bool,
    /// Objective evaluations actually spent.
    pub evals: usize,
}

// Standard simplex coefficients: reflection, expansion, contraction, shrink.
const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const BETA: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `objective` with Nelder-Mead plus seeded restarts.
///
/// `cfg.initial` must be nonempty. The evaluation budget is split evenly
/// across `restarts + 1` rounds; every round after the first starts from
/// the best point so far jittered by uniform noise of scale
/// `2 * init_step` per coordinate.
pub fn minimize_candidate<R: Real, F: Fn(&[R]) -> R>(
    objective: F,
    cfg: &SearchConfig<R>,
) -> Minimum<R> {
    assert!(
        !cfg.initial.is_empty(),
        "minimize_candidate needs an explicit starting point"
    );
    let rounds = cfg.restarts + 1;
    let per_round = (cfg.max_evals / rounds).max(50);
    let mut jitter = Stream::substream(cfg.seed, 0x726573_74); // restart jitter stream
    let mut best_x = cfg.initial.clone();
    let mut best_f = objective(&best_x);
    let mut evals = 1usize;
    let mut converged = false;
    for round in 0..rounds {
        let start: Vec<R> = if round == 0 {
            cfg.initial.clone()
        } else {
            best_x
                .iter()
                .map(|&x| x + R::of(jitter.uniform_in(-2.0, 2.0)) * cfg.init_step)
                .collect()
        };
        converged |= nelder_mead(
            &objective,
            &start,
            cfg.init_step,
            cfg.f_tolerance,
            cfg.x_tolerance,
            per_round,
            &mut evals,
            &mut best_x,
            &mut best_f,
        );
    }
    Minimum {
        weights: best_x,
        value: best_f,
        converged,
        evals,
    }
}

/// One simplex descent within an evaluation budget. Updates the running
/// best-ever point on every single evaluation. Returns whether a
/// convergence tolerance was met.
#[allow(clippy::too_many_arguments)]
fn nelder_mead<R: Real, F: Fn(&[R]) -> R>(
    objective: &F,
    start: &[R],
    init_step: R,
    ftol: R,
    xtol: R,
    budget: usize,
    evals: &mut usize,
    best_x: &mut Vec<R>,
    best_f: &mut R,
) -> bool {
    let n = start.len();
    let entry = *evals;
    let eval = |x: &[R], evals: &mut usize, best_x: &mut Vec<R>, best_f: &mut R| -> R {
        let f = objective(x);
        *evals += 1;
        if f < *best_f {
            *best_f = f;
            best_x.clear();
            best_x.extend_from_slice(x);
        }
        f
    };

    let mut xs: Vec<Vec<R>> = Vec::with_capacity(n + 1);
    let mut fs: Vec<R> = Vec::with_capacity(n + 1);
    xs.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += init_step;
        xs.push(v);
    }
    for x in &xs {
        fs.push(eval(x, evals, best_x, best_f));
    }

    loop {
        // Order vertices by objective value (stable, so ties keep their
        // encounter order and the search stays deterministic).
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fs[a].partial_cmp(&fs[b]).unwrap_or(std::cmp::Ordering::Equal));
        let xs_old = xs.clone();
        let fs_old = fs.clone();
        for (slot, &src) in order.iter().enumerate() {
            xs[slot] = xs_old[src].clone();
            fs[slot] = fs_old[src];
        }

        let spread = fs[n] - fs[0];
        let mut diameter = R::zero();
        for v in xs.iter().skip(1) {
            for j in 0..n {
                diameter = diameter.max((v[j] - xs[0][j]).abs());
            }
        }
        if spread <= ftol || diameter <= xtol {
            return true;
        }
        if *evals - entry + 2 > budget {
            return false;
        }

        // Centroid of all vertices except the worst.
        let mut c = vec![R::zero(); n];
        for v in xs.iter().take(n) {
            for j in 0..n {
                c[j] += v[j];
            }
        }
        let inv = R::of(n as f64).recip();
        for cj in c.iter_mut() {
            *cj *= inv;
        }

        let reflect: Vec<R> = (0..n)
            .map(|j| c[j] + R::of(ALPHA) * (c[j] - xs[n][j]))
            .collect();
        let fr = eval(&reflect, evals, best_x, best_f);

        if fr < fs[0] {
            let expand: Vec<R> = (0..n)
                .map(|j| c[j] + R::of(GAMMA) * (reflect[j] - c[j]))
                .collect();
            let fe = eval(&expand, evals, best_x, best_f);
            if fe < fr {
                xs[n] = expand;
                fs[n] = fe;
            } else {
                xs[n] = reflect;
                fs[n] = fr;
            }
        } else if fr < fs[n - 1] {
            xs[n] = reflect;
            fs[n] = fr;
        } else {
            // Contract toward the better of the reflected and worst points.
            let toward = if fr < fs[n] { &reflect } else { &xs[n] };
            let contract: Vec<R> = (0..n)
                .map(|j| c[j] + R::of(BETA) * (toward[j] - c[j]))
                .collect();
            let fc = eval(&contract, evals, best_x, best_f);
            if fc < fr.min(fs[n]) {
                xs[n] = contract;
                fs[n] = fc;
            } else {
                // Shrink every vertex toward the best one.
                if *evals - entry + n > budget {
                    return false;
                }
                for i in 1..=n {
                    for j in 0..n {
                        xs[i][j] = xs[0][j] + R::of(SHRINK) * (xs[i][j] - xs[0][j]);
                    }
                    let f = eval(&xs[i].clone(), evals, best_x, best_f);
                    fs[i] = f;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;

    fn cfg2(initial: Vec<f64>) -> SearchConfig<f64> {
        SearchConfig {
            initial,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn finds_quadratic_minimum() {
        let min = minimize_candidate(
            |w| (w[0] - 3.0).powi(2) + (w[1] + 1.0).powi(2),
            &cfg2(vec![0.0, 0.0]),
        );
        assert!(min.converged);
        assert!((min.weights[0] - 3.0).abs() < 1e-4, "{:?}", min.weights);
        assert!((min.weights[1] + 1.0).abs() < 1e-4, "{:?}", min.weights);
    }

    #[test]
    fn handles_nonsmooth_objectives() {
        let min = minimize_candidate(|w| w[0].abs() + 2.0 * w[1].abs(), &cfg2(vec![1.7, -2.3]));
        assert!(min.value < 1e-4, "value {}", min.value);
    }

    #[test]
    fn returned_value_is_best_ever_evaluated() {
        let seen = RefCell::new(Vec::new());
        let min = minimize_candidate(
            |w: &[f64]| {
                // Rough landscape with plateaus to exercise every branch.
                let f = (w[0].sin() * 3.0).floor() + 0.01 * (w[0] - 2.0).powi(2);
                seen.borrow_mut().push(f);
                f
            },
            &cfg2(vec![0.0]),
        );
        let best_seen = seen.borrow().iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(min.value, best_seen);
        assert_eq!(min.evals, seen.borrow().len());
    }

    #[test]
    fn same_seed_gives_identical_results() {
        let run = || {
            minimize_candidate(
                |w: &[f64]| (w[0].powi(2) - 1.0).powi(2) + 0.3 * (w[1] - 0.5).powi(2),
                &SearchConfig {
                    initial: vec![0.3, 0.0],
                    restarts: 4,
                    seed: 99,
                    ..SearchConfig::default()
                },
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.value, b.value);
        assert_eq!(a.evals, b.evals);
    }

    #[test]
    fn restarts_never_worsen_the_result() {
        let obj = |w: &[f64]| (w[0].powi(2) - 1.0).powi(2) + 0.1 * w[0];
        let base = SearchConfig {
            initial: vec![0.9],
            seed: 7,
            ..SearchConfig::default()
        };
        let plain = minimize_candidate(obj, &SearchConfig { restarts: 0, ..base.clone() });
        let retried = minimize_candidate(obj, &SearchConfig { restarts: 5, ..base });
        assert!(retried.value <= plain.value);
    }

    #[test]
    fn respects_evaluation_budget() {
        let min = minimize_candidate(
            |w: &[f64]| (w[0] - 3.0).powi(2),
            &SearchConfig {
                initial: vec![0.0],
                max_evals: 120,
                restarts: 1,
                f_tolerance: 0.0,
                x_tolerance: 0.0,
                ..SearchConfig::default()
            },
        );
        // Budget plus at most one overshoot per round boundary.
        assert!(min.evals <= 125, "evals {}", min.evals);
    }
}
