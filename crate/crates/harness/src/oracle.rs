//! Self checks comparing every closed-form oracle in the toolkit against
//! an independent computation: grid searches, frozen reference tables,
//! and Monte Carlo estimates. Failures are report rows, not errors.

use seldonian_core::bounds::{hoeffding_upper, t_quantile, t_upper};
use seldonian_core::rng::{substream_seed, Stream};
use seldonian_core::stats;
use seldonian_core::synthgen::{gen_illustrative, true_disc_stat, true_mse, IllustrativeParams};
use seldonian_core::baselines::{sample_disc_stat, sample_mse};
use seldonian_core::rl::ToyEnv;

/// One self-check outcome: the measured discrepancy (or rate) and the
/// bound it must satisfy.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
    pub detail: String,
}

impl CheckRow {
    fn within(name: &'static str, measured: f64, bound: f64, detail: String) -> Self {
        CheckRow {
            name,
            passed: measured <= bound,
            measured,
            bound,
            detail,
        }
    }

    fn at_least(name: &'static str, measured: f64, bound: f64, detail: String) -> Self {
        CheckRow {
            name,
            passed: measured >= bound,
            measured,
            bound,
            detail,
        }
    }
}

// Reference quantiles, frozen from an independent implementation at ten
// decimal places.
const T_PROBES: &[(f64, usize, f64)] = &[
    (0.95, 1, 6.3137515148),
    (0.95, 2, 2.9199855804),
    (0.95, 5, 2.0150483733),
    (0.95, 10, 1.8124611228),
    (0.95, 30, 1.6972608866),
    (0.95, 100, 1.6602343261),
    (0.95, 599, 1.6474014447),
    (0.975, 1, 12.7062047364),
    (0.975, 2, 4.3026527297),
    (0.975, 5, 2.5705818356),
    (0.975, 10, 2.2281388520),
    (0.975, 30, 2.0422724563),
    (0.975, 100, 1.9839715184),
    (0.995, 10, 3.1692726726),
    (0.90, 8, 1.3968153097),
    (0.99, 20, 2.5279770027),
    (0.75, 3, 0.7648923284),
    (0.999, 50, 3.2614090558),
];

/// Grid argmin of the analytic MSE must land on (2/3, 0).
pub fn check_bayes_argmin() -> CheckRow {
    let step = 2.5e-4;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut t1 = 0.4;
    while t1 <= 0.9 {
        let mut t2 = -0.15;
        while t2 <= 0.15 {
            let v = true_mse(&[t1, t2]);
            if v < best.0 {
                best = (v, t1, t2);
            }
            t2 += step;
        }
        t1 += step;
    }
    let dist = (best.1 - 2.0 / 3.0).abs().max(best.2.abs());
    CheckRow::within(
        "bayes-argmin-grid",
        dist,
        1e-3,
        format!("grid argmin at ({}, {}), target (2/3, 0)", best.1, best.2),
    )
}

/// The hand-rolled t quantile against the frozen reference table.
pub fn check_t_quantile_probes() -> CheckRow {
    let mut worst = 0.0f64;
    let mut at = (0.0, 0usize);
    for &(p, dof, want) in T_PROBES {
        let err = (t_quantile(p, dof).unwrap() - want).abs();
        if err > worst {
            worst = err;
            at = (p, dof);
        }
    }
    CheckRow::within(
        "t-quantile-probes",
        worst,
        1e-3,
        format!("{} probes, worst at p={} dof={}", T_PROBES.len(), at.0, at.1),
    )
}

/// Hoeffding upper bound must cover the true mean at least 1-delta of
/// the time on bounded iid samples.
pub fn check_hoeffding_coverage(delta: f64, seed: u64) -> CheckRow {
    let reps = 10_000;
    let m = 20;
    let mut stream = Stream::from_seed(substream_seed(seed, 0x484F_4546));
    let mut covered = 0usize;
    let mut z = vec![0.0f64; m];
    for _ in 0..reps {
        for v in z.iter_mut() {
            *v = stream.uniform();
        }
        if hoeffding_upper(&z, 1.0, delta).unwrap() >= 0.5 {
            covered += 1;
        }
    }
    let rate = covered as f64 / reps as f64;
    CheckRow::at_least(
        if delta == 0.05 {
            "hoeffding-coverage-d05"
        } else {
            "hoeffding-coverage-d10"
        },
        rate,
        1.0 - delta,
        format!("{reps} reps of {m} uniform(0,1) samples at delta={delta}"),
    )
}

/// The t upper bound on normal data has exactly 1-delta coverage; the
/// empirical rate must sit within 1.5% of it.
pub fn check_t_coverage(seed: u64) -> CheckRow {
    let reps = 10_000;
    let m = 30;
    let delta = 0.05;
    let mut stream = Stream::from_seed(substream_seed(seed, 0x5443_4F56));
    let mut covered = 0usize;
    let mut z = vec![0.0f64; m];
    for _ in 0..reps {
        for v in z.iter_mut() {
            *v = stream.normal();
        }
        if t_upper(&z, delta).unwrap() >= 0.0 {
            covered += 1;
        }
    }
    let rate = covered as f64 / reps as f64;
    CheckRow::within(
        "t-coverage",
        (rate - (1.0 - delta)).abs(),
        0.015,
        format!("coverage {rate} over {reps} reps of {m} normal samples"),
    )
}

/// Sample statistics of a large synthetic draw against the closed forms.
pub fn check_synthgen_moments(seed: u64) -> Vec<CheckRow> {
    let theta = [2.0 / 3.0, 0.0];
    let d = gen_illustrative::<f64>(IllustrativeParams {
        m: 1_000_000,
        seed: substream_seed(seed, 0x4D4F_4D54),
    });
    let disc_err = (sample_disc_stat(&theta, &d).unwrap() - true_disc_stat(&theta)).abs();
    let mse_err = (sample_mse(&theta, &d) - true_mse(&theta)).abs();
    vec![
        CheckRow::within(
            "synthgen-disc-moment",
            disc_err,
            0.01,
            "sample disc stat vs 2*theta1 - 2 at one million points".into(),
        ),
        CheckRow::within(
            "synthgen-mse-moment",
            mse_err,
            0.02,
            "sample MSE vs closed form at one million points".into(),
        ),
    ]
}

/// Unbiasedness of the count-normalized importance-sampling estimator on
/// a discrete mirror of the continuous setup: five support points, a
/// candidate supported on three of them, and the same
/// `c * mean(w * r over in-support draws)` form. The mean over many
/// replications must match the brute-force expectation within three
/// standard errors.
pub fn check_is_mirror(seed: u64) -> CheckRow {
    let behavior = [0.30, 0.25, 0.20, 0.15, 0.10];
    let candidate = [0.0, 0.5, 0.3, 0.2, 0.0];
    let mean_return = [1.0, 2.0, -1.0, 0.5, 3.0];
    let c: f64 = (0..5).filter(|&p| candidate[p] > 0.0).map(|p| behavior[p]).sum();
    let truth: f64 = (0..5).map(|p| candidate[p] * mean_return[p]).sum();

    let reps = 10_000;
    let m = 25;
    let mut stream = Stream::from_seed(substream_seed(seed, 0x4953_4D52));
    let mut estimates = Vec::with_capacity(reps);
    let mut skipped = 0usize;
    for _ in 0..reps {
        let mut total = 0.0;
        let mut count = 0usize;
        for _ in 0..m {
            let u = stream.uniform();
            let mut p = 0;
            let mut cum = behavior[0];
            while u > cum && p < 4 {
                p += 1;
                cum += behavior[p];
            }
            let r = mean_return[p] + (stream.uniform() - 0.5);
            if candidate[p] > 0.0 {
                total += candidate[p] / behavior[p] * r;
                count += 1;
            }
        }
        if count == 0 {
            // The estimator is undefined without in-support draws; at
            // these probabilities this is a ~1e-10 event per rep.
            skipped += 1;
            continue;
        }
        estimates.push(c * total / count as f64);
    }
    let mean = stats::mean(&estimates);
    let se = stats::sample_std(&estimates) / (estimates.len() as f64).sqrt();
    CheckRow::within(
        "is-mirror-unbiasedness",
        (mean - truth).abs(),
        3.0 * se,
        format!("mean {mean} vs brute force {truth}, se {se}, skipped {skipped}"),
    )
}

/// Monte Carlo episode returns against the toy environment's closed-form
/// expectations, at a mid-ridge policy.
pub fn check_toy_env(seed: u64) -> CheckRow {
    let env = ToyEnv::<f64>::standard();
    let p = env.ridge_policy(0.5);
    let (er, er1) = env.expected_returns(&p);
    let reps = 200_000;
    let mut stream = Stream::from_seed(substream_seed(seed, 0x544F_5945));
    let mut rs = Vec::with_capacity(reps);
    let mut r1s = Vec::with_capacity(reps);
    for _ in 0..reps {
        let e = env.episode(p, &mut stream).expect("ridge policy is admissible");
        rs.push(e.primary);
        r1s.push(e.constraints[0]);
    }
    let n = reps as f64;
    let z_r = (stats::mean(&rs) - er).abs() / (stats::sample_std(&rs) / n.sqrt());
    let z_r1 = (stats::mean(&r1s) - er1).abs() / (stats::sample_std(&r1s) / n.sqrt());
    CheckRow::within(
        "toy-env-returns",
        z_r.max(z_r1),
        4.0,
        format!("max z-score over (r, r1) at {reps} episodes"),
    )
}

/// The full battery.
pub fn oracle_check(seed: u64) -> Vec<CheckRow> {
    let mut rows = vec![check_bayes_argmin(), check_t_quantile_probes()];
    rows.push(check_hoeffding_coverage(0.05, seed));
    rows.push(check_hoeffding_coverage(0.1, seed));
    rows.push(check_t_coverage(seed));
    rows.extend(check_synthgen_moments(seed));
    rows.push(check_is_mirror(seed));
    rows.push(check_toy_env(seed));
    rows
}
