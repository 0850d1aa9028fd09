//! Property tests for the structural invariants: partition behavior,
//! label-flip symmetry, bound domination and shrinkage, quantile
//! monotonicity, and the solution-implies-safety contract.

use proptest::prelude::*;

use seldonian_core::baselines::sample_disc_stat;
use seldonian_core::bounds::{hoeffding_upper, predict_hoeffding_upper, predict_t_upper, t_quantile, t_upper};
use seldonian_core::data::Dataset;
use seldonian_core::optimize::SearchConfig;
use seldonian_core::regression::{paired_error_diffs, qndlr, ttest_safety_bound, RegressionOutcome};
use seldonian_core::rl::{box_pdf, overlap_mass, quasi_seldonian_rl, BoxDistribution, EpisodeRecord, RLProblem, ToyEnv};
use seldonian_core::rng::Stream;

/// Rows of (x, y, t) with at least two points of each type, so every
/// pairing-based statistic is defined.
fn rows_with_both_types() -> impl Strategy<Value = Vec<(f64, f64, u8)>> {
    prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, 0u8..2), 8..40).prop_map(|mut rows| {
        rows.push((1.0, 0.5, 0));
        rows.push((-1.0, 0.25, 0));
        rows.push((0.5, -0.75, 1));
        rows.push((2.0, 1.5, 1));
        rows
    })
}

fn dataset(rows: &[(f64, f64, u8)]) -> Dataset<f64> {
    let mut d = Dataset::new(2);
    for &(x, y, t) in rows {
        d.push_row(&[x, 1.0], y, t).unwrap();
    }
    d
}

fn flipped(d: &Dataset<f64>) -> Dataset<f64> {
    let mut out = Dataset::new(d.width());
    for i in 0..d.m() {
        out.push_row(d.x(i), d.y(i), 1 - d.t(i)).unwrap();
    }
    out
}

proptest! {
    #[test]
    fn prefix_split_partitions_the_rows(rows in rows_with_both_types(), f in 0.05f64..0.95) {
        let d = dataset(&rows);
        let (d1, d2) = d.split_prefix(f);
        prop_assert!(d1.m() >= 1 && d2.m() >= 1);
        prop_assert_eq!(d1.m() + d2.m(), d.m());
        let expected = ((d.m() as f64 * f).round() as usize).clamp(1, d.m() - 1);
        prop_assert_eq!(d1.m(), expected);
        prop_assert_eq!(d1.m0() + d2.m0(), d.m0());
        prop_assert_eq!(d1.m1() + d2.m1(), d.m1());
        for i in 0..d.m() {
            let (part, j) = if i < d1.m() { (&d1, i) } else { (&d2, i - d1.m()) };
            prop_assert_eq!(part.x(j), d.x(i));
            prop_assert_eq!(part.y(j), d.y(i));
            prop_assert_eq!(part.t(j), d.t(i));
        }
    }

    #[test]
    fn label_flip_negates_the_disc_stat(rows in rows_with_both_types(),
                                        a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let d = dataset(&rows);
        let theta = [a, b];
        // Swapping the groups swaps the two means, so the difference
        // negates exactly, bit for bit.
        prop_assert_eq!(
            sample_disc_stat(&theta, &flipped(&d)).unwrap(),
            -sample_disc_stat(&theta, &d).unwrap()
        );
        let z: Vec<f64> = paired_error_diffs(&theta, &d).unwrap();
        let zf: Vec<f64> = paired_error_diffs(&theta, &flipped(&d)).unwrap();
        prop_assert_eq!(zf, z.iter().map(|&v| -v).collect::<Vec<_>>());
    }

    #[test]
    fn upper_bounds_dominate_the_sample_mean(z in prop::collection::vec(-4.0f64..4.0, 2..50),
                                             b in 0.0f64..10.0,
                                             delta in 0.001f64..0.5) {
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        prop_assert!(hoeffding_upper(&z, b, delta).unwrap() >= mean);
        // The t width is nonnegative as long as delta stays at or below
        // one half.
        prop_assert!(t_upper(&z, delta).unwrap() >= mean - 1e-12);
    }

    #[test]
    fn predicted_bounds_shrink_with_more_future_data(z in prop::collection::vec(-4.0f64..4.0, 2..50),
                                                     b in 0.1f64..10.0,
                                                     delta in 0.001f64..0.5,
                                                     k in 2usize..2000,
                                                     extra in 1usize..2000) {
        prop_assert!(
            predict_hoeffding_upper(&z, b, delta, k).unwrap()
                >= predict_hoeffding_upper(&z, b, delta, k + extra).unwrap()
        );
        prop_assert!(
            predict_t_upper(&z, delta, k).unwrap()
                >= predict_t_upper(&z, delta, k + extra).unwrap() - 1e-12
        );
    }

    #[test]
    fn t_quantile_is_monotone(p1 in 0.5f64..0.9995, p2 in 0.5f64..0.9995,
                              d1 in 1usize..300, d2 in 1usize..300) {
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        prop_assert!(t_quantile(lo, d1).unwrap() <= t_quantile(hi, d1).unwrap() + 1e-12);
        // Heavier tails at fewer degrees of freedom.
        let (dlo, dhi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let p = 0.5 + 0.499 * lo; // keep p strictly above one half
        prop_assert!(t_quantile(p, dlo).unwrap() >= t_quantile(p, dhi).unwrap() - 1e-9);
    }

    #[test]
    fn box_density_integrates_and_overlap_is_a_probability(
        x0 in -3.0f64..3.0, w0 in 0.1f64..4.0, y0 in -3.0f64..3.0, h0 in 0.1f64..4.0,
        fx in 0.1f64..1.0, fy in 0.1f64..1.0, ox in 0.0f64..0.9, oy in 0.0f64..0.9,
    ) {
        let outer = BoxDistribution::new([x0, y0], [x0 + w0, y0 + h0]).unwrap();
        prop_assert!((outer.volume() * box_pdf(&outer, &[x0 + w0 / 2.0, y0 + h0 / 2.0]) - 1.0).abs() < 1e-12);
        // An inner box placed inside the outer box by construction.
        let iw = fx * w0 * (1.0 - ox);
        let ih = fy * h0 * (1.0 - oy);
        let il = [x0 + ox * w0, y0 + oy * h0];
        let inner = BoxDistribution::new(il, [il[0] + iw, il[1] + ih]).unwrap();
        prop_assert!(outer.contains_box(&inner));
        let c = overlap_mass(&inner, &outer);
        prop_assert!(c > 0.0 && c <= 1.0 + 1e-12);
        prop_assert!((c - inner.volume() / outer.volume()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The refusal contract: whenever the trainer returns weights, the
    /// recomputed held-out safety bound really was within tolerance.
    #[test]
    fn qndlr_solutions_pass_the_recomputed_safety_test(
        rows in rows_with_both_types(),
        eps in 0.01f64..5.0,
        delta in 0.02f64..0.3,
    ) {
        let d = dataset(&rows);
        let cfg = SearchConfig {
            max_evals: 120,
            restarts: 0,
            ..SearchConfig::default()
        };
        if let Ok(RegressionOutcome::Solution(w)) = qndlr(&d, delta, eps, 0.0, None, &cfg) {
            let (_, d2) = d.split_prefix(cfg.d1_fraction);
            prop_assert!(ttest_safety_bound(&w, &d2, delta).unwrap() <= eps);
        }
    }

    #[test]
    fn rl_outcome_survives_positive_return_scaling(seed in 0u64..5000, kappa in 1e-3f64..1e3) {
        let env = ToyEnv::<f64>::standard();
        let problem = RLProblem::new(
            env.admissible.clone(),
            env.tiled_candidates(),
            vec![0.1],
        ).unwrap();
        let mut stream = Stream::from_seed(seed);
        let eps = env.episodes_from(&env.admissible, 60, &mut stream).unwrap();
        let scaled: Vec<EpisodeRecord<f64>> = eps.iter().map(|e| EpisodeRecord {
            policy: e.policy,
            primary: e.primary * kappa,
            constraints: e.constraints.iter().map(|&v| v * kappa).collect(),
        }).collect();
        prop_assert_eq!(
            quasi_seldonian_rl(&eps, &problem).unwrap(),
            quasi_seldonian_rl(&scaled, &problem).unwrap()
        );
    }
}
