//! Synthetic two-population regression task with analytic ground truth.
//!
//! The generative model, per point:
//!
//! - type tag `T`: fair coin (0 or 1),
//! - label `Y`: normal with mean `+1` when `T = 0`, `-1` when `T = 1`,
//!   unit variance,
//! - feature `X = Y +` standard normal noise,
//! - emitted feature vector `(x, 1)`, so weights read as (slope, intercept).
//!
//! Because every moment is known in closed form, the true (population)
//! mean squared error and the true discrimination statistic of any linear
//! estimator are available exactly; experiments use them as violation
//! ground truth that no sample-based method could provide.
//!
//! Useful moments, derived from the model and re-checked by Monte Carlo in
//! the test suite: `E[X] = E[Y] = 0`, `E[Y^2] = 2` (unit type means plus
//! unit noise), `E[XY] = E[Y^2] = 2`, `E[X^2] = E[Y^2] + 1 = 3`,
//! `E[Y | T=0] = +1 = -E[Y | T=1]`, and `E[X | T] = E[Y | T]`.

use crate::data::Dataset;
use crate::real::Real;
use crate::rng::Stream;

/// Generation request: sample count and stream seed.
#[derive(Clone, Copy, Debug)]
pub struct IllustrativeParams {
    pub m: usize,
    pub seed: u64,
}

/// Draws `params.m` points of the synthetic task, deterministically per
/// seed. Per point the stream is consumed in a fixed order: one uniform
/// for the type coin, two for the label normal, two for the feature noise
/// normal (five generator words total), so datasets are reproducible bit
/// for bit across platforms and releases.
pub fn gen_illustrative<R: Real>(params: IllustrativeParams) -> Dataset<R> {
    assert!(params.m >= 1, "need at least one sample");
    let mut stream = Stream::from_seed(params.seed);
    let mut d = Dataset::new(2);
    for _ in 0..params.m {
        let t: u8 = if stream.uniform() < 0.5 { 0 } else { 1 };
        let mu = if t == 0 { 1.0 } else { -1.0 };
        let y = mu + stream.normal();
        let x = y + stream.normal();
        d.push_row(&[R::of(x), R::one()], R::of(y), t)
            .expect("generated rows are always valid");
    }
    d
}

/// Population discrimination statistic of the linear estimator
/// `theta = (slope, intercept)`: mean prediction error on type-0 points
/// minus mean prediction error on type-1 points.
///
/// Derivation: the error is `e = slope*X + intercept - Y`, and
/// `E[e | T=t] = slope*E[X|T=t] + intercept - E[Y|T=t]`. With
/// `E[X|T] = E[Y|T] = +/-1` the intercept cancels in the difference and
/// `d(theta) = 2*slope - 2`.
pub fn true_disc_stat<R: Real>(theta: &[R]) -> R {
    assert_eq!(theta.len(), 2, "defined for the two-feature task");
    R::of(2.0) * theta[0] - R::of(2.0)
}

/// Population mean squared error of `theta = (slope, intercept)`.
///
/// Expanding `E[(slope*X + intercept - Y)^2]` with the moments above
/// (`E[X^2] = 3`, `E[XY] = 2`, `E[Y^2] = 2`, `E[X] = E[Y] = 0`) gives
/// `3*slope^2 + intercept^2 - 4*slope + 2`.
pub fn true_mse<R: Real>(theta: &[R]) -> R {
    assert_eq!(theta.len(), 2, "defined for the two-feature task");
    let a = theta[0];
    let c = theta[1];
    R::of(3.0) * a * a + c * c - R::of(4.0) * a + R::of(2.0)
}

/// Weights minimizing the population mean squared error: slope
/// `E[XY]/E[X^2] = 2/3`, intercept 0.
pub fn bayes_optimal<R: Real>() -> [R; 2] {
    [R::of(2.0 / 3.0), R::zero()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let a: Dataset<f64> = gen_illustrative(IllustrativeParams { m: 500, seed: 9 });
        let b: Dataset<f64> = gen_illustrative(IllustrativeParams { m: 500, seed: 9 });
        assert_eq!(a, b);
        let c: Dataset<f64> = gen_illustrative(IllustrativeParams { m: 500, seed: 10 });
        assert_ne!(a, c);
    }

    #[test]
    fn sample_moments_match_the_model() {
        let m = 1_000_000;
        let d: Dataset<f64> = gen_illustrative(IllustrativeParams { m, seed: 123 });
        let frac1 = d.m1() as f64 / m as f64;
        assert!((frac1 - 0.5).abs() < 0.002, "type fraction {frac1}");

        let (mut sy0, mut n0) = (0.0, 0usize);
        let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..d.m() {
            let x = d.x(i)[0];
            let y = d.y(i);
            if d.t(i) == 0 {
                sy0 += y;
                n0 += 1;
            }
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
        }
        let mf = m as f64;
        assert!((sy0 / n0 as f64 - 1.0).abs() < 0.005, "E[Y|T=0]");
        assert!((sx / mf).abs() < 0.01, "E[X]");
        assert!((sxx / mf - 3.0).abs() < 0.02, "E[X^2]");
        assert!((sxy / mf - 2.0).abs() < 0.02, "E[XY]");
        let corr = (sxy / mf - sx / mf * sy / mf)
            / ((sxx / mf - (sx / mf).powi(2)) * (syy / mf - (sy / mf).powi(2))).sqrt();
        // r = Cov(X,Y)/sqrt(Var X Var Y) = 2/sqrt(6).
        assert!((corr - 2.0 / 6.0f64.sqrt()).abs() < 0.005, "corr {corr}");

        // Constant feature comes second.
        assert_eq!(d.x(17)[1], 1.0);
    }

    #[test]
    fn true_disc_stat_hand_values() {
        // Exact where the slope is exactly representable.
        assert_eq!(true_disc_stat(&[1.0, 5.0]), 0.0);
        assert_eq!(true_disc_stat(&[1.0, -3.0]), 0.0);
        assert_eq!(true_disc_stat(&[0.0, 0.0]), -2.0);
        assert_eq!(true_disc_stat(&[0.5, 0.0]), -1.0);
        // Slope 2/3 is not a binary float, so the algebraic value -2/3 is
        // reproduced to within one rounding step of the last bit.
        let at_opt: f64 = true_disc_stat(&bayes_optimal());
        assert!((at_opt - (-2.0 / 3.0)).abs() <= f64::EPSILON);
    }

    #[test]
    fn true_mse_hand_values() {
        assert_eq!(true_mse(&[0.0, 0.0]), 2.0);
        // At the optimum the value is 2 - 4/3 = 2/3.
        let v: f64 = true_mse(&bayes_optimal());
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert!(true_mse(&bayes_optimal::<f64>()) < true_mse(&[1.0, 0.0f64]));
    }

    #[test]
    fn bayes_optimal_minimizes_true_mse() {
        let opt: [f64; 2] = bayes_optimal();
        let base = true_mse(&opt);
        let mut s = Stream::from_seed(55);
        for _ in 0..1000 {
            let probe = [s.uniform_in(-3.0, 3.0), s.uniform_in(-3.0, 3.0)];
            assert!(true_mse(&probe) >= base);
        }
        // Coarse grid plus refinement pins the argmin near (2/3, 0).
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let mut lo = (-2.0, -2.0);
        let mut hi = (2.0, 2.0);
        for _ in 0..4 {
            for i in 0..=40 {
                for j in 0..=40 {
                    let a = lo.0 + (hi.0 - lo.0) * i as f64 / 40.0;
                    let c = lo.1 + (hi.1 - lo.1) * j as f64 / 40.0;
                    let v = true_mse(&[a, c]);
                    if v < best.0 {
                        best = (v, a, c);
                    }
                }
            }
            let span = ((hi.0 - lo.0) / 8.0, (hi.1 - lo.1) / 8.0);
            lo = (best.1 - span.0, best.2 - span.1);
            hi = (best.1 + span.0, best.2 + span.1);
        }
        assert!((best.1 - 2.0 / 3.0).abs() < 1e-3, "slope {}", best.1);
        assert!(best.2.abs() < 1e-3, "intercept {}", best.2);
    }
}
