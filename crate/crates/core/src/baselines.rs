//! Unconstrained comparators: exact least squares and a soft-penalty
//! variant, plus the empirical discrimination statistic they are measured
//! by.

use crate::data::Dataset;
use crate::optimize::{minimize_candidate, Minimum, SearchConfig};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BaselineError {
    #[error("dataset is empty")]
    EmptyData,
    #[error("dataset must contain both point types")]
    MissingType,
    #[error("penalty weight must be nonnegative and finite")]
    InvalidPenalty,
}

/// Mean squared prediction error of `theta` on the dataset.
pub fn sample_mse<R: Real>(theta: &[R], d: &Dataset<R>) -> R {
    assert!(!d.is_empty(), "sample MSE of an empty dataset");
    let mut acc = R::zero();
    for i in 0..d.m() {
        let e = d.predict(theta, i) - d.y(i);
        acc += e * e;
    }
    acc / R::of(d.m() as f64)
}

/// Empirical discrimination statistic: mean prediction error over type-0
/// points minus mean prediction error over type-1 points. Uses every
/// point of each type (no pairing), so it differs from the mean of the
/// paired difference vector whenever the type counts are unequal.
pub fn sample_disc_stat<R: Real>(theta: &[R], d: &Dataset<R>) -> Result<R, BaselineError> {
    if d.m0() == 0 || d.m1() == 0 {
        return Err(BaselineError::MissingType);
    }
    let mut s0 = R::zero();
    let mut s1 = R::zero();
    for i in 0..d.m() {
        let e = d.predict(theta, i) - d.y(i);
        if d.t(i) == 0 {
            s0 += e;
        } else {
            s1 += e;
        }
    }
    Ok(s0 / R::of(d.m0() as f64) - s1 / R::of(d.m1() as f64))
}

/// Least-squares fit with a degeneracy flag.
#[derive(Clone, Debug)]
pub struct LeastSquaresFit<R> {
    pub weights: Vec<R>,
    /// True when the normal equations were rank deficient and the returned
    /// weights come from the damped fallback solve.
    pub rank_deficient: bool,
}

/// Exact normal-equation least squares.
///
/// Accumulates the Gram matrix and right-hand side in `f64` and solves by
/// Gaussian elimination with partial pivoting. A pivot collapsing below
/// `1e-12` of the Gram scale marks the system rank deficient; the solve is
/// then repeated with a tiny ridge term (`1e-8` of scale on the diagonal),
/// which approximates the minimum-norm pseudo-inverse solution, and the
/// result carries `rank_deficient = true` as the warning.
pub fn least_squares<R: Real>(d: &Dataset<R>) -> Result<LeastSquaresFit<R>, BaselineError> {
    if d.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    let w = d.width();
    let mut gram = vec![0.0f64; w * w];
    let mut rhs = vec![0.0f64; w];
    for i in 0..d.m() {
        let xi = d.x(i);
        let yi = d.y(i).wide();
        for j in 0..w {
            let xj = xi[j].wide();
            rhs[j] += xj * yi;
            for k in j..w {
                gram[j * w + k] += xj * xi[k].wide();
            }
        }
    }
    for j in 0..w {
        for k in 0..j {
            gram[j * w + k] = gram[k * w + j];
        }
    }
    let scale = gram
        .iter()
        .fold(0.0f64, |acc, &g| acc.max(g.abs()))
        .max(f64::MIN_POSITIVE);
    match solve_gaussian(&gram, &rhs, w, 1e-12 * scale) {
        Some(sol) => Ok(LeastSquaresFit {
            weights: sol.into_iter().map(R::of).collect(),
            rank_deficient: false,
        }),
        None => {
            let mut damped = gram;
            for j in 0..w {
                damped[j * w + j] += 1e-8 * scale;
            }
            let sol = solve_gaussian(&damped, &rhs, w, 0.0)
                .expect("damped normal equations are positive definite");
            Ok(LeastSquaresFit {
                weights: sol.into_iter().map(R::of).collect(),
                rank_deficient: true,
            })
        }
    }
}

/// Gaussian elimination with partial pivoting; `None` when the best pivot
/// falls to `tol` or below.
fn solve_gaussian(a: &[f64], b: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut v = b.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                m[r * n + col]
                    .abs()
                    .partial_cmp(&m[s * n + col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if m[pivot_row * n + col].abs() <= tol {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                m.swap(col * n + k, pivot_row * n + k);
            }
            v.swap(col, pivot_row);
        }
        for row in col + 1..n {
            let f = m[row * n + col] / m[col * n + col];
            if f != 0.0 {
                for k in col..n {
                    m[row * n + k] -= f * m[col * n + k];
                }
                v[row] -= f * v[col];
            }
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = v[row];
        for k in row + 1..n {
            acc -= m[row * n + k] * x[k];
        }
        x[row] = acc / m[row * n + row];
    }
    Some(x)
}

/// Soft-constrained linear regression: a local minimizer of
/// `sample_mse(theta) + lambda * |sample_disc_stat(theta)|`, found with the
/// shared simplex search (the penalty's kink at zero rules out plain
/// gradient steps). An empty `cfg.initial` starts from the least-squares
/// fit, so with `lambda = 0` the result agrees with `least_squares` up to
/// optimizer tolerance.
pub fn sclr<R: Real>(
    d: &Dataset<R>,
    lambda: R,
    cfg: &SearchConfig<R>,
) -> Result<Minimum<R>, BaselineError> {
    if !lambda.is_finite() || lambda < R::zero() {
        return Err(BaselineError::InvalidPenalty);
    }
    if d.m0() == 0 || d.m1() == 0 {
        return Err(BaselineError::MissingType);
    }
    let init = if cfg.initial.is_empty() {
        least_squares(d)?.weights
    } else {
        cfg.initial.clone()
    };
    let local = cfg.starting_at(init);
    let objective = |theta: &[R]| {
        sample_mse(theta, d)
            + lambda
                * sample_disc_stat(theta, d)
                    .expect("type presence checked above")
                    .abs()
    };
    Ok(minimize_candidate(objective, &local))
}
