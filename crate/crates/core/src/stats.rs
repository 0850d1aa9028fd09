//! Sample moments used by the confidence bounds.

use crate::real::Real;

/// Arithmetic mean. Panics on an empty slice; callers validate emptiness
/// and report it as a typed error before reaching this point.
pub fn mean<R: Real>(xs: &[R]) -> R {
    assert!(!xs.is_empty(), "mean of empty sample");
    xs.iter().copied().sum::<R>() / R::of(xs.len() as f64)
}

/// Unbiased sample variance (denominator `m - 1`). Requires `m >= 2`.
pub fn sample_var<R: Real>(xs: &[R]) -> R {
    assert!(xs.len() >= 2, "sample variance needs at least two points");
    let mu = mean(xs);
    let ss = xs
        .iter()
        .map(|&x| {
            let d = x - mu;
            d * d
        })
        .sum::<R>();
    ss / R::of((xs.len() - 1) as f64)
}

/// Sample standard deviation with the `m - 1` denominator. Requires `m >= 2`.
pub fn sample_std<R: Real>(xs: &[R]) -> R {
    sample_var(xs).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mean_of_constants() {
        assert_eq!(mean(&[2.0, 2.0, 2.0]), 2.0);
    }

    #[test]
    fn variance_uses_bessel_denominator() {
        // var([1, 3]) = ((1-2)^2 + (3-2)^2) / (2 - 1) = 2
        assert_relative_eq!(sample_var(&[1.0, 3.0]), 2.0);
        assert_relative_eq!(sample_std(&[1.0, 3.0]), 2.0f64.sqrt());
    }

    #[test]
    fn variance_is_translation_invariant() {
        let a = [0.3, -1.2, 2.7, 0.0, 5.5];
        let b: Vec<f64> = a.iter().map(|x| x + 100.0).collect();
        assert_relative_eq!(sample_var(&a), sample_var(&b), epsilon = 1e-9);
    }
}
