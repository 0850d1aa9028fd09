//! Labeled datasets with a binary type tag per point, and the partition
//! step used by every trainer.
//!
//! Storage is dense and row-major so that splitting, shuffling, and the
//! inner estimator loops are bulk memory operations rather than chasing
//! per-point allocations.

use crate::real::Real;
use crate::rng::Stream;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DataError {
    #[error("row {row}: expected {want} features, got {got}")]
    WidthMismatch { row: usize, want: usize, got: usize },
    #[error("row {row}: type tag must be 0 or 1, got {got}")]
    InvalidType { row: usize, got: u8 },
    #[error("row {row}: non-finite feature or label")]
    NonFinite { row: usize },
}

/// One observation: feature vector, regression label, and type tag
/// (0 or 1) marking which of the two point populations it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPoint<R> {
    pub x: Vec<R>,
    pub y: R,
    pub t: u8,
}

/// Dense dataset of labeled points with a fixed feature width.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<R> {
    width: usize,
    xs: Vec<R>,
    ys: Vec<R>,
    ts: Vec<u8>,
    m0: usize,
    m1: usize,
}

impl<R: Real> Dataset<R> {
    /// Empty dataset accepting rows of the given feature width.
    pub fn new(width: usize) -> Self {
        assert!(width > 0, "feature width must be positive");
        Dataset {
            width,
            xs: Vec::new(),
            ys: Vec::new(),
            ts: Vec::new(),
            m0: 0,
            m1: 0,
        }
    }

    pub fn from_points(
        width: usize,
        points: impl IntoIterator<Item = LabeledPoint<R>>,
    ) -> Result<Self, DataError> {
        let mut d = Dataset::new(width);
        for p in points {
            d.push(&p)?;
        }
        Ok(d)
    }

    /// Appends one row, validating width, finiteness, and the type tag.
    pub fn push_row(&mut self, x: &[R], y: R, t: u8) -> Result<(), DataError> {
        let row = self.m();
        if x.len() != self.width {
            return Err(DataError::WidthMismatch {
                row,
                want: self.width,
                got: x.len(),
            });
        }
        if t > 1 {
            return Err(DataError::InvalidType { row, got: t });
        }
        if !y.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(DataError::NonFinite { row });
        }
        self.xs.extend_from_slice(x);
        self.ys.push(y);
        self.ts.push(t);
        if t == 0 {
            self.m0 += 1;
        } else {
            self.m1 += 1;
        }
        Ok(())
    }

    pub fn push(&mut self, p: &LabeledPoint<R>) -> Result<(), DataError> {
        self.push_row(&p.x, p.y, p.t)
    }

    /// Number of rows.
    pub fn m(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    /// Feature width.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Count of type-0 rows.
    pub fn m0(&self) -> usize {
        self.m0
    }

    /// Count of type-1 rows.
    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn x(&self, i: usize) -> &[R] {
        &self.xs[i * self.width..(i + 1) * self.width]
    }

    pub fn y(&self, i: usize) -> R {
        self.ys[i]
    }

    pub fn t(&self, i: usize) -> u8 {
        self.ts[i]
    }

    /// Largest absolute label, used to derive default range bounds for the
    /// Hoeffding-style trainers. Zero on an empty dataset.
    pub fn max_abs_y(&self) -> R {
        self.ys
            .iter()
            .fold(R::zero(), |acc, &y| acc.max(y.abs()))
    }

    /// Linear prediction `dot(theta, x_i)` for row `i`.
    pub fn predict(&self, theta: &[R], i: usize) -> R {
        debug_assert_eq!(theta.len(), self.width);
        self.x(i)
            .iter()
            .zip(theta)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    /// Deterministic prefix split into a candidate partition holding
    /// `round(m * fraction)` rows (clamped so both sides are nonempty) and
    /// a safety partition holding the rest. Row order is preserved, the
    /// partitions are disjoint, and together they exhaust the dataset.
    /// Requires at least two rows.
    pub fn split_prefix(&self, fraction: R) -> (Dataset<R>, Dataset<R>) {
        let m = self.m();
        assert!(m >= 2, "cannot split fewer than two rows");
        let n1 = ((m as f64 * fraction.wide()).round() as usize).clamp(1, m - 1);
        let first = Dataset {
            width: self.width,
            xs: self.xs[..n1 * self.width].to_vec(),
            ys: self.ys[..n1].to_vec(),
            ts: self.ts[..n1].to_vec(),
            m0: self.ts[..n1].iter().filter(|&&t| t == 0).count(),
            m1: self.ts[..n1].iter().filter(|&&t| t == 1).count(),
        };
        let second = Dataset {
            width: self.width,
            xs: self.xs[n1 * self.width..].to_vec(),
            ys: self.ys[n1..].to_vec(),
            ts: self.ts[n1..].to_vec(),
            m0: self.m0 - first.m0,
            m1: self.m1 - first.m1,
        };
        (first, second)
    }

    /// Copy with rows in a seeded random order.
    pub fn shuffled(&self, stream: &mut Stream) -> Dataset<R> {
        let mut perm: Vec<usize> = (0..self.m()).collect();
        stream.shuffle(&mut perm);
        let mut out = Dataset::new(self.width);
        out.xs.reserve(self.xs.len());
        out.ys.reserve(self.ys.len());
        out.ts.reserve(self.ts.len());
        for &i in &perm {
            out.xs.extend_from_slice(self.x(i));
            out.ys.push(self.ys[i]);
            out.ts.push(self.ts[i]);
        }
        out.m0 = self.m0;
        out.m1 = self.m1;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(m: usize) -> Dataset<f64> {
        let mut d = Dataset::new(2);
        for i in 0..m {
            d.push_row(&[i as f64, 1.0], i as f64 * 0.5, (i % 2) as u8)
                .unwrap();
        }
        d
    }

    #[test]
    fn push_validates_rows() {
        let mut d: Dataset<f64> = Dataset::new(2);
        assert_eq!(
            d.push_row(&[1.0], 0.0, 0),
            Err(DataError::WidthMismatch {
                row: 0,
                want: 2,
                got: 1
            })
        );
        assert_eq!(
            d.push_row(&[1.0, 2.0], 0.0, 2),
            Err(DataError::InvalidType { row: 0, got: 2 })
        );
        assert_eq!(
            d.push_row(&[1.0, f64::NAN], 0.0, 0),
            Err(DataError::NonFinite { row: 0 })
        );
        assert!(d.push_row(&[1.0, 2.0], 3.0, 1).is_ok());
        assert_eq!(d.m(), 1);
        assert_eq!(d.m1(), 1);
    }

    #[test]
    fn split_sizes_round_and_clamp() {
        let d = toy(10);
        let (a, b) = d.split_prefix(0.2);
        assert_eq!((a.m(), b.m()), (2, 8));
        // Rounding: 0.25 of 10 rows is 2.5, which rounds to 3.
        let (a, b) = d.split_prefix(0.25);
        assert_eq!((a.m(), b.m()), (3, 7));
        // Clamping keeps both partitions nonempty.
        let (a, b) = d.split_prefix(0.0001);
        assert_eq!((a.m(), b.m()), (1, 9));
        let (a, b) = d.split_prefix(0.9999);
        assert_eq!((a.m(), b.m()), (9, 1));
    }

    #[test]
    fn split_preserves_order_and_content() {
        let d = toy(7);
        let (a, b) = d.split_prefix(0.3);
        assert_eq!(a.m() + b.m(), d.m());
        for i in 0..a.m() {
            assert_eq!(a.x(i), d.x(i));
            assert_eq!(a.y(i), d.y(i));
            assert_eq!(a.t(i), d.t(i));
        }
        for i in 0..b.m() {
            assert_eq!(b.x(i), d.x(a.m() + i));
            assert_eq!(b.y(i), d.y(a.m() + i));
            assert_eq!(b.t(i), d.t(a.m() + i));
        }
        assert_eq!(a.m0() + b.m0(), d.m0());
        assert_eq!(a.m1() + b.m1(), d.m1());
    }

    #[test]
    fn shuffle_preserves_row_multiset() {
        let d = toy(20);
        let mut s = Stream::from_seed(5);
        let p = d.shuffled(&mut s);
        assert_eq!(p.m(), d.m());
        assert_eq!((p.m0(), p.m1()), (d.m0(), d.m1()));
        let key = |d: &Dataset<f64>, i: usize| (d.x(i)[0].to_bits(), d.y(i).to_bits(), d.t(i));
        let mut orig: Vec<_> = (0..d.m()).map(|i| key(&d, i)).collect();
        let mut perm: Vec<_> = (0..p.m()).map(|i| key(&p, i)).collect();
        assert_ne!(orig, perm, "seeded shuffle should move rows");
        orig.sort_unstable();
        perm.sort_unstable();
        assert_eq!(orig, perm);
    }

    #[test]
    fn max_abs_y_scans_labels() {
        let mut d: Dataset<f64> = Dataset::new(1);
        d.push_row(&[0.0], -4.5, 0).unwrap();
        d.push_row(&[0.0], 2.0, 1).unwrap();
        assert_eq!(d.max_abs_y(), 4.5);
    }

    #[test]
    fn predict_is_the_dot_product() {
        let d = toy(3);
        assert_eq!(d.predict(&[2.0, -1.0], 2), 2.0 * 2.0 - 1.0);
    }
}
