//! Scalar abstraction shared by every numeric routine in this crate.

use core::fmt::{Debug, Display};
use core::iter::Sum;
use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library is generic over.
///
/// Algorithms are written once against this trait and instantiated at `f32`
/// or `f64`; the crate root exports concrete double-precision aliases.
/// Random sampling and quantile numerics always run in `f64` and convert at
/// the boundary, so `f32` instantiations lose precision only on storage,
/// never inside the special-function evaluations.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts a finite `f64` into this scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Widens this scalar to `f64` for quantile and special-function work.
    fn wide(self) -> f64 {
        self.to_f64().expect("Real fits in f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
