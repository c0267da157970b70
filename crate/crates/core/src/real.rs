//! Scalar abstraction shared by every closed form in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the physics is written against (f32 or f64).
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a photon number.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("photon number representable")
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduced Planck constant in J s (CODATA 2018, exact by SI definition of h).
pub fn hbar<T: Real>() -> T {
    T::lit(1.054_571_817e-34)
}

/// Pairwise (cascade) summation; the reduction tree depends only on the
/// slice length, so results are reproducible regardless of who calls it.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Relative gap `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_gap<T: Real>(a: T, b: T, floor: T) -> T {
    let scale = a.abs().max(b.abs()).max(floor);
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).abs() / scale
    }
}
