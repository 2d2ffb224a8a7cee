//! Scalar abstraction shared by the walk and conductance code.
//!
//! Everything that evaluates probabilities is generic over [`Scalar`], so the
//! same evolution code runs in `f64` for large graphs and in exact
//! [`BigRational`] arithmetic for the small-graph oracle suites.

use std::fmt::Debug;

use num::bigint::BigInt;
use num::{BigRational, FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact; floating types renormalize long
    /// evolutions, exact types never need to.
    const EXACT: bool;

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar")
    }

    fn ratio(num: u64, den: u64) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    /// Converts an `f64` parameter. Exact scalars take the binary value of the
    /// float verbatim, so `1/e` becomes the rational nearest-double of `1/e`.
    fn from_param(x: f64) -> Self {
        Self::from_f64(x).expect("finite parameter")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
}

impl Scalar for f32 {
    const EXACT: bool = false;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Sum of a slice, accumulated left to right.
pub fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |acc, x| acc + x.clone())
}

/// Exact rational `num/den` for small hand-checked values in tests and docs.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
