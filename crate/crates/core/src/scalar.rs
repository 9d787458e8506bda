use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Coefficient field for [`Poly`](crate::Poly).
///
/// Division is assumed to be field division: exact for `BigRational`,
/// rounded for the float types.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync
{
    /// Embeds a non-negative integer.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("scalar type cannot represent a small integer")
    }
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Num + Neg<Output = T> + FromPrimitive + Send + Sync
{
}
