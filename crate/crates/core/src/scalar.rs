//! Coefficient scalars for the cyclotomic arithmetic.

use std::fmt::Debug;
use std::ops::Neg;

use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, NumAssignRef, ToPrimitive};

/// A commutative ring of coefficients.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + NumAssignRef + Neg<Output = Self> + FromPrimitive + ToPrimitive
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Num
        + NumAssignRef
        + Neg<Output = T>
        + FromPrimitive
        + ToPrimitive
{
}

/// Scalars whose `/` is exact field division. Integer types must not
/// implement this: their division truncates.
pub trait FieldScalar: Scalar {}

impl FieldScalar for BigRational {}
impl FieldScalar for Rational64 {}
impl FieldScalar for f64 {}
impl FieldScalar for f32 {}

/// Convenience: embed a machine integer into a scalar.
pub(crate) fn from_i64<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("scalar type cannot represent a small integer")
}
