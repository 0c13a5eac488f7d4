//! Exact finite hypergeometric sums over finite fields and their p-adic
//! counterparts.

pub mod arith;
pub mod charsums;
pub mod cyclo;
pub mod error;
pub mod ff;
pub mod hq;
pub mod padic;
pub mod params;
pub(crate) mod fp_poly;
pub mod scalar;
pub mod verify;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

pub use cyclo::Cyclotomic;
pub use error::{Error, Result};
pub use scalar::{FieldScalar, Scalar};

/// Exact element of a cyclotomic field.
pub type CycloNum = Cyclotomic<BigRational>;
/// Element of the ring of integers `Z[zeta_N]`.
pub type CycloInt = Cyclotomic<BigInt>;
/// Small-height cyclotomic element with machine-word rationals.
pub type CycloNum64 = Cyclotomic<Rational64>;
/// Floating-point cyclotomic element, for diagnostics only.
pub type CycloF64 = Cyclotomic<f64>;
